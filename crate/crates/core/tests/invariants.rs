use std::f64::consts::TAU;

use diamond_core::{
    antipodal_expected_energy, cap_deficit, discrepancy_estimate, discrepancy_exact, draw_phases,
    expected_energy_closed, generate_antipodal, generate_projective, generate_sphere,
    pairwise_log_energy, pairwise_projective_energy, projective_expected_energy,
    projective_heights, qgde_profile, solve_qgde, solve_qpgde, spherical_heights, Profile,
    SphericalPointSet, Vec3,
};
use proptest::prelude::*;

fn qgde(n: i64) -> Profile {
    qgde_profile(solve_qgde(n).unwrap()).unwrap()
}

// Rotation by Euler angles (z, y, z).
fn rotation(a: f64, b: f64, c: f64) -> [[f64; 3]; 3] {
    let rz = |t: f64| [[t.cos(), -t.sin(), 0.0], [t.sin(), t.cos(), 0.0], [0.0, 0.0, 1.0]];
    let ry = |t: f64| [[t.cos(), 0.0, t.sin()], [0.0, 1.0, 0.0], [-t.sin(), 0.0, t.cos()]];
    let mul = |x: [[f64; 3]; 3], y: [[f64; 3]; 3]| {
        let mut out = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = (0..3).map(|k| x[i][k] * y[k][j]).sum();
            }
        }
        out
    };
    mul(rz(a), mul(ry(b), rz(c)))
}

fn apply(m: &[[f64; 3]; 3], pts: &[Vec3]) -> Vec<Vec3> {
    pts.iter()
        .map(|p| {
            let row = |r: &[f64; 3]| r[0] * p[0] + r[1] * p[1] + r[2] * p[2];
            [row(&m[0]), row(&m[1]), row(&m[2])]
        })
        .collect()
}

// Mean and standard error of `sample(seed)` over `draws` seeds.
fn mean_and_se(draws: u64, mut sample: impl FnMut(u64) -> f64) -> (f64, f64) {
    let xs: Vec<f64> = (0..draws).map(&mut sample).collect();
    let mean = xs.iter().sum::<f64>() / draws as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (draws - 1) as f64;
    (mean, (var / draws as f64).sqrt())
}

#[test]
fn antipodal_expectation_matches_monte_carlo() {
    for n in [241, 500] {
        let p = qgde(n);
        let expected = antipodal_expected_energy(p.counts(), &spherical_heights(&p)).unwrap();
        let (mean, se) = mean_and_se(3000, |seed| {
            pairwise_log_energy(&generate_antipodal(&p, &draw_phases(seed, p.m())).unwrap()).unwrap()
        });
        assert!(((mean - expected) / se).abs() < 4.0, "N={n}: {mean} vs {expected} (se {se})");
    }
    // locking the southern phases shifts the mean when parallels sit near the equator
    let p = qgde(241);
    let z = spherical_heights(&p);
    let shift = antipodal_expected_energy(p.counts(), &z).unwrap() - expected_energy_closed(p.counts(), &z).unwrap();
    assert!((shift - 4.419e-4).abs() < 1e-6, "{shift}");
}

#[test]
fn projective_expectation_matches_monte_carlo() {
    for n in [121, 400, 777] {
        let (_, p) = solve_qpgde(n).unwrap();
        let expected = projective_expected_energy(&p).unwrap();
        let (mean, se) = mean_and_se(3000, |seed| {
            pairwise_projective_energy(&generate_projective(&p, &draw_phases(seed, p.m())).unwrap()).unwrap()
        });
        assert!(((mean - expected) / se).abs() < 4.0, "N={n}: {mean} vs {expected} (se {se})");
        assert!(projective_heights(&p).unwrap().len() == p.m());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn energy_is_rotation_invariant(n in 241i64..2000, seed in any::<u64>(), a in 0.0..TAU, b in 0.0..TAU, c in 0.0..TAU) {
        let p = qgde(n);
        let s = generate_sphere(&p, &draw_phases(seed, 2 * p.m() - 1)).unwrap();
        let rotated = SphericalPointSet::from_points(apply(&rotation(a, b, c), &s.points));
        let e0 = pairwise_log_energy(&s).unwrap();
        let e1 = pairwise_log_energy(&rotated).unwrap();
        prop_assert!(((e0 - e1) / e0).abs() < 1e-10);
    }

    #[test]
    fn exact_discrepancy_is_rotation_invariant(size in 4usize..40, seed in any::<u64>(), a in 0.0..TAU, b in 0.0..TAU, c in 0.0..TAU) {
        let p = qgde(241);
        let s = generate_sphere(&p, &draw_phases(seed, 2 * p.m() - 1)).unwrap();
        let pts: Vec<Vec3> = (0..size).map(|i| s.points[i * s.len() / size]).collect();
        let d0 = discrepancy_exact(&SphericalPointSet::from_points(pts.clone())).unwrap().value;
        let d1 = discrepancy_exact(&SphericalPointSet::from_points(apply(&rotation(a, b, c), &pts))).unwrap().value;
        prop_assert!((d0 - d1).abs() < 1e-9, "{} vs {}", d0, d1);
    }

    #[test]
    fn discrepancy_bounds(n in 241i64..3000, seed in any::<u64>(), k in 1usize..200) {
        let p = qgde(n);
        let s = generate_sphere(&p, &draw_phases(seed, 2 * p.m() - 1)).unwrap();
        let r = discrepancy_estimate(&s, k, seed).unwrap();
        prop_assert!(r.value >= 0.0 && r.value <= 1.0);
        // an equator-aligned hemisphere already sees the equator count
        prop_assert!(r.value >= p.equator() as f64 / (2.0 * n as f64) - 1e-12);
        prop_assert!((cap_deficit(&s, &r.witness) - r.value).abs() < 1e-12);
    }
}
