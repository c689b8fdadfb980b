use rayon::prelude::*;

use crate::pointgen::{ProjectivePointSet, SphericalPointSet, Vec3};
use crate::sum::Compensated;
use crate::{Error, Result};

use super::constants::W_LOG_RP2;

// Squared distances or sines below this are treated as coincidences.
const COINCIDENCE: f64 = 1e-30;

// Σ_{i<j} kernel(x_i, x_j), each row compensated, rows merged in index order.
fn pair_sum(points: &[Vec3], kernel: impl Fn(&Vec3, &Vec3) -> Option<f64> + Sync) -> Result<f64> {
    let n = points.len();
    let rows: Vec<Result<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = Compensated::default();
            for j in i + 1..n {
                match kernel(&points[i], &points[j]) {
                    Some(v) => acc.add(v),
                    None => return Err(Error::Coincident { i, j }),
                }
            }
            Ok(acc.value())
        })
        .collect();
    let mut total = Compensated::default();
    for row in rows {
        total.add(row?);
    }
    Ok(total.value())
}

/// `Σ_{i≠j} log ‖x_i − x_j‖⁻¹` over raw points.
pub fn log_energy_of(points: &[Vec3]) -> Result<f64> {
    let half = pair_sum(points, |x, y| {
        let d = [x[0] - y[0], x[1] - y[1], x[2] - y[2]];
        let d2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
        (d2 >= COINCIDENCE).then(|| -0.5 * d2.ln())
    })?;
    Ok(2.0 * half)
}

/// Spherical logarithmic energy (ordered pairs).
pub fn pairwise_log_energy(s: &SphericalPointSet) -> Result<f64> {
    log_energy_of(&s.points)
}

/// `−Σ_{i≠j} log √(1 − ⟨x_i, x_j⟩²)` over raw representatives.
pub fn projective_energy_of(reps: &[Vec3]) -> Result<f64> {
    let half = pair_sum(reps, |x, y| {
        let c = x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
        let s2 = (1.0 - c * c).clamp(0.0, 1.0);
        (s2 >= COINCIDENCE).then(|| -0.5 * s2.ln())
    })?;
    Ok(2.0 * half)
}

/// Projective logarithmic energy with the chordal distance `√(1 − ⟨x, y⟩²)`.
pub fn pairwise_projective_energy(s: &ProjectivePointSet) -> Result<f64> {
    projective_energy_of(&s.representatives)
}

/// Green energy of `n` projective points with logarithmic energy `e_log`:
/// `(e_log − n(n−1)·W_log(RP²)) / 2π`.
pub fn green_energy_projective(e_log: f64, n: i64) -> f64 {
    let nf = n as f64;
    (e_log - nf * (nf - 1.0) * W_LOG_RP2) / std::f64::consts::TAU
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, LN_2};

    #[test]
    fn poles() {
        let s = SphericalPointSet::from_points(vec![[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]]);
        assert!((pairwise_log_energy(&s).unwrap() + 2.0 * LN_2).abs() < 1e-15);
    }

    #[test]
    fn equilateral_triangle() {
        let pts = (0..3)
            .map(|k| {
                let a = std::f64::consts::TAU * k as f64 / 3.0;
                [a.cos(), a.sin(), 0.0]
            })
            .collect();
        let e = pairwise_log_energy(&SphericalPointSet::from_points(pts)).unwrap();
        assert!((e + 3.0 * 3f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn coincident_points_fail() {
        let s = SphericalPointSet::from_points(vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]]);
        assert_eq!(pairwise_log_energy(&s), Err(Error::Coincident { i: 0, j: 2 }));
    }

    #[test]
    fn projective_examples() {
        let orth = ProjectivePointSet::from_points(vec![[0.0, 0.0, 1.0], [1.0, 0.0, 0.0]]);
        assert_eq!(pairwise_projective_energy(&orth).unwrap(), 0.0);
        let diag = ProjectivePointSet::from_points(vec![[0.0, 0.0, 1.0], [FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2]]);
        assert!((pairwise_projective_energy(&diag).unwrap() - LN_2).abs() < 1e-15);
        let same = ProjectivePointSet::from_points(vec![[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]]);
        assert!(matches!(pairwise_projective_energy(&same), Err(Error::Coincident { .. })));
        assert_eq!(pairwise_projective_energy(&ProjectivePointSet::from_points(vec![[1.0, 0.0, 0.0]])), Ok(0.0));
    }

    #[test]
    fn green_examples() {
        assert_eq!(green_energy_projective(0.0, 1), 0.0);
        let g = green_energy_projective(LN_2, 2);
        let expected = (LN_2 - 2.0 * (1.0 - LN_2)) / std::f64::consts::TAU;
        assert!((g - expected).abs() < 1e-16);
        assert!((g - 0.012_643_5).abs() < 1e-7);
        let n = 37;
        assert!(green_energy_projective((n * (n - 1)) as f64 * (1.0 - LN_2), n).abs() < 1e-12);
    }
}
