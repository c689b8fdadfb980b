//! Expected energies over uniform independent phases.
//!
//! Three routes compute the same spherical expectation:
//!
//! * [`expected_energy_closed`]: the direct sum over parallels,
//!   ```text
//!   −(N−1)·log 4 − r_M·log r_M − Σ_{j<M} [2·r_j·log r_j
//!       + (N−1)·r_j·((1−z_j)·log(1−z_j) + (1+z_j)·log(1+z_j))]
//!   ```
//! * [`expected_energy_trapezoid`]: the same sum regrouped per profile
//!   segment as endpoint-corrected composite trapezoid rules of
//!   `f(x) = r(x)·log r(x)`, `g(x) = r(x)·(1−z(x))·log(1−z(x))` and
//!   `h(x) = r(x)·(1+z(x))·log(1+z(x))`. Algebraically identical.
//! * [`expected_energy_quadrature`]: trapezoid rules replaced by integrals
//!   plus the `(φ'(b) − φ'(a))/12` end corrections for `g` and `h`. This is
//!   an approximation whose error grows like `n·M·log M`.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::ladder::{height_polynomial, projective_heights, HeightLadder, HeightPolynomial};
use crate::profile::{Profile, Segment};
use crate::sum::Compensated;
use crate::{Error, Result};

/// Absolute tolerance for each of the `f`, `g`, `h` integrals of a segment.
pub const QUADRATURE_TOLERANCE: f64 = 1e-8;

fn xlogx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

// Counts r_1..r_M against a ladder; returns N.
fn check_configuration(r: &[i64], z: &HeightLadder) -> Result<i64> {
    let m = r.len();
    if m == 0 {
        return Err(Error::Mismatch("no parallels".into()));
    }
    if z.len() != m {
        return Err(Error::Mismatch(format!("{m} counts but {} heights", z.len())));
    }
    if let Some(bad) = r.iter().find(|&&v| v < 1) {
        return Err(Error::Mismatch(format!("parallel count {bad} < 1")));
    }
    let n = 2 + r[m - 1] + 2 * r[..m - 1].iter().sum::<i64>();
    if z.denominator() != n - 1 {
        return Err(Error::Mismatch(format!(
            "height denominator {} does not match N - 1 = {}",
            z.denominator(),
            n - 1
        )));
    }
    Ok(n)
}

/// Expected spherical energy of the symmetric configuration with northern
/// counts `r = [r_1, ..., r_M]` (equator last) and heights `z`.
pub fn expected_energy_closed(r: &[i64], z: &HeightLadder) -> Result<f64> {
    let n = check_configuration(r, z)?;
    let m = r.len();
    let nm1 = (n - 1) as f64;
    let mut acc = Compensated::default();
    acc.add(-nm1 * 4f64.ln());
    acc.add(-xlogx(r[m - 1] as f64));
    for j in 1..m {
        let rj = r[j - 1] as f64;
        acc.add(-2.0 * xlogx(rj));
        acc.add(-nm1 * rj * xlogx(z.one_minus(j)));
        acc.add(-nm1 * rj * xlogx(z.one_plus(j)));
    }
    Ok(acc.value())
}

struct SegmentTerms {
    seg: Segment,
    poly: HeightPolynomial,
}

impl SegmentTerms {
    fn r(&self, x: f64) -> f64 {
        self.seg.eval(x)
    }

    fn f(&self, x: f64) -> f64 {
        xlogx(self.r(x))
    }

    fn g(&self, x: f64) -> f64 {
        self.r(x) * xlogx(self.poly.one_minus(x))
    }

    fn h(&self, x: f64) -> f64 {
        self.r(x) * xlogx(self.poly.one_plus(x))
    }

    fn g_prime(&self, x: f64) -> f64 {
        let u = self.poly.one_minus(x);
        let du = -self.poly.derivative(x);
        self.seg.beta as f64 * xlogx(u) + self.r(x) * du * (u.ln() + 1.0)
    }

    fn h_prime(&self, x: f64) -> f64 {
        let v = self.poly.one_plus(x);
        let dv = self.poly.derivative(x);
        self.seg.beta as f64 * xlogx(v) + self.r(x) * dv * (v.ln() + 1.0)
    }

    // Integer range [a, b] = [t_lo + 1, t_hi].
    fn range(&self) -> (i64, i64) {
        (self.seg.t_lo + 1, self.seg.t_hi)
    }
}

fn segment_terms(p: &Profile) -> Result<Vec<SegmentTerms>> {
    (0..p.n())
        .map(|l| Ok(SegmentTerms { seg: p.segments()[l], poly: height_polynomial(p, l)? }))
        .collect()
}

/// Composite trapezoid rule `T_[a,b](φ) = (φ(a) + φ(b))/2 + Σ_{a<j<b} φ(j)`;
/// zero on a degenerate interval.
fn trapezoid(phi: impl Fn(f64) -> f64, a: i64, b: i64) -> f64 {
    if a >= b {
        return 0.0;
    }
    let mut acc = Compensated::default();
    acc.add(0.5 * (phi(a as f64) + phi(b as f64)));
    for j in a + 1..b {
        acc.add(phi(j as f64));
    }
    acc.value()
}

fn endpoint_mean(phi: impl Fn(f64) -> f64, a: i64, b: i64) -> f64 {
    0.5 * (phi(a as f64) + phi(b as f64))
}

/// Expected spherical energy via per-segment trapezoid sums; equal to
/// [`expected_energy_closed`] up to rounding.
pub fn expected_energy_trapezoid(p: &Profile) -> Result<f64> {
    let nm1 = (p.point_count_sphere() - 1) as f64;
    let mut acc = Compensated::default();
    acc.add(-nm1 * 4f64.ln());
    acc.add(-xlogx(p.equator() as f64));
    for s in segment_terms(p)? {
        let (a, b) = s.range();
        let lattice = |phi: &dyn Fn(f64) -> f64| endpoint_mean(phi, a, b) + trapezoid(phi, a, b);
        acc.add(-2.0 * lattice(&|x| s.f(x)));
        acc.add(-nm1 * lattice(&|x| s.g(x)));
        acc.add(-nm1 * lattice(&|x| s.h(x)));
    }
    Ok(acc.value())
}

/// Quadrature approximation and its distance to the exact trapezoid value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureEstimate {
    pub value: f64,
    /// `|value − trapezoid| / (n·M·log M)`; zero when `M = 1`.
    pub residual_bound_ratio: f64,
}

// ∫_a^b φ over unit pieces, the absolute tolerance shared between them.
fn integrate(phi: impl Fn(f64) -> f64, a: i64, b: i64) -> Result<f64> {
    if a >= b {
        return Ok(0.0);
    }
    let tol = QUADRATURE_TOLERANCE / (b - a) as f64;
    let mut acc = Compensated::default();
    for k in a..b {
        let (lo, hi) = (k as f64, (k + 1) as f64);
        let out = quadrature::double_exponential::integrate(&phi, lo, hi, tol);
        if out.error_estimate.is_nan() || out.error_estimate > tol || !out.integral.is_finite() {
            return Err(Error::Quadrature { a: lo, b: hi, estimate: out.error_estimate });
        }
        acc.add(out.integral);
    }
    Ok(acc.value())
}

/// Expected spherical energy with lattice sums replaced by integrals and
/// Euler–Maclaurin end corrections.
pub fn expected_energy_quadrature(p: &Profile) -> Result<QuadratureEstimate> {
    let nm1 = (p.point_count_sphere() - 1) as f64;
    let mut acc = Compensated::default();
    acc.add(-nm1 * 4f64.ln());
    acc.add(-xlogx(p.equator() as f64));
    for s in segment_terms(p)? {
        let (a, b) = s.range();
        let (af, bf) = (a as f64, b as f64);
        let f_part = endpoint_mean(|x| s.f(x), a, b) + integrate(|x| s.f(x), a, b)?;
        let g_part = endpoint_mean(|x| s.g(x), a, b)
            + (s.g_prime(bf) - s.g_prime(af)) / 12.0
            + integrate(|x| s.g(x), a, b)?;
        let h_part = endpoint_mean(|x| s.h(x), a, b)
            + (s.h_prime(bf) - s.h_prime(af)) / 12.0
            + integrate(|x| s.h(x), a, b)?;
        acc.add(-2.0 * f_part);
        acc.add(-nm1 * g_part);
        acc.add(-nm1 * h_part);
    }
    let value = acc.value();
    let diff = (value - expected_energy_trapezoid(p)?).abs();
    let m = p.m() as f64;
    let scale = p.n() as f64 * m * m.ln();
    let residual_bound_ratio = if scale > 0.0 { diff / scale } else { 0.0 };
    Ok(QuadratureEstimate { value, residual_bound_ratio })
}

/// Exact cross energy between `r` equally spaced points at height `z` and
/// their antipodes, `−2·Σ_{i,k} log ‖x_i + x_k‖ = −2r·log((1+z)^r − (z−1)^r)`,
/// for any phase.
pub fn parallel_pair_energy(r: i64, z: f64) -> Result<f64> {
    if r < 1 {
        return Err(Error::InvalidArgument(format!("r = {r} must be positive")));
    }
    if !(0.0..1.0).contains(&z) {
        return Err(Error::InvalidArgument(format!("z = {z} outside [0, 1)")));
    }
    let w = one_minus_ratio_power(r, 1.0 - z, 1.0 + z);
    if w <= 0.0 {
        return Err(Error::InfiniteEnergy(format!(
            "{r} points on the equator include antipodal pairs"
        )));
    }
    let rf = r as f64;
    Ok(-2.0 * rf * (rf * z.ln_1p() + w.ln()))
}

// 1 − ((z−1)/(z+1))^r with u = 1 − z, v = 1 + z.
fn one_minus_ratio_power(r: i64, u: f64, v: f64) -> f64 {
    let magnitude = (r as f64 * (u / v).ln()).exp();
    if r % 2 == 0 {
        1.0 - magnitude
    } else {
        1.0 + magnitude
    }
}

/// `−2·Σ_{j<M} r_j·log(1 − ((z_j−1)/(z_j+1))^{r_j})`: the change in expected
/// energy when southern phases are locked to `θ_j + π`.
pub fn antipodal_correction(r: &[i64], z: &HeightLadder) -> Result<f64> {
    check_configuration(r, z)?;
    let mut acc = Compensated::default();
    for j in 1..r.len() {
        let w = one_minus_ratio_power(r[j - 1], z.one_minus(j), z.one_plus(j));
        acc.add(-2.0 * r[j - 1] as f64 * w.ln());
    }
    Ok(acc.value())
}

/// Expected spherical energy of the antipodal configuration over
/// `θ_1, ..., θ_M`.
pub fn antipodal_expected_energy(r: &[i64], z: &HeightLadder) -> Result<f64> {
    Ok(expected_energy_closed(r, z)? + antipodal_correction(r, z)?)
}

/// Expected projective energy of the ensemble of `p`:
/// `½·E[antipodal energy of the 2N doubled points] + N²·log 2`.
pub fn projective_expected_energy(p: &Profile) -> Result<f64> {
    let ladder = projective_heights(p)?;
    let n = p.point_count_projective()? as f64;
    Ok(0.5 * antipodal_expected_energy(p.counts(), &ladder)? + n * n * LN_2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ladder::spherical_heights;
    use crate::profile::{build_profile, qgde_profile, solve_qgde};

    fn spherical_closed(p: &Profile) -> Result<f64> {
        expected_energy_closed(p.counts(), &spherical_heights(p))
    }

    fn toy() -> Profile {
        build_profile(vec![Segment::new(0, 1, 0, 3), Segment::new(1, 2, 0, 3)], 2).unwrap()
    }

    fn qgde(n: i64) -> Profile {
        qgde_profile(solve_qgde(n).unwrap()).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    // −13·log 4 − 6·log 6 − 6·log 3 − 12·log(4/13) − 66·log(22/13)
    fn toy_by_hand() -> f64 {
        let l = f64::ln;
        -13.0 * l(4.0) - 6.0 * l(6.0) - 6.0 * l(3.0) - 12.0 * l(4.0 / 13.0) - 66.0 * l(22.0 / 13.0)
    }

    #[test]
    fn toy_closed_form() {
        let p = toy();
        let e = spherical_closed(&p).unwrap();
        assert!((e - toy_by_hand()).abs() < 1e-12);
        assert!((e + 55.94).abs() < 0.01);
        assert!(rel(expected_energy_trapezoid(&p).unwrap(), e) < 1e-12);
    }

    #[test]
    fn equator_only() {
        let p = build_profile(vec![Segment::new(0, 1, 0, 5)], 1).unwrap();
        let z = spherical_heights(&p);
        let e = expected_energy_closed(p.counts(), &z).unwrap();
        assert!((e - (-6.0 * 4f64.ln() - 5.0 * 5f64.ln())).abs() < 1e-12);
        assert_eq!(antipodal_correction(p.counts(), &z), Ok(0.0));
        assert_eq!(expected_energy_trapezoid(&p), Ok(e));
        assert_eq!(expected_energy_quadrature(&p).unwrap().residual_bound_ratio, 0.0);
    }

    #[test]
    fn closed_form_rejects_mismatched_ladder() {
        let z = spherical_heights(&toy());
        assert!(matches!(expected_energy_closed(&[3, 6, 6], &z), Err(Error::Mismatch(_))));
        assert!(matches!(expected_energy_closed(&[3, 8], &z), Err(Error::Mismatch(_))));
        assert!(matches!(expected_energy_closed(&[0, 6], &z), Err(Error::Mismatch(_))));
    }

    #[test]
    fn trapezoid_matches_closed_form() {
        for n in [241, 242, 1000, 1001, 1002, 4567, 10007, 100003] {
            let p = qgde(n);
            let c = spherical_closed(&p).unwrap();
            assert!(rel(expected_energy_trapezoid(&p).unwrap(), c) < 1e-9, "N = {n}");
        }
    }

    #[test]
    fn pair_energy_examples() {
        assert!((parallel_pair_energy(1, 0.5).unwrap() + 2.0 * LN_2).abs() < 1e-14);
        assert!((parallel_pair_energy(2, 0.5).unwrap() + 4.0 * LN_2).abs() < 1e-14);
        assert!(matches!(parallel_pair_energy(2, 0.0), Err(Error::InfiniteEnergy(_))));
        // odd r on the equator has no antipodal coincidences
        assert!((parallel_pair_energy(3, 0.0).unwrap() + 6.0 * LN_2).abs() < 1e-14);
        assert!(parallel_pair_energy(0, 0.5).is_err());
        assert!(parallel_pair_energy(3, 1.0).is_err());
    }

    // Brute force over the polygon and its antipodal image at phase `theta`.
    fn pair_energy_brute(r: i64, z: f64, theta: f64) -> f64 {
        let rho = (1.0 - z * z).sqrt();
        let pts: Vec<[f64; 3]> = (0..r)
            .map(|i| {
                let a = std::f64::consts::TAU * i as f64 / r as f64 + theta;
                [rho * a.cos(), rho * a.sin(), z]
            })
            .collect();
        let mut acc = Compensated::default();
        for x in &pts {
            for y in &pts {
                let d2 = (x[0] + y[0]).powi(2) + (x[1] + y[1]).powi(2) + (x[2] + y[2]).powi(2);
                acc.add(-d2.ln());
            }
        }
        acc.value()
    }

    #[test]
    fn pair_energy_matches_brute_force() {
        for r in 1..=40 {
            for k in 1..=9 {
                let z = k as f64 / 10.0;
                let closed = parallel_pair_energy(r, z).unwrap();
                for theta in [0.0, 0.3, 2.0] {
                    assert!(rel(pair_energy_brute(r, z, theta), closed) < 1e-9, "r={r} z={z}");
                }
            }
        }
    }

    #[test]
    fn toy_antipodal_correction() {
        let p = toy();
        let z = spherical_heights(&p);
        let corr = antipodal_correction(p.counts(), &z).unwrap();
        let by_hand = -6.0 * (1.0 + 8.0 / 1331.0f64).ln();
        assert!((corr - by_hand).abs() < 1e-15);
        assert!((corr + 0.03596).abs() < 1e-5);
        let e = antipodal_expected_energy(p.counts(), &z).unwrap();
        assert!((e - (toy_by_hand() + by_hand)).abs() < 1e-12);
    }

    #[test]
    fn correction_grows_at_most_linearly() {
        let mut worst: f64 = 0.0;
        for m in 1..=8i64 {
            let p = qgde(239 * m * m + 2);
            let z = spherical_heights(&p);
            let c = antipodal_correction(p.counts(), &z).unwrap();
            worst = worst.max(c.abs() / p.m() as f64);
        }
        // observed B ≈ 6.3e-5
        assert!(worst < 1e-4, "B = {worst}");
    }

    #[test]
    fn projective_toy() {
        let p = toy();
        let e = projective_expected_energy(&p).unwrap();
        let expected = 0.5 * (toy_by_hand() - 6.0 * (1.0 + 8.0 / 1331.0f64).ln()) + 49.0 * LN_2;
        assert!((e - expected).abs() < 1e-12);
    }

    #[test]
    fn quadrature_is_close_to_trapezoid() {
        for m in [1i64, 2, 4, 8] {
            let p = qgde(239 * m * m + 2);
            let q = expected_energy_quadrature(&p).unwrap();
            let t = expected_energy_trapezoid(&p).unwrap();
            assert!(rel(q.value, t) < 1e-3, "m = {m}");
            assert!(q.residual_bound_ratio < 1.0);
        }
    }

    #[test]
    fn empty_integral_is_zero() {
        assert_eq!(integrate(|x| x * x, 4, 4), Ok(0.0));
        assert!((integrate(|x| x * x, 0, 3).unwrap() - 9.0).abs() < 1e-12);
    }
}
