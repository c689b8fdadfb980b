//! Exact parallel heights.
//!
//! For a profile with `N` spherical points the energy-minimizing heights are
//!
//! ```text
//! z_j = 1 - (1 + r_j + 2·Σ_{k<j} r_k) / (N - 1),    1 ≤ j ≤ M,
//! ```
//!
//! and the projective ladder is the same expression with `2N - 1` in the
//! denominator, `N` being the projective count. Both share a common integer
//! denominator, so heights are stored as integer numerators over it.

use num_rational::Ratio;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::profile::Profile;
use crate::{Error, Result};

/// Heights `z_1 > ... > z_M = 0` as `numerators[j - 1] / denominator`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightLadder {
    numerators: Vec<i64>,
    denominator: i64,
}

impl HeightLadder {
    fn from_profile(p: &Profile, denominator: i64) -> Self {
        let numerators = (1..=p.m())
            .map(|j| denominator - (1 + p.r(j) + 2 * p.prefix_sum(j - 1)))
            .collect();
        HeightLadder { numerators, denominator }
    }

    pub fn len(&self) -> usize {
        self.numerators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numerators.is_empty()
    }

    pub fn denominator(&self) -> i64 {
        self.denominator
    }

    pub fn numerators(&self) -> &[i64] {
        &self.numerators
    }

    /// `z_j` for `1 ≤ j ≤ M`, reduced.
    pub fn height(&self, j: usize) -> Ratio<i64> {
        Ratio::new(self.numerators[j - 1], self.denominator)
    }

    pub fn height_f64(&self, j: usize) -> f64 {
        self.numerators[j - 1] as f64 / self.denominator as f64
    }

    /// `1 - z_j`, computed from the exact numerator.
    pub fn one_minus(&self, j: usize) -> f64 {
        (self.denominator - self.numerators[j - 1]) as f64 / self.denominator as f64
    }

    /// `1 + z_j`, computed from the exact numerator.
    pub fn one_plus(&self, j: usize) -> f64 {
        (self.denominator + self.numerators[j - 1]) as f64 / self.denominator as f64
    }

    pub fn to_f64(&self) -> Vec<f64> {
        (1..=self.len()).map(|j| self.height_f64(j)).collect()
    }
}

impl Serialize for HeightLadder {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry {
            num: i64,
            den: i64,
        }
        let mut seq = serializer.serialize_seq(Some(self.len()))?;
        for j in 1..=self.len() {
            let z = self.height(j);
            seq.serialize_element(&Entry { num: *z.numer(), den: *z.denom() })?;
        }
        seq.end()
    }
}

/// Heights of the spherical ensemble, denominator `N - 1`.
pub fn spherical_heights(p: &Profile) -> HeightLadder {
    HeightLadder::from_profile(p, p.point_count_sphere() - 1)
}

/// Heights of the projective ensemble, denominator `2N - 1` with `N` the
/// projective count. Equal to the spherical heights of the doubled
/// symmetric configuration.
pub fn projective_heights(p: &Profile) -> Result<HeightLadder> {
    let n = p.point_count_projective()?;
    Ok(HeightLadder::from_profile(p, 2 * n - 1))
}

/// The quadratic `z_ℓ(x)` interpolating the ladder on one segment.
///
/// With `t = t_lo`, `N_ℓ = Σ_{j ≤ t} r_j` and `D = N - 1`,
///
/// ```text
/// z_ℓ(x) = 1 - (1 + 2N_ℓ - (α + βx) + 2α(x - t) + β(x + t + 1)(x - t)) / D
///        = 1 - (βx² + 2αx + c) / D,    c = 1 + 2N_ℓ - α - 2αt - βt(t + 1).
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightPolynomial {
    pub segment: usize,
    pub t_lo: i64,
    pub t_hi: i64,
    alpha: i64,
    beta: i64,
    // 1 - z(x) = (beta x^2 + 2 alpha x + c) / den
    c: i64,
    den: i64,
}

impl HeightPolynomial {
    /// Coefficients `[a0, a1, a2]` of `z(x) = a0 + a1·x + a2·x²`.
    pub fn coefficients(&self) -> [Ratio<i64>; 3] {
        [
            Ratio::new(self.den - self.c, self.den),
            Ratio::new(-2 * self.alpha, self.den),
            Ratio::new(-self.beta, self.den),
        ]
    }

    pub fn eval_exact(&self, x: i64) -> Ratio<i64> {
        Ratio::new(self.den - self.numerator(x), self.den)
    }

    fn numerator(&self, x: i64) -> i64 {
        self.beta * x * x + 2 * self.alpha * x + self.c
    }

    fn numerator_f64(&self, x: f64) -> f64 {
        (self.beta as f64 * x + 2.0 * self.alpha as f64) * x + self.c as f64
    }

    pub fn eval(&self, x: f64) -> f64 {
        1.0 - self.one_minus(x)
    }

    /// `1 - z(x)` without cancellation.
    pub fn one_minus(&self, x: f64) -> f64 {
        self.numerator_f64(x) / self.den as f64
    }

    /// `1 + z(x)` without cancellation.
    pub fn one_plus(&self, x: f64) -> f64 {
        (2.0 * self.den as f64 - self.numerator_f64(x)) / self.den as f64
    }

    /// `z'(x)`.
    pub fn derivative(&self, x: f64) -> f64 {
        -(2.0 * self.beta as f64 * x + 2.0 * self.alpha as f64) / self.den as f64
    }
}

/// The height polynomial of segment `segment` (0-based; the equator segment
/// is `p.n()`).
pub fn height_polynomial(p: &Profile, segment: usize) -> Result<HeightPolynomial> {
    let s = *p.segments().get(segment).ok_or_else(|| {
        Error::InvalidArgument(format!("segment {segment} outside 0..={}", p.n()))
    })?;
    let t = s.t_lo;
    let n_l = p.prefix_sum(t as usize);
    let c = 1 + 2 * n_l - s.alpha - 2 * s.alpha * t - s.beta * t * (t + 1);
    Ok(HeightPolynomial {
        segment,
        t_lo: s.t_lo,
        t_hi: s.t_hi,
        alpha: s.alpha,
        beta: s.beta,
        c,
        den: p.point_count_sphere() - 1,
    })
}
