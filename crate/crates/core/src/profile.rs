//! Piecewise-linear parallel-count profiles.
//!
//! A profile `r(x)` assigns to each parallel `1 ≤ j ≤ M` of the northern
//! hemisphere (parallel `M` is the equator) the number of points placed on
//! it. It is stored as a list of integer segments `α + β·x` over half-open
//! intervals `(t_lo, t_hi]` that partition `(0, M]`; the last segment is
//! always the single equator parallel `(M-1, M]`. The southern hemisphere
//! mirrors the northern one, `r(2M - j) = r(j)`.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Smallest cardinality reachable by the quasioptimal spherical family.
pub const MIN_SPHERE_N: i64 = 241;
/// Smallest cardinality reachable by the quasioptimal projective family.
pub const MIN_PROJECTIVE_N: i64 = 121;

/// One linear piece `r(x) = alpha + beta·x` on the integers of `(t_lo, t_hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub t_lo: i64,
    pub t_hi: i64,
    pub alpha: i64,
    pub beta: i64,
}

impl Segment {
    pub fn new(t_lo: i64, t_hi: i64, alpha: i64, beta: i64) -> Self {
        Segment { t_lo, t_hi, alpha, beta }
    }

    /// `alpha + beta·x`, evaluated in floating point.
    pub fn eval(&self, x: f64) -> f64 {
        self.alpha as f64 + self.beta as f64 * x
    }
}

#[derive(Serialize, Deserialize)]
struct ProfileRepr {
    #[serde(rename = "M")]
    m: i64,
    segments: Vec<Segment>,
}

/// A validated profile. Immutable; counts and prefix sums are cached.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ProfileRepr", into = "ProfileRepr")]
pub struct Profile {
    segments: Vec<Segment>,
    // counts[j - 1] = r(j)
    counts: Vec<i64>,
    // prefix[j] = r(1) + ... + r(j), prefix[0] = 0
    prefix: Vec<i64>,
    sphere_count: i64,
}

impl TryFrom<ProfileRepr> for Profile {
    type Error = Error;

    fn try_from(repr: ProfileRepr) -> Result<Self> {
        build_profile(repr.segments, repr.m)
    }
}

impl From<Profile> for ProfileRepr {
    fn from(p: Profile) -> Self {
        ProfileRepr { m: p.m() as i64, segments: p.segments }
    }
}

/// Validates `segments` as a profile on `(0, m]`.
pub fn build_profile(segments: Vec<Segment>, m: i64) -> Result<Profile> {
    let invalid = |msg: String| Err(Error::InvalidProfile(msg));
    if segments.is_empty() {
        return invalid("no segments".into());
    }
    if m < 1 {
        return invalid(format!("M = {m} must be positive"));
    }
    for (idx, s) in segments.iter().enumerate() {
        if s.alpha < 0 || s.beta < 0 {
            return invalid(format!("segment {idx} has a negative coefficient"));
        }
        if s.t_lo >= s.t_hi {
            return invalid(format!("segment {idx} is empty: ({}, {}]", s.t_lo, s.t_hi));
        }
    }
    if segments[0].t_lo != 0 {
        return invalid("first segment must start at 0".into());
    }
    if let Some(w) = segments.windows(2).find(|w| w[0].t_hi != w[1].t_lo) {
        return invalid(format!("gap or overlap at {} / {}", w[0].t_hi, w[1].t_lo));
    }
    let last = segments[segments.len() - 1];
    if last.t_hi != m || last.t_lo != m - 1 {
        return invalid(format!("last segment must be ({}, {m}]", m - 1));
    }
    if segments[0].beta == 0 {
        return invalid("the first segment needs a positive slope".into());
    }

    let mut counts = Vec::with_capacity(m as usize);
    for s in &segments {
        for j in s.t_lo + 1..=s.t_hi {
            let r = s
                .beta
                .checked_mul(j)
                .and_then(|v| v.checked_add(s.alpha))
                .ok_or(Error::Overflow("evaluating r(j)"))?;
            if r < 1 {
                return invalid(format!("r({j}) = {r} < 1"));
            }
            counts.push(r);
        }
    }
    let mut prefix = Vec::with_capacity(counts.len() + 1);
    prefix.push(0i64);
    for &r in &counts {
        let next = prefix[prefix.len() - 1]
            .checked_add(r)
            .ok_or(Error::Overflow("summing r(j)"))?;
        prefix.push(next);
    }
    let mu = m as usize;
    let sphere_count = prefix[mu - 1]
        .checked_mul(2)
        .and_then(|v| v.checked_add(counts[mu - 1]))
        .and_then(|v| v.checked_add(2))
        .ok_or(Error::Overflow("counting points"))?;

    Ok(Profile { segments, counts, prefix, sphere_count })
}

impl Profile {
    /// Number of parallels in the closed northern hemisphere, equator included.
    pub fn m(&self) -> usize {
        self.counts.len()
    }

    /// Number of segments before the equator segment.
    pub fn n(&self) -> usize {
        self.segments.len() - 1
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// `r(j)` for `1 ≤ j ≤ M`.
    pub fn r(&self, j: usize) -> i64 {
        assert!((1..=self.m()).contains(&j), "parallel {j} outside 1..={}", self.m());
        self.counts[j - 1]
    }

    /// `[r(1), ..., r(M)]`.
    pub fn counts(&self) -> &[i64] {
        &self.counts
    }

    /// `r(1) + ... + r(j)`; `prefix_sum(0) = 0`.
    pub fn prefix_sum(&self, j: usize) -> i64 {
        self.prefix[j]
    }

    /// Equator count `r(M)`.
    pub fn equator(&self) -> i64 {
        self.counts[self.m() - 1]
    }

    /// `C = max_ℓ (α_ℓ / M, β_ℓ, M / t_1)` as an exact rational.
    pub fn associated_constant(&self) -> Ratio<i64> {
        let m = self.m() as i64;
        let t1 = self.segments[0].t_hi;
        self.segments
            .iter()
            .flat_map(|s| [Ratio::new(s.alpha, m), Ratio::from_integer(s.beta)])
            .chain(std::iter::once(Ratio::new(m, t1)))
            .max()
            .expect("at least one segment")
    }

    /// `N = 2 + r(M) + 2·Σ_{j<M} r(j)`: poles, both hemispheres and the equator.
    pub fn point_count_sphere(&self) -> i64 {
        self.sphere_count
    }

    /// `N = 1 + r(M)/2 + Σ_{j<M} r(j)`: one pole, the northern parallels and
    /// a half-equator.
    pub fn point_count_projective(&self) -> Result<i64> {
        let rm = self.equator();
        if rm % 2 != 0 {
            return Err(Error::OddEquator(rm));
        }
        Ok(1 + rm / 2 + self.prefix[self.m() - 1])
    }

    /// Fails unless `r(M)` is even.
    pub(crate) fn require_even_equator(&self) -> Result<()> {
        self.point_count_projective().map(|_| ())
    }
}

/// The quadruple `(m, γ, δ·m, ε)` selecting a quasioptimal profile with `M = 7m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QgdeParams {
    pub m: i64,
    pub gamma: i64,
    pub delta_m: i64,
    pub epsilon: i64,
}

impl QgdeParams {
    pub fn new(m: i64, gamma: i64, delta_m: i64, epsilon: i64) -> Result<Self> {
        let p = QgdeParams { m, gamma, delta_m, epsilon };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        let QgdeParams { m, gamma, delta_m, epsilon } = *self;
        if m < 1 {
            return bad(format!("m = {m} must be positive"));
        }
        if !(0..=800).contains(&gamma) {
            return bad(format!("gamma = {gamma} outside [0, 800]"));
        }
        // The range is [6m, 7m - 1]; for m = 1 this is the single value 6.
        if delta_m < 6 * m || delta_m > 7 * m - 1 {
            return bad(format!("delta_m = {delta_m} outside [{}, {}]", 6 * m, 7 * m - 1));
        }
        if !(-1..=1).contains(&epsilon) {
            return bad(format!("epsilon = {epsilon} outside {{-1, 0, 1}}"));
        }
        Ok(())
    }
}

/// The eight-branch quasioptimal profile with `M = 7m`:
///
/// ```text
/// 6x                  on (0, 2m]
/// 2m + 5x             on (2m, 3m]
/// 5m + 4x             on (3m, 4m]
/// 9m + 3x             on (4m, 5m]
/// 14m + 2x            on (5m, 6m]
/// 20m + x + γ         on (6m, δm]
/// 20m + x + γ + 1     on (δm, 7m - 1]
/// 20m + x + γ + 1 + ε on (7m - 1, 7m]
/// ```
///
/// Empty branches are dropped.
pub fn qgde_profile(params: QgdeParams) -> Result<Profile> {
    params.validate()?;
    let QgdeParams { m, gamma, delta_m, epsilon } = params;
    let branches = [
        (0, 2 * m, 0, 6),
        (2 * m, 3 * m, 2 * m, 5),
        (3 * m, 4 * m, 5 * m, 4),
        (4 * m, 5 * m, 9 * m, 3),
        (5 * m, 6 * m, 14 * m, 2),
        (6 * m, delta_m, 20 * m + gamma, 1),
        (delta_m, 7 * m - 1, 20 * m + gamma + 1, 1),
        (7 * m - 1, 7 * m, 20 * m + gamma + 1 + epsilon, 1),
    ];
    let segments = branches
        .into_iter()
        .filter(|&(lo, hi, _, _)| lo < hi)
        .map(|(lo, hi, a, b)| Segment::new(lo, hi, a, b))
        .collect();
    build_profile(segments, 7 * m)
}

/// Parameters whose quasioptimal profile carries exactly `n` spherical points.
pub fn solve_qgde(n: i64) -> Result<QgdeParams> {
    if n < MIN_SPHERE_N {
        return Err(Error::OutOfDomain { n, min: MIN_SPHERE_N, space: "sphere" });
    }
    let m = ((n - 2) / 239).isqrt();
    let rest = n - 239 * m * m - 2;
    let width = 2 * m - 1;
    let (gamma, eta) = (rest / width, rest % width);
    let (delta_m, epsilon) = if eta == 0 {
        (7 * m - 1, -1)
    } else if eta % 2 == 1 {
        (7 * m - (eta - 1) / 2 - 1, 0)
    } else {
        (7 * m - (eta - 2) / 2 - 1, 1)
    };
    QgdeParams::new(m, gamma, delta_m, epsilon)
}

/// Parameters and profile for `n` projective points: the spherical solution
/// for `2n`, whose even total forces an even equator count.
pub fn solve_qpgde(n: i64) -> Result<(QgdeParams, Profile)> {
    if n < MIN_PROJECTIVE_N {
        return Err(Error::OutOfDomain { n, min: MIN_PROJECTIVE_N, space: "projective" });
    }
    let doubled = n.checked_mul(2).ok_or(Error::Overflow("doubling N"))?;
    let params = solve_qgde(doubled)?;
    let profile = qgde_profile(params)?;
    profile.require_even_equator()?;
    Ok((params, profile))
}
