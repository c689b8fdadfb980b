//! Point sets on `S²` and `RP²` built from a profile, its height ladder and
//! a phase per parallel.
//!
//! Spherical parallels are indexed `0..=2M`: `0` is the north pole, `M` the
//! equator and `2M` the south pole. Parallel `2M - j` mirrors parallel `j`
//! with height `-z_j`.
//!
//! Phases come from [`draw_phases`], which uses ChaCha20 (`rand_chacha`)
//! seeded with `seed_from_u64`; each phase is `2π·u` with
//! `u = (next_u64 >> 11)·2⁻⁵³`. The stream is stable across platforms.

use std::f64::consts::{PI, TAU};

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::ladder::{projective_heights, spherical_heights, HeightLadder};
use crate::profile::Profile;
use crate::{Error, Result};

pub type Vec3 = [f64; 3];

/// One rotation angle per parallel, each in `[0, 2π)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseAssignment {
    pub thetas: Vec<f64>,
    pub seed: Option<u64>,
}

impl PhaseAssignment {
    /// Explicit phases; every angle is reduced into `[0, 2π)`.
    pub fn explicit(thetas: Vec<f64>) -> Self {
        let thetas = thetas.into_iter().map(reduce_angle).collect();
        PhaseAssignment { thetas, seed: None }
    }

    pub fn zeros(count: usize) -> Self {
        PhaseAssignment { thetas: vec![0.0; count], seed: None }
    }

    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }
}

/// Uniform unit float in `[0, 1)` from the top 53 bits of a `u64`.
pub(crate) fn unit_f64(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

pub(crate) fn seeded_rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// `count` phases drawn uniformly from `[0, 2π)`; deterministic in `seed`.
pub fn draw_phases(seed: u64, count: usize) -> PhaseAssignment {
    let mut rng = seeded_rng(seed);
    let thetas = (0..count).map(|_| reduce_angle(TAU * unit_f64(&mut rng))).collect();
    PhaseAssignment { thetas, seed: Some(seed) }
}

fn reduce_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Spherical points with the parallel each one sits on.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalPointSet {
    pub points: Vec<Vec3>,
    pub parallel_index: Vec<usize>,
}

impl SphericalPointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Bare points without bookkeeping (parallel indices are all 0).
    pub fn from_points(points: Vec<Vec3>) -> Self {
        let parallel_index = vec![0; points.len()];
        SphericalPointSet { points, parallel_index }
    }
}

/// Line representatives in `RP²`: unit vectors in the closed upper
/// hemisphere, equator points restricted to polar angles in `[0, π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectivePointSet {
    pub representatives: Vec<Vec3>,
    pub parallel_index: Vec<usize>,
}

impl ProjectivePointSet {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    pub fn from_points(representatives: Vec<Vec3>) -> Self {
        let parallel_index = vec![0; representatives.len()];
        ProjectivePointSet { representatives, parallel_index }
    }
}

fn polygon(out: &mut Vec<Vec3>, r: i64, height: f64, one_minus: f64, one_plus: f64, theta: f64) {
    // sqrt(1 - z²) from the exact factors avoids cancellation near the poles
    let rho = (one_minus * one_plus).sqrt();
    for i in 1..=r {
        let angle = reduce_angle(TAU * (i as f64 / r as f64) + theta);
        let (s, c) = angle.sin_cos();
        out.push([rho * c, rho * s, height]);
    }
}

fn check_phases(phases: &PhaseAssignment, expected: usize) -> Result<()> {
    if phases.len() != expected {
        return Err(Error::PhaseCount { expected, got: phases.len() });
    }
    Ok(())
}

// Builds the full sphere, taking the phase of parallel k (1 ≤ k ≤ 2M-1) from `theta`.
fn build_sphere(p: &Profile, ladder: &HeightLadder, theta: impl Fn(usize) -> f64) -> SphericalPointSet {
    let m = p.m();
    let total = p.point_count_sphere() as usize;
    let mut points = Vec::with_capacity(total);
    let mut parallel_index = Vec::with_capacity(total);
    points.push([0.0, 0.0, 1.0]);
    parallel_index.push(0);
    for k in 1..2 * m {
        let (j, sign) = if k <= m { (k, 1.0) } else { (2 * m - k, -1.0) };
        let (one_minus, one_plus) = (ladder.one_minus(j), ladder.one_plus(j));
        let z = sign * ladder.height_f64(j);
        let before = points.len();
        polygon(&mut points, p.r(j), z, one_minus, one_plus, theta(k));
        parallel_index.resize(parallel_index.len() + points.len() - before, k);
    }
    points.push([0.0, 0.0, -1.0]);
    parallel_index.push(2 * m);
    SphericalPointSet { points, parallel_index }
}

/// The generalized Diamond ensemble: poles plus a phased regular polygon on
/// each of the `2M - 1` parallels. `phases` needs `2M - 1` entries.
pub fn generate_sphere(p: &Profile, phases: &PhaseAssignment) -> Result<SphericalPointSet> {
    check_phases(phases, 2 * p.m() - 1)?;
    let ladder = spherical_heights(p);
    Ok(build_sphere(p, &ladder, |k| phases.thetas[k - 1]))
}

/// The antipodal configuration: southern phases are locked to
/// `θ_{2M-j} = θ_j + π`, so `phases` needs `M` entries. With an even
/// equator count the result is closed under `x ↦ -x`.
pub fn generate_antipodal(p: &Profile, phases: &PhaseAssignment) -> Result<SphericalPointSet> {
    let m = p.m();
    check_phases(phases, m)?;
    let ladder = spherical_heights(p);
    Ok(build_sphere(p, &ladder, |k| {
        if k <= m {
            phases.thetas[k - 1]
        } else {
            phases.thetas[2 * m - k - 1] + PI
        }
    }))
}

/// The projective ensemble: north pole, phased polygons on parallels
/// `1..M-1` at the projective heights, and `r_M / 2` points on the
/// half-equator at angles `2πk / r_M`.
///
/// `phases` has `M` entries; the last one is ignored since the half-equator
/// is not rotated.
pub fn generate_projective(p: &Profile, phases: &PhaseAssignment) -> Result<ProjectivePointSet> {
    let m = p.m();
    let ladder = projective_heights(p)?;
    check_phases(phases, m)?;
    let total = p.point_count_projective()? as usize;
    let mut reps = Vec::with_capacity(total);
    let mut parallel_index = Vec::with_capacity(total);
    reps.push([0.0, 0.0, 1.0]);
    parallel_index.push(0);
    for j in 1..m {
        let before = reps.len();
        let z = ladder.height_f64(j);
        polygon(&mut reps, p.r(j), z, ladder.one_minus(j), ladder.one_plus(j), phases.thetas[j - 1]);
        parallel_index.resize(parallel_index.len() + reps.len() - before, j);
    }
    let rm = p.equator();
    for k in 0..rm / 2 {
        let (s, c) = (TAU * k as f64 / rm as f64).sin_cos();
        reps.push([c, s, 0.0]);
        parallel_index.push(m);
    }
    Ok(ProjectivePointSet { representatives: reps, parallel_index })
}

/// `{ω, -ω}`: every representative followed by its antipode.
pub fn antipodal_double(s: &ProjectivePointSet) -> SphericalPointSet {
    // the equator of a projective set carries its largest parallel index
    let m = s.parallel_index.iter().copied().max().unwrap_or(0);
    let mut points = Vec::with_capacity(2 * s.len());
    let mut parallel_index = Vec::with_capacity(2 * s.len());
    for (x, &k) in s.representatives.iter().zip(&s.parallel_index) {
        points.push(*x);
        points.push([-x[0], -x[1], -x[2]]);
        parallel_index.push(k);
        parallel_index.push(2 * m - k);
    }
    SphericalPointSet { points, parallel_index }
}
