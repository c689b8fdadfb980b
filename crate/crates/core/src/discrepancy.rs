//! Spherical cap discrepancy
//! `D(ω) = sup_{C} |#(ω ∩ C)/N − μ(C)/μ(S²)|` over caps
//! `C(z, t) = {y : ⟨z, y⟩ > t}` with normalized area `(1 − t)/2`.
//!
//! For a fixed center the deficit is piecewise linear in `t` and only jumps
//! where the boundary crosses a point, so a sorted scan of the inner products
//! finds the supremum over `t`; closed caps `⟨z, y⟩ ≥ t` stand in for limits
//! of open ones. Over centers, an extremal cap can be shrunk until its
//! boundary is pinned by one, two or three points, which gives the finite
//! candidate family used by [`discrepancy_exact`].

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::pointgen::{seeded_rng, unit_f64, SphericalPointSet, Vec3};
use crate::{Error, Result};

/// Largest set [`discrepancy_exact`] accepts by default. The candidate
/// family has `O(N³)` members, each scanned in `O(N log N)`.
pub const DEFAULT_EXACT_LIMIT: usize = 200;

// Inner products closer than this are treated as one boundary crossing.
const TIE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cap {
    pub center: Vec3,
    #[serde(rename = "t")]
    pub height: f64,
    /// Count `⟨z, y⟩ ≥ t` instead of `> t`.
    #[serde(default)]
    pub closed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiscrepancyMethod {
    Exact,
    Estimate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyResult {
    pub value: f64,
    pub method: DiscrepancyMethod,
    pub witness: Cap,
}

fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn normalized(v: Vec3) -> Option<Vec3> {
    let n = dot(&v, &v).sqrt();
    (n > 1e-12).then(|| [v[0] / n, v[1] / n, v[2] / n])
}

fn neg(v: &Vec3) -> Vec3 {
    [-v[0], -v[1], -v[2]]
}

/// `|#(ω ∩ C)/N − (1 − t)/2|` for a single cap.
pub fn cap_deficit(s: &SphericalPointSet, cap: &Cap) -> f64 {
    if s.is_empty() {
        return 0.0;
    }
    let inside = s
        .points
        .iter()
        .filter(|y| {
            let d = dot(&cap.center, y);
            if cap.closed {
                d >= cap.height
            } else {
                d > cap.height
            }
        })
        .count();
    (inside as f64 / s.len() as f64 - 0.5 * (1.0 - cap.height)).abs()
}

#[derive(Debug, Clone, Copy)]
struct Best {
    value: f64,
    cap: Cap,
}

impl Best {
    fn key(&self) -> (f64, Vec3, f64, bool) {
        (self.value, self.cap.center, self.cap.height, self.cap.closed)
    }

    // Larger value wins; ties go to the lexicographically larger cap so the
    // merge is independent of evaluation order.
    fn max(self, other: Best) -> Best {
        let (a, b) = (self.key(), other.key());
        let ord = a
            .0
            .total_cmp(&b.0)
            .then_with(|| a.1[0].total_cmp(&b.1[0]))
            .then_with(|| a.1[1].total_cmp(&b.1[1]))
            .then_with(|| a.1[2].total_cmp(&b.1[2]))
            .then_with(|| a.2.total_cmp(&b.2))
            .then_with(|| a.3.cmp(&b.3));
        if ord.is_lt() {
            other
        } else {
            self
        }
    }
}

// Supremum over t of the deficit for caps centered at `center`.
fn scan_center(points: &[Vec3], center: Vec3, buf: &mut Vec<f64>) -> Best {
    let n = points.len() as f64;
    buf.clear();
    buf.extend(points.iter().map(|y| dot(&center, y)));
    buf.sort_unstable_by(|a, b| b.total_cmp(a));

    let full = Cap { center, height: -1.0, closed: true };
    // t = 1 open is empty with zero area; t = -1 closed is everything.
    let mut best = Best { value: (buf.iter().filter(|&&d| d >= -1.0).count() as f64 / n - 1.0).abs(), cap: full };
    let empty = Cap { center, height: 1.0, closed: false };
    let e = buf.iter().filter(|&&d| d > 1.0).count() as f64 / n;
    best = best.max(Best { value: e, cap: empty });

    let mut i = 0;
    while i < buf.len() {
        let mut k = i + 1;
        while k < buf.len() && buf[k - 1] - buf[k] <= TIE {
            k += 1;
        }
        // cluster buf[i..k] sits on the boundary
        let (hi, lo) = (buf[i], buf[k - 1]);
        let closed = Best {
            value: (k as f64 / n - 0.5 * (1.0 - lo)).abs(),
            cap: Cap { center, height: lo, closed: true },
        };
        let open = Best {
            value: (i as f64 / n - 0.5 * (1.0 - hi)).abs(),
            cap: Cap { center, height: hi, closed: false },
        };
        best = best.max(closed).max(open);
        i = k;
    }
    best
}

fn scan_all(points: &[Vec3], centers: &[Vec3]) -> Best {
    centers
        .par_iter()
        .map_init(Vec::new, |buf, &c| scan_center(points, c, buf))
        .reduce_with(Best::max)
        .expect("at least one center")
}

fn pair_centers(points: &[Vec3], i: usize, out: &mut Vec<Vec3>) {
    let a = &points[i];
    for b in &points[i + 1..] {
        for v in [[a[0] + b[0], a[1] + b[1], a[2] + b[2]], cross(a, b)] {
            if let Some(c) = normalized(v) {
                out.push(c);
                out.push(neg(&c));
            }
        }
    }
}

fn triple_centers(points: &[Vec3], i: usize, j: usize, out: &mut Vec<Vec3>) {
    let (a, b) = (&points[i], &points[j]);
    let ab = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    for c in &points[j + 1..] {
        let ac = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
        if let Some(nrm) = normalized(cross(&ab, &ac)) {
            out.push(nrm);
            out.push(neg(&nrm));
        }
    }
}

/// Exact cap discrepancy over the candidate centers: every point and its
/// antipode, `±` the normalized midpoint and cross product of every pair,
/// and `±` the normal of every triple's plane. Limited to `limit` points.
pub fn discrepancy_exact_with_limit(s: &SphericalPointSet, limit: usize) -> Result<DiscrepancyResult> {
    let n = s.len();
    if n > limit {
        return Err(Error::TooManyPoints { n, limit });
    }
    if n == 0 {
        return Err(Error::InvalidArgument("empty point set".into()));
    }
    let pts = &s.points;
    let singles: Vec<Vec3> = pts.iter().flat_map(|p| [*p, neg(p)]).collect();
    let mut best = scan_all(pts, &singles);

    let pairs: Vec<Vec3> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut out = Vec::new();
            pair_centers(pts, i, &mut out);
            out
        })
        .collect();
    if !pairs.is_empty() {
        best = best.max(scan_all(pts, &pairs));
    }

    // triples are scanned per leading pair to bound memory
    let triples = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map_init(
            || (Vec::new(), Vec::new()),
            |(centers, buf), (i, j)| {
                centers.clear();
                triple_centers(pts, i, j, centers);
                centers.iter().map(|&c| scan_center(pts, c, buf)).reduce(Best::max)
            },
        )
        .flatten()
        .reduce_with(Best::max);
    if let Some(t) = triples {
        best = best.max(t);
    }
    Ok(DiscrepancyResult { value: best.value, method: DiscrepancyMethod::Exact, witness: best.cap })
}

/// [`discrepancy_exact_with_limit`] with [`DEFAULT_EXACT_LIMIT`].
pub fn discrepancy_exact(s: &SphericalPointSet) -> Result<DiscrepancyResult> {
    discrepancy_exact_with_limit(s, DEFAULT_EXACT_LIMIT)
}

/// Uniform point on the sphere: `z ~ U[-1, 1)`, `φ ~ U[0, 2π)`.
fn uniform_center(rng: &mut impl rand_core::RngCore) -> Vec3 {
    let z = 2.0 * unit_f64(rng) - 1.0;
    let phi = std::f64::consts::TAU * unit_f64(rng);
    let rho = (1.0 - z * z).max(0.0).sqrt();
    [rho * phi.cos(), rho * phi.sin(), z]
}

/// Lower bound for the discrepancy from a full scan in `t` at every point
/// location plus `n_centers` seeded uniform centers.
pub fn discrepancy_estimate(s: &SphericalPointSet, n_centers: usize, seed: u64) -> Result<DiscrepancyResult> {
    if n_centers == 0 {
        return Err(Error::InvalidArgument("n_centers must be at least 1".into()));
    }
    if s.is_empty() {
        return Err(Error::InvalidArgument("empty point set".into()));
    }
    let mut rng = seeded_rng(seed);
    let mut centers = s.points.clone();
    centers.extend((0..n_centers).map(|_| uniform_center(&mut rng)));
    let best = scan_all(&s.points, &centers);
    Ok(DiscrepancyResult { value: best.value, method: DiscrepancyMethod::Estimate, witness: best.cap })
}
