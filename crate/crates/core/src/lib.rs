//! Low-energy point configurations on the sphere `S²` and the real
//! projective plane `RP²`.
//!
//! The construction places rotated regular polygons on a ladder of parallels
//! whose point counts follow a piecewise-linear profile `r(x)`. For every
//! `N ≥ 241` (sphere) or `N ≥ 121` (projective plane) a quasioptimal profile
//! is solved exactly, and the expected logarithmic energy of the resulting
//! random configuration is available in closed form.
//!
//! Module map:
//!
//! | module | contents |
//! |--------|----------|
//! | [`profile`] | piecewise-linear profiles, point counts, the quasioptimal solver |
//! | [`ladder`] | exact rational parallel heights and their segment polynomials |
//! | [`pointgen`] | seeded phases and spherical / antipodal / projective point sets |
//! | [`energy`] | pairwise, closed-form, trapezoid and quadrature energies, predictors |
//! | [`discrepancy`] | spherical cap discrepancy, exact and estimated |
//!
//! Energies use the ordered-pair convention throughout: every unordered pair
//! `{x, y}` contributes twice. Halving the reported values gives the
//! unordered-pair convention used by some other codes.

pub mod discrepancy;
pub mod energy;
pub mod ladder;
pub mod pointgen;
pub mod profile;
mod sum;

pub use discrepancy::{
    cap_deficit, discrepancy_estimate, discrepancy_exact, discrepancy_exact_with_limit, Cap,
    DiscrepancyMethod, DiscrepancyResult, DEFAULT_EXACT_LIMIT,
};
pub use energy::{
    antipodal_expected_energy, expected_energy_closed, expected_energy_quadrature,
    expected_energy_trapezoid, green_energy_projective, pairwise_log_energy,
    pairwise_projective_energy, parallel_pair_energy, predictors, projective_expected_energy,
    ConstantsTable, EnergyReport, Prediction, QuadratureEstimate, Space,
};
pub use ladder::{height_polynomial, projective_heights, spherical_heights, HeightLadder, HeightPolynomial};
pub use pointgen::{
    antipodal_double, draw_phases, generate_antipodal, generate_projective, generate_sphere,
    PhaseAssignment, ProjectivePointSet, SphericalPointSet, Vec3,
};
pub use profile::{
    build_profile, qgde_profile, solve_qgde, solve_qpgde, Profile, QgdeParams, Segment,
    MIN_PROJECTIVE_N, MIN_SPHERE_N,
};

/// Errors raised by the library.
#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("invalid QGDE parameters: {0}")]
    InvalidParams(String),
    #[error("N = {n} is out of domain: the {space} construction needs N >= {min}")]
    OutOfDomain { n: i64, min: i64, space: &'static str },
    #[error("r(M) = {0} is odd; the projective construction needs an even equator count")]
    OddEquator(i64),
    #[error("expected {expected} phases, got {got}")]
    PhaseCount { expected: usize, got: usize },
    #[error("coincident points {i} and {j}: the energy is infinite")]
    Coincident { i: usize, j: usize },
    #[error("infinite energy: {0}")]
    InfiniteEnergy(String),
    #[error("inputs do not describe one configuration: {0}")]
    Mismatch(String),
    #[error("integer overflow while {0}")]
    Overflow(&'static str),
    #[error("quadrature on [{a}, {b}] did not reach tolerance (estimate {estimate:e})")]
    Quadrature { a: f64, b: f64, estimate: f64 },
    #[error("exact discrepancy is limited to {limit} points (got {n}); use the estimator")]
    TooManyPoints { n: usize, limit: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
