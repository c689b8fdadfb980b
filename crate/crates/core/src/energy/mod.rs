//! Logarithmic and Green energies.
//!
//! All energies use ordered pairs: `E(ω) = Σ_{i≠j} log ‖x_i − x_j‖⁻¹`, so each
//! unordered pair is counted twice. Do not halve results when comparing with
//! the asymptotic predictors in [`constants`]; they use the same convention.

mod constants;
mod expected;
mod pairwise;

pub use constants::{predictors, ConstantsTable, Prediction, Space};
pub use expected::{
    antipodal_correction, antipodal_expected_energy, expected_energy_closed,
    expected_energy_quadrature, expected_energy_trapezoid, parallel_pair_energy,
    projective_expected_energy, QuadratureEstimate, QUADRATURE_TOLERANCE,
};
pub use pairwise::{
    green_energy_projective, log_energy_of, pairwise_log_energy, pairwise_projective_energy,
    projective_energy_of,
};

use serde::{Deserialize, Serialize};

use crate::ladder::projective_heights;
use crate::pointgen::{ProjectivePointSet, SphericalPointSet};
use crate::profile::Profile;
use crate::Result;

/// Energies of one configuration from every available route.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub space: Space,
    pub n_points: i64,
    /// Exact energy of one realization, when a point set was supplied.
    pub pairwise: Option<f64>,
    pub expected_closed: f64,
    pub expected_trapezoid: f64,
    pub expected_quadrature: Option<f64>,
    /// Upper (Diamond) predictor at `n_points`.
    pub predicted: f64,
    /// `(expected_closed − W·N² + ½·N·log N) / N`.
    pub residual_per_point: f64,
}

impl EnergyReport {
    /// Report for the spherical ensemble of `p`.
    pub fn sphere(
        p: &Profile,
        points: Option<&SphericalPointSet>,
        with_quadrature: bool,
    ) -> Result<Self> {
        let n = p.point_count_sphere();
        let expected_closed =
            expected_energy_closed(p.counts(), &crate::ladder::spherical_heights(p))?;
        let expected_trapezoid = expected_energy_trapezoid(p)?;
        let expected_quadrature = if with_quadrature {
            Some(expected_energy_quadrature(p)?.value)
        } else {
            None
        };
        let pairwise = points.map(pairwise_log_energy).transpose()?;
        Self::assemble(Space::Sphere, n, pairwise, expected_closed, expected_trapezoid, expected_quadrature)
    }

    /// Report for the projective ensemble of `p` (equator count must be even).
    /// The trapezoid and quadrature routes go through the doubled antipodal
    /// configuration.
    pub fn projective(
        p: &Profile,
        points: Option<&ProjectivePointSet>,
        with_quadrature: bool,
    ) -> Result<Self> {
        let n = p.point_count_projective()?;
        let ladder = projective_heights(p)?;
        let correction = antipodal_correction(p.counts(), &ladder)?;
        let lift = |spherical: f64| 0.5 * (spherical + correction) + (n * n) as f64 * std::f64::consts::LN_2;
        let expected_closed = projective_expected_energy(p)?;
        let expected_trapezoid = lift(expected_energy_trapezoid(p)?);
        let expected_quadrature = if with_quadrature {
            Some(lift(expected_energy_quadrature(p)?.value))
        } else {
            None
        };
        let pairwise = points.map(pairwise_projective_energy).transpose()?;
        Self::assemble(Space::Projective, n, pairwise, expected_closed, expected_trapezoid, expected_quadrature)
    }

    fn assemble(
        space: Space,
        n: i64,
        pairwise: Option<f64>,
        expected_closed: f64,
        expected_trapezoid: f64,
        expected_quadrature: Option<f64>,
    ) -> Result<Self> {
        let prediction = predictors(n, space)?;
        Ok(EnergyReport {
            space,
            n_points: n,
            pairwise,
            expected_closed,
            expected_trapezoid,
            expected_quadrature,
            predicted: prediction.upper,
            residual_per_point: space.residual_per_point(expected_closed, n),
        })
    }
}
