//! Continuous energies, second-order constants and asymptotic predictors.

use std::f64::consts::{LN_2, PI, TAU};

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::{Error, Result};

/// Continuous logarithmic energy of `S²`: `1/2 − log 2`.
pub const W_LOG_S2: f64 = 0.5 - LN_2;
/// Continuous logarithmic energy of `RP²`: `1 − log 2`.
pub const W_LOG_RP2: f64 = 1.0 - LN_2;

/// Which space a configuration lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Sphere,
    Projective,
}

impl Space {
    pub fn continuous_energy(self) -> f64 {
        match self {
            Space::Sphere => W_LOG_S2,
            Space::Projective => W_LOG_RP2,
        }
    }

    /// `W·N² − ½·N·log N`.
    pub fn leading_terms(self, n: i64) -> f64 {
        let nf = n as f64;
        self.continuous_energy() * nf * nf - 0.5 * nf * nf.ln()
    }

    /// Coefficient of `N` left after removing the leading terms.
    pub fn residual_per_point(self, energy: f64, n: i64) -> f64 {
        (energy - self.leading_terms(n)) / n as f64
    }
}

impl std::str::FromStr for Space {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sphere" => Ok(Space::Sphere),
            "projective" => Ok(Space::Projective),
            other => Err(Error::InvalidArgument(format!("unknown space `{other}`"))),
        }
    }
}

/// Constants entering the energy expansions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantsTable {
    pub w_log_s2: f64,
    pub w_log_rp2: f64,
    /// Linear coefficient achieved by the quasioptimal Diamond ensemble on `S²`.
    pub c_diamond: f64,
    /// `c_diamond − ½·log 2`, its projective counterpart.
    pub c_diamond_proj: f64,
    /// Lower bound `−3/4 + log 2` for the optimal linear coefficient on `S²`.
    pub c_log_lower: f64,
    /// Conjectured value `2·log 2 + ½·log(2/3) + 3·log(√π / Γ(1/3))`.
    pub c_log_upper: f64,
    /// `c_log_lower − ½·log 2`: lower bound for the projective coefficient.
    pub proj_lower_const: f64,
}

// 14340·c = Σ coefficient·log(prime) − 7170
const C_DIAMOND_TERMS: [(f64, f64); 13] = [
    (19120.0, 239.0),
    (-2270.0, 227.0),
    (-1460.0, 73.0),
    (-265.0, 53.0),
    (-1935.0, 43.0),
    (-930.0, 31.0),
    (-1710.0, 19.0),
    (-1938.0, 17.0),
    (19825.0, 13.0),
    (1750.0, 7.0),
    (-4250.0, 5.0),
    (-131307.0, 3.0),
    (56586.0, 2.0),
];

fn c_diamond() -> f64 {
    let logs: f64 = C_DIAMOND_TERMS.iter().map(|&(k, p)| k * p.ln()).sum();
    (logs - 7170.0) / 14340.0
}

impl ConstantsTable {
    pub fn new() -> Self {
        let c_diamond = c_diamond();
        let c_log_lower = -0.75 + LN_2;
        ConstantsTable {
            w_log_s2: W_LOG_S2,
            w_log_rp2: W_LOG_RP2,
            c_diamond,
            c_diamond_proj: c_diamond - 0.5 * LN_2,
            c_log_lower,
            c_log_upper: 2.0 * LN_2 + 0.5 * (2.0f64 / 3.0).ln() + 3.0 * (PI.sqrt() / gamma(1.0 / 3.0)).ln(),
            proj_lower_const: c_log_lower - 0.5 * LN_2,
        }
    }
}

impl Default for ConstantsTable {
    fn default() -> Self {
        Self::new()
    }
}

/// Asymptotic energy predictions at one cardinality, with the `o(N)` and
/// `O(√N log N)` remainders dropped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub n: i64,
    pub space: Space,
    /// Expected energy of the Diamond construction.
    pub upper: f64,
    /// Lower bound for the minimal energy.
    pub lower: f64,
    /// Green-energy bounds; projective only.
    pub green_lower: Option<f64>,
    pub green_upper: Option<f64>,
}

/// Upper and lower energy predictors for `n` points.
pub fn predictors(n: i64, space: Space) -> Result<Prediction> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("predictors need n >= 2, got {n}")));
    }
    let c = ConstantsTable::new();
    let nf = n as f64;
    let lead = space.leading_terms(n);
    let (upper_c, lower_c) = match space {
        Space::Sphere => (c.c_diamond, c.c_log_lower),
        Space::Projective => (c.c_diamond_proj, c.proj_lower_const),
    };
    let (green_lower, green_upper) = match space {
        Space::Sphere => (None, None),
        Space::Projective => {
            let lead = -nf * nf.ln() / (2.0 * TAU);
            (
                Some(lead + (0.25 - 0.5 * LN_2) * nf / TAU),
                Some(lead + (c.c_diamond + 1.0 - 1.5 * LN_2) * nf / TAU),
            )
        }
    };
    Ok(Prediction {
        n,
        space,
        upper: lead + upper_c * nf,
        lower: lead + lower_c * nf,
        green_lower,
        green_upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::green_energy_projective;

    #[test]
    fn constant_values() {
        let c = ConstantsTable::new();
        assert!(c.c_diamond > -0.04923 && c.c_diamond < -0.04922, "{}", c.c_diamond);
        assert!((c.c_diamond + 0.049222).abs() < 5e-7);
        assert!(c.c_diamond_proj > -0.39580 && c.c_diamond_proj < -0.39579);
        assert!((c.c_diamond_proj + 0.395795).abs() < 1e-6);
        assert!((c.c_log_lower + 0.0568).abs() < 1e-4);
        assert!((c.c_log_upper + 0.0556).abs() < 1e-4);
        assert!((c.proj_lower_const + 0.403426).abs() < 1e-6);
        assert!((c.w_log_s2 - (0.5 - LN_2)).abs() < 1e-16);
        assert!((c.w_log_rp2 - (1.0 - LN_2)).abs() < 1e-16);
        assert!(c.c_log_lower < c.c_log_upper && c.c_log_upper < c.c_diamond);
    }

    #[test]
    fn green_bounds_follow_from_energy_bounds() {
        for n in [100, 10_000, 1_000_000] {
            let p = predictors(n, Space::Projective).unwrap();
            let gu = green_energy_projective(p.upper, n);
            let gl = green_energy_projective(p.lower, n);
            // the two routes differ only by the N·W term moved into the linear coefficient
            assert!((gu - p.green_upper.unwrap()).abs() < 1e-6 * gu.abs().max(1.0));
            assert!((gl - p.green_lower.unwrap()).abs() < 1e-6 * gl.abs().max(1.0));
        }
    }

    #[test]
    fn gap_per_point() {
        let p = predictors(123_456, Space::Projective).unwrap();
        let gap = (p.upper - p.lower) / p.n as f64;
        assert!((gap - 0.00763).abs() < 1e-5);
        assert!(predictors(1, Space::Sphere).is_err());
        assert!(predictors(2, Space::Sphere).unwrap().green_upper.is_none());
    }
}
