//! The Moebius-invariant energy and the objects around it: the pointwise
//! potential, the Hermitian 2-form `Ω`, the angle `θ_K`, the complex cross
//! ratio, the 1-form `α` and the beta function `B_K(ζ)`.

mod beta;
mod cutoff;
mod forms;
mod invariance;
mod subtraction;

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::curves::LegendrianKnot;
use crate::error::{Error, Result};

pub use beta::{beta_continued, beta_direct, residue_at_minus_one, ResidueExtrapolation, POLES, POLE_RADIUS};
pub use cutoff::{cutoff_integral, cutoff_integrals, default_eps_ladder, energy_hadamard};
pub use forms::{
    alpha, cross_ratio, d_alpha_check, infinitesimal_cr_check, omega, theta, theta_at, theta_direct, theta_direct_at,
    CrossRatioReport,
};
pub use invariance::{invariance_trials, InvarianceRow, InvarianceSummary, DIAMETER_WINDOW};
pub use subtraction::{energy_cosine, energy_subtraction, potential};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EnergyMethod {
    Hadamard,
    Subtraction,
    Cosine,
    Beta,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyReport {
    pub value: f64,
    pub method: EnergyMethod,
    pub samples: usize,
    pub diagnostics: BTreeMap<String, f64>,
}

impl EnergyReport {
    fn new(value: f64, method: EnergyMethod, samples: usize) -> Self {
        EnergyReport { value, method, samples, diagnostics: BTreeMap::new() }
    }

    fn with(mut self, key: &str, value: f64) -> Self {
        self.diagnostics.insert(key.to_string(), value);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BetaMethod {
    Direct,
    Continued,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaProfile {
    pub zeta: Complex64,
    pub value: Complex64,
    pub epsilon0: Option<f64>,
    pub method: BetaMethod,
}

/// Rejects open knots other than lines and knots that fail the embeddedness
/// check; returns the margin.
fn require_embedded(k: &LegendrianKnot) -> Result<f64> {
    if !k.is_closed() {
        return Err(Error::Unsupported("energy of an open knot other than an infinite R-circle".into()));
    }
    let margin = k.embeddedness_margin();
    if !(margin > 0.0) {
        return Err(Error::NotEmbedded { margin });
    }
    Ok(margin)
}

/// Sums per-row values in row order.
fn ordered_sum<T: Copy + std::iter::Sum<T>>(rows: Vec<T>) -> T {
    rows.into_iter().sum()
}
