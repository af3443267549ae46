//! Grid quadratures with non-singular integrands: the subtraction form, the
//! pointwise potential and the cosine form.

use rayon::prelude::*;

use super::{ordered_sum, require_embedded, EnergyMethod, EnergyReport};
use crate::curves::LegendrianKnot;
use crate::error::{Error, Result};
use crate::heisenberg::{a_rel, koranyi_dist};

fn knot_dist(k: &LegendrianKnot, j: usize) -> f64 {
    let s = j as f64 * k.spacing();
    s.min(k.length() - s)
}

/// `Σ_{j≠0} h (1/d_H² - 1/d_K²)` along a distance row, plus the diagonal
/// value `h κ²/36`.
fn subtraction_row(k: &LegendrianKnot, row: &[f64], kappa: f64) -> f64 {
    let h = k.spacing();
    let mut acc = h * kappa * kappa / 36.0;
    for (j, d) in row.iter().enumerate().skip(1) {
        let dk = knot_dist(k, j);
        acc += h * (1.0 / (d * d) - 1.0 / (dk * dk));
    }
    acc
}

/// `V(K; γ(s0)) = -4/L + ∫ (1/d_H² - 1/d_K²) dq`.
pub fn potential(k: &LegendrianKnot, s0: f64) -> Result<f64> {
    if k.is_line() {
        return Ok(0.0);
    }
    require_embedded(k)?;
    let row = k.distance_row(s0);
    Ok(-4.0 / k.length() + subtraction_row(k, &row, k.kappa_at(s0)))
}

/// `E = -4 + ∬ (1/d_H² - 1/d_K²)` by the double trapezoid rule.
pub fn energy_subtraction(k: &LegendrianKnot) -> Result<EnergyReport> {
    if k.is_line() {
        return Ok(EnergyReport::new(0.0, EnergyMethod::Subtraction, k.len()));
    }
    let margin = require_embedded(k)?;
    let h = k.spacing();
    let n = k.len();
    let sm = k.samples();
    let rows: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let p = sm[i].point;
            let row: Vec<f64> = (0..n).map(|j| koranyi_dist(p, sm[(i + j) % n].point)).collect();
            h * subtraction_row(k, &row, sm[i].kappa)
        })
        .collect();
    let value = -4.0 + ordered_sum(rows);
    if !value.is_finite() {
        return Err(Error::Numerical("non-finite subtraction energy".into()));
    }
    Ok(EnergyReport::new(value, EnergyMethod::Subtraction, n).with("margin", margin))
}

/// `E = ∬ (1 - cos θ)/d_H²`, evaluated as `1/d_H² - Re(conj ρ/ρ² T T̄')`.
pub fn energy_cosine(k: &LegendrianKnot) -> Result<EnergyReport> {
    if k.is_line() {
        return Ok(EnergyReport::new(0.0, EnergyMethod::Cosine, k.len()));
    }
    let margin = require_embedded(k)?;
    let h = k.spacing();
    let n = k.len();
    let sm = k.samples();
    let rows: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let (p, t) = (sm[i].point, sm[i].tangent);
            let mut acc = 0.0;
            for j in 1..n {
                let q = &sm[(i + j) % n];
                let rho = a_rel(p, q.point);
                let re = (rho.conj() / (rho * rho) * t * q.tangent.conj()).re;
                acc += 1.0 / rho.norm() - re;
            }
            h * h * acc
        })
        .collect();
    let value = ordered_sum(rows);
    if !value.is_finite() {
        return Err(Error::Numerical("non-finite cosine energy".into()));
    }
    Ok(EnergyReport::new(value, EnergyMethod::Cosine, n).with("margin", margin))
}
