//! The beta function `B_K(ζ) = ∬ d_H^ζ` and its meromorphic continuation.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::cutoff::cutoff_integral;
use super::{ordered_sum, require_embedded, BetaMethod, BetaProfile};
use crate::curves::LegendrianKnot;
use crate::distribution::{curvature_moments, psi_prime_many};
use crate::error::{Error, Result};
use crate::heisenberg::koranyi_dist;
use crate::quadrature::{lstsq, CompositeRule};

/// Poles excluded from the continuation, and the exclusion radius.
pub const POLES: [f64; 3] = [-1.0, -3.0, -5.0];
pub const POLE_RADIUS: f64 = 0.05;

fn power(d: f64, zeta: Complex64) -> Complex64 {
    (zeta * d.ln()).exp()
}

/// Double trapezoid sum for `Re ζ > -1`; each diagonal cell contributes
/// `∫_{-h/2}^{h/2} |σ|^ζ = 2 (h/2)^{ζ+1}/(ζ+1)`.
pub fn beta_direct(k: &LegendrianKnot, zeta: Complex64) -> Result<BetaProfile> {
    if !(zeta.re > -1.0) || !zeta.im.is_finite() {
        return Err(Error::ZetaOutOfDomain { re: zeta.re, im: zeta.im });
    }
    if !k.is_closed() {
        return Err(Error::Unsupported("beta function of an open knot".into()));
    }
    let h = k.spacing();
    let n = k.len();
    let sm = k.samples();
    let diag = 2.0 * power(0.5 * h, zeta + 1.0) / (zeta + 1.0);
    let rows: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let p = sm[i].point;
            let mut acc = diag;
            for j in 1..n {
                acc += h * power(koranyi_dist(p, sm[(i + j) % n].point), zeta);
            }
            h * acc
        })
        .collect();
    Ok(BetaProfile { zeta, value: ordered_sum(rows), epsilon0: None, method: BetaMethod::Direct })
}

/// Continuation to `Re ζ > -7` by splitting at `ε0`:
/// `Σ a_{2m} ε0^{ζ+2m+1}/(ζ+2m+1) + ∫_0^{ε0} t^ζ R(t) dt + ∬_{d_H ≥ ε0} d_H^ζ`
/// with `R = Ψ' - a0 - a2 t² - a4 t⁴ = O(t⁶)`. On `[0, ε0/16]` the remainder
/// is replaced by its fitted `t⁶, t⁸` terms.
pub fn beta_continued(k: &LegendrianKnot, zeta: Complex64, epsilon0: f64) -> Result<BetaProfile> {
    if !(zeta.re > -7.0) || !zeta.is_finite() {
        return Err(Error::ZetaOutOfDomain { re: zeta.re, im: zeta.im });
    }
    for pole in POLES {
        let distance = (zeta - pole).norm();
        if distance < POLE_RADIUS {
            return Err(Error::NearPole { pole, distance });
        }
    }
    if !(epsilon0 > 0.0 && epsilon0.is_finite()) {
        return Err(Error::InvalidArgument(format!("epsilon0 must be positive, got {epsilon0}")));
    }
    require_embedded(k)?;
    let window = k.chord_window()?;
    if epsilon0 >= window.t_max {
        return Err(Error::OutsideSafeWindow { radius: epsilon0, t_max: window.t_max });
    }
    let m = curvature_moments(k);
    let a = [2.0 * m.length, m.m2 / 12.0, m.m4full / 192.0];
    let mut value = Complex64::new(0.0, 0.0);
    for (j, aj) in a.iter().enumerate() {
        let e = zeta + (2 * j + 1) as f64;
        value += aj * power(epsilon0, e) / e;
    }

    let t_min = epsilon0 / 16.0;
    let breaks: Vec<f64> = (0..=4).rev().map(|j| epsilon0 * 0.5f64.powi(j)).collect();
    let rule = CompositeRule::new(&breaks, 10);
    let dpsi = psi_prime_many(k, &rule.nodes)?;
    let rem: Vec<f64> = rule
        .nodes
        .iter()
        .zip(&dpsi)
        .map(|(t, d)| d - a[0] - a[1] * t * t - a[2] * t.powi(4))
        .collect();
    for ((t, w), r) in rule.nodes.iter().zip(&rule.weights).zip(&rem) {
        value += w * r * power(*t, zeta);
    }
    let rows: Vec<Vec<f64>> = rule.nodes.iter().map(|t| vec![t.powi(6), t.powi(8)]).collect();
    let tail = lstsq(&rows, &rem, 1e12)?;
    for (c, p) in tail.coeffs.iter().zip([7.0, 9.0]) {
        value += c * power(t_min, zeta + p) / (zeta + p);
    }

    value += cutoff_integral(k, epsilon0, zeta)?;
    if !value.is_finite() {
        return Err(Error::Numerical("non-finite continued beta value".into()));
    }
    Ok(BetaProfile { zeta, value, epsilon0: Some(epsilon0), method: BetaMethod::Continued })
}

/// `(ζ+1) B_K(ζ)` at `ζ = -1 ± δ`, extrapolated to `δ = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidueExtrapolation {
    pub points: Vec<(f64, f64)>,
    pub limit: f64,
    pub expected: f64,
    pub relative_error: f64,
}

pub fn residue_at_minus_one(k: &LegendrianKnot, epsilon0: f64, deltas: &[f64]) -> Result<ResidueExtrapolation> {
    let mut points = Vec::new();
    for d in deltas {
        for s in [-1.0, 1.0] {
            let delta = s * d;
            let b = beta_continued(k, Complex64::new(-1.0 + delta, 0.0), epsilon0)?;
            points.push((delta, delta * b.value.re));
        }
    }
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    let degree = points.len() - 1;
    let rows: Vec<Vec<f64>> = points.iter().map(|(d, _)| (0..=degree).map(|p| d.powi(p as i32)).collect()).collect();
    let values: Vec<f64> = points.iter().map(|(_, v)| *v).collect();
    let limit = lstsq(&rows, &values, 1e12)?.coeffs[0];
    let expected = 2.0 * k.length();
    Ok(ResidueExtrapolation { points, limit, expected, relative_error: (limit - expected).abs() / expected })
}
