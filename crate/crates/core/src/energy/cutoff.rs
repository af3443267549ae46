//! Integrals over `{d_H ≥ ε}` and the Hadamard finite part.

use num_complex::Complex64;
use rayon::prelude::*;

use super::{ordered_sum, require_embedded, EnergyMethod, EnergyReport};
use crate::curves::LegendrianKnot;
use crate::distribution::{curvature_moments, local_crossings};
use crate::error::{Error, Result};
use crate::heisenberg::koranyi_dist;
use crate::quadrature::{lstsq, CompositeRule};

const ORDER: usize = 10;

/// Breakpoints on `[a, b]` starting at width `first` next to `a` and doubling
/// up to `max`.
fn one_sided_breaks(a: f64, b: f64, first: f64, max: f64) -> Vec<f64> {
    let mut out = vec![a];
    let mut w = first.min(max);
    while out.last().unwrap() + w < b {
        let x = out.last().unwrap() + w;
        out.push(x);
        if w >= max {
            break;
        }
        w = (2.0 * w).min(max);
    }
    let x = *out.last().unwrap();
    let k = ((b - x) / max).ceil().max(1.0) as usize;
    for i in 1..=k {
        out.push(x + (b - x) * i as f64 / k as f64);
    }
    out
}

fn integrate(rule: &CompositeRule, f: impl Fn(f64) -> Complex64) -> Complex64 {
    rule.nodes.iter().zip(&rule.weights).map(|(x, w)| f(*x) * *w).sum()
}

/// Per-row pieces of `∫_{d_H ≥ ε} d_H^ζ dσ` at the sample `s0`: the part
/// outside the chord window, and for each `ε` the part inside it.
fn row_pieces(k: &LegendrianKnot, s0: f64, eps: &[f64], zeta: Complex64, s_window: f64) -> (Complex64, Vec<Complex64>) {
    let h = k.spacing();
    let l = k.length();
    let p = k.point_at(s0);
    let f = |sigma: f64| {
        let d = koranyi_dist(p, k.point_at(s0 + sigma));
        (zeta * d.ln()).exp()
    };
    let max = 4.0 * h;
    let middle = integrate(&CompositeRule::new(&one_sided_breaks(s_window, l - s_window, max, max), ORDER), f);
    let local = eps
        .iter()
        .map(|&e| {
            let (a, b) = local_crossings(k, s0, e, s_window);
            let fwd = CompositeRule::new(&one_sided_breaks(a, s_window, 0.5 * a, max), ORDER);
            let bwd = CompositeRule::new(&one_sided_breaks(-b, s_window, -0.5 * b, max), ORDER);
            integrate(&fwd, f) + integrate(&bwd, |x| f(-x))
        })
        .collect();
    (middle, local)
}

/// `∬_{d_H ≥ ε} d_H^ζ` for each `ε` below the chord window's `t_max`.
pub fn cutoff_integrals(k: &LegendrianKnot, eps: &[f64], zeta: Complex64) -> Result<Vec<Complex64>> {
    if !k.is_closed() {
        return Err(Error::Unsupported("cutoff integral of an open knot".into()));
    }
    let window = k.chord_window()?;
    if let Some(e) = eps.iter().find(|e| !(**e > 0.0 && **e < window.t_max)) {
        return Err(Error::OutsideSafeWindow { radius: *e, t_max: window.t_max });
    }
    let h = k.spacing();
    let rows: Vec<(Complex64, Vec<Complex64>)> =
        k.samples().par_iter().map(|s| row_pieces(k, s.s, eps, zeta, window.s_window)).collect();
    Ok((0..eps.len())
        .map(|e| ordered_sum(rows.iter().map(|(m, loc)| h * (m + loc[e])).collect::<Vec<_>>()))
        .collect())
}

/// `∬_{d_H ≥ ε} d_H^ζ`.
pub fn cutoff_integral(k: &LegendrianKnot, eps: f64, zeta: Complex64) -> Result<Complex64> {
    Ok(cutoff_integrals(k, &[eps], zeta)?[0])
}

/// Geometric ladder `t_max · 2^{-j}`, `j = 2..=7`, inside the chord window.
pub fn default_eps_ladder(k: &LegendrianKnot) -> Result<Vec<f64>> {
    let w = k.chord_window()?;
    Ok((2..=7).map(|j| w.t_max * 0.5f64.powi(j)).collect())
}

fn fit_ladder(eps: &[f64], values: &[f64]) -> Result<(f64, f64, f64)> {
    let powers: &[i32] = if eps.len() >= 6 { &[0, 1, 3, 5] } else { &[0, 1, 3] };
    let rows: Vec<Vec<f64>> = eps.iter().map(|e| powers.iter().map(|p| e.powi(*p)).collect()).collect();
    let fit = lstsq(&rows, values, 1e12)?;
    Ok((fit.coeffs[0], fit.coeffs[1], fit.rms))
}

/// Hadamard finite part: `I(ε) = ∬_{d_H ≥ ε} d_H^{-2} - 2L/ε` on a decreasing
/// geometric ladder, extrapolated to `ε = 0` by a polynomial fit in the odd
/// powers of `ε`.
pub fn energy_hadamard(k: &LegendrianKnot, eps_ladder: &[f64]) -> Result<EnergyReport> {
    if k.is_line() {
        return Ok(EnergyReport::new(0.0, EnergyMethod::Hadamard, k.len()));
    }
    let margin = require_embedded(k)?;
    if eps_ladder.len() < 4 {
        return Err(Error::InvalidArgument("eps ladder needs at least 4 values".into()));
    }
    let ratio = eps_ladder[1] / eps_ladder[0];
    let geometric = eps_ladder
        .windows(2)
        .all(|w| w[1] > 0.0 && w[1] < w[0] && ((w[1] / w[0]) / ratio - 1.0).abs() < 1e-9);
    if !geometric {
        return Err(Error::InvalidArgument("eps ladder must be decreasing and geometric".into()));
    }
    let l = k.length();
    let raw = cutoff_integrals(k, eps_ladder, Complex64::new(-2.0, 0.0))?;
    let values: Vec<f64> = raw.iter().zip(eps_ladder).map(|(c, e)| c.re - 2.0 * l / e).collect();
    let (value, slope, rms) = fit_ladder(eps_ladder, &values)?;
    let n = eps_ladder.len();
    let (_, s_hi, _) = fit_ladder(&eps_ladder[..n - 1], &values[..n - 1])?;
    let (_, s_lo, _) = fit_ladder(&eps_ladder[1..], &values[1..])?;
    let spread = (s_hi - s_lo).abs() / slope.abs().max(1e-300);
    if !(spread <= 0.1) {
        return Err(Error::UnstableExtrapolation { spread });
    }
    let m2 = curvature_moments(k).m2;
    Ok(EnergyReport::new(value, EnergyMethod::Hadamard, k.len())
        .with("margin", margin)
        .with("slope", slope)
        .with("slope_expected", -m2 / 12.0)
        .with("slope_spread", spread)
        .with("fit_rms", rms)
        .with("eps_min", eps_ladder[n - 1])
        .with("eps_max", eps_ladder[0]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn breaks_grade_from_the_left() {
        let b = one_sided_breaks(0.1, 1.0, 0.05, 0.2);
        assert_eq!(b[0], 0.1);
        assert!((b[1] - 0.15).abs() < 1e-15);
        assert!((b[2] - 0.25).abs() < 1e-15);
        assert_eq!(*b.last().unwrap(), 1.0);
        assert!(b.windows(2).all(|w| w[1] > w[0] && w[1] - w[0] <= 0.2 + 1e-15));
    }
}
