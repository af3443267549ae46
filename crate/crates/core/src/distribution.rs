//! Distribution of interpoint Koranyi distances along a knot.
//!
//! `Ψ_p(t)` is the arc length of the knot inside the Koranyi ball of radius
//! `t` about `p`, and `Ψ(t) = ∫ Ψ_p(t) dp`. Near `t = 0` both are odd in `t`
//! with coefficients fixed by curvature moments.

use rayon::prelude::*;
use serde::Serialize;

use crate::curves::LegendrianKnot;
use crate::error::{Error, Result};
use crate::quadrature::lstsq;

/// Largest acceptable condition number of the scaled fit matrix.
pub const FIT_MAX_CONDITION: f64 = 1e10;

/// Least-squares fit `Ψ(t) ≈ c1 t + c3 t³ + c5 t⁵`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PsiFit {
    pub t_max: f64,
    pub c1: f64,
    pub c3: f64,
    pub c5: f64,
    pub residual: f64,
    pub condition: f64,
}

/// Curvature moments `∫κ²`, `∫κ⁴` and `∫(κ⁴ + 8κκ'' + 8κ'²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureMoments {
    pub length: f64,
    pub m2: f64,
    pub m4: f64,
    pub m4full: f64,
}

/// Residues of `B_K` at `ζ = -1, -3, -5`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residues {
    pub r1: f64,
    pub r3: f64,
    pub r5: f64,
}

fn check_radii(ts: &[f64]) -> Result<()> {
    match ts.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
        Some(t) => Err(Error::InvalidArgument(format!("radius must be positive, got {t}"))),
        None => Ok(()),
    }
}

/// Trapezoid weights of the sample grid.
fn sample_weights(k: &LegendrianKnot) -> Vec<f64> {
    let n = k.len();
    let h = k.spacing();
    let mut w = vec![h; n];
    if !k.is_closed() {
        w[0] *= 0.5;
        w[n - 1] *= 0.5;
    }
    w
}

/// `Ψ_p(t)` at `p = γ(s0)`.
pub fn psi_local(k: &LegendrianKnot, s0: f64, t: f64) -> Result<f64> {
    Ok(psi_local_many(k, s0, &[t])?[0])
}

/// `Ψ_p` at several radii with one scan of the distance row.
pub fn psi_local_many(k: &LegendrianKnot, s0: f64, ts: &[f64]) -> Result<Vec<f64>> {
    check_radii(ts)?;
    Ok(k.ball_measure(s0, ts))
}

/// `Ψ(t)`.
pub fn psi(k: &LegendrianKnot, t: f64) -> Result<f64> {
    Ok(psi_many(k, &[t])?[0])
}

/// `Ψ` at several radii. Rows are summed in sample order.
pub fn psi_many(k: &LegendrianKnot, ts: &[f64]) -> Result<Vec<f64>> {
    check_radii(ts)?;
    if k.is_line() {
        return Ok(ts.iter().map(|t| 2.0 * t * k.length()).collect());
    }
    let w = sample_weights(k);
    let rows: Vec<Vec<f64>> = k.samples().par_iter().map(|s| k.ball_measure(s.s, ts)).collect();
    let mut out = vec![0.0; ts.len()];
    for (row, wi) in rows.iter().zip(&w) {
        for (o, v) in out.iter_mut().zip(row) {
            *o += wi * v;
        }
    }
    Ok(out)
}

/// Arc-length offsets `(σ₊, σ₋)`, `σ₋ < 0 < σ₊`, where the signed chord from
/// `γ(s0)` reaches `±t`. Requires `t` below the chord window's `t_max`.
pub fn local_crossings(k: &LegendrianKnot, s0: f64, t: f64, s_window: f64) -> (f64, f64) {
    if k.is_line() {
        return (t, -t);
    }
    let solve = |sign: f64| {
        let f = |x: f64| sign * k.chord(s0, s0 + sign * x) - t;
        let df = |x: f64| k.chord_derivative(s0, s0 + sign * x);
        let (mut lo, mut hi) = (0.0, s_window);
        let mut x = t.min(0.5 * s_window);
        for _ in 0..100 {
            let fx = f(x);
            if fx == 0.0 {
                return x;
            }
            if fx < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            let step = fx / df(x);
            let next = x - step;
            x = if next > lo && next < hi && step.is_finite() { next } else { 0.5 * (lo + hi) };
            if (hi - lo) < 1e-15 * s_window || step.abs() < 1e-15 * x {
                break;
            }
        }
        x
    };
    (solve(1.0), -solve(-1.0))
}

/// `Ψ'(t)` from the local chord inversion: each base point contributes
/// `1/ch'(σ₊) + 1/ch'(σ₋)`. Valid for `t` below the chord window's `t_max`.
pub fn psi_prime_many(k: &LegendrianKnot, ts: &[f64]) -> Result<Vec<f64>> {
    check_radii(ts)?;
    if k.is_line() {
        return Ok(vec![2.0 * k.length(); ts.len()]);
    }
    if !k.is_closed() {
        return Err(Error::Unsupported("psi' of an open sampled curve".into()));
    }
    let window = k.chord_window()?;
    if let Some(t) = ts.iter().find(|t| **t >= window.t_max) {
        return Err(Error::OutsideSafeWindow { radius: *t, t_max: window.t_max });
    }
    let h = k.spacing();
    let rows: Vec<Vec<f64>> = k
        .samples()
        .par_iter()
        .map(|s| {
            ts.iter()
                .map(|&t| {
                    let (a, b) = local_crossings(k, s.s, t, window.s_window);
                    1.0 / k.chord_derivative(s.s, s.s + a) + 1.0 / k.chord_derivative(s.s, s.s + b)
                })
                .collect()
        })
        .collect();
    let mut out = vec![0.0; ts.len()];
    for row in &rows {
        for (o, v) in out.iter_mut().zip(row) {
            *o += h * v;
        }
    }
    Ok(out)
}

/// Radii log-spaced over `[t_max / 64, t_max]`.
pub fn fit_radii(t_max: f64, n_points: usize) -> Vec<f64> {
    let lo = (t_max / 64.0).ln();
    let hi = t_max.ln();
    (0..n_points)
        .map(|i| (lo + (hi - lo) * i as f64 / (n_points - 1) as f64).exp())
        .collect()
}

/// Fits the odd expansion of `Ψ` on `[t_max / 64, t_max]`.
pub fn psi_fit(k: &LegendrianKnot, t_max: f64, n_points: usize) -> Result<PsiFit> {
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::InvalidArgument(format!("t_max must be positive, got {t_max}")));
    }
    if n_points < 3 {
        return Err(Error::InvalidArgument("psi_fit needs at least 3 radii".into()));
    }
    if !k.is_line() {
        let window = k.chord_window()?;
        if t_max > window.t_max {
            return Err(Error::OutsideSafeWindow { radius: t_max, t_max: window.t_max });
        }
    }
    let ts = fit_radii(t_max, n_points);
    let values = psi_many(k, &ts)?;
    let rows: Vec<Vec<f64>> = ts.iter().map(|t| vec![*t, t.powi(3), t.powi(5)]).collect();
    let fit = lstsq(&rows, &values, FIT_MAX_CONDITION)?;
    Ok(PsiFit {
        t_max,
        c1: fit.coeffs[0],
        c3: fit.coeffs[1],
        c5: fit.coeffs[2],
        residual: fit.rms,
        condition: fit.condition,
    })
}

/// Curvature moments by the trapezoid rule on the sample grid.
pub fn curvature_moments(k: &LegendrianKnot) -> CurvatureMoments {
    let w = sample_weights(k);
    let (mut m2, mut m4, mut m4full) = (0.0, 0.0, 0.0);
    for (s, wi) in k.samples().iter().zip(&w) {
        let k2 = s.kappa * s.kappa;
        m2 += wi * k2;
        m4 += wi * k2 * k2;
        m4full += wi * (k2 * k2 + 8.0 * s.kappa * s.kappa2 + 8.0 * s.kappa1 * s.kappa1);
    }
    CurvatureMoments { length: k.length(), m2, m4, m4full }
}

/// `(2L, ∫κ²/12, ∫κ⁴/192)` for a closed knot.
pub fn residues(k: &LegendrianKnot) -> Result<Residues> {
    if !k.is_closed() {
        return Err(Error::Unsupported("residues of an open knot".into()));
    }
    let m = curvature_moments(k);
    Ok(Residues { r1: 2.0 * m.length, r3: m.m2 / 12.0, r5: m.m4 / 192.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{gerono_knot, infinite_r_circle, lift};
    use crate::heisenberg::HPoint;
    use crate::PlanarCurve;

    #[test]
    fn line_measure_is_linear() {
        let k = infinite_r_circle(HPoint::new(0.1, 0.2, 0.3), 1.0, 2.0, (-1.0, 1.0), 64).unwrap();
        for t in [0.1, 1.0, 10.0] {
            assert_eq!(psi_local(&k, 0.3, t).unwrap(), 2.0 * t);
        }
        assert!(psi_local(&k, 0.0, 0.0).is_err());
        let fit = psi_fit(&k, 0.5, 16).unwrap();
        assert!((fit.c1 - 4.0).abs() < 1e-12);
        assert!(fit.c3.abs() < 1e-9 && fit.c5.abs() < 1e-7);
    }

    #[test]
    fn whole_knot_inside_large_balls() {
        let k = gerono_knot(256).unwrap();
        let d = k.diameter();
        assert_eq!(psi_local(&k, 0.7, 1.01 * d).unwrap(), k.length());
        let l = k.length();
        assert!((psi(&k, 1.01 * d).unwrap() - l * l).abs() < 1e-12 * l * l);
    }

    #[test]
    fn circle_moments() {
        // Planar check: the open lift of a circle of radius 2 over one turn.
        let k = lift(&PlanarCurve::circle(2.0), HPoint::new(2.0, 0.0, 0.0), 256, false).unwrap();
        let m = curvature_moments(&k);
        assert!((m.m2 - std::f64::consts::PI).abs() < 1e-12);
        assert!((m.m4 - std::f64::consts::PI / 4.0).abs() < 1e-12);
        assert!(residues(&k).is_err());
        let line = infinite_r_circle(HPoint::ORIGIN, 1.0, 0.0, (0.0, 3.0), 64).unwrap();
        let m = curvature_moments(&line);
        assert_eq!((m.m2, m.m4, m.m4full), (0.0, 0.0, 0.0));
    }

    #[test]
    fn crossings_invert_the_chord() {
        let k = gerono_knot(512).unwrap();
        let w = k.chord_window().unwrap();
        for s0 in [0.0, 1.3, 2.0 + 0.5 * k.spacing()] {
            for t in [1e-3, 0.05, 0.9 * w.t_max] {
                let (a, b) = local_crossings(&k, s0, t, w.s_window);
                assert!(a > 0.0 && b < 0.0);
                assert!((k.chord(s0, s0 + a) - t).abs() < 1e-14);
                assert!((k.chord(s0, s0 + b) + t).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn psi_prime_matches_differences_of_psi() {
        let k = gerono_knot(256).unwrap();
        let (t, h) = (0.2, 1e-3);
        let p = psi_many(&k, &[t - 2.0 * h, t - h, t + h, t + 2.0 * h]).unwrap();
        let fd = (p[0] - 8.0 * p[1] + 8.0 * p[2] - p[3]) / (12.0 * h);
        let exact = psi_prime_many(&k, &[t]).unwrap()[0];
        assert!((fd - exact).abs() < 1e-8 * exact, "{fd} {exact}");
    }

    #[test]
    fn fit_radii_are_log_spaced() {
        let r = fit_radii(1.0, 7);
        assert!((r[0] - 1.0 / 64.0).abs() < 1e-15);
        assert!((r[6] - 1.0).abs() < 1e-15);
        assert!((r[1] / r[0] - r[6] / r[5]).abs() < 1e-12);
    }
}
