//! The 2-form `Ω`, the angle `θ_K`, the complex cross ratio and the 1-form
//! `α`.

use num_complex::Complex64;
use serde::Serialize;

use crate::curves::LegendrianKnot;
use crate::error::{Error, Result};
use crate::heisenberg::{a_rel, a_value, h_inv, h_mul, koranyi_dist, HPoint};
use crate::mobius::MobiusMatrix;
use crate::quadrature::{fd_weights, gauss_legendre, lstsq};

/// `Ω(v, v') = 2 (conj ρ/ρ²) dz(v) conj(dz(v'))` with `ρ = A(p⁻¹q)`.
pub fn omega(p: HPoint, v: Complex64, q: HPoint, v2: Complex64) -> Result<Complex64> {
    let rho = a_rel(p, q);
    if rho.norm() == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    Ok(2.0 * rho.conj() / (rho * rho) * v * v2.conj())
}

/// `θ_K` at arc lengths `s`, `s2` as `|arg Ω(γ'(s), γ'(s2))|`.
pub fn theta_at(k: &LegendrianKnot, s: f64, s2: f64) -> Result<f64> {
    let w = omega(k.point_at(s), k.tangent_at(s), k.point_at(s2), k.tangent_at(s2))?;
    Ok(w.arg().abs())
}

pub fn theta(k: &LegendrianKnot, i: usize, j: usize) -> Result<f64> {
    if i == j {
        return Err(Error::CoincidentPoints);
    }
    let (a, b) = (&k.samples()[i], &k.samples()[j]);
    Ok(omega(a.point, a.tangent, b.point, b.tangent)?.arg().abs())
}

/// `θ_K` by normalisation: `S = ι ∘ rotation ∘ translation` sends `γ(s)` to
/// infinity with tangent along the real axis, where the `R`-circle through
/// both points becomes the line with direction `-1`; `θ_K` is the angle
/// between that direction and the image tangent at `S(γ(s2))`.
pub fn theta_direct_at(k: &LegendrianKnot, s: f64, s2: f64) -> Result<f64> {
    let p = k.point_at(s);
    let q = k.point_at(s2);
    let d = koranyi_dist(p, q);
    if d == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    let phi = k.tangent_at(s).arg();
    let map = MobiusMatrix::inversion()
        .compose(&MobiusMatrix::rotation(-phi).compose(&MobiusMatrix::translation(h_inv(p)))?)?;
    let delta = (1e-2 * d).min(0.25 * k.spacing());
    let offsets = [-2.0, -1.0, 0.0, 1.0, 2.0];
    let w = fd_weights(0.0, &offsets, 1);
    let mut tangent = Complex64::new(0.0, 0.0);
    for (o, wk) in offsets.iter().zip(&w) {
        tangent += map.apply_finite(k.point_at(s2 + o * delta))?.z() * *wk;
    }
    if !(tangent.norm() > 0.0 && tangent.is_finite()) {
        return Err(Error::DegenerateNeighbourhood);
    }
    Ok((tangent / Complex64::new(-1.0, 0.0)).arg().abs())
}

pub fn theta_direct(k: &LegendrianKnot, i: usize, j: usize) -> Result<f64> {
    if i == j {
        return Err(Error::CoincidentPoints);
    }
    theta_direct_at(k, k.samples()[i].s, k.samples()[j].s)
}

/// `A(p3⁻¹p1) A(p4⁻¹p2) / (A(p4⁻¹p1) A(p3⁻¹p2))`.
pub fn cross_ratio(p1: HPoint, p2: HPoint, p3: HPoint, p4: HPoint) -> Result<Complex64> {
    let den = a_rel(p4, p1) * a_rel(p3, p2);
    if den.norm() == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    Ok(a_rel(p3, p1) * a_rel(p4, p2) / den)
}

/// `X(γ(s), γ(t), γ(s+h), γ(t+h)) / h⁴` on a ladder, its polynomial
/// extrapolation to `h = 0` and the deviation from `1/d_H⁴`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossRatioReport {
    pub values: Vec<(f64, Complex64)>,
    pub limit: Complex64,
    pub expected: f64,
    pub deviation: f64,
}

pub fn infinitesimal_cr_check(k: &LegendrianKnot, s: f64, t: f64, h_ladder: &[f64]) -> Result<CrossRatioReport> {
    if h_ladder.len() < 2 || h_ladder.iter().any(|h| !(*h > 0.0)) {
        return Err(Error::InvalidArgument("h ladder needs at least two positive steps".into()));
    }
    let (ps, pt) = (k.point_at(s), k.point_at(t));
    let d = koranyi_dist(ps, pt);
    if d == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    let values = h_ladder
        .iter()
        .map(|&h| Ok((h, cross_ratio(ps, pt, k.point_at(s + h), k.point_at(t + h))? / h.powi(4))))
        .collect::<Result<Vec<_>>>()?;
    let deg = values.len();
    let rows: Vec<Vec<f64>> = h_ladder.iter().map(|h| (0..deg).map(|p| h.powi(p as i32)).collect()).collect();
    let re: Vec<f64> = values.iter().map(|(_, v)| v.re).collect();
    let im: Vec<f64> = values.iter().map(|(_, v)| v.im).collect();
    let limit = Complex64::new(lstsq(&rows, &re, 1e14)?.coeffs[0], lstsq(&rows, &im, 1e14)?.coeffs[0]);
    let expected = d.powi(-4);
    Ok(CrossRatioReport { values, limit, expected, deviation: (limit - expected).norm() / expected })
}

/// `α_p(v') = Re[(conj z''/conj A(r)) dz(v') + (z''/A(r)) conj dz(v')]` with
/// `r = p⁻¹q = (z'', u'')`, for a horizontal `v'` at `q`.
pub fn alpha(p: HPoint, q: HPoint, v2: Complex64) -> Result<f64> {
    let r = h_mul(h_inv(p), q);
    let a = a_value(r);
    if a.norm() == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    let z = r.z();
    Ok((z.conj() / a.conj() * v2 + z / a * v2.conj()).re)
}

/// Horizontal straight move `p · (t v, 0)`.
fn flow(p: HPoint, v: Complex64, t: f64) -> HPoint {
    h_mul(p, HPoint::from_z(v * t, 0.0))
}

/// Circulation of `α` around the square `(a, b) ∈ [0, h]²` with
/// `p(a) = p·(a v, 0)` and `q(b) = q·(b v', 0)`, divided by `h²`, minus
/// `Re Ω(v, v')` at `(p, q)`. Only the edges along `b` carry `α`.
pub fn d_alpha_check(p: HPoint, q: HPoint, v: Complex64, v2: Complex64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!("step must be positive, got {h}")));
    }
    let (x, w) = gauss_legendre(8);
    let edge = |a: f64| -> Result<f64> {
        let pa = flow(p, v, a);
        let mut acc = 0.0;
        for (xi, wi) in x.iter().zip(&w) {
            let b = 0.5 * h * (1.0 + xi);
            acc += 0.5 * h * wi * alpha(pa, flow(q, v2, b), v2)?;
        }
        Ok(acc)
    };
    let circulation = edge(h)? - edge(0.0)?;
    Ok((circulation / (h * h) - omega(p, v, q, v2)?.re).abs())
}
