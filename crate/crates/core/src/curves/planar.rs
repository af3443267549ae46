//! Closed planar curves given by finite Fourier series.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const IMMERSION_GRID: usize = 4096;
const IMMERSION_TOL: f64 = 1e-6;

/// `x(t) = a0 + Σ (a_k cos kt + b_k sin kt)`, likewise `y`, for `t ∈ [0, 2π)`.
///
/// Both coefficient vectors use the layout `[a0, a1, b1, a2, b2, ..., aN, bN]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanarCurve {
    x: Vec<f64>,
    y: Vec<f64>,
}

/// Signed curvature of a planar curve and its first two arc-length derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureJet {
    pub speed: f64,
    pub tangent: Complex64,
    pub kappa: f64,
    pub kappa1: f64,
    pub kappa2: f64,
}

/// Curvature data from derivatives `z', z'', z''', z''''` in any regular
/// parameter.
pub fn curvature_jet(d: &[Complex64; 5]) -> Option<CurvatureJet> {
    let (z1, z2, z3, z4) = (d[1], d[2], d[3], d[4]);
    let v = z1.norm();
    if !(v > 0.0) || !v.is_finite() {
        return None;
    }
    let f = (z1.conj() * z2).im;
    let f1 = (z1.conj() * z3).im;
    let f2 = (z2.conj() * z3).im + (z1.conj() * z4).im;
    let g = (z1.conj() * z2).re;
    let v1 = g / v;
    let v2 = (z2.norm_sqr() + (z1.conj() * z3).re) / v - g * g / (v * v * v);
    let (v3, v4, v5) = (v * v * v, v * v * v * v, v * v * v * v * v);
    let k = f / v3;
    let kt = f1 / v3 - 3.0 * f * v1 / v4;
    let ktt = f2 / v3 - 6.0 * f1 * v1 / v4 - 3.0 * f * v2 / v4 + 12.0 * f * v1 * v1 / v5;
    Some(CurvatureJet {
        speed: v,
        tangent: z1 / v,
        kappa: k,
        kappa1: kt / v,
        kappa2: ktt / (v * v) - kt * v1 / v3,
    })
}

impl PlanarCurve {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.is_empty() || x.len() % 2 == 0 || x.len() != y.len() {
            return Err(Error::InvalidArgument(
                "coefficient vectors must have equal odd length 2N+1".into(),
            ));
        }
        if x.iter().chain(&y).any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("non-finite Fourier coefficient".into()));
        }
        Ok(PlanarCurve { x, y })
    }

    /// Builds the curve from complex coefficients `ζ_k`, `k = -N..=N`
    /// (index `k + N`), of `z(t) = Σ ζ_k e^{ikt}`.
    pub fn from_complex(zeta: &[Complex64]) -> Result<Self> {
        if zeta.len() % 2 == 0 {
            return Err(Error::InvalidArgument("complex coefficients need odd length".into()));
        }
        let n = zeta.len() / 2;
        let mut x = vec![zeta[n].re];
        let mut y = vec![zeta[n].im];
        for k in 1..=n {
            let (p, m) = (zeta[n + k], zeta[n - k]);
            x.push(p.re + m.re);
            x.push(m.im - p.im);
            y.push(p.im + m.im);
            y.push(p.re - m.re);
        }
        PlanarCurve::new(x, y)
    }

    pub fn circle(radius: f64) -> Self {
        PlanarCurve { x: vec![0.0, radius, 0.0], y: vec![0.0, 0.0, radius] }
    }

    /// Gerono lemniscate `(cos t, ½ sin 2t)`.
    pub fn gerono() -> Self {
        PlanarCurve { x: vec![0.0, 1.0, 0.0, 0.0, 0.0], y: vec![0.0, 0.0, 0.0, 0.0, 0.5] }
    }

    /// Two-lobe curve `(4 cos t, sin 4t + μ sin 2t)`. Its signed area vanishes
    /// for every `μ`; the lifts of the two passes through the origin at
    /// `t = ±π/2` approach each other as `μ → 2/5`.
    pub fn pinch(mu: f64) -> Self {
        let mut x = vec![0.0; 9];
        let mut y = vec![0.0; 9];
        x[1] = 4.0;
        y[4] = mu;
        y[8] = 1.0;
        PlanarCurve { x, y }
    }

    pub fn order(&self) -> usize {
        self.x.len() / 2
    }

    pub fn x_coeffs(&self) -> &[f64] {
        &self.x
    }

    pub fn y_coeffs(&self) -> &[f64] {
        &self.y
    }

    /// All coefficients, `x` first.
    pub fn to_vec(&self) -> Vec<f64> {
        self.x.iter().chain(&self.y).copied().collect()
    }

    pub fn from_vec(v: &[f64]) -> Result<Self> {
        let h = v.len() / 2;
        if v.len() % 2 != 0 {
            return Err(Error::InvalidArgument("coefficient vector must split evenly".into()));
        }
        PlanarCurve::new(v[..h].to_vec(), v[h..].to_vec())
    }

    pub fn complex_coeffs(&self) -> Vec<Complex64> {
        let n = self.order();
        let mut z = vec![Complex64::new(0.0, 0.0); 2 * n + 1];
        z[n] = Complex64::new(self.x[0], self.y[0]);
        for k in 1..=n {
            let (a, b) = (self.x[2 * k - 1], self.x[2 * k]);
            let (c, d) = (self.y[2 * k - 1], self.y[2 * k]);
            z[n + k] = Complex64::new(a + d, c - b) * 0.5;
            z[n - k] = Complex64::new(a - d, c + b) * 0.5;
        }
        z
    }

    /// `z(t)` and its first four derivatives.
    pub fn jet(&self, t: f64) -> [Complex64; 5] {
        jet_from_complex(&self.complex_coeffs(), t)
    }

    pub fn point(&self, t: f64) -> Complex64 {
        self.jet(t)[0]
    }

    pub fn curvature(&self, t: f64) -> Result<(f64, f64, f64)> {
        let j = curvature_jet(&self.jet(t)).ok_or(Error::NotImmersed { t })?;
        if j.speed <= IMMERSION_TOL {
            return Err(Error::NotImmersed { t });
        }
        Ok((j.kappa, j.kappa1, j.kappa2))
    }

    /// Minimum speed on the immersion grid with its location.
    pub fn min_speed(&self) -> (f64, f64) {
        let zeta = self.complex_coeffs();
        (0..IMMERSION_GRID)
            .map(|j| {
                let t = std::f64::consts::TAU * j as f64 / IMMERSION_GRID as f64;
                (jet_from_complex(&zeta, t)[1].norm(), t)
            })
            .fold((f64::INFINITY, 0.0), |a, b| if b.0 < a.0 { b } else { a })
    }

    pub fn check_immersed(&self) -> Result<()> {
        let (v, t) = self.min_speed();
        if v > IMMERSION_TOL {
            Ok(())
        } else {
            Err(Error::NotImmersed { t })
        }
    }

    /// `½∮(x ẏ - y ẋ) dt = π Σ k (a_k d_k - b_k c_k)`.
    pub fn signed_area(&self) -> f64 {
        let s: f64 = (1..=self.order())
            .map(|k| {
                let (a, b) = (self.x[2 * k - 1], self.x[2 * k]);
                let (c, d) = (self.y[2 * k - 1], self.y[2 * k]);
                k as f64 * (a * d - b * c)
            })
            .sum();
        std::f64::consts::PI * s
    }

    /// Gradient of [`signed_area`](Self::signed_area) with respect to
    /// [`to_vec`](Self::to_vec).
    pub fn area_gradient(&self) -> Vec<f64> {
        let n = self.order();
        let pi = std::f64::consts::PI;
        let mut gx = vec![0.0; 2 * n + 1];
        let mut gy = vec![0.0; 2 * n + 1];
        for k in 1..=n {
            let kf = k as f64 * pi;
            let (a, b) = (self.x[2 * k - 1], self.x[2 * k]);
            let (c, d) = (self.y[2 * k - 1], self.y[2 * k]);
            gx[2 * k - 1] = kf * d;
            gx[2 * k] = -kf * c;
            gy[2 * k - 1] = -kf * b;
            gy[2 * k] = kf * a;
        }
        gx.extend(gy);
        gx
    }

    /// Euclidean length by the trapezoid rule on a fine grid, which is
    /// spectrally accurate for the periodic speed.
    pub fn length(&self) -> f64 {
        let zeta = self.complex_coeffs();
        let m = 8192usize.max(32 * self.order());
        let h = std::f64::consts::TAU / m as f64;
        (0..m).map(|j| jet_from_complex(&zeta, j as f64 * h)[1].norm()).sum::<f64>() * h
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        PlanarCurve {
            x: self.x.iter().map(|c| c * lambda).collect(),
            y: self.y.iter().map(|c| c * lambda).collect(),
        }
    }

    pub fn rotated(&self, theta: f64) -> Self {
        let r = Complex64::from_polar(1.0, theta);
        let zeta: Vec<Complex64> = self.complex_coeffs().iter().map(|z| z * r).collect();
        PlanarCurve::from_complex(&zeta).expect("rotation preserves shape")
    }

    pub fn translated(&self, dz: Complex64) -> Self {
        let mut c = self.clone();
        c.x[0] += dz.re;
        c.y[0] += dz.im;
        c
    }

    /// Same trace traversed backwards, `t ↦ -t`.
    pub fn reversed(&self) -> Self {
        let flip = |v: &[f64]| {
            v.iter().enumerate().map(|(i, c)| if i > 0 && i % 2 == 0 { -c } else { *c }).collect()
        };
        PlanarCurve { x: flip(&self.x), y: flip(&self.y) }
    }

    /// Newton correction along the area gradient until the signed area is
    /// below `1e-12 L^2`.
    pub fn project_zero_area(&self) -> Result<Self> {
        self.check_immersed()?;
        let len = self.length();
        let tol = 1e-12 * len * len;
        let mut c = self.to_vec();
        let cur = PlanarCurve::from_vec(&c)?;
        let g0 = cur.area_gradient();
        let gn: f64 = g0.iter().map(|g| g * g).sum();
        let cn: f64 = c.iter().map(|x| x * x).sum::<f64>().max(1.0);
        if gn <= 1e-24 * cn {
            if cur.signed_area().abs() <= tol {
                return Ok(cur);
            }
            return Err(Error::DegenerateAreaGradient);
        }
        // A(c + τ g) = A(c) + τ ∇A(c)·g + τ² A(g) exactly; start from the
        // smaller root and polish with Newton steps.
        let a0 = cur.signed_area();
        let a1: f64 = g0.iter().map(|g| g * g).sum();
        let a2 = PlanarCurve::from_vec(&g0)?.signed_area();
        let tau = if a2.abs() <= 1e-14 * a1 {
            -a0 / a1
        } else {
            let disc = a1 * a1 - 4.0 * a2 * a0;
            if disc < 0.0 {
                return Err(Error::DegenerateAreaGradient);
            }
            let q = -0.5 * (a1 + disc.sqrt());
            let (r1, r2) = (q / a2, a0 / q);
            if r1.abs() < r2.abs() { r1 } else { r2 }
        };
        for (ci, gi) in c.iter_mut().zip(&g0) {
            *ci += tau * gi;
        }
        for _ in 0..20 {
            let cur = PlanarCurve::from_vec(&c)?;
            let a = cur.signed_area();
            if a.abs() <= tol {
                return match cur.check_immersed() {
                    Ok(()) => Ok(cur),
                    Err(_) => Err(Error::DegenerateAreaGradient),
                };
            }
            let g = cur.area_gradient();
            let slope: f64 = g.iter().zip(&g0).map(|(a, b)| a * b).sum();
            if slope.abs() <= 1e-14 * gn {
                return Err(Error::DegenerateAreaGradient);
            }
            let tau = -a / slope;
            for (ci, gi) in c.iter_mut().zip(&g0) {
                *ci += tau * gi;
            }
        }
        let a = PlanarCurve::from_vec(&c)?.signed_area();
        Err(Error::ProjectionFailed { area: a })
    }

    /// Truncated Fourier series of a sampled closed planar curve, with `t`
    /// proportional to the sample index.
    pub fn fit(samples: &[Complex64], order: usize) -> Result<Self> {
        let m = samples.len();
        if m < 2 * order + 2 {
            return Err(Error::InvalidArgument("too few samples for the requested order".into()));
        }
        let mut c = samples.to_vec();
        crate::quadrature::fft(&mut c);
        let mut zeta = vec![Complex64::new(0.0, 0.0); 2 * order + 1];
        for k in -(order as i64)..=order as i64 {
            let idx = if k >= 0 { k as usize } else { (m as i64 + k) as usize };
            zeta[(k + order as i64) as usize] = c[idx] / m as f64;
        }
        PlanarCurve::from_complex(&zeta)
    }
}

pub(crate) fn jet_from_complex(zeta: &[Complex64], t: f64) -> [Complex64; 5] {
    let n = (zeta.len() / 2) as i64;
    let step = Complex64::from_polar(1.0, t);
    let mut e = Complex64::from_polar(1.0, -t * n as f64);
    let mut out = [Complex64::new(0.0, 0.0); 5];
    for (idx, c) in zeta.iter().enumerate() {
        let k = idx as i64 - n;
        let ik = Complex64::new(0.0, k as f64);
        let mut term = c * e;
        for o in out.iter_mut() {
            *o += term;
            term *= ik;
        }
        e *= step;
    }
    out
}
