//! Knot constructors: Legendrian lifts of planar curves, R-circles and
//! Moebius images.

use num_complex::Complex64;

use super::knot::{line_point, KnotSample, LegendrianKnot};
use super::planar::{curvature_jet, jet_from_complex, PlanarCurve};
use super::series::{ArcLengthMap, PeriodicSeries};
use crate::error::{Error, Result};
use crate::heisenberg::{invert, koranyi_norm, ExtendedPoint, HPoint};
use crate::mobius::MobiusMatrix;

/// Nodes of the arc-length table.
pub const LENGTH_TABLE: usize = 8192;
/// Relative level below which Fourier coefficients of resampled images are
/// treated as roundoff.
const SERIES_NOISE: f64 = 1e-13;
/// Images with points beyond this Koranyi norm are rejected as unbounded.
const IMAGE_BOUND: f64 = 1e8;

/// Closed-form lift height of a planar Fourier curve:
/// `u(t) = u0 + ½ ∫_0^t Im(conj(z) ż) dτ`.
#[derive(Debug, Clone)]
pub struct LiftHeight {
    /// Coefficients `D_m`, `m = -2N..=2N`, of `conj(z) ż = Σ D_m e^{imt}`.
    d: Vec<Complex64>,
    u0: f64,
}

impl LiftHeight {
    pub fn new(c: &PlanarCurve, u0: f64) -> Self {
        let zeta = c.complex_coeffs();
        let n = zeta.len() as i64 / 2;
        let mut d = vec![Complex64::new(0.0, 0.0); (4 * n + 1) as usize];
        for (jj, zj) in zeta.iter().enumerate() {
            for (kk, zk) in zeta.iter().enumerate() {
                let (j, k) = (jj as i64 - n, kk as i64 - n);
                let m = k - j;
                d[(m + 2 * n) as usize] += zj.conj() * zk * Complex64::new(0.0, k as f64);
            }
        }
        LiftHeight { d, u0 }
    }

    /// Height gained over one period, which equals the signed area.
    pub fn drift(&self) -> f64 {
        let n = (self.d.len() as i64 - 1) / 4;
        std::f64::consts::PI * self.d[(2 * n) as usize].im
    }

    pub fn eval(&self, t: f64) -> f64 {
        let n2 = (self.d.len() as i64 - 1) / 2;
        let mut acc = self.d[n2 as usize] * t;
        let step = Complex64::from_polar(1.0, t);
        let mut e = Complex64::from_polar(1.0, -t * n2 as f64);
        for (idx, dm) in self.d.iter().enumerate() {
            let m = idx as i64 - n2;
            if m != 0 {
                acc += dm * (e - 1.0) / Complex64::new(0.0, m as f64);
            }
            e *= step;
        }
        self.u0 + 0.5 * acc.im
    }
}

fn table_size(order: usize) -> usize {
    LENGTH_TABLE.max((64 * order).next_power_of_two())
}

/// Legendrian lift of `c` starting at `base`, sampled at `n` points uniform in
/// arc length. The curve is translated so that its projection starts at the
/// projection of `base`.
pub fn lift(c: &PlanarCurve, base: HPoint, n: usize, require_closed: bool) -> Result<LegendrianKnot> {
    if n < 64 || n % 2 != 0 {
        return Err(Error::InvalidArgument(format!("sample count must be even and at least 64, got {n}")));
    }
    c.check_immersed()?;
    let c = c.translated(base.z() - c.point(0.0));
    let zeta = c.complex_coeffs();
    let m = table_size(c.order());
    let tau = std::f64::consts::TAU;
    let (mut v, mut dv) = (Vec::with_capacity(m), Vec::with_capacity(m));
    for j in 0..m {
        let jet = jet_from_complex(&zeta, tau * j as f64 / m as f64);
        let speed = jet[1].norm();
        v.push(speed);
        dv.push((jet[1].conj() * jet[2]).re / speed);
    }
    let map = ArcLengthMap::new(&v, &dv, tau)?;
    let length = map.length();
    let area = c.signed_area();
    let closes = area.abs() <= 1e-10 * length * length;
    if require_closed && !closes {
        return Err(Error::ClosureFailed { area });
    }
    let height = LiftHeight::new(&c, base.u);
    // Remove the residual drift of an (numerically) area-free curve so that
    // the samples close exactly.
    let drift = if closes { height.drift() } else { 0.0 };
    let h = if closes { length / n as f64 } else { length / (n - 1) as f64 };
    let mut samples = Vec::with_capacity(n);
    for j in 0..n {
        let s = j as f64 * h;
        let t = if j == n - 1 && !closes { tau } else { map.parameter(s) };
        let jet = jet_from_complex(&zeta, t);
        let cj = curvature_jet(&jet).ok_or(Error::NotImmersed { t })?;
        let u = height.eval(t) - drift * t / tau;
        samples.push(KnotSample {
            s,
            point: HPoint::from_z(jet[0], u),
            tangent: cj.tangent,
            kappa: cj.kappa,
            kappa1: cj.kappa1,
            kappa2: cj.kappa2,
        });
    }
    let prov = format!("lift of order-{} Fourier curve", c.order());
    LegendrianKnot::from_samples(closes, length, samples, prov, 0.0)
}

/// Lift of `c` starting above `c(0)` at height 0, required to close.
pub fn lift_closed(c: &PlanarCurve, n: usize) -> Result<LegendrianKnot> {
    let z = c.point(0.0);
    lift(c, HPoint::new(z.re, z.im, 0.0), n, true)
}

/// The standard test knot: lift of the Gerono lemniscate.
pub fn gerono_knot(n: usize) -> Result<LegendrianKnot> {
    Ok(lift_closed(&PlanarCurve::gerono(), n)?.with_provenance("Gerono lemniscate lift"))
}

fn unit_direction(a: f64, b: f64) -> Result<Complex64> {
    let e = Complex64::new(a, b);
    let r = e.norm();
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::ZeroDirection);
    }
    Ok(e / r)
}

/// Samples of the affine Legendrian line through `p0` with direction `(a, b)`
/// for arc length `s ∈ [t_range.0, t_range.1]`.
pub fn infinite_r_circle(p0: HPoint, a: f64, b: f64, t_range: (f64, f64), n: usize) -> Result<LegendrianKnot> {
    let e = unit_direction(a, b)?;
    let (t0, t1) = t_range;
    if !(t1 > t0) || n < 12 {
        return Err(Error::InvalidArgument("need an increasing range and at least 12 samples".into()));
    }
    Ok(LegendrianKnot::line(p0, e, t0, t1 - t0, n))
}

/// Parameter of closest approach to the origin along the line and the
/// Koranyi norm there.
fn line_closest_approach(p0: HPoint, e: Complex64) -> (f64, f64) {
    let norm4 = |t: f64| {
        let q = line_point(p0, e, t);
        let r2 = q.x * q.x + q.y * q.y;
        r2 * r2 + 16.0 * q.u * q.u
    };
    let r = 4.0 * (1.0 + p0.z().norm() + p0.u.abs().sqrt());
    let k = 4000;
    let (mut best, mut tb) = (f64::INFINITY, 0.0);
    for i in 0..=k {
        let t = -r + 2.0 * r * i as f64 / k as f64;
        let f = norm4(t);
        if f < best {
            best = f;
            tb = t;
        }
    }
    let (mut lo, mut hi) = (tb - 2.0 * r / k as f64, tb + 2.0 * r / k as f64);
    for _ in 0..200 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if norm4(m1) < norm4(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let t = 0.5 * (lo + hi);
    (t, norm4(t).sqrt().sqrt())
}

/// Resamples the closed Legendrian curve `σ ↦ f(σ)`, `σ ∈ [0, P)`, at `n`
/// points uniform in the arc length of its projection. Curvature jets come
/// from a trigonometric interpolant of the projection on a fine grid.
pub(crate) fn resample_closed(
    f: &dyn Fn(f64) -> Result<HPoint>,
    period: f64,
    n: usize,
    provenance: String,
) -> Result<(LegendrianKnot, ArcLengthMap)> {
    let m = LENGTH_TABLE.max(8 * n);
    let mut z = Vec::with_capacity(m);
    for j in 0..m {
        let p = f(period * j as f64 / m as f64)?;
        if !(koranyi_norm(p) < IMAGE_BOUND) {
            return Err(Error::ImageUnbounded);
        }
        z.push(p.z());
    }
    let series = PeriodicSeries::from_samples(&z, period, SERIES_NOISE);
    if 2 * series.bandwidth() + 1 >= m {
        return Err(Error::Numerical("image curve is not resolved by the resampling grid".into()));
    }
    let d1 = series.derivative_samples(1, m);
    let d2 = series.derivative_samples(2, m);
    let v: Vec<f64> = d1.iter().map(|d| d.norm()).collect();
    let dv: Vec<f64> = d1.iter().zip(&d2).zip(&v).map(|((a, b), s)| (a.conj() * b).re / s).collect();
    let map = ArcLengthMap::new(&v, &dv, period)?;
    let length = map.length();
    let h = length / n as f64;
    let mut samples = Vec::with_capacity(n);
    for j in 0..n {
        let s = j as f64 * h;
        let sigma = map.parameter(s);
        let jet = series.jet(sigma);
        let cj = curvature_jet(&jet).ok_or(Error::NotImmersed { t: sigma })?;
        samples.push(KnotSample {
            s,
            point: f(sigma)?,
            tangent: cj.tangent,
            kappa: cj.kappa,
            kappa1: cj.kappa1,
            kappa2: cj.kappa2,
        });
    }
    let gap = crate::heisenberg::koranyi_dist(f(0.0)?, f(period)?);
    let knot = LegendrianKnot::from_samples(true, length, samples, provenance, gap)?;
    Ok((knot, map))
}

/// Image of the infinite R-circle through `p0` with direction `(a, b)` under
/// the Koranyi inversion: a closed knot through the origin.
pub fn finite_r_circle(p0: HPoint, a: f64, b: f64, n: usize) -> Result<LegendrianKnot> {
    if n < 64 || n % 2 != 0 {
        return Err(Error::InvalidArgument(format!("sample count must be even and at least 64, got {n}")));
    }
    let e = unit_direction(a, b)?;
    let (tc, dmin) = line_closest_approach(p0, e);
    if !(dmin > 1e-6) {
        return Err(Error::LineThroughOrigin);
    }
    let half_pi = std::f64::consts::FRAC_PI_2;
    let f = move |sigma: f64| -> Result<HPoint> {
        let phi = sigma - half_pi;
        if phi <= -half_pi {
            return Ok(HPoint::ORIGIN);
        }
        let t = tc + dmin * phi.tan();
        match invert(ExtendedPoint::Finite(line_point(p0, e, t))) {
            ExtendedPoint::Finite(q) => Ok(q),
            ExtendedPoint::Infinity => Err(Error::LineThroughOrigin),
        }
    };
    let prov = format!("finite R-circle: inverted line through ({}, {}, {}) direction ({a}, {b})", p0.x, p0.y, p0.u);
    Ok(resample_closed(&f, std::f64::consts::PI, n, prov)?.0)
}

/// A knot mapped by a Moebius transformation together with the arc-length
/// correspondence between source and image.
#[derive(Debug, Clone)]
pub struct MobiusImage {
    pub knot: LegendrianKnot,
    map: ArcLengthMap,
}

impl MobiusImage {
    /// Image arc length of the point with source arc length `s`.
    pub fn image_arclength(&self, s: f64) -> f64 {
        self.map.arclength(s)
    }

    /// Source arc length of the point with image arc length `s`.
    pub fn source_arclength(&self, s: f64) -> f64 {
        self.map.parameter(s)
    }
}

/// Image of a closed knot under `t`, resampled with the same sample count.
pub fn mobius_image(k: &LegendrianKnot, t: &MobiusMatrix) -> Result<MobiusImage> {
    if !k.is_closed() {
        return Err(Error::Unsupported("Moebius image of an open curve".into()));
    }
    let s0 = k.s_start();
    let f = |s: f64| t.apply_finite(k.point_at(s0 + s));
    let prov = format!("Moebius image of [{}]", k.provenance());
    let (knot, map) = resample_closed(&f, k.length(), k.len(), prov)?;
    Ok(MobiusImage { knot, map })
}

/// Koranyi gap between the two passes of the pinch curve's lift over the
/// origin, after rescaling the curve to length `2π`.
pub fn pinch_gap(mu: f64) -> f64 {
    let c = PlanarCurve::pinch(mu);
    let lambda = std::f64::consts::TAU / c.length();
    let h = LiftHeight::new(&c, 0.0);
    let du = h.eval(0.5 * std::f64::consts::PI) - h.eval(1.5 * std::f64::consts::PI);
    lambda * 2.0 * du.abs().sqrt()
}

/// Pinch parameter `μ ∈ [0.3, 0.4)` whose normalised lift has gap `sigma`.
pub fn pinch_parameter(sigma: f64) -> Result<f64> {
    let (mut lo, mut hi) = (0.3, 0.4);
    if !(sigma > 0.0 && sigma < pinch_gap(lo)) {
        return Err(Error::InvalidArgument(format!("pinch gap {sigma} out of range")));
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if pinch_gap(mid) > sigma {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Lift of the pinch curve with gap `sigma`, rescaled to length `2π`.
pub fn pinch_knot(sigma: f64, n: usize) -> Result<LegendrianKnot> {
    let mu = pinch_parameter(sigma)?;
    let c = PlanarCurve::pinch(mu);
    let c = c.scaled(std::f64::consts::TAU / c.length());
    Ok(lift_closed(&c, n)?.with_provenance(format!("pinch curve, gap {sigma}, mu {mu}")))
}

