//! Arc-length sampled Legendrian curves.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heisenberg::{h_mul, koranyi_dist, rotate, HPoint};
use crate::quadrature::{bracket_root, fd_weights, lagrange_stencil, lagrange_weights, STENCIL};

/// One arc-length sample of a knot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KnotSample {
    pub s: f64,
    pub point: HPoint,
    /// Unit tangent of the planar projection.
    pub tangent: Complex64,
    pub kappa: f64,
    pub kappa1: f64,
    pub kappa2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape {
    Sampled,
    /// The whole affine Legendrian line `origin · (s e, 0)`; samples cover a
    /// window of it.
    Line { origin: HPoint, direction: Complex64 },
}

/// An arc-length parametrised Legendrian curve.
///
/// Closed knots store `n` distinct samples at `s_j = j L / n`; open curves
/// store `n` samples spanning `[s_0, s_0 + L]` inclusive.
#[derive(Debug, Clone, PartialEq)]
pub struct LegendrianKnot {
    closed: bool,
    length: f64,
    samples: Vec<KnotSample>,
    provenance: String,
    closure_gap: f64,
    shape: Shape,
}

/// Largest dyadic arc-length window on which every base sample's chord is
/// strictly monotone, with the smallest distance at which a point outside the
/// window is reached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChordWindow {
    pub s_window: f64,
    pub t_max: f64,
}

impl LegendrianKnot {
    /// Validates uniform spacing and unit tangents. `closure_gap` records how
    /// far the underlying closed curve fails to close (0 for open curves).
    pub fn from_samples(
        closed: bool,
        length: f64,
        samples: Vec<KnotSample>,
        provenance: impl Into<String>,
        closure_gap: f64,
    ) -> Result<Self> {
        let n = samples.len();
        if n < STENCIL + 2 {
            return Err(Error::InvalidArgument(format!("need at least {} samples", STENCIL + 2)));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::InvalidArgument("knot length must be positive".into()));
        }
        let h = if closed { length / n as f64 } else { length / (n - 1) as f64 };
        let s0 = samples[0].s;
        for (j, smp) in samples.iter().enumerate() {
            if (smp.s - s0 - j as f64 * h).abs() > 1e-9 * length.max(1.0) {
                return Err(Error::InvalidArgument("samples are not uniform in arc length".into()));
            }
            if (smp.tangent.norm() - 1.0).abs() > 1e-10 {
                return Err(Error::InvalidArgument(format!("tangent at sample {j} is not a unit vector")));
            }
        }
        if closed && !(closure_gap <= 1e-9) {
            return Err(Error::ClosureFailed { area: closure_gap });
        }
        Ok(LegendrianKnot {
            closed,
            length,
            samples,
            provenance: provenance.into(),
            closure_gap,
            shape: Shape::Sampled,
        })
    }

    pub(crate) fn line(origin: HPoint, direction: Complex64, s_start: f64, length: f64, n: usize) -> Self {
        let h = length / (n - 1) as f64;
        let samples = (0..n)
            .map(|j| {
                let s = s_start + j as f64 * h;
                KnotSample {
                    s,
                    point: line_point(origin, direction, s),
                    tangent: direction,
                    kappa: 0.0,
                    kappa1: 0.0,
                    kappa2: 0.0,
                }
            })
            .collect();
        LegendrianKnot {
            closed: false,
            length,
            samples,
            provenance: format!(
                "infinite R-circle through ({}, {}, {}) direction ({}, {})",
                origin.x, origin.y, origin.u, direction.re, direction.im
            ),
            closure_gap: 0.0,
            shape: Shape::Line { origin, direction },
        }
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// True for the affine Legendrian lines built by `infinite_r_circle`.
    pub fn is_line(&self) -> bool {
        matches!(self.shape, Shape::Line { .. })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn samples(&self) -> &[KnotSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn closure_gap(&self) -> f64 {
        self.closure_gap
    }

    pub fn spacing(&self) -> f64 {
        let n = self.samples.len();
        if self.closed {
            self.length / n as f64
        } else {
            self.length / (n - 1) as f64
        }
    }

    pub fn s_start(&self) -> f64 {
        self.samples[0].s
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    /// Stencil indices and weights for local interpolation at `s`.
    fn stencil(&self, s: f64) -> ([usize; STENCIL], [f64; STENCIL]) {
        let n = self.samples.len() as i64;
        let h = self.spacing();
        let mut idx = [0usize; STENCIL];
        if self.closed {
            let (base, w) = lagrange_stencil(s - self.s_start(), h);
            for (k, i) in idx.iter_mut().enumerate() {
                *i = (base + k as i64).rem_euclid(n) as usize;
            }
            (idx, w)
        } else {
            let pos = (s - self.s_start()) / h;
            let base = (pos.floor() as i64 - (STENCIL as i64 / 2 - 1)).clamp(0, n - STENCIL as i64);
            for (k, i) in idx.iter_mut().enumerate() {
                *i = (base + k as i64) as usize;
            }
            (idx, lagrange_weights(pos - base as f64))
        }
    }

    /// Position at arc length `s`.
    pub fn point_at(&self, s: f64) -> HPoint {
        if let Shape::Line { origin, direction } = self.shape {
            return line_point(origin, direction, s);
        }
        let (idx, w) = self.stencil(s);
        let mut p = [0.0; 3];
        for (i, wk) in idx.iter().zip(w) {
            let q = self.samples[*i].point;
            p[0] += wk * q.x;
            p[1] += wk * q.y;
            p[2] += wk * q.u;
        }
        HPoint::new(p[0], p[1], p[2])
    }

    /// Unit planar tangent at arc length `s`.
    pub fn tangent_at(&self, s: f64) -> Complex64 {
        if let Shape::Line { direction, .. } = self.shape {
            return direction;
        }
        let (idx, w) = self.stencil(s);
        let t: Complex64 = idx.iter().zip(w).map(|(i, wk)| self.samples[*i].tangent * wk).sum();
        t / t.norm()
    }

    pub fn kappa_at(&self, s: f64) -> f64 {
        if self.is_line() {
            return 0.0;
        }
        let (idx, w) = self.stencil(s);
        idx.iter().zip(w).map(|(i, wk)| self.samples[*i].kappa * wk).sum()
    }

    /// Signed Koranyi chord `±d_H(γ(s0), γ(s))`, signed by `s - s0`.
    pub fn chord(&self, s0: f64, s: f64) -> f64 {
        let d = koranyi_dist(self.point_at(s0), self.point_at(s));
        if s < s0 {
            -d
        } else {
            d
        }
    }

    /// Derivative of the signed chord with respect to `s`, from the closed
    /// form `d' = (|Δz|^2 Re(conj Δz T) + 4 w Im(conj Δz T)) / d^3` with
    /// `w` the vertical part of `γ(s0)^{-1} γ(s)`.
    pub fn chord_derivative(&self, s0: f64, s: f64) -> f64 {
        let p = self.point_at(s0);
        let q = self.point_at(s);
        let t = self.tangent_at(s);
        let dz = q.z() - p.z();
        let w = q.u - p.u - 0.5 * (p.x * q.y - q.x * p.y);
        let r2 = dz.norm_sqr();
        let d2 = (r2 * r2 + 16.0 * w * w).sqrt();
        let d = d2.sqrt();
        let num = r2 * (dz.conj() * t).re + 4.0 * w * (dz.conj() * t).im;
        let dd = num / (d2 * d);
        if s < s0 {
            -dd
        } else {
            dd
        }
    }

    /// Arc-length distance; wraps around for closed knots.
    pub fn arc_dist(&self, s: f64, s2: f64) -> f64 {
        arc_distance(self.closed, self.length, s, s2)
    }

    /// Distances `d_H(γ(s0), γ(s0 + j h))` for `j = 0..n` (closed knots).
    pub fn distance_row(&self, s0: f64) -> Vec<f64> {
        let n = self.samples.len();
        let h = self.spacing();
        if let Some(i) = self.grid_index(s0) {
            let p = self.samples[i].point;
            (0..n).map(|j| koranyi_dist(p, self.samples[(i + j) % n].point)).collect()
        } else {
            let p = self.point_at(s0);
            (0..n).map(|j| koranyi_dist(p, self.point_at(s0 + j as f64 * h))).collect()
        }
    }

    /// Index of the sample at `s`, if `s` is a grid point.
    pub fn grid_index(&self, s: f64) -> Option<usize> {
        let h = self.spacing();
        let pos = (s - self.s_start()) / h;
        let r = pos.round();
        if (pos - r).abs() > 1e-9 {
            return None;
        }
        let n = self.samples.len() as i64;
        let i = r as i64;
        if self.closed {
            Some(i.rem_euclid(n) as usize)
        } else if (0..n).contains(&i) {
            Some(i as usize)
        } else {
            None
        }
    }

    /// `min d_H(p_i, p_j)` over sample pairs with arc distance at least `L/16`.
    pub fn embeddedness_margin(&self) -> f64 {
        let n = self.samples.len();
        let cut = self.length / 16.0;
        (0..n)
            .into_par_iter()
            .map(|i| {
                let p = self.samples[i].point;
                let mut m = f64::INFINITY;
                for j in (i + 1)..n {
                    if self.arc_dist(self.samples[i].s, self.samples[j].s) >= cut * (1.0 - 1e-12) {
                        m = m.min(koranyi_dist(p, self.samples[j].point));
                    }
                }
                m
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest Koranyi distance between samples.
    pub fn diameter(&self) -> f64 {
        let n = self.samples.len();
        (0..n)
            .into_par_iter()
            .map(|i| {
                let p = self.samples[i].point;
                (i + 1..n).map(|j| koranyi_dist(p, self.samples[j].point)).fold(0.0, f64::max)
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(0.0, f64::max)
    }

    /// Largest `|u̇ + ½(y ẋ - x ẏ)|` over the samples, with `u̇` from
    /// eighth-order finite differences of the `u` samples.
    pub fn horizontality_residual(&self) -> f64 {
        let n = self.samples.len();
        let h = self.spacing();
        let half = 4usize;
        let central: Vec<f64> = fd_weights(0.0, &(-4..=4).map(|k| k as f64).collect::<Vec<_>>(), 1);
        (0..n)
            .map(|i| {
                let du = if self.closed {
                    // Unwrap u relative to sample i; u is periodic.
                    (0..=2 * half)
                        .map(|k| central[k] * self.samples[(i + n + k - half) % n].point.u)
                        .sum::<f64>()
                        / h
                } else {
                    let lo = i.saturating_sub(half).min(n - 2 * half - 1);
                    let nodes: Vec<f64> = (lo..=lo + 2 * half).map(|j| j as f64 - i as f64).collect();
                    let w = fd_weights(0.0, &nodes, 1);
                    (lo..=lo + 2 * half).zip(w).map(|(j, wk)| wk * self.samples[j].point.u).sum::<f64>() / h
                };
                let smp = &self.samples[i];
                let (x, y) = (smp.point.x, smp.point.y);
                let t = smp.tangent;
                (du + 0.5 * (y * t.re - x * t.im)).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Safe chord window; see [`ChordWindow`].
    pub fn chord_window(&self) -> Result<ChordWindow> {
        if self.is_line() {
            return Ok(ChordWindow { s_window: f64::INFINITY, t_max: f64::INFINITY });
        }
        if !self.closed {
            return Err(Error::Unsupported("chord window of an open sampled curve".into()));
        }
        let n = self.samples.len();
        let h = self.spacing();
        let mut windows = Vec::new();
        let mut w = self.length / 4.0;
        while w / h >= 4.0 {
            windows.push(w);
            w /= 2.0;
        }
        let rows: Vec<(usize, Vec<f64>)> = (0..n)
            .into_par_iter()
            .map(|i| {
                let d = self.distance_row(self.samples[i].s);
                let mut fwd = 0;
                while fwd + 1 < n / 2 && d[fwd + 1] > d[fwd] {
                    fwd += 1;
                }
                let mut bwd = 0;
                while bwd + 1 < n / 2 && d[(n - bwd - 1) % n] > d[(n - bwd) % n] {
                    bwd += 1;
                }
                let mono = fwd.min(bwd);
                let tmax = windows
                    .iter()
                    .map(|w| {
                        let m = (w / h).floor() as usize;
                        let far = (m + 1..n - m).map(|j| d[j]).fold(f64::INFINITY, f64::min);
                        far.min(d[m]).min(d[n - m])
                    })
                    .collect();
                (mono, tmax)
            })
            .collect();
        for (k, w) in windows.iter().enumerate() {
            let m = (w / h).floor() as usize;
            if rows.iter().all(|(mono, _)| *mono >= m) {
                let t_max = rows.iter().map(|(_, t)| t[k]).fold(f64::INFINITY, f64::min);
                if t_max > 0.0 {
                    return Ok(ChordWindow { s_window: m as f64 * h, t_max });
                }
            }
        }
        Err(Error::Numerical("no monotone chord window found".into()))
    }

    /// Measure of `{s : d_H(γ(s0), γ(s)) < t}` for each radius in `ts`.
    pub fn ball_measure(&self, s0: f64, ts: &[f64]) -> Vec<f64> {
        if self.is_line() {
            return ts.iter().map(|t| 2.0 * t).collect();
        }
        let n = self.samples.len();
        let h = self.spacing();
        let d = if self.closed { self.distance_row(s0) } else { Vec::new() };
        let p0 = self.point_at(s0);
        let dist = |sig: f64| koranyi_dist(p0, self.point_at(s0 + sig));
        let tol = 1e-13 * self.length.max(1.0);
        ts.iter()
            .map(|&t| {
                if self.closed {
                    let mut crossings: Vec<(f64, bool)> = Vec::new();
                    for j in 0..n {
                        let (a, b) = (d[j], d[(j + 1) % n]);
                        if (a < t) != (b < t) {
                            let (sa, sb) = (j as f64 * h, (j + 1) as f64 * h);
                            let r = bracket_root(|x| dist(x) - t, sa, sb, a - t, b - t, tol);
                            crossings.push((r, a < t));
                        }
                    }
                    if crossings.is_empty() {
                        return self.length;
                    }
                    // Starts inside at σ = 0: exit, entry, ..., entry.
                    let mut total = 0.0;
                    let mut last_entry = 0.0;
                    for (r, exiting) in &crossings {
                        if *exiting {
                            total += r - last_entry;
                        } else {
                            last_entry = *r;
                        }
                    }
                    total + self.length - last_entry
                } else {
                    // Open sampled curve: scan the samples themselves.
                    let pts: Vec<f64> = self.samples.iter().map(|q| koranyi_dist(p0, q.point)).collect();
                    let mut total = 0.0;
                    let mut start = if pts[0] < t { Some(self.s_start()) } else { None };
                    for j in 0..n - 1 {
                        let (a, b) = (pts[j], pts[j + 1]);
                        if (a < t) != (b < t) {
                            let (sa, sb) = (self.samples[j].s - s0, self.samples[j + 1].s - s0);
                            let r = s0 + bracket_root(|x| dist(x) - t, sa, sb, a - t, b - t, tol);
                            match start.take() {
                                Some(st) => total += r - st,
                                None => start = Some(r),
                            }
                        }
                    }
                    if let Some(st) = start {
                        total += self.samples[n - 1].s - st;
                    }
                    total
                }
            })
            .collect()
    }

    /// Same curve traversed in the opposite direction.
    pub fn reversed(&self) -> Self {
        let n = self.samples.len();
        let mut out = self.clone();
        out.samples = (0..n)
            .map(|j| {
                let src = if self.closed { &self.samples[(n - j) % n] } else { &self.samples[n - 1 - j] };
                KnotSample {
                    s: self.s_start() + j as f64 * self.spacing(),
                    point: src.point,
                    tangent: -src.tangent,
                    kappa: -src.kappa,
                    kappa1: src.kappa1,
                    kappa2: -src.kappa2,
                }
            })
            .collect();
        if let Shape::Line { origin, direction } = self.shape {
            out.shape = Shape::Line { origin, direction: -direction };
            for smp in out.samples.iter_mut() {
                smp.point = line_point(origin, -direction, smp.s);
            }
        }
        out.provenance = format!("reversed {}", self.provenance);
        out
    }

    /// Image under the rotation `(z, u) ↦ (e^{iθ} z, u)`.
    pub fn rotated(&self, theta: f64) -> Self {
        let r = Complex64::from_polar(1.0, theta);
        let mut out = self.clone();
        for smp in out.samples.iter_mut() {
            smp.point = rotate(theta, smp.point);
            smp.tangent *= r;
        }
        if let Shape::Line { origin, direction } = self.shape {
            out.shape = Shape::Line { origin: rotate(theta, origin), direction: direction * r };
        }
        out
    }

    /// Image under left translation by `p0`.
    pub fn translated(&self, p0: HPoint) -> Self {
        let mut out = self.clone();
        for smp in out.samples.iter_mut() {
            smp.point = h_mul(p0, smp.point);
        }
        if let Shape::Line { origin, direction } = self.shape {
            out.shape = Shape::Line { origin: h_mul(p0, origin), direction };
        }
        out
    }
}

pub(crate) fn line_point(origin: HPoint, direction: Complex64, s: f64) -> HPoint {
    h_mul(origin, HPoint::new(s * direction.re, s * direction.im, 0.0))
}

pub fn arc_distance(closed: bool, length: f64, s: f64, s2: f64) -> f64 {
    let d = (s - s2).abs();
    if closed {
        let r = d.rem_euclid(length);
        r.min(length - r)
    } else {
        d
    }
}
