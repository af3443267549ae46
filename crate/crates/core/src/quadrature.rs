//! Small numerical kernels shared by the higher modules: Gauss-Legendre rules,
//! finite-difference weights, local interpolation, FFTs and least squares.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = z;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// A composite Gauss-Legendre rule over a list of panel breakpoints.
#[derive(Debug, Clone)]
pub struct CompositeRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl CompositeRule {
    pub fn new(breaks: &[f64], order: usize) -> Self {
        let (x, w) = gauss_legendre(order);
        let mut nodes = Vec::with_capacity(order * breaks.len());
        let mut weights = Vec::with_capacity(order * breaks.len());
        for p in breaks.windows(2) {
            let (a, b) = (p[0], p[1]);
            let (m, r) = (0.5 * (a + b), 0.5 * (b - a));
            for (xi, wi) in x.iter().zip(&w) {
                nodes.push(m + r * xi);
                weights.push(r * wi);
            }
        }
        CompositeRule { nodes, weights }
    }
}

/// Panel breakpoints on `[a, b]`, graded geometrically towards both ends
/// starting from width `first` and capped at width `max`.
pub fn graded_breaks(a: f64, b: f64, first: f64, max: f64) -> Vec<f64> {
    let len = b - a;
    if len <= 0.0 {
        return vec![a, b];
    }
    let mut left = vec![0.0];
    let mut w = first.min(max);
    while left.last().unwrap() + w < 0.5 * len && w < max {
        left.push(left.last().unwrap() + w);
        w *= 2.0;
    }
    let edge = *left.last().unwrap();
    let inner = len - 2.0 * edge;
    let k = (inner / max).ceil().max(1.0) as usize;
    let mut out: Vec<f64> = left.iter().map(|d| a + d).collect();
    for i in 1..k {
        out.push(a + edge + inner * i as f64 / k as f64);
    }
    out.extend(left.iter().rev().map(|d| b - d));
    out
}

/// Finite-difference weights for the `m`-th derivative at `x0` from `nodes`
/// (Fornberg's recursion).
pub fn fd_weights(x0: f64, nodes: &[f64], m: usize) -> Vec<f64> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; m + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.iter().map(|r| r[m]).collect()
}

/// Number of nodes in the local interpolation stencil.
pub const STENCIL: usize = 10;

/// Barycentric Lagrange weights at `x` for the nodes `0, 1, ..., STENCIL-1`.
pub fn lagrange_weights(x: f64) -> [f64; STENCIL] {
    let mut w = [0.0; STENCIL];
    if let Some(k) = (0..STENCIL).find(|&k| x == k as f64) {
        w[k] = 1.0;
        return w;
    }
    let mut total = 0.0;
    let mut binom = 1.0;
    for (k, wk) in w.iter_mut().enumerate() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        *wk = sign * binom / (x - k as f64);
        total += *wk;
        binom = binom * (STENCIL - 1 - k) as f64 / (k + 1) as f64;
    }
    for wk in w.iter_mut() {
        *wk /= total;
    }
    w
}

/// Centred stencil for local interpolation on the uniform grid `j h`:
/// the first grid index (to be wrapped or clamped by the caller) and the
/// weights.
pub fn lagrange_stencil(s: f64, h: f64) -> (i64, [f64; STENCIL]) {
    let pos = s / h;
    let base = pos.floor() as i64 - (STENCIL as i64 / 2 - 1);
    (base, lagrange_weights(pos - base as f64))
}

/// Root of `f` in `[a, b]` given a sign change, by the Illinois variant of
/// regula falsi; stops when the bracket is shorter than `tol`.
pub fn bracket_root(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64, tol: f64) -> f64 {
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    let mut side = 0;
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        let mut c = (a * fb - b * fa) / (fb - fa);
        if !(c > a.min(b) && c < a.max(b)) {
            c = 0.5 * (a + b);
        }
        let fc = f(c);
        if fc == 0.0 {
            return c;
        }
        if (fc > 0.0) == (fb > 0.0) {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    (a * fb - b * fa) / (fb - fa)
}

pub fn fft(data: &mut [Complex64]) {
    FftPlanner::new().plan_fft_forward(data.len()).process(data);
}

/// Unnormalised inverse FFT.
pub fn ifft(data: &mut [Complex64]) {
    FftPlanner::new().plan_fft_inverse(data.len()).process(data);
}

/// Signed frequency of FFT bin `k` of length `m`.
pub fn freq(k: usize, m: usize) -> i64 {
    if k <= m / 2 {
        k as i64
    } else {
        k as i64 - m as i64
    }
}

/// Result of a linear least-squares fit.
#[derive(Debug, Clone)]
pub struct LstsqFit {
    pub coeffs: Vec<f64>,
    pub condition: f64,
    pub rms: f64,
}

/// Solves `min ‖A c - b‖` with column equilibration; `a` is row-major.
pub fn lstsq(a: &[Vec<f64>], b: &[f64], max_condition: f64) -> Result<LstsqFit> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    if rows < cols || cols == 0 {
        return Err(Error::InvalidArgument("underdetermined least-squares problem".into()));
    }
    let mut scale = vec![0.0; cols];
    for r in a {
        for (j, v) in r.iter().enumerate() {
            scale[j] = f64::max(scale[j], v.abs());
        }
    }
    if scale.iter().any(|s| *s == 0.0) {
        return Err(Error::IllConditioned { condition: f64::INFINITY });
    }
    let m = DMatrix::from_fn(rows, cols, |i, j| a[i][j] / scale[j]);
    let rhs = DVector::from_column_slice(b);
    let svd = m.clone().svd(true, true);
    let sv = &svd.singular_values;
    let condition = sv.max() / sv.min();
    if !(condition < max_condition) {
        return Err(Error::IllConditioned { condition });
    }
    let x = svd
        .solve(&rhs, 0.0)
        .map_err(|e| Error::Numerical(e.to_string()))?;
    let resid = &m * &x - &rhs;
    let rms = (resid.norm_squared() / rows as f64).sqrt();
    let coeffs = x.iter().zip(&scale).map(|(c, s)| c / s).collect();
    Ok(LstsqFit { coeffs, condition, rms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for n in [1, 2, 5, 10, 16] {
            let (x, w) = gauss_legendre(n);
            for deg in 0..2 * n {
                let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert_abs_diff_eq!(q, exact, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn graded_rule_resolves_endpoint_peak() {
        let eps = 1e-3;
        let breaks = graded_breaks(0.0, 1.0, eps / 4.0, 0.05);
        assert!(breaks.windows(2).all(|p| p[1] > p[0]));
        let rule = CompositeRule::new(&breaks, 10);
        let q: f64 = rule.nodes.iter().zip(&rule.weights).map(|(s, w)| w / (eps + s).powi(2)).sum();
        let exact = 1.0 / eps - 1.0 / (1.0 + eps);
        assert!((q - exact).abs() < 1e-11 * exact);
    }

    #[test]
    fn fd_weights_central() {
        let nodes = [-1.0, 0.0, 1.0];
        let w = fd_weights(0.0, &nodes, 1);
        assert_abs_diff_eq!(w[0], -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(w[2], 0.5, epsilon = 1e-15);
        let nodes: Vec<f64> = (-4..=4).map(|k| k as f64 * 0.05).collect();
        let w = fd_weights(0.0, &nodes, 1);
        let d: f64 = nodes.iter().zip(&w).map(|(x, w)| w * (1.3 * x).sin()).sum();
        assert!((d - 1.3).abs() < 1e-10);
    }

    #[test]
    fn lagrange_interpolates_smooth_data() {
        let h = 0.01;
        for s in [0.0, 0.123456, 0.5, 0.05] {
            let (base, w) = lagrange_stencil(s, h);
            let v: f64 = w.iter().enumerate().map(|(k, w)| w * ((base + k as i64) as f64 * h).exp()).sum();
            assert!((v - f64::exp(s)).abs() < 1e-14, "{s}");
        }
    }

    #[test]
    fn bracket_root_converges() {
        let r = bracket_root(|x| x * x - 2.0, 0.0, 2.0, -2.0, 2.0, 1e-14);
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
        let r = bracket_root(|x| (x - 0.3).powi(3), 0.0, 1.0, -0.027, 0.343, 1e-13);
        assert!((r - 0.3).abs() < 1e-9);
    }

    #[test]
    fn lstsq_recovers_polynomial() {
        let ts: Vec<f64> = (1..20).map(|k| k as f64 * 0.01).collect();
        let a: Vec<Vec<f64>> = ts.iter().map(|t| vec![*t, t.powi(3), t.powi(5)]).collect();
        let b: Vec<f64> = ts.iter().map(|t| 2.0 * t - 0.5 * t.powi(3) + 3.0 * t.powi(5)).collect();
        let fit = lstsq(&a, &b, 1e12).unwrap();
        assert!((fit.coeffs[0] - 2.0).abs() < 1e-10);
        assert!((fit.coeffs[1] + 0.5).abs() < 1e-7);
        assert!((fit.coeffs[2] - 3.0).abs() < 1e-3);
    }
}
