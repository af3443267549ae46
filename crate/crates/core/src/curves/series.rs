//! Trigonometric interpolants of periodic samples and the arc-length map.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{fft, freq, ifft};

/// `f(t) = Σ c_k exp(2πi k t / P)` for `|k| ≤ K`.
#[derive(Debug, Clone)]
pub struct PeriodicSeries {
    period: f64,
    /// Coefficients for frequencies `-K..=K`, index `k + K`.
    coeffs: Vec<Complex64>,
}

impl PeriodicSeries {
    /// Interpolant of `samples` taken at `t_j = j P / M`. Coefficients below
    /// `noise` times the largest one are treated as roundoff: the series is
    /// truncated at the last frequency above that level.
    pub fn from_samples(samples: &[Complex64], period: f64, noise: f64) -> Self {
        let m = samples.len();
        let mut c = samples.to_vec();
        fft(&mut c);
        for ck in c.iter_mut() {
            *ck /= m as f64;
        }
        let kmax = (m - 1) / 2;
        let big = c.iter().map(|x| x.norm()).fold(0.0, f64::max);
        let mut cut = 0;
        for k in 1..=kmax {
            if c[k].norm() > noise * big || c[m - k].norm() > noise * big {
                cut = k;
            }
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * cut + 1];
        for k in -(cut as i64)..=cut as i64 {
            let idx = if k >= 0 { k as usize } else { (m as i64 + k) as usize };
            coeffs[(k + cut as i64) as usize] = c[idx];
        }
        PeriodicSeries { period, coeffs }
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn bandwidth(&self) -> usize {
        (self.coeffs.len() - 1) / 2
    }

    /// Values of the function and its first four derivatives at `t`.
    pub fn jet(&self, t: f64) -> [Complex64; 5] {
        let kmax = self.bandwidth() as i64;
        let omega = std::f64::consts::TAU / self.period;
        let step = Complex64::from_polar(1.0, omega * t);
        let mut e = Complex64::from_polar(1.0, -omega * t * kmax as f64);
        let mut out = [Complex64::new(0.0, 0.0); 5];
        for (idx, c) in self.coeffs.iter().enumerate() {
            let k = idx as i64 - kmax;
            let ik = Complex64::new(0.0, omega * k as f64);
            let mut term = c * e;
            for o in out.iter_mut() {
                *o += term;
                term *= ik;
            }
            e *= step;
        }
        out
    }

    /// Samples of the `order`-th derivative on an `m`-point grid.
    pub fn derivative_samples(&self, order: u32, m: usize) -> Vec<Complex64> {
        let kmax = self.bandwidth();
        assert!(m > 2 * kmax, "grid too coarse for the series");
        let omega = std::f64::consts::TAU / self.period;
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for (idx, c) in self.coeffs.iter().enumerate() {
            let k = idx as i64 - kmax as i64;
            let ik = Complex64::new(0.0, omega * k as f64);
            let slot = if k >= 0 { k as usize } else { (m as i64 + k) as usize };
            buf[slot] = c * ik.powu(order);
        }
        ifft(&mut buf);
        buf
    }
}

/// Arc length `S(t)` of a periodic parametrisation, tabulated on a uniform
/// grid by spectral integration of the speed and interpolated by quintic
/// Hermite pieces.
#[derive(Debug, Clone)]
pub struct ArcLengthMap {
    period: f64,
    h: f64,
    /// `S`, `S' = v` and `S'' = v'` at the `M + 1` grid nodes.
    s: Vec<f64>,
    v: Vec<f64>,
    dv: Vec<f64>,
}

impl ArcLengthMap {
    /// `speed[j]`, `dspeed[j]` are `|γ'|` and its derivative at `t_j = j P / M`.
    pub fn new(speed: &[f64], dspeed: &[f64], period: f64) -> Result<Self> {
        let m = speed.len();
        if m < 8 || dspeed.len() != m {
            return Err(Error::InvalidArgument("arc-length table needs at least 8 matching samples".into()));
        }
        if let Some(j) = speed.iter().position(|v| !(*v > 0.0)) {
            return Err(Error::NotImmersed { t: j as f64 * period / m as f64 });
        }
        let mut c: Vec<Complex64> = speed.iter().map(|v| Complex64::new(*v, 0.0)).collect();
        fft(&mut c);
        let omega = std::f64::consts::TAU / period;
        let c0 = c[0].re / m as f64;
        let mut offset = 0.0;
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for k in 1..m {
            let f = freq(k, m);
            if 2 * f.unsigned_abs() as usize == m {
                continue;
            }
            let q = c[k] / (m as f64 * Complex64::new(0.0, omega * f as f64));
            buf[k] = q;
            offset += q.re;
        }
        ifft(&mut buf);
        let h = period / m as f64;
        let mut s: Vec<f64> = (0..m).map(|j| c0 * j as f64 * h + buf[j].re - offset).collect();
        s[0] = 0.0;
        s.push(c0 * period);
        let mut v = speed.to_vec();
        v.push(speed[0]);
        let mut dv = dspeed.to_vec();
        dv.push(dspeed[0]);
        if s.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Numerical("arc-length table is not monotone".into()));
        }
        Ok(ArcLengthMap { period, h, s, v, dv })
    }

    pub fn length(&self) -> f64 {
        *self.s.last().unwrap()
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    fn piece(&self, j: usize, tau: f64) -> (f64, f64) {
        let h = self.h;
        let (t2, t3) = (tau * tau, tau * tau * tau);
        let (t4, t5) = (t3 * tau, t3 * t2);
        let h0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
        let h1 = tau - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
        let h2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
        let h3 = 0.5 * t3 - t4 + 0.5 * t5;
        let h4 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
        let h5 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
        let d0 = -30.0 * t2 + 60.0 * t3 - 30.0 * t4;
        let d1 = 1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t4;
        let d2 = tau - 4.5 * t2 + 6.0 * t3 - 2.5 * t4;
        let d3 = 1.5 * t2 - 4.0 * t3 + 2.5 * t4;
        let d4 = -12.0 * t2 + 28.0 * t3 - 15.0 * t4;
        let d5 = -d0;
        let (f0, f1) = (self.s[j], self.s[j + 1]);
        let (g0, g1) = (self.v[j], self.v[j + 1]);
        let (q0, q1) = (self.dv[j], self.dv[j + 1]);
        let val = h0 * f0 + h * h1 * g0 + h * h * h2 * q0 + h * h * h3 * q1 + h * h4 * g1 + h5 * f1;
        let der = (d0 * f0 + h * d1 * g0 + h * h * d2 * q0 + h * h * d3 * q1 + h * d4 * g1 + d5 * f1) / h;
        (val, der)
    }

    /// `S(t)`, extended quasi-periodically outside `[0, P]`.
    pub fn arclength(&self, t: f64) -> f64 {
        let turns = (t / self.period).floor();
        let r = t - turns * self.period;
        let m = self.s.len() - 1;
        let j = ((r / self.h).floor() as usize).min(m - 1);
        let tau = (r - j as f64 * self.h) / self.h;
        turns * self.length() + self.piece(j, tau).0
    }

    /// Parameter `t` with `S(t) = s`, extended quasi-periodically.
    pub fn parameter(&self, s: f64) -> f64 {
        let len = self.length();
        let turns = (s / len).floor();
        let r = s - turns * len;
        let m = self.s.len() - 1;
        let j = match self.s.binary_search_by(|x| x.partial_cmp(&r).unwrap()) {
            Ok(j) => return turns * self.period + j as f64 * self.h,
            Err(j) => (j.max(1) - 1).min(m - 1),
        };
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        let mut tau = (r - self.s[j]) / (self.s[j + 1] - self.s[j]);
        for _ in 0..60 {
            let (val, der) = self.piece(j, tau);
            let f = val - r;
            if f.abs() <= 1e-15 * len.max(1.0) {
                break;
            }
            if f > 0.0 {
                hi = tau;
            } else {
                lo = tau;
            }
            let mut next = tau - f / (der * self.h);
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - tau).abs() < 1e-16 {
                tau = next;
                break;
            }
            tau = next;
        }
        turns * self.period + (j as f64 + tau) * self.h
    }
}
