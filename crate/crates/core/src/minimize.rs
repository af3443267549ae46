//! Descent of the energy over closed Legendrian knots given by zero-area
//! planar Fourier curves.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::curves::{lift_closed, PlanarCurve};
use crate::energy::energy_subtraction;
use crate::error::{Error, Result};

/// Objective value reported when the lifted knot is too close to a
/// self-intersection.
pub const BARRIER: f64 = 1e6;
/// Embeddedness margin below which the barrier is active.
pub const BARRIER_MARGIN: f64 = 1e-4;

const ARMIJO: f64 = 1e-4;
const MIN_STEP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Objective {
    pub energy: f64,
    pub margin: f64,
    pub barrier: bool,
}

impl Objective {
    pub fn value(&self) -> f64 {
        if self.barrier {
            BARRIER
        } else {
            self.energy
        }
    }
}

/// Energy of the lift of `c` after projection to zero area and dilation to
/// length `2π`, at `n` samples.
pub fn objective(c: &PlanarCurve, n: usize) -> Result<Objective> {
    let c = project_zero_area(c)?;
    let c = c.scaled(std::f64::consts::TAU / c.length());
    let k = lift_closed(&c, n)?;
    let margin = k.embeddedness_margin();
    if !(margin >= BARRIER_MARGIN) {
        return Ok(Objective { energy: f64::NAN, margin, barrier: true });
    }
    Ok(Objective { energy: energy_subtraction(&k)?.value, margin, barrier: false })
}

pub fn project_zero_area(c: &PlanarCurve) -> Result<PlanarCurve> {
    c.project_zero_area()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinimizeOptions {
    pub max_iter: usize,
    pub fd_step: f64,
    pub init_step: f64,
    pub tol: f64,
    /// Samples inside the loop.
    pub samples: usize,
    /// Samples for the reported initial and final energies.
    pub final_samples: usize,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        MinimizeOptions { max_iter: 200, fd_step: 1e-4, init_step: 0.1, tol: 1e-6, samples: 256, final_samples: 1024 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceRow {
    pub iteration: usize,
    pub energy: f64,
    pub gradient_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizationState {
    pub coefficients: PlanarCurve,
    pub energy: f64,
    pub iteration: usize,
    pub step: f64,
    pub trace: Vec<TraceRow>,
    pub stalled: bool,
    pub initial_energy_final_samples: f64,
    pub energy_final_samples: f64,
}

/// Central-difference gradient of the objective with respect to
/// [`PlanarCurve::to_vec`]; frozen coordinates get zero.
pub fn fd_gradient(c: &PlanarCurve, n: usize, fd_step: f64) -> Result<Vec<f64>> {
    let v = c.to_vec();
    let frozen = translation_indices(c);
    (0..v.len())
        .into_par_iter()
        .map(|i| {
            if frozen.contains(&i) {
                return Ok(0.0);
            }
            let at = |sign: f64| -> Result<f64> {
                let mut w = v.clone();
                w[i] += sign * fd_step;
                Ok(objective(&PlanarCurve::from_vec(&w)?, n)?.value())
            };
            Ok((at(1.0)? - at(-1.0)?) / (2.0 * fd_step))
        })
        .collect()
}

fn translation_indices(c: &PlanarCurve) -> [usize; 2] {
    [0, c.x_coeffs().len()]
}

/// Linearised constraints on a step `δ`: zero area change, no dilation, fixed
/// phases of the `±1` harmonics and fixed translation.
fn constraint_normals(c: &PlanarCurve) -> Vec<Vec<f64>> {
    let v = c.to_vec();
    let m = v.len();
    let yo = c.x_coeffs().len();
    let mut normals = vec![c.area_gradient(), v.clone()];
    for (i, _) in translation_indices(c).iter().enumerate() {
        let mut e = vec![0.0; m];
        e[translation_indices(c)[i]] = 1.0;
        normals.push(e);
    }
    if c.order() >= 1 {
        let zeta = c.complex_coeffs();
        let n = c.order();
        let (p, q) = (zeta[n + 1], zeta[n - 1]);
        // Im(conj ζ δζ) with δζ_{+1} = (δx_a + δy_b + i(δy_a - δx_b))/2 and
        // δζ_{-1} = (δx_a - δy_b + i(δy_a + δx_b))/2.
        let mut e = vec![0.0; m];
        e[1] = -0.5 * p.im;
        e[2] = -0.5 * p.re;
        e[yo + 1] = 0.5 * p.re;
        e[yo + 2] = -0.5 * p.im;
        normals.push(e);
        let mut e = vec![0.0; m];
        e[1] = -0.5 * q.im;
        e[2] = 0.5 * q.re;
        e[yo + 1] = 0.5 * q.re;
        e[yo + 2] = 0.5 * q.im;
        normals.push(e);
    }
    normals
}

/// Orthogonal projection of `g` onto the common null space of `normals`.
fn project_out(g: &[f64], normals: Vec<Vec<f64>>) -> Vec<f64> {
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for mut n in normals {
        let scale = dot(&n, &n).sqrt();
        for b in &basis {
            let p = dot(&n, b);
            n.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
        }
        let norm = dot(&n, &n).sqrt();
        if norm > 1e-10 * scale.max(1e-300) {
            basis.push(n.iter().map(|x| x / norm).collect());
        }
    }
    let mut out = g.to_vec();
    for b in &basis {
        let p = dot(&out, b);
        out.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
    }
    out
}

fn gauge_projection(c: &PlanarCurve, g: &[f64]) -> Vec<f64> {
    let mut p = project_out(g, constraint_normals(c));
    for i in translation_indices(c) {
        p[i] = 0.0;
    }
    p
}

/// Gradient projected onto the gauge-fixed tangent space of the zero-area
/// constraint.
pub fn projected_gradient(c: &PlanarCurve, n: usize, fd_step: f64) -> Result<Vec<f64>> {
    Ok(gauge_projection(c, &fd_gradient(c, n, fd_step)?))
}

/// Projected finite-difference gradient descent with Armijo backtracking.
pub fn minimize(c0: &PlanarCurve, options: MinimizeOptions) -> Result<OptimizationState> {
    let o = options;
    if !(o.fd_step > 0.0 && o.init_step > 0.0 && o.tol >= 0.0) {
        return Err(Error::InvalidArgument("fd_step and init_step must be positive, tol nonnegative".into()));
    }
    let mut c = project_zero_area(c0)?;
    c = c.scaled(std::f64::consts::TAU / c.length());
    let start = objective(&c, o.samples)?;
    if start.barrier {
        return Err(Error::NotEmbedded { margin: start.margin });
    }
    let initial_final = objective(&c, o.final_samples)?.value();
    let mut f = start.energy;
    let mut step = o.init_step;
    let mut trace = Vec::new();
    let mut stalled = false;
    let mut iteration = 0;
    while iteration < o.max_iter {
        let g = projected_gradient(&c, o.samples, o.fd_step)?;
        let gn2: f64 = g.iter().map(|x| x * x).sum();
        trace.push(TraceRow { iteration, energy: f, gradient_norm: gn2.sqrt() });
        if gn2.sqrt() < o.tol {
            break;
        }
        let v = c.to_vec();
        let mut accepted = None;
        let mut alpha = step;
        while alpha >= MIN_STEP {
            let w: Vec<f64> = v.iter().zip(&g).map(|(x, d)| x - alpha * d).collect();
            if let Some((trial, value)) = try_point(&w, o.samples) {
                if value <= f - ARMIJO * alpha * gn2 {
                    accepted = Some((trial, value));
                    break;
                }
            }
            alpha *= 0.5;
        }
        match accepted {
            Some((trial, value)) => {
                c = trial;
                f = value;
                iteration += 1;
                step = (2.0 * alpha).min(1e3 * o.init_step);
            }
            None => {
                stalled = true;
                break;
            }
        }
    }
    if iteration == o.max_iter {
        let gn = trace.last().map(|r| r.gradient_norm).unwrap_or(f64::NAN);
        trace.push(TraceRow { iteration, energy: f, gradient_norm: gn });
    }
    let energy_final_samples = objective(&c, o.final_samples)?.value();
    Ok(OptimizationState {
        coefficients: c,
        energy: f,
        iteration,
        step,
        trace,
        stalled,
        initial_energy_final_samples: initial_final,
        energy_final_samples,
    })
}

/// Projects, normalises and evaluates a trial coefficient vector.
fn try_point(w: &[f64], n: usize) -> Option<(PlanarCurve, f64)> {
    let c = project_zero_area(&PlanarCurve::from_vec(w).ok()?).ok()?;
    let c = c.scaled(std::f64::consts::TAU / c.length());
    let value = objective(&c, n).ok()?;
    (!value.barrier && value.energy.is_finite()).then_some((c, value.energy))
}

/// `i z` rotation and `t ↦ t + t0` shift generators, used by tests.
pub fn gauge_generators(c: &PlanarCurve) -> (Vec<f64>, Vec<f64>) {
    let i = Complex64::new(0.0, 1.0);
    let n = c.order() as i64;
    let zeta = c.complex_coeffs();
    let rot: Vec<Complex64> = zeta.iter().map(|z| i * z).collect();
    let shift: Vec<Complex64> = zeta.iter().enumerate().map(|(j, z)| i * (j as i64 - n) as f64 * z).collect();
    let real = |z: &[Complex64]| PlanarCurve::from_complex(z).expect("odd length").to_vec();
    (real(&rot), real(&shift))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projected_steps_keep_the_gauge() {
        let c = PlanarCurve::gerono().rotated(0.3).translated(Complex64::new(0.2, -0.1));
        let g: Vec<f64> = (0..c.to_vec().len()).map(|i| ((i * 7 + 3) % 5) as f64 - 2.0).collect();
        let p = gauge_projection(&c, &g);
        assert_eq!(p[0], 0.0);
        assert_eq!(p[c.x_coeffs().len()], 0.0);
        let eps = 1e-6;
        let moved: Vec<f64> = c.to_vec().iter().zip(&p).map(|(a, b)| a + eps * b).collect();
        let d = PlanarCurve::from_vec(&moved).unwrap();
        let n = c.order();
        let (z0, z1) = (c.complex_coeffs(), d.complex_coeffs());
        for k in [n - 1, n + 1] {
            assert!((z1[k].arg() - z0[k].arg()).abs() < 1e-10);
        }
        assert!((d.signed_area() - c.signed_area()).abs() < 1e-10);
        let scale: f64 = c.to_vec().iter().zip(&p).map(|(a, b)| a * b).sum();
        assert!(scale.abs() < 1e-12);
    }

    #[test]
    fn rotation_leaves_the_objective_unchanged() {
        let c = PlanarCurve::gerono();
        let a = objective(&c, 256).unwrap().value();
        let b = objective(&c.rotated(0.7), 256).unwrap().value();
        let d = objective(&c.scaled(2.0), 256).unwrap().value();
        assert!(a > 0.1);
        assert!((a - b).abs() < 1e-6);
        assert!((a - d).abs() < 1e-8);
    }
}
