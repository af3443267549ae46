//! Acceptance suite: one PASS/FAIL line per criterion.

use std::time::Instant;

use legendrian::curves::{finite_r_circle, gerono_knot, mobius_image, pinch_knot, CurveSpec, LegendrianKnot};
use legendrian::distribution::{curvature_moments, psi_fit};
use legendrian::energy::*;
use legendrian::heisenberg::{koranyi_dist, koranyi_norm, HPoint};
use legendrian::minimize::{minimize, MinimizeOptions};
use legendrian::mobius::{MobiusMatrix, Word, WordBounds};
use legendrian::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn gerono() -> LegendrianKnot {
    gerono_knot(1024).unwrap()
}

fn r_circle(n: usize) -> LegendrianKnot {
    finite_r_circle(HPoint::new(1.0, 0.5, 0.3), 0.6, 0.8, n).unwrap()
}

fn split_radius(k: &LegendrianKnot) -> f64 {
    0.5 * k.chord_window().unwrap().t_max
}

fn random_point(rng: &mut ChaCha8Rng) -> HPoint {
    HPoint::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))
}

fn r_circle_minimality() -> Outcome {
    let t0 = Instant::now();
    let e = energy_subtraction(&r_circle(512)).map_err(|e| e.to_string())?.value;
    let dt = t0.elapsed().as_secs_f64();
    check(e.abs() <= 1e-3 && dt < 2.0, format!("E = {e:.3e}, {dt:.2} s"))
}

fn moebius_invariance() -> Outcome {
    let t0 = Instant::now();
    let k = gerono();
    let (rows, _) = invariance_trials(&k, 2024, 40, 4).map_err(|e| e.to_string())?;
    let e = rows[0].energy;
    let devs: Vec<f64> = rows.iter().filter_map(|r| r.deviation).take(10).collect();
    let worst = devs.iter().fold(0.0f64, |a, d| a.max(d / e.abs()));
    let dt = t0.elapsed().as_secs_f64();
    check(devs.len() == 10 && worst <= 1e-2 && dt < 30.0, format!("{} words, max rel {worst:.2e}, {dt:.1} s", devs.len()))
}

fn four_formulations() -> Outcome {
    let t0 = Instant::now();
    let mut detail = Vec::new();
    let mut ok = true;
    for k in [gerono(), r_circle(1024)] {
        let ladder = default_eps_ladder(&k).map_err(|e| e.to_string())?;
        let values = [
            energy_hadamard(&k, &ladder).map_err(|e| e.to_string())?.value,
            energy_subtraction(&k).map_err(|e| e.to_string())?.value,
            energy_cosine(&k).map_err(|e| e.to_string())?.value,
            beta_continued(&k, Complex64::new(-2.0, 0.0), split_radius(&k)).map_err(|e| e.to_string())?.value.re,
        ];
        for a in &values {
            for b in &values {
                let scale = a.abs().max(b.abs());
                ok &= (a - b).abs() <= (1e-2 * scale).max(1e-3);
            }
        }
        detail.push(format!("{values:.6?}"));
    }
    let dt = t0.elapsed().as_secs_f64();
    check(ok && dt < 60.0, format!("{} {dt:.1} s", detail.join(" ")))
}

fn residue_ladder() -> Outcome {
    let k = gerono();
    let r = residue_at_minus_one(&k, split_radius(&k), &[0.05, 0.1]).map_err(|e| e.to_string())?;
    let fit = psi_fit(&k, k.chord_window().unwrap().t_max, 24).map_err(|e| e.to_string())?;
    let m2 = curvature_moments(&k).m2;
    let e1 = (fit.c1 / (2.0 * k.length()) - 1.0).abs();
    let e3 = (fit.c3 / (m2 / 36.0) - 1.0).abs();
    check(
        r.relative_error <= 1e-2 && e1 <= 2e-2 && e3 <= 5e-2,
        format!("residue rel {:.2e}, c1 rel {e1:.2e}, c3 rel {e3:.2e}", r.relative_error),
    )
}

fn chord_asymptotics() -> Outcome {
    let k = gerono();
    let h = k.spacing();
    let mut worst = 0.0f64;
    for i in 0..20 {
        let sample = k.samples()[i * 51];
        let mut g: Vec<f64> = [8.0, 4.0, 2.0, 1.0]
            .iter()
            .map(|m| {
                let s = m * h;
                let odd = 0.5 * (k.chord(sample.s, sample.s + s) - k.chord(sample.s, sample.s - s));
                (odd - s) / (s * s * s)
            })
            .collect();
        let mut factor = 4.0;
        while g.len() > 1 {
            g = g.windows(2).map(|w| (factor * w[1] - w[0]) / (factor - 1.0)).collect();
            factor *= 4.0;
        }
        let expected = -sample.kappa * sample.kappa / 72.0;
        worst = worst.max((g[0] - expected).abs() / expected.abs());
    }
    check(worst <= 1e-2, format!("max rel {worst:.2e} over 20 base points"))
}

fn omega_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    let mut count = 0;
    while count < 1000 {
        let (p, q) = (random_point(&mut rng), random_point(&mut rng));
        let d = koranyi_dist(p, q);
        if d < 1e-3 {
            continue;
        }
        let v = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let v2 = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let w = omega(p, v, q, v2).map_err(|e| e.to_string())?;
        let expected = 2.0 * v.norm() * v2.norm() / (d * d);
        worst = worst.max((w.norm() - expected).abs() / expected);
        count += 1;
    }
    let k = gerono();
    let l = k.length();
    let mut theta_worst = 0.0f64;
    for _ in 0..200 {
        let s = rng.random_range(0.0..l);
        let s2 = s + rng.random_range(0.05..0.95) * l;
        let a = theta_at(&k, s, s2).map_err(|e| e.to_string())?;
        let b = theta_direct_at(&k, s, s2).map_err(|e| e.to_string())?;
        theta_worst = theta_worst.max((a - b).abs());
    }
    check(worst <= 1e-12 && theta_worst <= 1e-5, format!("|Ω| rel {worst:.2e}, θ {theta_worst:.2e}"))
}

fn cross_ratio_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    let mut count = 0;
    while count < 1000 {
        let ps: Vec<HPoint> = (0..4).map(|_| random_point(&mut rng)).collect();
        let word = Word::random(rng.random(), 4, WordBounds::default()).map_err(|e| e.to_string())?;
        let m = word.matrix().map_err(|e| e.to_string())?;
        let Ok(x) = cross_ratio(ps[0], ps[1], ps[2], ps[3]) else { continue };
        let images: Result<Vec<HPoint>, _> = ps.iter().map(|p| m.apply_finite(*p)).collect();
        let Ok(qs) = images else { continue };
        if !(x.norm() > 1e-6 && x.norm() < 1e6) || qs.iter().any(|q| koranyi_norm(*q) > 1e3) {
            continue;
        }
        let y = cross_ratio(qs[0], qs[1], qs[2], qs[3]).map_err(|e| e.to_string())?;
        worst = worst.max((x - y).norm() / x.norm());
        count += 1;
    }
    let k = gerono();
    let ladder: Vec<f64> = (0..5).map(|j| 0.02 * 0.5f64.powi(j)).collect();
    let mut inf_worst = 0.0f64;
    for (s, t) in [(0.3, 2.9), (1.0, 4.4), (5.0, 0.2), (2.2, 3.6)] {
        inf_worst = inf_worst.max(infinitesimal_cr_check(&k, s, t, &ladder).map_err(|e| e.to_string())?.deviation);
    }
    check(worst <= 1e-9 && inf_worst <= 1e-3, format!("max rel {worst:.2e}, infinitesimal {inf_worst:.2e}"))
}

fn d_alpha() -> Outcome {
    let p = HPoint::new(0.3, -0.2, 0.4);
    let q = HPoint::new(-0.5, 0.9, -0.1);
    let (v, v2) = (Complex64::from_polar(1.0, 0.4), Complex64::from_polar(1.0, 2.1));
    let r: Vec<f64> = [1e-2, 5e-3, 2.5e-3]
        .iter()
        .map(|h| d_alpha_check(p, q, v, v2, *h))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let orders: Vec<f64> = r.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    let shown: Vec<String> = r.iter().map(|x| format!("{x:.3e}")).collect();
    check(orders.iter().all(|o| (0.8..=1.2).contains(o)), format!("residuals [{}], orders {orders:.3?}", shown.join(", ")))
}

fn potential_inversion() -> Outcome {
    let k = gerono().translated(HPoint::new(0.4, 1.5, 0.3));
    let image = mobius_image(&k, &MobiusMatrix::inversion()).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for i in 0..20 {
        let s = (i as f64 + 0.3) * k.length() / 20.0;
        let v = potential(&k, s).map_err(|e| e.to_string())?;
        let vi = potential(&image.knot, image.image_arclength(s)).map_err(|e| e.to_string())?;
        let expected = koranyi_norm(k.point_at(s)).powi(2) * v;
        worst = worst.max((vi - expected).abs() / expected.abs());
    }
    check(worst <= 1e-3, format!("max rel {worst:.2e} over 20 base points"))
}

fn self_repulsion() -> Outcome {
    let energies: Vec<f64> = [0.2, 0.1, 0.05, 0.025]
        .iter()
        .map(|s| pinch_knot(*s, 2048).and_then(|k| energy_subtraction(&k)).map(|r| r.value))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let steps: Vec<f64> = energies.windows(2).map(|w| w[1] - w[0]).collect();
    check(steps.iter().all(|d| *d >= 2.0), format!("energies {energies:.4?}, increments {steps:.3?}"))
}

fn minimizer_descent() -> Outcome {
    let t0 = Instant::now();
    let json = r#"{"type":"perturbed_r_circle","p0":[1.0,0.0,0.0],"direction":[0.0,1.0],"order":6,"seed":3,"amplitude":0.05}"#;
    let c = CurveSpec::from_json(json).and_then(|s| s.planar()).map_err(|e| e.to_string())?.unwrap();
    let st = minimize(&c, MinimizeOptions::default()).map_err(|e| e.to_string())?;
    let monotone = st.trace.windows(2).all(|w| w[1].energy <= w[0].energy);
    let dt = t0.elapsed().as_secs_f64();
    let ratio = st.energy_final_samples / st.initial_energy_final_samples;
    check(
        ratio <= 0.1 && st.iteration <= 200 && monotone && dt < 300.0,
        format!(
            "E {:.3e} -> {:.3e} (ratio {ratio:.2e}) in {} iterations, monotone {monotone}, {dt:.0} s",
            st.initial_energy_final_samples, st.energy_final_samples, st.iteration
        ),
    )
}

fn fourth_moment() -> Outcome {
    let perturbed = CurveSpec::from_json(
        r#"{"type":"perturbed_r_circle","p0":[1.0,0.0,0.0],"direction":[0.0,1.0],"order":6,"seed":3,"amplitude":0.05}"#,
    )
    .and_then(|s| s.build(1024));
    let image = mobius_image(&gerono(), &MobiusMatrix::translation(HPoint::new(0.3, 0.2, 0.1))).map(|m| m.knot);
    let knots = [Ok(gerono()), Ok(r_circle(1024)), pinch_knot(0.1, 4096), perturbed, image];
    let mut worst = 0.0f64;
    for k in knots {
        let m = curvature_moments(&k.map_err(|e| e.to_string())?);
        worst = worst.max((m.m4full - m.m4).abs() / m.m4);
    }
    check(worst <= 1e-8, format!("max rel {worst:.2e} over 5 knots"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("R-circle minimality", r_circle_minimality),
        ("Moebius invariance", moebius_invariance),
        ("four-formulation agreement", four_formulations),
        ("residue ladder", residue_ladder),
        ("chord asymptotics", chord_asymptotics),
        ("Omega identities", omega_identities),
        ("cross-ratio invariance", cross_ratio_invariance),
        ("d alpha = Re Omega", d_alpha),
        ("potential inversion law", potential_inversion),
        ("self-repulsiveness trend", self_repulsion),
        ("minimizer descent", minimizer_descent),
        ("fourth-moment identity", fourth_moment),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
