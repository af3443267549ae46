use legendrian::curves::{CurveSpec, LegendrianKnot};
use legendrian::distribution::{curvature_moments, psi_fit, residues};
use legendrian::energy::*;
use legendrian::heisenberg::koranyi_dist;
use legendrian::minimize::{minimize, MinimizeOptions};
use legendrian::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::{Cli, Command, Document, Failure, Method};

const FIT_POINTS: usize = 24;
const WORD_LENGTH: usize = 4;

fn value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn split_radius(cli: &Cli, k: &LegendrianKnot) -> Result<f64, Failure> {
    match cli.eps0 {
        Some(e) => Ok(e),
        None => Ok(0.5 * k.chord_window()?.t_max),
    }
}

fn complex(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

pub fn execute(cli: &Cli, spec: &CurveSpec) -> Result<Document, Failure> {
    if cli.command == Command::Minimize {
        return run_minimize(cli, spec);
    }
    let k = spec.build(cli.samples as usize)?;
    let doc = match cli.command {
        Command::Energy => energy(cli, &k)?,
        Command::Beta => beta(cli, &k)?,
        Command::Invariance => return invariance(cli, &k),
        Command::CosineCheck => cosine_check(&k)?,
        Command::PsiFit => fit(cli, &k)?,
        Command::Residues => residue_report(cli, &k)?,
        Command::OmegaCheck => omega_check(cli, &k)?,
        Command::Minimize => unreachable!(),
    };
    Ok(Document::Single(doc))
}

fn energy(cli: &Cli, k: &LegendrianKnot) -> Result<Value, Failure> {
    let report = match cli.method {
        Method::Subtraction => energy_subtraction(k)?,
        Method::Cosine => energy_cosine(k)?,
        Method::Hadamard => energy_hadamard(k, &default_eps_ladder(k)?)?,
        Method::Beta => {
            let b = beta_continued(k, Complex64::new(-2.0, 0.0), split_radius(cli, k)?)?;
            let mut v = json!({ "value": b.value.re, "method": "beta", "samples": k.len() });
            v["diagnostics"] = json!({ "epsilon0": b.epsilon0, "imaginary_part": b.value.im });
            v["length"] = json!(k.length());
            return Ok(v);
        }
    };
    let mut v = value(&report);
    v["length"] = json!(k.length());
    Ok(v)
}

fn beta(cli: &Cli, k: &LegendrianKnot) -> Result<Value, Failure> {
    let zeta = Complex64::new(cli.zeta_re, cli.zeta_im);
    let profile = if cli.eps0.is_none() && zeta.re > -1.0 {
        beta_direct(k, zeta)?
    } else {
        beta_continued(k, zeta, split_radius(cli, k)?)?
    };
    Ok(json!({
        "zeta": complex(profile.zeta),
        "value": complex(profile.value),
        "method": value(&profile.method),
        "epsilon0": profile.epsilon0,
        "length": k.length(),
        "length_squared": k.length() * k.length(),
    }))
}

fn invariance(cli: &Cli, k: &LegendrianKnot) -> Result<Document, Failure> {
    let (rows, summary) = invariance_trials(k, cli.seed, cli.trials, WORD_LENGTH)?;
    let mut table = Vec::with_capacity(rows.len() + 1);
    for r in &rows {
        if let Some(reason) = &r.skipped {
            eprintln!("trial {} skipped: {reason}", r.trial);
        }
        table.push(vec![
            json!(r.trial),
            json!(r.word),
            json!(r.energy),
            json!(r.image_energy),
            json!(r.deviation),
            json!(r.skipped),
        ]);
    }
    table.push(vec![
        json!("summary"),
        json!(format!("accepted {} skipped {}", summary.accepted, summary.skipped)),
        json!(rows.first().map(|r| r.energy)),
        Value::Null,
        json!(summary.max_deviation),
        Value::Null,
    ]);
    Ok(Document::Table {
        header: vec!["trial", "word", "energy", "image_energy", "abs_deviation", "skipped"],
        rows: table,
        extra: json!({
            "max_deviation": summary.max_deviation,
            "max_relative_deviation": summary.max_relative_deviation,
            "accepted": summary.accepted,
        }),
    })
}

fn cosine_check(k: &LegendrianKnot) -> Result<Value, Failure> {
    let s = energy_subtraction(k)?.value;
    let c = energy_cosine(k)?.value;
    Ok(json!({
        "subtraction": s,
        "cosine": c,
        "difference": c - s,
        "relative_difference": (c - s).abs() / s.abs().max(1.0),
    }))
}

fn fit(cli: &Cli, k: &LegendrianKnot) -> Result<Value, Failure> {
    let t_max = match cli.eps0 {
        Some(e) => e,
        None => k.chord_window()?.t_max,
    };
    let f = psi_fit(k, t_max, FIT_POINTS)?;
    let m = curvature_moments(k);
    let (e1, e3, e5) = (2.0 * k.length(), m.m2 / 36.0, m.m4full / 960.0);
    let mut v = value(&f);
    v["expected"] = json!({ "c1": e1, "c3": e3, "c5": e5 });
    v["relative_error"] = json!({
        "c1": (f.c1 - e1).abs() / e1.abs(),
        "c3": (f.c3 - e3).abs() / e3.abs().max(f64::MIN_POSITIVE),
    });
    Ok(v)
}

fn residue_report(cli: &Cli, k: &LegendrianKnot) -> Result<Value, Failure> {
    let r = residues(k)?;
    let m = curvature_moments(k);
    let ladder = residue_at_minus_one(k, split_radius(cli, k)?, &[0.05, 0.1])?;
    Ok(json!({
        "residues": value(&r),
        "moments": value(&m),
        "fourth_moment_relative_gap": (m.m4full - m.m4).abs() / m.m4.abs().max(f64::MIN_POSITIVE),
        "residue_at_minus_one": value(&ladder),
    }))
}

fn omega_check(cli: &Cli, k: &LegendrianKnot) -> Result<Value, Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let l = k.length();
    let (mut omega_dev, mut theta_dev) = (0.0f64, 0.0f64);
    for _ in 0..cli.trials {
        let s = rng.random_range(0.0..l);
        let s2 = s + rng.random_range(0.05..0.95) * l;
        let (p, q) = (k.point_at(s), k.point_at(s2));
        let w = omega(p, k.tangent_at(s), q, k.tangent_at(s2))?;
        let d = koranyi_dist(p, q);
        let expected = 2.0 / (d * d);
        omega_dev = omega_dev.max((w.norm() - expected).abs() / expected);
        theta_dev = theta_dev.max((theta_at(k, s, s2)? - theta_direct_at(k, s, s2)?).abs());
    }
    Ok(json!({
        "pairs": cli.trials,
        "max_omega_relative_deviation": omega_dev,
        "max_theta_deviation": theta_dev,
    }))
}

fn run_minimize(cli: &Cli, spec: &CurveSpec) -> Result<Document, Failure> {
    let c = spec
        .planar()?
        .ok_or_else(|| Failure::Validation("minimize needs a planar curve family".into()))?;
    let options = MinimizeOptions { max_iter: cli.max_iter, ..MinimizeOptions::default() };
    let st = minimize(&c, options)?;
    let rows = st
        .trace
        .iter()
        .map(|r| vec![json!(r.iteration), json!(r.energy), json!(r.gradient_norm)])
        .collect();
    Ok(Document::Table {
        header: vec!["iteration", "energy", "gradient_norm"],
        rows,
        extra: json!({
            "iterations": st.iteration,
            "stalled": st.stalled,
            "initial_energy": st.initial_energy_final_samples,
            "final_energy": st.energy_final_samples,
            "final_samples": options.final_samples,
            "coefficients": value(&st.coefficients),
        }),
    })
}
