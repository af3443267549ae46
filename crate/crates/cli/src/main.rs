//! `legendrian`: energies, beta functions and invariance checks of
//! Legendrian knots from JSON curve specs.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use legendrian::curves::CurveSpec;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Energy,
    Beta,
    Invariance,
    CosineCheck,
    PsiFit,
    Residues,
    Minimize,
    OmegaCheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Subtraction,
    Hadamard,
    Cosine,
    Beta,
}

#[derive(Debug, Parser)]
#[command(name = "legendrian", version, about = "Moebius-invariant energy of Legendrian knots")]
pub struct Cli {
    #[arg(long, value_enum)]
    pub command: Command,
    /// Curve spec: a path to a JSON file or inline JSON.
    #[arg(long)]
    pub curve: String,
    #[arg(long, default_value_t = 1024, value_parser = clap::value_parser!(u32).range(64..=65536))]
    pub samples: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub zeta_re: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub zeta_im: f64,
    /// Split radius; defaults to half the safe chord window.
    #[arg(long)]
    pub eps0: Option<f64>,
    /// Output path; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Defaults to JSON for single results and CSV for tables.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    #[arg(long, default_value_t = 200)]
    pub max_iter: usize,
    /// Energy formulation for `energy`.
    #[arg(long, value_enum, default_value_t = Method::Subtraction)]
    pub method: Method,
}

/// Exit statuses 2 and 3.
#[derive(Debug)]
pub enum Failure {
    Validation(String),
    Numerical(String),
}

impl From<legendrian::Error> for Failure {
    fn from(e: legendrian::Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Validation(e.to_string())
        }
    }
}

pub enum Document {
    Single(Value),
    Table { header: Vec<&'static str>, rows: Vec<Vec<Value>>, extra: Value },
}

fn load_curve(arg: &str) -> Result<CurveSpec, Failure> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Failure::Validation(format!("cannot read curve file {arg}: {e}")))?
    };
    Ok(CurveSpec::from_json(&text)?)
}

fn name<T: ValueEnum>(v: T) -> String {
    v.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default()
}

fn metadata(cli: &Cli, spec: &CurveSpec) -> Value {
    let mut m = json!({
        "tool": "legendrian",
        "version": env!("CARGO_PKG_VERSION"),
        "command": name(cli.command),
        "curve": serde_json::to_value(spec).unwrap_or(Value::Null),
        "samples": cli.samples,
        "seed": cli.seed,
    });
    let map = m.as_object_mut().expect("object literal");
    match cli.command {
        Command::Energy => {
            map.insert("method".into(), json!(name(cli.method)));
        }
        Command::Beta => {
            map.insert("zeta".into(), json!([cli.zeta_re, cli.zeta_im]));
        }
        Command::Invariance | Command::OmegaCheck => {
            map.insert("trials".into(), json!(cli.trials));
        }
        Command::Minimize => {
            map.insert("max_iter".into(), json!(cli.max_iter));
        }
        _ => {}
    }
    if let Some(e) = cli.eps0 {
        map.insert("eps0".into(), json!(e));
    }
    m
}

fn render(cli: &Cli, meta: Value, doc: Document) -> String {
    match doc {
        Document::Single(v) => match cli.format.unwrap_or(Format::Json) {
            Format::Json => output::json_document(&meta, v),
            Format::Csv => output::csv_document(&meta, &["key", "value"], &output::flatten(&v)),
        },
        Document::Table { header, rows, extra } => {
            let mut meta = meta;
            if let (Value::Object(m), Value::Object(e)) = (&mut meta, extra) {
                m.extend(e);
            }
            match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => output::csv_document(&meta, &header, &rows),
                Format::Json => {
                    let rows: Vec<Value> = rows
                        .into_iter()
                        .map(|r| Value::Object(header.iter().map(|h| h.to_string()).zip(r).collect()))
                        .collect();
                    output::json_document(&meta, json!({ "rows": rows }))
                }
            }
        }
    }
}

fn run(cli: &Cli) -> Result<String, Failure> {
    if let Some(e) = cli.eps0 {
        if !(e > 0.0 && e.is_finite()) {
            return Err(Failure::Validation(format!("eps0 must be positive, got {e}")));
        }
    }
    if !(cli.zeta_re.is_finite() && cli.zeta_im.is_finite()) {
        return Err(Failure::Validation("zeta must be finite".into()));
    }
    if cli.samples % 2 != 0 {
        return Err(Failure::Validation(format!("samples must be even, got {}", cli.samples)));
    }
    if cli.trials == 0 || cli.trials > 100_000 {
        return Err(Failure::Validation(format!("trials must lie in [1, 100000], got {}", cli.trials)));
    }
    let spec = load_curve(&cli.curve)?;
    let doc = commands::execute(cli, &spec)?;
    Ok(render(cli, metadata(cli, &spec), doc))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let text = match run(&cli) {
        Ok(text) => text,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            return ExitCode::from(3);
        }
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string())
        }
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
