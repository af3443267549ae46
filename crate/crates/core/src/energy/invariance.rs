//! Energy of a knot against the energy of its images under random Moebius
//! maps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::energy_subtraction;
use crate::curves::{mobius_image, LegendrianKnot};
use crate::error::Result;
use crate::mobius::{Word, WordBounds};

/// Image knots with a Koranyi diameter outside this range are skipped.
pub const DIAMETER_WINDOW: (f64, f64) = (0.1, 50.0);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvarianceRow {
    pub trial: usize,
    pub word: String,
    pub energy: f64,
    pub image_energy: Option<f64>,
    pub deviation: Option<f64>,
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvarianceSummary {
    pub accepted: usize,
    pub skipped: usize,
    pub max_deviation: f64,
    pub max_relative_deviation: f64,
}

/// Compares `E(K)` with `E(T K)` for `trials` words of `word_length`
/// generators drawn from `seed`.
pub fn invariance_trials(
    k: &LegendrianKnot,
    seed: u64,
    trials: usize,
    word_length: usize,
) -> Result<(Vec<InvarianceRow>, InvarianceSummary)> {
    let energy = energy_subtraction(k)?.value;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(trials);
    for trial in 0..trials {
        let word = Word::random(rng.random(), word_length, WordBounds::default())?;
        let mut row = InvarianceRow {
            trial,
            word: word.to_string(),
            energy,
            image_energy: None,
            deviation: None,
            skipped: None,
        };
        match evaluate(k, &word) {
            Ok(e) => {
                row.image_energy = Some(e);
                row.deviation = Some((e - energy).abs());
            }
            Err(reason) => row.skipped = Some(reason),
        }
        rows.push(row);
    }
    let accepted: Vec<f64> = rows.iter().filter_map(|r| r.deviation).collect();
    let max_deviation = accepted.iter().copied().fold(0.0, f64::max);
    let summary = InvarianceSummary {
        accepted: accepted.len(),
        skipped: rows.len() - accepted.len(),
        max_deviation,
        max_relative_deviation: max_deviation / energy.abs().max(1.0),
    };
    Ok((rows, summary))
}

fn evaluate(k: &LegendrianKnot, word: &Word) -> std::result::Result<f64, String> {
    let image = word.matrix().and_then(|m| mobius_image(k, &m)).map_err(|e| e.to_string())?;
    let d = image.knot.diameter();
    if !(d >= DIAMETER_WINDOW.0 && d <= DIAMETER_WINDOW.1) {
        return Err(format!("image diameter {d:.6e} outside [{}, {}]", DIAMETER_WINDOW.0, DIAMETER_WINDOW.1));
    }
    energy_subtraction(&image.knot).map(|r| r.value).map_err(|e| e.to_string())
}
