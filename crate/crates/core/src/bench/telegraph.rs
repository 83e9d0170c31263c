//! Alice sends bits by choosing her measurement basis; Bob decodes each bit
//! from the visibility of his accumulated singles.

use serde::Serialize;

use super::{mode_name, BenchSpec};
use crate::measurement::MeasurementChoice;
use crate::numerics::{SeededSampler, WeightedHistogram};
use crate::optics::{visibility, PropagatedEnsemble};
use crate::{Error, Result};

/// Visibility above which Bob reads fringes, i.e. bit 0.
pub const CLASSIFY_THRESHOLD: f64 = 0.5;

/// Bit encoding: 0 is a momentum measurement, 1 a position measurement.
pub fn choice_for_bit(bit: u8) -> MeasurementChoice {
    if bit == 0 {
        MeasurementChoice::MomentumY
    } else {
        MeasurementChoice::PositionY
    }
}

/// Decode a screen pattern: `(bit, visibility)` at the double-slit period.
pub fn classify_pattern(hist: &WeightedHistogram, spec: &BenchSpec) -> Result<(u8, f64)> {
    let v = visibility(hist, spec.fringe_period())?;
    Ok((if v > CLASSIFY_THRESHOLD { 0 } else { 1 }, v))
}

#[derive(Debug, Clone, Serialize)]
pub struct TelegraphReport {
    pub bits_sent: String,
    pub bits_decoded: String,
    pub visibilities: Vec<f64>,
    pub bit_error_rate: f64,
    pub mode: &'static str,
    pub trials_per_bit: u64,
    pub seed: u64,
    pub threshold: f64,
}

fn parse_bits(bits: &str) -> Result<Vec<u8>> {
    if bits.is_empty() {
        return Err(Error::Telegraph("no bits to send".into()));
    }
    bits.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(Error::Telegraph(format!("bits must be 0 or 1, got {other:?}"))),
        })
        .collect()
}

/// Send `bits` through the bench. Each bit is a fresh run of `spec.run.trials`
/// detections on its own random stream, so bit `i` depends only on the seed,
/// `i` and the choice it encodes.
pub fn run_telegraph(spec: &BenchSpec, bits: &str) -> Result<TelegraphReport> {
    let sent = parse_bits(bits)?;
    let psi = spec.state()?;
    let pipeline = spec.pipeline();
    let mut ensembles: [Option<PropagatedEnsemble>; 2] = [None, None];
    let mut decoded = String::with_capacity(sent.len());
    let mut visibilities = Vec::with_capacity(sent.len());
    for (i, &bit) in sent.iter().enumerate() {
        let choice = choice_for_bit(bit);
        let ensemble = match &mut ensembles[bit as usize] {
            Some(e) => e,
            slot => slot.insert(PropagatedEnsemble::new(&psi, choice, &pipeline, spec.source.lambda, spec.run.mode)?),
        };
        let mut sampler = SeededSampler::with_stream(spec.run.seed, i as u64);
        let counts = ensemble.sample_counts(spec.run.trials, &mut sampler)?;
        let (b, v) = classify_pattern(&counts, spec)?;
        decoded.push(if b == 0 { '0' } else { '1' });
        visibilities.push(v);
    }
    let errors = bits.chars().zip(decoded.chars()).filter(|(a, b)| a != b).count();
    Ok(TelegraphReport {
        bits_sent: bits.to_string(),
        bit_error_rate: errors as f64 / sent.len() as f64,
        bits_decoded: decoded,
        visibilities,
        mode: mode_name(spec.run.mode),
        trials_per_bit: spec.run.trials,
        seed: spec.run.seed,
        threshold: CLASSIFY_THRESHOLD,
    })
}

/// `n` bits, half of them ones (rounded down), in seeded random order.
pub fn balanced_random_bits(n: usize, seed: u64) -> String {
    let mut bits: Vec<char> = (0..n).map(|i| if i < n / 2 { '1' } else { '0' }).collect();
    SeededSampler::new(seed).shuffle(&mut bits);
    bits.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::parse_bench;
    use crate::numerics::GridSpec;
    use crate::optics::{analytic_double_slit, analytic_single_slit, Mode};

    const SMALL: &str = "[source]\nlambda = 702e-9\nsigma_env = 28.08e-6\n[alice]\nn = 128\n\
                         [slits]\na = 30e-6\nd = 150e-6\n[screen]\nbins = 512\n[run]\ntrials = 4000\n";

    fn curve(f: impl Fn(f64) -> f64) -> WeightedHistogram {
        let g = GridSpec::new(2048, 0.04).unwrap();
        WeightedHistogram::from_weights(g.edges(), g.positions().map(|y| f(y) * g.spacing()).collect()).unwrap()
    }

    #[test]
    fn analytic_curves_decode() {
        let s = parse_bench(SMALL).unwrap();
        let (l, a, d) = (s.source.lambda, s.slits.a, s.slits.d);
        assert_eq!(classify_pattern(&curve(|y| analytic_double_slit(y, a, d, 1.0, l)), &s).unwrap().0, 0);
        assert_eq!(classify_pattern(&curve(|y| analytic_single_slit(y, a, 1.0, l)), &s).unwrap().0, 1);
    }

    #[test]
    fn narrative_mode_transmits_on_a_small_grid() {
        let mut s = parse_bench(SMALL).unwrap();
        s.run.mode = Mode::PaperNarrative;
        let r = run_telegraph(&s, "0110").unwrap();
        assert_eq!(r.bits_decoded, "0110");
        assert_eq!(r.bit_error_rate, 0.0);
    }

    #[test]
    fn physical_mode_decodes_a_constant() {
        let s = parse_bench(SMALL).unwrap();
        let r = run_telegraph(&s, "0101").unwrap();
        assert!(r.bits_decoded == "0000" || r.bits_decoded == "1111", "{}", r.bits_decoded);
        assert_eq!(r.bit_error_rate, 0.5);
    }

    #[test]
    fn runs_are_reproducible() {
        let s = parse_bench(SMALL).unwrap();
        let a = run_telegraph(&s, "10").unwrap();
        let b = run_telegraph(&s, "10").unwrap();
        assert_eq!(a.visibilities, b.visibilities);
    }

    #[test]
    fn bad_bits_and_blocked_apparatus() {
        let s = parse_bench(SMALL).unwrap();
        assert!(run_telegraph(&s, "").is_err());
        assert!(run_telegraph(&s, "01x").is_err());
        // slits pushed to the edge of a narrow screen catch nothing
        let mut blind = s;
        blind.screen.half_width = 1e-9;
        blind.screen.bins = 8;
        assert!(run_telegraph(&blind, "0").is_err());
    }

    #[test]
    fn balanced_bits() {
        let b = balanced_random_bits(100, 7);
        assert_eq!(b.len(), 100);
        assert_eq!(b.chars().filter(|&c| c == '1').count(), 50);
        assert_eq!(b, balanced_random_bits(100, 7));
        assert_ne!(b, balanced_random_bits(100, 8));
    }
}
