//! Whole-ensemble screen patterns: every Alice outcome pushed through Bob's
//! apparatus and weighted by its Born probability.

use rayon::prelude::*;
use serde::Serialize;

use super::pipeline::{propagate, Pipeline};
use crate::measurement::{enumerate_outcomes, MeasurementChoice, OutcomeRecord};
use crate::numerics::{BornDistribution, ComplexField2D, SeededSampler, WeightedHistogram};
use crate::{Error, Result};

/// How position-collapsed branches meet the directional filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Every branch is filtered. Bob's statistics follow from his reduced state.
    #[default]
    Physical,
    /// Position-collapsed branches skip the angular filter, as if a localized
    /// wave always travelled straight at the slits.
    PaperNarrative,
}

impl Mode {
    fn bypasses_filter(self, choice: MeasurementChoice) -> bool {
        self == Mode::PaperNarrative && choice == MeasurementChoice::PositionY
    }
}

#[derive(Debug, Clone)]
pub struct PropagatedBranch {
    pub outcome: OutcomeRecord,
    /// Alice-side probability of the outcome.
    pub weight: f64,
    /// Probability of the outcome and of Bob registering a hit.
    pub accepted_weight: f64,
    /// Joint probability per screen bin; sums to `accepted_weight`.
    pub bin_masses: Vec<f64>,
}

/// Every branch of one Alice basis after Bob's apparatus.
#[derive(Debug, Clone)]
pub struct PropagatedEnsemble {
    choice: MeasurementChoice,
    mode: Mode,
    edges: Vec<f64>,
    branches: Vec<PropagatedBranch>,
    /// Branches with no accepted weight are kept but carry empty masses.
    blocked: usize,
}

impl PropagatedEnsemble {
    pub fn new(
        psi: &ComplexField2D,
        choice: MeasurementChoice,
        pipeline: &Pipeline,
        lambda: f64,
        mode: Mode,
    ) -> Result<Self> {
        pipeline.validate()?;
        let bypass = mode.bypasses_filter(choice);
        let outcomes = enumerate_outcomes(psi, choice)?;
        let nbins = pipeline.screen.n();
        let branches = outcomes
            .par_iter()
            .map(|c| {
                let r = propagate(&c.state_b, c.weight, pipeline, lambda, bypass)?;
                let bin_masses = r.bin_masses().unwrap_or_default();
                Ok(PropagatedBranch {
                    outcome: c.outcome,
                    weight: c.weight,
                    accepted_weight: if bin_masses.is_empty() { 0.0 } else { r.accepted_weight },
                    bin_masses,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let blocked = branches.iter().filter(|b| b.bin_masses.is_empty()).count();
        debug_assert!(branches.iter().all(|b| b.bin_masses.is_empty() || b.bin_masses.len() == nbins));
        Ok(Self {
            choice,
            mode,
            edges: pipeline.screen.edges(),
            branches,
            blocked,
        })
    }

    pub fn choice(&self) -> MeasurementChoice {
        self.choice
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn branches(&self) -> &[PropagatedBranch] {
        &self.branches
    }

    pub fn blocked_count(&self) -> usize {
        self.blocked
    }

    /// Probability that Bob registers a hit at all.
    pub fn accepted_total(&self) -> f64 {
        self.branches.iter().map(|b| b.accepted_weight).sum()
    }

    fn accumulate<'a>(&self, branches: impl Iterator<Item = &'a PropagatedBranch>, scale: f64) -> WeightedHistogram {
        let mut h = WeightedHistogram::new(self.edges.clone()).expect("screen edges");
        for b in branches {
            if !b.bin_masses.is_empty() {
                h.accumulate(&b.bin_masses, scale);
            }
        }
        h
    }

    /// Bob's joint detection probability per bin, summed over Alice outcomes.
    pub fn singles(&self) -> WeightedHistogram {
        self.accumulate(self.branches.iter(), 1.0)
    }

    /// Bob's pattern given that Alice's outcome passed `filter`, normalized
    /// by the Alice-side probability of the selection.
    pub fn coincidences(&self, filter: impl Fn(&OutcomeRecord) -> bool) -> Result<CoincidencePattern> {
        let selected: Vec<_> = self.branches.iter().filter(|b| filter(&b.outcome)).collect();
        let selected_mass: f64 = selected.iter().map(|b| b.weight).sum();
        let detected: f64 = selected.iter().map(|b| b.accepted_weight).sum();
        if selected.is_empty() || selected_mass <= 0.0 || detected <= 0.0 {
            return Err(Error::NoCoincidences);
        }
        Ok(CoincidencePattern {
            histogram: self.accumulate(selected.into_iter(), 1.0 / selected_mass),
            selected_mass,
        })
    }

    /// Monte Carlo counts of `detections` screen hits: a branch is drawn with
    /// probability ∝ its accepted weight, then a bin from that branch.
    pub fn sample_counts(&self, detections: u64, sampler: &mut SeededSampler) -> Result<WeightedHistogram> {
        let live: Vec<&PropagatedBranch> = self.branches.iter().filter(|b| !b.bin_masses.is_empty()).collect();
        let pick = BornDistribution::new(&live.iter().map(|b| b.accepted_weight).collect::<Vec<_>>())
            .map_err(|_| Error::EmptyPattern)?;
        let mut per_branch: Vec<Option<BornDistribution>> = vec![None; live.len()];
        let mut h = WeightedHistogram::new(self.edges.clone()).expect("screen edges");
        for _ in 0..detections {
            let i = pick.sample(sampler);
            let dist = match &mut per_branch[i] {
                Some(d) => d,
                slot => slot.insert(BornDistribution::new(&live[i].bin_masses)?),
            };
            h.add(dist.sample(sampler), 1.0);
        }
        Ok(h)
    }
}

/// Bob's conditional pattern. `histogram · selected_mass` is the joint
/// coincidence probability per bin, so partitions add back to the singles.
#[derive(Debug, Clone, Serialize)]
pub struct CoincidencePattern {
    pub histogram: WeightedHistogram,
    pub selected_mass: f64,
}

/// Bob's screen distribution without knowledge of Alice's outcomes.
pub fn singles_pattern(
    psi: &ComplexField2D,
    choice: MeasurementChoice,
    pipeline: &Pipeline,
    lambda: f64,
    mode: Mode,
) -> Result<WeightedHistogram> {
    Ok(PropagatedEnsemble::new(psi, choice, pipeline, lambda, mode)?.singles())
}

/// Bob's pattern conditioned on Alice's outcome passing `filter`.
pub fn coincidence_pattern(
    psi: &ComplexField2D,
    choice: MeasurementChoice,
    filter: impl Fn(&OutcomeRecord) -> bool,
    pipeline: &Pipeline,
    lambda: f64,
) -> Result<CoincidencePattern> {
    PropagatedEnsemble::new(psi, choice, pipeline, lambda, Mode::Physical)?.coincidences(filter)
}
