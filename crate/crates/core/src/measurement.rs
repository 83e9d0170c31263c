//! Alice's sharp position / momentum measurements and the induced collapse
//! of Bob's photon.
//!
//! Ideal eigenstates are replaced by grid-cell projectors: outcome `i` is the
//! `i`-th row of ψ (position) or of its transform along Alice's axis
//! (momentum), and the conditional state is that row, normalized.

use serde::Serialize;

use crate::numerics::{born_sample, ComplexField1D, ComplexField2D, Direction, GridSpec, SeededSampler};
use crate::source::ReducedStateB;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum MeasurementChoice {
    PositionY,
    MomentumY,
}

impl MeasurementChoice {
    pub const ALL: [MeasurementChoice; 2] = [MeasurementChoice::PositionY, MeasurementChoice::MomentumY];

    pub fn name(self) -> &'static str {
        match self {
            MeasurementChoice::PositionY => "position",
            MeasurementChoice::MomentumY => "momentum",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OutcomeRecord {
    pub basis: MeasurementChoice,
    pub bin_index: usize,
    /// Position (m) or wavenumber (rad/m) of the outcome cell.
    pub value: f64,
    pub probability: f64,
}

#[derive(Debug, Clone)]
pub struct ConditionalState {
    pub outcome: OutcomeRecord,
    pub state_b: ComplexField1D,
    pub weight: f64,
}

/// ψ expressed in the basis Alice measures.
fn in_basis(psi: &ComplexField2D, choice: MeasurementChoice) -> std::borrow::Cow<'_, ComplexField2D> {
    match choice {
        MeasurementChoice::PositionY => std::borrow::Cow::Borrowed(psi),
        MeasurementChoice::MomentumY => std::borrow::Cow::Owned(psi.dft_axis_a(Direction::Forward)),
    }
}

fn row_weights(psi: &ComplexField2D) -> Vec<f64> {
    let s = psi.grid_a().spacing() * psi.grid_b().spacing();
    psi.rows()
        .map(|r| r.iter().map(|v| v.norm_sqr()).sum::<f64>() * s)
        .collect()
}

fn branch(psi: &ComplexField2D, choice: MeasurementChoice, i: usize, grid_out: &GridSpec) -> Option<ConditionalState> {
    let f = ComplexField1D::new(*psi.grid_b(), psi.row(i).to_vec()).ok()?;
    let (state_b, m) = f.normalized().ok()?;
    let weight = m * psi.grid_a().spacing();
    Some(ConditionalState {
        outcome: OutcomeRecord {
            basis: choice,
            bin_index: i,
            value: grid_out.position(i),
            probability: weight,
        },
        state_b,
        weight,
    })
}

/// Sample one outcome with Born probabilities and return Bob's collapsed state.
pub fn measure_alice(
    psi: &ComplexField2D,
    choice: MeasurementChoice,
    sampler: &mut SeededSampler,
) -> Result<ConditionalState> {
    psi.ensure_normalized()?;
    let rep = in_basis(psi, choice);
    let weights = row_weights(&rep);
    let i = born_sample(&weights, sampler)?;
    Ok(branch(&rep, choice, i, rep.grid_a()).expect("sampled rows carry nonzero weight"))
}

/// Every nonzero-probability branch, in outcome-index order.
pub fn enumerate_outcomes(psi: &ComplexField2D, choice: MeasurementChoice) -> Result<Vec<ConditionalState>> {
    psi.ensure_normalized()?;
    let rep = in_basis(psi, choice);
    let g = *rep.grid_a();
    Ok((0..g.n()).filter_map(|i| branch(&rep, choice, i, &g)).collect())
}

/// Collapse onto a specific outcome cell; `None` if it has zero probability.
pub fn collapse(psi: &ComplexField2D, choice: MeasurementChoice, bin_index: usize) -> Result<Option<ConditionalState>> {
    psi.ensure_normalized()?;
    let rep = in_basis(psi, choice);
    let g = *rep.grid_a();
    Ok(branch(&rep, choice, bin_index, &g))
}

/// Mix enumerated branches back into Bob's reduced state.
pub fn ensemble_state(branches: &[ConditionalState]) -> Result<ReducedStateB> {
    ReducedStateB::from_branches(branches.iter().map(|b| (b.weight, b.state_b.clone())).collect())
}
