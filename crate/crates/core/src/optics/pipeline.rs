use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::element::{apply_element, ElementOutcome, OpticalElement, BLOCKED_THRESHOLD};
use crate::measurement::ConditionalState;
use crate::numerics::{ComplexField1D, GridSpec};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Fraunhofer,
    Fresnel,
}

/// Bob's apparatus: elements in beam order, then free flight to a screen.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Pipeline {
    pub elements: Vec<OpticalElement>,
    pub screen_distance: f64,
    pub regime: Regime,
    /// Screen bins; bin `i` is centred at `screen.position(i)`.
    pub screen: GridSpec,
}

impl Pipeline {
    pub fn new(elements: Vec<OpticalElement>, screen_distance: f64, regime: Regime, screen: GridSpec) -> Result<Self> {
        let p = Self {
            elements,
            screen_distance,
            regime,
            screen,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.elements.is_empty() {
            return Err(Error::Pipeline("pipeline needs at least one element".into()));
        }
        if !(self.screen_distance.is_finite() && self.screen_distance > 0.0) {
            return Err(Error::Pipeline("screen distance must be positive".into()));
        }
        self.elements.iter().try_for_each(OpticalElement::validate)
    }

    /// Same pipeline without its directional filters.
    pub fn without_angular_filters(&self) -> Self {
        Self {
            elements: self.elements.iter().filter(|e| !e.is_angular_filter()).copied().collect(),
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone)]
pub struct PipelineResult {
    /// Branch weight times every acceptance, including the screen capture.
    pub accepted_weight: f64,
    /// Normalized over the screen window; `None` when blocked.
    pub screen_field: Option<ComplexField1D>,
}

impl PipelineResult {
    fn blocked() -> Self {
        Self {
            accepted_weight: 0.0,
            screen_field: None,
        }
    }

    pub fn is_blocked(&self) -> bool {
        self.screen_field.is_none()
    }

    /// Probability mass per screen bin, `accepted_weight · |E|² · Δ`.
    pub fn bin_masses(&self) -> Option<Vec<f64>> {
        let f = self.screen_field.as_ref()?;
        let s = self.accepted_weight * f.grid().spacing();
        Some(f.values().iter().map(|v| v.norm_sqr() * s).collect())
    }
}

/// Amplitude on the screen bins, unnormalized: its `norm_sqr` is the fraction
/// of the incoming probability that lands inside the window.
///
/// Fraunhofer uses `E(y) = √(k/2πD) Δ Σ f_n e^{-i k y y_n / D}`; Fresnel adds
/// the quadratic phases of the paraxial impulse response. Only nonzero input
/// samples are summed.
pub fn screen_field(field: &ComplexField1D, screen: &GridSpec, distance: f64, regime: Regime, lambda: f64) -> ComplexField1D {
    let k = 2.0 * PI / lambda;
    let alpha = k / distance;
    let grid = field.grid();
    let prefactor = (k / (2.0 * PI * distance)).sqrt() * grid.spacing();
    let ns = screen.n();
    let s0 = screen.position(0);
    let ds = screen.spacing();
    let mut out = vec![Complex64::new(0.0, 0.0); ns];
    const RESYNC: usize = 256;
    for (y, v) in grid.positions().zip(field.values()) {
        if *v == Complex64::new(0.0, 0.0) {
            continue;
        }
        let c = match regime {
            Regime::Fraunhofer => *v,
            Regime::Fresnel => v * Complex64::from_polar(1.0, alpha * y * y / 2.0),
        } * prefactor;
        let step = Complex64::from_polar(1.0, -alpha * ds * y);
        let mut ph = Complex64::new(0.0, 0.0);
        for (s, o) in out.iter_mut().enumerate() {
            if s % RESYNC == 0 {
                ph = Complex64::from_polar(1.0, -alpha * (s0 + s as f64 * ds) * y);
            }
            *o += c * ph;
            ph *= step;
        }
    }
    if regime == Regime::Fresnel {
        for (ys, o) in screen.positions().zip(out.iter_mut()) {
            *o *= Complex64::from_polar(1.0, alpha * ys * ys / 2.0);
        }
    }
    ComplexField1D::new(*screen, out).expect("screen length")
}

pub(crate) fn propagate(
    field: &ComplexField1D,
    weight: f64,
    pipeline: &Pipeline,
    lambda: f64,
    bypass_angular_filters: bool,
) -> Result<PipelineResult> {
    let mut current = std::borrow::Cow::Borrowed(field);
    let mut accepted = weight;
    for element in &pipeline.elements {
        if bypass_angular_filters && element.is_angular_filter() {
            continue;
        }
        match apply_element(&current, element, lambda)? {
            ElementOutcome::Transmitted { field, acceptance } => {
                accepted *= acceptance;
                current = std::borrow::Cow::Owned(field);
            }
            ElementOutcome::Blocked => return Ok(PipelineResult::blocked()),
        }
    }
    let far = screen_field(&current, &pipeline.screen, pipeline.screen_distance, pipeline.regime, lambda);
    let captured = far.norm_sqr();
    if captured < BLOCKED_THRESHOLD || accepted * captured <= 0.0 {
        return Ok(PipelineResult::blocked());
    }
    let (far, _) = far.normalized()?;
    Ok(PipelineResult {
        accepted_weight: (accepted * captured.min(1.0)).min(1.0),
        screen_field: Some(far),
    })
}

/// Push one collapsed branch through Bob's apparatus.
pub fn run_pipeline(state: &ConditionalState, pipeline: &Pipeline, lambda: f64) -> Result<PipelineResult> {
    pipeline.validate()?;
    propagate(&state.state_b, state.weight, pipeline, lambda, false)
}
