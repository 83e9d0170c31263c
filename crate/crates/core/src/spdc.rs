//! Down-converted photon pairs in three longitudinal modes `j, k, m`, cut off
//! at one pair, and the detector-field correlators of the two readout schemes.
//!
//! Alice detects the signal photon either in the lens focal plane (a momentum
//! measurement, pairs in modes `j, k`) or in its imaging plane (a position
//! measurement, pairs in `j, m`). Bob's detectors `J'`, `K'` see idler modes.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Ratio;
use serde::Serialize;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeLabel {
    J,
    K,
    M,
}

impl ModeLabel {
    pub const ALL: [ModeLabel; 3] = [ModeLabel::J, ModeLabel::K, ModeLabel::M];

    fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Party {
    /// Alice's photon.
    Signal,
    /// Bob's photon.
    Idler,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ModeId {
    pub label: ModeLabel,
    pub party: Party,
}

impl ModeId {
    pub fn signal(label: ModeLabel) -> Self {
        Self { label, party: Party::Signal }
    }

    pub fn idler(label: ModeLabel) -> Self {
        Self { label, party: Party::Idler }
    }
}

pub const MAX_EPSILON: f64 = 0.1;

/// `|vac⟩ + Σ_X a_X |1 signal-X, 1 idler-X⟩`, unnormalized.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FockStateVector {
    pub epsilon: f64,
    /// Vacuum amplitude.
    pub vacuum: f64,
    /// Pair amplitudes in `j, k, m` order.
    pub pairs: [f64; 3],
}

impl FockStateVector {
    pub fn pair(&self, label: ModeLabel) -> f64 {
        self.pairs[label.index()]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.vacuum * self.vacuum + self.pairs.iter().map(|a| a * a).sum::<f64>()
    }

    pub fn vacuum_only() -> Self {
        Self {
            epsilon: 0.0,
            vacuum: 1.0,
            pairs: [0.0; 3],
        }
    }
}

/// Pair state populating modes `mu` and `nu` with amplitude `epsilon`.
pub fn make_spdc_state(epsilon: f64, mu: ModeLabel, nu: ModeLabel) -> Result<FockStateVector> {
    if mu == nu {
        return Err(Error::Spdc("the two pair modes must differ".into()));
    }
    if !(0.0..=MAX_EPSILON).contains(&epsilon) {
        return Err(Error::Spdc(format!("epsilon must lie in [0, {MAX_EPSILON}], got {epsilon}")));
    }
    let mut pairs = [0.0; 3];
    pairs[mu.index()] = epsilon;
    pairs[nu.index()] = epsilon;
    Ok(FockStateVector {
        epsilon,
        vacuum: 1.0,
        pairs,
    })
}

/// Positive-frequency detector field: `Σ phase · a_mode`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldOperator {
    pub terms: Vec<(ModeId, Complex64)>,
}

impl FieldOperator {
    pub fn new(terms: Vec<(ModeId, Complex64)>) -> Result<Self> {
        if terms.iter().any(|(_, p)| (p.norm() - 1.0).abs() > 1e-12) {
            return Err(Error::Spdc("field phases must have unit modulus".into()));
        }
        Ok(Self { terms })
    }

    pub fn coefficient(&self, mode: ModeId) -> Complex64 {
        self.terms.iter().filter(|(m, _)| *m == mode).map(|(_, p)| p).sum()
    }

    fn acts_only_on(&self, party: Party) -> bool {
        self.terms.iter().all(|(m, _)| m.party == party)
    }
}

/// Path lengths along each mode, plus the lens focal length `f` and the
/// crystal-to-slit distance `g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Geometry {
    /// Crystal point `J` to Bob's detector `J'` along idler `j`.
    pub r_jj: f64,
    /// Crystal point `K` to Bob's detector `K'` along idler `k`.
    pub r_kk: f64,
    /// `J` to Alice's focal-plane point along signal `j`.
    pub r_j_focal: f64,
    /// `K` to Alice's focal-plane point along signal `k`.
    pub r_k_focal: f64,
    /// `J` to Alice's imaging-plane point along signal `j`.
    pub r_j_image: f64,
    /// `J` to Alice's imaging-plane point along signal `m`.
    pub r_m_image: f64,
    pub f: f64,
    pub g: f64,
    pub lambda: f64,
}

impl Geometry {
    /// Nominal unfolded layout: Bob at `g + f`, the focal plane at `f`, the
    /// imaging plane at `2f`, with a small path difference between modes.
    pub fn nominal(f: f64, g: f64, lambda: f64) -> Result<Self> {
        let geom = Self {
            r_jj: g + f,
            r_kk: (g + f) * (1.0 + 1e-4),
            r_j_focal: f,
            r_k_focal: f * (1.0 + 2e-4),
            r_j_image: 2.0 * f,
            r_m_image: 2.0 * f * (1.0 + 3e-4),
            f,
            g,
            lambda,
        };
        geom.validate()?;
        Ok(geom)
    }

    pub fn validate(&self) -> Result<()> {
        let lengths = [
            ("r_jj", self.r_jj),
            ("r_kk", self.r_kk),
            ("r_j_focal", self.r_j_focal),
            ("r_k_focal", self.r_k_focal),
            ("r_j_image", self.r_j_image),
            ("r_m_image", self.r_m_image),
            ("f", self.f),
            ("lambda", self.lambda),
        ];
        for (name, v) in lengths {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Spdc(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.g.is_finite() && self.g >= 0.0) {
            return Err(Error::Spdc(format!("g must be non-negative, got {}", self.g)));
        }
        Ok(())
    }

    fn phase(&self, r: f64) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * PI / self.lambda * r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectorPoint {
    /// Bob's detector on idler `j`.
    JPrime,
    /// Bob's detector on idler `k`.
    KPrime,
    /// Alice in the focal plane, reached by signal `j` and `k`.
    AFocal,
    /// Alice in the imaging plane, reached by signal `j` and `m`.
    AImaging,
}

pub fn field_for(point: DetectorPoint, geom: &Geometry) -> FieldOperator {
    let terms = match point {
        DetectorPoint::JPrime => vec![(ModeId::idler(ModeLabel::J), geom.phase(geom.r_jj))],
        DetectorPoint::KPrime => vec![(ModeId::idler(ModeLabel::K), geom.phase(geom.r_kk))],
        DetectorPoint::AFocal => vec![
            (ModeId::signal(ModeLabel::J), geom.phase(geom.r_j_focal)),
            (ModeId::signal(ModeLabel::K), geom.phase(geom.r_k_focal)),
        ],
        DetectorPoint::AImaging => vec![
            (ModeId::signal(ModeLabel::J), geom.phase(geom.r_j_image)),
            (ModeId::signal(ModeLabel::M), geom.phase(geom.r_m_image)),
        ],
    };
    FieldOperator { terms }
}

/// `⟨vac| E_b E_a |Ψ⟩`: each pair term is annihilated to vacuum by one idler
/// and one signal operator of the same label. Higher terms are cut off.
pub fn second_order_correlation(fb: &FieldOperator, fa: &FieldOperator, state: &FockStateVector) -> Result<Complex64> {
    if !fb.acts_only_on(Party::Idler) || !fa.acts_only_on(Party::Signal) {
        return Err(Error::Spdc("first field must act on idler modes, second on signal modes".into()));
    }
    let amplitude: Complex64 = ModeLabel::ALL
        .iter()
        .map(|&x| state.pair(x) * fb.coefficient(ModeId::idler(x)) * fa.coefficient(ModeId::signal(x)))
        .sum();
    Ok(amplitude * state.vacuum)
}

/// Signal speed in units of `c` for lens focal length `f` and distance `g`:
/// `(3.5f + g)/(f/2c) = (7 + 2g/f) c`.
pub fn v_eff(f: f64, g: f64) -> Result<f64> {
    if !(f.is_finite() && f > 0.0) {
        return Err(Error::Spdc(format!("focal length must be positive, got {f}")));
    }
    if !(g.is_finite() && g >= 0.0) {
        return Err(Error::Spdc(format!("g must be non-negative, got {g}")));
    }
    Ok(7.0 + 2.0 * g / f)
}

/// Exact rational version of [`v_eff`].
pub fn v_eff_exact(f: Ratio<i64>, g: Ratio<i64>) -> Result<Ratio<i64>> {
    if f <= Ratio::from_integer(0) {
        return Err(Error::Spdc("focal length must be positive".into()));
    }
    if g < Ratio::from_integer(0) {
        return Err(Error::Spdc("g must be non-negative".into()));
    }
    Ok(Ratio::from_integer(7) + Ratio::from_integer(2) * g / f)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Correlator {
    pub re: f64,
    pub im: f64,
    pub magnitude: f64,
    pub phase: f64,
}

impl From<Complex64> for Correlator {
    fn from(z: Complex64) -> Self {
        Self {
            re: z.re,
            im: z.im,
            magnitude: z.norm(),
            phase: z.arg(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigurationReport {
    pub alice_point: DetectorPoint,
    pub pair_modes: [ModeLabel; 2],
    pub c_a_j: Correlator,
    pub c_a_k: Correlator,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpdcReport {
    pub epsilon: f64,
    pub geometry: Geometry,
    pub focal: ConfigurationReport,
    pub imaging: ConfigurationReport,
    pub v_eff_over_c: f64,
}

fn configuration(epsilon: f64, point: DetectorPoint, nu: ModeLabel, geom: &Geometry) -> Result<ConfigurationReport> {
    let state = make_spdc_state(epsilon, ModeLabel::J, nu)?;
    let fa = field_for(point, geom);
    let c = |p| second_order_correlation(&field_for(p, geom), &fa, &state);
    Ok(ConfigurationReport {
        alice_point: point,
        pair_modes: [ModeLabel::J, nu],
        c_a_j: c(DetectorPoint::JPrime)?.into(),
        c_a_k: c(DetectorPoint::KPrime)?.into(),
    })
}

/// Correlators for both of Alice's readouts and the signal speed.
pub fn spdc_report(epsilon: f64, geom: &Geometry) -> Result<SpdcReport> {
    geom.validate()?;
    Ok(SpdcReport {
        epsilon,
        geometry: *geom,
        focal: configuration(epsilon, DetectorPoint::AFocal, ModeLabel::K, geom)?,
        imaging: configuration(epsilon, DetectorPoint::AImaging, ModeLabel::M, geom)?,
        v_eff_over_c: v_eff(geom.f, geom.g)?,
    })
}
