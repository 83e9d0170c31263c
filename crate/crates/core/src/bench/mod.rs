//! Bench files: the text description of one experiment.
//!
//! ```text
//! # comment
//! [source]
//! lambda = 702e-9
//! [slits]
//! a = 30e-6
//! d = 150e-6
//! ```
//!
//! Sections are `[source] [alice] [slits] [screen] [run]`, each holding
//! `key = value` lines in SI units. Everything except `lambda`, `a` and `d`
//! has a default, and parsing fills every default in, so the returned spec is
//! complete and [`serialize`] writes every key.

mod telegraph;

use std::collections::HashMap;
use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use crate::measurement::{MeasurementChoice, OutcomeRecord};
use crate::numerics::{ComplexField2D, GridSpec};
use crate::optics::{Mode, OpticalElement, Pipeline, Regime};
use crate::source::{make_epr_state, SourceParams, MAX_LEAKAGE};

pub use telegraph::{balanced_random_bits, classify_pattern, run_telegraph, TelegraphReport, CLASSIFY_THRESHOLD};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BenchErrorKind {
    #[error("unknown section [{0}]")]
    UnknownSection(String),
    #[error("duplicate section [{0}]")]
    DuplicateSection(String),
    #[error("malformed section header")]
    BadHeader,
    #[error("key outside any section")]
    KeyOutsideSection,
    #[error("expected `key = value`")]
    MissingEquals,
    #[error("unknown key `{key}` in [{section}]")]
    UnknownKey { section: String, key: String },
    #[error("duplicate key `{0}`")]
    DuplicateKey(String),
    #[error("`{key}`: `{value}` is not a finite number")]
    NotNumeric { key: String, value: String },
    #[error("`{key}`: expected {expected}, got `{value}`")]
    BadValue {
        key: String,
        value: String,
        expected: &'static str,
    },
    #[error("missing required key `{key}` in [{section}]")]
    MissingKey { section: &'static str, key: &'static str },
    #[error("{0}")]
    Invariant(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("line {line}: {kind}")]
pub struct BenchError {
    pub line: usize,
    pub kind: BenchErrorKind,
}

/// Alice's measurement grid, shared with Bob's transverse axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AliceSpec {
    pub n: usize,
    pub extent: f64,
    /// Momentum outcomes with `|k| ≤ select_momentum` form the momentum
    /// coincidence subset, rad/m.
    pub select_momentum: f64,
    /// The position outcome cell containing this point forms the position
    /// coincidence subset, m.
    pub select_position: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlitSpec {
    pub a: f64,
    pub d: f64,
    pub directional_filter: bool,
    pub filter_half_angle: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScreenSpec {
    pub distance: f64,
    pub bins: usize,
    pub half_width: f64,
    pub regime: Regime,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunSpec {
    pub mode: Mode,
    /// Detected events per Monte Carlo run.
    pub trials: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BenchSpec {
    pub source: SourceParams,
    pub alice: AliceSpec,
    pub slits: SlitSpec,
    pub screen: ScreenSpec,
    pub run: RunSpec,
}

/// Default grid: 72 cells per `a + d`, enough to resolve each slit with 12.
pub const CELLS_PER_PERIOD: f64 = 72.0;
/// Default filter half-angle in units of `λ/d`.
pub const DEFAULT_FILTER_FRACTION: f64 = 0.1;

impl BenchSpec {
    pub fn grid(&self) -> GridSpec {
        GridSpec::new(self.alice.n, self.alice.extent).expect("validated grid")
    }

    pub fn screen_grid(&self) -> GridSpec {
        GridSpec::new(self.screen.bins, 2.0 * self.screen.half_width).expect("validated screen")
    }

    pub fn elements(&self) -> Vec<OpticalElement> {
        let mut e = Vec::with_capacity(2);
        if self.slits.directional_filter {
            e.push(OpticalElement::AngularFilter {
                half_angle: self.slits.filter_half_angle,
            });
        }
        e.push(OpticalElement::SlitMask {
            width: self.slits.a,
            separation: self.slits.d,
        });
        e
    }

    pub fn pipeline(&self) -> Pipeline {
        Pipeline::new(self.elements(), self.screen.distance, self.screen.regime, self.screen_grid())
            .expect("validated pipeline")
    }

    pub fn state(&self) -> crate::Result<ComplexField2D> {
        let g = self.grid();
        make_epr_state(&self.source, &g, &g)
    }

    /// Double-slit fringe period on the screen, `λD/d`.
    pub fn fringe_period(&self) -> f64 {
        self.source.lambda * self.screen.distance / self.slits.d
    }

    /// Outcome subset used for coincidences in each of Alice's bases.
    pub fn coincidence_filter(&self, choice: MeasurementChoice) -> impl Fn(&OutcomeRecord) -> bool {
        let g = self.grid();
        let (k_max, target) = (self.alice.select_momentum, g.index_of(self.alice.select_position));
        move |o: &OutcomeRecord| match choice {
            MeasurementChoice::MomentumY => o.value.abs() <= k_max,
            MeasurementChoice::PositionY => o.bin_index == target,
        }
    }
}

const SECTIONS: [&str; 5] = ["source", "alice", "slits", "screen", "run"];

fn keys_of(section: &str) -> &'static [&'static str] {
    match section {
        "source" => &["lambda", "y0", "sigma_corr", "sigma_env"],
        "alice" => &["n", "extent", "select_momentum", "select_position"],
        "slits" => &["a", "d", "directional_filter", "filter_half_angle"],
        "screen" => &["distance", "bins", "half_width", "regime"],
        "run" => &["mode", "trials", "seed"],
        _ => &[],
    }
}

struct Entry {
    value: String,
    line: usize,
}

/// Collected `key = value` pairs with their lines, plus typed accessors.
struct Raw {
    entries: HashMap<(&'static str, &'static str), Entry>,
    headers: HashMap<&'static str, usize>,
    eof: usize,
}

fn err(line: usize, kind: BenchErrorKind) -> BenchError {
    BenchError { line, kind }
}

impl Raw {
    fn line_of(&self, section: &'static str, key: &'static str) -> Option<usize> {
        self.entries.get(&(section, key)).map(|e| e.line)
    }

    /// Line to blame for a violated invariant: the latest of the given keys,
    /// else their section header, else end of input.
    fn blame(&self, keys: &[(&'static str, &'static str)]) -> usize {
        keys.iter()
            .filter_map(|&(s, k)| self.line_of(s, k))
            .max()
            .or_else(|| keys.iter().filter_map(|(s, _)| self.headers.get(s).copied()).max())
            .unwrap_or(self.eof)
    }

    fn number(&self, section: &'static str, key: &'static str) -> Result<Option<f64>, BenchError> {
        let Some(e) = self.entries.get(&(section, key)) else {
            return Ok(None);
        };
        match e.value.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Some(v)),
            _ => Err(err(
                e.line,
                BenchErrorKind::NotNumeric {
                    key: key.into(),
                    value: e.value.clone(),
                },
            )),
        }
    }

    fn required(&self, section: &'static str, key: &'static str) -> Result<f64, BenchError> {
        self.number(section, key)?
            .ok_or_else(|| err(self.eof, BenchErrorKind::MissingKey { section, key }))
    }

    /// Non-negative integer; `1e4` style is accepted when exact.
    fn count(&self, section: &'static str, key: &'static str) -> Result<Option<u64>, BenchError> {
        let Some(e) = self.entries.get(&(section, key)) else {
            return Ok(None);
        };
        if let Ok(v) = e.value.parse::<u64>() {
            return Ok(Some(v));
        }
        let bad = || {
            err(
                e.line,
                BenchErrorKind::BadValue {
                    key: key.into(),
                    value: e.value.clone(),
                    expected: "a non-negative integer",
                },
            )
        };
        match e.value.parse::<f64>() {
            Ok(v) if v.is_finite() && v >= 0.0 && v.fract() == 0.0 && v <= 9.007_199_254_740_992e15 => Ok(Some(v as u64)),
            Ok(_) => Err(bad()),
            Err(_) => Err(bad()),
        }
    }

    fn choice<T: Copy>(
        &self,
        section: &'static str,
        key: &'static str,
        options: &[(&str, T)],
        expected: &'static str,
    ) -> Result<Option<T>, BenchError> {
        let Some(e) = self.entries.get(&(section, key)) else {
            return Ok(None);
        };
        options
            .iter()
            .find(|(name, _)| *name == e.value)
            .map(|(_, v)| Some(*v))
            .ok_or_else(|| {
                err(
                    e.line,
                    BenchErrorKind::BadValue {
                        key: key.into(),
                        value: e.value.clone(),
                        expected,
                    },
                )
            })
    }
}

fn tokenize(text: &str) -> Result<Raw, BenchError> {
    let mut raw = Raw {
        entries: HashMap::new(),
        headers: HashMap::new(),
        eof: text.lines().count().max(1),
    };
    let mut current: Option<&'static str> = None;
    for (i, line) in text.lines().enumerate() {
        let n = i + 1;
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(|| err(n, BenchErrorKind::BadHeader))?.trim();
            let section = SECTIONS
                .iter()
                .copied()
                .find(|s| *s == name)
                .ok_or_else(|| err(n, BenchErrorKind::UnknownSection(name.into())))?;
            if raw.headers.insert(section, n).is_some() {
                return Err(err(n, BenchErrorKind::DuplicateSection(name.into())));
            }
            current = Some(section);
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| err(n, BenchErrorKind::MissingEquals))?;
        let section = current.ok_or_else(|| err(n, BenchErrorKind::KeyOutsideSection))?;
        let key = key.trim();
        let known = keys_of(section).iter().copied().find(|k| *k == key).ok_or_else(|| {
            err(
                n,
                BenchErrorKind::UnknownKey {
                    section: section.into(),
                    key: key.into(),
                },
            )
        })?;
        let entry = Entry {
            value: value.trim().to_string(),
            line: n,
        };
        if raw.entries.insert((section, known), entry).is_some() {
            return Err(err(n, BenchErrorKind::DuplicateKey(key.into())));
        }
    }
    Ok(raw)
}

/// Parse a bench file, materializing every default.
pub fn parse_bench(text: &str) -> Result<BenchSpec, BenchError> {
    let raw = tokenize(text)?;
    let invariant = |keys: &[(&'static str, &'static str)], msg: String| err(raw.blame(keys), BenchErrorKind::Invariant(msg));

    let lambda = raw.required("source", "lambda")?;
    let a = raw.required("slits", "a")?;
    let d = raw.required("slits", "d")?;

    let src_keys = [
        ("source", "lambda"),
        ("source", "y0"),
        ("source", "sigma_corr"),
        ("source", "sigma_env"),
    ];
    let source = SourceParams::new(
        lambda,
        raw.number("source", "y0")?.unwrap_or(0.0),
        raw.number("source", "sigma_corr")?.unwrap_or(lambda / 2.0),
        raw.number("source", "sigma_env")?.unwrap_or(200.0 * lambda),
    )
    .map_err(|e| invariant(&src_keys, e.to_string()))?;

    let slit_keys = [("slits", "a"), ("slits", "d")];
    let filter_key = [("slits", "filter_half_angle")];
    let filter_half_angle = raw
        .number("slits", "filter_half_angle")?
        .unwrap_or(DEFAULT_FILTER_FRACTION * lambda / d);
    let slits = SlitSpec {
        a,
        d,
        directional_filter: raw
            .choice("slits", "directional_filter", &[("true", true), ("false", false)], "true or false")?
            .unwrap_or(true),
        filter_half_angle,
    };
    OpticalElement::SlitMask { width: a, separation: d }
        .validate()
        .map_err(|_| invariant(&slit_keys, "slit separation must exceed slit width".into()))?;
    if !(a > 0.0) {
        return Err(invariant(&slit_keys, "slit width must be positive".into()));
    }
    OpticalElement::AngularFilter { half_angle: filter_half_angle }
        .validate()
        .map_err(|e| invariant(&filter_key, e.to_string()))?;

    let grid_keys = [("alice", "n"), ("alice", "extent")];
    let n = raw.count("alice", "n")?.unwrap_or(2048);
    if n > 1 << 16 {
        return Err(invariant(&grid_keys[..1], format!("grid size must be at most 65536, got {n}")));
    }
    let n = n as usize;
    let extent = raw
        .number("alice", "extent")?
        .unwrap_or(n as f64 * (a + d) / CELLS_PER_PERIOD);
    let grid = GridSpec::new(n, extent).map_err(|e| invariant(&grid_keys, e.to_string()))?;
    let leakage = source.leakage(&grid, &grid);
    if !(leakage <= MAX_LEAKAGE) {
        let mut keys = grid_keys.to_vec();
        keys.extend_from_slice(&src_keys);
        return Err(invariant(&keys, crate::Error::GridTooNarrow { leakage }.to_string()));
    }
    if !(grid.spacing() < a) {
        return Err(invariant(&grid_keys, "grid spacing must be finer than the slit width".into()));
    }
    let (lo, hi) = grid.bounds();
    if d / 2.0 + a / 2.0 > hi.min(-lo) {
        return Err(invariant(&grid_keys, "slits do not fit inside the grid".into()));
    }
    let alice = AliceSpec {
        n,
        extent,
        select_momentum: raw.number("alice", "select_momentum")?.unwrap_or(2.0 * 2.0 * PI / extent),
        select_position: raw.number("alice", "select_position")?.unwrap_or(d / 2.0 - source.y0),
    };
    if !(alice.select_momentum >= 0.0) {
        return Err(invariant(&[("alice", "select_momentum")], "select_momentum must be non-negative".into()));
    }
    if !(lo..hi).contains(&alice.select_position) {
        return Err(invariant(&[("alice", "select_position")], "select_position lies outside the grid".into()));
    }

    let bins = raw.count("screen", "bins")?.unwrap_or(2048);
    let screen = ScreenSpec {
        distance: raw.number("screen", "distance")?.unwrap_or(1.0),
        bins: bins.min(usize::MAX as u64) as usize,
        half_width: raw.number("screen", "half_width")?.unwrap_or(0.02),
        regime: raw
            .choice(
                "screen",
                "regime",
                &[("fraunhofer", Regime::Fraunhofer), ("fresnel", Regime::Fresnel)],
                "fraunhofer or fresnel",
            )?
            .unwrap_or(Regime::Fraunhofer),
    };
    if !(screen.distance > 0.0) {
        return Err(invariant(&[("screen", "distance")], "screen distance must be positive".into()));
    }
    if !(screen.half_width > 0.0) {
        return Err(invariant(&[("screen", "half_width")], "half_width must be positive".into()));
    }
    if bins > 1 << 20 {
        return Err(invariant(&[("screen", "bins")], format!("at most 1048576 bins, got {bins}")));
    }
    GridSpec::new(screen.bins, 2.0 * screen.half_width)
        .map_err(|e| invariant(&[("screen", "bins"), ("screen", "half_width")], e.to_string()))?;

    let run = RunSpec {
        mode: raw
            .choice(
                "run",
                "mode",
                &[("physical", Mode::Physical), ("paper_narrative", Mode::PaperNarrative)],
                "physical or paper_narrative",
            )?
            .unwrap_or(Mode::Physical),
        trials: raw.count("run", "trials")?.unwrap_or(10_000),
        seed: raw.count("run", "seed")?.unwrap_or(0),
    };
    if run.trials == 0 {
        return Err(invariant(&[("run", "trials")], "trials must be positive".into()));
    }

    Ok(BenchSpec {
        source,
        alice,
        slits,
        screen,
        run,
    })
}

pub fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Physical => "physical",
        Mode::PaperNarrative => "paper_narrative",
    }
}

pub fn regime_name(regime: Regime) -> &'static str {
    match regime {
        Regime::Fraunhofer => "fraunhofer",
        Regime::Fresnel => "fresnel",
    }
}

/// Full text form; floats are written in shortest round-trip notation so
/// `parse_bench(&serialize(s)) == s` exactly.
pub fn serialize(spec: &BenchSpec) -> String {
    let s = spec;
    format!(
        "[source]\nlambda = {:e}\ny0 = {:e}\nsigma_corr = {:e}\nsigma_env = {:e}\n\n\
         [alice]\nn = {}\nextent = {:e}\nselect_momentum = {:e}\nselect_position = {:e}\n\n\
         [slits]\na = {:e}\nd = {:e}\ndirectional_filter = {}\nfilter_half_angle = {:e}\n\n\
         [screen]\ndistance = {:e}\nbins = {}\nhalf_width = {:e}\nregime = {}\n\n\
         [run]\nmode = {}\ntrials = {}\nseed = {}\n",
        s.source.lambda,
        s.source.y0,
        s.source.sigma_corr,
        s.source.sigma_env,
        s.alice.n,
        s.alice.extent,
        s.alice.select_momentum,
        s.alice.select_position,
        s.slits.a,
        s.slits.d,
        s.slits.directional_filter,
        s.slits.filter_half_angle,
        s.screen.distance,
        s.screen.bins,
        s.screen.half_width,
        regime_name(s.screen.regime),
        mode_name(s.run.mode),
        s.run.trials,
        s.run.seed,
    )
}

/// Shipped bench files by name.
pub const PRESETS: [(&str, &str); 2] = [
    (
        "fig1_thought_experiment",
        include_str!("../../presets/fig1_thought_experiment.bench"),
    ),
    ("fig2_spdc_unfolded", include_str!("../../presets/fig2_spdc_unfolded.bench")),
];

/// Text of a shipped bench file; accepts the name with or without `.bench`.
pub fn preset(name: &str) -> Option<&'static str> {
    let name = name.strip_suffix(".bench").unwrap_or(name);
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const MINIMAL: &str = "[source]\nlambda = 702e-9\n[slits]\na = 30e-6\nd = 150e-6\n";

    fn kind(text: &str) -> (usize, BenchErrorKind) {
        let e = parse_bench(text).unwrap_err();
        (e.line, e.kind)
    }

    #[test]
    fn minimal_file_materializes_defaults() {
        let s = parse_bench(MINIMAL).unwrap();
        let l = 702e-9;
        assert_eq!(s.source.sigma_corr, l / 2.0);
        assert_eq!(s.source.sigma_env, 200.0 * l);
        assert_eq!(s.source.y0, 0.0);
        assert_eq!(s.screen.distance, 1.0);
        assert_eq!(s.run.mode, Mode::Physical);
        assert_eq!(s.run.seed, 0);
        assert_eq!(s.alice.n, 2048);
        assert!((s.grid().spacing() - 2.5e-6).abs() < 1e-18);
        assert_eq!(s.slits.filter_half_angle, 0.1 * l / 150e-6);
        let (lo, hi) = s.screen_grid().bounds();
        assert!((hi - lo - 0.04).abs() < 1e-15 && lo < -0.0199 && hi > 0.0199);
    }

    #[test]
    fn presets_parse_and_agree_with_defaults() {
        for (name, text) in PRESETS {
            let s = parse_bench(text).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(s.pipeline().elements.len(), 2);
        }
        let fig1 = parse_bench(preset("fig1_thought_experiment.bench").unwrap()).unwrap();
        let minimal = parse_bench(MINIMAL).unwrap();
        assert!((fig1.slits.filter_half_angle - minimal.slits.filter_half_angle).abs() < 1e-6);
        assert!((fig1.alice.extent - minimal.alice.extent).abs() < 1e-15);
        assert!(preset("nope").is_none());
    }

    #[test]
    fn slit_invariant_reports_line() {
        let text = "[source]\nlambda = 702e-9\n[slits]\na = 200e-6\nd = 150e-6\n";
        let (line, k) = kind(text);
        assert_eq!(line, 5);
        assert_eq!(k, BenchErrorKind::Invariant("slit separation must exceed slit width".into()));
        assert_eq!(
            parse_bench(text).unwrap_err().to_string(),
            "line 5: slit separation must exceed slit width"
        );
    }

    #[test]
    fn structural_errors() {
        assert_eq!(kind("[nope]\n"), (1, BenchErrorKind::UnknownSection("nope".into())));
        assert_eq!(kind("lambda = 1\n"), (1, BenchErrorKind::KeyOutsideSection));
        assert_eq!(kind("[source]\nlambda 1\n"), (2, BenchErrorKind::MissingEquals));
        assert_eq!(kind("[source\n"), (1, BenchErrorKind::BadHeader));
        assert!(matches!(kind("[source]\nlambda = 1\nlambda = 2\n"), (3, BenchErrorKind::DuplicateKey(_))));
        assert!(matches!(kind("[source]\n[source]\n"), (2, BenchErrorKind::DuplicateSection(_))));
        assert!(matches!(kind("[run]\nspeed = 3\n"), (2, BenchErrorKind::UnknownKey { .. })));
        assert!(matches!(kind("[source]\nlambda = fast\n"), (2, BenchErrorKind::NotNumeric { .. })));
        assert!(matches!(kind("[source]\nlambda = NaN\n"), (2, BenchErrorKind::NotNumeric { .. })));
        assert!(matches!(kind("[source]\nlambda = inf\n"), (2, BenchErrorKind::NotNumeric { .. })));
        assert!(matches!(kind("[source]\nlambda = 1e-6\n"), (2, BenchErrorKind::MissingKey { key: "a", .. })));
        let bad_mode = format!("{MINIMAL}[run]\nmode = quantum\n");
        assert!(matches!(kind(&bad_mode), (7, BenchErrorKind::BadValue { .. })));
        let bad_trials = format!("{MINIMAL}[run]\ntrials = 1.5\n");
        assert!(matches!(kind(&bad_trials), (7, BenchErrorKind::BadValue { .. })));
    }

    #[test]
    fn scientific_counts_and_comments() {
        let text = format!("{MINIMAL}[run] # trailing\ntrials = 1e4   # ten thousand\nmode = paper_narrative\n");
        let s = parse_bench(&text).unwrap();
        assert_eq!(s.run.trials, 10_000);
        assert_eq!(s.run.mode, Mode::PaperNarrative);
    }

    #[test]
    fn narrow_grid_is_rejected_at_parse_time() {
        let text = format!("{MINIMAL}[alice]\nn = 128\n");
        let (line, k) = kind(&text);
        assert_eq!(line, 7);
        assert!(matches!(k, BenchErrorKind::Invariant(m) if m.starts_with("grid too narrow")));
    }

    #[test]
    fn serialize_round_trips_presets() {
        for (_, text) in PRESETS {
            let s = parse_bench(text).unwrap();
            assert_eq!(parse_bench(&serialize(&s)).unwrap(), s);
        }
    }

    #[test]
    fn coincidence_subsets() {
        let s = parse_bench(preset("fig2_spdc_unfolded").unwrap()).unwrap();
        let f = s.coincidence_filter(MeasurementChoice::PositionY);
        let g = s.grid();
        let rec = |i: usize, basis| OutcomeRecord {
            basis,
            bin_index: i,
            value: g.position(i),
            probability: 0.0,
        };
        assert!(f(&rec(g.index_of(75e-6), MeasurementChoice::PositionY)));
        assert!(!f(&rec(g.index_of(75e-6) + 1, MeasurementChoice::PositionY)));
        let m = s.coincidence_filter(MeasurementChoice::MomentumY);
        let mut r = rec(0, MeasurementChoice::MomentumY);
        r.value = 2.0e3;
        assert!(m(&r));
        r.value = -3.0e3;
        assert!(!m(&r));
    }

    pub(super) fn spec_strategy() -> impl Strategy<Value = BenchSpec> {
        (
            (400e-9f64..1.2e-6, 0.2f64..2.0, 20.0f64..400.0, -2.0f64..2.0),
            (1.5f64..8.0, 10e-6f64..80e-6, 1.5f64..8.0, 0.2f64..3.0),
            (any::<bool>(), 1e-4f64..1.5, 0.1f64..10.0, 3u32..13, 1e-3f64..0.1, any::<bool>()),
            (any::<bool>(), 1u64..1_000_000, any::<u64>()),
        )
            .prop_map(|(src, geo, scr, run)| {
                let (lambda, c, e, y0f) = src;
                let (cells, a, dr, sel) = geo;
                let (filter, half_angle, distance, bins, half_width, fresnel) = scr;
                let (narrative, trials, seed) = run;
                let sigma_corr = c * lambda;
                let sigma_env = e * sigma_corr;
                let source = SourceParams::new(lambda, y0f * sigma_corr, sigma_corr, sigma_env).unwrap();
                let d = a * dr;
                // room for the slits and for the envelope, at `cells` cells per slit width
                let needed = (12.0 * source.marginal_std() + source.y0.abs()).max(1.1 * (d + a));
                let extent = needed * (1.0 + 0.1 * sel);
                let n = ((extent / a * cells).ceil() as usize).next_power_of_two();
                BenchSpec {
                    source,
                    alice: AliceSpec {
                        n,
                        extent,
                        select_momentum: sel * 2.0 * PI / extent,
                        select_position: d / 2.0 - source.y0,
                    },
                    slits: SlitSpec {
                        a,
                        d,
                        directional_filter: filter,
                        filter_half_angle: half_angle,
                    },
                    screen: ScreenSpec {
                        distance,
                        bins: 1 << bins,
                        half_width,
                        regime: if fresnel { Regime::Fresnel } else { Regime::Fraunhofer },
                    },
                    run: RunSpec {
                        mode: if narrative { Mode::PaperNarrative } else { Mode::Physical },
                        trials,
                        seed,
                    },
                }
            })
    }

    proptest! {
        #[test]
        fn round_trip_generated_specs(spec in spec_strategy()) {
            let text = serialize(&spec);
            let parsed = parse_bench(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
            prop_assert_eq!(parsed, spec);
            prop_assert_eq!(serialize(&parsed), text);
        }

        #[test]
        fn arbitrary_text_never_panics(text in "(\\PC|\n|\\[|\\]|=|#){0,200}") {
            match parse_bench(&text) {
                Ok(_) => {}
                Err(e) => prop_assert!(e.line >= 1 && e.line <= text.lines().count().max(1)),
            }
        }

        #[test]
        fn mutated_presets_never_panic(cut in 0usize..900, insert in "(\\PC|\n){0,12}") {
            let base = PRESETS[0].1;
            let cut = cut.min(base.len());
            let cut = (0..=cut).rev().find(|&i| base.is_char_boundary(i)).unwrap_or(0);
            let text = format!("{}{}{}", &base[..cut], insert, &base[cut..]);
            if let Err(e) = parse_bench(&text) {
                prop_assert!(e.line >= 1 && e.line <= text.lines().count().max(1));
            }
        }
    }
}
