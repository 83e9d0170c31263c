//! `eprsim` command line: analytic patterns, bench experiments, the slit-model
//! audit, down-conversion correlators and the telegraph.
//!
//! Exit status is 0 on success, 1 for usage errors and 2 when a bench file
//! fails to parse or a simulation fails.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use eprsim::bench::{self, balanced_random_bits, mode_name, parse_bench, preset, run_telegraph, BenchSpec};
use eprsim::measurement::MeasurementChoice;
use eprsim::numerics::{SeededSampler, WeightedHistogram};
use eprsim::optics::{analytic_double_slit, analytic_single_slit, visibility, Mode, PropagatedEnsemble};
use eprsim::spdc::{spdc_report, v_eff_exact, Geometry};
use eprsim::toymodel;
use num_rational::Ratio;
use serde::Serialize;
use serde_json::json;

const DEFAULT_PRESET: &str = "fig1_thought_experiment";

#[derive(Debug, Parser)]
#[command(name = "eprsim", version, about = "Entangled-photon double-slit simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the closed-form double- and single-slit curves as CSV.
    Pattern(BenchArgs),
    /// Singles, coincidences and sampled counts for both of Alice's bases.
    Experiment(BenchArgs),
    /// Report on the two-level slit model.
    Audit,
    /// Pair correlators for both readouts and the signal speed.
    Spdc(SpdcArgs),
    /// Send bits by basis choice and decode them from Bob's singles.
    Telegraph(TelegraphArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Physical,
    PaperNarrative,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Physical => Mode::Physical,
            ModeArg::PaperNarrative => Mode::PaperNarrative,
        }
    }
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Bench file to run.
    #[arg(long, conflicts_with = "preset")]
    bench: Option<PathBuf>,
    /// Shipped bench by name (default fig1_thought_experiment).
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long)]
    trials: Option<u64>,
    /// Directory for CSV and JSON artifacts.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Debug, Args)]
struct SpdcArgs {
    /// Lens focal length, m.
    #[arg(long, default_value = "1.0")]
    f: String,
    /// Crystal-to-slit distance, m.
    #[arg(long, default_value = "0.0")]
    g: String,
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
    #[arg(long, default_value_t = 702e-9)]
    lambda: f64,
}

#[derive(Debug, Args)]
struct TelegraphArgs {
    #[command(flatten)]
    bench: BenchArgs,
    /// Bits to send, e.g. 0110.
    #[arg(long, conflicts_with = "random")]
    bits: Option<String>,
    /// Send this many balanced random bits instead.
    #[arg(long)]
    random: Option<usize>,
}

#[derive(Debug)]
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<serde_json::Value, Failure>;

/// Parse `argv` (program name first), run, and return the exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Pattern(a) => pattern(&a),
        Command::Experiment(a) => experiment(&a),
        Command::Audit => Ok(serde_json::to_value(toymodel::audit()).expect("serializable")),
        Command::Spdc(a) => spdc(&a),
        Command::Telegraph(a) => telegraph(&a),
    };
    match result {
        Ok(v) => {
            println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
            0
        }
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

/// Loaded bench with command-line overrides applied and recorded.
struct Loaded {
    spec: BenchSpec,
    source: String,
    overrides: BTreeMap<&'static str, serde_json::Value>,
}

fn load(args: &BenchArgs) -> Result<Loaded, Failure> {
    let (text, source) = match (&args.bench, &args.preset) {
        (Some(path), _) => (
            std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?,
            path.display().to_string(),
        ),
        (None, name) => {
            let name = name.as_deref().unwrap_or(DEFAULT_PRESET);
            let text = preset(name).ok_or_else(|| {
                let known: Vec<_> = bench::PRESETS.iter().map(|(n, _)| *n).collect();
                Failure(format!("unknown preset `{name}` (known: {})", known.join(", ")))
            })?;
            (text.to_string(), format!("preset:{}", name.strip_suffix(".bench").unwrap_or(name)))
        }
    };
    let mut spec = parse_bench(&text).map_err(|e| Failure(format!("{source}: {e}")))?;
    let mut overrides = BTreeMap::new();
    if let Some(s) = args.seed {
        spec.run.seed = s;
        overrides.insert("seed", json!(s));
    }
    if let Some(m) = args.mode {
        spec.run.mode = m.into();
        overrides.insert("mode", json!(mode_name(spec.run.mode)));
    }
    if let Some(t) = args.trials {
        if t == 0 {
            return Err(Failure("--trials must be positive".into()));
        }
        spec.run.trials = t;
        overrides.insert("trials", json!(t));
    }
    Ok(Loaded { spec, source, overrides })
}

fn csv(points: impl Iterator<Item = (f64, f64)>) -> String {
    let mut s = String::from("y_m,intensity\n");
    for (y, v) in points {
        let _ = writeln!(s, "{y:.8e},{v:.8e}");
    }
    s
}

fn hist_csv(h: &WeightedHistogram) -> String {
    csv(h.centers().zip(h.weights().iter().copied()))
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<String, Failure> {
    std::fs::create_dir_all(dir).map_err(|e| Failure(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    Ok(path.display().to_string())
}

fn header(l: &Loaded) -> serde_json::Value {
    json!({ "bench": l.source, "spec": l.spec, "overrides": l.overrides })
}

fn pattern(args: &BenchArgs) -> Outcome {
    let l = load(args)?;
    let s = &l.spec;
    let g = s.screen_grid();
    let (lambda, a, d, big_d) = (s.source.lambda, s.slits.a, s.slits.d, s.screen.distance);
    let double = csv(g.positions().map(|y| (y, analytic_double_slit(y, a, d, big_d, lambda))));
    let single = csv(g.positions().map(|y| (y, analytic_single_slit(y, a, big_d, lambda))));
    let files = [
        write(&args.out_dir, "pattern_double_slit.csv", &double)?,
        write(&args.out_dir, "pattern_single_slit.csv", &single)?,
    ];
    let mut out = header(&l);
    out["fringe_period_m"] = json!(s.fringe_period());
    out["files"] = json!(files);
    Ok(out)
}

#[derive(Serialize)]
struct BasisSummary {
    basis: &'static str,
    accepted_probability: f64,
    blocked_branches: usize,
    singles_visibility: f64,
    sampled_visibility: f64,
    sampled_detections: u64,
    coincidence_selected_mass: f64,
    coincidence_visibility: f64,
}

fn experiment(args: &BenchArgs) -> Outcome {
    let l = load(args)?;
    let s = &l.spec;
    let psi = s.state()?;
    let pipeline = s.pipeline();
    let period = s.fringe_period();
    let mut summaries = Vec::new();
    let mut singles = Vec::new();
    let mut files = Vec::new();
    for (stream, choice) in [MeasurementChoice::PositionY, MeasurementChoice::MomentumY].into_iter().enumerate() {
        let name = choice.name();
        let e = PropagatedEnsemble::new(&psi, choice, &pipeline, s.source.lambda, s.run.mode)?;
        let single = e.singles();
        let coinc = e.coincidences(s.coincidence_filter(choice))?;
        let mut sampler = SeededSampler::with_stream(s.run.seed, stream as u64);
        let sampled = e.sample_counts(s.run.trials, &mut sampler)?;
        files.push(write(&args.out_dir, &format!("singles_{name}.csv"), &hist_csv(&single))?);
        files.push(write(&args.out_dir, &format!("coincidence_{name}.csv"), &hist_csv(&coinc.histogram))?);
        files.push(write(&args.out_dir, &format!("sampled_{name}.csv"), &hist_csv(&sampled))?);
        summaries.push(BasisSummary {
            basis: name,
            accepted_probability: e.accepted_total(),
            blocked_branches: e.blocked_count(),
            singles_visibility: visibility(&single, period)?,
            sampled_visibility: visibility(&sampled, period)?,
            sampled_detections: s.run.trials,
            coincidence_selected_mass: coinc.selected_mass,
            coincidence_visibility: visibility(&coinc.histogram, period)?,
        });
        singles.push(single);
    }
    let mut out = header(&l);
    out["fringe_period_m"] = json!(period);
    out["bases"] = json!(summaries);
    out["singles_max_abs_difference"] = json!(singles[0].max_abs_diff(&singles[1]));
    let summary_path = args.out_dir.join("experiment.json");
    files.push(summary_path.display().to_string());
    out["files"] = json!(files);
    write(&args.out_dir, "experiment.json", &serde_json::to_string_pretty(&out).expect("serializable"))?;
    Ok(out)
}

/// Exact value of a decimal literal such as `10`, `0.25` or `1.5e-3`.
fn decimal_ratio(text: &str) -> Option<Ratio<i64>> {
    let (mantissa, exp) = match text.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = format!("{int}{frac}");
    let num: i64 = digits.parse().ok()?;
    let scale = exp.checked_sub(frac.len() as i32)?;
    let ten = |p: u32| 10i64.checked_pow(p);
    Some(if scale >= 0 {
        Ratio::from_integer(num.checked_mul(ten(scale as u32)?)?)
    } else {
        Ratio::new(num, ten(scale.unsigned_abs())?)
    })
}

fn spdc(args: &SpdcArgs) -> Outcome {
    let parse = |name: &str, t: &str| t.parse::<f64>().map_err(|_| Failure(format!("--{name}: `{t}` is not a number")));
    let (f, g) = (parse("f", &args.f)?, parse("g", &args.g)?);
    let geom = Geometry::nominal(f, g, args.lambda)?;
    let report = spdc_report(args.epsilon, &geom)?;
    let mut out = serde_json::to_value(&report).expect("serializable");
    if let (Some(fr), Some(gr)) = (decimal_ratio(&args.f), decimal_ratio(&args.g)) {
        let exact = v_eff_exact(fr, gr)?;
        out["v_eff_over_c_exact"] = json!(exact.to_string());
    }
    Ok(out)
}

fn telegraph(args: &TelegraphArgs) -> Outcome {
    let l = load(&args.bench)?;
    let bits = match (&args.bits, args.random) {
        (Some(b), _) => b.clone(),
        (None, Some(n)) => balanced_random_bits(n, l.spec.run.seed),
        (None, None) => "0110".to_string(),
    };
    let report = run_telegraph(&l.spec, &bits)?;
    let mut out = header(&l);
    out["report"] = serde_json::to_value(&report).expect("serializable");
    Ok(out)
}
