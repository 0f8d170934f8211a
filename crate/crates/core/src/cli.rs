//! Command-line front end.
//!
//! Exit codes: 0 success, 1 property violation, 2 usage error, 3 domain
//! error. Every failure writes exactly one `error[<kind>]: …` line to the
//! error stream; successful runs write nothing there.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::error::SteerError;
use crate::monogamy::{fig1a_sweep, fig1b_sweep, rgs, rgs_closed_form};
use crate::qss::{
    fig2_campaign, key_rate_report, threshold_squeezing_ghz, KeyQuadrature, SeriesConfig,
};
use crate::states::{
    ghz_network, local_invariants, standard_form_pure, two_mode_squeezed, OpticalNetworkParams,
    ParamDistribution, PureThreeModeParams, SamplerConfig,
};
use crate::steering::gaussian_steering;
use crate::symplectic::CovarianceMatrix;
use crate::verify::{run_suite, Suite, SuiteOutcome, VerifyConfig};
use crate::SCHEMA;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

const SWEEP_HELP: &str = "\
CSV schemas (header row first, numbers in shortest round-trip form):
  1a: b,c,rgs                     lattice points inside the triangle region, b-major
  1b: R,a,b,c,rgs                 R = i/grid for i = 0..=grid
  2:  sample_index,a,b,c,rgs,k_raw,k_clamped,lower_bound,upper_bound,slack_lower,slack_upper,series
      series is one of sample, lower (b=c=(a+1)/2), upper (b=c=1000), ghz (a=b=c);
      sample_index counts within each series.";

#[derive(Parser, Debug)]
#[command(
    name = "steerlab",
    version,
    about = "Gaussian steering, monogamy and secret-sharing key rates"
)]
pub struct Cli {
    /// Worker threads for campaigns and sweeps (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a state and print its covariance matrix as JSON.
    State {
        #[command(flatten)]
        source: StateSource,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute steering, RGS or key rates for a state.
    Analyze(AnalyzeArgs),
    /// Run seeded property campaigns.
    Verify(VerifyArgs),
    /// Emit figure data as CSV.
    #[command(after_help = SWEEP_HELP)]
    Sweep(SweepArgs),
    /// Squeezing needed for a positive key rate with the symmetric network state.
    Threshold,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("source").required(true).multiple(false)))]
pub struct StateSource {
    /// Read a state JSON file ({"n_modes": n, "matrix": [[…]]}).
    #[arg(long, group = "source")]
    pub input: Option<PathBuf>,
    /// Vacuum on N modes.
    #[arg(long, group = "source", value_name = "N")]
    pub vacuum: Option<usize>,
    /// Two-mode squeezed vacuum with squeezing r.
    #[arg(
        long,
        group = "source",
        value_name = "R",
        allow_negative_numbers = true
    )]
    pub tmsv: Option<f64>,
    /// Beamsplitter network: squeezing r, reflectivities R and R'.
    #[arg(long, group = "source", num_args = 3, value_names = ["r", "R", "R_PRIME"], allow_negative_numbers = true)]
    pub ghz_network: Option<Vec<f64>>,
    /// Pure three-mode standard form from local invariants a b c.
    #[arg(long, group = "source", num_args = 3, value_names = ["a", "b", "c"], allow_negative_numbers = true)]
    pub standard_form: Option<Vec<f64>>,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("quantity").required(true).multiple(false)))]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub source: StateSource,
    /// Steering from one party to another, parties as mode letters (e.g. BC A).
    #[arg(long, group = "quantity", num_args = 2, value_names = ["FROM", "TO"])]
    pub steering: Option<Vec<String>>,
    /// Residual Gaussian steering of a pure three-mode state.
    #[arg(long, group = "quantity")]
    pub rgs: bool,
    /// Secret-sharing key-rate report for a standard-form state.
    #[arg(long, group = "quantity")]
    pub keyrate: bool,
    /// Quadrature carrying the key.
    #[arg(long, value_enum, default_value_t = KeyQuadratureArg::P)]
    pub key_quadrature: KeyQuadratureArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum KeyQuadratureArg {
    P,
    X,
    Best,
}

impl From<KeyQuadratureArg> for KeyQuadrature {
    fn from(k: KeyQuadratureArg) -> Self {
        match k {
            KeyQuadratureArg::P => KeyQuadrature::P,
            KeyQuadratureArg::X => KeyQuadrature::X,
            KeyQuadratureArg::Best => KeyQuadrature::Best,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum DistributionArg {
    Uniform,
    LogUniform,
}

impl From<DistributionArg> for ParamDistribution {
    fn from(d: DistributionArg) -> Self {
        match d {
            DistributionArg::Uniform => ParamDistribution::Uniform,
            DistributionArg::LogUniform => ParamDistribution::LogUniform,
        }
    }
}

/// Sampler flags shared by `verify` and `sweep --figure 2`. Flags override
/// the config file, which overrides defaults.
#[derive(Args, Debug)]
pub struct SamplerArgs {
    /// Master seed (default 42).
    #[arg(long, env = "STEERLAB_SEED")]
    pub seed: Option<u64>,
    /// Number of random samples.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Squeezing range of random states.
    #[arg(long)]
    pub r_max: Option<f64>,
    /// Upper end of the local-invariant draw.
    #[arg(long)]
    pub a_max: Option<f64>,
    #[arg(long, value_enum)]
    pub distribution: Option<DistributionArg>,
    /// Key-value sampler config file (seed, count, r_max, a_max, distribution).
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl SamplerArgs {
    fn resolve(&self, default_count: usize) -> Result<SamplerConfig, SteerError> {
        let mut cfg = match &self.config {
            Some(path) => SamplerConfig::from_toml_str(&read_file(path)?)?,
            None => SamplerConfig {
                count: default_count,
                ..Default::default()
            },
        };
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(n) = self.samples {
            cfg.count = n;
        }
        if let Some(r) = self.r_max {
            cfg.r_max = r;
        }
        if let Some(a) = self.a_max {
            cfg.a_max = a;
        }
        if let Some(d) = self.distribution {
            cfg.distribution = d.into();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// monogamy, exclusivity, logdet, ssa, rgs-consistency, qss-bounds or all.
    #[arg(long)]
    pub suite: String,
    #[command(flatten)]
    pub sampler: SamplerArgs,
    /// Inequality slack.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Where offending states are written on failure.
    #[arg(long, default_value = ".")]
    pub dump_dir: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    #[value(name = "1a")]
    OneA,
    #[value(name = "1b")]
    OneB,
    #[value(name = "2")]
    Two,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub figure: Figure,
    /// Fixed local invariant of mode A (figure 1a).
    #[arg(long, default_value_t = 2.0)]
    pub a: f64,
    /// Grid points per axis (1a) or intervals in R (1b).
    #[arg(long)]
    pub grid: Option<usize>,
    /// Upper end of the b and c axes (figure 1a).
    #[arg(long, default_value_t = 5.0)]
    pub bc_max: f64,
    /// Squeezing parameter (figure 1b).
    #[arg(long, default_value_t = 0.345)]
    pub r: f64,
    /// Second beamsplitter reflectivity (figure 1b).
    #[arg(long, default_value_t = 0.5)]
    pub r_prime: f64,
    #[command(flatten)]
    pub sampler: SamplerArgs,
    /// Points per overlay series (figure 2).
    #[arg(long, default_value_t = 200)]
    pub series_points: usize,
    /// Largest a on the overlay series (figure 2).
    #[arg(long, default_value_t = 20.0)]
    pub series_a_max: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A failed command: exit code plus the one-line message.
#[derive(Debug)]
struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
}

impl From<SteerError> for Failure {
    fn from(e: SteerError) -> Self {
        let (code, kind) = match &e {
            SteerError::Usage(_) => (EXIT_USAGE, "usage"),
            SteerError::Domain(_) => (EXIT_DOMAIN, "domain"),
            SteerError::Degenerate(_) => (EXIT_DOMAIN, "degenerate"),
            SteerError::Internal(_) => (EXIT_DOMAIN, "internal"),
        };
        Failure {
            code,
            kind,
            message: e.message().to_string(),
        }
    }
}

fn usage(e: SteerError) -> Failure {
    Failure {
        code: EXIT_USAGE,
        kind: "usage",
        message: e.message().to_string(),
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_USAGE,
        kind: "io",
        message: format!("{}: {e}", path.display()),
    }
}

fn read_file(path: &Path) -> Result<String, SteerError> {
    std::fs::read_to_string(path).map_err(|e| SteerError::usage(format!("{}: {e}", path.display())))
}

fn build_state(src: &StateSource) -> Result<CovarianceMatrix, Failure> {
    if let Some(path) = &src.input {
        let text = read_file(path)?;
        return Ok(CovarianceMatrix::from_json(&text)?);
    }
    // constructor parameters are user input: any rejection is a usage error
    let built = if let Some(n) = src.vacuum {
        if n == 0 {
            Err(SteerError::usage("vacuum needs at least one mode"))
        } else {
            Ok(CovarianceMatrix::vacuum(n))
        }
    } else if let Some(r) = src.tmsv {
        two_mode_squeezed(r)
    } else if let Some(v) = &src.ghz_network {
        OpticalNetworkParams::new(v[0], v[1], v[2]).and_then(|p| ghz_network(&p))
    } else if let Some(v) = &src.standard_form {
        PureThreeModeParams::new(v[0], v[1], v[2]).and_then(|p| standard_form_pure(&p))
    } else {
        Err(SteerError::usage("no state source given"))
    };
    built.map_err(usage)
}

fn parse_party(label: &str, n_modes: usize) -> Result<Vec<usize>, SteerError> {
    let mut modes = Vec::new();
    for ch in label.chars().filter(|c| *c != ',') {
        let m = match ch {
            'A'..='Z' => ch as usize - 'A' as usize,
            'a'..='z' => ch as usize - 'a' as usize,
            _ => return Err(SteerError::usage(format!("bad party label {label:?}"))),
        };
        if m >= n_modes || modes.contains(&m) {
            return Err(SteerError::usage(format!(
                "party label {label:?} invalid for {n_modes} modes"
            )));
        }
        modes.push(m);
    }
    if modes.is_empty() {
        return Err(SteerError::usage("empty party label"));
    }
    Ok(modes)
}

fn party_label(modes: &[usize]) -> String {
    modes.iter().map(|&m| (b'A' + m as u8) as char).collect()
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes")
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| io_failure(p, e)),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| io_failure(Path::new("<stdout>"), e)),
    }
}

fn state_document(state: &CovarianceMatrix) -> Result<serde_json::Value, Failure> {
    let n = state.n_modes();
    let mut doc = serde_json::to_value(state).expect("state serializes");
    let obj = doc.as_object_mut().expect("object");
    obj.insert("schema".into(), json!(SCHEMA));
    obj.insert("pure".into(), json!(state.is_pure()));
    obj.insert(
        "symplectic_eigenvalues".into(),
        json!(state.symplectic_eigenvalues()?),
    );
    if n == 3 {
        obj.insert("local_invariants".into(), json!(local_invariants(state)?));
    }
    Ok(doc)
}

fn cmd_state(
    src: &StateSource,
    out_path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let state = build_state(src)?;
    let doc = state_document(&state)?;
    emit(out, out_path, &format!("{}\n", to_json(&doc)))
}

fn cmd_analyze(args: &AnalyzeArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let state = build_state(&args.source)?;
    let doc = if let Some(dir) = &args.steering {
        let from = parse_party(&dir[0], state.n_modes())?;
        let to = parse_party(&dir[1], state.n_modes())?;
        let g = gaussian_steering(&state, &from, &to)?;
        json!({
            "schema": SCHEMA,
            "steering": party_label(&from),
            "steered": party_label(&to),
            "value": g.value,
            "schur_spectrum": g.schur_spectrum,
        })
    } else if args.rgs {
        let value = rgs(&state)?;
        let closed = PureThreeModeParams::from_state(&state)
            .ok()
            .map(|p| rgs_closed_form(&p));
        json!({
            "schema": SCHEMA,
            "rgs": value.value,
            "closed_form": closed,
            "minimizing": value.minimizing,
            "minimizing_direction": value.minimizing_direction,
            "steered_residuals": value.steered_residuals,
            "steering_residuals": value.steering_residuals,
        })
    } else {
        serde_json::to_value(key_rate_report(&state, args.key_quadrature.into())?)
            .expect("report serializes")
    };
    emit(out, args.out.as_deref(), &format!("{}\n", to_json(&doc)))
}

fn format_outcomes(outcomes: &[SuiteOutcome]) -> String {
    let mut text = String::new();
    for o in outcomes {
        writeln!(text, "{o}").unwrap();
    }
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    writeln!(
        text,
        "summary: suites={} failed={} {}",
        outcomes.len(),
        failed,
        if failed == 0 { "PASS" } else { "FAIL" }
    )
    .unwrap();
    text
}

fn dump_witness(dir: &Path, outcome: &SuiteOutcome) -> Result<PathBuf, Failure> {
    let w = outcome
        .worst
        .as_ref()
        .expect("failing suites have a witness");
    let mut doc = state_document(&w.state)?;
    let obj = doc.as_object_mut().expect("object");
    obj.insert("suite".into(), json!(outcome.suite.name()));
    obj.insert("sample_index".into(), json!(w.sample_index));
    obj.insert("description".into(), json!(w.description));
    obj.insert("worst_slack".into(), json!(outcome.worst_slack));
    let path = dir.join(format!("steerlab-violation-{}.json", outcome.suite.name()));
    std::fs::write(&path, to_json(&doc)).map_err(|e| io_failure(&path, e))?;
    Ok(path)
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let suites = Suite::parse_list(&args.suite)?;
    let sampler = args.sampler.resolve(10_000)?;
    let cfg = VerifyConfig {
        seed: sampler.seed,
        samples: sampler.count,
        tolerance: args.tol,
        r_max: sampler.r_max,
        a_max: sampler.a_max,
    };
    let outcomes = suites
        .iter()
        .map(|&s| run_suite(s, &cfg))
        .collect::<Result<Vec<_>, _>>()?;
    emit(out, None, &format_outcomes(&outcomes))?;
    let failed: Vec<&SuiteOutcome> = outcomes.iter().filter(|o| !o.passed()).collect();
    if failed.is_empty() {
        return Ok(());
    }
    let mut dumped = Vec::new();
    for o in &failed {
        dumped.push(dump_witness(&args.dump_dir, o)?.display().to_string());
    }
    Err(Failure {
        code: EXIT_VIOLATION,
        kind: "violation",
        message: format!(
            "{} suite(s) failed; offending states written to {}",
            failed.len(),
            dumped.join(", ")
        ),
    })
}

fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let mut csv = String::new();
    let mut violations = 0;
    match args.figure {
        Figure::OneA => {
            let rows = fig1a_sweep(args.a, args.grid.unwrap_or(200), args.bc_max).map_err(usage)?;
            csv.push_str("b,c,rgs\n");
            for r in rows {
                writeln!(csv, "{},{},{}", r.b, r.c, r.rgs).unwrap();
            }
        }
        Figure::OneB => {
            let rows =
                fig1b_sweep(args.r, args.grid.unwrap_or(1000), args.r_prime).map_err(usage)?;
            csv.push_str("R,a,b,c,rgs\n");
            for r in rows {
                writeln!(csv, "{},{},{},{},{}", r.reflectivity, r.a, r.b, r.c, r.rgs).unwrap();
            }
        }
        Figure::Two => {
            let cfg = args.sampler.resolve(100_000)?;
            let series = SeriesConfig {
                points: args.series_points,
                a_max: args.series_a_max,
            };
            let rows = fig2_campaign(&cfg, &series)?;
            csv.push_str("sample_index,a,b,c,rgs,k_raw,k_clamped,lower_bound,upper_bound,slack_lower,slack_upper,series\n");
            for r in rows {
                if r.violates(1e-9) {
                    violations += 1;
                }
                writeln!(
                    csv,
                    "{},{},{},{},{},{},{},{},{},{},{},{}",
                    r.sample_index,
                    r.a,
                    r.b,
                    r.c,
                    r.rgs,
                    r.k_raw,
                    r.k_clamped,
                    r.lower_bound,
                    r.upper_bound,
                    r.slack_lower,
                    r.slack_upper,
                    r.series.label()
                )
                .unwrap();
            }
        }
    }
    emit(out, args.out.as_deref(), &csv)?;
    if violations > 0 {
        return Err(Failure {
            code: EXIT_VIOLATION,
            kind: "violation",
            message: format!("{violations} rows violate the key-rate envelope"),
        });
    }
    Ok(())
}

fn cmd_threshold(out: &mut dyn Write) -> Result<(), Failure> {
    let t = threshold_squeezing_ghz()?;
    emit(out, None, &format!("r_star={:.4}\ndb={:.4}\n", t.r, t.db))
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<(), Failure> {
    match &cli.command {
        Command::State { source, out: path } => cmd_state(source, path.as_deref(), out),
        Command::Analyze(args) => cmd_analyze(args, out),
        Command::Verify(args) => cmd_verify(args, out),
        Command::Sweep(args) => cmd_sweep(args, out),
        Command::Threshold => cmd_threshold(out),
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let first = e.to_string();
            let line = first
                .lines()
                .next()
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ");
            let _ = writeln!(err, "error[usage]: {line}");
            return EXIT_USAGE;
        }
    };
    // campaigns run inside the pool; their output is buffered so the
    // caller's writer never crosses threads
    let mut buffer = Vec::new();
    let result = match cli.threads {
        Some(0) => Err(Failure {
            code: EXIT_USAGE,
            kind: "usage",
            message: "--threads must be ≥ 1".into(),
        }),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli, &mut buffer)),
            Err(e) => Err(Failure {
                code: EXIT_USAGE,
                kind: "usage",
                message: format!("cannot start {n} threads: {e}"),
            }),
        },
        None => dispatch(&cli, &mut buffer),
    };
    let _ = out.write_all(&buffer);
    let _ = out.flush();
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error[{}]: {}", f.kind, f.message.replace('\n', " "));
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["steerlab"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn party_labels() {
        assert_eq!(parse_party("BC", 3).unwrap(), vec![1, 2]);
        assert_eq!(parse_party("a,c", 3).unwrap(), vec![0, 2]);
        assert!(parse_party("D", 3).is_err());
        assert!(parse_party("AA", 3).is_err());
        assert!(parse_party("1", 3).is_err());
        assert_eq!(party_label(&[1, 2]), "BC");
    }

    #[test]
    fn state_requires_exactly_one_source() {
        let (code, out, err) = run_capture(&["state"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(out.is_empty());
        assert!(
            err.starts_with("error[usage]: ") && err.lines().count() == 1,
            "{err}"
        );
        let (code, _, _) = run_capture(&["state", "--vacuum", "2", "--tmsv", "0.3"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn triangle_violation_is_usage_error() {
        let (code, _, err) = run_capture(&["state", "--standard-form", "3", "1", "1"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.starts_with("error[usage]"));
    }

    #[test]
    fn rgs_of_mixed_state_is_domain_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("thermal.json");
        std::fs::write(&path, CovarianceMatrix::thermal(3, 2.0).unwrap().to_json()).unwrap();
        let (code, _, err) = run_capture(&["analyze", "--input", path.to_str().unwrap(), "--rgs"]);
        assert_eq!(code, EXIT_DOMAIN, "{err}");
    }

    #[test]
    fn violation_dump_reloads_as_state() {
        use crate::verify::Witness;
        let dir = tempfile::tempdir().unwrap();
        let state = crate::states::random_mixed_at(3, 1.0, 42, 17);
        let outcome = SuiteOutcome {
            suite: Suite::Ssa,
            samples: 20,
            checks: 20,
            not_applicable: 0,
            violations: 1,
            worst_slack: -1.0,
            worst: Some(Witness {
                sample_index: 17,
                description: "mixed A|B|C".into(),
                state: state.clone(),
            }),
        };
        let path = dump_witness(dir.path(), &outcome).unwrap();
        assert!(path.ends_with("steerlab-violation-ssa.json"));
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(CovarianceMatrix::from_json(&text).unwrap(), state);
        let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(doc["sample_index"], 17);
        assert_eq!(doc["suite"], "ssa");

        // the dumped index regenerates the same state from the seed
        assert_eq!(crate::states::random_mixed_at(3, 1.0, 42, 17), state);
        let (code, out, _) = run_capture(&["state", "--input", path.to_str().unwrap()]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("symplectic_eigenvalues"));
    }

    #[test]
    fn bad_direction_label_is_usage_error() {
        let (code, _, _) = run_capture(&["analyze", "--tmsv", "0.5", "--steering", "A", "C"]);
        assert_eq!(code, EXIT_USAGE);
    }
}
