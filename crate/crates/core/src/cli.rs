//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on an internal failure or a failed
//! verification, 2 on an invalid configuration. Output files are written to
//! a temporary file in the destination directory and renamed into place, so
//! a failed run never leaves a partial file.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::bounds::{build_report, equality_references, ReportPoint};
use crate::combinatorics::{count_rank, entropy_bound, log_rank_bounds, tightness_sweep, TIGHTNESS_HEADER};
use crate::error::Error;
use crate::smp::{
    bruteforce_deterministic_cc, coherent_fingerprint_protocol, equality_function, evaluate_error,
    FunctionTable, PairSelection, ProtocolSpec, RepetitionCode, D_CONVENTION, DEFAULT_COHERENT_TAIL,
};
use crate::truncation::{markov_cutoff, transform_protocol, DEFAULT_DELTA};
use crate::verify::{run_suites, summary, Suite, VerifyConfig};

#[derive(Debug, Parser)]
#[command(name = "optical-smp", version, about = "Photon-number truncation and tradeoff reports for optical SMP protocols")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output file (stdout when omitted)
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Worker threads (defaults to all cores)
    #[arg(long, value_name = "N")]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tradeoff report over a parameter grid or fingerprinting protocol instances
    Bounds {
        /// JSON grid description; without it the fingerprinting family n = 8, 16, 32, 64 is reported
        #[arg(long, value_name = "PATH")]
        config: Option<PathBuf>,
        /// Truncation parameter δ in (0, 1)
        #[arg(long, value_name = "R")]
        delta: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Exact (or sampled) error of a protocol given as JSON
    Simulate {
        #[arg(long, value_name = "PATH")]
        config: PathBuf,
        /// Seed for sampled evaluation (overrides the config's seed)
        #[arg(long, value_name = "U64")]
        seed: Option<u64>,
        /// Also truncate every message at ⌊µ/δ⌋ photons and re-evaluate
        #[arg(long, value_name = "R")]
        truncate: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Seeded property suites over the finite inequalities
    Verify {
        /// Run a single suite
        #[arg(long, value_name = "NAME")]
        suite: Option<String>,
        #[arg(long, value_name = "U64", default_value_t = 0)]
        seed: u64,
        /// Random cases per randomized check
        #[arg(long, value_name = "N", default_value_t = 1000)]
        samples: usize,
        /// Largest n and m in the binomial-power sweep
        #[arg(long, value_name = "N", default_value_t = 50)]
        max: u32,
        /// Replace every suite tolerance (negative values force failures)
        #[arg(long, value_name = "R", hide = true, allow_hyphen_values = true)]
        inject_tolerance: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Exact deterministic communication complexity of a small function table
    Dcc {
        /// JSON table {"n": …, "values": [[…], …]}
        #[arg(long, value_name = "PATH", conflicts_with = "equality")]
        config: Option<PathBuf>,
        /// Use the Equality function on N bits instead of a table file
        #[arg(long, value_name = "N")]
        equality: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Dimension of the truncated subspace and its bounds
    Rank {
        #[arg(long, value_name = "M")]
        modes: Option<usize>,
        #[arg(long, value_name = "A", conflicts_with_all = ["mu", "delta"])]
        cutoff: Option<u64>,
        #[arg(long, value_name = "R", requires = "delta")]
        mu: Option<f64>,
        #[arg(long, value_name = "R", requires = "mu")]
        delta: Option<f64>,
        /// Emit the a = m = ⌈√n⌉ profile for n = 1..=N
        #[arg(long, value_name = "N", conflicts_with_all = ["modes", "cutoff", "mu", "delta"])]
        tightness: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug)]
enum Failure {
    /// Exit code 2.
    Config(String),
    /// Exit code 1.
    Internal(String),
    /// Exit code 1, after the output has been written.
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_)
            | Error::InvalidParameter { .. }
            | Error::DeltaOutOfRange(_)
            | Error::InvalidCode(_)
            | Error::TooLarge { .. }
            | Error::Json(_)
            | Error::PremiseViolated(_) => Failure::Config(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(Failure::Verification) => 1,
    }
}

fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> CliResult<T> + Send) -> CliResult<T> {
    match jobs {
        None => f(),
        Some(0) => Err(Failure::Config("--jobs must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Failure::Internal(e.to_string()))?
            .install(f),
    }
}

fn read_config(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))
}

/// Writes `contents` to `out` atomically, or to stdout.
fn emit(out: Option<&Path>, contents: &str) -> CliResult<()> {
    match out {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(contents.as_bytes())
                .map_err(|e| Failure::Internal(e.to_string()))
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)
                .map_err(|e| Failure::Internal(format!("cannot create file in {}: {e}", dir.display())))?;
            tmp.write_all(contents.as_bytes())
                .map_err(|e| Failure::Internal(e.to_string()))?;
            tmp.persist(path)
                .map_err(|e| Failure::Internal(format!("cannot write {}: {e}", path.display())))?;
            Ok(())
        }
    }
}

fn execute(command: Command) -> CliResult<()> {
    match command {
        Command::Bounds { config, delta, common } => {
            let text = with_jobs(common.jobs, || cmd_bounds(config.as_deref(), delta))?;
            emit(common.out.as_deref(), &text)
        }
        Command::Simulate {
            config,
            seed,
            truncate,
            common,
        } => {
            let text = with_jobs(common.jobs, || cmd_simulate(&config, seed, truncate))?;
            emit(common.out.as_deref(), &text)
        }
        Command::Verify {
            suite,
            seed,
            samples,
            max,
            inject_tolerance,
            common,
        } => {
            let suites = match suite {
                Some(name) => vec![name.parse::<Suite>()?],
                None => Suite::ALL.to_vec(),
            };
            let cfg = VerifyConfig {
                seed,
                samples,
                lemma4_max: max,
                tolerance_override: inject_tolerance,
            };
            let results = with_jobs(common.jobs, || Ok(run_suites(&suites, &cfg)?))?;
            let text = summary(&results, &cfg);
            emit(common.out.as_deref(), &text)?;
            if results.iter().all(|r| r.passed()) {
                Ok(())
            } else {
                if common.out.is_some() {
                    for r in results.iter().filter(|r| !r.passed()) {
                        eprintln!(
                            "counterexample {}: {}",
                            r.suite.name(),
                            r.counterexample.as_deref().unwrap_or_default()
                        );
                    }
                }
                Err(Failure::Verification)
            }
        }
        Command::Dcc {
            config,
            equality,
            common,
        } => {
            let table = match (config, equality) {
                (Some(path), _) => FunctionTable::from_json(&read_config(&path)?)?,
                (None, Some(n)) => equality_function(n)?,
                (None, None) => return Err(Failure::Config("dcc needs --config PATH or --equality N".into())),
            };
            let d = bruteforce_deterministic_cc(&table)?;
            emit(
                common.out.as_deref(),
                &format!("# {D_CONVENTION}\nn,D\n{},{d}\n", table.input_bits()),
            )
        }
        Command::Rank {
            modes,
            cutoff,
            mu,
            delta,
            tightness,
            common,
        } => {
            let text = cmd_rank(modes, cutoff, mu, delta, tightness)?;
            emit(common.out.as_deref(), &text)
        }
    }
}

/// `bounds` configuration. `grid` lists explicit points; `qfp` builds
/// repetition-code fingerprinting protocols for each `n`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundsConfig {
    #[serde(default)]
    grid: Option<GridConfig>,
    #[serde(default)]
    qfp: Option<QfpFamily>,
    /// Attach Equality references (exact D for n ≤ 3).
    #[serde(default = "default_true")]
    equality_references: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridConfig {
    /// Inclusive range `[lo, hi]`.
    m: [usize; 2],
    mu: Vec<f64>,
    #[serde(default)]
    delta: Option<Vec<f64>>,
    #[serde(default)]
    n: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct QfpFamily {
    n: Vec<usize>,
    mu: f64,
    #[serde(default = "default_factor")]
    factor: usize,
}

fn default_factor() -> usize {
    3
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> CliResult<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        if path == "." {
            Failure::Config(e.inner().to_string())
        } else {
            Failure::Config(format!("field `{path}`: {}", e.inner()))
        }
    })
}

fn cmd_bounds(config: Option<&Path>, delta: Option<f64>) -> CliResult<String> {
    let cfg: BoundsConfig = match config {
        Some(path) => parse_json(&read_config(path)?)?,
        None => BoundsConfig {
            grid: None,
            qfp: Some(QfpFamily {
                n: vec![8, 16, 32, 64],
                mu: 2.0,
                factor: 3,
            }),
            equality_references: true,
        },
    };
    let default_delta = delta.unwrap_or(DEFAULT_DELTA);
    let mut points = Vec::new();
    if let Some(g) = &cfg.grid {
        if g.m[0] > g.m[1] || g.mu.is_empty() {
            return Err(Failure::Config("field `grid`: empty sweep range".into()));
        }
        let deltas = match (&g.delta, delta) {
            (_, Some(d)) => vec![d],
            (Some(ds), None) if !ds.is_empty() => ds.clone(),
            (Some(_), None) => return Err(Failure::Config("field `grid.delta`: empty list".into())),
            (None, None) => vec![default_delta],
        };
        for m in g.m[0]..=g.m[1] {
            for &mu in &g.mu {
                for &d in &deltas {
                    points.push(ReportPoint::new(g.n, m, mu, d));
                }
            }
        }
    }
    if let Some(f) = &cfg.qfp {
        if f.n.is_empty() {
            return Err(Failure::Config("field `qfp.n`: empty list".into()));
        }
        for &n in &f.n {
            let code = RepetitionCode::new(n, f.factor).map_err(|e| Failure::Config(format!("field `qfp`: {e}")))?;
            let p = coherent_fingerprint_protocol(Arc::new(code), f.mu, DEFAULT_COHERENT_TAIL)
                .map_err(|e| Failure::Config(format!("field `qfp`: {e}")))?;
            points.push(ReportPoint::from_protocol(&p, default_delta)?);
        }
    }
    if points.is_empty() {
        return Err(Failure::Config("config defines neither `grid` nor `qfp`".into()));
    }
    let mut refs = Vec::new();
    if cfg.equality_references {
        let mut ns: Vec<usize> = points.iter().filter_map(|p| p.n).collect();
        ns.sort_unstable();
        ns.dedup();
        for n in ns {
            refs.extend(equality_references(n)?);
        }
    }
    Ok(build_report(&points, &refs)?.to_csv())
}

fn cmd_simulate(config: &Path, seed: Option<u64>, truncate: Option<f64>) -> CliResult<String> {
    let spec = ProtocolSpec::from_json(&read_config(config)?)?;
    let protocol = spec.build()?;
    let selection = spec.selection(seed)?;
    let report = evaluate_error(&protocol, &selection)?;
    let mut out = String::new();
    let _ = writeln!(out, "# protocol: {}", protocol.label());
    let _ = writeln!(out, "# referee: {}", protocol.referee().describe());
    let _ = writeln!(
        out,
        "# mu={} (maximum mean photon number per message over both parties)",
        protocol.mu()
    );
    let Some(delta) = truncate else {
        out.push_str(&report.to_csv());
        return Ok(out);
    };
    if selection != PairSelection::All {
        return Err(Failure::Config("--truncate requires exhaustive evaluation (no `pairs` in the spec)".into()));
    }
    let t = transform_protocol(&protocol, delta)?;
    let after = evaluate_error(&t.protocol, &PairSelection::All)?;
    let _ = writeln!(out, "# truncation: delta={} a={} min_weight={} max_trace_distance={}", delta, t.spec.cutoff, t.min_weight, t.max_trace_distance);
    let _ = writeln!(out, "# worst_error={} worst_pair=({},{})", report.worst_error, report.worst_pair.0, report.worst_pair.1);
    let _ = writeln!(out, "# worst_error_truncated={} worst_pair=({},{})", after.worst_error, after.worst_pair.0, after.worst_pair.1);
    let _ = writeln!(out, "# budget=worst_error+2*sqrt(delta)={}", t.error_bound);
    out.push_str("x,y,f,p_error,p_error_truncated,budget\n");
    for (a, b) in report.per_pair.iter().zip(&after.per_pair) {
        let _ = writeln!(out, "{},{},{},{},{},{}", a.x, a.y, u8::from(a.f), a.p_error, b.p_error, t.error_bound);
    }
    Ok(out)
}

fn cmd_rank(
    modes: Option<usize>,
    cutoff: Option<u64>,
    mu: Option<f64>,
    delta: Option<f64>,
    tightness: Option<u64>,
) -> CliResult<String> {
    if let Some(n_max) = tightness {
        let mut out = String::from("# logarithms base 2; a = m = ceil(sqrt(n))\n");
        out.push_str(TIGHTNESS_HEADER);
        out.push('\n');
        for row in tightness_sweep(n_max)? {
            out.push_str(&row.csv_line());
            out.push('\n');
        }
        return Ok(out);
    }
    let m = modes.ok_or_else(|| Failure::Config("rank needs --modes M (or --tightness N)".into()))?;
    if m == 0 {
        return Err(Failure::Config("--modes must be at least 1".into()));
    }
    let mut out = String::from("# logarithms base 2\n");
    match (cutoff, mu, delta) {
        (Some(a), _, _) => {
            let r = count_rank(m, a);
            let e = entropy_bound(a, m)?;
            out.push_str("m,a,rank,log2_rank,entropy_bound\n");
            let _ = writeln!(out, "{m},{a},{},{},{}", r.rank, r.log2_rank, e.bound);
        }
        (None, Some(mu), Some(delta)) => {
            let spec = markov_cutoff(mu, delta, m)?;
            let r = count_rank(m, spec.cutoff);
            let b = log_rank_bounds(&spec);
            let e = entropy_bound(spec.cutoff, m)?;
            out.push_str("m,mu,delta,a,rank,log2_rank,bound_photon,bound_mode,entropy_bound\n");
            let _ = writeln!(
                out,
                "{m},{mu},{delta},{},{},{},{},{},{}",
                spec.cutoff, r.rank, r.log2_rank, b.bound_photon, b.bound_mode, e.bound
            );
        }
        _ => return Err(Failure::Config("rank needs --cutoff A or --mu R --delta R".into())),
    }
    Ok(out)
}
