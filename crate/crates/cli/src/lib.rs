//! Command-line experiments: tail bounds, moment-generating functions,
//! the coupling law, and sampling-operator norms. Every subcommand writes a
//! CSV with a header row and returns a one-line summary.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use matrix_bernstein::bounds::{empirical_mgf, exact_mgf, outcome_count, tail_curve, EXACT_MGF_LIMIT};
use matrix_bernstein::coupling::{exact_coupling_distribution, run_coupling, EXACT_MAX_C, EXACT_MAX_M};
use matrix_bernstein::enumerate::{for_each_tuple, power};
use matrix_bernstein::format::{parse_members, sci};
use matrix_bernstein::parallel::map_trials;
use matrix_bernstein::rng::child_seed;
use matrix_bernstein::sampler::sample_without_replacement;
use matrix_bernstein::sampling_operator::operator_norm_study;
use matrix_bernstein::stats::chi_square_uniform;
use matrix_bernstein::{MatrixEnsemble, SamplingMode};
use thiserror::Error;

/// Largest number of outcome rows `coupling-verify --trials` will tabulate.
pub const MAX_TABULATED_OUTCOMES: u128 = 1_000_000;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{flag}: {message}")]
    Flag { flag: &'static str, message: String },

    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },

    #[error(transparent)]
    Core(#[from] matrix_bernstein::Error),
}

fn flag_error(flag: &'static str, message: impl ToString) -> CliError {
    CliError::Flag {
        flag,
        message: message.to_string(),
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "matbern",
    version,
    about = "Operator-Bernstein experiments for matrix sampling with and without replacement"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Empirical tail Pr[‖S‖ > t] against the Bernstein bound on a grid of t.
    TailBound(TailBoundArgs),
    /// Operator moment-generating functions of both sampling models.
    MgfCompare(MgfCompareArgs),
    /// Law of the coupled vector Z(Y) against the uniform law on C^m.
    CouplingVerify(CouplingVerifyArgs),
    /// Norm of (m/n²)R for sampled basis indices.
    SamplingOperator(SamplingOperatorArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Master seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV destination (standard output when absent).
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Worker threads for trial loops; results do not depend on it.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
}

/// `n,count,seed`
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomEnsembleSpec {
    pub dim: usize,
    pub count: usize,
    pub seed: u64,
}

impl FromStr for RandomEnsembleSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [dim, count, seed] = parts[..] else {
            return Err(format!("expected n,count,seed, found {s:?}"));
        };
        Ok(Self {
            dim: dim.parse().map_err(|_| format!("bad dimension {dim:?}"))?,
            count: count.parse().map_err(|_| format!("bad count {count:?}"))?,
            seed: seed.parse().map_err(|_| format!("bad seed {seed:?}"))?,
        })
    }
}

/// `start:end:steps`, `steps` evenly spaced points including both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub end: f64,
    pub steps: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| self.start + (self.end - self.start) * i as f64 / last)
            .collect()
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let [start, end, steps] = parts[..] else {
            return Err(format!("expected start:end:steps, found {s:?}"));
        };
        let start: f64 = start.parse().map_err(|_| format!("bad start {start:?}"))?;
        let end: f64 = end.parse().map_err(|_| format!("bad end {end:?}"))?;
        let steps: usize = steps.parse().map_err(|_| format!("bad step count {steps:?}"))?;
        if steps == 0 {
            return Err("step count must be at least 1".into());
        }
        if !start.is_finite() || !end.is_finite() {
            return Err("grid ends must be finite".into());
        }
        Ok(Self { start, end, steps })
    }
}

#[derive(Debug, Clone, Args)]
pub struct EnsembleArgs {
    /// Ensemble file: "count n" header followed by count matrices.
    #[arg(
        long,
        conflicts_with = "random_ensemble",
        required_unless_present = "random_ensemble"
    )]
    pub ensemble: Option<PathBuf>,
    /// Centered Gaussian ensemble, given as n,count,seed.
    #[arg(long, value_name = "N,COUNT,SEED")]
    pub random_ensemble: Option<RandomEnsembleSpec>,
    /// Override for the norm bound c; must be at least the computed value.
    #[arg(long)]
    pub norm_bound: Option<f64>,
    /// Override for the variance bound σ₀²; must be at least the computed value.
    #[arg(long)]
    pub variance_bound: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct TailBoundArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    /// Number of sampled matrices.
    #[arg(long)]
    pub m: usize,
    /// iid or noreplace.
    #[arg(long, default_value = "iid")]
    pub mode: SamplingMode,
    /// Thresholds t: STEPS evenly spaced points from A to B.
    #[arg(long, value_name = "A:B:STEPS", allow_hyphen_values = true)]
    pub t_grid: Grid,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct MgfCompareArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    /// Number of sampled matrices.
    #[arg(long)]
    pub m: usize,
    /// Scales s: STEPS evenly spaced points from A to B.
    #[arg(long, value_name = "A:B:STEPS", allow_hyphen_values = true)]
    pub scale_grid: Grid,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
#[command(group(clap::ArgGroup::new("method").required(true).args(["exact", "trials"])))]
pub struct CouplingVerifyArgs {
    /// Size of the ground set C.
    #[arg(long)]
    pub c_size: usize,
    /// Length of the sample vector.
    #[arg(long)]
    pub m: usize,
    /// Exact rational enumeration.
    #[arg(long, conflicts_with = "trials")]
    pub exact: bool,
    /// Monte Carlo runs of Z(Y).
    #[arg(long)]
    pub trials: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct SamplingOperatorArgs {
    /// Matrix dimension; the basis has n² elements.
    #[arg(long)]
    pub n: usize,
    /// Number of sampled basis indices.
    #[arg(long)]
    pub m: usize,
    /// iid, noreplace or bernoulli (expected size m).
    #[arg(long, default_value = "iid")]
    pub mode: SamplingMode,
    #[arg(long, default_value_t = 1_000)]
    pub trials: usize,
    #[command(flatten)]
    pub common: Common,
}

/// CSV text plus the one-line summary.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub csv: String,
    pub summary: String,
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::TailBound(a) => &a.common,
            Command::MgfCompare(a) => &a.common,
            Command::CouplingVerify(a) => &a.common,
            Command::SamplingOperator(a) => &a.common,
        }
    }
}

pub fn run(command: &Command) -> Result<Report, CliError> {
    if command.common().workers == 0 {
        return Err(flag_error("--workers", "must be at least 1"));
    }
    match command {
        Command::TailBound(a) => tail_bound(a),
        Command::MgfCompare(a) => mgf_compare(a),
        Command::CouplingVerify(a) => coupling_verify(a),
        Command::SamplingOperator(a) => sampling_operator(a),
    }
}

fn load_ensemble(args: &EnsembleArgs) -> Result<MatrixEnsemble, CliError> {
    let ensemble = match (&args.ensemble, args.random_ensemble) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
                path: path.clone(),
                message: e.to_string(),
            })?;
            let members =
                parse_members(&text).map_err(|e| flag_error("--ensemble", format!("{}: {e}", path.display())))?;
            MatrixEnsemble::analyze(members).map_err(|e| flag_error("--ensemble", e))?
        }
        (None, Some(spec)) => {
            MatrixEnsemble::random(spec.dim, spec.count, spec.seed).map_err(|e| flag_error("--random-ensemble", e))?
        }
        (None, None) => {
            return Err(flag_error(
                "--ensemble",
                "either --ensemble or --random-ensemble is required",
            ))
        }
    };
    if args.norm_bound.is_none() && args.variance_bound.is_none() {
        return Ok(ensemble);
    }
    let c = args.norm_bound.unwrap_or(ensemble.norm_bound_c());
    let s = args.variance_bound.unwrap_or(ensemble.variance_bound_sigma0sq());
    let flag = match ensemble.clone().with_bounds(c, ensemble.variance_bound_sigma0sq()) {
        Err(_) => "--norm-bound",
        Ok(_) => "--variance-bound",
    };
    ensemble.with_bounds(c, s).map_err(|e| flag_error(flag, e))
}

fn require_centered(e: &MatrixEnsemble, args: &EnsembleArgs) -> Result<(), CliError> {
    let flag = if args.ensemble.is_some() {
        "--ensemble"
    } else {
        "--random-ensemble"
    };
    e.require_centered().map_err(|err| flag_error(flag, err))
}

fn check_trials(trials: usize) -> Result<(), CliError> {
    if trials == 0 {
        return Err(flag_error("--trials", "must be at least 1"));
    }
    Ok(())
}

fn check_m(m: usize, size: usize, without_replacement: bool) -> Result<(), CliError> {
    if m == 0 {
        return Err(flag_error("--m", "must be at least 1"));
    }
    if without_replacement && m > size {
        return Err(flag_error(
            "--m",
            format!("cannot draw {m} distinct elements from a collection of {size}"),
        ));
    }
    Ok(())
}

fn tail_bound(a: &TailBoundArgs) -> Result<Report, CliError> {
    if a.mode == SamplingMode::Bernoulli {
        return Err(flag_error("--mode", "tail-bound supports iid and noreplace"));
    }
    let e = load_ensemble(&a.ensemble)?;
    require_centered(&e, &a.ensemble)?;
    check_m(a.m, e.size(), a.mode == SamplingMode::WithoutReplacement)?;
    check_trials(a.trials)?;
    let grid = a.t_grid.points();
    let reports = tail_curve(&e, a.m, a.mode, &grid, a.trials, a.common.seed, a.common.workers)?;

    let mut csv = String::from("t,empirical_tail,wilson_upper,theoretical_bound,mode,bound_capped\n");
    let mut worst: Option<f64> = None;
    for r in &reports {
        let capped = r.theoretical_bound.min(1.0);
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{}",
            sci(r.t),
            sci(r.empirical_tail),
            sci(r.wilson_upper),
            sci(r.theoretical_bound),
            r.mode,
            sci(capped)
        );
        if r.theoretical_bound <= 1.0 {
            let margin = r.wilson_upper - r.theoretical_bound;
            worst = Some(worst.map_or(margin, |w| w.max(margin)));
        }
    }
    let summary = match worst {
        Some(w) => format!(
            "tail-bound mode={} m={} trials={} n={} |C|={}: max(wilson_upper - bound) over informative points = {} ({})",
            a.mode,
            a.m,
            a.trials,
            e.dim(),
            e.size(),
            sci(w),
            if w <= 0.0 { "no violations" } else { "VIOLATION" }
        ),
        None => format!(
            "tail-bound mode={} m={} trials={}: bound exceeds 1 at every grid point",
            a.mode, a.m, a.trials
        ),
    };
    Ok(Report { csv, summary })
}

fn mgf_compare(a: &MgfCompareArgs) -> Result<Report, CliError> {
    let e = load_ensemble(&a.ensemble)?;
    check_m(a.m, e.size(), true)?;
    check_trials(a.trials)?;
    let (seed, workers) = (a.common.seed, a.common.workers);
    let iid = SamplingMode::WithReplacement;
    let noreplace = SamplingMode::WithoutReplacement;
    let exact_allowed = |mode| outcome_count(e.size(), a.m, mode).is_ok_and(|n| n <= EXACT_MGF_LIMIT);
    let exact_enabled = exact_allowed(iid) && exact_allowed(noreplace);

    let mut csv = String::from("scale,mgf_iid,mgf_noreplace,se_iid,se_noreplace,exact_iid,exact_noreplace\n");
    let mut worst_gap: Option<f64> = None;
    for scale in a.scale_grid.points() {
        let overflow = |err| flag_error("--scale-grid", format!("at scale {scale}: {err}"));
        let (mx, sx) = empirical_mgf(&e, a.m, iid, scale, a.trials, seed, workers).map_err(overflow)?;
        let (my, sy) = empirical_mgf(&e, a.m, noreplace, scale, a.trials, seed, workers).map_err(overflow)?;
        let (ex, ey) = if exact_enabled {
            let ex = exact_mgf(&e, a.m, iid, scale).map_err(overflow)?;
            let ey = exact_mgf(&e, a.m, noreplace, scale).map_err(overflow)?;
            worst_gap = Some(worst_gap.map_or(ey - ex, |g| g.max(ey - ex)));
            (sci(ex), sci(ey))
        } else {
            (String::new(), String::new())
        };
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            sci(scale),
            sci(mx),
            sci(my),
            sci(sx),
            sci(sy),
            ex,
            ey
        );
    }
    let summary = match worst_gap {
        Some(g) => format!(
            "mgf-compare m={} |C|={}: max(exact_noreplace - exact_iid) = {} ({})",
            a.m,
            e.size(),
            sci(g),
            if g <= 1e-10 {
                "M_Y <= M_X everywhere"
            } else {
                "VIOLATION"
            }
        ),
        None => format!(
            "mgf-compare m={} |C|={}: exact enumeration refused (more than {} outcomes); Monte Carlo only",
            a.m,
            e.size(),
            EXACT_MGF_LIMIT
        ),
    };
    Ok(Report { csv, summary })
}

fn outcome_label(outcome: &[usize]) -> String {
    outcome
        .iter()
        .map(|v| (v + 1).to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn coupling_verify(a: &CouplingVerifyArgs) -> Result<Report, CliError> {
    let (c, m) = (a.c_size, a.m);
    if c == 0 {
        return Err(flag_error("--c-size", "must be at least 1"));
    }
    check_m(m, c, true)?;
    let mut csv = String::from("outcome,probability,expected_probability,abs_error\n");

    if a.exact {
        if c > EXACT_MAX_C {
            return Err(flag_error(
                "--c-size",
                format!("exact enumeration supports at most {EXACT_MAX_C}"),
            ));
        }
        if m > EXACT_MAX_M {
            return Err(flag_error(
                "--m",
                format!("exact enumeration supports at most {EXACT_MAX_M}"),
            ));
        }
        let law = exact_coupling_distribution(c, m)?;
        let expected = law.uniform_probability();
        let mut nonzero = 0usize;
        let mut rows = 0usize;
        for_each_tuple(c, m, |x| {
            let p = law.probability(x);
            let err = num_traits::Signed::abs(&(&p - &expected));
            if !num_traits::Zero::is_zero(&err) {
                nonzero += 1;
            }
            rows += 1;
            let _ = writeln!(csv, "{},{},{},{}", outcome_label(x), p, expected, err);
        });
        let summary = format!(
            "coupling-verify exact |C|={c} m={m}: {rows} outcomes, total mass {}, {nonzero} outcomes differ from {expected}",
            law.total()
        );
        return Ok(Report { csv, summary });
    }

    let trials = a.trials.expect("clap enforces --exact or --trials");
    check_trials(trials)?;
    let outcomes = power(c, m);
    if outcomes > MAX_TABULATED_OUTCOMES {
        return Err(flag_error(
            "--c-size",
            format!("|C|^m = {outcomes} outcomes exceeds the tabulation limit {MAX_TABULATED_OUTCOMES}"),
        ));
    }
    let seed = a.common.seed;
    let codes = map_trials(trials, a.common.workers, |i| {
        let y = sample_without_replacement(c, m, child_seed(seed, "coupling-verify/y", i))?;
        let trace = run_coupling(&y, c, child_seed(seed, "coupling-verify/z", i))?;
        Ok(trace.output_z().iter().fold(0usize, |acc, &z| acc * c + z))
    })?;
    let mut counts = vec![0u64; outcomes as usize];
    for code in codes {
        counts[code] += 1;
    }
    let expected = 1.0 / outcomes as f64;
    let mut index = 0usize;
    for_each_tuple(c, m, |x| {
        let freq = counts[index] as f64 / trials as f64;
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            outcome_label(x),
            sci(freq),
            sci(expected),
            sci((freq - expected).abs())
        );
        index += 1;
    });
    let test = chi_square_uniform(&counts);
    let summary = format!(
        "coupling-verify monte-carlo |C|={c} m={m} trials={trials}: chi-square {} on {} dof, p = {}",
        sci(test.statistic),
        test.degrees_of_freedom,
        sci(test.p_value)
    );
    Ok(Report { csv, summary })
}

fn sampling_operator(a: &SamplingOperatorArgs) -> Result<Report, CliError> {
    if a.n == 0 {
        return Err(flag_error("--n", "must be at least 1"));
    }
    check_m(a.m, a.n * a.n, a.mode != SamplingMode::WithReplacement)?;
    check_trials(a.trials)?;
    let study = operator_norm_study(a.n, a.m, a.mode, a.trials, a.common.seed, a.common.workers)?;
    let mut csv = String::from("trial,norm,max_multiplicity,is_projection\n");
    for (i, t) in study.trials.iter().enumerate() {
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            i + 1,
            sci(t.norm),
            t.max_multiplicity,
            t.is_projection
        );
    }
    let projections = study.trials.iter().filter(|t| t.is_projection).count();
    let summary = format!(
        "sampling-operator n={} m={} mode={} trials={}: norm min {} median {} max {} (worst case m = {}), {projections} projections",
        a.n,
        a.m,
        a.mode,
        a.trials,
        study.min,
        study.median,
        study.max,
        a.m
    );
    Ok(Report { csv, summary })
}
