//! Operator-Bernstein tail bound for `S = Σ_{i ≤ m} X_i` and Monte Carlo /
//! exact estimates of the tail and of the operator moment-generating function
//! `M(λ) = E tr exp(λ S)`.
//!
//! With `V = m σ₀²` the bound reads
//!
//! ```text
//! Pr[‖S‖ > t] ≤ 2n exp(-t² / (4V))    for t ≤ 2V/c
//! Pr[‖S‖ > t] ≤ 2n exp(-t / (2c))     for t > 2V/c
//! ```
//!
//! and holds for draws with and without replacement alike.

use crate::ensemble::MatrixEnsemble;
use crate::enumerate::{check_limit, falling_factorial, for_each_arrangement, for_each_tuple, power};
use crate::error::{Error, Result};
use crate::hermitian::{matrix_sum, operator_norm, trace_exp, HermitianMatrix};
use crate::parallel::map_trials;
use crate::rng;
use crate::sampler::{realize, sample, SamplingMode};
use crate::stats::{mean_and_std_error, wilson_upper, KahanSum, Z_9999};

/// Largest number of equiprobable sample vectors [`exact_mgf`] enumerates.
pub const EXACT_MGF_LIMIT: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BernsteinParams {
    n: usize,
    m: usize,
    c: f64,
    sigma0sq: f64,
    v: f64,
}

impl BernsteinParams {
    pub fn new(n: usize, m: usize, c: f64, sigma0sq: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n", "must be at least 1"));
        }
        if m == 0 {
            return Err(Error::invalid("m", "must be at least 1"));
        }
        if !(c >= 0.0 && c.is_finite()) {
            return Err(Error::invalid("c", format!("{c} is not a finite nonnegative number")));
        }
        if !(sigma0sq >= 0.0 && sigma0sq.is_finite()) {
            return Err(Error::invalid(
                "sigma0sq",
                format!("{sigma0sq} is not a finite nonnegative number"),
            ));
        }
        Ok(Self {
            n,
            m,
            c,
            sigma0sq,
            v: m as f64 * sigma0sq,
        })
    }

    pub fn from_ensemble(e: &MatrixEnsemble, m: usize) -> Result<Self> {
        Self::new(e.dim(), m, e.norm_bound_c(), e.variance_bound_sigma0sq())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn sigma0sq(&self) -> f64 {
        self.sigma0sq
    }

    /// `V = m σ₀²`.
    pub fn v(&self) -> f64 {
        self.v
    }

    /// `2V / c`, the end of the Gaussian regime (infinite when `c = 0`).
    pub fn crossover(&self) -> f64 {
        if self.c == 0.0 {
            f64::INFINITY
        } else {
            2.0 * self.v / self.c
        }
    }

    /// `2n exp(-t² / 4V)`, valid for `t ≤ 2V/c`.
    pub fn gaussian_branch(&self, t: f64) -> f64 {
        if t == 0.0 {
            return 2.0 * self.n as f64;
        }
        2.0 * self.n as f64 * (-t * t / (4.0 * self.v)).exp()
    }

    /// `2n exp(-t / 2c)`, valid for `t > 2V/c`.
    pub fn exponential_branch(&self, t: f64) -> f64 {
        if t == 0.0 {
            return 2.0 * self.n as f64;
        }
        2.0 * self.n as f64 * (-t / (2.0 * self.c)).exp()
    }
}

/// Raw tail bound at `t`, not capped at 1.
pub fn bernstein_bound(p: &BernsteinParams, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::invalid("t", format!("{t} is negative or NaN")));
    }
    if t == 0.0 {
        return Ok(2.0 * p.n as f64);
    }
    if p.c == 0.0 && p.v == 0.0 {
        return Err(Error::DegenerateEnsemble);
    }
    // t ≤ 2V/c, written without the division so that c = 0 is covered.
    if t * p.c <= 2.0 * p.v {
        Ok(p.gaussian_branch(t))
    } else {
        Ok(p.exponential_branch(t))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailReport {
    pub t: f64,
    pub exceedances: usize,
    pub trials: usize,
    pub empirical_tail: f64,
    pub wilson_upper: f64,
    pub theoretical_bound: f64,
    pub mode: SamplingMode,
    pub seed: u64,
}

fn check_sampling(e: &MatrixEnsemble, m: usize, mode: SamplingMode) -> Result<()> {
    match mode {
        SamplingMode::Bernoulli => Err(Error::UnsupportedMode(mode)),
        SamplingMode::WithoutReplacement if m > e.size() => Err(Error::SampleTooLarge { m, size: e.size() }),
        _ if m == 0 => Err(Error::invalid("m", "must be at least 1")),
        _ => Ok(()),
    }
}

/// Draws `trials` sums `S` and applies `f` to each, in trial order.
#[allow(clippy::too_many_arguments)]
fn map_sums<T: Send>(
    e: &MatrixEnsemble,
    m: usize,
    mode: SamplingMode,
    trials: usize,
    seed: u64,
    workers: usize,
    label: &str,
    f: impl Fn(&HermitianMatrix) -> Result<T> + Sync + Send,
) -> Result<Vec<T>> {
    check_sampling(e, m, mode)?;
    let label = format!("{label}/{mode}");
    map_trials(trials, workers, |trial| {
        let v = sample(mode, e.size(), m, rng::child_seed(seed, &label, trial))?;
        f(&matrix_sum(&realize(&v, e)?)?)
    })
}

/// `‖S‖` for `trials` independent draws.
pub fn sample_sum_norms(
    e: &MatrixEnsemble,
    m: usize,
    mode: SamplingMode,
    trials: usize,
    seed: u64,
    workers: usize,
) -> Result<Vec<f64>> {
    map_sums(e, m, mode, trials, seed, workers, "tail", operator_norm)
}

/// Tail reports on a grid of thresholds, all computed from one batch of
/// draws.
///
/// For `t < 0` the attached bound is the one at `t = 0`, which is valid since
/// the tail is nonincreasing in `t`.
pub fn tail_curve(
    e: &MatrixEnsemble,
    m: usize,
    mode: SamplingMode,
    thresholds: &[f64],
    trials: usize,
    seed: u64,
    workers: usize,
) -> Result<Vec<TailReport>> {
    e.require_centered()?;
    if trials == 0 {
        return Err(Error::invalid("trials", "must be at least 1"));
    }
    let params = BernsteinParams::from_ensemble(e, m)?;
    let norms = sample_sum_norms(e, m, mode, trials, seed, workers)?;
    thresholds
        .iter()
        .map(|&t| {
            let theoretical_bound = match bernstein_bound(&params, t.max(0.0)) {
                Err(Error::DegenerateEnsemble) => 0.0,
                other => other?,
            };
            let exceedances = norms.iter().filter(|&&x| x > t).count();
            Ok(TailReport {
                t,
                exceedances,
                trials,
                empirical_tail: exceedances as f64 / trials as f64,
                wilson_upper: wilson_upper(exceedances, trials, Z_9999),
                theoretical_bound,
                mode,
                seed,
            })
        })
        .collect()
}

pub fn empirical_tail(
    e: &MatrixEnsemble,
    m: usize,
    mode: SamplingMode,
    t: f64,
    trials: usize,
    seed: u64,
    workers: usize,
) -> Result<TailReport> {
    Ok(tail_curve(e, m, mode, &[t], trials, seed, workers)?.remove(0))
}

/// Monte Carlo estimate of `E tr exp(scale · S)` and its standard error.
pub fn empirical_mgf(
    e: &MatrixEnsemble,
    m: usize,
    mode: SamplingMode,
    scale: f64,
    trials: usize,
    seed: u64,
    workers: usize,
) -> Result<(f64, f64)> {
    if trials == 0 {
        return Err(Error::invalid("trials", "must be at least 1"));
    }
    let values = map_sums(e, m, mode, trials, seed, workers, "mgf", |s| trace_exp(s, scale))?;
    Ok(mean_and_std_error(&values))
}

/// Number of equiprobable sample vectors of length `m` under `mode`.
pub fn outcome_count(size: usize, m: usize, mode: SamplingMode) -> Result<u128> {
    match mode {
        SamplingMode::WithReplacement => Ok(power(size, m)),
        SamplingMode::WithoutReplacement => Ok(falling_factorial(size, m)),
        SamplingMode::Bernoulli => Err(Error::UnsupportedMode(mode)),
    }
}

/// `E tr exp(scale · S)` by enumerating every equiprobable sample vector.
pub fn exact_mgf(e: &MatrixEnsemble, m: usize, mode: SamplingMode, scale: f64) -> Result<f64> {
    check_sampling(e, m, mode)?;
    let count = outcome_count(e.size(), m, mode)?;
    let what = match mode {
        SamplingMode::WithReplacement => "|C|^m",
        _ => "|C|!/(|C|-m)!",
    };
    check_limit(what, count, EXACT_MGF_LIMIT)?;

    let mut acc = KahanSum::default();
    let mut failure = None;
    let mut visit = |indices: &[usize]| {
        if failure.is_some() {
            return;
        }
        let terms: Vec<HermitianMatrix> = indices.iter().map(|&i| e.member(i).clone()).collect();
        match matrix_sum(&terms).and_then(|s| trace_exp(&s, scale)) {
            Ok(f) => acc.add(f),
            Err(err) => failure = Some(err),
        }
    };
    match mode {
        SamplingMode::WithReplacement => for_each_tuple(e.size(), m, &mut visit),
        _ => for_each_arrangement(e.size(), m, &mut visit),
    }
    if let Some(err) = failure {
        return Err(err);
    }
    Ok(acc.total() / count as f64)
}
