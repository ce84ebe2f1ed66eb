//! Hoeffding's coupling between sampling with and without replacement.
//!
//! Given a draw `y = (y₁, …, y_m)` with pairwise distinct components from a
//! collection of `|C|` elements, the randomized map `Z` produces
//! `z = (z₁, …, z_m)` one component at a time. Let `D_k` be the set of values
//! already produced before step `k`. Then `z_k` is
//!
//! 1. with probability `|D_k| / |C|`, a uniform element of `D_k`;
//! 2. otherwise a uniform element of `{y₁, …, y_m} \ D_k`.
//!
//! When `Y` is a uniform draw without replacement, `Z(Y)` is distributed like
//! `m` i.i.d. uniform draws from `C`, and `E_Z[Σ Z_i(y)] = Σ y_i` for every
//! fixed `y`. Jensen's inequality then gives `E f(S_Y) ≤ E f(S_X)` for any
//! convex `f`, in particular `f = tr exp(λ ·)`.
//!
//! Everything here that claims an exact identity is computed by exhaustive
//! enumeration with rational weights. Floating point enters only when
//! matrices are summed.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::bounds::exact_mgf;
use crate::ensemble::MatrixEnsemble;
use crate::enumerate::{check_limit, falling_factorial, for_each_arrangement};
use crate::error::{Error, Result};
use crate::hermitian::{matrix_sum, trace_exp, HermitianMatrix};
use crate::rng;
use crate::sampler::{first_repeat, SampleVector, SamplingMode};

/// Largest `|C|` accepted by the distributional oracles.
pub const EXACT_MAX_C: usize = 6;
/// Largest `m` accepted by the distributional oracles.
pub const EXACT_MAX_M: usize = 4;
/// Largest `|C|` for oracles that realize matrices on every branch.
pub const MATRIX_MAX_C: usize = 5;
/// Largest `m` for oracles that realize matrices on every branch.
pub const MATRIX_MAX_M: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// Rule 1: resample a value already produced.
    FromDrawn,
    /// Rule 2: take a component of `y` not produced yet.
    FromFresh,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingStep {
    /// `D_k`.
    pub drawn_before: BTreeSet<usize>,
    pub rule: Rule,
    pub value: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingTrace {
    input_y: SampleVector,
    c_size: usize,
    steps: Vec<CouplingStep>,
    output_z: Vec<usize>,
}

impl CouplingTrace {
    pub fn input_y(&self) -> &SampleVector {
        &self.input_y
    }

    pub fn c_size(&self) -> usize {
        self.c_size
    }

    pub fn steps(&self) -> &[CouplingStep] {
        &self.steps
    }

    pub fn output_z(&self) -> &[usize] {
        &self.output_z
    }

    /// `(z₁, …, z_k)`.
    pub fn prefix(&self, k: usize) -> &[usize] {
        &self.output_z[..k]
    }
}

fn check_domain(y: &[usize], c_size: usize) -> Result<()> {
    if y.len() > c_size {
        return Err(Error::SampleTooLarge {
            m: y.len(),
            size: c_size,
        });
    }
    if let Some(&value) = y.iter().find(|&&v| v >= c_size) {
        return Err(Error::ValueOutOfRange { value, size: c_size });
    }
    if let Some(value) = first_repeat(y) {
        return Err(Error::RepeatedComponent { value });
    }
    Ok(())
}

fn check_guard(c_size: usize, m: usize, max_c: usize, max_m: usize) -> Result<()> {
    check_limit("|C|", c_size as u128, max_c as u128)?;
    check_limit("m", m as u128, max_m as u128)
}

/// Runs one realization of `Z(y)`.
pub fn run_coupling(y: &SampleVector, c_size: usize, seed: u64) -> Result<CouplingTrace> {
    let values = y.indices();
    check_domain(values, c_size)?;
    let mut rng = rng::stream(seed, "coupling/z");
    let mut drawn = BTreeSet::new();
    let mut steps = Vec::with_capacity(values.len());
    let mut output_z = Vec::with_capacity(values.len());
    for _ in 0..values.len() {
        let d = drawn.len();
        // Integer comparison: u < d has probability exactly d / |C|.
        let (rule, value) = if rng.random_range(0..c_size) < d {
            let pick = rng.random_range(0..d);
            (Rule::FromDrawn, *drawn.iter().nth(pick).expect("pick < |D_k|"))
        } else {
            let fresh: Vec<usize> = values.iter().copied().filter(|v| !drawn.contains(v)).collect();
            (Rule::FromFresh, fresh[rng.random_range(0..fresh.len())])
        };
        steps.push(CouplingStep {
            drawn_before: drawn.clone(),
            rule,
            value,
        });
        drawn.insert(value);
        output_z.push(value);
    }
    Ok(CouplingTrace {
        input_y: y.clone(),
        c_size,
        steps,
        output_z,
    })
}

fn ratio(num: usize, den: usize) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Probability that rule `rule` fires and then picks one particular value,
/// given `|D_k| = d`, `|C| = c` and `m` components.
fn step_weight(rule: Rule, d: usize, c: usize, m: usize) -> BigRational {
    match rule {
        Rule::FromDrawn => ratio(d, c) * ratio(1, d),
        Rule::FromFresh => (BigRational::one() - ratio(d, c)) * ratio(1, m - d),
    }
}

/// Visits every branch of `Z(y)` with its exact probability.
fn for_each_branch(y: &[usize], c_size: usize, mut visit: impl FnMut(&[usize], &BigRational)) {
    fn recurse(
        y: &[usize],
        c: usize,
        path: &mut Vec<usize>,
        weight: &BigRational,
        visit: &mut impl FnMut(&[usize], &BigRational),
    ) {
        let m = y.len();
        if path.len() == m {
            visit(path, weight);
            return;
        }
        let drawn: BTreeSet<usize> = path.iter().copied().collect();
        let d = drawn.len();
        if d > 0 {
            let w = weight * step_weight(Rule::FromDrawn, d, c, m);
            for &v in &drawn {
                path.push(v);
                recurse(y, c, path, &w, visit);
                path.pop();
            }
        }
        let w = weight * step_weight(Rule::FromFresh, d, c, m);
        for &v in y.iter().filter(|v| !drawn.contains(v)) {
            path.push(v);
            recurse(y, c, path, &w, visit);
            path.pop();
        }
    }
    let mut path = Vec::with_capacity(y.len());
    recurse(y, c_size, &mut path, &BigRational::one(), &mut visit);
}

/// `Pr[Z(y) starts with path]` for a fixed draw `y`.
fn path_probability(y: &[usize], c_size: usize, path: &[usize]) -> BigRational {
    let m = y.len();
    let mut drawn = BTreeSet::new();
    let mut p = BigRational::one();
    for &z in path {
        let d = drawn.len();
        let rule = if drawn.contains(&z) {
            Rule::FromDrawn
        } else if y.contains(&z) {
            Rule::FromFresh
        } else {
            return BigRational::zero();
        };
        p *= step_weight(rule, d, c_size, m);
        drawn.insert(z);
    }
    p
}

/// Exact law of an `m`-vector over `0..c_size`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactDistribution {
    c_size: usize,
    m: usize,
    support: BTreeMap<Vec<usize>, BigRational>,
}

impl ExactDistribution {
    pub fn c_size(&self) -> usize {
        self.c_size
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn support(&self) -> &BTreeMap<Vec<usize>, BigRational> {
        &self.support
    }

    pub fn probability(&self, outcome: &[usize]) -> BigRational {
        self.support.get(outcome).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn total(&self) -> BigRational {
        self.support.values().fold(BigRational::zero(), |acc, p| acc + p)
    }

    /// `1 / |C|^m`, the law of `m` i.i.d. uniform draws.
    pub fn uniform_probability(&self) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::from(self.c_size).pow(self.m as u32))
    }

    /// True when all `|C|^m` outcomes carry exactly `1 / |C|^m`.
    pub fn is_uniform(&self) -> bool {
        let expected = self.uniform_probability();
        self.support.len() as u128 == crate::enumerate::power(self.c_size, self.m)
            && self.support.values().all(|p| *p == expected)
    }
}

/// Law of `Z(Y)` for `Y` uniform without replacement, by enumerating every
/// draw `y` and every branch of the recipe.
pub fn exact_coupling_distribution(c_size: usize, m: usize) -> Result<ExactDistribution> {
    check_guard(c_size, m, EXACT_MAX_C, EXACT_MAX_M)?;
    if m == 0 || m > c_size {
        return Err(Error::SampleTooLarge { m, size: c_size });
    }
    let p_y = BigRational::new(BigInt::one(), BigInt::from(falling_factorial(c_size, m)));
    let mut support: BTreeMap<Vec<usize>, BigRational> = BTreeMap::new();
    for_each_arrangement(c_size, m, |y| {
        for_each_branch(y, c_size, |z, w| {
            let entry = support.entry(z.to_vec()).or_insert_with(BigRational::zero);
            *entry += &p_y * w;
        });
    });
    Ok(ExactDistribution { c_size, m, support })
}

fn joint_prefix_probability(c_size: usize, m: usize, path: &[usize]) -> BigRational {
    let mut total = BigRational::zero();
    for_each_arrangement(c_size, m, |y| total += path_probability(y, c_size, path));
    total / BigRational::from_integer(BigInt::from(falling_factorial(c_size, m)))
}

/// `Pr[Z_k(Y) = candidate | Z₁(Y) = prefix₁, …, Z_{k-1}(Y) = prefix_{k-1}]`
/// with `Y` uniform without replacement and `k = prefix.len() + 1`.
///
/// Computed by Bayes' rule from exactly enumerated joint probabilities.
pub fn conditional_step_probability(
    c_size: usize,
    m: usize,
    prefix: &[usize],
    candidate: usize,
) -> Result<BigRational> {
    check_guard(c_size, m, EXACT_MAX_C, EXACT_MAX_M)?;
    if m == 0 || m > c_size {
        return Err(Error::SampleTooLarge { m, size: c_size });
    }
    if prefix.len() >= m {
        return Err(Error::invalid(
            "prefix",
            format!("length {} leaves no step out of {m}", prefix.len()),
        ));
    }
    if let Some(&value) = prefix.iter().chain([&candidate]).find(|&&v| v >= c_size) {
        return Err(Error::ValueOutOfRange { value, size: c_size });
    }
    let before = joint_prefix_probability(c_size, m, prefix);
    if before.is_zero() {
        return Err(Error::UnreachablePrefix);
    }
    let mut extended = prefix.to_vec();
    extended.push(candidate);
    Ok(joint_prefix_probability(c_size, m, &extended) / before)
}

/// `Pr[Z_k(y) = candidate | Z₁(y), …, Z_{k-1}(y)]` for a fixed draw `y`.
///
/// For a fresh candidate this is `(1 - |D_k|/|C|) / (m - |D_k|)`, which
/// equals `1/|C|` only when `m = |C|`. The identity `1/|C|` holds in general
/// once `Y` is averaged out; see [`conditional_step_probability`].
pub fn step_probability_given_draw(
    y: &SampleVector,
    c_size: usize,
    prefix: &[usize],
    candidate: usize,
) -> Result<BigRational> {
    let values = y.indices();
    check_domain(values, c_size)?;
    if prefix.len() >= values.len() {
        return Err(Error::invalid("prefix", "no step left"));
    }
    if !values.contains(&candidate) {
        return Err(Error::ValueOutOfRange {
            value: candidate,
            size: c_size,
        });
    }
    let before = path_probability(values, c_size, prefix);
    if before.is_zero() {
        return Err(Error::UnreachablePrefix);
    }
    let mut extended = prefix.to_vec();
    extended.push(candidate);
    Ok(path_probability(values, c_size, &extended) / before)
}

/// Expected number of occurrences of each `y_j` in `Z(y)`, in the order of
/// `y`.
pub fn expected_counts(y: &SampleVector, c_size: usize) -> Result<Vec<BigRational>> {
    let values = y.indices();
    check_domain(values, c_size)?;
    check_guard(c_size, values.len(), EXACT_MAX_C, EXACT_MAX_M)?;
    let mut counts = vec![BigRational::zero(); values.len()];
    for_each_branch(values, c_size, |z, w| {
        for &v in z {
            let j = values.iter().position(|&u| u == v).expect("z takes values in y");
            counts[j] += w;
        }
    });
    Ok(counts)
}

/// `E_Z[Σ_i Z_i(y)]` with the members of `e` substituted for the indices.
pub fn coupling_sum_expectation(y: &SampleVector, e: &MatrixEnsemble) -> Result<HermitianMatrix> {
    if y.ensemble_size() != e.size() {
        return Err(Error::SizeMismatch {
            sample: y.ensemble_size(),
            ensemble: e.size(),
        });
    }
    if y.is_empty() {
        return Ok(HermitianMatrix::zeros(e.dim()));
    }
    let counts = expected_counts(y, e.size())?;
    let terms: Vec<HermitianMatrix> = y
        .indices()
        .iter()
        .zip(&counts)
        .map(|(&v, w)| e.member(v).scale(w.to_f64().expect("finite rational")))
        .collect();
    matrix_sum(&terms)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JensenCheck {
    /// `E_X tr exp(λ S_X)`.
    pub lhs: f64,
    /// `E_Y tr exp(λ S_Y)`.
    pub rhs: f64,
    /// `E_Y E_Z tr exp(λ Σ Z_i(Y))`, which equals `lhs` by the coupling.
    pub lhs_via_coupling: f64,
}

impl JensenCheck {
    pub fn holds(&self, tol: f64) -> bool {
        self.rhs <= self.lhs + tol
    }
}

/// Exact `M_X(λ)` and `M_Y(λ)` for a small ensemble, plus `M_X(λ)` a second
/// time through the coupling.
pub fn jensen_domination_check(e: &MatrixEnsemble, m: usize, scale: f64) -> Result<JensenCheck> {
    let c = e.size();
    check_guard(c, m, MATRIX_MAX_C, MATRIX_MAX_M)?;
    let lhs = exact_mgf(e, m, SamplingMode::WithReplacement, scale)?;
    let rhs = exact_mgf(e, m, SamplingMode::WithoutReplacement, scale)?;

    let p_y = 1.0 / falling_factorial(c, m) as f64;
    let mut acc = 0.0;
    let mut failure = None;
    for_each_arrangement(c, m, |y| {
        for_each_branch(y, c, |z, w| {
            if failure.is_some() {
                return;
            }
            let terms: Vec<HermitianMatrix> = z.iter().map(|&i| e.member(i).clone()).collect();
            match matrix_sum(&terms).and_then(|s| trace_exp(&s, scale)) {
                Ok(f) => acc += p_y * w.to_f64().expect("finite rational") * f,
                Err(err) => failure = Some(err),
            }
        });
    });
    if let Some(err) = failure {
        return Err(err);
    }
    Ok(JensenCheck {
        lhs,
        rhs,
        lhs_via_coupling: acc,
    })
}
