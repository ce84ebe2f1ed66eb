//! Index samplers for the three sampling models: i.i.d. draws with
//! replacement, uniform ordered draws without replacement, and the Bernoulli
//! model in which every index is revealed independently.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::ensemble::MatrixEnsemble;
use crate::error::{Error, Result};
use crate::hermitian::HermitianMatrix;
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SamplingMode {
    WithReplacement,
    WithoutReplacement,
    Bernoulli,
}

impl SamplingMode {
    /// Short name used on the command line and in CSV output.
    pub fn name(self) -> &'static str {
        match self {
            SamplingMode::WithReplacement => "iid",
            SamplingMode::WithoutReplacement => "noreplace",
            SamplingMode::Bernoulli => "bernoulli",
        }
    }
}

impl fmt::Display for SamplingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SamplingMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "iid" => Ok(SamplingMode::WithReplacement),
            "noreplace" => Ok(SamplingMode::WithoutReplacement),
            "bernoulli" => Ok(SamplingMode::Bernoulli),
            other => Err(format!(
                "unknown sampling mode {other:?} (expected iid, noreplace or bernoulli)"
            )),
        }
    }
}

/// An ordered draw of indices into a collection of `ensemble_size` elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleVector {
    indices: Vec<usize>,
    mode: SamplingMode,
    ensemble_size: usize,
    seed: u64,
}

impl SampleVector {
    /// Wraps explicit indices, checking the invariants of `mode`.
    pub fn from_indices(indices: Vec<usize>, mode: SamplingMode, ensemble_size: usize) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= ensemble_size) {
            return Err(Error::ValueOutOfRange {
                value: bad,
                size: ensemble_size,
            });
        }
        match mode {
            SamplingMode::WithReplacement => {}
            SamplingMode::WithoutReplacement => {
                if let Some(value) = first_repeat(&indices) {
                    return Err(Error::RepeatedComponent { value });
                }
            }
            SamplingMode::Bernoulli => {
                if indices.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::invalid(
                        "indices",
                        "a Bernoulli sample must be strictly increasing",
                    ));
                }
            }
        }
        Ok(Self {
            indices,
            mode,
            ensemble_size,
            seed: 0,
        })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn mode(&self) -> SamplingMode {
        self.mode
    }

    pub fn ensemble_size(&self) -> usize {
        self.ensemble_size
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The set `Ω` of distinct indices.
    pub fn distinct(&self) -> BTreeSet<usize> {
        self.indices.iter().copied().collect()
    }

    /// Number of occurrences of every index in `0..ensemble_size`.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut counts = vec![0; self.ensemble_size];
        for &i in &self.indices {
            counts[i] += 1;
        }
        counts
    }

    pub fn max_multiplicity(&self) -> usize {
        self.multiplicities().into_iter().max().unwrap_or(0)
    }
}

pub(crate) fn first_repeat(values: &[usize]) -> Option<usize> {
    let mut seen = BTreeSet::new();
    values.iter().copied().find(|&v| !seen.insert(v))
}

pub fn sample_with_replacement(size: usize, m: usize, seed: u64) -> Result<SampleVector> {
    if size == 0 {
        return Err(Error::EmptyEnsemble);
    }
    let mut rng = rng::stream(seed, "sample/iid");
    let indices = (0..m).map(|_| rng.random_range(0..size)).collect();
    Ok(SampleVector {
        indices,
        mode: SamplingMode::WithReplacement,
        ensemble_size: size,
        seed,
    })
}

/// Uniform ordered `m`-subset by a partial Fisher-Yates shuffle.
pub fn sample_without_replacement(size: usize, m: usize, seed: u64) -> Result<SampleVector> {
    if size == 0 {
        return Err(Error::EmptyEnsemble);
    }
    if m > size {
        return Err(Error::SampleTooLarge { m, size });
    }
    let mut rng = rng::stream(seed, "sample/noreplace");
    let mut pool: Vec<usize> = (0..size).collect();
    for i in 0..m {
        let j = rng.random_range(i..size);
        pool.swap(i, j);
    }
    pool.truncate(m);
    Ok(SampleVector {
        indices: pool,
        mode: SamplingMode::WithoutReplacement,
        ensemble_size: size,
        seed,
    })
}

/// Includes every index independently with probability `m_expected / size`.
pub fn sample_bernoulli(size: usize, m_expected: f64, seed: u64) -> Result<SampleVector> {
    if !(0.0..=size as f64).contains(&m_expected) {
        return Err(Error::invalid(
            "m_expected",
            format!("{m_expected} is outside [0, {size}]"),
        ));
    }
    let p = if size == 0 { 0.0 } else { m_expected / size as f64 };
    let mut rng = rng::stream(seed, "sample/bernoulli");
    let indices = (0..size).filter(|_| rng.random::<f64>() < p).collect();
    Ok(SampleVector {
        indices,
        mode: SamplingMode::Bernoulli,
        ensemble_size: size,
        seed,
    })
}

/// Dispatches on `mode`; `m` is the expected size for the Bernoulli model.
pub fn sample(mode: SamplingMode, size: usize, m: usize, seed: u64) -> Result<SampleVector> {
    match mode {
        SamplingMode::WithReplacement => sample_with_replacement(size, m, seed),
        SamplingMode::WithoutReplacement => sample_without_replacement(size, m, seed),
        SamplingMode::Bernoulli => sample_bernoulli(size, m as f64, seed),
    }
}

/// Looks up the drawn members, in draw order.
pub fn realize(v: &SampleVector, e: &MatrixEnsemble) -> Result<Vec<HermitianMatrix>> {
    if v.ensemble_size != e.size() {
        return Err(Error::SizeMismatch {
            sample: v.ensemble_size,
            ensemble: e.size(),
        });
    }
    Ok(v.indices.iter().map(|&i| e.member(i).clone()).collect())
}
