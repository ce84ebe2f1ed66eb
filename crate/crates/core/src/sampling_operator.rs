//! The sampling operator of low-rank matrix recovery,
//!
//! ```text
//! R(ρ) = (n²/m) Σ_{i ≤ m} tr(ρ w_{A_i}) w_{A_i},
//! ```
//!
//! over an orthonormal Hermitian basis `{w_a}` of the `n × n` matrices.
//! In the coordinates of that basis `(m/n²) R` is diagonal, with the
//! multiplicity of `a` among the `A_i` as its `a`-th entry. It is therefore a
//! projection exactly when the `A_i` are distinct, and its norm is the
//! largest multiplicity, at most `m`.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::hermitian::{HermitianMatrix, C64};
use crate::parallel::map_trials;
use crate::rng;
use crate::sampler::{sample, SampleVector, SamplingMode};

/// Tolerance for the projection test `λ² = λ`.
pub const PROJECTION_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct HermitianBasis {
    dim: usize,
    elements: Vec<HermitianMatrix>,
}

impl HermitianBasis {
    /// `E_kk` for every `k`, then for every `k < l` the pair
    /// `(E_kl + E_lk)/√2` and `i(E_kl − E_lk)/√2`.
    pub fn standard(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n", "must be at least 1"));
        }
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let mut elements = Vec::with_capacity(n * n);
        for k in 0..n {
            let mut e = DMatrix::zeros(n, n);
            e[(k, k)] = C64::new(1.0, 0.0);
            elements.push(HermitianMatrix::symmetrized(e));
        }
        for k in 0..n {
            for l in k + 1..n {
                let mut sym = DMatrix::zeros(n, n);
                sym[(k, l)] = C64::new(r, 0.0);
                sym[(l, k)] = C64::new(r, 0.0);
                elements.push(HermitianMatrix::symmetrized(sym));
                let mut anti = DMatrix::zeros(n, n);
                anti[(k, l)] = C64::new(0.0, r);
                anti[(l, k)] = C64::new(0.0, -r);
                elements.push(HermitianMatrix::symmetrized(anti));
            }
        }
        Ok(Self { dim: n, elements })
    }

    /// Wraps user-supplied elements after checking there are `n²` of them and
    /// that they are orthonormal within `1e-10`.
    pub fn from_elements(elements: Vec<HermitianMatrix>) -> Result<Self> {
        let first = elements.first().ok_or(Error::EmptyEnsemble)?;
        let n = first.dim();
        if elements.len() != n * n {
            return Err(Error::DimensionMismatch {
                left: n * n,
                right: elements.len(),
            });
        }
        if let Some(bad) = elements.iter().find(|w| w.dim() != n) {
            return Err(Error::DimensionMismatch {
                left: n,
                right: bad.dim(),
            });
        }
        let basis = Self { dim: n, elements };
        let gram = basis.gram();
        let worst = (&gram - DMatrix::identity(n * n, n * n)).abs().max();
        if worst > 1e-10 {
            return Err(Error::invalid(
                "basis",
                format!("not orthonormal: Gram deviation {worst:e}"),
            ));
        }
        Ok(basis)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, a: usize) -> &HermitianMatrix {
        &self.elements[a]
    }

    pub fn elements(&self) -> &[HermitianMatrix] {
        &self.elements
    }

    /// Trace inner products `tr(w_a w_b)`.
    pub fn gram(&self) -> DMatrix<f64> {
        let k = self.len();
        DMatrix::from_fn(k, k, |a, b| self.elements[a].trace_product(&self.elements[b]))
    }

    /// `tr(ρ w_a)` for every `a`.
    pub fn coefficients(&self, rho: &HermitianMatrix) -> Result<Vec<f64>> {
        self.check_dim(rho)?;
        Ok(self.elements.iter().map(|w| rho.trace_product(w)).collect())
    }

    /// `Σ_a coefficients[a] w_a`.
    pub fn synthesize(&self, coefficients: &[f64]) -> Result<HermitianMatrix> {
        if coefficients.len() != self.len() {
            return Err(Error::DimensionMismatch {
                left: self.len(),
                right: coefficients.len(),
            });
        }
        let mut acc = DMatrix::zeros(self.dim, self.dim);
        for (w, &x) in self.elements.iter().zip(coefficients) {
            acc += w.entries() * C64::new(x, 0.0);
        }
        Ok(HermitianMatrix::symmetrized(acc))
    }

    fn check_dim(&self, rho: &HermitianMatrix) -> Result<()> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: rho.dim(),
            });
        }
        Ok(())
    }

    fn check_sample(&self, v: &SampleVector) -> Result<()> {
        if v.is_empty() {
            return Err(Error::invalid("m", "the sampling operator needs at least one index"));
        }
        if v.ensemble_size() != self.len() {
            return Err(Error::SizeMismatch {
                sample: v.ensemble_size(),
                ensemble: self.len(),
            });
        }
        Ok(())
    }
}

pub fn build_basis(n: usize) -> Result<HermitianBasis> {
    HermitianBasis::standard(n)
}

/// `R(ρ) = (n²/m) Σ_i tr(ρ w_{A_i}) w_{A_i}`.
pub fn apply_sampling_operator(
    rho: &HermitianMatrix,
    v: &SampleVector,
    basis: &HermitianBasis,
) -> Result<HermitianMatrix> {
    basis.check_dim(rho)?;
    basis.check_sample(v)?;
    let n = basis.dim();
    let prefactor = (n * n) as f64 / v.len() as f64;
    let mut acc = DMatrix::zeros(n, n);
    for &a in v.indices() {
        let w = basis.element(a);
        acc += w.entries() * C64::new(prefactor * rho.trace_product(w), 0.0);
    }
    Ok(HermitianMatrix::symmetrized(acc))
}

/// Matrix of `(m/n²) R` in the coordinates `{w_a}`: diagonal, holding the
/// multiplicity of every index.
pub fn superoperator_matrix(v: &SampleVector, basis: &HermitianBasis) -> Result<DMatrix<f64>> {
    basis.check_sample(v)?;
    let counts: Vec<f64> = v.multiplicities().into_iter().map(|c| c as f64).collect();
    Ok(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(counts)))
}

/// Matrix of `(m/n²) R` assembled column by column from
/// [`apply_sampling_operator`]: entry `(a, b)` is `(m/n²) tr(w_a R(w_b))`.
pub fn dense_superoperator_matrix(v: &SampleVector, basis: &HermitianBasis) -> Result<DMatrix<f64>> {
    basis.check_sample(v)?;
    let k = basis.len();
    let rescale = v.len() as f64 / k as f64;
    let mut out = DMatrix::zeros(k, k);
    for b in 0..k {
        let image = apply_sampling_operator(basis.element(b), v, basis)?;
        for (a, x) in basis.coefficients(&image)?.into_iter().enumerate() {
            out[(a, b)] = rescale * x;
        }
    }
    Ok(out)
}

/// Spectral norm of a real symmetric matrix.
pub fn symmetric_norm(m: &DMatrix<f64>) -> Result<f64> {
    let dim = m.nrows();
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, crate::hermitian::MAX_EIGEN_ITERATIONS).ok_or(
        Error::EigenFailure {
            dim,
            iterations: crate::hermitian::MAX_EIGEN_ITERATIONS,
        },
    )?;
    Ok(eig.eigenvalues.iter().fold(0.0, |acc, l| acc.max(l.abs())))
}

/// `‖P² − P‖` for a real symmetric `P`.
pub fn projection_defect(p: &DMatrix<f64>) -> Result<f64> {
    symmetric_norm(&(p * p - p))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplingOperatorDiag {
    pub n: usize,
    pub m: usize,
    pub indices: SampleVector,
    /// Eigenvalues of `(m/n²) R`, in basis order.
    pub eigenvalues: Vec<f64>,
    /// `‖(m/n²) R‖`.
    pub norm: f64,
}

impl SamplingOperatorDiag {
    /// Spectral data of `(m/n²) R` for the draw `v` over `n × n` matrices.
    /// An empty draw (possible under the Bernoulli model) gives the zero
    /// operator.
    pub fn new(n: usize, v: &SampleVector) -> Result<Self> {
        if v.ensemble_size() != n * n {
            return Err(Error::SizeMismatch {
                sample: v.ensemble_size(),
                ensemble: n * n,
            });
        }
        let eigenvalues: Vec<f64> = v.multiplicities().into_iter().map(|c| c as f64).collect();
        let norm = eigenvalues.iter().fold(0.0, |acc: f64, l| acc.max(l.abs()));
        Ok(Self {
            n,
            m: v.len(),
            indices: v.clone(),
            eigenvalues,
            norm,
        })
    }

    pub fn is_projection(&self) -> bool {
        self.eigenvalues.iter().all(|l| (l * l - l).abs() <= PROJECTION_TOL)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormTrial {
    pub norm: f64,
    pub max_multiplicity: usize,
    pub is_projection: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormStudy {
    pub n: usize,
    pub m: usize,
    pub mode: SamplingMode,
    pub trials: Vec<NormTrial>,
    pub min: f64,
    pub median: f64,
    pub max: f64,
}

/// Distribution of `‖(m/n²) R‖` over `trials` independent draws of `m`
/// indices from `0..n²`.
pub fn operator_norm_study(
    n: usize,
    m: usize,
    mode: SamplingMode,
    trials: usize,
    seed: u64,
    workers: usize,
) -> Result<NormStudy> {
    if n == 0 {
        return Err(Error::invalid("n", "must be at least 1"));
    }
    if trials == 0 {
        return Err(Error::invalid("trials", "must be at least 1"));
    }
    let size = n * n;
    match mode {
        SamplingMode::WithoutReplacement if m > size => return Err(Error::SampleTooLarge { m, size }),
        SamplingMode::Bernoulli if m > size => return Err(Error::SampleTooLarge { m, size }),
        _ if m == 0 => return Err(Error::invalid("m", "must be at least 1")),
        _ => {}
    }
    let label = format!("sampling-operator/{mode}");
    let results = map_trials(trials, workers, |trial| {
        let v = sample(mode, size, m, rng::child_seed(seed, &label, trial))?;
        let diag = SamplingOperatorDiag::new(n, &v)?;
        Ok(NormTrial {
            norm: diag.norm,
            max_multiplicity: v.max_multiplicity(),
            is_projection: diag.is_projection(),
        })
    })?;
    let mut norms: Vec<f64> = results.iter().map(|t| t.norm).collect();
    norms.sort_by(f64::total_cmp);
    let mid = norms.len() / 2;
    let median = if norms.len() % 2 == 1 {
        norms[mid]
    } else {
        0.5 * (norms[mid - 1] + norms[mid])
    };
    Ok(NormStudy {
        n,
        m,
        mode,
        min: norms[0],
        median,
        max: norms[norms.len() - 1],
        trials: results,
    })
}
