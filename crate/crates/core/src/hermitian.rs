//! Dense complex Hermitian matrices.
//!
//! The eigendecomposition is the only spectral primitive: the operator norm,
//! the matrix exponential and the trace exponential are all read off the
//! eigenvalues (and, for the exponential, the eigenvectors).

use std::fmt;
use std::ops::{Add, Neg, Sub};

use nalgebra::{Complex, DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Hermiticity tolerance, relative to `max(1, max |entry|)`.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Iteration cap handed to the eigensolver.
pub const MAX_EIGEN_ITERATIONS: usize = 10_000;

/// Largest argument for which `f64::exp` is finite.
const EXP_ARG_MAX: f64 = 709.782_712_893_384;

#[derive(Clone, PartialEq)]
pub struct HermitianMatrix {
    entries: DMatrix<C64>,
}

impl fmt::Debug for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HermitianMatrix{}", self.entries)
    }
}

impl HermitianMatrix {
    /// Validates `entries` and symmetrizes it to `(M + M†)/2`.
    ///
    /// Entries whose Hermitian partner differs by more than
    /// [`HERMITIAN_TOL`] (relative to the largest entry) are rejected.
    pub fn new(entries: DMatrix<C64>) -> Result<Self> {
        let (rows, cols) = entries.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if rows == 0 {
            return Err(Error::invalid("dim", "matrix dimension must be at least 1"));
        }
        let scale = entries.iter().fold(1.0_f64, |acc, z| acc.max(z.norm()));
        let tolerance = HERMITIAN_TOL * scale;
        for i in 0..rows {
            for j in i..rows {
                let deviation = (entries[(i, j)] - entries[(j, i)].conj()).norm();
                if !(deviation <= tolerance) {
                    return Err(Error::NotHermitian {
                        row: i,
                        col: j,
                        deviation,
                        tolerance,
                    });
                }
            }
        }
        Ok(Self::symmetrized(entries))
    }

    pub(crate) fn symmetrized(entries: DMatrix<C64>) -> Self {
        let adjoint = entries.adjoint();
        Self {
            entries: (entries + adjoint) * C64::new(0.5, 0.0),
        }
    }

    pub fn from_real(dim: usize, values: &[f64]) -> Result<Self> {
        if values.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                left: dim * dim,
                right: values.len(),
            });
        }
        Self::new(DMatrix::from_row_iterator(
            dim,
            dim,
            values.iter().map(|&v| C64::new(v, 0.0)),
        ))
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            entries: DMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            entries: DMatrix::identity(dim, dim),
        }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        let mut entries = DMatrix::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            entries[(i, i)] = C64::new(v, 0.0);
        }
        Self { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[(row, col)]
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            entries: &self.entries * C64::new(factor, 0.0),
        }
    }

    pub fn square(&self) -> Self {
        Self::symmetrized(&self.entries * &self.entries)
    }

    pub fn trace(&self) -> f64 {
        self.entries.diagonal().iter().map(|z| z.re).sum()
    }

    /// `tr(self · other)`, which is real for Hermitian arguments.
    pub fn trace_product(&self, other: &Self) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self.entries[(i, j)] * other.entries[(j, i)]).re;
            }
        }
        acc
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            entries: &self.entries + &other.entries,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            entries: &self.entries - &other.entries,
        })
    }

    pub fn eigen(&self) -> Result<Eigen> {
        let dim = self.dim();
        SymmetricEigen::try_new(self.entries.clone(), f64::EPSILON, MAX_EIGEN_ITERATIONS)
            .map(|e| Eigen {
                values: e.eigenvalues.iter().copied().collect(),
                vectors: e.eigenvectors,
            })
            .ok_or(Error::EigenFailure {
                dim,
                iterations: MAX_EIGEN_ITERATIONS,
            })
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(self.eigen()?.values)
    }

    /// `exp(scale · self)`, assembled from the eigendecomposition.
    pub fn exp(&self, scale: f64) -> Result<Self> {
        let Eigen { values, vectors } = self.eigen()?;
        let weights = values
            .iter()
            .map(|&lambda| checked_exp(scale, lambda).map(|w| C64::new(w, 0.0)))
            .collect::<Result<Vec<_>>>()?;
        let weighted = DMatrix::from_fn(self.dim(), self.dim(), |i, j| vectors[(i, j)] * weights[j]);
        Ok(Self::symmetrized(weighted * vectors.adjoint()))
    }
}

/// Eigenvalues (unsorted) with unitary eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<C64>,
}

fn checked_exp(scale: f64, eigenvalue: f64) -> Result<f64> {
    let arg = scale * eigenvalue;
    if arg > EXP_ARG_MAX || arg.is_nan() {
        return Err(Error::Overflow { eigenvalue, scale });
    }
    Ok(arg.exp())
}

/// `max |λ|` over the eigenvalues of `m`.
pub fn operator_norm(m: &HermitianMatrix) -> Result<f64> {
    Ok(m.eigenvalues()?.iter().fold(0.0, |acc, l| acc.max(l.abs())))
}

/// `tr exp(scale · m) = Σ exp(scale · λ)`.
pub fn trace_exp(m: &HermitianMatrix, scale: f64) -> Result<f64> {
    if !scale.is_finite() {
        return Err(Error::invalid("scale", "must be finite"));
    }
    if scale == 0.0 {
        return Ok(m.dim() as f64);
    }
    m.eigenvalues()?
        .into_iter()
        .map(|lambda| checked_exp(scale, lambda))
        .sum()
}

/// Entrywise sum of `terms`. An empty list has no dimension and is rejected.
pub fn matrix_sum(terms: &[HermitianMatrix]) -> Result<HermitianMatrix> {
    let (first, rest) = terms.split_first().ok_or(Error::EmptyEnsemble)?;
    rest.iter().try_fold(first.clone(), |acc, term| acc.try_add(term))
}

impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;

    /// Panics on dimension mismatch; see [`HermitianMatrix::try_add`].
    fn add(self, rhs: Self) -> HermitianMatrix {
        self.try_add(rhs).expect("dimension mismatch in matrix addition")
    }
}

impl Sub for &HermitianMatrix {
    type Output = HermitianMatrix;

    fn sub(self, rhs: Self) -> HermitianMatrix {
        self.try_sub(rhs).expect("dimension mismatch in matrix subtraction")
    }
}

impl Neg for &HermitianMatrix {
    type Output = HermitianMatrix;

    fn neg(self) -> HermitianMatrix {
        HermitianMatrix {
            entries: -self.entries.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn pauli_x() -> HermitianMatrix {
        HermitianMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    #[test]
    fn operator_norm_examples() {
        assert_eq!(operator_norm(&HermitianMatrix::zeros(4)).unwrap(), 0.0);
        let d = HermitianMatrix::diagonal(&[3.0, -5.0]);
        assert!((operator_norm(&d).unwrap() - 5.0).abs() < 1e-14);
        assert!((operator_norm(&pauli_x()).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn trace_exp_examples() {
        assert_eq!(trace_exp(&HermitianMatrix::zeros(3), 7.0).unwrap(), 3.0);
        let d = HermitianMatrix::diagonal(&[1.0, -1.0]);
        assert!((trace_exp(&d, 1.0).unwrap() - (E + 1.0 / E)).abs() < 1e-14);
        assert_eq!(trace_exp(&pauli_x(), 0.0).unwrap(), 2.0);
    }

    #[test]
    fn trace_exp_overflow_names_eigenvalue() {
        let d = HermitianMatrix::diagonal(&[1000.0, 0.0]);
        match trace_exp(&d, 1.0) {
            Err(Error::Overflow { eigenvalue, scale }) => {
                assert!((eigenvalue - 1000.0).abs() < 1e-9);
                assert_eq!(scale, 1.0);
            }
            other => panic!("expected overflow, got {other:?}"),
        }
        assert!(trace_exp(&d, -1.0).is_ok());
    }

    #[test]
    fn matrix_sum_examples() {
        let m = pauli_x();
        let z = matrix_sum(&[m.clone(), -&m]).unwrap();
        assert_eq!(z, HermitianMatrix::zeros(2));
        assert_eq!(matrix_sum(std::slice::from_ref(&m)).unwrap(), m);
        let id = matrix_sum(&[
            HermitianMatrix::diagonal(&[1.0, 0.0]),
            HermitianMatrix::diagonal(&[0.0, 1.0]),
        ])
        .unwrap();
        assert_eq!(id, HermitianMatrix::identity(2));
    }

    #[test]
    fn matrix_sum_dimension_mismatch() {
        let err = matrix_sum(&[HermitianMatrix::zeros(2), HermitianMatrix::zeros(3)]).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { left: 2, right: 3 });
    }

    #[test]
    fn rejects_non_hermitian_input() {
        let err = HermitianMatrix::from_real(2, &[0.0, 1.0, 2.0, 0.0]).unwrap_err();
        assert!(matches!(err, Error::NotHermitian { row: 0, col: 1, .. }));
        let bad_diag = DMatrix::from_element(1, 1, C64::new(1.0, 0.5));
        assert!(HermitianMatrix::new(bad_diag).is_err());
        let rect = DMatrix::from_element(2, 3, C64::new(0.0, 0.0));
        assert_eq!(
            HermitianMatrix::new(rect).unwrap_err(),
            Error::NotSquare { rows: 2, cols: 3 }
        );
    }

    #[test]
    fn symmetrizes_noise_within_tolerance() {
        let mut entries = DMatrix::from_element(2, 2, C64::new(1.0, 0.0));
        entries[(0, 1)] = C64::new(1.0 + 4e-13, 0.0);
        let m = HermitianMatrix::new(entries).unwrap();
        assert_eq!(m.get(0, 1), m.get(1, 0).conj());
    }

    #[test]
    fn complex_entries_have_real_spectrum() {
        // [[1, -i], [i, 1]] has eigenvalues 0 and 2.
        let mut entries = DMatrix::from_element(2, 2, C64::new(1.0, 0.0));
        entries[(0, 1)] = C64::new(0.0, -1.0);
        entries[(1, 0)] = C64::new(0.0, 1.0);
        let m = HermitianMatrix::new(entries).unwrap();
        let mut values = m.eigenvalues().unwrap();
        values.sort_by(f64::total_cmp);
        assert!(values[0].abs() < 1e-14);
        assert!((values[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn exp_of_diagonal() {
        let d = HermitianMatrix::diagonal(&[1.0, -2.0]);
        let e = d.exp(0.5).unwrap();
        assert!((e.get(0, 0).re - 0.5_f64.exp()).abs() < 1e-14);
        assert!((e.get(1, 1).re - (-1.0_f64).exp()).abs() < 1e-14);
        assert!(e.get(0, 1).norm() < 1e-15);
    }
}
