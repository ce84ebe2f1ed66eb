//! The finite collection `C` of Hermitian matrices that samples are drawn
//! from, together with its norm bound `c` and variance bound `σ₀²`.

use nalgebra::DMatrix;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::hermitian::{matrix_sum, operator_norm, HermitianMatrix, C64};
use crate::rng;

/// Slack allowed when checking the bound constants and the centering.
pub const BOUND_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixEnsemble {
    members: Vec<HermitianMatrix>,
    norm_bound_c: f64,
    variance_bound_sigma0sq: f64,
    centered: bool,
}

impl MatrixEnsemble {
    /// Builds the ensemble with the tightest constants:
    /// `c = max ‖X‖` and `σ₀² = ‖(1/|C|) Σ X²‖`.
    pub fn analyze(members: Vec<HermitianMatrix>) -> Result<Self> {
        let first = members.first().ok_or(Error::EmptyEnsemble)?;
        let dim = first.dim();
        if let Some(bad) = members.iter().find(|m| m.dim() != dim) {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: bad.dim(),
            });
        }
        let norm_bound_c = members
            .iter()
            .map(operator_norm)
            .try_fold(0.0_f64, |acc, norm| norm.map(|n| acc.max(n)))?;
        let inv_count = 1.0 / members.len() as f64;
        let squares: Vec<HermitianMatrix> = members.iter().map(HermitianMatrix::square).collect();
        let variance_bound_sigma0sq = operator_norm(&matrix_sum(&squares)?.scale(inv_count))?;
        let mean_norm = operator_norm(&matrix_sum(&members)?.scale(inv_count))?;
        Ok(Self {
            members,
            norm_bound_c,
            variance_bound_sigma0sq,
            centered: mean_norm <= BOUND_TOL,
        })
    }

    /// Replaces the computed constants by looser ones. Each override must
    /// dominate the computed value.
    pub fn with_bounds(mut self, norm_bound_c: f64, variance_bound_sigma0sq: f64) -> Result<Self> {
        if !(norm_bound_c >= self.norm_bound_c) {
            return Err(Error::OverrideTooSmall {
                name: "c",
                supplied: norm_bound_c,
                computed: self.norm_bound_c,
            });
        }
        if !(variance_bound_sigma0sq >= self.variance_bound_sigma0sq) {
            return Err(Error::OverrideTooSmall {
                name: "sigma0sq",
                supplied: variance_bound_sigma0sq,
                computed: self.variance_bound_sigma0sq,
            });
        }
        self.norm_bound_c = norm_bound_c;
        self.variance_bound_sigma0sq = variance_bound_sigma0sq;
        Ok(self)
    }

    /// `count` Hermitized complex Gaussian matrices, centered.
    pub fn random(dim: usize, count: usize, seed: u64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("dim", "must be at least 1"));
        }
        if count == 0 {
            return Err(Error::EmptyEnsemble);
        }
        let mut rng = rng::stream(seed, "ensemble/gaussian");
        let members = (0..count)
            .map(|_| {
                let g = DMatrix::from_fn(dim, dim, |_, _| {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    C64::new(re, im)
                });
                HermitianMatrix::symmetrized(g)
            })
            .collect();
        Self::analyze(members)?.centered()
    }

    /// Subtracts the uniform mean from every member and recomputes the
    /// constants. Overridden bounds are discarded.
    pub fn centered(&self) -> Result<Self> {
        let mean = self.mean()?;
        let members = self
            .members
            .iter()
            .map(|m| m.try_sub(&mean))
            .collect::<Result<Vec<_>>>()?;
        let mut out = Self::analyze(members)?;
        out.centered = true;
        Ok(out)
    }

    pub fn mean(&self) -> Result<HermitianMatrix> {
        Ok(matrix_sum(&self.members)?.scale(1.0 / self.size() as f64))
    }

    pub fn members(&self) -> &[HermitianMatrix] {
        &self.members
    }

    pub fn member(&self, index: usize) -> &HermitianMatrix {
        &self.members[index]
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn dim(&self) -> usize {
        self.members[0].dim()
    }

    pub fn norm_bound_c(&self) -> f64 {
        self.norm_bound_c
    }

    pub fn variance_bound_sigma0sq(&self) -> f64 {
        self.variance_bound_sigma0sq
    }

    pub fn is_centered(&self) -> bool {
        self.centered
    }

    pub fn require_centered(&self) -> Result<()> {
        if self.centered {
            Ok(())
        } else {
            Err(Error::NotCentered {
                mean_norm: operator_norm(&self.mean()?)?,
            })
        }
    }
}

/// Free-function form of [`MatrixEnsemble::analyze`].
pub fn analyze_ensemble(members: Vec<HermitianMatrix>) -> Result<MatrixEnsemble> {
    MatrixEnsemble::analyze(members)
}

pub fn center_ensemble(e: &MatrixEnsemble) -> Result<MatrixEnsemble> {
    e.centered()
}

pub fn random_ensemble(dim: usize, count: usize, seed: u64) -> Result<MatrixEnsemble> {
    MatrixEnsemble::random(dim, count, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn diag(v: &[f64]) -> HermitianMatrix {
        HermitianMatrix::diagonal(v)
    }

    #[test]
    fn analyze_examples() {
        let e = MatrixEnsemble::analyze(vec![diag(&[1.0, -1.0]), diag(&[-1.0, 1.0])]).unwrap();
        assert!((e.norm_bound_c() - 1.0).abs() < 1e-15);
        assert!((e.variance_bound_sigma0sq() - 1.0).abs() < 1e-15);
        assert!(e.is_centered());

        let z = MatrixEnsemble::analyze(vec![HermitianMatrix::zeros(2); 2]).unwrap();
        assert_eq!(z.norm_bound_c(), 0.0);
        assert_eq!(z.variance_bound_sigma0sq(), 0.0);
        assert!(z.is_centered());

        let id = MatrixEnsemble::analyze(vec![HermitianMatrix::identity(2)]).unwrap();
        assert!(!id.is_centered());
        assert!(matches!(id.require_centered(), Err(Error::NotCentered { .. })));
    }

    #[test]
    fn analyze_errors() {
        assert_eq!(MatrixEnsemble::analyze(vec![]).unwrap_err(), Error::EmptyEnsemble);
        let err = MatrixEnsemble::analyze(vec![HermitianMatrix::zeros(2), HermitianMatrix::zeros(3)]).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { left: 2, right: 3 });
    }

    #[test]
    fn center_examples() {
        let e = MatrixEnsemble::analyze(vec![diag(&[1.0, -1.0]), diag(&[-1.0, 1.0])]).unwrap();
        let c = e.centered().unwrap();
        for (a, b) in e.members().iter().zip(c.members()) {
            assert!(a.max_abs_diff(b) <= 1e-12);
        }

        let e = MatrixEnsemble::analyze(vec![HermitianMatrix::identity(2), HermitianMatrix::zeros(2)]).unwrap();
        let c = e.centered().unwrap();
        assert!(c.member(0).max_abs_diff(&diag(&[0.5, 0.5])) <= 1e-15);
        assert!(c.member(1).max_abs_diff(&diag(&[-0.5, -0.5])) <= 1e-15);
        assert!(c.is_centered());

        let single = MatrixEnsemble::analyze(vec![diag(&[2.0, 3.0])])
            .unwrap()
            .centered()
            .unwrap();
        assert_eq!(single.member(0), &HermitianMatrix::zeros(2));
    }

    #[test]
    fn random_examples() {
        let a = MatrixEnsemble::random(3, 5, 42).unwrap();
        let b = MatrixEnsemble::random(3, 5, 42).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, MatrixEnsemble::random(3, 5, 43).unwrap());

        let one = MatrixEnsemble::random(2, 1, 9).unwrap();
        assert_eq!(one.member(0), &HermitianMatrix::zeros(2));

        let scalars = MatrixEnsemble::random(1, 6, 1).unwrap();
        assert_eq!(scalars.dim(), 1);
        assert!(scalars.is_centered());
        for m in scalars.members() {
            assert_eq!(m.get(0, 0).im, 0.0);
        }
    }

    #[test]
    fn overrides_must_dominate() {
        let e = MatrixEnsemble::random(2, 4, 3).unwrap();
        let (c, s) = (e.norm_bound_c(), e.variance_bound_sigma0sq());
        let loose = e.clone().with_bounds(c + 1.0, s * 2.0).unwrap();
        assert_eq!(loose.norm_bound_c(), c + 1.0);
        assert!(matches!(
            e.clone().with_bounds(c * 0.5, s),
            Err(Error::OverrideTooSmall { name: "c", .. })
        ));
        assert!(matches!(
            e.with_bounds(c, s * 0.5),
            Err(Error::OverrideTooSmall { name: "sigma0sq", .. })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn constants_are_valid_and_tight(seed in any::<u64>(), dim in 1usize..5, count in 1usize..7) {
            let e = MatrixEnsemble::random(dim, count, seed).unwrap();
            let norms: Vec<f64> = e.members().iter().map(|m| operator_norm(m).unwrap()).collect();
            for &n in &norms {
                prop_assert!(n <= e.norm_bound_c() + BOUND_TOL);
            }
            prop_assert!(norms.iter().any(|&n| (n - e.norm_bound_c()).abs() <= BOUND_TOL));
            let squares: Vec<_> = e.members().iter().map(HermitianMatrix::square).collect();
            let second = matrix_sum(&squares).unwrap().scale(1.0 / count as f64);
            prop_assert!(operator_norm(&second).unwrap() <= e.variance_bound_sigma0sq() + BOUND_TOL);
        }

        #[test]
        fn centering_is_idempotent_and_sums_to_zero(seed in any::<u64>(), dim in 1usize..5, count in 1usize..7) {
            let e = MatrixEnsemble::random(dim, count, seed).unwrap();
            let sum = matrix_sum(e.members()).unwrap();
            prop_assert!(sum.max_abs_diff(&HermitianMatrix::zeros(dim)) <= BOUND_TOL);
            let again = e.centered().unwrap();
            for (a, b) in e.members().iter().zip(again.members()) {
                prop_assert!(a.max_abs_diff(b) <= 1e-12);
            }
        }
    }
}
