//! Concentration of sums of Hermitian matrices drawn from a finite collection,
//! with and without replacement.
//!
//! * [`hermitian`]: dense Hermitian matrices, operator norm, `tr exp`.
//! * [`ensemble`]: the finite collection and its bound constants `c`, `σ₀²`.
//! * [`sampler`]: i.i.d., without-replacement and Bernoulli index draws.
//! * [`coupling`]: Hoeffding's coupling that turns a draw without replacement
//!   into one with replacement, and exact rational oracles for it.
//! * [`bounds`]: the operator-Bernstein tail bound, Monte Carlo tails and
//!   moment-generating functions.
//! * [`sampling_operator`]: the sampling operator of low-rank matrix recovery.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod coupling;
pub mod ensemble;
pub mod enumerate;
pub mod error;
pub mod format;
pub mod hermitian;
pub mod parallel;
pub mod rng;
pub mod sampler;
pub mod sampling_operator;
pub mod stats;

pub use bounds::{bernstein_bound, empirical_mgf, empirical_tail, exact_mgf, tail_curve, BernsteinParams, TailReport};
pub use coupling::{
    conditional_step_probability, coupling_sum_expectation, exact_coupling_distribution, jensen_domination_check,
    run_coupling, CouplingTrace, ExactDistribution, JensenCheck, Rule,
};
pub use ensemble::MatrixEnsemble;
pub use error::{Error, Result};
pub use hermitian::{matrix_sum, operator_norm, trace_exp, HermitianMatrix};
pub use sampler::{
    realize, sample_bernoulli, sample_with_replacement, sample_without_replacement, SampleVector, SamplingMode,
};
pub use sampling_operator::{
    apply_sampling_operator, build_basis, operator_norm_study, superoperator_matrix, HermitianBasis, NormStudy,
    SamplingOperatorDiag,
};
