use matrix_bernstein::coupling::{
    conditional_step_probability, coupling_sum_expectation, exact_coupling_distribution, expected_counts,
    jensen_domination_check, run_coupling, EXACT_MAX_C, EXACT_MAX_M, MATRIX_MAX_C, MATRIX_MAX_M,
};
use matrix_bernstein::enumerate::{for_each_arrangement, for_each_tuple};
use matrix_bernstein::hermitian::{matrix_sum, trace_exp, HermitianMatrix};
use matrix_bernstein::parallel::map_trials;
use matrix_bernstein::rng::child_seed;
use matrix_bernstein::sampler::{sample_without_replacement, SampleVector, SamplingMode};
use matrix_bernstein::stats::chi_square_uniform;
use matrix_bernstein::{Error, MatrixEnsemble};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

fn inv(n: u64) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(n))
}

#[test]
fn coupled_law_is_uniform_on_the_whole_guard() {
    for c in 1..=EXACT_MAX_C {
        for m in 1..=c.min(EXACT_MAX_M) {
            let law = exact_coupling_distribution(c, m).unwrap();
            assert_eq!(law.total(), BigRational::one(), "|C| = {c}, m = {m}");
            let expected = inv((c as u64).pow(m as u32));
            let mut outcomes = 0;
            for_each_tuple(c, m, |x| {
                assert_eq!(law.probability(x), expected, "|C| = {c}, m = {m}, x = {x:?}");
                outcomes += 1;
            });
            assert_eq!(law.support().len(), outcomes);
        }
    }
}

#[test]
fn conditional_probability_is_one_over_c_everywhere() {
    for c in 1..=5 {
        for m in 1..=c.min(3) {
            for k in 0..m {
                for_each_tuple(c, k, |prefix| {
                    for candidate in 0..c {
                        let p = conditional_step_probability(c, m, prefix, candidate).unwrap();
                        assert_eq!(
                            p,
                            inv(c as u64),
                            "|C| = {c}, m = {m}, prefix {prefix:?}, candidate {candidate}"
                        );
                    }
                });
            }
        }
    }
}

#[test]
fn expected_counts_are_exactly_one() {
    for c in 1..=EXACT_MAX_C {
        for m in 1..=c.min(EXACT_MAX_M) {
            for_each_arrangement(c, m, |y| {
                let v = SampleVector::from_indices(y.to_vec(), SamplingMode::WithoutReplacement, c).unwrap();
                assert!(expected_counts(&v, c).unwrap().iter().all(|w| w.is_one()), "y = {y:?}");
            });
        }
    }
}

#[test]
fn sum_expectation_matches_the_draw() {
    for seed in 0..3 {
        for c in 2..=MATRIX_MAX_C {
            let e = MatrixEnsemble::random(2, c, seed).unwrap();
            for m in 1..=c.min(MATRIX_MAX_M) {
                for_each_arrangement(c, m, |y| {
                    let v = SampleVector::from_indices(y.to_vec(), SamplingMode::WithoutReplacement, c).unwrap();
                    let terms: Vec<HermitianMatrix> = y.iter().map(|&i| e.member(i).clone()).collect();
                    let direct = matrix_sum(&terms).unwrap();
                    let coupled = coupling_sum_expectation(&v, &e).unwrap();
                    assert!(coupled.max_abs_diff(&direct) <= 1e-12);
                });
            }
        }
    }
}

#[test]
fn full_draw_sum_expectation() {
    // m = |C| has the richest branch tree.
    let e = MatrixEnsemble::random(3, 4, 77).unwrap();
    let v = SampleVector::from_indices(vec![2, 0, 3, 1], SamplingMode::WithoutReplacement, 4).unwrap();
    let expected = matrix_sum(e.members()).unwrap();
    assert!(coupling_sum_expectation(&v, &e).unwrap().max_abs_diff(&expected) <= 1e-12);
}

#[test]
fn sampled_coupling_is_uniform() {
    let (c, m, runs) = (10usize, 4usize, 1_000_000usize);
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let outcomes = map_trials(runs, workers, |i| {
        let y = sample_without_replacement(c, m, child_seed(99, "test/y", i))?;
        let t = run_coupling(&y, c, child_seed(99, "test/z", i))?;
        Ok(t.output_z().iter().fold(0usize, |acc, &z| acc * c + z))
    })
    .unwrap();
    let mut counts = vec![0u64; c.pow(m as u32)];
    for o in outcomes {
        counts[o] += 1;
    }
    let test = chi_square_uniform(&counts);
    assert!(test.p_value > 1e-4, "{test:?}");
}

#[test]
fn jensen_chain_on_generic_ensembles() {
    for seed in 0..5 {
        let e = MatrixEnsemble::random(2, 4, 1000 + seed).unwrap();
        let j = jensen_domination_check(&e, 2, 1.0).unwrap();
        assert!(j.rhs < j.lhs, "{j:?}");
        assert!((j.lhs_via_coupling - j.lhs).abs() <= 1e-10 * j.lhs);
    }
    for c in 1..=MATRIX_MAX_C {
        let e = MatrixEnsemble::random(2, c, 5).unwrap();
        for m in 1..=c.min(MATRIX_MAX_M) {
            for scale in [-2.0, -1.0, -0.5, -0.1, 0.0, 0.1, 0.5, 1.0, 2.0] {
                let j = jensen_domination_check(&e, m, scale).unwrap();
                assert!(j.holds(1e-10), "|C| = {c}, m = {m}, scale = {scale}: {j:?}");
                assert!((j.lhs_via_coupling - j.lhs).abs() <= 1e-10 * j.lhs.max(1.0));
            }
        }
    }
}

#[test]
fn guard_errors() {
    let e = MatrixEnsemble::random(2, 6, 0).unwrap();
    assert!(matches!(
        jensen_domination_check(&e, 2, 1.0),
        Err(Error::EnumerationTooLarge { .. })
    ));
    assert!(matches!(
        conditional_step_probability(7, 2, &[], 0),
        Err(Error::EnumerationTooLarge { .. })
    ));
}

fn pair(n: usize) -> impl Strategy<Value = (HermitianMatrix, HermitianMatrix)> {
    let one = move || {
        prop::collection::vec(-1.5..1.5_f64, 2 * n * n).prop_map(move |raw| {
            let g = nalgebra::DMatrix::from_fn(n, n, |i, j| {
                matrix_bernstein::hermitian::C64::new(raw[2 * (i * n + j)], raw[2 * (i * n + j) + 1])
            });
            HermitianMatrix::new((&g + g.adjoint()) * matrix_bernstein::hermitian::C64::new(0.5, 0.0)).unwrap()
        })
    };
    (one(), one())
}

proptest! {
    #[test]
    fn trace_exp_is_convex(
        (a, b) in (1usize..5).prop_flat_map(pair),
        t in 0.0..=1.0_f64,
        lambda in -2.0..2.0_f64,
    ) {
        let mix = &a.scale(t) + &b.scale(1.0 - t);
        let left = trace_exp(&mix, lambda).unwrap();
        let right = t * trace_exp(&a, lambda).unwrap() + (1.0 - t) * trace_exp(&b, lambda).unwrap();
        prop_assert!(left <= right + 1e-9, "{} > {}", left, right);
    }
}
