//! Acceptance criteria. Each test prints one PASS/FAIL line; run with
//! `cargo test -p matrix-bernstein-cli --test acceptance -- --nocapture`.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use matrix_bernstein::bounds::{bernstein_bound, exact_mgf, tail_curve, BernsteinParams};
use matrix_bernstein::coupling::{conditional_step_probability, coupling_sum_expectation, exact_coupling_distribution};
use matrix_bernstein::enumerate::{for_each_arrangement, for_each_tuple};
use matrix_bernstein::format::ensemble_to_string;
use matrix_bernstein::hermitian::{matrix_sum, HermitianMatrix, C64};
use matrix_bernstein::rng;
use matrix_bernstein::sampler::{sample, sample_with_replacement, SampleVector, SamplingMode};
use matrix_bernstein::sampling_operator::{
    apply_sampling_operator, build_basis, dense_superoperator_matrix, projection_defect, symmetric_norm,
    SamplingOperatorDiag,
};
use matrix_bernstein::MatrixEnsemble;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

fn report(id: u32, name: &str, passed: bool, detail: String, elapsed: Duration, budget: Duration) {
    let within = elapsed <= budget;
    let status = if passed && within { "PASS" } else { "FAIL" };
    println!(
        "[{status}] criterion {id:>2} ({name}): {detail} ({:.2} s, budget {} s)",
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    assert!(passed, "criterion {id} ({name}): {detail}");
    assert!(within, "criterion {id} ({name}): took {elapsed:?}, budget {budget:?}");
}

fn centered_2x2(seed: u64, count: usize) -> MatrixEnsemble {
    MatrixEnsemble::random(2, count, 0xac00 + seed).unwrap()
}

#[test]
fn ac01_coupling_law_uniform() {
    let start = Instant::now();
    let mut pairs = 0;
    let mut bad = 0usize;
    for c in 2..=5usize {
        for m in 1..=c.min(3) {
            let law = exact_coupling_distribution(c, m).unwrap();
            let expected = BigRational::new(BigInt::from(1), BigInt::from(c).pow(m as u32));
            for_each_tuple(c, m, |x| {
                if law.probability(x) != expected {
                    bad += 1;
                }
            });
            if law.support().len() != c.pow(m as u32) {
                bad += 1;
            }
            pairs += 1;
        }
    }
    report(
        1,
        "coupling law is uniform",
        bad == 0,
        format!("{pairs} (|C|, m) pairs, {bad} outcomes differ from 1/|C|^m"),
        start.elapsed(),
        Duration::from_secs(10),
    );
}

#[test]
fn ac02_symmetric_sum_exactness() {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    let mut draws = 0;
    for seed in 0..5 {
        for c in 1..=6usize {
            let e = centered_2x2(seed, c);
            for m in 1..=c.min(4) {
                for_each_arrangement(c, m, |y| {
                    let v = SampleVector::from_indices(y.to_vec(), SamplingMode::WithoutReplacement, c).unwrap();
                    let terms: Vec<HermitianMatrix> = y.iter().map(|&i| e.member(i).clone()).collect();
                    let direct = matrix_sum(&terms).unwrap();
                    worst = worst.max(coupling_sum_expectation(&v, &e).unwrap().max_abs_diff(&direct));
                    draws += 1;
                });
            }
        }
    }
    report(
        2,
        "E_Z[sum Z_i(y)] = sum y_i",
        worst <= 1e-12,
        format!("{draws} draws over 5 ensembles, max entrywise error {worst:e} (tol 1e-12)"),
        start.elapsed(),
        Duration::from_secs(30),
    );
}

#[test]
fn ac03_conditional_probability_identity() {
    let start = Instant::now();
    let mut checked = 0;
    let mut bad = 0;
    for c in 2..=5usize {
        let expected = BigRational::new(BigInt::from(1), BigInt::from(c));
        for m in 1..=c.min(3) {
            for k in 0..m {
                for_each_tuple(c, k, |prefix| {
                    for candidate in 0..c {
                        match conditional_step_probability(c, m, prefix, candidate) {
                            Ok(p) => {
                                checked += 1;
                                if p != expected {
                                    bad += 1;
                                }
                            }
                            Err(_) => bad += 1,
                        }
                    }
                });
            }
        }
    }
    report(
        3,
        "conditional step probability = 1/|C|",
        bad == 0,
        format!("{checked} (prefix, candidate) pairs, {bad} deviations"),
        start.elapsed(),
        Duration::from_secs(10),
    );
}

#[test]
fn ac04_mgf_domination_exact() {
    let start = Instant::now();
    let mut worst = f64::NEG_INFINITY;
    let mut cases = 0;
    for seed in 0..5 {
        let e = centered_2x2(100 + seed, 4);
        for m in [2, 3] {
            for scale in [-2.0, -1.0, -0.5, -0.1, 0.1, 0.5, 1.0, 2.0] {
                let x = exact_mgf(&e, m, SamplingMode::WithReplacement, scale).unwrap();
                let y = exact_mgf(&e, m, SamplingMode::WithoutReplacement, scale).unwrap();
                worst = worst.max(y - x);
                cases += 1;
            }
        }
    }
    report(
        4,
        "exact M_Y <= M_X",
        worst <= 1e-10,
        format!("{cases} cases, max(M_Y - M_X) = {worst:e} (tol 1e-10)"),
        start.elapsed(),
        Duration::from_secs(60),
    );
}

#[test]
fn ac05_bound_dominates_monte_carlo() {
    let start = Instant::now();
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let ensembles = [
        MatrixEnsemble::random(2, 6, 501).unwrap(),
        MatrixEnsemble::random(3, 8, 502).unwrap(),
        MatrixEnsemble::random(2, 10, 503).unwrap(),
    ];
    let mut informative = 0;
    let mut worst = f64::NEG_INFINITY;
    let mut violations = 0;
    for (k, e) in ensembles.iter().enumerate() {
        for m in [3usize, 5] {
            let mc = m as f64 * e.norm_bound_c();
            let grid: Vec<f64> = (1..=8).map(|i| mc * i as f64 / 8.0).collect();
            for mode in [SamplingMode::WithReplacement, SamplingMode::WithoutReplacement] {
                for r in tail_curve(e, m, mode, &grid, 10_000, 7 + k as u64, workers).unwrap() {
                    if r.theoretical_bound <= 1.0 {
                        informative += 1;
                        worst = worst.max(r.wilson_upper - r.theoretical_bound);
                        if r.wilson_upper > r.theoretical_bound {
                            violations += 1;
                        }
                    }
                }
            }
        }
    }
    report(
        5,
        "Bernstein bound vs Monte Carlo",
        violations == 0 && informative > 0,
        format!(
            "{informative} informative grid points, {violations} violations, max(wilson_upper - bound) = {worst:.4}"
        ),
        start.elapsed(),
        Duration::from_secs(300),
    );
}

#[test]
fn ac06_branch_continuity() {
    let start = Instant::now();
    let mut r = rng::stream(6, "acceptance/params");
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let p = BernsteinParams::new(
            r.random_range(1..=16),
            r.random_range(1..=100),
            r.random_range(0.01..10.0),
            r.random_range(0.01..10.0),
        )
        .unwrap();
        let t = p.crossover();
        worst = worst.max((p.gaussian_branch(t) - p.exponential_branch(t)).abs());
        let at = bernstein_bound(&p, t).unwrap();
        worst = worst.max((at - p.exponential_branch(t)).abs());
    }
    report(
        6,
        "bound branch continuity",
        worst <= 1e-12,
        format!("100 parameter sets, max |gaussian - exponential| at t = 2V/c = {worst:e} (tol 1e-12)"),
        start.elapsed(),
        Duration::from_secs(1),
    );
}

#[test]
fn ac07_projection_property() {
    let start = Instant::now();
    let mut worst_defect = 0.0_f64;
    let mut worst_norm = 0.0_f64;
    for n in 2..=4usize {
        let basis = build_basis(n).unwrap();
        for m in [1, n, n * n] {
            for seed in 0..100 {
                let v = sample(SamplingMode::WithoutReplacement, n * n, m, seed).unwrap();
                let p = dense_superoperator_matrix(&v, &basis).unwrap();
                worst_defect = worst_defect.max(projection_defect(&p).unwrap());
                worst_norm = worst_norm.max((symmetric_norm(&p).unwrap() - 1.0).abs());
                worst_norm = worst_norm.max((SamplingOperatorDiag::new(n, &v).unwrap().norm - 1.0).abs());
            }
        }
    }
    report(
        7,
        "projection property",
        worst_defect <= 1e-10 && worst_norm <= 1e-10,
        format!("900 draws, max ||P^2 - P|| = {worst_defect:e}, max | ||P|| - 1 | = {worst_norm:e}"),
        start.elapsed(),
        Duration::from_secs(30),
    );
}

#[test]
fn ac08_worst_case_norm() {
    let start = Instant::now();
    let mut forced_err = 0.0_f64;
    let mut max_excess = f64::NEG_INFINITY;
    for n in 2..=4usize {
        let basis = build_basis(n).unwrap();
        for m in [1, 2, 5, n * n, 3 * n * n] {
            for a in [0, n * n - 1] {
                let v = SampleVector::from_indices(vec![a; m], SamplingMode::WithReplacement, n * n).unwrap();
                let norm = symmetric_norm(&dense_superoperator_matrix(&v, &basis).unwrap()).unwrap();
                forced_err = forced_err.max((norm - m as f64).abs());
            }
            for seed in 0..50 {
                let v = sample_with_replacement(n * n, m, seed).unwrap();
                let norm = symmetric_norm(&dense_superoperator_matrix(&v, &basis).unwrap()).unwrap();
                max_excess = max_excess.max(norm - m as f64);
            }
        }
    }
    report(
        8,
        "worst-case norm m",
        forced_err <= 1e-9 && max_excess <= 1e-9,
        format!("all-equal draws |norm - m| <= {forced_err:e}; random draws max(norm - m) = {max_excess}"),
        start.elapsed(),
        Duration::from_secs(10),
    );
}

#[test]
fn ac09_basis_completeness() {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for n in 2..=4usize {
        let basis = build_basis(n).unwrap();
        let v = sample(SamplingMode::WithoutReplacement, n * n, n * n, 9).unwrap();
        let mut r = rng::stream(n as u64, "acceptance/rho");
        for _ in 0..20 {
            let g = random_hermitian(n, &mut r);
            let out = apply_sampling_operator(&g, &v, &basis).unwrap();
            worst = worst.max(out.try_sub(&g).unwrap().frobenius_norm());
        }
    }
    report(
        9,
        "basis completeness R(rho) = rho",
        worst <= 1e-10,
        format!("60 random rho, max ||R(rho) - rho||_F = {worst:e} (tol 1e-10)"),
        start.elapsed(),
        Duration::from_secs(10),
    );
}

fn random_hermitian(n: usize, r: &mut impl Rng) -> HermitianMatrix {
    let mut entries = vec![0.0; 2 * n * n];
    for x in entries.iter_mut() {
        *x = r.random_range(-1.0..1.0);
    }
    let mut m = HermitianMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let mut e = HermitianMatrix::zeros(n).entries().clone();
            let z = if i == j {
                C64::new(entries[2 * (i * n + j)], 0.0)
            } else {
                C64::new(entries[2 * (i * n + j)], entries[2 * (i * n + j) + 1])
            };
            e[(i, j)] = z;
            e[(j, i)] = z.conj();
            m = m.try_add(&HermitianMatrix::new(e).unwrap()).unwrap();
        }
    }
    m
}

fn run_cli(args: &[&str], workers: &str, out: &Path) -> Vec<u8> {
    let status = Command::new(env!("CARGO_BIN_EXE_matbern"))
        .args(args)
        .args(["--workers", workers, "--output"])
        .arg(out)
        .output()
        .expect("failed to launch matbern");
    assert!(
        status.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&status.stderr)
    );
    std::fs::read(out).unwrap()
}

#[test]
fn ac10_cli_reproducibility() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let ensemble_path = dir.path().join("ensemble.txt");
    let e = MatrixEnsemble::random(3, 5, 10).unwrap();
    std::fs::write(&ensemble_path, ensemble_to_string(e.members())).unwrap();
    let ensemble = ensemble_path.to_str().unwrap();

    let invocations: Vec<Vec<&str>> = vec![
        vec![
            "tail-bound",
            "--random-ensemble",
            "2,6,1",
            "--m",
            "3",
            "--mode",
            "noreplace",
            "--t-grid",
            "0:3:8",
            "--trials",
            "3000",
        ],
        vec![
            "tail-bound",
            "--ensemble",
            ensemble,
            "--m",
            "4",
            "--t-grid",
            "0:4:6",
            "--trials",
            "3000",
            "--seed",
            "5",
        ],
        vec![
            "mgf-compare",
            "--random-ensemble",
            "2,4,3",
            "--m",
            "2",
            "--scale-grid",
            "-1:1:5",
            "--trials",
            "3000",
        ],
        vec![
            "mgf-compare",
            "--ensemble",
            ensemble,
            "--m",
            "3",
            "--scale-grid",
            "-0.5:0.5:3",
            "--trials",
            "2000",
        ],
        vec!["coupling-verify", "--c-size", "3", "--m", "2", "--exact"],
        vec![
            "coupling-verify",
            "--c-size",
            "5",
            "--m",
            "3",
            "--trials",
            "20000",
            "--seed",
            "4",
        ],
        vec![
            "sampling-operator",
            "--n",
            "4",
            "--m",
            "16",
            "--mode",
            "iid",
            "--trials",
            "500",
        ],
        vec![
            "sampling-operator",
            "--n",
            "3",
            "--m",
            "4",
            "--mode",
            "bernoulli",
            "--trials",
            "300",
        ],
        vec![
            "sampling-operator",
            "--n",
            "3",
            "--m",
            "9",
            "--mode",
            "noreplace",
            "--trials",
            "100",
        ],
    ];
    let mut mismatches = Vec::new();
    for (i, args) in invocations.iter().enumerate() {
        let a = run_cli(args, "1", &dir.path().join(format!("{i}-a.csv")));
        let b = run_cli(args, "1", &dir.path().join(format!("{i}-b.csv")));
        let c = run_cli(args, "4", &dir.path().join(format!("{i}-c.csv")));
        if a != b || a != c || a.is_empty() {
            mismatches.push(args[0]);
        }
    }
    report(
        10,
        "CLI byte reproducibility",
        mismatches.is_empty(),
        format!(
            "{} invocations x (2 runs at --workers 1, 1 run at --workers 4), mismatches: {mismatches:?}",
            invocations.len()
        ),
        start.elapsed(),
        Duration::from_secs(120),
    );
}

#[test]
fn ac10_exact_coupling_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = run_cli(
        &["coupling-verify", "--c-size", "3", "--m", "2", "--exact"],
        "1",
        &dir.path().join("c.csv"),
    );
    let text = String::from_utf8(csv).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(
        text.lines().next(),
        Some("outcome,probability,expected_probability,abs_error")
    );
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|r| r.ends_with(",0")));
}
