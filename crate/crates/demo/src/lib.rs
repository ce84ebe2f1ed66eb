//! Browser bindings for the matrix Bernstein demo page.
//!
//! Every export returns a flat `Float64Array` so the page can plot it
//! without any glue beyond `wasm-bindgen`.

use matrix_bernstein::rng::child_seed;
use matrix_bernstein::{
    operator_norm_study, run_coupling, sample_without_replacement, tail_curve, MatrixEnsemble, Result, SamplingMode,
};
use wasm_bindgen::prelude::*;

/// Columns per point in [`tail_comparison`].
pub const TAIL_COLUMNS: usize = 4;

/// Tail probabilities of `‖S‖` for a random centered ensemble, sampled
/// with and without replacement, against the Bernstein bound.
///
/// Rows are `t, empirical_iid, empirical_noreplace, bound` for `points`
/// thresholds evenly spread over `[0, m c]`.
pub fn tail_comparison(
    dim: usize,
    size: usize,
    ensemble_seed: u64,
    m: usize,
    trials: usize,
    seed: u64,
    points: usize,
) -> Result<Vec<f64>> {
    let e = MatrixEnsemble::random(dim, size, ensemble_seed)?;
    let top = m as f64 * e.norm_bound_c();
    let steps = points.max(2);
    let grid: Vec<f64> = (0..steps).map(|i| top * i as f64 / (steps - 1) as f64).collect();
    let iid = tail_curve(&e, m, SamplingMode::WithReplacement, &grid, trials, seed, 1)?;
    let noreplace = tail_curve(&e, m, SamplingMode::WithoutReplacement, &grid, trials, seed, 1)?;
    let mut out = Vec::with_capacity(steps * TAIL_COLUMNS);
    for (a, b) in iid.iter().zip(&noreplace) {
        out.extend([a.t, a.empirical_tail, b.empirical_tail, a.theoretical_bound.min(1.0)]);
    }
    Ok(out)
}

/// Empirical law of the coupled vector `Z` over all `|C|^m` outcomes in
/// lexicographic order. Each trial feeds a fresh draw without replacement.
pub fn coupling_frequencies(c_size: usize, m: usize, trials: usize, seed: u64) -> Result<Vec<f64>> {
    let cells =
        c_size
            .checked_pow(m as u32)
            .filter(|&n| n <= 1 << 16)
            .ok_or(matrix_bernstein::Error::EnumerationTooLarge {
                what: "coupling outcomes",
                requested: matrix_bernstein::enumerate::power(c_size, m),
                limit: 1 << 16,
            })?;
    let mut counts = vec![0u64; cells];
    for i in 0..trials as u64 {
        let y = sample_without_replacement(c_size, m, child_seed(seed, "demo/y", i))?;
        let trace = run_coupling(&y, c_size, child_seed(seed, "demo/z", i))?;
        let index = trace.output_z().iter().fold(0, |acc, &z| acc * c_size + z);
        counts[index] += 1;
    }
    Ok(counts.into_iter().map(|k| k as f64 / trials.max(1) as f64).collect())
}

/// Operator norms of `(m/n²) R` over independent draws.
pub fn sampling_operator_norms(n: usize, m: usize, mode: SamplingMode, trials: usize, seed: u64) -> Result<Vec<f64>> {
    let study = operator_norm_study(n, m, mode, trials, seed, 1)?;
    Ok(study.trials.iter().map(|t| t.norm).collect())
}

fn js<T>(r: Result<T>) -> std::result::Result<T, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = tailComparison)]
pub fn tail_comparison_js(
    dim: usize,
    size: usize,
    ensemble_seed: u64,
    m: usize,
    trials: usize,
    seed: u64,
    points: usize,
) -> std::result::Result<Vec<f64>, JsError> {
    js(tail_comparison(dim, size, ensemble_seed, m, trials, seed, points))
}

#[wasm_bindgen(js_name = couplingFrequencies)]
pub fn coupling_frequencies_js(
    c_size: usize,
    m: usize,
    trials: usize,
    seed: u64,
) -> std::result::Result<Vec<f64>, JsError> {
    js(coupling_frequencies(c_size, m, trials, seed))
}

/// `mode` is one of `iid`, `noreplace`, `bernoulli`.
#[wasm_bindgen(js_name = samplingOperatorNorms)]
pub fn sampling_operator_norms_js(
    n: usize,
    m: usize,
    mode: &str,
    trials: usize,
    seed: u64,
) -> std::result::Result<Vec<f64>, JsError> {
    let mode: SamplingMode = mode.parse().map_err(|e: String| JsError::new(&e))?;
    js(sampling_operator_norms(n, m, mode, trials, seed))
}
