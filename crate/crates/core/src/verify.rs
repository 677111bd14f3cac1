//! Named consistency checks run by the `verify` command. Every check compares
//! a closed form against an independent computation below the capacity
//! limits.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::capacity::Capacity;
use crate::error::{Error, Result};
use crate::mixing::{character_expectations, cutoff_step, CharacterLowerBound, L2Series};
use crate::numeric::factorial;
use crate::oracle::{
    build_kernel_with, exact_tv_curve_from, kernel_row, numeric_spectrum_with,
    oracle_moment_series, sample_one_step, DistributionVector, Walk,
};
use crate::partitions::{
    count_partitions, dim_skew, dim_syt, enumerate_partitions_with, enumerate_subpartitions,
    hardy_ramanujan_ratio, partitions, SkewShape,
};
use crate::spectrum::{
    coarse_bounds_check, expected_moments, minak_check, moments, spectrum_general_with,
    spectrum_kstar_with, EigenvalueRecord, ShuffleSpec,
};
use crate::tableaux::enumerate_syt_with;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        CheckResult {
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Largest deck size for the oracle-backed checks.
    pub max_n: usize,
    /// Run the kernel-based checks up to `max_n` rather than stopping at 6.
    pub deep: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            max_n: 6,
            deep: false,
        }
    }
}

/// Expands records into a descending list of values, one per multiplicity.
pub fn expand_spectrum(records: &[EigenvalueRecord]) -> Vec<f64> {
    let mut out = Vec::new();
    for r in records {
        let v = crate::numeric::rational_to_f64(&r.value);
        let m = r
            .multiplicity
            .to_usize()
            .expect("multiplicity fits in memory");
        out.extend(std::iter::repeat_n(v, m));
    }
    out.sort_by(|a, b| b.total_cmp(a));
    out
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> Option<f64> {
    (a.len() == b.len()).then(|| {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    })
}

/// The five general sets containing `n` used for the general-spectrum check.
/// Needs `n ≥ 3`.
pub fn assorted_sets(n: usize) -> Vec<BTreeSet<usize>> {
    let sets: Vec<Vec<usize>> = vec![
        vec![n],
        vec![n - 1, n],
        (1..=n).collect(),
        vec![2, n],
        vec![1, n - 2, n],
    ];
    sets.into_iter().map(|s| s.into_iter().collect()).collect()
}

fn check_kstar_spectra(dense_n: usize, cap: &Capacity) -> Result<CheckResult> {
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for n in 2..=dense_n {
        for k in 1..=n {
            let spec = ShuffleSpec::kstar(n, k)?;
            let closed = expand_spectrum(&spectrum_kstar_with(n, k, cap)?);
            let numeric = numeric_spectrum_with(&spec, cap)?;
            match max_abs_diff(&closed, &numeric) {
                Some(d) if d <= 1e-10 => worst = worst.max(d),
                Some(d) => failures.push(format!("n={n} k={k} err={d:e}")),
                None => failures.push(format!("n={n} k={k} length mismatch")),
            }
        }
    }
    Ok(CheckResult::new(
        "kstar_spectrum_vs_eigensolve",
        failures.is_empty(),
        if failures.is_empty() {
            format!("n ≤ {dense_n}, all k, max error {worst:.2e}")
        } else {
            failures.join("; ")
        },
    ))
}

fn check_general_spectra(dense_n: usize, cap: &Capacity) -> Result<CheckResult> {
    let mut failures = Vec::new();
    let mut runs = 0;
    for n in [4usize, 5].into_iter().filter(|&n| n <= dense_n) {
        for set in assorted_sets(n) {
            let spec = ShuffleSpec::general(n, set.iter().copied())?;
            let closed = expand_spectrum(&spectrum_general_with(&spec, cap)?);
            let numeric = numeric_spectrum_with(&spec, cap)?;
            runs += 1;
            match max_abs_diff(&closed, &numeric) {
                Some(d) if d <= 1e-10 => {}
                other => failures.push(format!("n={n} A={set:?} err={other:?}")),
            }
        }
    }
    Ok(CheckResult::new(
        "general_spectrum_vs_eigensolve",
        failures.is_empty(),
        if failures.is_empty() {
            format!("{runs} sets agree within 1e-10")
        } else {
            failures.join("; ")
        },
    ))
}

fn check_moments(max_n: usize, cap: &Capacity) -> Result<CheckResult> {
    let mut failures = Vec::new();
    for n in 2..=max_n {
        for k in 1..=n {
            let got = moments(&spectrum_kstar_with(n, k, cap)?);
            if got != expected_moments(&ShuffleSpec::kstar(n, k)?) {
                failures.push(format!("n={n} k={k}"));
            }
        }
    }
    Ok(CheckResult::new(
        "exact_moments",
        failures.is_empty(),
        if failures.is_empty() {
            format!("Σmult, trace and second moment exact for n ≤ {max_n}")
        } else {
            failures.join("; ")
        },
    ))
}

fn check_extremality(max_n: usize, cap: &Capacity) -> Result<CheckResult> {
    let mut violations = 0usize;
    let mut tableaux = 0usize;
    for n in 2..=max_n {
        for lambda in enumerate_partitions_with(n, cap)? {
            for k in 1..=n {
                let row = crate::tableaux::row_insertion_tableau(&lambda).k_diagonal_index(k)?;
                let col = crate::tableaux::column_insertion_tableau(&lambda).k_diagonal_index(k)?;
                for s in enumerate_syt_with(&lambda, cap)? {
                    let d = s.k_diagonal_index(k)?;
                    tableaux += 1;
                    if d < row || d > col {
                        violations += 1;
                    }
                }
            }
        }
    }
    Ok(CheckResult::new(
        "insertion_extremality",
        violations == 0,
        format!("{violations} violations over {tableaux} (tableau, k) pairs"),
    ))
}

fn check_minak(max_n: usize, cap: &Capacity) -> Result<CheckResult> {
    let mut violations = Vec::new();
    let mut cases = 0usize;
    for n in 2..=max_n {
        for lambda in enumerate_partitions_with(n, cap)? {
            for k in 1..=n {
                cases += 1;
                if !minak_check(&lambda, k)?.2 {
                    violations.push(format!("{lambda} k={k}"));
                }
            }
        }
    }
    Ok(CheckResult::new(
        "minak_bound",
        violations.is_empty(),
        format!("{} violations over {cases} (λ, k) pairs", violations.len()),
    ))
}

fn check_coarse_bounds(max_n: usize, cap: &Capacity) -> Result<CheckResult> {
    let mut violations = Vec::new();
    let mut cases = 0usize;
    for n in 2..=max_n {
        for lambda in enumerate_partitions_with(n, cap)? {
            for k in 1..=n {
                cases += 1;
                if !coarse_bounds_check(&lambda, n, k)?.passes() {
                    violations.push(format!("{lambda} k={k}"));
                }
            }
        }
    }
    Ok(CheckResult::new(
        "coarse_eigenvalue_bounds",
        violations.is_empty(),
        if violations.is_empty() {
            format!("0 violations over {cases} (λ, k) pairs")
        } else {
            violations.join("; ")
        },
    ))
}

fn check_kernels(kernel_n: usize, cap: &Capacity) -> Result<CheckResult> {
    let mut failures = Vec::new();
    for n in 2..=kernel_n {
        for k in 1..=n {
            let kern = build_kernel_with(&ShuffleSpec::kstar(n, k)?, cap)?;
            if !(kern.is_symmetric() && kern.is_row_stochastic()) {
                failures.push(format!("n={n} k={k}"));
            }
        }
    }
    Ok(CheckResult::new(
        "kernel_symmetric_stochastic",
        failures.is_empty(),
        if failures.is_empty() {
            format!("exact for n ≤ {kernel_n}, all k")
        } else {
            failures.join("; ")
        },
    ))
}

fn check_sandwich(kernel_n: usize, cap: &Capacity) -> Result<CheckResult> {
    let mut failures = Vec::new();
    let mut points = 0usize;
    for n in 5..=kernel_n {
        let t_max = 4 * cutoff_step(n, 1, 0.0);
        for k in 1..=n {
            let spec = ShuffleSpec::kstar(n, k)?;
            let exact = exact_tv_curve_from(&spec, 0, t_max, cap)?;
            let l2 = L2Series::new(&spectrum_kstar_with(n, k, cap)?)?;
            let lb = CharacterLowerBound::new(n, k)?;
            let mut prev_tv = f64::INFINITY;
            let mut prev_l2 = f64::INFINITY;
            for p in exact.points() {
                points += 1;
                let upper = l2.bound(p.t);
                let lower = lb.bound(p.t);
                let ok = lower <= p.value + 1e-12
                    && p.value <= upper + 1e-12
                    && p.value <= prev_tv + 1e-15
                    && upper <= prev_l2 * (1.0 + 1e-12);
                if !ok {
                    failures.push(format!(
                        "n={n} k={k} t={}: {lower} ≤ {} ≤ {upper}?",
                        p.t, p.value
                    ));
                    break;
                }
                prev_tv = p.value;
                prev_l2 = upper;
            }
        }
    }
    Ok(CheckResult::new(
        "mixing_sandwich",
        failures.is_empty(),
        if failures.is_empty() {
            format!(
                "lower ≤ exact ≤ ℓ² with monotone curves at {points} points, 5 ≤ n ≤ {kernel_n}"
            )
        } else {
            failures.join("; ")
        },
    ))
}

fn check_characters(kernel_n: usize) -> Result<CheckResult> {
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for n in 5..=kernel_n {
        for k in 1..=n {
            let spec = ShuffleSpec::kstar(n, k)?;
            for m in oracle_moment_series(&spec, 30)? {
                let e = character_expectations(n, k, m.t)?;
                let closed = [Some(e.trivial), e.standard, e.two_row, e.hook];
                for (c, o) in closed.iter().zip(&m.characters) {
                    let d = (c.unwrap() - o.unwrap()).abs();
                    worst = worst.max(d);
                }
                let d = (e.second_moment().unwrap() - m.fix_minus_one_squared).abs();
                worst = worst.max(d);
                if worst > 1e-9 {
                    failures.push(format!("n={n} k={k} t={} err={worst:e}", m.t));
                    break;
                }
            }
        }
    }
    Ok(CheckResult::new(
        "character_expectations_vs_oracle",
        failures.is_empty(),
        if failures.is_empty() {
            format!("four characters and E[(fix−1)²], 5 ≤ n ≤ {kernel_n}, t ≤ 30, max error {worst:.2e}")
        } else {
            failures.join("; ")
        },
    ))
}

fn check_step_law(kernel_n: usize, cap: &Capacity) -> Result<CheckResult> {
    let mut failures = Vec::new();
    let mut worst_p = 1.0f64;
    let trials = 200_000u64;
    for n in 3..=kernel_n.min(6) {
        for (idx, set) in [vec![n], (1..=n).collect::<Vec<_>>(), vec![2, n]]
            .into_iter()
            .enumerate()
        {
            let spec = ShuffleSpec::general(n, set)?;
            let kern = build_kernel_with(&spec, cap)?;
            let row = kernel_row(&kern, 0);
            let counts = sample_one_step(&spec, trials, 1000 + 10 * n as u64 + idx as u64)?;
            let mut stat = 0.0;
            let mut cells = 0usize;
            for (p, &c) in row.iter().zip(&counts) {
                if p.is_zero() {
                    if c != 0 {
                        failures.push(format!("n={n}: sample outside the kernel support"));
                    }
                    continue;
                }
                let e = p.to_f64().unwrap() * trials as f64;
                stat += (c as f64 - e).powi(2) / e;
                cells += 1;
            }
            let dist = ChiSquared::new((cells - 1) as f64).expect("positive degrees of freedom");
            let p_value = 1.0 - dist.cdf(stat);
            worst_p = worst_p.min(p_value);
            if p_value < 1e-3 {
                failures.push(format!("n={n} set #{idx}: p = {p_value:e}"));
            }
        }
    }
    Ok(CheckResult::new(
        "step_law_chi_square",
        failures.is_empty(),
        if failures.is_empty() {
            format!("smallest p-value {worst_p:.3}")
        } else {
            failures.join("; ")
        },
    ))
}

fn sorted_probabilities(d: &DistributionVector) -> Vec<f64> {
    let mut v = d.probabilities().to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Walks from two starts are translates of each other, so their sorted
/// probability vectors (and hence TV to uniform) agree exactly.
fn check_start_independence(kernel_n: usize, cap: &Capacity) -> Result<CheckResult> {
    let mut failures = Vec::new();
    let top = kernel_n.min(5);
    for n in 2..=top {
        let spec = ShuffleSpec::kstar(n, n.div_ceil(2))?;
        let kern = build_kernel_with(&spec, cap)?;
        let states: usize = (1..=n).product();
        let start = (states * 7 + 3) / 11 % states;
        let a = Walk::new(&kern, 0, 20)?;
        let b = Walk::new(&kern, start, 20)?;
        for (p, q) in a.zip(b) {
            if sorted_probabilities(&p) != sorted_probabilities(&q) {
                failures.push(format!("n={n} t={}", p.t()));
                break;
            }
        }
    }
    Ok(CheckResult::new(
        "start_independence",
        failures.is_empty(),
        if failures.is_empty() {
            format!("distributions from two starts agree up to relabelling, n ≤ {top}, t ≤ 20")
        } else {
            failures.join("; ")
        },
    ))
}

fn check_combinatorics(cap: &Capacity) -> Result<CheckResult> {
    let mut failures = Vec::new();
    for n in 0..=12usize {
        let s: BigUint = partitions(n)
            .map(|l| {
                let d = dim_syt(&l);
                &d * &d
            })
            .sum();
        if s != factorial(n) {
            failures.push(format!("Σd² ≠ {n}!"));
        }
    }
    for n in 1..=10usize {
        for lambda in enumerate_partitions_with(n, cap)? {
            let d = dim_syt(&lambda);
            for k in 0..=n {
                let s: BigUint = enumerate_subpartitions(&lambda, n - k)
                    .into_iter()
                    .map(|mu| {
                        let skew = SkewShape::new(lambda.clone(), mu.clone()).expect("μ ⊆ λ");
                        dim_syt(&mu) * dim_skew(&skew)
                    })
                    .sum();
                if s != d {
                    failures.push(format!("branching fails at {lambda}, k={k}"));
                }
            }
        }
    }
    if count_partitions(100) != BigUint::from(190_569_292u32) {
        failures.push("p(100) ≠ 190569292".to_string());
    }
    let hr = hardy_ramanujan_ratio(100);
    if !(hr > 0.9 && hr < 1.0) {
        failures.push(format!("Hardy–Ramanujan ratio {hr} at n = 100"));
    }
    Ok(CheckResult::new(
        "combinatorial_identities",
        failures.is_empty(),
        if failures.is_empty() {
            format!("Σd² = n! (n ≤ 12), branching (n ≤ 10), p(100), ratio {hr:.4}")
        } else {
            failures.join("; ")
        },
    ))
}

/// Runs every check. Fails with a capacity error when `max_n` exceeds the
/// oracle limit.
pub fn run_suite(opts: VerifyOptions, cap: &Capacity) -> Result<Vec<CheckResult>> {
    if opts.max_n < 2 {
        return Err(Error::invalid(format!(
            "verify needs n ≥ 2, got {}",
            opts.max_n
        )));
    }
    if opts.max_n > cap.max_oracle_n {
        return Err(Error::capacity(
            "verification sweep",
            format!("n = {}", opts.max_n),
            format!("n ≤ {}", cap.max_oracle_n),
        ));
    }
    let kernel_n = if opts.deep {
        opts.max_n
    } else {
        opts.max_n.min(6)
    };
    let dense_n = kernel_n.min(cap.max_dense_n);
    let exhaustive_n = opts.max_n.max(6);
    Ok(vec![
        check_kstar_spectra(dense_n, cap)?,
        check_general_spectra(dense_n, cap)?,
        check_moments(exhaustive_n, cap)?,
        check_extremality(exhaustive_n, cap)?,
        check_minak(exhaustive_n.max(12), cap)?,
        check_coarse_bounds(exhaustive_n, cap)?,
        check_kernels(kernel_n, cap)?,
        check_start_independence(kernel_n, cap)?,
        check_sandwich(kernel_n, cap)?,
        check_characters(kernel_n)?,
        check_step_law(kernel_n, cap)?,
        check_combinatorics(cap)?,
    ])
}
