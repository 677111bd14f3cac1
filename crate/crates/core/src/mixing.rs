//! Total-variation machinery: the ℓ² upper bound, cutoff times, the
//! second-moment lower bound built from four characters, the Poisson limit
//! profile and the spectral comparison against random transpositions.

use std::collections::BTreeMap;
use std::io::{self, Write};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::capacity::Capacity;
use crate::error::{Error, Result};
use crate::numeric::{
    binomial, derangements, factorial, ln_biguint, rational_to_f64, LogSum, LogValue,
};
use crate::partitions::{
    dim_skew, enumerate_partitions_with, enumerate_subpartitions, partitions, Partition, SkewShape,
};
use crate::spectrum::{kstar_records_for_shape, EigenvalueRecord, ShuffleSpec};

/// Default truncation tolerance for Poisson sums.
pub const DEFAULT_POISSON_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    L2Upper,
    ExactTv,
    LowerBound,
    ProfileComparison,
}

impl CurveKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CurveKind::L2Upper => "l2_upper",
            CurveKind::ExactTv => "exact_tv",
            CurveKind::LowerBound => "lower_bound",
            CurveKind::ProfileComparison => "profile_comparison",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub t: u64,
    pub value: f64,
}

/// A sequence of `(t, value)` points of one kind, with `t` strictly
/// increasing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixingCurve {
    kind: CurveKind,
    points: Vec<CurvePoint>,
}

impl MixingCurve {
    pub fn new(kind: CurveKind, points: Vec<CurvePoint>) -> Result<Self> {
        for w in points.windows(2) {
            if w[1].t <= w[0].t {
                return Err(Error::invalid(format!(
                    "curve times must increase strictly, got {} then {}",
                    w[0].t, w[1].t
                )));
            }
        }
        for p in &points {
            if p.value.is_nan() || p.value < 0.0 {
                return Err(Error::invalid(format!(
                    "{} value {} at t={} is not a nonnegative number",
                    kind.as_str(),
                    p.value,
                    p.t
                )));
            }
            if kind == CurveKind::ExactTv && p.value > 1.0 + 1e-12 {
                return Err(Error::invalid(format!(
                    "total variation {} at t={} exceeds 1",
                    p.value, p.t
                )));
            }
        }
        Ok(MixingCurve { kind, points })
    }

    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn points(&self) -> &[CurvePoint] {
        &self.points
    }

    pub fn value_at(&self, t: u64) -> Option<f64> {
        self.points
            .binary_search_by_key(&t, |p| p.t)
            .ok()
            .map(|i| self.points[i].value)
    }
}

// ---------------------------------------------------------------------------
// ℓ² bound

/// The non-unit part of a spectrum, grouped by value, ready for evaluating
/// `Σ mult·value^{2t}` at many `t`.
#[derive(Debug, Clone)]
pub struct L2Series {
    n: usize,
    /// `(ln multiplicity, value)`.
    terms: Vec<(f64, LogValue)>,
}

fn grouped_terms(groups: BTreeMap<BigRational, BigUint>) -> Vec<(f64, LogValue)> {
    groups
        .into_iter()
        .map(|(v, m)| (ln_biguint(&m), LogValue::from_f64(rational_to_f64(&v))))
        .collect()
}

fn ln_series_sum(terms: &[(f64, LogValue)], t: u64) -> LogSum {
    let mut sum = LogSum::default();
    for &(ln_m, v) in terms {
        let p = v.pow(2 * t);
        if p.sign != 0 {
            sum.add_ln(ln_m + p.ln_abs);
        }
    }
    sum
}

fn half_sqrt_exp(ln_sum: f64) -> f64 {
    0.5 * (0.5 * ln_sum).exp()
}

impl L2Series {
    /// Fails unless the records form a complete spectrum of one deck size
    /// (total multiplicity `n!`).
    pub fn new(records: &[EigenvalueRecord]) -> Result<Self> {
        let first = records
            .first()
            .ok_or_else(|| Error::invalid("empty spectrum"))?;
        let n = first.label.shape().size();
        let mut total = BigUint::zero();
        let mut groups: BTreeMap<BigRational, BigUint> = BTreeMap::new();
        let one = BigRational::one();
        for r in records {
            if r.label.shape().size() != n {
                return Err(Error::invalid("spectrum mixes deck sizes"));
            }
            total += &r.multiplicity;
            if r.value != one {
                *groups.entry(r.value.clone()).or_default() += &r.multiplicity;
            }
        }
        let expected = factorial(n);
        if total != expected {
            return Err(Error::invalid(format!(
                "incomplete spectrum: total multiplicity {total}, expected {n}! = {expected}"
            )));
        }
        Ok(L2Series {
            n,
            terms: grouped_terms(groups),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `ln Σ_{value≠1} mult·value^{2t}`.
    pub fn ln_sum(&self, t: u64) -> f64 {
        ln_series_sum(&self.terms, t).ln()
    }

    /// `(1/2)·(Σ_{value≠1} mult·value^{2t})^{1/2}`.
    pub fn bound(&self, t: u64) -> f64 {
        half_sqrt_exp(self.ln_sum(t))
    }
}

/// `(1/2)·(Σ_{value≠1} multiplicity·value^{2t})^{1/2}` over a complete
/// spectrum.
pub fn l2_upper_bound(spectrum: &[EigenvalueRecord], t: u64) -> Result<f64> {
    Ok(L2Series::new(spectrum)?.bound(t))
}

/// A certified ℓ² bound for k-star shuffles too large to enumerate.
///
/// Shapes whose first row or first column has at least `n − depth` cells are
/// summed exactly (the column-heavy ones through `eig(λ′, μ′) = 2/n −
/// eig(λ, μ)`). Every other shape has `h = max(λ₁, λ′₁) < n − depth`, every
/// eigenvalue it carries satisfies `|eig| ≤ h/n`, and the shapes with a given
/// `h` carry total multiplicity at most `2·min(n!, C(n,h)²·(n−h)!)`; the
/// remainder is bounded by those terms.
#[derive(Debug, Clone)]
pub struct TruncatedL2 {
    n: usize,
    k: usize,
    depth: usize,
    exact: Vec<(f64, LogValue)>,
    /// `(ln weight, ln(h/n))`.
    tail: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct L2Evaluation {
    /// `ln` of the exactly summed part.
    pub ln_exact: f64,
    /// `ln` of the bound on the remainder.
    pub ln_tail: f64,
    /// `(1/2)·(exact + tail)^{1/2}`.
    pub bound: f64,
}

impl TruncatedL2 {
    pub fn new(n: usize, k: usize, depth: usize) -> Result<Self> {
        ShuffleSpec::kstar(n, k)?;
        let depth = depth.min(n - 1);
        let threshold = n - depth;
        let two_over_n = BigRational::new(BigInt::from(2), BigInt::from(n));
        let one = BigRational::one();
        let mut shapes = Vec::new();
        for j in 0..=depth {
            for nu in partitions(j) {
                if nu.first_part() <= n - j {
                    let mut parts = vec![n - j];
                    parts.extend_from_slice(nu.parts());
                    shapes.push(Partition::new(parts)?);
                }
            }
        }
        let per_shape: Vec<Vec<(BigRational, BigUint)>> = shapes
            .par_iter()
            .map(|lambda| {
                let mirrored = lambda.len() < threshold;
                let mut out = Vec::new();
                for r in kstar_records_for_shape(lambda, k) {
                    if mirrored {
                        out.push((&two_over_n - &r.value, r.multiplicity.clone()));
                    }
                    if r.value != one {
                        out.push((r.value, r.multiplicity));
                    }
                }
                out
            })
            .collect();
        let mut groups: BTreeMap<BigRational, BigUint> = BTreeMap::new();
        for (v, m) in per_shape.into_iter().flatten() {
            *groups.entry(v).or_default() += m;
        }
        let ln_fact = ln_biguint(&factorial(n));
        let tail = (1..threshold)
            .map(|h| {
                let c = binomial(n, h);
                let w = ln_biguint(&(&c * &c * factorial(n - h))).min(ln_fact);
                (std::f64::consts::LN_2 + w, (h as f64 / n as f64).ln())
            })
            .collect();
        Ok(TruncatedL2 {
            n,
            k,
            depth,
            exact: grouped_terms(groups),
            tail,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn evaluate(&self, t: u64) -> L2Evaluation {
        let exact = ln_series_sum(&self.exact, t);
        let mut tail = LogSum::default();
        for &(ln_w, ln_r) in &self.tail {
            tail.add_ln(ln_w + 2.0 * t as f64 * ln_r);
        }
        let mut total = exact;
        total.merge(tail);
        L2Evaluation {
            ln_exact: exact.ln(),
            ln_tail: tail.ln(),
            bound: half_sqrt_exp(total.ln()),
        }
    }

    pub fn bound(&self, t: u64) -> f64 {
        self.evaluate(t).bound
    }
}

// ---------------------------------------------------------------------------
// Cutoff times

fn check_nk(n: usize, k: usize) {
    assert!(
        n >= 2 && k >= 1 && k <= n,
        "need n ≥ 2 and 1 ≤ k ≤ n, got n={n}, k={k}"
    );
}

/// `(2n − (k+1))/(2(n−1)) · n`, the window scale of the k-star shuffle.
pub fn cutoff_window(n: usize, k: usize) -> f64 {
    check_nk(n, k);
    (2 * n - (k + 1)) as f64 / (2 * (n - 1)) as f64 * n as f64
}

/// `t_{n,k}(c) = (2n − (k+1))/(2(n−1)) · n · (log n + c)`.
pub fn cutoff_time(n: usize, k: usize, c: f64) -> f64 {
    cutoff_window(n, k) * ((n as f64).ln() + c)
}

/// `⌈t_{n,k}(c)⌉`, clamped at zero.
pub fn cutoff_step(n: usize, k: usize, c: f64) -> u64 {
    let t = cutoff_time(n, k, c);
    if t <= 0.0 {
        0
    } else {
        t.ceil() as u64
    }
}

/// The `c` with `t_{n,k}(c) = t`.
pub fn cutoff_parameter(n: usize, k: usize, t: f64) -> f64 {
    t / cutoff_window(n, k) - (n as f64).ln()
}

// ---------------------------------------------------------------------------
// Character expectations

/// `E_{P^t(id,·)}(χ)` for the characters of `(n)`, `(n−1,1)`, `(n−2,2)` and
/// `(n−2,1,1)`. Shapes that do not exist for the deck size are `None`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CharacterExpectations {
    pub trivial: f64,
    pub standard: Option<f64>,
    pub two_row: Option<f64>,
    pub hook: Option<f64>,
}

impl CharacterExpectations {
    /// `E[(fix − 1)²] = E₁ + E₂ + E₃ + E₄`.
    pub fn second_moment(&self) -> Option<f64> {
        Some(self.trivial + self.standard? + self.two_row? + self.hook?)
    }

    /// `Var(fix − 1)`, clamped at zero against rounding.
    pub fn variance(&self) -> Option<f64> {
        let e2 = self.standard?;
        Some((self.second_moment()? - e2 * e2).max(0.0))
    }
}

/// `1 − ((n−1)/n) · x / (k(n − (k+1)/2))`.
fn character_base(n: usize, k: usize, x: i64) -> f64 {
    let (n, k) = (n as i64, k as i64);
    let q = BigRational::new(
        BigInt::from(n * k * (2 * n - k - 1) - 2 * (n - 1) * x),
        BigInt::from(n * k * (2 * n - k - 1)),
    );
    rational_to_f64(&q)
}

fn powu(base: f64, t: u64) -> f64 {
    match i32::try_from(t) {
        Ok(t) => base.powi(t),
        Err(_) => LogValue::from_f64(base).pow(t).to_f64(),
    }
}

fn weighted_sum(n: usize, k: usize, t: u64, terms: &[(i64, i64)]) -> f64 {
    terms
        .iter()
        .map(|&(x, w)| w as f64 * powu(character_base(n, k, x), t))
        .sum()
}

/// Closed-form expectations of the four characters after `t` steps of the
/// k-star shuffle from the identity.
pub fn character_expectations(n: usize, k: usize, t: u64) -> Result<CharacterExpectations> {
    ShuffleSpec::kstar(n, k)?;
    let (ni, ki) = (n as i64, k as i64);
    let choose2 = |a: i64| a * (a - 1) / 2;
    let standard = weighted_sum(n, k, t, &[(ni, ki), (ki, ni - 1 - ki)]);
    let hook = (n >= 3).then(|| {
        weighted_sum(
            n,
            k,
            t,
            &[
                (2 * ni, choose2(ki)),
                (ki + ni, ki * (ni - 1 - ki)),
                (2 * ki, choose2(ni - 1 - ki)),
            ],
        )
    });
    let two_row = (n >= 4).then(|| {
        weighted_sum(
            n,
            k,
            t,
            &[
                (2 * (ni - 1), choose2(ki)),
                (ki + ni - 2, ki * (ni - 1 - ki)),
                (2 * ki, (ni - ki) * (ni - 3 - ki) / 2),
            ],
        )
    });
    Ok(CharacterExpectations {
        trivial: 1.0,
        standard: Some(standard),
        two_row,
        hook,
    })
}

/// `E_{P^t(id,·)}(χ_λ) = Σ_μ d_μ·d_{λ/μ}·eig(λ, μ)^t` for any shape,
/// summed over the k-star eigenvalues of `λ`.
pub fn character_expectation(lambda: &Partition, k: usize, t: u64) -> Result<f64> {
    let n = lambda.size();
    ShuffleSpec::kstar(n, k)?;
    let d_lambda = crate::partitions::dim_syt(lambda);
    Ok(kstar_records_for_shape(lambda, k)
        .into_iter()
        .map(|r| {
            let w = (r.multiplicity / &d_lambda)
                .to_f64()
                .unwrap_or(f64::INFINITY);
            w * powu(rational_to_f64(&r.value), t)
        })
        .sum())
}

// ---------------------------------------------------------------------------
// Lower bounds

/// `l = e^{−c}/2`.
pub fn default_threshold(c: f64) -> f64 {
    (-c).exp() / 2.0
}

fn statistic(n: usize, k: usize, t: u64) -> Result<(f64, f64)> {
    let e = character_expectations(n, k, t)?;
    match (e.standard, e.variance()) {
        (Some(mean), Some(var)) => Ok((mean, var)),
        _ => Err(Error::invalid(format!(
            "the fixed-point variance needs n ≥ 4, got n={n}"
        ))),
    }
}

/// `1 − 1/(e·l) − Var/(E₂ − l)²`, with `E₂` and `Var` the mean and variance
/// of `fix − 1` after `t` steps. May be negative.
pub fn variance_lower_bound(n: usize, k: usize, t: u64, l: f64) -> Result<f64> {
    let (mean, var) = statistic(n, k, t)?;
    if l.is_nan() || l <= 0.0 {
        return Err(Error::Degenerate(format!(
            "threshold l = {l} must be positive"
        )));
    }
    if mean <= l {
        return Err(Error::Degenerate(format!(
            "threshold l = {l} is not below E₂ = {mean}"
        )));
    }
    Ok(1.0 - 1.0 / (std::f64::consts::E * l) - var / ((mean - l) * (mean - l)))
}

/// Law of the number of fixed points of a uniform permutation:
/// `P(fix = i) = D(n−i)/((n−i)!·i!)`.
pub fn uniform_fixed_point_pmf(n: usize) -> Vec<f64> {
    let mut inv_fact = 1.0f64;
    (0..=n)
        .map(|i| {
            if i > 0 {
                inv_fact /= i as f64;
            }
            let m = n - i;
            let r = BigRational::new(BigInt::from(derangements(m)), BigInt::from(factorial(m)));
            rational_to_f64(&r) * inv_fact
        })
        .collect()
}

/// The second-moment lower bound with the uniform mass of
/// `F_l = {|fix − 1| ≤ l}` computed exactly.
#[derive(Debug, Clone)]
pub struct CharacterLowerBound {
    n: usize,
    k: usize,
    /// `cumulative[i] = P_U(fix < i)`.
    cumulative: Vec<f64>,
}

impl CharacterLowerBound {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        ShuffleSpec::kstar(n, k)?;
        let mut cumulative = vec![0.0];
        let mut acc = 0.0;
        for p in uniform_fixed_point_pmf(n) {
            acc += p;
            cumulative.push(acc);
        }
        Ok(CharacterLowerBound { n, k, cumulative })
    }

    /// `U(|fix − 1| ≤ l)` for integer `l ≥ 0`.
    pub fn uniform_mass(&self, l: usize) -> f64 {
        let lo = 1usize.saturating_sub(l);
        let hi = (1 + l).min(self.n);
        self.cumulative[hi + 1] - self.cumulative[lo]
    }

    /// `U(F_l) − Var/(E₂ − l)²`, for integer `0 ≤ l < E₂`.
    pub fn at_threshold(&self, t: u64, l: usize) -> Result<f64> {
        let (mean, var) = statistic(self.n, self.k, t)?;
        if l as f64 >= mean {
            return Err(Error::Degenerate(format!(
                "threshold l = {l} is not below E₂ = {mean}"
            )));
        }
        let gap = mean - l as f64;
        Ok(self.uniform_mass(l) - var / (gap * gap))
    }

    /// The best bound over integer thresholds, clamped at zero. `U(F_l)` only
    /// changes at integers, so fractional thresholds never do better.
    pub fn bound(&self, t: u64) -> f64 {
        if self.n < 4 {
            return 0.0;
        }
        let (mean, var) = match statistic(self.n, self.k, t) {
            Ok(s) => s,
            Err(_) => return 0.0,
        };
        let mut best = 0.0f64;
        let mut l = 0usize;
        while (l as f64) < mean && l <= self.n {
            let gap = mean - l as f64;
            best = best.max(self.uniform_mass(l) - var / (gap * gap));
            l += 1;
        }
        best
    }
}

/// Convenience wrapper around [`CharacterLowerBound::bound`].
pub fn character_lower_bound(n: usize, k: usize, t: u64) -> Result<f64> {
    Ok(CharacterLowerBound::new(n, k)?.bound(t))
}

// ---------------------------------------------------------------------------
// Poisson profile

fn ln_poisson_pmf(a: f64, j: u64) -> f64 {
    if a == 0.0 {
        return if j == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    -a + j as f64 * a.ln() - ln_gamma(j as f64 + 1.0)
}

/// Chernoff exponent `−a·h((x − a)/a)` with `h(δ) = (1+δ)·ln(1+δ) − δ`,
/// bounding `ln P(X ≥ x)` for `x ≥ a` and `ln P(X ≤ x)` for `x ≤ a`.
fn chernoff(a: f64, x: f64) -> f64 {
    if x == 0.0 {
        return -a;
    }
    let d = (x - a) / a;
    let h = if d.abs() < 1e-3 {
        d * d * (0.5 - d / 6.0 + d * d / 12.0 - d * d * d / 20.0)
    } else {
        (1.0 + d) * d.ln_1p() - d
    };
    -a * h
}

/// Indices outside `[lo, hi]` carry Poisson(a) mass below `exp(ln_eps)` on
/// each side.
fn poisson_window(a: f64, ln_eps: f64) -> (u64, u64) {
    if a == 0.0 {
        return (0, 0);
    }
    // hi: first x ≥ a with P(X ≥ x) < ε.
    let mut step = a.sqrt().max(1.0);
    let mut hi = a.ceil();
    while chernoff(a, hi) >= ln_eps {
        hi = (a.ceil() + step).ceil();
        step *= 2.0;
    }
    let (mut good, mut bad) = (hi, a.ceil());
    for _ in 0..200 {
        if good - bad <= 1.0 {
            break;
        }
        let mid = ((good + bad) / 2.0).floor();
        if chernoff(a, mid) < ln_eps {
            good = mid;
        } else {
            bad = mid;
        }
    }
    let hi = good;
    // lo: last x ≤ a with P(X ≤ x) < ε, or 0.
    let lo = if chernoff(a, 0.0) >= ln_eps {
        0.0
    } else {
        let (mut good, mut bad) = (0.0f64, a.floor());
        if chernoff(a, bad) < ln_eps {
            good = bad;
        } else {
            for _ in 0..200 {
                if bad - good <= 1.0 {
                    break;
                }
                let mid = ((good + bad) / 2.0).floor();
                if chernoff(a, mid) < ln_eps {
                    good = mid;
                } else {
                    bad = mid;
                }
            }
        }
        good
    };
    (lo as u64, hi as u64)
}

/// `d_TV(Poisson(a), Poisson(b)) = (1/2)·Σ_j |pmf_a(j) − pmf_b(j)|`,
/// evaluated as `1 − Σ_j min(pmf_a(j), pmf_b(j))` over the indices where
/// both laws keep more than `tol/4` of tail mass on either side.
pub fn poisson_tv(a: f64, b: f64, tol: f64) -> f64 {
    assert!(
        a >= 0.0 && b >= 0.0 && tol > 0.0,
        "need a, b ≥ 0 and tol > 0"
    );
    if a == b {
        return 0.0;
    }
    if !a.is_finite() || !b.is_finite() {
        return 1.0;
    }
    let ln_eps = (tol / 4.0).ln();
    let (lo_a, hi_a) = poisson_window(a, ln_eps);
    let (lo_b, hi_b) = poisson_window(b, ln_eps);
    let (lo, hi) = (lo_a.max(lo_b), hi_a.min(hi_b));
    let mut overlap = 0.0;
    let mut j = lo;
    while j <= hi {
        overlap += ln_poisson_pmf(a, j).min(ln_poisson_pmf(b, j)).exp();
        j += 1;
    }
    (1.0 - overlap).clamp(0.0, 1.0)
}

/// `d_TV(Poisson(1 + e^{−c}), Poisson(1))`.
pub fn limit_profile(c: f64) -> f64 {
    poisson_tv(1.0 + (-c).exp(), 1.0, DEFAULT_POISSON_TOL)
}

// ---------------------------------------------------------------------------
// Comparison with random transpositions

fn ln_dim(shape: &Partition) -> f64 {
    ln_gamma(shape.size() as f64 + 1.0) - shape.hook_lengths().map(|h| (h as f64).ln()).sum::<f64>()
}

fn ln_skew_dim(lambda: &Partition, mu: &Partition, ln_d_lambda: f64) -> f64 {
    let cells = lambda.size() - mu.size();
    if cells <= 1 {
        0.0
    } else if mu.is_empty() || mu.parts() == [1] {
        ln_d_lambda
    } else {
        let skew = SkewShape::new(lambda.clone(), mu.clone()).expect("μ ⊆ λ");
        ln_biguint(&dim_skew(&skew))
    }
}

/// `(1/2)·(Σ_{(λ,μ)≠trivial} d_λ·d_μ·d_{λ/μ}·(s_λ^{t₁} − s_{λμ}^{t₂})²)^{1/2}`
/// with `s_λ` the random-transpositions eigenvalue, `s_{λμ}` the k-star one,
/// `t₁ = ⌈t_{n,n}(c)⌉` and `t₂ = ⌈t_{n,k}(c)⌉`.
pub fn profile_comparison_bound(n: usize, k: usize, c: f64) -> Result<f64> {
    profile_comparison_bound_with(n, k, c, &Capacity::default())
}

pub fn profile_comparison_bound_with(n: usize, k: usize, c: f64, cap: &Capacity) -> Result<f64> {
    ShuffleSpec::kstar(n, k)?;
    let shapes = enumerate_partitions_with(n, cap)?;
    let t1 = cutoff_step(n, n, c);
    let t2 = cutoff_step(n, k, c);
    let (ni, ki) = (n as i64, k as i64);
    let kden = ki * (2 * ni - ki - 1);
    let per_shape: Vec<LogSum> = shapes
        .par_iter()
        .map(|lambda| {
            let diag = lambda.diag_index();
            let s = ((ni + 2 * diag) as f64) / ((ni * ni) as f64);
            let s_pow = LogValue::from_f64(s).pow(t1);
            let ln_dl = ln_dim(lambda);
            let mut sum = LogSum::default();
            for mu in enumerate_subpartitions(lambda, n - k) {
                if lambda.len() == 1 {
                    continue;
                }
                let num = kden + 2 * (ni - 1) * (diag - mu.diag_index());
                let q = num as f64 / (ni * kden) as f64;
                let d = s_pow - LogValue::from_f64(q).pow(t2);
                if d.sign != 0 {
                    let ln_mult = ln_dl + ln_dim(&mu) + ln_skew_dim(lambda, &mu, ln_dl);
                    sum.add_ln(ln_mult + 2.0 * d.ln_abs);
                }
            }
            sum
        })
        .collect();
    let mut total = LogSum::default();
    for s in per_shape {
        total.merge(s);
    }
    Ok(if total.ln() == f64::NEG_INFINITY {
        0.0
    } else {
        half_sqrt_exp(total.ln())
    })
}

// ---------------------------------------------------------------------------
// Curves and tabular output

/// The ℓ² bound at each requested step.
pub fn l2_curve(series: &L2Series, ts: &[u64]) -> Result<MixingCurve> {
    let points = ts
        .par_iter()
        .map(|&t| CurvePoint {
            t,
            value: series.bound(t),
        })
        .collect();
    MixingCurve::new(CurveKind::L2Upper, points)
}

/// The optimized second-moment lower bound at each requested step.
pub fn lower_bound_curve(n: usize, k: usize, ts: &[u64]) -> Result<MixingCurve> {
    let lb = CharacterLowerBound::new(n, k)?;
    let points = ts
        .par_iter()
        .map(|&t| CurvePoint {
            t,
            value: lb.bound(t),
        })
        .collect();
    MixingCurve::new(CurveKind::LowerBound, points)
}

/// A vertical marker at `⌈t_{n,k}(c)⌉`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CutoffMarker {
    pub c: f64,
    pub t: u64,
    pub time: f64,
}

pub fn cutoff_markers(n: usize, k: usize, cs: &[f64]) -> Vec<CutoffMarker> {
    cs.iter()
        .map(|&c| CutoffMarker {
            c,
            t: cutoff_step(n, k, c),
            time: cutoff_time(n, k, c),
        })
        .collect()
}

/// One output row: `t, value, kind, n, k, c`. Marker rows carry kind
/// `cutoff_marker`, the real cutoff time as value and their `c`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveRow {
    pub t: u64,
    pub value: f64,
    pub kind: String,
    pub n: usize,
    pub k: String,
    pub c: Option<f64>,
}

/// Flattens curves and markers into rows, curves first in the given order.
pub fn curve_rows(
    n: usize,
    k: &str,
    curves: &[MixingCurve],
    markers: &[CutoffMarker],
) -> Vec<CurveRow> {
    let mut rows = Vec::new();
    for curve in curves {
        for p in curve.points() {
            rows.push(CurveRow {
                t: p.t,
                value: p.value,
                kind: curve.kind().as_str().to_string(),
                n,
                k: k.to_string(),
                c: None,
            });
        }
    }
    for m in markers {
        rows.push(CurveRow {
            t: m.t,
            value: m.time,
            kind: "cutoff_marker".to_string(),
            n,
            k: k.to_string(),
            c: Some(m.c),
        });
    }
    rows
}

pub fn write_rows_csv<W: Write>(rows: &[CurveRow], mut out: W) -> io::Result<()> {
    writeln!(out, "t,value,kind,n,k,c")?;
    for r in rows {
        let c = r.c.map(|c| format!("{c:?}")).unwrap_or_default();
        writeln!(
            out,
            "{},{:?},{},{},{},{}",
            r.t, r.value, r.kind, r.n, r.k, c
        )?;
    }
    Ok(())
}

pub fn write_rows_json<W: Write>(rows: &[CurveRow], mut out: W) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut out, rows)?;
    writeln!(out)
}
