//! Closed-form spectra of the Jucys–Murphy transposition shuffles.
//!
//! For an active set `A`, the eigenvalue attached to a standard Young
//! tableau `S` of shape `λ ⊢ n` is
//!
//! ```text
//! eig(S) = 1/n + (n−1)/(n·|T_A|) · Σ_{v ∈ A} content(v in S)
//! ```
//!
//! and each tableau contributes `d_λ` copies. For the k-star shuffle the
//! value depends only on the pair `(λ, μ)` obtained by deleting the cells of
//! `n−k+1, …, n`, with multiplicity `d_λ·d_μ·d_{λ/μ}`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::io::{self, Write};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::capacity::Capacity;
use crate::error::{Error, Result};
use crate::numeric::factorial;
use crate::partitions::{
    count_partitions, dim_skew, dim_syt, enumerate_partitions_with, enumerate_subpartitions,
    Partition, SkewShape,
};
use crate::tableaux::{
    column_insertion_tableau, enumerate_syt_with, row_insertion_tableau, StandardYoungTableau,
};

/// How the active set is given.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShuffleMode {
    /// An explicit subset of `{1, …, n}`.
    GeneralSet(BTreeSet<usize>),
    /// `A = {n−k+1, …, n}`.
    KStar(usize),
}

/// Deck size plus active set; determines `T_A` and the kernel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShuffleSpec {
    n: usize,
    mode: ShuffleMode,
}

impl ShuffleSpec {
    pub fn kstar(n: usize, k: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!(
                "deck size must be at least 2, got {n}"
            )));
        }
        if k == 0 || k > n {
            return Err(Error::invalid(format!("k must lie in 1..={n}, got {k}")));
        }
        Ok(ShuffleSpec {
            n,
            mode: ShuffleMode::KStar(k),
        })
    }

    /// An arbitrary active set. The element 1 is accepted and contributes no
    /// transpositions.
    pub fn general(n: usize, set: impl IntoIterator<Item = usize>) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!(
                "deck size must be at least 2, got {n}"
            )));
        }
        let set: BTreeSet<usize> = set.into_iter().collect();
        if let Some(&bad) = set.iter().find(|&&j| j == 0 || j > n) {
            return Err(Error::invalid(format!(
                "active index {bad} outside 1..={n}"
            )));
        }
        let spec = ShuffleSpec {
            n,
            mode: ShuffleMode::GeneralSet(set),
        };
        if spec.transposition_count() == 0 {
            return Err(Error::Degenerate(
                "active set has no transpositions (T_A is empty)".into(),
            ));
        }
        Ok(spec)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> &ShuffleMode {
        &self.mode
    }

    /// `Some(k)` for k-star specs.
    pub fn k(&self) -> Option<usize> {
        match self.mode {
            ShuffleMode::KStar(k) => Some(k),
            ShuffleMode::GeneralSet(_) => None,
        }
    }

    pub fn active_set(&self) -> BTreeSet<usize> {
        match &self.mode {
            ShuffleMode::GeneralSet(a) => a.clone(),
            ShuffleMode::KStar(k) => (self.n - k + 1..=self.n).collect(),
        }
    }

    /// The same shuffle with its active set spelled out.
    pub fn to_general(&self) -> ShuffleSpec {
        ShuffleSpec {
            n: self.n,
            mode: ShuffleMode::GeneralSet(self.active_set()),
        }
    }

    /// `|T_A| = Σ_{j ∈ A} (j − 1)`.
    pub fn transposition_count(&self) -> u64 {
        match &self.mode {
            ShuffleMode::GeneralSet(a) => a.iter().map(|&j| j as u64 - 1).sum(),
            ShuffleMode::KStar(k) => {
                let (n, k) = (self.n as u64, *k as u64);
                k * (2 * n - k - 1) / 2
            }
        }
    }

    /// The moves `(i, j)`, 1-based with `i < j ∈ A`, ordered by `j` then `i`.
    pub fn transpositions(&self) -> Vec<(usize, usize)> {
        self.active_set()
            .into_iter()
            .flat_map(|j| (1..j).map(move |i| (i, j)))
            .collect()
    }

    /// `T_A` generates `S_n` exactly when `n ∈ A`; otherwise card `n` never
    /// moves and total variation to uniform does not tend to zero.
    pub fn is_irreducible(&self) -> bool {
        self.active_set().contains(&self.n)
    }

    pub fn hold_probability(&self) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::from(self.n))
    }

    /// Probability of each individual transposition, `(n−1)/(n·|T_A|)`.
    pub fn move_probability(&self) -> BigRational {
        BigRational::new(
            BigInt::from(self.n - 1),
            BigInt::from(self.n as u64 * self.transposition_count()),
        )
    }
}

/// Eigenvalue label: a tableau for general sets, a pair `(λ, μ)` for k-star.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Pair { lambda: Partition, mu: Partition },
    Tableau(StandardYoungTableau),
}

impl Label {
    pub fn shape(&self) -> &Partition {
        match self {
            Label::Pair { lambda, .. } => lambda,
            Label::Tableau(t) => t.shape(),
        }
    }
}

impl Ord for Label {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Label::Pair { lambda: a, mu: b }, Label::Pair { lambda: c, mu: d }) => {
                a.cmp(c).then_with(|| b.cmp(d))
            }
            (Label::Tableau(s), Label::Tableau(t)) => s.cmp(t),
            (Label::Pair { .. }, Label::Tableau(_)) => Ordering::Less,
            (Label::Tableau(_), Label::Pair { .. }) => Ordering::Greater,
        }
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenvalueRecord {
    pub value: BigRational,
    pub multiplicity: BigUint,
    pub label: Label,
}

fn sort_records(records: &mut [EigenvalueRecord]) {
    records.sort_by(|a, b| b.value.cmp(&a.value).then_with(|| a.label.cmp(&b.label)));
}

/// `(n−1)/(n·|T_A|)`, the coefficient in front of the content sum.
fn content_coefficient(n: usize, t_a: u64) -> BigRational {
    BigRational::new(BigInt::from(n - 1), BigInt::from(n as u64 * t_a))
}

fn from_content_sum(n: usize, t_a: u64, contents: i64) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(n))
        + content_coefficient(n, t_a) * BigRational::from_integer(BigInt::from(contents))
}

/// Eigenvalue of the general shuffle at tableau `S`.
pub fn eig_general(tableau: &StandardYoungTableau, spec: &ShuffleSpec) -> Result<BigRational> {
    let n = spec.n();
    if tableau.size() != n {
        return Err(Error::invalid(format!(
            "tableau of size {} for a deck of {n}",
            tableau.size()
        )));
    }
    let contents: i64 = spec
        .active_set()
        .into_iter()
        .map(|v| tableau.content_of(v))
        .sum();
    Ok(from_content_sum(n, spec.transposition_count(), contents))
}

fn kstar_t_a(n: usize, k: usize) -> u64 {
    (k * (2 * n - k - 1) / 2) as u64
}

/// `eig(λ, μ) = 1/n + 2(n−1)/(n·k·(2n−k−1)) · (Diag λ − Diag μ)`.
pub fn eig_kstar(lambda: &Partition, mu: &Partition, n: usize, k: usize) -> Result<BigRational> {
    if n < 2 || k == 0 || k > n {
        return Err(Error::invalid(format!(
            "need n ≥ 2 and 1 ≤ k ≤ n, got n={n}, k={k}"
        )));
    }
    if lambda.size() != n || mu.size() + k != n {
        return Err(Error::invalid(format!(
            "need λ ⊢ {n} and μ ⊢ {}, got {lambda} and {mu}",
            n - k
        )));
    }
    if !lambda.contains(mu) {
        return Err(Error::invalid(format!("{mu} is not contained in {lambda}")));
    }
    Ok(from_content_sum(
        n,
        kstar_t_a(n, k),
        lambda.diag_index() - mu.diag_index(),
    ))
}

/// Pairs `(λ, μ)` of the k-star spectrum with value and multiplicity.
pub fn spectrum_kstar(n: usize, k: usize) -> Result<Vec<EigenvalueRecord>> {
    spectrum_kstar_with(n, k, &Capacity::default())
}

pub fn spectrum_kstar_with(n: usize, k: usize, cap: &Capacity) -> Result<Vec<EigenvalueRecord>> {
    ShuffleSpec::kstar(n, k)?;
    let shapes = enumerate_partitions_with(n, cap)?;
    let mut records: Vec<EigenvalueRecord> = shapes
        .par_iter()
        .flat_map_iter(|lambda| kstar_records_for_shape(lambda, k))
        .collect();
    sort_records(&mut records);
    Ok(records)
}

/// The k-star records sharing outer shape `λ`.
pub fn kstar_records_for_shape(lambda: &Partition, k: usize) -> Vec<EigenvalueRecord> {
    let n = lambda.size();
    let d_lambda = dim_syt(lambda);
    enumerate_subpartitions(lambda, n - k)
        .into_iter()
        .map(|mu| {
            let skew = SkewShape::new(lambda.clone(), mu.clone()).expect("μ ⊆ λ");
            let multiplicity = &d_lambda * dim_syt(&mu) * dim_skew(&skew);
            let value = from_content_sum(n, kstar_t_a(n, k), lambda.diag_index() - mu.diag_index());
            EigenvalueRecord {
                value,
                multiplicity,
                label: Label::Pair {
                    lambda: lambda.clone(),
                    mu,
                },
            }
        })
        .collect()
}

/// One record per standard Young tableau, each with multiplicity `d_λ`.
pub fn spectrum_general(spec: &ShuffleSpec) -> Result<Vec<EigenvalueRecord>> {
    spectrum_general_with(spec, &Capacity::default())
}

pub fn spectrum_general_with(spec: &ShuffleSpec, cap: &Capacity) -> Result<Vec<EigenvalueRecord>> {
    let n = spec.n();
    if n > cap.max_partition_n || count_partitions(n) > BigUint::from(cap.max_partitions) {
        return Err(Error::capacity(
            "partitions for the tableau spectrum",
            n,
            cap.max_partition_n,
        ));
    }
    let shapes = enumerate_partitions_with(n, cap)?;
    let total: BigUint = shapes.iter().map(dim_syt).sum();
    if total > BigUint::from(cap.max_syt) {
        return Err(Error::capacity(
            "tableaux in the general spectrum",
            total,
            cap.max_syt,
        ));
    }
    let unlimited = Capacity::unlimited();
    let per_shape: Vec<Vec<EigenvalueRecord>> = shapes
        .par_iter()
        .map(|lambda| {
            let d = dim_syt(lambda);
            enumerate_syt_with(lambda, &unlimited)
                .expect("total already checked")
                .map(|t| {
                    let value = eig_general(&t, spec).expect("tableau size matches spec");
                    EigenvalueRecord {
                        value,
                        multiplicity: d.clone(),
                        label: Label::Tableau(t),
                    }
                })
                .collect()
        })
        .collect();
    let mut records: Vec<EigenvalueRecord> = per_shape.into_iter().flatten().collect();
    sort_records(&mut records);
    Ok(records)
}

/// Groups tableau records by their `(λ, μ)` restriction at `k`, summing
/// multiplicities. Values within a group must agree.
pub fn group_by_pair(records: &[EigenvalueRecord], k: usize) -> Result<Vec<EigenvalueRecord>> {
    use std::collections::BTreeMap;
    let mut groups: BTreeMap<(Partition, Partition), (BigRational, BigUint)> = BTreeMap::new();
    for r in records {
        let Label::Tableau(t) = &r.label else {
            return Err(Error::invalid("grouping needs tableau-labelled records"));
        };
        let key = t.restrict_to_pair(k)?;
        match groups.get_mut(&key) {
            Some((v, m)) => {
                if *v != r.value {
                    return Err(Error::invalid(format!(
                        "tableaux restricting to {:?} carry different values",
                        key
                    )));
                }
                *m += &r.multiplicity;
            }
            None => {
                groups.insert(key, (r.value.clone(), r.multiplicity.clone()));
            }
        }
    }
    let mut out: Vec<EigenvalueRecord> = groups
        .into_iter()
        .map(|((lambda, mu), (value, multiplicity))| EigenvalueRecord {
            value,
            multiplicity,
            label: Label::Pair { lambda, mu },
        })
        .collect();
    sort_records(&mut out);
    Ok(out)
}

/// Exact power sums of a spectrum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumMoments {
    pub total_multiplicity: BigUint,
    /// Σ value·multiplicity.
    pub trace: BigRational,
    /// Σ value²·multiplicity.
    pub second_moment: BigRational,
}

pub fn moments(records: &[EigenvalueRecord]) -> SpectrumMoments {
    let mut total = BigUint::zero();
    let mut trace = BigRational::zero();
    let mut second = BigRational::zero();
    for r in records {
        let m = BigRational::from_integer(BigInt::from(r.multiplicity.clone()));
        total += &r.multiplicity;
        trace += &r.value * &m;
        second += &r.value * &r.value * m;
    }
    SpectrumMoments {
        total_multiplicity: total,
        trace,
        second_moment: second,
    }
}

/// The moments every complete spectrum must have: `n!`, `n!/n` and
/// `n!·(1/n² + (n−1)²/(n²·|T_A|))` (traces of the kernel and its square).
pub fn expected_moments(spec: &ShuffleSpec) -> SpectrumMoments {
    let n = spec.n();
    let fact = factorial(n);
    let nf = BigRational::from_integer(BigInt::from(fact.clone()));
    let n_r = BigRational::from_integer(BigInt::from(n));
    let t_a = BigRational::from_integer(BigInt::from(spec.transposition_count()));
    let n1 = BigRational::from_integer(BigInt::from(n - 1));
    let second = &nf * (BigRational::one() / (&n_r * &n_r) + &n1 * &n1 / (&n_r * &n_r * t_a));
    SpectrumMoments {
        total_multiplicity: fact,
        trace: &nf / &n_r,
        second_moment: second,
    }
}

/// Eigenvalues at the row- and column-insertion tableaux of `λ`, which bound
/// every k-star eigenvalue carried by tableaux of that shape.
pub fn eig_bounds_for_shape(
    lambda: &Partition,
    n: usize,
    k: usize,
) -> Result<(BigRational, BigRational)> {
    if lambda.size() != n || n < 2 || k == 0 || k > n {
        return Err(Error::invalid(format!(
            "need λ ⊢ n ≥ 2 and 1 ≤ k ≤ n, got {lambda}, n={n}, k={k}"
        )));
    }
    let t_a = kstar_t_a(n, k);
    let low = row_insertion_tableau(lambda).k_diagonal_index(k)?;
    let high = column_insertion_tableau(lambda).k_diagonal_index(k)?;
    Ok((
        from_content_sum(n, t_a, low),
        from_content_sum(n, t_a, high),
    ))
}

/// Outcome of the coarse eigenvalue bounds for one shape.
#[derive(Debug, Clone, PartialEq)]
pub struct CoarseBoundsReport {
    /// Smallest and largest eigenvalue over tableaux of the shape.
    pub extremes: (BigRational, BigRational),
    /// `(2 − m)/n ≤ eig ≤ λ₁/n` for both extremes.
    pub part_i: bool,
    /// The `|eig| ≤ 1 − 2(n−1)/(2n−k−1) · (n−h)/n · (h+1)/n` check, present
    /// when `λ₁ > 6n/10` (with `h = λ₁`) or `m > 6n/10` (with `h = m`, i.e.
    /// the same bound applied to the transpose).
    pub part_ii: Option<bool>,
    /// The part (ii) check taking `h = λ₁` even in the tall case, kept for
    /// comparison; it fails for tall shapes such as a single column.
    pub part_ii_first_row_only: Option<bool>,
}

impl CoarseBoundsReport {
    pub fn passes(&self) -> bool {
        self.part_i && self.part_ii.unwrap_or(true)
    }
}

fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn part_ii_bound(n: usize, k: usize, h: usize) -> BigRational {
    let (n, k, h) = (n as i64, k as i64, h as i64);
    BigRational::one() - rat(2 * (n - 1), 2 * n - k - 1) * rat((n - h) * (h + 1), n * n)
}

pub fn coarse_bounds_check(lambda: &Partition, n: usize, k: usize) -> Result<CoarseBoundsReport> {
    let (low, high) = eig_bounds_for_shape(lambda, n, k)?;
    let m = lambda.len();
    let l1 = lambda.first_part();
    let part_i = rat(2 - m as i64, n as i64) <= low && high <= rat(l1 as i64, n as i64);
    let magnitude = low.abs().max(high.abs());
    // 10·λ₁ > 6n
    let wide = 10 * l1 > 6 * n;
    let tall = 10 * m > 6 * n;
    let part_ii = if wide {
        Some(magnitude <= part_ii_bound(n, k, l1))
    } else if tall {
        Some(magnitude <= part_ii_bound(n, k, m))
    } else {
        None
    };
    let part_ii_first_row_only = (wide || tall).then(|| magnitude <= part_ii_bound(n, k, l1));
    Ok(CoarseBoundsReport {
        extremes: (low, high),
        part_i,
        part_ii,
        part_ii_first_row_only,
    })
}

/// The least shifted index over tableaux of `λ`, attained at the column
/// insertion tableau, against `k + C(k,2)·(λ₁ − 1)/(n − 1)`. Returns the
/// two sides and whether the inequality holds.
pub fn minak_check(lambda: &Partition, k: usize) -> Result<(i64, BigRational, bool)> {
    let n = lambda.size();
    if n < 2 || k == 0 || k > n {
        return Err(Error::invalid(format!(
            "need n ≥ 2 and 1 ≤ k ≤ n, got n={n}, k={k}"
        )));
    }
    let a = column_insertion_tableau(lambda).shifted_k_diagonal_index(k)?;
    let (ni, ki, l1) = (n as i64, k as i64, lambda.first_part() as i64);
    let bound =
        BigRational::from_integer(BigInt::from(ki)) + rat(ki * (ki - 1) / 2 * (l1 - 1), ni - 1);
    let holds = BigRational::from_integer(BigInt::from(a)) >= bound;
    Ok((a, bound, holds))
}

fn int_or_string(x: &BigInt) -> serde_json::Value {
    match x.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(x.to_string()),
    }
}

fn record_json(r: &EigenvalueRecord) -> serde_json::Value {
    let mut obj = serde_json::Map::new();
    match &r.label {
        Label::Pair { lambda, mu } => {
            obj.insert("lambda".into(), serde_json::to_value(lambda).unwrap());
            obj.insert("mu".into(), serde_json::to_value(mu).unwrap());
        }
        Label::Tableau(t) => {
            obj.insert("lambda".into(), serde_json::to_value(t.shape()).unwrap());
            obj.insert("tableau".into(), serde_json::to_value(t).unwrap());
        }
    }
    obj.insert("value_num".into(), int_or_string(r.value.numer()));
    obj.insert("value_den".into(), int_or_string(r.value.denom()));
    obj.insert("multiplicity".into(), r.multiplicity.to_string().into());
    serde_json::Value::Object(obj)
}

/// One JSON object per line:
/// `{"lambda":[…],"mu":[…],"value_num":…,"value_den":…,"multiplicity":"…"}`.
/// Tableau-labelled records carry `"tableau"` in place of `"mu"`.
pub fn write_jsonl<W: Write>(records: &[EigenvalueRecord], mut out: W) -> io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, &record_json(r))?;
        writeln!(out)?;
    }
    Ok(())
}

fn csv_list(v: &serde_json::Value) -> String {
    format!("\"{v}\"")
}

/// CSV with the JSON-lines columns; list-valued cells are quoted JSON.
pub fn write_csv<W: Write>(records: &[EigenvalueRecord], mut out: W) -> io::Result<()> {
    let tableaux = records.iter().any(|r| matches!(r.label, Label::Tableau(_)));
    if tableaux {
        writeln!(out, "lambda,tableau,value_num,value_den,multiplicity")?;
    } else {
        writeln!(out, "lambda,mu,value_num,value_den,multiplicity")?;
    }
    for r in records {
        let second = match &r.label {
            Label::Pair { mu, .. } => serde_json::to_value(mu).unwrap(),
            Label::Tableau(t) => serde_json::to_value(t).unwrap(),
        };
        writeln!(
            out,
            "{},{},{},{},{}",
            csv_list(&serde_json::to_value(r.label.shape()).unwrap()),
            csv_list(&second),
            r.value.numer(),
            r.value.denom(),
            r.multiplicity
        )?;
    }
    Ok(())
}
