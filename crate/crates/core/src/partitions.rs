//! Integer partitions, Young diagrams and their dimensions.
//!
//! Cells are addressed 1-based as `(row, column)`, so the content of a cell
//! is `column - row`. All dimension arithmetic is exact.

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::capacity::Capacity;
use crate::error::{Error, Result};
use crate::numeric::{binomial, ceil_sqrt, factorial, ln_biguint};

/// A weakly decreasing sequence of positive parts.
///
/// The derived ordering is the canonical order used for labels: partitions
/// of smaller size first, and within one size reverse lexicographic, so
/// `(4) < (3,1) < (2,2) < (2,1,1) < (1,1,1,1)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Validates `parts`; trailing zeros are dropped.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.contains(&0) {
            return Err(Error::invalid(format!(
                "partition parts must be positive: {parts:?}"
            )));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::invalid(format!(
                "partition parts must be weakly decreasing: {parts:?}"
            )));
        }
        Ok(Partition { parts })
    }

    pub(crate) fn from_parts_unchecked(parts: Vec<usize>) -> Self {
        debug_assert!(Partition::new(parts.clone()).is_ok());
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The one-row partition `(n)`.
    pub fn row(n: usize) -> Self {
        if n == 0 {
            Partition::empty()
        } else {
            Partition { parts: vec![n] }
        }
    }

    /// The one-column partition `(1, …, 1)`.
    pub fn column(n: usize) -> Self {
        Partition { parts: vec![1; n] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// The integer being partitioned.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// λ₁, or 0 for the empty partition.
    pub fn first_part(&self) -> usize {
        self.parts.first().copied().unwrap_or(0)
    }

    /// Part `i` (0-based), reading missing parts as 0.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn transpose(&self) -> Partition {
        let cols = self.first_part();
        let parts = (0..cols)
            .map(|j| self.parts.iter().take_while(|&&p| p > j).count())
            .collect();
        Partition { parts }
    }

    /// Cells `(row, column)`, 1-based, row by row.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (1..=p).map(move |j| (i + 1, j)))
    }

    /// Σ (j − i) over all cells.
    pub fn diag_index(&self) -> i64 {
        self.parts
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                let (i, p) = (i as i64 + 1, p as i64);
                // Σ_{j=1}^{p} (j − i)
                p * (p + 1) / 2 - p * i
            })
            .sum()
    }

    /// Cellwise containment: `inner ⊆ self`.
    pub fn contains(&self, inner: &Partition) -> bool {
        inner.len() <= self.len() && inner.parts.iter().zip(&self.parts).all(|(a, b)| a <= b)
    }

    /// Dominance order. Both partitions must have the same size.
    pub fn dominates(&self, other: &Partition) -> Result<bool> {
        if self.size() != other.size() {
            return Err(Error::invalid(format!(
                "dominance compares partitions of the same integer, got {} and {}",
                self.size(),
                other.size()
            )));
        }
        let (mut a, mut b) = (0usize, 0usize);
        for i in 0..self.len().max(other.len()) {
            a += self.part(i);
            b += other.part(i);
            if a < b {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Cells whose removal leaves a partition, as 1-based `(row, column)`.
    pub fn removable_cells(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .filter(|&i| self.part(i) > self.part(i + 1))
            .map(|i| (i + 1, self.parts[i]))
            .collect()
    }

    /// Rows (0-based) where a cell can be appended.
    pub fn addable_rows(&self) -> Vec<usize> {
        (0..=self.len())
            .filter(|&i| i == 0 || self.part(i - 1) > self.part(i))
            .collect()
    }

    pub(crate) fn hook_lengths(&self) -> impl Iterator<Item = usize> + '_ {
        let conj = self.transpose();
        self.cells().map(move |(i, j)| {
            let arm = self.parts[i - 1] - j;
            let leg = conj.parts[j - 1] - i;
            arm + leg + 1
        })
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| other.parts.cmp(&self.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// The skew diagram `outer / inner`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSkew")]
pub struct SkewShape {
    outer: Partition,
    inner: Partition,
}

#[derive(Deserialize)]
struct RawSkew {
    outer: Partition,
    inner: Partition,
}

impl TryFrom<RawSkew> for SkewShape {
    type Error = Error;
    fn try_from(raw: RawSkew) -> Result<Self> {
        SkewShape::new(raw.outer, raw.inner)
    }
}

impl SkewShape {
    pub fn new(outer: Partition, inner: Partition) -> Result<Self> {
        if !outer.contains(&inner) {
            return Err(Error::invalid(format!(
                "skew shape needs {inner} contained in {outer}"
            )));
        }
        Ok(SkewShape { outer, inner })
    }

    pub fn outer(&self) -> &Partition {
        &self.outer
    }

    pub fn inner(&self) -> &Partition {
        &self.inner
    }

    /// Number of cells, `|outer| − |inner|`.
    pub fn size(&self) -> usize {
        self.outer.size() - self.inner.size()
    }

    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.outer
            .cells()
            .filter(|&(i, j)| j > self.inner.part(i - 1))
    }
}

/// Iterator over the partitions of `n` in canonical (reverse lexicographic)
/// order.
#[derive(Debug, Clone)]
pub struct PartitionIter {
    current: Option<Vec<usize>>,
}

/// Lazily enumerates the partitions of `n`; no capacity guard applies.
pub fn partitions(n: usize) -> PartitionIter {
    PartitionIter {
        current: Some(if n == 0 { Vec::new() } else { vec![n] }),
    }
}

impl Iterator for PartitionIter {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let cur = self.current.take()?;
        let out = Partition::from_parts_unchecked(cur.clone());
        // Next in reverse lexicographic order: decrement the last part > 1
        // and refill the tail greedily.
        let mut parts = cur;
        let mut ones = 0;
        while parts.last() == Some(&1) {
            parts.pop();
            ones += 1;
        }
        if let Some(last) = parts.last_mut() {
            *last -= 1;
            let cap = *last;
            let mut rem = ones + 1;
            while rem > 0 {
                let take = rem.min(cap);
                parts.push(take);
                rem -= take;
            }
            self.current = Some(parts);
        }
        Some(out)
    }
}

/// All partitions of `n`, in canonical order, under the default capacity.
pub fn enumerate_partitions(n: usize) -> Result<Vec<Partition>> {
    enumerate_partitions_with(n, &Capacity::default())
}

pub fn enumerate_partitions_with(n: usize, cap: &Capacity) -> Result<Vec<Partition>> {
    if n > cap.max_partition_n {
        return Err(Error::capacity(
            "partition enumeration n",
            n,
            cap.max_partition_n,
        ));
    }
    let count = count_partitions(n);
    if count > BigUint::from(cap.max_partitions) {
        return Err(Error::capacity(
            "partition list length",
            count,
            cap.max_partitions,
        ));
    }
    Ok(partitions(n).collect())
}

fn partition_counts() -> &'static Mutex<Vec<BigUint>> {
    static TABLE: OnceLock<Mutex<Vec<BigUint>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(vec![BigUint::one()]))
}

/// `p(n)` exactly, by Euler's pentagonal-number recurrence (memoized).
pub fn count_partitions(n: usize) -> BigUint {
    let mut table = partition_counts().lock().expect("partition table poisoned");
    while table.len() <= n {
        let m = table.len();
        let mut acc = BigInt::zero();
        for q in 1.. {
            let g1 = q * (3 * q - 1) / 2;
            if g1 > m {
                break;
            }
            let g2 = q * (3 * q + 1) / 2;
            let mut term = BigInt::from(table[m - g1].clone());
            if g2 <= m {
                term += BigInt::from(table[m - g2].clone());
            }
            if q % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        table.push(acc.to_biguint().expect("p(n) is positive"));
    }
    table[n].clone()
}

/// The Hardy–Ramanujan asymptotic `exp(π√(2n/3)) / (4n√3)`.
pub fn hardy_ramanujan_estimate(n: usize) -> f64 {
    let n = n as f64;
    (std::f64::consts::PI * (2.0 * n / 3.0).sqrt()).exp() / (4.0 * n * 3f64.sqrt())
}

/// `p(n) / hardy_ramanujan_estimate(n)`, computed in log space so it stays
/// finite for large `n`.
pub fn hardy_ramanujan_ratio(n: usize) -> f64 {
    let nf = n as f64;
    let ln_est = std::f64::consts::PI * (2.0 * nf / 3.0).sqrt() - (4.0 * nf * 3f64.sqrt()).ln();
    (ln_biguint(&count_partitions(n)) - ln_est).exp()
}

/// Every `μ ⊆ λ` with `|μ| = size`, each once, in canonical order.
pub fn enumerate_subpartitions(outer: &Partition, size: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    if size > outer.size() {
        return out;
    }
    let mut cur = Vec::new();
    sub_rec(outer.parts(), 0, usize::MAX, size, &mut cur, &mut out);
    out
}

fn sub_rec(
    outer: &[usize],
    row: usize,
    prev: usize,
    remaining: usize,
    cur: &mut Vec<usize>,
    out: &mut Vec<Partition>,
) {
    if remaining == 0 {
        out.push(Partition::from_parts_unchecked(cur.clone()));
        return;
    }
    if row >= outer.len() {
        return;
    }
    let hi = outer[row].min(prev).min(remaining);
    for v in (1..=hi).rev() {
        // Largest total the rows below can still take with parts ≤ v.
        let room: usize = outer[row + 1..].iter().map(|&p| p.min(v)).sum();
        if remaining - v > room {
            break;
        }
        cur.push(v);
        sub_rec(outer, row + 1, v, remaining - v, cur, out);
        cur.pop();
    }
}

/// `d_λ`, the number of standard Young tableaux of shape `λ`, by the hook
/// length formula.
pub fn dim_syt(shape: &Partition) -> BigUint {
    let hooks = shape
        .hook_lengths()
        .fold(BigUint::one(), |acc, h| acc * BigUint::from(h));
    factorial(shape.size()) / hooks
}

/// Number of standard fillings of a skew shape, by the Aitken determinant
/// `k!·det[1/(λ_i − μ_j − i + j)!]`.
///
/// Row `i` of the matrix is scaled by `(λ_i − i + m)!` so every entry becomes
/// a falling factorial; the integer determinant is taken fraction-free.
pub fn dim_skew(shape: &SkewShape) -> BigUint {
    let (outer, inner) = (shape.outer(), shape.inner());
    if inner.is_empty() || inner.parts() == [1] {
        return dim_syt(outer);
    }
    let k = shape.size();
    if k <= 1 {
        return BigUint::one();
    }
    let m = outer.len();
    let mut mat = vec![vec![BigInt::zero(); m]; m];
    let mut scale = BigUint::one();
    for (i, row) in mat.iter_mut().enumerate() {
        let top = outer.part(i) + m - i - 1;
        scale *= factorial(top);
        for (j, entry) in row.iter_mut().enumerate() {
            let arg = outer.part(i) as i64 - inner.part(j) as i64 - i as i64 + j as i64;
            if arg >= 0 {
                *entry = BigInt::from(falling(top, top - arg as usize));
            }
        }
    }
    let det = bareiss_determinant(mat);
    let num = det * BigInt::from(factorial(k));
    let (q, r) = num.div_rem(&BigInt::from(scale));
    debug_assert!(r.is_zero(), "Aitken determinant must be integral");
    debug_assert!(!q.is_negative());
    q.to_biguint().unwrap_or_default()
}

/// `top! / bottom!` for `bottom ≤ top`.
fn falling(top: usize, drop: usize) -> BigUint {
    ((top - drop + 1)..=top).fold(BigUint::one(), |acc, v| acc * BigUint::from(v))
}

pub(crate) fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let m = a.len();
    if m == 0 {
        return BigInt::one();
    }
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for c in 0..m {
        if a[c][c].is_zero() {
            match (c + 1..m).find(|&r| !a[r][c].is_zero()) {
                Some(r) => {
                    a.swap(c, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for r in c + 1..m {
            for col in c + 1..m {
                let v = &a[r][col] * &a[c][c] - &a[r][c] * &a[c][col];
                a[r][col] = v / &prev;
            }
            a[r][c] = BigInt::zero();
        }
        prev = a[c][c].clone();
    }
    let d = a[m - 1][m - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// `⌈C(n, λ₁)·√((n − λ₁)!)⌉`, an exact integer check value for `d_λ`.
pub fn dim_upper_bound(shape: &Partition) -> BigUint {
    let n = shape.size();
    let l1 = shape.first_part();
    let c = binomial(n, l1);
    ceil_sqrt(&(&c * &c * factorial(n - l1)))
}

/// Checks `d_μ·d_{λ/μ} ≤ (4^j·k/n)^l · d_λ` where `j = n − λ₁` and
/// `l = k − λ₁ + μ₁`, in exact integers. Requires `μ ⊢ n − k`, `μ ⊆ λ` and
/// `l > 0`.
pub fn skew_dim_bound_check(outer: &Partition, inner: &Partition, k: usize) -> Result<bool> {
    let n = outer.size();
    if k > n || inner.size() + k != n {
        return Err(Error::invalid(format!(
            "inner partition {inner} must have size n − k = {}",
            n as i64 - k as i64
        )));
    }
    let skew = SkewShape::new(outer.clone(), inner.clone())?;
    let l = k as i64 - outer.first_part() as i64 + inner.first_part() as i64;
    if l <= 0 {
        return Err(Error::invalid(format!(
            "bound needs l = k − λ₁ + μ₁ > 0, got {l}"
        )));
    }
    let l = l as u32;
    let j = (n - outer.first_part()) as u32;
    let lhs = dim_syt(inner) * dim_skew(&skew) * BigUint::from(n).pow(l);
    let rhs = BigUint::from(4u32).pow(j * l) * BigUint::from(k).pow(l) * dim_syt(outer);
    Ok(lhs <= rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    /// Counts standard fillings of a skew shape by placing 1, 2, … one at a
    /// time into cells whose up and left neighbours are already filled.
    fn brute_skew_count(outer: &Partition, inner: &Partition) -> u64 {
        fn rec(outer: &[usize], filled: &mut Vec<usize>) -> u64 {
            if filled.iter().zip(outer).all(|(f, o)| f == o) {
                return 1;
            }
            let mut total = 0;
            for r in 0..outer.len() {
                let ok = filled[r] < outer[r] && (r == 0 || filled[r - 1] > filled[r]);
                if ok {
                    filled[r] += 1;
                    total += rec(outer, filled);
                    filled[r] -= 1;
                }
            }
            total
        }
        let mut filled: Vec<usize> = (0..outer.len()).map(|i| inner.part(i)).collect();
        rec(outer.parts(), &mut filled)
    }

    #[test]
    fn rejects_bad_parts() {
        assert!(Partition::new(vec![2, 3]).is_err());
        assert!(Partition::new(vec![2, 0, 1]).is_err());
        assert_eq!(Partition::new(vec![2, 1, 0, 0]).unwrap(), p(&[2, 1]));
    }

    #[test]
    fn partitions_of_four_in_canonical_order() {
        let got = enumerate_partitions(4).unwrap();
        let want = vec![
            p(&[4]),
            p(&[3, 1]),
            p(&[2, 2]),
            p(&[2, 1, 1]),
            p(&[1, 1, 1, 1]),
        ];
        assert_eq!(got, want);
        let mut sorted = want.clone();
        sorted.reverse();
        sorted.sort();
        assert_eq!(sorted, want);
    }

    #[test]
    fn partitions_of_zero() {
        assert_eq!(enumerate_partitions(0).unwrap(), vec![Partition::empty()]);
        assert_eq!(count_partitions(0), BigUint::one());
    }

    #[test]
    fn large_lists_are_refused() {
        assert!(matches!(
            enumerate_partitions(100),
            Err(Error::Capacity { .. })
        ));
        assert!(matches!(
            enumerate_partitions(201),
            Err(Error::Capacity { .. })
        ));
        assert_eq!(count_partitions(100), BigUint::from(190_569_292u32));
    }

    #[test]
    fn counts_match_lazy_enumeration() {
        for n in 0..=25 {
            assert_eq!(
                count_partitions(n),
                BigUint::from(partitions(n).count()),
                "p({n})"
            );
        }
    }

    #[test]
    fn hardy_ramanujan_small_values() {
        let direct = (std::f64::consts::PI * (2.0f64 / 3.0).sqrt()).exp() / (4.0 * 3f64.sqrt());
        assert!((hardy_ramanujan_estimate(1) - direct).abs() < 1e-15);
        let r100 = hardy_ramanujan_ratio(100);
        assert!(r100 > 0.9 && r100 < 1.0, "{r100}");
        assert!(hardy_ramanujan_ratio(10_000) > r100);
        assert!(hardy_ramanujan_ratio(10_000) < 1.0);
    }

    #[test]
    fn dominance_examples() {
        assert!(p(&[4, 4]).dominates(&p(&[4, 3, 1])).unwrap());
        assert!(p(&[3, 3]).dominates(&p(&[3, 3])).unwrap());
        assert!(!p(&[3, 3]).dominates(&p(&[4, 2])).unwrap());
        assert!(p(&[3]).dominates(&p(&[2])).is_err());
    }

    #[test]
    fn diag_index_examples() {
        assert_eq!(p(&[4, 3, 1]).diag_index(), 4);
        for n in 1..10 {
            let n_i = n as i64;
            assert_eq!(Partition::row(n).diag_index(), n_i * (n_i - 1) / 2);
            assert_eq!(Partition::column(n).diag_index(), -n_i * (n_i - 1) / 2);
        }
        assert_eq!(Partition::empty().diag_index(), 0);
    }

    #[test]
    fn containment() {
        assert!(p(&[4, 3, 2]).contains(&p(&[2, 1])));
        assert!(p(&[3, 3]).contains(&p(&[3, 3])));
        assert!(!p(&[3, 3]).contains(&p(&[4])));
        assert!(!p(&[3]).contains(&p(&[1, 1])));
        assert!(SkewShape::new(p(&[3, 3]), p(&[4])).is_err());
    }

    #[test]
    fn subpartitions_examples() {
        assert_eq!(
            enumerate_subpartitions(&p(&[2, 1]), 2),
            vec![p(&[2]), p(&[1, 1])]
        );
        let l = p(&[4, 3, 1]);
        assert_eq!(enumerate_subpartitions(&l, 8), vec![l.clone()]);
        assert_eq!(enumerate_subpartitions(&l, 0), vec![Partition::empty()]);
        assert!(enumerate_subpartitions(&l, 9).is_empty());
    }

    #[test]
    fn subpartitions_match_filter_over_all_partitions() {
        for n in 0..=9 {
            for l in partitions(n) {
                for size in 0..=n {
                    let want: Vec<_> = partitions(size).filter(|m| l.contains(m)).collect();
                    assert_eq!(enumerate_subpartitions(&l, size), want, "{l} size {size}");
                }
            }
        }
    }

    #[test]
    fn dim_syt_examples() {
        assert_eq!(dim_syt(&p(&[4, 3, 1])), BigUint::from(70u32));
        for n in 1..12 {
            assert_eq!(dim_syt(&Partition::row(n)), BigUint::one());
            if n >= 2 {
                assert_eq!(dim_syt(&p(&[n - 1, 1])), BigUint::from(n - 1));
            }
        }
        assert_eq!(dim_syt(&Partition::empty()), BigUint::one());
    }

    #[test]
    fn hook_formula_matches_brute_force() {
        for n in 0..=8 {
            for l in partitions(n) {
                let brute = brute_skew_count(&l, &Partition::empty());
                assert_eq!(dim_syt(&l), BigUint::from(brute), "{l}");
            }
        }
    }

    #[test]
    fn aitken_matches_brute_force() {
        for n in 0..=8 {
            for l in partitions(n) {
                for size in 0..=n {
                    for m in enumerate_subpartitions(&l, size) {
                        let s = SkewShape::new(l.clone(), m.clone()).unwrap();
                        let brute = brute_skew_count(&l, &m);
                        assert_eq!(dim_skew(&s), BigUint::from(brute), "{l}/{m}");
                    }
                }
            }
        }
    }

    #[test]
    fn skew_example_from_diagram() {
        let s = SkewShape::new(p(&[4, 3, 2]), p(&[2, 1])).unwrap();
        assert_eq!(s.size(), 6);
        assert_eq!(
            dim_skew(&s),
            BigUint::from(brute_skew_count(s.outer(), s.inner()))
        );
        let single = SkewShape::new(p(&[2, 1]), p(&[2])).unwrap();
        assert_eq!(dim_skew(&single), BigUint::one());
    }

    #[test]
    fn dim_upper_bound_examples() {
        assert_eq!(dim_upper_bound(&Partition::row(6)), BigUint::one());
        // C(8,4)·√24 = 342.9…
        assert_eq!(dim_upper_bound(&p(&[4, 3, 1])), BigUint::from(343u32));
        // C(4,2)·√2 = 8.48…
        assert_eq!(dim_upper_bound(&p(&[2, 2])), BigUint::from(9u32));
        for n in 1..=12 {
            for l in partitions(n) {
                assert!(dim_upper_bound(&l) >= dim_syt(&l), "{l}");
            }
        }
    }

    #[test]
    fn skew_dim_bound_examples() {
        let (n, k) = (10usize, 3usize);
        let outer = p(&[n - 1, 1]);
        let inner = p(&[n - k]);
        assert!(skew_dim_bound_check(&outer, &inner, k).unwrap());
        // λ = (n): l = k − n + μ₁ = 0.
        assert!(skew_dim_bound_check(&Partition::row(6), &Partition::row(4), 2).is_err());
        assert!(skew_dim_bound_check(&p(&[3, 1]), &p(&[2]), 1).is_err());
    }

    #[test]
    fn determinant_sign_helper() {
        let m = vec![
            vec![BigInt::from(0), BigInt::from(1)],
            vec![BigInt::from(1), BigInt::from(0)],
        ];
        assert_eq!(bareiss_determinant(m), BigInt::from(-1));
    }

    #[test]
    fn serde_round_trip() {
        let s = SkewShape::new(p(&[4, 3, 2]), p(&[2, 1])).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"outer":[4,3,2],"inner":[2,1]}"#);
        assert_eq!(serde_json::from_str::<SkewShape>(&json).unwrap(), s);
        assert!(serde_json::from_str::<Partition>("[1,2]").is_err());
        assert!(serde_json::from_str::<SkewShape>(r#"{"outer":[2],"inner":[3]}"#).is_err());
    }
}
