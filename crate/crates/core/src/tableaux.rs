//! Standard Young tableaux and the k-diagonal statistics.

use std::cmp::Ordering;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::capacity::Capacity;
use crate::error::{Error, Result};
use crate::partitions::{dim_syt, Partition};

/// A standard Young tableau, stored as rows of entries `1..=n`.
///
/// Serializes as the JSON row list, e.g. `[[1,2,4,6],[3,5,8],[7]]`. Cells are
/// 1-based `(row, column)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct StandardYoungTableau {
    shape: Partition,
    rows: Vec<Vec<usize>>,
    /// `cell_of[v - 1]` is the 1-based cell holding `v`.
    cell_of: Vec<(usize, usize)>,
}

impl StandardYoungTableau {
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self> {
        let shape = Partition::new(rows.iter().map(Vec::len).collect())?;
        let n = shape.size();
        let mut cell_of = vec![(0, 0); n];
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v == 0 || v > n || cell_of[v - 1] != (0, 0) {
                    return Err(Error::invalid(format!(
                        "tableau entries must be a permutation of 1..={n}"
                    )));
                }
                cell_of[v - 1] = (i + 1, j + 1);
                let left_ok = j == 0 || row[j - 1] < v;
                let up_ok = i == 0 || rows[i - 1][j] < v;
                if !left_ok || !up_ok {
                    return Err(Error::invalid(format!(
                        "tableau must increase along rows and columns at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(StandardYoungTableau {
            shape,
            rows,
            cell_of,
        })
    }

    /// Builds the tableau placing value `v` in row `word[v-1]` (0-based).
    fn from_row_word(shape: &Partition, word: &[usize]) -> Self {
        let mut rows: Vec<Vec<usize>> = vec![Vec::new(); shape.len()];
        let mut cell_of = Vec::with_capacity(word.len());
        for (idx, &r) in word.iter().enumerate() {
            rows[r].push(idx + 1);
            cell_of.push((r + 1, rows[r].len()));
        }
        StandardYoungTableau {
            shape: shape.clone(),
            rows,
            cell_of,
        }
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn size(&self) -> usize {
        self.cell_of.len()
    }

    /// Entry at 1-based cell `(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> Option<usize> {
        self.rows
            .get(i.checked_sub(1)?)?
            .get(j.checked_sub(1)?)
            .copied()
    }

    /// 1-based cell holding `value`.
    pub fn cell_of(&self, value: usize) -> Option<(usize, usize)> {
        self.cell_of.get(value.checked_sub(1)?).copied()
    }

    /// Content `j − i` of the cell holding `value`.
    pub fn content_of(&self, value: usize) -> i64 {
        let (i, j) = self.cell_of[value - 1];
        j as i64 - i as i64
    }

    pub fn transpose(&self) -> StandardYoungTableau {
        let conj = self.shape.transpose();
        let rows = (0..conj.len())
            .map(|j| (0..conj.part(j)).map(|i| self.rows[i][j]).collect())
            .collect();
        let cell_of = self.cell_of.iter().map(|&(i, j)| (j, i)).collect();
        StandardYoungTableau {
            shape: conj,
            rows,
            cell_of,
        }
    }

    /// `D_S^k`: total content of the cells holding `n−k+1, …, n`.
    pub fn k_diagonal_index(&self, k: usize) -> Result<i64> {
        let n = self.size();
        if k > n {
            return Err(Error::invalid(format!("k = {k} exceeds n = {n}")));
        }
        Ok((n - k + 1..=n).map(|v| self.content_of(v)).sum())
    }

    /// `A_S^k = k·λ₁ − D_S^k`.
    pub fn shifted_k_diagonal_index(&self, k: usize) -> Result<i64> {
        Ok(k as i64 * self.shape.first_part() as i64 - self.k_diagonal_index(k)?)
    }

    /// `(λ, μ)` where `μ` is the shape occupied by the entries `1..=n−k`.
    pub fn restrict_to_pair(&self, k: usize) -> Result<(Partition, Partition)> {
        let n = self.size();
        if k > n {
            return Err(Error::invalid(format!("k = {k} exceeds n = {n}")));
        }
        let keep = n - k;
        let parts = self
            .rows
            .iter()
            .map(|row| row.iter().take_while(|&&v| v <= keep).count())
            .collect();
        Ok((self.shape.clone(), Partition::new(parts)?))
    }

    /// The row (0-based) of each value `1..=n`; tableaux of a shape are
    /// enumerated in lexicographic order of this word.
    pub fn row_word(&self) -> Vec<usize> {
        self.cell_of.iter().map(|&(i, _)| i - 1).collect()
    }
}

impl TryFrom<Vec<Vec<usize>>> for StandardYoungTableau {
    type Error = Error;
    fn try_from(rows: Vec<Vec<usize>>) -> Result<Self> {
        StandardYoungTableau::from_rows(rows)
    }
}

impl From<StandardYoungTableau> for Vec<Vec<usize>> {
    fn from(t: StandardYoungTableau) -> Self {
        t.rows
    }
}

impl Ord for StandardYoungTableau {
    fn cmp(&self, other: &Self) -> Ordering {
        self.shape
            .cmp(&other.shape)
            .then_with(|| self.row_word().cmp(&other.row_word()))
    }
}

impl PartialOrd for StandardYoungTableau {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `T_{λ→}`: fill `1..=n` row by row, left to right.
pub fn row_insertion_tableau(shape: &Partition) -> StandardYoungTableau {
    let word: Vec<usize> = shape
        .parts()
        .iter()
        .enumerate()
        .flat_map(|(i, &p)| std::iter::repeat_n(i, p))
        .collect();
    StandardYoungTableau::from_row_word(shape, &word)
}

/// `T_{λ↓}`: fill `1..=n` column by column, top to bottom.
pub fn column_insertion_tableau(shape: &Partition) -> StandardYoungTableau {
    let conj = shape.transpose();
    let word: Vec<usize> = conj.parts().iter().flat_map(|&h| 0..h).collect();
    StandardYoungTableau::from_row_word(shape, &word)
}

/// All standard Young tableaux of a shape, lexicographic in the row word.
#[derive(Debug, Clone)]
pub struct SytIter {
    shape: Partition,
    word: Vec<usize>,
    filled: Vec<usize>,
    started: bool,
    done: bool,
}

pub fn enumerate_syt(shape: &Partition) -> Result<SytIter> {
    enumerate_syt_with(shape, &Capacity::default())
}

pub fn enumerate_syt_with(shape: &Partition, cap: &Capacity) -> Result<SytIter> {
    let d = dim_syt(shape);
    if d > BigUint::from(cap.max_syt) {
        return Err(Error::capacity("standard Young tableaux", d, cap.max_syt));
    }
    Ok(SytIter {
        shape: shape.clone(),
        word: Vec::with_capacity(shape.size()),
        filled: vec![0; shape.len()],
        started: false,
        done: false,
    })
}

impl SytIter {
    fn can_place(&self, r: usize) -> bool {
        r < self.shape.len()
            && self.filled[r] < self.shape.part(r)
            && (r == 0 || self.filled[r - 1] > self.filled[r])
    }

    /// Extends the current prefix with the smallest admissible rows.
    fn complete(&mut self) {
        let n = self.shape.size();
        while self.word.len() < n {
            let r = (0..self.shape.len())
                .find(|&r| self.can_place(r))
                .expect("a partial standard filling always has an addable cell");
            self.filled[r] += 1;
            self.word.push(r);
        }
    }

    fn advance(&mut self) -> bool {
        while let Some(r) = self.word.pop() {
            self.filled[r] -= 1;
            if let Some(next) = (r + 1..self.shape.len()).find(|&s| self.can_place(s)) {
                self.filled[next] += 1;
                self.word.push(next);
                self.complete();
                return true;
            }
        }
        false
    }
}

impl Iterator for SytIter {
    type Item = StandardYoungTableau;

    fn next(&mut self) -> Option<StandardYoungTableau> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.complete();
        } else if !self.advance() {
            self.done = true;
            return None;
        }
        Some(StandardYoungTableau::from_row_word(&self.shape, &self.word))
    }
}
