//! Brute-force ground truth on `S_n` for small decks: explicit kernels,
//! dense spectra, exact TV curves, character expectations and a Monte Carlo
//! sampler.
//!
//! States are arrangements `x[position] = card` (0-based), indexed by the
//! Lehmer-code rank; rank 0 is the identity. A step applies a transposition
//! of positions, `x ↦ x·(i j)`.

use std::io::{self, Read, Write};

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::capacity::Capacity;
use crate::error::{Error, Result};
use crate::mixing::{CurveKind, CurvePoint, MixingCurve};
use crate::partitions::Partition;
use crate::spectrum::ShuffleSpec;

/// Number of independent RNG streams used by [`sample_walk`]; fixed so
/// results do not depend on the thread count.
pub const SAMPLE_SHARDS: u64 = 64;

fn state_count(n: usize) -> usize {
    (1..=n).product()
}

/// Lehmer-code rank of an arrangement of `0..n`.
pub fn rank(perm: &[usize]) -> usize {
    let n = perm.len();
    let mut r = 0usize;
    for i in 0..n {
        let smaller = perm[i + 1..].iter().filter(|&&v| v < perm[i]).count();
        r = r * (n - i) + smaller;
    }
    r
}

/// Inverse of [`rank`].
pub fn unrank(n: usize, mut r: usize) -> Vec<usize> {
    let mut code = vec![0usize; n];
    for i in (0..n).rev() {
        let base = n - i;
        code[i] = r % base;
        r /= base;
    }
    let mut pool: Vec<usize> = (0..n).collect();
    code.into_iter().map(|c| pool.remove(c)).collect()
}

/// `(fixed points, 2-cycles)` of an arrangement.
pub fn cycle_counts(perm: &[usize]) -> (usize, usize) {
    let fixed = perm.iter().enumerate().filter(|&(i, &v)| i == v).count();
    let two = perm
        .iter()
        .enumerate()
        .filter(|&(i, &v)| v > i && perm[v] == i)
        .count();
    (fixed, two)
}

fn check_oracle_n(n: usize, cap: &Capacity) -> Result<()> {
    if n > cap.max_oracle_n {
        return Err(Error::capacity(
            "explicit kernel on S_n",
            format!("n = {n}"),
            format!("n ≤ {}", cap.max_oracle_n),
        ));
    }
    Ok(())
}

/// The transition matrix on `S_n`, stored as neighbour lists: every row holds
/// `1/n` on the diagonal and `(n−1)/(n·|T_A|)` at each of its `|T_A|`
/// neighbours.
#[derive(Debug, Clone)]
pub struct Kernel {
    spec: ShuffleSpec,
    states: usize,
    degree: usize,
    neighbours: Vec<u32>,
    hold: BigRational,
    weight: BigRational,
}

pub fn build_kernel(spec: &ShuffleSpec) -> Result<Kernel> {
    build_kernel_with(spec, &Capacity::default())
}

pub fn build_kernel_with(spec: &ShuffleSpec, cap: &Capacity) -> Result<Kernel> {
    let n = spec.n();
    check_oracle_n(n, cap)?;
    let states = state_count(n);
    let swaps: Vec<(usize, usize)> = spec
        .transpositions()
        .into_iter()
        .map(|(i, j)| (i - 1, j - 1))
        .collect();
    let degree = swaps.len();
    let neighbours: Vec<u32> = (0..states)
        .into_par_iter()
        .flat_map_iter(|r| {
            let base = unrank(n, r);
            swaps
                .iter()
                .map(|&(i, j)| {
                    let mut p = base.clone();
                    p.swap(i, j);
                    rank(&p) as u32
                })
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(Kernel {
        spec: spec.clone(),
        states,
        degree,
        neighbours,
        hold: spec.hold_probability(),
        weight: spec.move_probability(),
    })
}

impl Kernel {
    pub fn spec(&self) -> &ShuffleSpec {
        &self.spec
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn neighbours(&self, row: usize) -> &[u32] {
        &self.neighbours[row * self.degree..(row + 1) * self.degree]
    }

    pub fn hold(&self) -> &BigRational {
        &self.hold
    }

    /// Weight of each off-diagonal entry.
    pub fn weight(&self) -> &BigRational {
        &self.weight
    }

    /// Exact entry `P(row, col)`.
    pub fn entry(&self, row: usize, col: usize) -> BigRational {
        let count = self
            .neighbours(row)
            .iter()
            .filter(|&&c| c as usize == col)
            .count();
        let off = &self.weight * BigRational::from_integer(BigInt::from(count));
        if row == col {
            &self.hold + off
        } else {
            off
        }
    }

    /// Every row sums to one and carries `|T_A|` distinct off-diagonal
    /// neighbours, checked in exact arithmetic.
    pub fn is_row_stochastic(&self) -> bool {
        let total =
            &self.hold + &self.weight * BigRational::from_integer(BigInt::from(self.degree));
        if !total.is_one() {
            return false;
        }
        (0..self.states).all(|r| {
            let mut nb: Vec<u32> = self.neighbours(r).to_vec();
            nb.sort_unstable();
            nb.dedup();
            nb.len() == self.degree && nb.iter().all(|&c| c as usize != r)
        })
    }

    /// `P = Pᵀ` entrywise: every neighbour relation is reciprocated and all
    /// off-diagonal weights are equal.
    pub fn is_symmetric(&self) -> bool {
        (0..self.states).all(|r| {
            self.neighbours(r)
                .iter()
                .all(|&c| self.neighbours(c as usize).contains(&(r as u32)))
        })
    }

    /// `q = P·p`; since `P` is symmetric this is also `p·P`.
    pub fn apply(&self, p: &[f64]) -> Vec<f64> {
        let hold = self.hold.to_f64().unwrap();
        let w = self.weight.to_f64().unwrap();
        (0..self.states)
            .into_par_iter()
            .map(|r| {
                let s: f64 = self.neighbours(r).iter().map(|&c| p[c as usize]).sum();
                hold * p[r] + w * s
            })
            .collect()
    }

    pub fn dense(&self) -> DMatrix<f64> {
        let hold = self.hold.to_f64().unwrap();
        let w = self.weight.to_f64().unwrap();
        let mut m = DMatrix::zeros(self.states, self.states);
        for r in 0..self.states {
            m[(r, r)] += hold;
            for &c in self.neighbours(r) {
                m[(r, c as usize)] += w;
            }
        }
        m
    }

    /// Coordinate list `row,col,num,den`, rows in order, columns ascending.
    pub fn write_coo_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "row,col,num,den")?;
        for r in 0..self.states {
            let mut cols: Vec<usize> = self.neighbours(r).iter().map(|&c| c as usize).collect();
            cols.push(r);
            cols.sort_unstable();
            for c in cols {
                let v = if c == r { &self.hold } else { &self.weight };
                writeln!(out, "{r},{c},{},{}", v.numer(), v.denom())?;
            }
        }
        Ok(())
    }
}

/// All `n!` eigenvalues of the kernel, descending, from a dense symmetric
/// eigensolve.
pub fn numeric_spectrum(spec: &ShuffleSpec) -> Result<Vec<f64>> {
    numeric_spectrum_with(spec, &Capacity::default())
}

pub fn numeric_spectrum_with(spec: &ShuffleSpec, cap: &Capacity) -> Result<Vec<f64>> {
    let n = spec.n();
    if n > cap.max_dense_n {
        return Err(Error::capacity(
            "dense eigensolve",
            format!("n = {n}"),
            format!("n ≤ {}", cap.max_dense_n),
        ));
    }
    let kernel = build_kernel_with(spec, cap)?;
    let eig = SymmetricEigen::new(kernel.dense());
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// `P^t(x, ·)` as a dense vector over ranks.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionVector {
    n: usize,
    t: u64,
    probabilities: Vec<f64>,
}

impl DistributionVector {
    pub fn new(n: usize, t: u64, probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.len() != state_count(n) {
            return Err(Error::invalid(format!(
                "distribution over S_{n} needs {} entries, got {}",
                state_count(n),
                probabilities.len()
            )));
        }
        if probabilities.iter().any(|&p| p.is_nan() || p < -1e-15) {
            return Err(Error::invalid("distribution has a negative entry"));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!("distribution sums to {total}")));
        }
        Ok(DistributionVector {
            n,
            t,
            probabilities,
        })
    }

    /// The point mass at `start`.
    pub fn point_mass(n: usize, start: usize) -> Result<Self> {
        let mut p = vec![0.0; state_count(n)];
        *p.get_mut(start)
            .ok_or_else(|| Error::invalid(format!("rank {start} out of range for n = {n}")))? = 1.0;
        Ok(DistributionVector {
            n,
            t: 0,
            probabilities: p,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn step(&self, kernel: &Kernel) -> DistributionVector {
        DistributionVector {
            n: self.n,
            t: self.t + 1,
            probabilities: kernel.apply(&self.probabilities),
        }
    }

    /// `(1/2)·Σ_σ |p(σ) − 1/n!|`.
    pub fn tv_to_uniform(&self) -> f64 {
        let u = 1.0 / self.probabilities.len() as f64;
        0.5 * self
            .probabilities
            .iter()
            .map(|p| (p - u).abs())
            .sum::<f64>()
    }

    /// `Σ_σ p(σ)·f(σ)` over arrangements.
    pub fn expectation(&self, f: impl Fn(&[usize]) -> f64 + Sync) -> f64 {
        let n = self.n;
        self.probabilities
            .par_iter()
            .enumerate()
            .map(|(r, &p)| if p == 0.0 { 0.0 } else { p * f(&unrank(n, r)) })
            .collect::<Vec<_>>()
            .into_iter()
            .sum()
    }

    /// Little-endian `u32 n`, `u32 t`, then `n!` `f64` values.
    pub fn write_binary<W: Write>(&self, mut out: W) -> io::Result<()> {
        out.write_all(&(self.n as u32).to_le_bytes())?;
        out.write_all(&(self.t as u32).to_le_bytes())?;
        for p in &self.probabilities {
            out.write_all(&p.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut input: R) -> Result<Self> {
        let mut word = [0u8; 4];
        let io_err = |e: io::Error| Error::invalid(format!("reading distribution: {e}"));
        input.read_exact(&mut word).map_err(io_err)?;
        let n = u32::from_le_bytes(word) as usize;
        input.read_exact(&mut word).map_err(io_err)?;
        let t = u32::from_le_bytes(word) as u64;
        if n > 12 {
            return Err(Error::invalid(format!(
                "implausible deck size {n} in header"
            )));
        }
        let mut probabilities = Vec::with_capacity(state_count(n));
        let mut buf = [0u8; 8];
        for _ in 0..state_count(n) {
            input.read_exact(&mut buf).map_err(io_err)?;
            probabilities.push(f64::from_le_bytes(buf));
        }
        DistributionVector::new(n, t, probabilities)
    }
}

/// Distributions `P^t(start, ·)` for `t = 0..=t_max`, yielded lazily.
pub struct Walk<'a> {
    kernel: &'a Kernel,
    current: Option<DistributionVector>,
    t_max: u64,
}

impl<'a> Walk<'a> {
    pub fn new(kernel: &'a Kernel, start: usize, t_max: u64) -> Result<Self> {
        Ok(Walk {
            kernel,
            current: Some(DistributionVector::point_mass(kernel.spec.n(), start)?),
            t_max,
        })
    }
}

impl Iterator for Walk<'_> {
    type Item = DistributionVector;

    fn next(&mut self) -> Option<DistributionVector> {
        let cur = self.current.take()?;
        if cur.t < self.t_max {
            self.current = Some(cur.step(self.kernel));
        }
        Some(cur)
    }
}

/// `d(t)` for `t = 0..=t_max`, from the identity.
pub fn exact_tv_curve(spec: &ShuffleSpec, t_max: u64) -> Result<MixingCurve> {
    exact_tv_curve_from(spec, 0, t_max, &Capacity::default())
}

/// TV to uniform from an arbitrary start rank.
pub fn exact_tv_curve_from(
    spec: &ShuffleSpec,
    start: usize,
    t_max: u64,
    cap: &Capacity,
) -> Result<MixingCurve> {
    let kernel = build_kernel_with(spec, cap)?;
    let points = Walk::new(&kernel, start, t_max)?
        .map(|d| CurvePoint {
            t: d.t(),
            value: d.tv_to_uniform(),
        })
        .collect();
    MixingCurve::new(CurveKind::ExactTv, points)
}

/// The characters of `(n)`, `(n−1,1)`, `(n−2,2)` and `(n−2,1,1)` as
/// polynomials in the number of fixed points `f` and of 2-cycles `c₂`.
pub fn small_character(shape: &Partition, perm: &[usize]) -> Result<f64> {
    let n = perm.len();
    if shape.size() != n {
        return Err(Error::invalid(format!("{shape} is not a partition of {n}")));
    }
    let (f, c2) = cycle_counts(perm);
    let (f, c2) = (f as f64, c2 as f64);
    let parts = shape.parts();
    if parts == [n] {
        Ok(1.0)
    } else if n >= 2 && parts == [n - 1, 1] {
        Ok(f - 1.0)
    } else if n >= 4 && parts == [n - 2, 2] {
        Ok(f * (f - 3.0) / 2.0 + c2)
    } else if n >= 3 && parts == [n - 2, 1, 1] {
        Ok((f - 1.0) * (f - 2.0) / 2.0 - c2)
    } else {
        Err(Error::invalid(format!(
            "character of {shape} is not available; supported shapes are (n), (n−1,1), (n−2,2), (n−2,1,1)"
        )))
    }
}

/// `Σ_σ P^t(id, σ)·χ_shape(σ)`.
pub fn character_expectation_oracle(spec: &ShuffleSpec, t: u64, shape: &Partition) -> Result<f64> {
    let n = spec.n();
    let id: Vec<usize> = (0..n).collect();
    small_character(shape, &id)?;
    let kernel = build_kernel(spec)?;
    let d = Walk::new(&kernel, 0, t)?.last().expect("walk yields t = 0");
    Ok(d.expectation(|p| small_character(shape, p).expect("shape checked")))
}

/// Oracle expectations of the four characters (absent shapes are `None`)
/// and of `(fix − 1)²`, for `t = 0..=t_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleMoments {
    pub t: u64,
    pub characters: [Option<f64>; 4],
    pub fix_minus_one_squared: f64,
}

pub fn oracle_moment_series(spec: &ShuffleSpec, t_max: u64) -> Result<Vec<OracleMoments>> {
    let n = spec.n();
    let shapes: Vec<Option<Partition>> = [
        vec![n],
        vec![n - 1, 1],
        if n >= 4 { vec![n - 2, 2] } else { vec![] },
        if n >= 3 { vec![n - 2, 1, 1] } else { vec![] },
    ]
    .into_iter()
    .map(|p| (!p.is_empty()).then(|| Partition::new(p).expect("valid shape")))
    .collect();
    let kernel = build_kernel(spec)?;
    let profile: Vec<(usize, usize)> = (0..kernel.states())
        .map(|r| cycle_counts(&unrank(n, r)))
        .collect();
    let id: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    for dist in Walk::new(&kernel, 0, t_max)? {
        let p = dist.probabilities();
        let mut characters = [None; 4];
        for (slot, shape) in characters.iter_mut().zip(&shapes) {
            if let Some(shape) = shape {
                small_character(shape, &id)?;
                *slot = Some(weighted(p, &profile, |f, c2| {
                    character_from_counts(shape, n, f, c2)
                }));
            }
        }
        let sq = weighted(p, &profile, |f, _| {
            let x = f as f64 - 1.0;
            x * x
        });
        out.push(OracleMoments {
            t: dist.t(),
            characters,
            fix_minus_one_squared: sq,
        });
    }
    Ok(out)
}

fn character_from_counts(shape: &Partition, n: usize, f: usize, c2: usize) -> f64 {
    let (f, c2) = (f as f64, c2 as f64);
    match shape.parts() {
        [a] if *a == n => 1.0,
        [_, 1] => f - 1.0,
        [_, 2] => f * (f - 3.0) / 2.0 + c2,
        _ => (f - 1.0) * (f - 2.0) / 2.0 - c2,
    }
}

fn weighted(p: &[f64], profile: &[(usize, usize)], g: impl Fn(usize, usize) -> f64) -> f64 {
    p.iter()
        .zip(profile)
        .map(|(&pi, &(f, c2))| pi * g(f, c2))
        .sum()
}

/// Draws single steps of the shuffle without materializing `T_A`.
#[derive(Debug, Clone)]
pub struct StepSampler {
    n: usize,
    /// `(j, first index)` for each active `j`, with `j − 1` indices each.
    blocks: Vec<(usize, u64)>,
    t_a: u64,
}

impl StepSampler {
    pub fn new(spec: &ShuffleSpec) -> Self {
        let mut blocks = Vec::new();
        let mut offset = 0u64;
        for j in spec.active_set() {
            if j >= 2 {
                blocks.push((j, offset));
                offset += (j - 1) as u64;
            }
        }
        StepSampler {
            n: spec.n(),
            blocks,
            t_a: offset,
        }
    }

    /// Holds with probability `1/n`; otherwise applies a uniform
    /// transposition `(i j) ∈ T_A` to positions.
    pub fn step<R: Rng>(&self, rng: &mut R, perm: &mut [usize]) {
        if rng.random_range(0..self.n) == 0 {
            return;
        }
        let r = rng.random_range(0..self.t_a);
        let b = self.blocks.partition_point(|&(_, start)| start <= r) - 1;
        let (j, start) = self.blocks[b];
        let i = (r - start) as usize;
        perm.swap(i, j - 1);
    }
}

/// Summary of `fix − 1` over independent walks from the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkStatistics {
    pub trials: u64,
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    /// `histogram[f]` counts walks ending with `f` fixed points.
    pub histogram: Vec<u64>,
}

impl WalkStatistics {
    pub fn standard_error(&self) -> f64 {
        (self.variance / self.trials as f64).sqrt()
    }
}

/// Runs `trials` walks of `t` steps. Trials are split over
/// [`SAMPLE_SHARDS`] ChaCha8 streams of `rng_seed`, so the result depends
/// only on the arguments.
pub fn sample_walk(
    spec: &ShuffleSpec,
    t: u64,
    trials: u64,
    rng_seed: u64,
) -> Result<WalkStatistics> {
    if trials == 0 {
        return Err(Error::invalid("need at least one trial"));
    }
    let n = spec.n();
    let sampler = StepSampler::new(spec);
    let shards: Vec<Vec<u64>> = (0..SAMPLE_SHARDS)
        .into_par_iter()
        .map(|s| {
            let count = trials / SAMPLE_SHARDS + u64::from(s < trials % SAMPLE_SHARDS);
            let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
            rng.set_stream(s);
            let mut hist = vec![0u64; n + 1];
            let mut perm: Vec<usize> = (0..n).collect();
            for _ in 0..count {
                for (i, v) in perm.iter_mut().enumerate() {
                    *v = i;
                }
                for _ in 0..t {
                    sampler.step(&mut rng, &mut perm);
                }
                hist[cycle_counts(&perm).0] += 1;
            }
            hist
        })
        .collect();
    let mut histogram = vec![0u64; n + 1];
    for h in shards {
        for (a, b) in histogram.iter_mut().zip(h) {
            *a += b;
        }
    }
    let tf = trials as f64;
    let mean = histogram
        .iter()
        .enumerate()
        .map(|(f, &c)| (f as f64 - 1.0) * c as f64)
        .sum::<f64>()
        / tf;
    let variance = if trials > 1 {
        histogram
            .iter()
            .enumerate()
            .map(|(f, &c)| {
                let d = f as f64 - 1.0 - mean;
                d * d * c as f64
            })
            .sum::<f64>()
            / (tf - 1.0)
    } else {
        0.0
    };
    Ok(WalkStatistics {
        trials,
        mean,
        variance,
        histogram,
    })
}

/// Counts of the state reached after one step from the identity, indexed by
/// rank.
pub fn sample_one_step(spec: &ShuffleSpec, trials: u64, rng_seed: u64) -> Result<Vec<u64>> {
    let n = spec.n();
    check_oracle_n(n, &Capacity::default())?;
    let sampler = StepSampler::new(spec);
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut counts = vec![0u64; state_count(n)];
    let mut perm: Vec<usize> = (0..n).collect();
    for _ in 0..trials {
        for (i, v) in perm.iter_mut().enumerate() {
            *v = i;
        }
        sampler.step(&mut rng, &mut perm);
        counts[rank(&perm)] += 1;
    }
    Ok(counts)
}

/// Exact row `P(id, ·)`.
pub fn kernel_row(kernel: &Kernel, row: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); kernel.states()];
    out[row] = kernel.hold().clone();
    for &c in kernel.neighbours(row) {
        out[c as usize] += kernel.weight();
    }
    out
}
