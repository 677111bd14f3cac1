//! Exact spectral analysis of card shuffles driven by Jucys–Murphy
//! transpositions.
//!
//! A shuffle on `n` cards is fixed by an active set `A ⊆ {1, …, n}`: each
//! step holds with probability `1/n`, otherwise applies a uniformly chosen
//! transposition `(i j)` with `i < j` and `j ∈ A`. The k-star shuffle takes
//! `A = {n-k+1, …, n}`; `k = 1` is star transpositions and `k = n` is random
//! transpositions.
//!
//! * [`partitions`]: partitions, dominance, contents, straight and skew dimensions.
//! * [`tableaux`]: standard Young tableaux and the k-diagonal statistics.
//! * [`spectrum`]: closed-form eigenvalues with multiplicities and eigenvalue bounds.
//! * [`mixing`]: ℓ² upper bounds, cutoff times, character lower bounds, limit profiles.
//! * [`oracle`]: explicit kernels on `S_n`, dense spectra, exact TV curves, Monte Carlo.
//! * [`verify`]: the named invariant suite used by the `verify` command.

pub mod capacity;
pub mod error;
pub mod mixing;
pub mod numeric;
pub mod oracle;
pub mod partitions;
pub mod spectrum;
pub mod tableaux;
pub mod verify;

pub use capacity::Capacity;
pub use error::{Error, Result};
pub use partitions::{Partition, SkewShape};
pub use spectrum::{EigenvalueRecord, Label, ShuffleSpec};
pub use tableaux::StandardYoungTableau;
