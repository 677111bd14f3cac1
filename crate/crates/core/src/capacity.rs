//! Size guards for the enumerations and brute-force oracles.

/// Environment variable that multiplies every guard (or lifts them all when
/// set to `unlimited`).
pub const OVERRIDE_ENV: &str = "SHUFFLE_CAPACITY_OVERRIDE";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Capacity {
    /// Largest `n` for which partitions of `n` are materialized.
    pub max_partition_n: usize,
    /// Largest number of partitions materialized in one list.
    pub max_partitions: u64,
    /// Largest number of standard Young tableaux enumerated in one call.
    pub max_syt: u64,
    /// Largest deck size for explicit kernels on `S_n`.
    pub max_oracle_n: usize,
    /// Largest deck size for the dense eigensolve.
    pub max_dense_n: usize,
}

impl Default for Capacity {
    fn default() -> Self {
        Capacity {
            max_partition_n: 200,
            max_partitions: 2_000_000,
            max_syt: 1_000_000,
            max_oracle_n: 8,
            max_dense_n: 6,
        }
    }
}

impl Capacity {
    /// No limits at all.
    pub fn unlimited() -> Self {
        Capacity {
            max_partition_n: usize::MAX,
            max_partitions: u64::MAX,
            max_syt: u64::MAX,
            max_oracle_n: usize::MAX,
            max_dense_n: usize::MAX,
        }
    }

    /// Multiplies the count limits by `factor`; deck-size limits grow by
    /// one card per doubling.
    pub fn scaled(factor: u64) -> Self {
        let base = Capacity::default();
        let extra_cards = (64 - factor.max(1).leading_zeros() - 1) as usize;
        Capacity {
            max_partition_n: base.max_partition_n.saturating_mul(factor as usize),
            max_partitions: base.max_partitions.saturating_mul(factor),
            max_syt: base.max_syt.saturating_mul(factor),
            max_oracle_n: base.max_oracle_n + extra_cards,
            max_dense_n: base.max_dense_n + extra_cards,
        }
    }

    /// Reads [`OVERRIDE_ENV`]. Returns the default limits when unset, plus a
    /// flag telling the caller whether an override is active.
    pub fn from_env() -> (Self, bool) {
        match std::env::var(OVERRIDE_ENV) {
            Ok(v) if v.trim().eq_ignore_ascii_case("unlimited") => (Capacity::unlimited(), true),
            Ok(v) => match v.trim().parse::<u64>() {
                Ok(f) if f > 1 => (Capacity::scaled(f), true),
                _ => (Capacity::default(), false),
            },
            Err(_) => (Capacity::default(), false),
        }
    }
}
