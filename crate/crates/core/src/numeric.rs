//! Exact-integer helpers and log-domain floating point used by the bounds.

use std::ops::Sub;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

fn factorial_table() -> &'static Mutex<Vec<BigUint>> {
    static TABLE: OnceLock<Mutex<Vec<BigUint>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(vec![BigUint::one()]))
}

/// `n!`, memoized.
pub fn factorial(n: usize) -> BigUint {
    let mut table = factorial_table().lock().expect("factorial table poisoned");
    while table.len() <= n {
        let next = table.last().unwrap() * BigUint::from(table.len());
        table.push(next);
    }
    table[n].clone()
}

pub fn binomial(n: usize, r: usize) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for i in 0..r {
        acc *= BigUint::from(n - i);
        acc /= BigUint::from(i + 1);
    }
    acc
}

/// Number of derangements of `m` points.
pub fn derangements(m: usize) -> BigUint {
    // D(m) = (m-1)(D(m-1) + D(m-2))
    let (mut prev, mut cur) = (BigUint::one(), BigUint::zero());
    if m == 0 {
        return prev;
    }
    for i in 2..=m {
        let next = BigUint::from(i - 1) * (&prev + &cur);
        prev = cur;
        cur = next;
    }
    cur
}

/// Smallest integer `s` with `s² ≥ x`.
pub fn ceil_sqrt(x: &BigUint) -> BigUint {
    let s = x.sqrt();
    if &(&s * &s) == x {
        s
    } else {
        s + 1u32
    }
}

/// Natural log of a positive big integer; `-inf` for zero.
pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        let sign = if q.numer() < &BigInt::zero() {
            -1.0
        } else {
            1.0
        };
        let num = q.numer().magnitude();
        let den = q.denom().magnitude();
        sign * (ln_biguint(num) - ln_biguint(den)).exp()
    })
}

/// A real number stored as sign and log-magnitude, so that `n!`-sized
/// multiplicities and tiny eigenvalue powers can meet without overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogValue {
    pub sign: i8,
    pub ln_abs: f64,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue {
        sign: 0,
        ln_abs: f64::NEG_INFINITY,
    };

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            LogValue::ZERO
        } else {
            LogValue {
                sign: if x < 0.0 { -1 } else { 1 },
                ln_abs: x.abs().ln(),
            }
        }
    }

    /// `x^t` for integer `t ≥ 0`.
    pub fn pow(self, t: u64) -> Self {
        if t == 0 {
            return LogValue {
                sign: 1,
                ln_abs: 0.0,
            };
        }
        if self.sign == 0 {
            return LogValue::ZERO;
        }
        LogValue {
            sign: if self.sign < 0 && t % 2 == 1 { -1 } else { 1 },
            ln_abs: self.ln_abs * t as f64,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.sign as f64 * self.ln_abs.exp()
    }
}

impl Sub for LogValue {
    type Output = LogValue;

    fn sub(self, other: LogValue) -> LogValue {
        if other.sign == 0 {
            return self;
        }
        if self.sign == 0 {
            return LogValue {
                sign: -other.sign,
                ..other
            };
        }
        let top = self.ln_abs.max(other.ln_abs);
        let a = self.sign as f64 * (self.ln_abs - top).exp();
        let b = other.sign as f64 * (other.ln_abs - top).exp();
        let d = a - b;
        if d == 0.0 {
            LogValue::ZERO
        } else {
            LogValue {
                sign: if d < 0.0 { -1 } else { 1 },
                ln_abs: top + d.abs().ln(),
            }
        }
    }
}

/// Streaming sum of nonnegative terms given by their logarithms.
#[derive(Debug, Clone, Copy)]
pub struct LogSum {
    top: f64,
    scaled: f64,
}

impl Default for LogSum {
    fn default() -> Self {
        LogSum {
            top: f64::NEG_INFINITY,
            scaled: 0.0,
        }
    }
}

impl LogSum {
    pub fn add_ln(&mut self, ln_term: f64) {
        if ln_term == f64::NEG_INFINITY {
            return;
        }
        if ln_term > self.top {
            self.scaled = self.scaled * (self.top - ln_term).exp() + 1.0;
            self.top = ln_term;
        } else {
            self.scaled += (ln_term - self.top).exp();
        }
    }

    pub fn merge(&mut self, other: LogSum) {
        if other.scaled > 0.0 {
            self.add_ln(other.top + other.scaled.ln());
        }
    }

    pub fn ln(&self) -> f64 {
        if self.scaled == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.top + self.scaled.ln()
        }
    }

    pub fn value(&self) -> f64 {
        self.ln().exp()
    }
}
