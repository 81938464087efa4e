use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primes::{factorize, nth_prime, prime_index, primes};

/// A natural number written as its prime-exponent vector: `exps[i]` is the
/// exponent of the `(i+1)`-th prime. Trailing zeros are trimmed, so the
/// number 1 is the empty vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct ExpVec {
    exps: Vec<u32>,
}

impl ExpVec {
    pub fn zero() -> Self {
        ExpVec { exps: Vec::new() }
    }

    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        ExpVec { exps }
    }

    /// Unit vector in direction `i` (1-based, direction 1 is the prime 2).
    pub fn unit(i: usize) -> Self {
        assert!(i >= 1, "directions are 1-based");
        let mut exps = vec![0; i];
        exps[i - 1] = 1;
        ExpVec { exps }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    /// Exponent in 1-based direction `i` (zero beyond the stored length).
    pub fn get(&self, i: usize) -> u32 {
        self.exps.get(i - 1).copied().unwrap_or(0)
    }

    pub fn dim(&self) -> usize {
        self.exps.len()
    }

    pub fn is_zero(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn add(&self, other: &ExpVec) -> ExpVec {
        let n = self.exps.len().max(other.exps.len());
        let exps = (0..n)
            .map(|i| {
                self.exps.get(i).copied().unwrap_or(0) + other.exps.get(i).copied().unwrap_or(0)
            })
            .collect();
        ExpVec::new(exps)
    }

    /// Componentwise order, which is divisibility on the naturals.
    pub fn le(&self, other: &ExpVec) -> bool {
        self.exps.len() <= other.exps.len()
            && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }
}

/// Exponent vector of `m`. Every prime factor must lie in the prime table.
pub fn nat_to_expvec(m: u64) -> Result<ExpVec> {
    if m == 0 || m >= 1 << 63 {
        return Err(Error::InvalidParameter(format!("{m} is outside 1..2^63")));
    }
    let mut exps = Vec::new();
    for (p, e) in factorize(m) {
        let idx = prime_index(p).ok_or_else(|| {
            Error::Unsupported(format!("prime factor {p} of {m} is beyond the prime table"))
        })?;
        if exps.len() < idx {
            exps.resize(idx, 0);
        }
        exps[idx - 1] = e;
    }
    Ok(ExpVec::new(exps))
}

/// The natural number with exponent vector `g`, if it fits 63 bits.
pub fn expvec_to_nat(g: &ExpVec) -> Result<u64> {
    exps_to_nat(g.exps()).ok_or_else(|| Error::Overflow(format!("{:?} exceeds 63 bits", g.exps())))
}

/// Same as [`expvec_to_nat`] on a raw exponent slice; `None` on overflow.
pub fn exps_to_nat(exps: &[u32]) -> Option<u64> {
    let mut acc: u64 = 1;
    for (i, &e) in exps.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let p = nth_prime(i + 1)?;
        let pe = p.checked_pow(e)?;
        acc = acc.checked_mul(pe)?;
    }
    (acc < 1 << 63).then_some(acc)
}

/// Exponents of the first `dims` primes of `m` together with the cofactor
/// left after removing them.
pub fn leading_exps(mut m: u64, dims: usize) -> (Vec<u32>, u64) {
    let mut exps = vec![0u32; dims];
    for (i, &p) in primes().iter().take(dims).enumerate() {
        if m == 1 {
            break;
        }
        while m % p == 0 {
            m /= p;
            exps[i] += 1;
        }
    }
    (exps, m)
}
