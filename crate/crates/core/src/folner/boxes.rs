use serde::{Deserialize, Serialize};

use super::expvec::{exps_to_nat, nat_to_expvec, ExpVec};
use super::FiniteSet;
use crate::error::{Error, Result};

/// Largest set materialized as a list of naturals.
pub const MAX_MATERIALIZED: u128 = 1 << 24;

/// The box {g : 0 <= g_i <= sizes[i]} in exponent coordinates, i.e. the
/// divisors of its leading parameter.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AnchoredBox {
    sizes: Vec<u32>,
}

impl AnchoredBox {
    pub fn new(mut sizes: Vec<u32>) -> Self {
        while sizes.last() == Some(&0) {
            sizes.pop();
        }
        AnchoredBox { sizes }
    }

    pub fn origin() -> Self {
        AnchoredBox { sizes: Vec::new() }
    }

    pub fn from_leading(l: u64) -> Result<Self> {
        Ok(AnchoredBox::new(nat_to_expvec(l)?.exps().to_vec()))
    }

    pub fn sizes(&self) -> &[u32] {
        &self.sizes
    }

    pub fn dim(&self) -> usize {
        self.sizes.len()
    }

    /// Side lengths `sizes[i] + 1`.
    pub fn sides(&self) -> Vec<u64> {
        self.sizes.iter().map(|&k| k as u64 + 1).collect()
    }

    pub fn cardinality(&self) -> Option<u128> {
        self.sizes
            .iter()
            .try_fold(1u128, |acc, &k| acc.checked_mul(k as u128 + 1))
    }

    pub fn leading_parameter(&self) -> Result<u64> {
        exps_to_nat(&self.sizes)
            .ok_or_else(|| Error::Overflow(format!("leading parameter of box {:?}", self.sizes)))
    }

    pub fn contains(&self, g: &[u32]) -> bool {
        g.iter().enumerate().all(|(i, &e)| match self.sizes.get(i) {
            Some(&k) => e <= k,
            None => e == 0,
        })
    }

    pub fn contains_expvec(&self, g: &ExpVec) -> bool {
        self.contains(g.exps())
    }

    /// Colexicographic rank of `g` inside the box (first coordinate fastest).
    pub fn rank(&self, g: &[u32]) -> Option<u64> {
        if !self.contains(g) {
            return None;
        }
        let mut rank = 0u64;
        let mut stride = 1u64;
        for (i, &k) in self.sizes.iter().enumerate() {
            rank += stride * g.get(i).copied().unwrap_or(0) as u64;
            stride *= k as u64 + 1;
        }
        Some(rank)
    }

    /// Points in colexicographic order (first coordinate fastest); every
    /// point has length `dim()`.
    pub fn points(&self) -> BoxPoints<'_> {
        BoxPoints {
            sizes: &self.sizes,
            cur: vec![0; self.sizes.len()],
            done: false,
        }
    }

    /// The box as a sorted set of naturals (its leading parameter's divisors).
    pub fn to_naturals(&self) -> Result<FiniteSet> {
        let card = self
            .cardinality()
            .filter(|&c| c <= MAX_MATERIALIZED)
            .ok_or_else(|| Error::Overflow(format!("box {:?} has too many points", self.sizes)))?;
        self.leading_parameter()?;
        let mut out = vec![1u64];
        out.reserve(card as usize);
        for (i, &k) in self.sizes.iter().enumerate() {
            let p = crate::primes::nth_prime(i + 1)
                .ok_or_else(|| Error::Unsupported("box dimension beyond the prime table".into()))?;
            let len = out.len();
            let mut pk = 1u64;
            for _ in 0..k {
                pk *= p;
                for j in 0..len {
                    out.push(out[j] * pk);
                }
            }
        }
        Ok(FiniteSet::from_unsorted(out))
    }
}

pub struct BoxPoints<'a> {
    sizes: &'a [u32],
    cur: Vec<u32>,
    done: bool,
}

impl Iterator for BoxPoints<'_> {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let out = self.cur.clone();
        let mut i = 0;
        loop {
            if i == self.sizes.len() {
                self.done = true;
                break;
            }
            if self.cur[i] < self.sizes[i] {
                self.cur[i] += 1;
                break;
            }
            self.cur[i] = 0;
            i += 1;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::divisors;

    #[test]
    fn box_is_divisor_set() {
        for l in [1u64, 8, 12, 24, 360, 1001] {
            let b = AnchoredBox::from_leading(l).unwrap();
            assert_eq!(b.to_naturals().unwrap().elems(), divisors(l).as_slice());
            assert_eq!(b.cardinality().unwrap(), divisors(l).len() as u128);
            assert_eq!(b.leading_parameter().unwrap(), l);
        }
    }

    #[test]
    fn colex_points_and_rank() {
        let b = AnchoredBox::new(vec![1, 2]);
        let pts: Vec<Vec<u32>> = b.points().collect();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[1], vec![1, 0]);
        assert_eq!(pts[2], vec![0, 1]);
        for (r, p) in pts.iter().enumerate() {
            assert_eq!(b.rank(p), Some(r as u64));
        }
        assert_eq!(AnchoredBox::origin().points().count(), 1);
    }
}
