use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Order in which a doubling or nice-and-slow sequence grows its directions.
/// Directions are 1-based (direction 1 is the prime 2).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectionSchedule {
    /// 1; 1,2; 1,2,3; 1,2,3,4; ...
    Staircase,
    /// 1,2,1,3,1,2,1,4,... (one plus the 2-adic valuation of the term index)
    Toeplitz,
    Explicit(Vec<usize>),
}

impl DirectionSchedule {
    /// Direction of the `n`-th term, `n >= 1`.
    pub fn direction(&self, n: u64) -> Result<usize> {
        if n == 0 {
            return Err(Error::InvalidParameter("schedule terms are 1-based".into()));
        }
        match self {
            DirectionSchedule::Staircase => {
                let t = complete_stairs(n - 1);
                Ok((n - t * (t + 1) / 2) as usize)
            }
            DirectionSchedule::Toeplitz => Ok(1 + n.trailing_zeros() as usize),
            DirectionSchedule::Explicit(list) => {
                list.get((n - 1) as usize).copied().ok_or_else(|| {
                    Error::Horizon(format!("explicit schedule has {} terms, asked for {n}", list.len()))
                })
            }
        }
    }

    /// How often each direction occurs among the first `len` terms;
    /// entry `i` is the count of direction `i + 1`.
    pub fn counts(&self, len: u64) -> Result<Vec<u32>> {
        match self {
            DirectionSchedule::Staircase => {
                let t = complete_stairs(len);
                let partial = len - t * (t + 1) / 2;
                let dims = t.max(partial) as usize;
                Ok((1..=dims as u64)
                    .map(|i| ((t + 1).saturating_sub(i) + u64::from(partial >= i)) as u32)
                    .collect())
            }
            DirectionSchedule::Toeplitz => {
                let mut out = Vec::new();
                let mut i = 1u32;
                while i <= 64 && (1u128 << (i - 1)) <= len as u128 {
                    let c = (len >> (i - 1)) - if i < 64 { len >> i } else { 0 };
                    out.push(c as u32);
                    i += 1;
                }
                Ok(out)
            }
            DirectionSchedule::Explicit(list) => {
                if len as usize > list.len() {
                    return Err(Error::Horizon(format!(
                        "explicit schedule has {} terms, asked for {len}",
                        list.len()
                    )));
                }
                let mut out: Vec<u32> = Vec::new();
                for &d in &list[..len as usize] {
                    if d == 0 {
                        return Err(Error::InvalidParameter("direction 0 in schedule".into()));
                    }
                    if out.len() < d {
                        out.resize(d, 0);
                    }
                    out[d - 1] += 1;
                }
                Ok(out)
            }
        }
    }
}

/// Largest `t` with `t(t+1)/2 <= len`.
fn complete_stairs(len: u64) -> u64 {
    let mut t = (((8.0 * len as f64 + 1.0).sqrt() - 1.0) / 2.0) as u64;
    while t * (t + 1) / 2 > len {
        t -= 1;
    }
    while (t + 1) * (t + 2) / 2 <= len {
        t += 1;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counted(s: &DirectionSchedule, len: u64) -> Vec<u32> {
        let mut out: Vec<u32> = Vec::new();
        for n in 1..=len {
            let d = s.direction(n).unwrap();
            if out.len() < d {
                out.resize(d, 0);
            }
            out[d - 1] += 1;
        }
        out
    }

    #[test]
    fn staircase_terms() {
        let s = DirectionSchedule::Staircase;
        let terms: Vec<usize> = (1..=10).map(|n| s.direction(n).unwrap()).collect();
        assert_eq!(terms, vec![1, 1, 2, 1, 2, 3, 1, 2, 3, 4]);
    }

    #[test]
    fn toeplitz_terms() {
        let s = DirectionSchedule::Toeplitz;
        let terms: Vec<usize> = (1..=8).map(|n| s.direction(n).unwrap()).collect();
        assert_eq!(terms, vec![1, 2, 1, 3, 1, 2, 1, 4]);
    }

    #[test]
    fn closed_form_counts_match_enumeration() {
        for s in [DirectionSchedule::Staircase, DirectionSchedule::Toeplitz] {
            for len in 0..300 {
                assert_eq!(s.counts(len).unwrap(), counted(&s, len), "{s:?} {len}");
            }
        }
    }

    #[test]
    fn explicit_counts() {
        let s = DirectionSchedule::Explicit(vec![2, 2, 1]);
        assert_eq!(s.counts(3).unwrap(), vec![1, 2]);
        assert!(s.counts(4).is_err());
    }
}
