use serde::{Deserialize, Serialize};

use super::boxes::AnchoredBox;
use super::schedule::DirectionSchedule;
use super::{FiniteSet, Semigroup};
use crate::error::{Error, Result};
use crate::primes::nth_prime;

/// Where a nice box sequence gets its leading parameters from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NiceSource {
    /// Explicit L_1, L_2, ... with L_n | L_{n+1} and L_n != L_{n+1}.
    Leading(Vec<u64>),
    /// Nice and slow: L_{n+1} / L_n is the prime of the (n+1)-th direction.
    Directions(DirectionSchedule),
}

/// Recipe for the n-th averaging set F_n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FolnerSpec {
    /// F_n = {1, ..., n} in (N, +).
    Classical,
    /// F_n is the union of the closed intervals `sets[n-1]` in (N, +).
    IntervalUnion { sets: Vec<Vec<(u64, u64)>> },
    /// Anchored boxes in (N, x), increasing.
    NiceBoxes { source: NiceSource },
    /// Anchored boxes in (N, x) doubling one side per step; F_0 = {1}.
    Doubling { directions: DirectionSchedule },
}

impl FolnerSpec {
    pub fn semigroup(&self) -> Semigroup {
        match self {
            FolnerSpec::Classical | FolnerSpec::IntervalUnion { .. } => Semigroup::Additive,
            FolnerSpec::NiceBoxes { .. } | FolnerSpec::Doubling { .. } => Semigroup::Multiplicative,
        }
    }

    pub fn first_index(&self) -> u64 {
        match self {
            FolnerSpec::Doubling { .. } => 0,
            _ => 1,
        }
    }

    /// Number of defined indices, for finite recipes.
    pub fn len(&self) -> Option<u64> {
        match self {
            FolnerSpec::IntervalUnion { sets } => Some(sets.len() as u64),
            FolnerSpec::NiceBoxes { source: NiceSource::Leading(l) } => Some(l.len() as u64),
            FolnerSpec::NiceBoxes { source: NiceSource::Directions(DirectionSchedule::Explicit(d)) }
            | FolnerSpec::Doubling { directions: DirectionSchedule::Explicit(d) } => {
                Some(d.len() as u64)
            }
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            FolnerSpec::Classical => Ok(()),
            FolnerSpec::IntervalUnion { sets } => {
                for (n, ivs) in sets.iter().enumerate() {
                    let mut prev_hi = 0u64;
                    for (j, &(lo, hi)) in ivs.iter().enumerate() {
                        if lo == 0 || lo > hi || (j > 0 && lo <= prev_hi) {
                            return Err(Error::InvalidParameter(format!(
                                "F_{}: intervals must be ascending, disjoint and within N",
                                n + 1
                            )));
                        }
                        prev_hi = hi;
                    }
                }
                Ok(())
            }
            FolnerSpec::NiceBoxes { source: NiceSource::Leading(ls) } => {
                for w in ls.windows(2) {
                    if w[0] == 0 || w[1] % w[0] != 0 || w[1] == w[0] {
                        return Err(Error::NotFolner(format!(
                            "leading parameters {} -> {} are not strictly increasing under divisibility",
                            w[0], w[1]
                        )));
                    }
                }
                if ls.first() == Some(&0) {
                    return Err(Error::InvalidParameter("leading parameter 0".into()));
                }
                Ok(())
            }
            FolnerSpec::NiceBoxes { source: NiceSource::Directions(d) }
            | FolnerSpec::Doubling { directions: d } => {
                if let DirectionSchedule::Explicit(list) = d {
                    if list.contains(&0) {
                        return Err(Error::InvalidParameter("direction 0 in schedule".into()));
                    }
                }
                Ok(())
            }
        }
    }

    fn check_index(&self, n: u64) -> Result<()> {
        if n < self.first_index() {
            return Err(Error::InvalidParameter(format!("index {n} below the first index")));
        }
        if let Some(len) = self.len() {
            let last = len;
            if n > last {
                return Err(Error::Horizon(format!("recipe defines indices up to {last}, asked for {n}")));
            }
        }
        Ok(())
    }

    /// The box F_n for the multiplicative recipes.
    pub fn box_at(&self, n: u64) -> Result<AnchoredBox> {
        self.check_index(n)?;
        match self {
            FolnerSpec::NiceBoxes { source: NiceSource::Leading(ls) } => {
                AnchoredBox::from_leading(ls[(n - 1) as usize])
            }
            FolnerSpec::NiceBoxes { source: NiceSource::Directions(d) } => {
                Ok(AnchoredBox::new(d.counts(n)?))
            }
            FolnerSpec::Doubling { directions } => {
                let counts = directions.counts(n)?;
                let sizes = counts
                    .iter()
                    .map(|&c| {
                        if c >= 32 {
                            Err(Error::Overflow(format!("side 2^{c} of doubling box F_{n}")))
                        } else {
                            Ok((1u32 << c) - 1)
                        }
                    })
                    .collect::<Result<Vec<u32>>>()?;
                Ok(AnchoredBox::new(sizes))
            }
            _ => Err(Error::Unsupported("additive recipes have no boxes".into())),
        }
    }

    /// The set F_n as naturals. For (N, x) this is the divisor set of the
    /// leading parameter, so it needs L_n < 2^63.
    pub fn folner_set(&self, n: u64) -> Result<FiniteSet> {
        self.validate()?;
        self.check_index(n)?;
        match self {
            FolnerSpec::Classical => Ok(FiniteSet::from_sorted_unchecked((1..=n).collect())),
            FolnerSpec::IntervalUnion { sets } => {
                let ivs = &sets[(n - 1) as usize];
                let total: u64 = ivs.iter().map(|(lo, hi)| hi - lo + 1).sum();
                if total as u128 > super::boxes::MAX_MATERIALIZED {
                    return Err(Error::Overflow(format!("F_{n} has {total} elements")));
                }
                Ok(FiniteSet::from_sorted_unchecked(
                    ivs.iter().flat_map(|&(lo, hi)| lo..=hi).collect(),
                ))
            }
            _ => self.box_at(n)?.to_naturals(),
        }
    }

    pub fn cardinality(&self, n: u64) -> Result<u128> {
        self.check_index(n)?;
        match self {
            FolnerSpec::Classical => Ok(n as u128),
            FolnerSpec::IntervalUnion { sets } => Ok(sets[(n - 1) as usize]
                .iter()
                .map(|(lo, hi)| (hi - lo + 1) as u128)
                .sum()),
            FolnerSpec::Doubling { .. } => {
                if n >= 128 {
                    Err(Error::Overflow(format!("|F_{n}| = 2^{n}")))
                } else {
                    Ok(1u128 << n)
                }
            }
            FolnerSpec::NiceBoxes { .. } => self
                .box_at(n)?
                .cardinality()
                .ok_or_else(|| Error::Overflow(format!("|F_{n}|"))),
        }
    }

    /// Leading parameter of F_n for the box recipes.
    pub fn leading_parameter(&self, n: u64) -> Result<u64> {
        self.box_at(n)?.leading_parameter()
    }
}

/// Leading parameter ratio of consecutive nice-and-slow boxes.
pub fn slow_step_prime(schedule: &DirectionSchedule, n: u64) -> Result<u64> {
    let d = schedule.direction(n)?;
    nth_prime(d).ok_or_else(|| Error::Unsupported(format!("direction {d} beyond the prime table")))
}
