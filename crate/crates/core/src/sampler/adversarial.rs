use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::folner::{AnchoredBox, DirectionSchedule, FolnerSpec};
use crate::primes::{nth_prime, PRIME_TABLE_LEN};
use crate::seq::BitSeq;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdversarialStep {
    /// Index of the set this step produced.
    pub n: u64,
    pub direction: usize,
    /// Whether this was a data-driven (odd) step.
    pub adversarial: bool,
    /// Data-driven step whose added half is all zeros.
    pub success: bool,
    /// Data-driven step that found no all-zero direction and fell back to
    /// the staircase.
    pub fallback: bool,
    pub card: u64,
    pub zeros: u64,
    pub zero_fraction: Ratio<u64>,
    /// Guaranteed zero fraction from the successes so far: a success gives
    /// 1/2 + previous/2, any other step previous/2.
    pub ledger_bound: Ratio<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdversarialRun {
    pub steps: Vec<AdversarialStep>,
    /// Steps not taken because the next staircase doubling left the horizon.
    pub truncated: bool,
    #[serde(skip)]
    pub spec: FolnerSpec,
}

impl AdversarialRun {
    pub fn successes(&self) -> usize {
        self.steps.iter().filter(|s| s.success).count()
    }

    /// Whether every recorded zero fraction meets its ledger bound.
    pub fn ledger_holds(&self) -> bool {
        self.steps.iter().all(|s| s.zero_fraction >= s.ledger_bound)
    }
}

fn multiplier(sizes: &[u32], dir: usize) -> Option<u64> {
    let p = nth_prime(dir)?;
    let side = sizes.get(dir - 1).map(|&s| s + 1).unwrap_or(1);
    p.checked_pow(side)
}

fn zeros_in(x: &BitSeq, pts: &[u64]) -> u64 {
    pts.iter().filter(|&&m| !x.bit(m)).count() as u64
}

/// Doubles F_0 = {1} `steps` times: even steps follow the staircase, odd
/// steps (new halves of 1, 4, 16, ... cells) take the least direction
/// whose new half reads only zeros in x, probing only boxes with leading
/// parameter ≤ min(horizon, |x|).
pub fn adversarial_doubling(x: &BitSeq, steps: u64, horizon: u64) -> Result<AdversarialRun> {
    let limit = horizon.min(x.len());
    let stairs = DirectionSchedule::Staircase;
    let mut stair_term = 0u64;
    let mut sizes: Vec<u32> = Vec::new();
    let mut leading = 1u64;
    let mut points = vec![1u64];
    let mut zeros = zeros_in(x, &points);
    let mut bound = Ratio::new(0u64, 1);
    let mut directions = Vec::new();
    let mut out = Vec::new();
    let mut truncated = false;
    if limit < 1 {
        return Err(Error::Horizon("empty horizon".into()));
    }
    for n in 1..=steps {
        let adversarial = n % 2 == 1;
        let mut chosen = None;
        if adversarial {
            for dir in 1..=PRIME_TABLE_LEN {
                let Some(mult) = multiplier(&sizes, dir) else { continue };
                let fits = leading.checked_mul(mult).is_some_and(|l| l <= limit);
                if !fits {
                    if dir > sizes.len() {
                        break;
                    }
                    continue;
                }
                if points.iter().all(|&m| !x.bit(m * mult)) {
                    chosen = Some((dir, mult));
                    break;
                }
            }
        }
        let success = chosen.is_some();
        let (dir, mult) = match chosen {
            Some(c) => c,
            None => {
                let dir = stairs.direction(stair_term + 1)?;
                match multiplier(&sizes, dir).filter(|&m| leading.checked_mul(m).is_some_and(|l| l <= limit)) {
                    Some(m) => {
                        stair_term += 1;
                        (dir, m)
                    }
                    None => {
                        if out.is_empty() {
                            return Err(Error::Horizon("no doubling fits the horizon".into()));
                        }
                        truncated = true;
                        break;
                    }
                }
            }
        };
        let added: Vec<u64> = points.iter().map(|&m| m * mult).collect();
        zeros += zeros_in(x, &added);
        points.extend(added);
        leading *= mult;
        if sizes.len() < dir {
            sizes.resize(dir, 0);
        }
        sizes[dir - 1] = sizes[dir - 1] * 2 + 1;
        directions.push(dir);
        bound = if success { Ratio::new(1, 2) + bound / 2 } else { bound / 2 };
        let card = points.len() as u64;
        out.push(AdversarialStep {
            n,
            direction: dir,
            adversarial,
            success,
            fallback: adversarial && !success,
            card,
            zeros,
            zero_fraction: Ratio::new(zeros, card),
            ledger_bound: bound,
        });
    }
    debug_assert_eq!(AnchoredBox::new(sizes).leading_parameter().ok(), Some(leading));
    Ok(AdversarialRun {
        steps: out,
        truncated,
        spec: FolnerSpec::Doubling { directions: DirectionSchedule::Explicit(directions) },
    })
}
