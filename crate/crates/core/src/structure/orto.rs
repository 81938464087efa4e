use num_rational::Ratio;
use serde::Serialize;

use super::NatSet;
use crate::error::{Error, Result};
use crate::folner::{density, AnchoredBox, DensityTable, FolnerSpec, Semigroup};
use crate::primes::{factorize, prime_index};

/// Fraction of the elements of the box divisible by m.
pub fn multiples_fraction(b: &AnchoredBox, m: u64) -> Ratio<u128> {
    let sizes = b.sizes();
    let mut num = 1u128;
    let mut den = 1u128;
    for (p, e) in factorize(m) {
        let side = prime_index(p)
            .and_then(|i| sizes.get(i - 1))
            .map(|&s| s as u128 + 1)
            .unwrap_or(1);
        num *= side.saturating_sub(e as u128);
        den *= side;
    }
    Ratio::new(num, den)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrtoStage {
    pub m: u64,
    /// n_m + 1: from this index on, multiples of m! fill more than 1 - 1/m
    /// of every K_n within the horizon.
    pub start: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrtoSet {
    pub stages: Vec<OrtoStage>,
    /// Last index whose box lies within the horizon.
    pub last_index: u64,
    #[serde(skip)]
    pub set: NatSet,
    /// Density along the multiplicative spec at every index up to the last.
    pub multiplicative: DensityTable,
    /// |A ∩ [1, N]| / N.
    pub additive: f64,
}

const MAX_STAGE: u64 = 20;

/// A set of multiplicative density 1 along the given box sequence whose
/// additive density vanishes: K_1 ∪ ... ∪ K_{n_2}, then the multiples of m!
/// in K_{n_m + 1}, ..., K_{n_{m+1}} for m = 2, 3, ... The thresholds n_m are
/// read off the boxes within the horizon.
pub fn orto_set(spec: &FolnerSpec, horizon: u64) -> Result<OrtoSet> {
    if spec.semigroup() != Semigroup::Multiplicative {
        return Err(Error::InvalidParameter("the construction needs a box sequence in (N, x)".into()));
    }
    spec.validate()?;
    let first = spec.first_index();
    let mut boxes = Vec::new();
    let mut n = first;
    while spec.len().is_none_or(|len| n <= len) {
        let b = spec.box_at(n)?;
        match b.leading_parameter() {
            Ok(l) if l <= horizon => boxes.push(b),
            _ => break,
        }
        n += 1;
    }
    if boxes.is_empty() {
        return Err(Error::Horizon(format!("no box lies within {horizon}")));
    }
    let last = first + boxes.len() as u64 - 1;
    let at = |n: u64| &boxes[(n - first) as usize];
    let mut stages: Vec<OrtoStage> = Vec::new();
    let mut fact = 1u64;
    for m in 2..=MAX_STAGE {
        fact *= m;
        let good = |n: u64| multiples_fraction(at(n), fact) > Ratio::new(m as u128 - 1, m as u128);
        let start = match (first..=last).rev().find(|&n| !good(n)) {
            Some(bad) if bad == last => break,
            Some(bad) => bad + 1,
            None => first,
        };
        let start = start.max(stages.last().map_or(first, |s| s.start));
        stages.push(OrtoStage { m, start });
    }
    if stages.len() < 2 {
        return Err(Error::Horizon(format!(
            "boxes up to {horizon} exhibit {} threshold stage(s); two are needed",
            stages.len()
        )));
    }
    let mut elems = Vec::new();
    for n in first..stages[0].start {
        elems.extend(at(n).to_naturals()?.iter());
    }
    for (idx, s) in stages.iter().enumerate() {
        let fact: u64 = (2..=s.m).product();
        let end = stages.get(idx + 1).map_or(last + 1, |t| t.start);
        for n in s.start..end {
            elems.extend(at(n).to_naturals()?.iter().filter(|v| v % fact == 0));
        }
    }
    let set = NatSet::new(elems, horizon)?.with_provenance("multiplicatively full, additively null");
    let ns: Vec<u64> = (first..=last).collect();
    let multiplicative = density(|v| set.contains(v), spec, &ns)?;
    let additive = set.len() as f64 / horizon as f64;
    Ok(OrtoSet { stages, last_index: last, set, multiplicative, additive })
}
