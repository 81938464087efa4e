use num_rational::Ratio;
use serde::Serialize;

use super::search::linear_solutions_by_runs;
use super::NatSet;
use crate::error::{Error, Result};

type Q = Ratio<u128>;

fn disjoint(a: (Q, Q), b: (Q, Q)) -> bool {
    a.1 < b.0 || b.1 < a.0
}

/// The largest δ = 2^{-t} with k[1,1+δ] disjoint from i[1,1+2δ],
/// j[1,1+2δ] and (i+j)[1,1+δ] (closed real intervals).
pub fn separating_delta(i: u64, j: u64, k: u64) -> Result<Ratio<u64>> {
    if i == 0 || j == 0 || k == 0 {
        return Err(Error::InvalidParameter("coefficients must be positive".into()));
    }
    if k == i || k == j || k == i + j {
        return Err(Error::InvalidParameter(format!(
            "{i}a + {j}b = {k}c is partition regular; no thick set avoids it"
        )));
    }
    let scaled = |c: u64, w: Q| (Q::from_integer(c as u128), Q::from_integer(c as u128) * (Q::from_integer(1) + w));
    for t in 0..60u32 {
        let d = Q::new(1, 1u128 << t);
        let target = scaled(k, d);
        let two = d * 2;
        if [scaled(i, two), scaled(j, two), scaled(i + j, d)].iter().all(|&iv| disjoint(target, iv)) {
            return Ok(Ratio::new(1, 1u64 << t));
        }
    }
    Err(Error::InvalidParameter("no separating δ found".into()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThickCounterexample {
    pub coefficients: [u64; 3],
    pub delta: Ratio<u64>,
    /// Growth ratio of the interval anchors.
    pub ratio: u64,
    /// r_1, r_2, ... up to the horizon.
    pub anchors: Vec<u64>,
    #[serde(skip)]
    pub set: NatSet,
    /// Solutions found by the exhaustive check (empty when verified).
    pub solutions: Vec<[u64; 3]>,
    pub verified: bool,
    pub longest_interval: u64,
}

/// A thick set A = ∪ r_n[1, 1+δ] (within 1..=N) with no solution of
/// ia + jb = kc, together with an exhaustive check of that claim.
pub fn thick_counterexample(i: u64, j: u64, k: u64, horizon: u64) -> Result<ThickCounterexample> {
    let delta = separating_delta(i, j, k)?;
    let (dn, dd) = (*delta.numer() as u128, *delta.denom() as u128);
    let one_d = Ratio::new(dd + dn, dd);
    let one_2d = Ratio::new(dd + 2 * dn, dd);
    let (lo, hi) = (i.min(j) as u128, i.max(j) as u128);
    // Large enough that mixed sums stay within i r_n[1,1+2δ] or j r_n[1,1+2δ]
    // and no sum reaches another k I_l.
    let needs = [
        one_d * 10,
        one_d * hi / (Ratio::from_integer(lo) * delta_q(delta)),
        one_d * k as u128,
        one_2d * (i + j) as u128 / k as u128,
    ];
    let ratio = needs.iter().map(|r| r.floor().to_integer() + 1).max().unwrap();
    let ratio = u64::try_from(ratio).map_err(|_| Error::Overflow("anchor ratio".into()))?;
    let mut anchors = Vec::new();
    let mut elems = Vec::new();
    let mut r = dd as u64;
    while r <= horizon {
        anchors.push(r);
        let top = (r / dd as u64) * (dd + dn) as u64;
        elems.extend(r..=top.min(horizon));
        match r.checked_mul(ratio) {
            Some(next) => r = next,
            None => break,
        }
    }
    let set = NatSet::new(elems, horizon)?.with_provenance(format!("thick set avoiding {i}a+{j}b={k}c"));
    let solutions = linear_solutions_by_runs(&set, i, j, k, 1)?;
    Ok(ThickCounterexample {
        coefficients: [i, j, k],
        delta,
        ratio,
        anchors,
        verified: solutions.is_empty(),
        longest_interval: set.longest_run(),
        solutions,
        set,
    })
}

fn delta_q(d: Ratio<u64>) -> Q {
    Q::new(*d.numer() as u128, *d.denom() as u128)
}
