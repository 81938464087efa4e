use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::NatSet;
use crate::error::{Error, Result};
use crate::primes::factorize;

/// Guard on the number of candidate tuples a search may visit.
pub const MAX_CANDIDATES: u64 = 1_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Pattern {
    /// ia + jb = kc with a, b, c ∈ A.
    Linear { i: u64, j: u64, k: u64 },
    /// ab = c^k with a, b, c ∈ A.
    Power { k: u32 },
    /// a + b ∈ A and ab ∈ A.
    SumProd,
    /// q^j (a + id) ∈ A for 0 ≤ i, j ≤ n.
    GeoArith { n: u32 },
    /// b (a + id)^j ∈ A for 0 ≤ i, j ≤ n.
    PolyGeo { n: u32 },
}

impl Pattern {
    /// Names of the witness coordinates, in search order.
    pub fn variables(&self) -> &'static [&'static str] {
        match self {
            Pattern::Linear { .. } | Pattern::Power { .. } => &["a", "b", "c"],
            Pattern::SumProd => &["a", "b"],
            Pattern::GeoArith { .. } => &["q", "d", "a"],
            Pattern::PolyGeo { .. } => &["d", "a", "b"],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchBounds {
    /// Stop after this many witnesses.
    pub limit: Option<usize>,
    pub q_max: u64,
    pub d_max: u64,
    pub a_max: u64,
    pub b_max: u64,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { limit: None, q_max: 10, d_max: 100, a_max: 1000, b_max: 1000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    pub pattern: Pattern,
    pub variables: Vec<String>,
    pub witnesses: Vec<Vec<u64>>,
    pub candidates: u64,
    /// The whole bounded space was searched, so an empty list is a proof of
    /// absence within the bounds.
    pub exhaustive: bool,
}

fn power(b: u64, e: u32, cap: u64) -> Option<u64> {
    b.checked_pow(e).filter(|&v| v <= cap)
}

/// Runs `visit` over the outer values in parallel chunks, keeping results in
/// outer order, until `limit` witnesses are known.
fn drive<F>(outer: &[u64], limit: Option<usize>, visit: F) -> Result<(Vec<Vec<u64>>, u64, bool)>
where
    F: Fn(u64, Option<usize>) -> (Vec<Vec<u64>>, u64) + Sync,
{
    let chunk = (rayon::current_num_threads() * 4).max(8);
    let mut found = Vec::new();
    let mut candidates = 0u64;
    for part in outer.chunks(chunk) {
        let results: Vec<(Vec<Vec<u64>>, u64)> = part.par_iter().map(|&o| visit(o, limit)).collect();
        for (w, c) in results {
            candidates += c;
            found.extend(w);
        }
        if let Some(l) = limit {
            if found.len() >= l {
                found.truncate(l);
                return Ok((found, candidates, false));
            }
        }
        if candidates > MAX_CANDIDATES {
            return Err(Error::BoundExplosion(format!("visited {candidates} candidates")));
        }
    }
    Ok((found, candidates, true))
}

fn guard(estimate: u128, limit: Option<usize>) -> Result<()> {
    if limit.is_none() && estimate > MAX_CANDIDATES as u128 {
        return Err(Error::BoundExplosion(format!("{estimate} candidate tuples")));
    }
    Ok(())
}

/// Divisors of c^k, from the factorization of c.
fn power_divisors(c: u64, k: u32, cap: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(c) {
        let top = e * k;
        let mut next = Vec::with_capacity(out.len() * (top as usize + 1));
        for &d in &out {
            let mut v = d;
            for t in 0..=top {
                next.push(v);
                if t < top {
                    match v.checked_mul(p).filter(|&x| x <= cap) {
                        Some(x) => v = x,
                        None => break,
                    }
                }
            }
        }
        out = next;
    }
    out.sort_unstable();
    out
}

/// Exhaustive bounded search of A for the pattern. Witnesses come in the
/// pattern's search order (outer variable first); with a limit, the first
/// `limit` in that order are returned.
pub fn config_search(a: &NatSet, pattern: Pattern, bounds: &SearchBounds) -> Result<SearchResult> {
    let n = a.horizon();
    let es = a.elems();
    let limit = bounds.limit;
    let (witnesses, candidates, complete) = match pattern {
        Pattern::Linear { i, j, k } => {
            if i == 0 || j == 0 || k == 0 {
                return Err(Error::InvalidParameter("coefficients must be positive".into()));
            }
            guard(es.len() as u128 * es.len() as u128, limit)?;
            drive(es, limit, |x, lim| {
                let mut w = Vec::new();
                for &y in es {
                    let t = i as u128 * x as u128 + j as u128 * y as u128;
                    if t % k as u128 == 0 {
                        let c = t / k as u128;
                        if c <= n as u128 && a.contains(c as u64) {
                            w.push(vec![x, y, c as u64]);
                            if lim.is_some_and(|l| w.len() >= l) {
                                break;
                            }
                        }
                    }
                }
                (w, es.len() as u64)
            })?
        }
        Pattern::Power { k } => {
            if k == 0 {
                return Err(Error::InvalidParameter("exponent 0".into()));
            }
            let cap = (n as u128 * n as u128).min(u64::MAX as u128) as u64;
            let cs: Vec<u64> = es.iter().copied().take_while(|&c| power(c, k, cap).is_some()).collect();
            drive(&cs, limit, |c, lim| {
                let ck = c.pow(k);
                let mut w = Vec::new();
                let divs = power_divisors(c, k, n);
                for &x in &divs {
                    let y = ck / x;
                    if y <= n && a.contains(x) && a.contains(y) {
                        w.push(vec![x, y, c]);
                        if lim.is_some_and(|l| w.len() >= l) {
                            break;
                        }
                    }
                }
                (w, divs.len() as u64)
            })?
        }
        Pattern::SumProd => {
            let outer: Vec<u64> = (1..n).collect();
            // about N log N pairs with ab ≤ N
            guard(n as u128 * (64 - n.leading_zeros()) as u128, limit)?;
            drive(&outer, limit, |x, lim| {
                let mut w = Vec::new();
                let top = n / x;
                for y in 1..=top {
                    if a.contains(x + y) && a.contains(x * y) {
                        w.push(vec![x, y]);
                        if lim.is_some_and(|l| w.len() >= l) {
                            break;
                        }
                    }
                }
                (w, top)
            })?
        }
        Pattern::GeoArith { n: len } => {
            if bounds.q_max < 2 {
                return Err(Error::InvalidParameter("q_max must be at least 2".into()));
            }
            guard((bounds.q_max - 1) as u128 * bounds.d_max as u128 * bounds.a_max as u128, limit)?;
            let outer: Vec<u64> = (2..=bounds.q_max).collect();
            let member = |v: Option<u64>| v.is_some_and(|v| a.contains(v));
            drive(&outer, limit, |q, lim| {
                let mut w = Vec::new();
                'outer: for d in 1..=bounds.d_max {
                    for s in 1..=bounds.a_max {
                        let ok = (0..=len as u64).all(|i| {
                            (0..=len).all(|jj| {
                                member(
                                    i.checked_mul(d)
                                        .and_then(|v| v.checked_add(s))
                                        .zip(q.checked_pow(jj))
                                        .and_then(|(v, p)| v.checked_mul(p)),
                                )
                            })
                        });
                        if ok {
                            w.push(vec![q, d, s]);
                            if lim.is_some_and(|l| w.len() >= l) {
                                break 'outer;
                            }
                        }
                    }
                }
                (w, bounds.d_max * bounds.a_max)
            })?
        }
        Pattern::PolyGeo { n: len } => {
            guard(bounds.d_max as u128 * bounds.a_max as u128 * bounds.b_max as u128, limit)?;
            let outer: Vec<u64> = (1..=bounds.d_max).collect();
            drive(&outer, limit, |d, lim| {
                let mut w = Vec::new();
                'outer: for s in 1..=bounds.a_max {
                    // b must lie in A (j = 0); stop b once b·s exceeds N.
                    for &b in es.iter().take_while(|&&b| b <= bounds.b_max) {
                        let ok = (0..=len as u64).all(|i| {
                            (0..=len).all(|jj| {
                                i.checked_mul(d)
                                    .and_then(|v| v.checked_add(s))
                                    .and_then(|v| v.checked_pow(jj))
                                    .and_then(|v| v.checked_mul(b))
                                    .is_some_and(|v| a.contains(v))
                            })
                        });
                        if ok {
                            w.push(vec![d, s, b]);
                            if lim.is_some_and(|l| w.len() >= l) {
                                break 'outer;
                            }
                        }
                    }
                }
                (w, bounds.a_max * bounds.b_max)
            })?
        }
    };
    Ok(SearchResult {
        pattern,
        variables: pattern.variables().iter().map(|s| s.to_string()).collect(),
        witnesses,
        candidates,
        exhaustive: complete,
    })
}

/// All solutions of ia + jb = kc in A (up to `limit`), found from the
/// maximal runs of A: only run triples whose value ranges meet are scanned
/// element by element. Sorted by (a, b).
pub fn linear_solutions_by_runs(a: &NatSet, i: u64, j: u64, k: u64, limit: usize) -> Result<Vec<[u64; 3]>> {
    if i == 0 || j == 0 || k == 0 {
        return Err(Error::InvalidParameter("coefficients must be positive".into()));
    }
    let runs = a.runs();
    let (i, j, k) = (i as u128, j as u128, k as u128);
    let step = (j / j.gcd(&k)) as u64;
    let mut out: Vec<[u64; 3]> = Vec::new();
    for &(a0, a1) in &runs {
        for &(b0, b1) in &runs {
            let lo = i * a0 as u128 + j * b0 as u128;
            let hi = i * a1 as u128 + j * b1 as u128;
            let (clo, chi) = (lo.div_ceil(k), hi / k);
            let first = runs.partition_point(|r| (r.1 as u128) < clo);
            for &(c0, c1) in runs[first..].iter().take_while(|r| r.0 as u128 <= chi) {
                for x in a0..=a1 {
                    let base = i * x as u128;
                    let lo_c = (c0 as u128).max((base + j * b0 as u128).div_ceil(k));
                    let hi_c = (c1 as u128).min((base + j * b1 as u128) / k);
                    let mut c = lo_c;
                    while c <= hi_c && c < lo_c + j && (k * c - base) % j != 0 {
                        c += 1;
                    }
                    if c > hi_c || (k * c - base) % j != 0 {
                        continue;
                    }
                    while c <= hi_c {
                        out.push([x, ((k * c - base) / j) as u64, c as u64]);
                        if out.len() >= limit {
                            out.sort_unstable();
                            return Ok(out);
                        }
                        c += step as u128;
                    }
                }
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}
