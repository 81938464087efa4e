use num_rational::Ratio;
use serde::Serialize;

use super::search::{config_search, Pattern, SearchBounds};
use super::NatSet;
use crate::error::{Error, Result};
use crate::primes::factorize;

/// Largest box whose points are counted one by one.
const MAX_COUNTED: u128 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ex9Stage {
    pub n: usize,
    pub leading: u64,
    /// Number of distinct primes of L_n.
    pub dim: usize,
    /// |F_n| for the box with exponents 3·v_p(L_n).
    pub outer: u128,
    /// Size of the removed box with exponents 2·v_p(L_n).
    pub inner: u128,
    /// |B_n| / |F_n| = 1 - inner/outer.
    pub fraction: Ratio<u128>,
    /// |B_n| from enumerating the box, when small enough.
    pub counted: Option<u128>,
    /// 1 - (2/3)^d.
    pub bound: Ratio<u128>,
    pub bound_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ex9Set {
    pub stages: Vec<Ex9Stage>,
    #[serde(skip)]
    pub set: NatSet,
    /// Solutions of ab = c^3 in the set (empty when verified).
    pub solutions: Vec<Vec<u64>>,
    pub verified: bool,
}

fn stage(n: usize, leading: u64) -> Result<Ex9Stage> {
    let f = factorize(leading);
    let outer: u128 = f.iter().map(|&(_, e)| 3 * e as u128 + 1).product();
    let inner: u128 = f.iter().map(|&(_, e)| 2 * e as u128 + 1).product();
    let counted = (outer <= MAX_COUNTED).then(|| {
        // odometer over the exponent box
        let sides: Vec<u32> = f.iter().map(|&(_, e)| 3 * e + 1).collect();
        let mut cur = vec![0u32; sides.len()];
        let mut hits = 0u128;
        loop {
            if cur.iter().zip(&f).any(|(&c, &(_, e))| c > 2 * e) {
                hits += 1;
            }
            let mut i = 0;
            while i < cur.len() {
                cur[i] += 1;
                if cur[i] < sides[i] {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
            if i == cur.len() {
                break;
            }
        }
        hits
    });
    let d = f.len() as u32;
    let pow3 = 3u128.checked_pow(d).ok_or_else(|| Error::Overflow(format!("3^{d}")))?;
    let bound = Ratio::from_integer(1) - Ratio::new(2u128.pow(d), pow3);
    let fraction = Ratio::from_integer(1) - Ratio::new(inner, outer);
    Ok(Ex9Stage {
        n,
        leading,
        dim: f.len(),
        outer,
        inner,
        bound_holds: fraction >= bound,
        fraction,
        counted,
        bound,
    })
}

/// Elements of B_n = (divisors of L^3) minus (divisors of L^2) up to N.
fn stage_elements(leading: u64, horizon: u64, out: &mut Vec<u64>) {
    let f = factorize(leading);
    fn walk(f: &[(u64, u32)], idx: usize, v: u64, outside: bool, horizon: u64, out: &mut Vec<u64>) {
        if idx == f.len() {
            if outside {
                out.push(v);
            }
            return;
        }
        let (p, e) = f[idx];
        let mut x = v;
        for t in 0..=3 * e {
            walk(f, idx + 1, x, outside || t > 2 * e, horizon, out);
            match x.checked_mul(p).filter(|&y| y <= horizon) {
                Some(y) if t < 3 * e => x = y,
                _ => break,
            }
        }
    }
    walk(&f, 0, 1, false, horizon, out);
}

/// B = ∪ B_n, where B_n is the box of L_n^3 without the box of L_n^2, for a
/// list with L_n^5 | L_{n+1}; certifies that ab = c^3 has no solution in B
/// up to the horizon.
pub fn ex9_set(leading: &[u64], horizon: u64) -> Result<Ex9Set> {
    if leading.is_empty() || leading.contains(&0) || leading.contains(&1) {
        return Err(Error::InvalidParameter("leading parameters must be at least 2".into()));
    }
    for w in leading.windows(2) {
        let next = factorize(w[1]);
        let ok = factorize(w[0]).iter().all(|&(p, e)| {
            next.iter().find(|q| q.0 == p).is_some_and(|&(_, e2)| e2 >= 5 * e)
        });
        if !ok {
            return Err(Error::InvalidParameter(format!("{}^5 does not divide {}", w[0], w[1])));
        }
    }
    let stages = leading.iter().enumerate().map(|(i, &l)| stage(i + 1, l)).collect::<Result<Vec<_>>>()?;
    let mut elems = Vec::new();
    for &l in leading {
        stage_elements(l, horizon, &mut elems);
    }
    let set = NatSet::new(elems, horizon)?.with_provenance("large boxes without ab = c^3");
    let found = config_search(&set, Pattern::Power { k: 3 }, &SearchBounds::default())?;
    if !found.exhaustive {
        return Err(Error::BoundExplosion("the search did not finish".into()));
    }
    Ok(Ex9Set { stages, verified: found.witnesses.is_empty(), solutions: found.witnesses, set })
}

#[cfg(test)]
mod tests {
    use super::*;

    const L: [u64; 2] = [6, 7776 * 5];

    #[test]
    fn membership_matches_divisibility() {
        let b = ex9_set(&L, 100_000).unwrap();
        for m in 1..=100_000u64 {
            let direct = L.iter().any(|&l| {
                let (l2, l3) = (l as u128 * l as u128, l as u128 * l as u128 * l as u128);
                l3 % m as u128 == 0 && l2 % m as u128 != 0
            });
            assert_eq!(b.set.contains(m), direct, "m = {m}");
        }
    }

    #[test]
    fn no_cube_solutions() {
        let b = ex9_set(&L, 1_000_000).unwrap();
        assert!(b.verified);
        // pairwise oracle
        let es = b.set.elems();
        for &x in es {
            for &y in es {
                let p = x as u128 * y as u128;
                let c = (p as f64).cbrt().round() as u128;
                for c in c.saturating_sub(1)..=c + 1 {
                    assert!(!(c * c * c == p && c <= u64::MAX as u128 && b.set.contains(c as u64)));
                }
            }
        }
    }

    #[test]
    fn stage_fractions() {
        let b = ex9_set(&L, 1000).unwrap();
        let s = &b.stages[0];
        // 6^3 = 216 has 16 divisors, 36 has 9
        assert_eq!((s.outer, s.inner), (16, 9));
        assert_eq!(s.fraction, Ratio::new(7, 16));
        assert_eq!(s.bound, Ratio::new(5, 9));
        for s in &b.stages {
            assert_eq!(s.counted, Some(s.outer - s.inner));
            assert_eq!(s.fraction, Ratio::new(s.counted.unwrap(), s.outer));
            // each factor (2e+1)/(3e+1) exceeds 2/3, so the fraction stays below 1 - (2/3)^d
            assert!(s.fraction < s.bound);
        }
    }

    #[test]
    fn growth_condition() {
        assert!(ex9_set(&[6, 6u64.pow(4) * 5], 100).is_err());
        assert!(ex9_set(&[6, 35], 100).is_err());
    }
}
