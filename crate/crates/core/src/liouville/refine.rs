use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::folner::FolnerSpec;

/// Maximal intervals ("connected components") of F_n for an additive recipe
/// (interval lists are assumed validated).
pub fn components(spec: &FolnerSpec, n: u64) -> Result<Vec<(u64, u64)>> {
    match spec {
        FolnerSpec::Classical => {
            if n == 0 {
                return Err(Error::InvalidParameter("index 0".into()));
            }
            Ok(vec![(1, n)])
        }
        FolnerSpec::IntervalUnion { sets } => {
            let ivs = sets
                .get((n as usize).wrapping_sub(1))
                .ok_or_else(|| Error::Horizon(format!("F_{n} is not defined")))?;
            let mut out: Vec<(u64, u64)> = Vec::new();
            for &(a, b) in ivs {
                match out.last_mut() {
                    Some(last) if last.1 + 1 == a => last.1 = b,
                    _ => out.push((a, b)),
                }
            }
            Ok(out)
        }
        _ => Err(Error::Unsupported("components exist only for additive recipes".into())),
    }
}

fn size(c: &[(u64, u64)]) -> u64 {
    c.iter().map(|(a, b)| b - a + 1).sum()
}

/// |(K + F) △ F| for K = {1..l}, from the components of F.
fn shift_defect(c: &[(u64, u64)], l: u64) -> u64 {
    // K + F is the union of [a+1, b+l]; merge, then intersect with F.
    let mut kf: Vec<(u64, u64)> = Vec::new();
    for &(a, b) in c {
        let (s, e) = (a + 1, b + l);
        match kf.last_mut() {
            Some(last) if s <= last.1 + 1 => last.1 = last.1.max(e),
            _ => kf.push((s, e)),
        }
    }
    let mut inter = 0u64;
    let (mut i, mut j) = (0, 0);
    while i < c.len() && j < kf.len() {
        let lo = c[i].0.max(kf[j].0);
        let hi = c[i].1.min(kf[j].1);
        if lo <= hi {
            inter += hi - lo + 1;
        }
        if c[i].1 < kf[j].1 {
            i += 1;
        } else {
            j += 1;
        }
    }
    size(&kf) + size(c) - 2 * inter
}

/// F_{K} + K for K = {1..l}: components of length > l survive as
/// [max(a, 2), b]; shorter ones vanish.
fn core_plus(c: &[(u64, u64)], l: u64) -> Vec<(u64, u64)> {
    c.iter()
        .filter_map(|&(a, b)| {
            let lo_h = a.saturating_sub(1).max(1);
            (b >= l && lo_h <= b - l).then(|| (lo_h + 1, b))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RefinedSpec {
    pub spec: FolnerSpec,
    /// ℓ_n for n = 1..=n_max (0 where F'_n = F_n).
    pub ell: Vec<u64>,
    /// n_ℓ for ℓ = 1, 2, ...: least index from which every F_n up to the
    /// horizon is (K_ℓ, 1/(2ℓ²))-invariant.
    pub thresholds: Vec<u64>,
    /// |F_n △ F'_n| / |F_n|.
    pub modification: Vec<Ratio<u64>>,
}

/// Replaces F_n by F_{n,K_ℓ} + K_ℓ (K_ℓ = {1..ℓ}, ε_ℓ = 1/ℓ) for n in
/// [n_ℓ, n_{ℓ+1}), so that every component of F'_n has length ≥ ℓ_n.
pub fn interval_folner_refine(spec: &FolnerSpec, n_max: u64) -> Result<RefinedSpec> {
    if spec.semigroup() != crate::folner::Semigroup::Additive {
        return Err(Error::InvalidParameter("refinement needs an additive recipe".into()));
    }
    spec.validate()?;
    let comps = (1..=n_max).map(|n| components(spec, n)).collect::<Result<Vec<_>>>()?;
    let invariant = |c: &Vec<(u64, u64)>, l: u64| {
        // |KF △ F| / |F| ≤ 1/(2 l²)
        2 * l * l * shift_defect(c, l) <= size(c)
    };
    let mut thresholds = Vec::new();
    for l in 1.. {
        let mut n_l = None;
        for n in (1..=n_max).rev() {
            if invariant(&comps[n as usize - 1], l) {
                n_l = Some(n);
            } else {
                break;
            }
        }
        let Some(mut n_l) = n_l else { break };
        if let Some(&prev) = thresholds.last() {
            n_l = n_l.max(prev);
        }
        thresholds.push(n_l);
    }
    let mut ell = Vec::with_capacity(n_max as usize);
    let mut sets = Vec::with_capacity(n_max as usize);
    let mut modification = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let l = thresholds.iter().take_while(|&&t| t <= n).count() as u64;
        let c = &comps[n as usize - 1];
        let refined = if l == 0 { c.clone() } else { core_plus(c, l) };
        let removed = size(c) - size(&refined);
        modification.push(Ratio::new(removed, size(c)));
        ell.push(l);
        sets.push(refined);
    }
    Ok(RefinedSpec { spec: FolnerSpec::IntervalUnion { sets }, ell, thresholds, modification })
}

/// t_j: the largest element of the union of all F_n (n ≤ n_max) having a
/// component shorter than j. Errors when F_{n_max} itself still has one,
/// since later sets could then raise the value.
pub fn t_threshold(spec: &FolnerSpec, n_max: u64, j: u64) -> Result<u64> {
    spec.validate()?;
    let last = components(spec, n_max)?;
    if last.iter().any(|(a, b)| b - a + 1 < j) {
        return Err(Error::Horizon(format!("t_{j} is not determined by F_1..F_{n_max}")));
    }
    let mut t = 0;
    for n in 1..n_max {
        let c = components(spec, n)?;
        if c.iter().any(|(a, b)| b - a + 1 < j) {
            t = t.max(c.last().map(|x| x.1).unwrap_or(0));
        }
    }
    Ok(t)
}
