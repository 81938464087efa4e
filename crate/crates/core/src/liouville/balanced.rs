use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use super::refine::t_threshold;
use super::RepetitiveSpec;
use crate::error::{Error, Result};
use crate::folner::FolnerSpec;
use crate::seq::BitSeq;

/// One level of a balanced repetitive sequence: w_k = w_{k-1}^{rep} v_k^{copies}.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BalancedLevel {
    pub k: u64,
    pub v_len: u64,
    pub rep: u64,
    pub copies: u64,
    pub w_len: u64,
    /// max{|v_k|, |v_{k+1}|, |v_{k+2}|, |w_{k-1}|} / |w_k|
    pub delta: Ratio<u64>,
    /// rep·|w_{k-1}| / |w_k|
    pub gamma: Ratio<u64>,
    /// t_{|w_{k-1}|} when it constrained this level.
    pub t_bound: Option<u64>,
}

impl BalancedLevel {
    pub fn epsilon(&self) -> Ratio<u64> {
        (self.delta + self.gamma) * 2
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdditiveLiouville {
    pub levels: Vec<BalancedLevel>,
    /// v_k = source restricted to {1..k}.
    pub source: BitSeq,
    pub x: BitSeq,
}

impl AdditiveLiouville {
    pub fn repetitive_spec(&self) -> RepetitiveSpec {
        RepetitiveSpec {
            steps: self
                .levels
                .iter()
                .map(|l| {
                    let v: Vec<bool> = (1..=l.v_len).map(|i| self.source.bit(i)).collect();
                    (v.repeat(l.copies as usize), l.rep)
                })
                .collect(),
        }
    }
}

fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

/// The balanced repetitive sequence with v_k = source|{1..k}, rep_k = k-1,
/// and the least number of copies of v_k with δ_k ≤ 1/k, γ_k ≤ 1/k, δ and γ
/// strictly decreasing from k = 3 on, and |w_k| ≥ t_{|w_{k-1}|} for k ≥ 3,
/// where t is read off the additive recipe within `n_max` indices.
pub fn additive_liouville_normal(
    spec: &FolnerSpec,
    n_max: u64,
    source: &BitSeq,
    n: u64,
) -> Result<AdditiveLiouville> {
    let mut levels: Vec<BalancedLevel> = Vec::new();
    let mut k = 1u64;
    loop {
        if source.len() < k + 2 {
            return Err(Error::Horizon(format!("source shorter than {} bits", k + 2)));
        }
        let prev = levels.last();
        let prev_w = prev.map(|l| l.w_len).unwrap_or(0);
        let rep = k - 1;
        let base = rep * prev_w;
        let d = (k + 2).max(prev_w);
        let mut need = (d * k).max(base * k).max(1);
        let mut t_bound = None;
        if k >= 3 {
            let p = prev.unwrap();
            let pd = *p.delta.numer() * (p.w_len / *p.delta.denom());
            let pg = *p.gamma.numer() * (p.w_len / *p.gamma.denom());
            // D/|w_k| < D'/|w_{k-1}|  and  base/|w_k| < base'/|w_{k-1}|
            need = need.max(d * prev_w / pd + 1).max(base * prev_w / pg + 1);
            let t = t_threshold(spec, n_max, prev_w)?;
            if t > need {
                need = t;
                t_bound = Some(t);
            }
        }
        let copies = ceil_div(need.saturating_sub(base), k).max(1);
        let w_len = base + copies * k;
        levels.push(BalancedLevel {
            k,
            v_len: k,
            rep,
            copies,
            w_len,
            delta: Ratio::new(d, w_len),
            gamma: Ratio::new(base, w_len),
            t_bound,
        });
        if w_len >= n {
            break;
        }
        k += 1;
    }
    let mut out = AdditiveLiouville { levels, source: source.prefix(k + 2), x: BitSeq::from_bools(&[]) };
    out.x = super::build_repetitive(&out.repetitive_spec(), n)?
        .with_provenance(format!("additive-liouville levels={}", out.levels.len()));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubwordCoverReport {
    pub k: u64,
    pub subwords: u64,
    pub violations: u64,
    pub min_covered_fraction: f64,
    pub epsilon: Ratio<u64>,
}

/// Exhaustive check over every subword W of w_{k+2} with |W| ≥ |w_k|: the
/// copies of v_k, v_{k+1}, v_{k+2} lying wholly inside W (from the
/// structural decomposition of w_{k+2}) cover at least (1 - ε_k)|W|.
pub fn subword_cover_check(levels: &[BalancedLevel], k: u64) -> Result<SubwordCoverReport> {
    if k < 2 || levels.len() < k as usize + 2 {
        return Err(Error::InvalidParameter(format!("need k ≥ 2 and levels up to {}", k + 2)));
    }
    let lv = |j: u64| &levels[j as usize - 1];
    // pieces of w_{k+2}: (length, counted)
    fn expand(levels: &[BalancedLevel], j: u64, bottom: u64, out: &mut Vec<(u64, bool)>) {
        if j < bottom {
            out.push((levels[j as usize - 1].w_len, false));
            return;
        }
        let l = &levels[j as usize - 1];
        if j > 1 {
            for _ in 0..l.rep {
                expand(levels, j - 1, bottom, out);
            }
        }
        for _ in 0..l.copies {
            out.push((l.v_len, true));
        }
    }
    let mut pieces = Vec::new();
    expand(levels, k + 2, k, &mut pieces);
    let total: u64 = pieces.iter().map(|p| p.0).sum();
    debug_assert_eq!(total, lv(k + 2).w_len);
    let mut starts = Vec::with_capacity(pieces.len());
    let mut pref = vec![0u64];
    let mut pos = 0;
    for &(len, counted) in &pieces {
        starts.push(pos);
        pos += len;
        pref.push(pref.last().unwrap() + if counted { len } else { 0 });
    }
    let ends: Vec<u64> = starts.iter().zip(&pieces).map(|(s, p)| s + p.0).collect();
    // first piece starting at or after a; number of pieces ending at or before b
    let mut first_from = vec![0usize; total as usize + 1];
    let mut idx = pieces.len();
    for a in (0..=total).rev() {
        while idx > 0 && starts[idx - 1] >= a {
            idx -= 1;
        }
        first_from[a as usize] = idx;
    }
    let mut ended_by = vec![0usize; total as usize + 1];
    let mut c = 0;
    for b in 0..=total {
        while c < ends.len() && ends[c] <= b {
            c += 1;
        }
        ended_by[b as usize] = c;
    }
    let wk = lv(k).w_len as i128;
    let d = (k + 2).max(lv(k - 1).w_len) as i128;
    let slack = wk - 2 * (d + (lv(k).rep * lv(k - 1).w_len) as i128);
    let (subwords, violations, min_frac) = (0..total)
        .into_par_iter()
        .map(|a| {
            let mut cnt = 0u64;
            let mut bad = 0u64;
            let mut min = f64::INFINITY;
            let i0 = first_from[a as usize];
            for b in a + wk as u64..=total {
                let i1 = ended_by[b as usize];
                let covered = if i1 > i0 { pref[i1] - pref[i0] } else { 0 };
                let len = (b - a) as i128;
                cnt += 1;
                if (covered as i128) * wk < slack * len {
                    bad += 1;
                }
                min = min.min(covered as f64 / len as f64);
            }
            (cnt, bad, min)
        })
        .reduce(|| (0, 0, f64::INFINITY), |x, y| (x.0 + y.0, x.1 + y.1, x.2.min(y.2)));
    Ok(SubwordCoverReport { k, subwords, violations, min_covered_fraction: min_frac, epsilon: lv(k).epsilon() })
}
