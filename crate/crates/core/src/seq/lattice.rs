//! Block counting directly in exponent coordinates, for boxes whose leading
//! parameters do not fit 63 bits.

use rayon::prelude::*;

use super::count::MAX_BLOCK_SUPPORT;
use super::BitSeq;
use crate::error::{Error, Result};
use crate::folner::{exps_to_nat, AnchoredBox, ExpVec};

/// A binary field over (N, x) addressed by exponent vectors. `None` marks a
/// position the field does not define.
pub trait GField: Sync {
    fn bit(&self, g: &[u32]) -> Option<bool>;
}

/// A prefix over the naturals read through g ↦ ∏ p_i^{g_i}.
pub struct NatField<'a>(pub &'a BitSeq);

impl GField for NatField<'_> {
    fn bit(&self, g: &[u32]) -> Option<bool> {
        exps_to_nat(g).and_then(|m| self.0.get(m))
    }
}

/// A block over an anchored box, stored in colexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxBlock {
    shape: AnchoredBox,
    bits: Vec<bool>,
}

impl BoxBlock {
    pub fn new(shape: AnchoredBox, bits: Vec<bool>) -> Result<Self> {
        if shape.cardinality() != Some(bits.len() as u128) {
            return Err(Error::InvalidParameter("block size does not match its box".into()));
        }
        Ok(BoxBlock { shape, bits })
    }

    pub fn from_field<F: GField + ?Sized>(shape: AnchoredBox, field: &F) -> Result<Self> {
        let bits = shape
            .points()
            .map(|g| {
                field
                    .bit(&g)
                    .ok_or_else(|| Error::Coverage(format!("field undefined at {g:?}")))
            })
            .collect::<Result<Vec<bool>>>()?;
        Ok(BoxBlock { shape, bits })
    }

    pub fn shape(&self) -> &AnchoredBox {
        &self.shape
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

impl GField for BoxBlock {
    fn bit(&self, g: &[u32]) -> Option<bool> {
        self.shape.rank(g).map(|r| self.bits[r as usize])
    }
}

/// Visits the points of `shape` with colexicographic ranks in `start..end`.
pub(crate) fn for_each_point<F: FnMut(&[u32])>(sizes: &[u32], start: u64, end: u64, mut f: F) {
    if start >= end {
        return;
    }
    let mut cur = vec![0u32; sizes.len()];
    let mut r = start;
    for (i, &k) in sizes.iter().enumerate() {
        cur[i] = (r % (k as u64 + 1)) as u32;
        r /= k as u64 + 1;
    }
    for _ in start..end {
        f(&cur);
        for i in 0..sizes.len() {
            if cur[i] < sizes[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
        }
    }
}

fn support_table(k: &[ExpVec]) -> Result<usize> {
    if k.is_empty() || k.len() > MAX_BLOCK_SUPPORT {
        return Err(Error::InvalidParameter(format!(
            "|K| = {} outside 1..={MAX_BLOCK_SUPPORT}",
            k.len()
        )));
    }
    Ok(1usize << k.len())
}

fn count_in_box<F: GField + ?Sized>(
    field: &F,
    shape: &AnchoredBox,
    k: &[ExpVec],
    require_inside: bool,
) -> Result<Vec<u64>> {
    let table = support_table(k)?;
    let card = shape
        .cardinality()
        .filter(|&c| c <= u64::MAX as u128)
        .ok_or_else(|| Error::Overflow("box too large to scan".into()))? as u64;
    let dim = shape
        .dim()
        .max(k.iter().map(|h| h.dim()).max().unwrap_or(0));
    let sizes = shape.sizes().to_vec();
    let chunk = 1u64 << 14;
    let chunks: Vec<u64> = (0..card.div_ceil(chunk)).collect();
    chunks
        .par_iter()
        .map(|&c| {
            let mut local = vec![0u64; table];
            let mut err = None;
            let mut p = vec![0u32; dim];
            for_each_point(&sizes, c * chunk, ((c + 1) * chunk).min(card), |g| {
                if err.is_some() {
                    return;
                }
                let mut idx = 0usize;
                for h in k {
                    p.iter_mut().for_each(|v| *v = 0);
                    p[..g.len()].copy_from_slice(g);
                    for (i, &e) in h.exps().iter().enumerate() {
                        p[i] += e;
                    }
                    if require_inside && !shape.contains(&p) {
                        return;
                    }
                    match field.bit(&p) {
                        Some(b) => idx = (idx << 1) | b as usize,
                        None => {
                            err = Some(Error::Coverage(format!("field undefined at {p:?}")));
                            return;
                        }
                    }
                }
                local[idx] += 1;
            });
            match err {
                Some(e) => Err(e),
                None => Ok(local),
            }
        })
        .try_reduce(
            || vec![0u64; table],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(s, t)| *s += t);
                Ok(a)
            },
        )
}

/// Ñ(B, x, F) over a box F for every block B over K (exponent vectors),
/// indexed with the first element of `k` most significant.
pub fn box_block_counts<F: GField + ?Sized>(field: &F, shape: &AnchoredBox, k: &[ExpVec]) -> Result<Vec<u64>> {
    count_in_box(field, shape, k, false)
}

/// N(B, x, F) over a box F: only g with K + g inside F count.
pub fn box_block_counts_n<F: GField + ?Sized>(field: &F, shape: &AnchoredBox, k: &[ExpVec]) -> Result<Vec<u64>> {
    count_in_box(field, shape, k, true)
}

/// max_B |Ñ(B, x, F)/|F| - 2^{-|K|}| over a box.
pub fn box_normality_defect<F: GField + ?Sized>(field: &F, shape: &AnchoredBox, k: &[ExpVec]) -> Result<f64> {
    let counts = box_block_counts(field, shape, k)?;
    let card = shape.cardinality().unwrap() as f64;
    let target = 1.0 / counts.len() as f64;
    Ok(counts
        .iter()
        .map(|&c| (c as f64 / card - target).abs())
        .fold(0.0, f64::max))
}

/// Whether every block over K occurs in C with frequency within ε of
/// 2^{-|K|}, counting placements K + g inside the box of C.
pub fn ke_normal(c: &BoxBlock, k: &[ExpVec], eps: f64) -> Result<bool> {
    let counts = box_block_counts_n(c, c.shape(), k)?;
    let card = c.shape().cardinality().unwrap() as f64;
    let target = 1.0 / counts.len() as f64;
    Ok(counts.iter().all(|&n| (n as f64 / card - target).abs() <= eps))
}
