use rayon::prelude::*;

use super::BitSeq;
use crate::error::{Error, Result};
use crate::folner::{FiniteSet, FolnerSpec, Semigroup};

/// Largest support for which all 2^|K| blocks are tabulated.
pub const MAX_BLOCK_SUPPORT: usize = 20;

/// Membership in F by bitmap below this bound, binary search above.
const BITMAP_LIMIT: u64 = 1 << 26;

/// A 0-1 pattern B on a finite support K.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Block {
    support: Vec<u64>,
    values: Vec<bool>,
}

impl Block {
    pub fn new(support: Vec<u64>, values: Vec<bool>) -> Result<Self> {
        if support.is_empty() || support.len() != values.len() {
            return Err(Error::InvalidParameter("block needs one value per support element".into()));
        }
        let mut pairs: Vec<(u64, bool)> = support.into_iter().zip(values).collect();
        pairs.sort_unstable();
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidParameter("repeated support element".into()));
        }
        Ok(Block {
            support: pairs.iter().map(|p| p.0).collect(),
            values: pairs.iter().map(|p| p.1).collect(),
        })
    }

    /// Block with support `k` whose values read `index` as a binary numeral,
    /// the first support element most significant.
    pub fn from_index(k: &FiniteSet, index: u64) -> Result<Self> {
        let n = k.len();
        if n == 0 || n > 63 || index >> n != 0 {
            return Err(Error::InvalidParameter(format!("index {index} for support of size {n}")));
        }
        let values = (0..n).map(|j| (index >> (n - 1 - j)) & 1 == 1).collect();
        Block::new(k.elems().to_vec(), values)
    }

    pub fn support(&self) -> &[u64] {
        &self.support
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn value_at(&self, h: u64) -> Option<bool> {
        self.support.binary_search(&h).ok().map(|i| self.values[i])
    }

    pub fn index(&self) -> u64 {
        self.values.iter().fold(0, |acc, &b| (acc << 1) | b as u64)
    }

    pub fn support_set(&self) -> FiniteSet {
        FiniteSet::from_sorted(self.support.clone()).expect("support is sorted")
    }
}

/// Membership test for a finite set, bitmap-backed when small.
pub(crate) enum Membership<'a> {
    Bitmap(Vec<u64>),
    Sorted(&'a FiniteSet),
}

impl<'a> Membership<'a> {
    pub(crate) fn new(f: &'a FiniteSet) -> Self {
        match f.max() {
            Some(m) if m <= BITMAP_LIMIT => {
                let mut bits = vec![0u64; (m / 64 + 1) as usize];
                for x in f.iter() {
                    bits[(x / 64) as usize] |= 1 << (x % 64);
                }
                Membership::Bitmap(bits)
            }
            _ => Membership::Sorted(f),
        }
    }

    #[inline]
    pub(crate) fn contains(&self, x: u64) -> bool {
        match self {
            Membership::Bitmap(b) => b.get((x / 64) as usize).is_some_and(|w| (w >> (x % 64)) & 1 == 1),
            Membership::Sorted(f) => f.contains(x),
        }
    }
}

fn check_position(x: &BitSeq, pos: u64) -> Result<()> {
    if pos == 0 || pos > x.len() {
        return Err(Error::Coverage(format!(
            "position {pos} needed but the prefix has length {}",
            x.len()
        )));
    }
    Ok(())
}

/// N(B, x, F): the number of g in G ∪ {e} with h ∘ g ∈ F and x_{h∘g} = B(h)
/// for every h in the support. Only positions inside F are read, so the
/// prefix must cover max(F).
pub fn count_n(b: &Block, x: &BitSeq, f: &FiniteSet, sg: Semigroup) -> Result<u64> {
    let Some(maxf) = f.max() else { return Ok(0) };
    check_position(x, maxf)?;
    if f.elems()[0] == 0 {
        return Err(Error::InvalidParameter("F must consist of positions >= 1".into()));
    }
    let mem = Membership::new(f);
    let k0 = b.support()[0];
    let mut count = 0u64;
    for c in f.iter() {
        let Some(g) = sg.quotient(c, k0) else { continue };
        let ok = b.support().iter().zip(b.values()).all(|(&h, &v)| match sg.op(h, g) {
            Some(p) => mem.contains(p) && x.bit(p) == v,
            None => false,
        });
        count += ok as u64;
    }
    Ok(count)
}

/// Ñ(B, x, F): the number of g in F with x_{h∘g} = B(h) for every h in the
/// support. For (N, +) the element 0 of F is the identity.
pub fn count_n_tilde(b: &Block, x: &BitSeq, f: &FiniteSet, sg: Semigroup) -> Result<u64> {
    let Some(maxf) = f.max() else { return Ok(0) };
    let maxk = *b.support().last().unwrap();
    let reach = sg
        .op(maxk, maxf)
        .ok_or_else(|| Error::Overflow(format!("{maxk} ∘ {maxf}")))?;
    check_position(x, reach)?;
    let mut count = 0u64;
    for g in f.iter() {
        let ok = b
            .support()
            .iter()
            .zip(b.values())
            .all(|(&h, &v)| sg.op(h, g).is_some_and(|p| p >= 1 && x.bit(p) == v));
        count += ok as u64;
    }
    Ok(count)
}

/// Ñ(B, x, F) for all 2^|K| blocks B over K at once, indexed by
/// [`Block::index`].
pub fn block_counts(x: &BitSeq, f: &FiniteSet, k: &FiniteSet, sg: Semigroup) -> Result<Vec<u64>> {
    if k.is_empty() || k.len() > MAX_BLOCK_SUPPORT {
        return Err(Error::InvalidParameter(format!(
            "|K| = {} outside 1..={MAX_BLOCK_SUPPORT}",
            k.len()
        )));
    }
    let table = 1usize << k.len();
    let Some(maxf) = f.max() else { return Ok(vec![0; table]) };
    let maxk = k.max().unwrap();
    let reach = sg
        .op(maxk, maxf)
        .ok_or_else(|| Error::Overflow(format!("{maxk} ∘ {maxf}")))?;
    check_position(x, reach)?;
    if sg == Semigroup::Multiplicative && f.elems()[0] == 0 || k.elems()[0] == 0 {
        return Err(Error::InvalidParameter("0 is not an element of (N, x) or a shift".into()));
    }
    let ks = k.elems();
    let counts = f
        .elems()
        .par_chunks(1 << 16)
        .map(|chunk| {
            let mut local = vec![0u64; table];
            for &g in chunk {
                let mut idx = 0usize;
                for &h in ks {
                    let p = match sg {
                        Semigroup::Additive => h + g,
                        Semigroup::Multiplicative => h * g,
                    };
                    idx = (idx << 1) | x.bit(p) as usize;
                }
                local[idx] += 1;
            }
            local
        })
        .reduce(
            || vec![0u64; table],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(s, t)| *s += t);
                a
            },
        );
    Ok(counts)
}

/// Frequencies Ñ(B, x, F_n) / |F_n| for every block over K.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockFreqs {
    pub support: FiniteSet,
    pub card: u64,
    pub counts: Vec<u64>,
}

impl BlockFreqs {
    pub fn freq(&self, index: usize) -> f64 {
        self.counts[index] as f64 / self.card as f64
    }

    pub fn freqs(&self) -> Vec<f64> {
        (0..self.counts.len()).map(|i| self.freq(i)).collect()
    }

    /// max_B |freq(B) - 2^{-|K|}|.
    pub fn defect(&self) -> f64 {
        let target = 1.0 / self.counts.len() as f64;
        self.freqs().iter().map(|f| (f - target).abs()).fold(0.0, f64::max)
    }
}

pub fn block_freqs(x: &BitSeq, spec: &FolnerSpec, n: u64, k: &FiniteSet) -> Result<BlockFreqs> {
    let f = spec.folner_set(n)?;
    let counts = block_counts(x, &f, k, spec.semigroup())?;
    Ok(BlockFreqs { support: k.clone(), card: f.len() as u64, counts })
}

pub fn normality_defect(x: &BitSeq, spec: &FolnerSpec, n: u64, k: &FiniteSet) -> Result<f64> {
    Ok(block_freqs(x, spec, n, k)?.defect())
}
