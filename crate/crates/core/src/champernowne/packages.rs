use num_rational::Ratio;
use rayon::prelude::*;

use super::scheme::{order_index, DoublingScheme, MAX_ORDER};
use crate::error::{Error, Result};
use crate::folner::{leading_exps, AnchoredBox};
use crate::seq::{BitSeq, BoxBlock, GField};

/// Largest order whose full brick list is materialized (2^16 bricks).
pub const MAX_BRICK_LIST_ORDER: u32 = 4;
/// Largest order whose package is materialized (a block over F_20).
pub const MAX_PACKAGE_ORDER: u32 = 4;
/// Largest order whose chain is materialized (a block over F_20).
pub const MAX_CHAIN_ORDER: u32 = 3;

fn check_order(k: u32, cap: u32, what: &str) -> Result<()> {
    if k > cap {
        return Err(Error::InvalidParameter(format!("{what} of order {k} exceeds the cap {cap}")));
    }
    Ok(())
}

/// Bit of brick #m at the cell with colexicographic rank `t` in F_k: the
/// binary numeral of m read most significant first.
pub fn brick_bit(k: u32, m: u64, t: u64) -> bool {
    let cells = 1u64 << k;
    (m >> (cells - 1 - t)) & 1 == 1
}

pub fn brick(k: u32, m: u64, scheme: &DoublingScheme) -> Result<BoxBlock> {
    check_order(k, MAX_ORDER, "brick")?;
    if k < 6 && m >> (1u64 << k) != 0 {
        return Err(Error::InvalidParameter(format!("brick index {m} out of range for order {k}")));
    }
    let shape = scheme.box_at(k as u64)?;
    let cells = 1u64 << k;
    BoxBlock::new(shape, (0..cells).map(|t| brick_bit(k, m, t)).collect())
}

/// All 2^{2^k} bricks of order k, in index order.
pub fn bricks(k: u32, scheme: &DoublingScheme) -> Result<Vec<BoxBlock>> {
    check_order(k, MAX_BRICK_LIST_ORDER, "brick list")?;
    (0..1u64 << (1u64 << k)).map(|m| brick(k, m, scheme)).collect()
}

/// Slots of the package of order k: the translates of F_k tiling
/// F_{r(k)}, in colexicographic order of their corners. Slot j holds brick j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackageLayout {
    pub order: u32,
    pub slots: Vec<Vec<u32>>,
}

impl PackageLayout {
    pub fn brick_of_slot(&self, j: usize) -> u64 {
        j as u64
    }
}

/// Corners of the standard-grid tiles of F_small inside F_big, colex order.
fn tile_corners(scheme: &DoublingScheme, small: u64, big: u64) -> Result<Vec<Vec<u32>>> {
    let c = scheme.log_sides(small).to_vec();
    let cc = scheme.log_sides(big).to_vec();
    let grid = AnchoredBox::new(
        cc.iter()
            .enumerate()
            .map(|(i, &ci)| {
                let d = ci - c.get(i).copied().unwrap_or(0);
                if d >= 32 {
                    Err(Error::Overflow("tile grid too large".into()))
                } else {
                    Ok((1u32 << d) - 1)
                }
            })
            .collect::<Result<Vec<u32>>>()?,
    );
    Ok(grid
        .points()
        .map(|s| {
            (0..cc.len())
                .map(|i| s.get(i).copied().unwrap_or(0) << c.get(i).copied().unwrap_or(0))
                .collect()
        })
        .collect())
}

pub fn package_layout(k: u32, scheme: &DoublingScheme) -> Result<PackageLayout> {
    check_order(k, MAX_PACKAGE_ORDER, "package")?;
    Ok(PackageLayout { order: k, slots: tile_corners(scheme, k as u64, order_index(k))? })
}

/// Copies `block` into `target` (a block over `big`) translated by `corner`.
fn paste(target: &mut [bool], big: &AnchoredBox, corner: &[u32], block: &BoxBlock) {
    let mut p = vec![0u32; big.dim()];
    for (t, g) in block.shape().points().enumerate() {
        for i in 0..p.len() {
            p[i] = corner.get(i).copied().unwrap_or(0) + g.get(i).copied().unwrap_or(0);
        }
        let r = big.rank(&p).expect("tile inside its box") as usize;
        target[r] = block.bits()[t];
    }
}

/// The package of order k assembled from its bricks.
pub fn package(k: u32, scheme: &DoublingScheme) -> Result<BoxBlock> {
    let layout = package_layout(k, scheme)?;
    let big = scheme.box_at(order_index(k))?;
    let mut bits = vec![false; big.cardinality().unwrap() as usize];
    for (j, corner) in layout.slots.iter().enumerate() {
        paste(&mut bits, &big, corner, &brick(k, layout.brick_of_slot(j), scheme)?);
    }
    BoxBlock::new(big, bits)
}

/// The chain of order k (a block over F_{r(k+1)}) assembled from the
/// previous chain in the corner and packages of order k elsewhere.
pub fn chain(k: u32, scheme: &DoublingScheme) -> Result<BoxBlock> {
    check_order(k, MAX_CHAIN_ORDER, "chain")?;
    let big = scheme.box_at(order_index(k + 1))?;
    let pack = package(k, scheme)?;
    let corner_block = if k == 0 { pack.clone() } else { chain(k - 1, scheme)? };
    let mut bits = vec![false; big.cardinality().unwrap() as usize];
    for (j, corner) in tile_corners(scheme, order_index(k), order_index(k + 1))?.iter().enumerate() {
        paste(&mut bits, &big, corner, if j == 0 { &corner_block } else { &pack });
    }
    BoxBlock::new(big, bits)
}

/// Bit of the package of order k at an offset inside F_{r(k)}, computed
/// arithmetically: owning slot, then brick cell.
pub fn package_bit(scheme: &DoublingScheme, k: u32, offset: &[u32]) -> bool {
    let small = scheme.log_sides(k as u64);
    let big = scheme.log_sides(order_index(k));
    let (mut slot, mut shift, mut rank, mut rshift) = (0u128, 0u32, 0u64, 0u32);
    for (i, &ci_big) in big.iter().enumerate() {
        let o = offset.get(i).copied().unwrap_or(0) as u64;
        let ci = small.get(i).copied().unwrap_or(0);
        let t = o & ((1u64 << ci) - 1);
        let s = o >> ci;
        slot |= (s as u128) << shift;
        shift += ci_big - ci;
        rank |= t << rshift;
        rshift += ci;
    }
    let cells = 1u32 << k;
    (slot >> (cells as u64 - 1 - rank)) & 1 == 1
}

/// Order of the package tile owning g in the limit of the chains, or
/// `None` beyond the chain of order [`MAX_ORDER`].
pub fn chain_owner(scheme: &DoublingScheme, g: &[u32]) -> Option<u32> {
    let top = (0..=MAX_ORDER).find(|&k| scheme.contains(order_index(k + 1), g))?;
    let mut k = top;
    while k >= 1 && scheme.contains(order_index(k), g) {
        k -= 1;
    }
    Some(k)
}

/// The limit of the chains, read positionally.
#[derive(Debug, Clone)]
pub struct ChainField<'a> {
    scheme: &'a DoublingScheme,
}

impl<'a> ChainField<'a> {
    pub fn new(scheme: &'a DoublingScheme) -> Self {
        ChainField { scheme }
    }
}

impl GField for ChainField<'_> {
    fn bit(&self, g: &[u32]) -> Option<bool> {
        let k = chain_owner(self.scheme, g)?;
        let off = self.scheme.offset(order_index(k), g);
        Some(package_bit(self.scheme, k, &off))
    }
}

/// Builds a prefix in parallel from a positional rule.
pub(crate) fn par_bits<F: Fn(u64) -> bool + Sync>(len: u64, f: F) -> BitSeq {
    let words: Vec<u64> = (0..len.div_ceil(64))
        .into_par_iter()
        .map(|w| {
            let mut word = 0u64;
            for j in 0..64 {
                let i = w * 64 + j + 1;
                if i <= len && f(i) {
                    word |= 1 << j;
                }
            }
            word
        })
        .collect();
    BitSeq::from_words(words, len)
}

/// x(m) = the chain limit at the exponent vector of m; positions outside
/// every chain up to order [`MAX_ORDER`] are 0.
pub fn mult_champernowne(scheme: &DoublingScheme, n: u64) -> Result<BitSeq> {
    if n > 1 << 26 {
        return Err(Error::InvalidParameter(format!("prefix length {n} exceeds 2^26")));
    }
    let dims = scheme.dim(order_index(MAX_ORDER + 1));
    let field = ChainField::new(scheme);
    Ok(par_bits(n, |m| {
        let (g, rest) = leading_exps(m, dims);
        rest == 1 && field.bit(&g).unwrap_or(false)
    })
    .with_provenance(format!("mult-champernowne directions={:?}", scheme.schedule())))
}

/// Fraction of F_n tiled by the shifted copies of the order-k package in
/// the chain limit. The anchored corner tile F_{r(k)} always belongs to the
/// previous chain (for k = 0, the seed package), so it is never counted.
pub fn package_coverage(scheme: &DoublingScheme, k: u32, n: u64) -> Result<Ratio<u64>> {
    let shape = scheme.box_at(n)?;
    let card = shape.cardinality().unwrap() as u64;
    let covered = shape
        .points()
        .filter(|g| chain_owner(scheme, g) == Some(k) && !scheme.contains(order_index(k), g))
        .count() as u64;
    Ok(Ratio::new(covered, card))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::champernowne::classical_champernowne;
    use std::collections::HashSet;

    #[test]
    fn order_zero_and_one_bricks() {
        let s = DoublingScheme::staircase();
        let b0: Vec<Vec<bool>> = bricks(0, &s).unwrap().iter().map(|b| b.bits().to_vec()).collect();
        assert_eq!(b0, vec![vec![false], vec![true]]);
        let b1: Vec<String> = bricks(1, &s)
            .unwrap()
            .iter()
            .map(|b| b.bits().iter().map(|&x| if x { '1' } else { '0' }).collect())
            .collect();
        assert_eq!(b1, vec!["00", "01", "10", "11"]);
        assert_eq!(bricks(2, &s).unwrap().len(), 16);
        assert!(bricks(5, &s).is_err());
    }

    #[test]
    fn packages_hold_every_brick_once() {
        for s in [DoublingScheme::staircase(), DoublingScheme::toeplitz()] {
            for k in 0..=3 {
                let p = package(k, &s).unwrap();
                let layout = package_layout(k, &s).unwrap();
                let shape_k = s.box_at(k as u64).unwrap();
                let mut seen = HashSet::new();
                for corner in &layout.slots {
                    let cells: Vec<bool> = shape_k
                        .points()
                        .map(|t| {
                            let g: Vec<u32> = (0..corner.len())
                                .map(|i| corner[i] + t.get(i).copied().unwrap_or(0))
                                .collect();
                            p.bit(&g).unwrap()
                        })
                        .collect();
                    assert!(seen.insert(cells));
                }
                assert_eq!(seen.len() as u64, 1u64 << (1u64 << k));
            }
        }
    }

    #[test]
    fn positional_matches_assembled() {
        for s in [DoublingScheme::staircase(), DoublingScheme::toeplitz()] {
            for k in 0..=3 {
                let p = package(k, &s).unwrap();
                for g in p.shape().points() {
                    assert_eq!(package_bit(&s, k, &g), p.bit(&g).unwrap());
                }
            }
            let field = ChainField::new(&s);
            for k in 0..=3 {
                let c = chain(k, &s).unwrap();
                for g in c.shape().points() {
                    assert_eq!(field.bit(&g), c.bit(&g), "order {k} at {g:?}");
                }
            }
        }
    }

    #[test]
    fn chain_nesting() {
        let s = DoublingScheme::staircase();
        for k in 1..=3 {
            let big = chain(k, &s).unwrap();
            let small = chain(k - 1, &s).unwrap();
            for g in small.shape().points() {
                assert_eq!(big.bit(&g), small.bit(&g));
            }
        }
    }

    #[test]
    fn first_positions() {
        let s = DoublingScheme::staircase();
        let x = mult_champernowne(&s, 1 << 12).unwrap();
        assert_eq!(x.get(1), Some(false));
        assert_eq!(x.get(2), Some(true));
        // positions with a prime factor beyond the chain dimensions are 0
        let p = crate::primes::nth_prime(s.dim(order_index(MAX_ORDER + 1)) + 1).unwrap();
        assert_eq!(x.get(p), Some(false));
        let _ = classical_champernowne(1);
    }

    #[test]
    fn coverage_by_packages() {
        let s = DoublingScheme::staircase();
        for k in 0..=2u32 {
            let n = order_index(k + 1);
            let expected = Ratio::new((1u64 << ((1u64 << k) + 1)) - 1, 1u64 << ((1u64 << k) + 1));
            assert_eq!(package_coverage(&s, k, n).unwrap(), expected);
        }
    }
}
