//! The net-normal modification: a mixed tiling of 𝔾 whose order-k tiles
//! fill the part of the non-invariant region Z_k not already tiled.

use std::collections::HashSet;

use super::packages::{package_bit, par_bits};
use super::scheme::{order_index, DoublingScheme, MAX_ORDER};
use crate::error::{Error, Result};
use crate::folner::leading_exps;
use crate::seq::{BitSeq, GField};

/// Corner set of the tiling: the order-0 region.
const BASE_INDEX: u64 = 3;

#[derive(Debug, Clone)]
pub struct NetNormal<'a> {
    scheme: &'a DoublingScheme,
}

impl<'a> NetNormal<'a> {
    pub fn new(scheme: &'a DoublingScheme) -> Self {
        NetNormal { scheme }
    }

    /// Certified part of the non-invariant region for (F_k, 1/k): some
    /// coordinate i ≤ dim F_k has g_i < k·s_i − 1, s_i the box size of F_k.
    pub fn in_z(&self, k: u32, g: &[u32]) -> bool {
        let c = self.scheme.log_sides(k as u64);
        c.iter().enumerate().any(|(i, &ci)| {
            let s = (1u64 << ci) - 1;
            let bound = (k as u64 * s).saturating_sub(1);
            (g.get(i).copied().unwrap_or(0) as u64) < bound
        })
    }

    /// Membership in the region tiled by orders ≤ k: the saturation of
    /// (region k−1) ∪ Z_k by the standard tiles of F_{r(k+1)}. Both parts
    /// are down-sets, so a tile meets them iff its corner does.
    pub fn in_region(&self, k: u32, g: &[u32]) -> bool {
        if k == 0 {
            return self.scheme.contains(BASE_INDEX, g);
        }
        let c = self.scheme.corner(order_index(k + 1), g);
        self.in_region(k - 1, &c) || self.in_z(k, &c)
    }

    /// Order of the tile containing g; points outside every region up to
    /// [`MAX_ORDER`] take order 0.
    pub fn order(&self, g: &[u32]) -> u32 {
        (0..=MAX_ORDER).find(|&k| self.in_region(k, g)).unwrap_or(0)
    }

    /// Corner of the tile containing g, with its order.
    pub fn tile(&self, g: &[u32]) -> (u32, Vec<u32>) {
        let k = self.order(g);
        (k, self.scheme.corner(order_index(k), g))
    }
}

impl GField for NetNormal<'_> {
    fn bit(&self, g: &[u32]) -> Option<bool> {
        let k = self.order(g);
        Some(package_bit(self.scheme, k, &self.scheme.offset(order_index(k), g)))
    }
}

/// Exponent vector of m truncated to `dims` coordinates, with one extra
/// nonzero coordinate standing for any prime factor beyond them.
fn coords(m: u64, dims: usize) -> (Vec<u32>, u64) {
    let (mut g, rest) = leading_exps(m, dims);
    if rest > 1 {
        g.resize(dims, 0);
        g.push(1);
    }
    (g, rest)
}

fn tracked_dims(scheme: &DoublingScheme) -> usize {
    scheme.dim(order_index(MAX_ORDER + 1))
}

pub fn net_normal(scheme: &DoublingScheme, n: u64) -> Result<BitSeq> {
    if n > 1 << 24 {
        return Err(Error::InvalidParameter(format!("prefix length {n} exceeds 2^24")));
    }
    let field = NetNormal::new(scheme);
    let dims = tracked_dims(scheme);
    Ok(par_bits(n, |m| field.bit(&coords(m, dims).0).unwrap())
        .with_provenance(format!("net-normal directions={:?}", scheme.schedule())))
}

/// Number of distinct tiles of each order 0..=MAX_ORDER meeting {1..=n}.
pub fn tile_counts(scheme: &DoublingScheme, n: u64) -> Vec<u64> {
    let field = NetNormal::new(scheme);
    let dims = tracked_dims(scheme);
    let mut seen: Vec<HashSet<(Vec<u32>, u64)>> = vec![HashSet::new(); MAX_ORDER as usize + 1];
    for m in 1..=n {
        let (g, rest) = coords(m, dims);
        let (k, mut corner) = field.tile(&g);
        corner.truncate(dims);
        seen[k as usize].insert((corner, rest));
    }
    seen.iter().map(|s| s.len() as u64).collect()
}
