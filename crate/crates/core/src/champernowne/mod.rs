//! The classical Champernowne sequence and its multiplicative analogue over
//! a doubling Følner sequence: bricks, packages, chains and the net-normal
//! modification.

mod figure;
mod net;
mod packages;
mod scheme;

pub use figure::{
    diff_is_expected, figure1_blocks, figure1_diff, render_block, render_figure1, RowDiff, KNOWN_MISPRINTS,
    PUBLISHED,
};
pub use net::{net_normal, tile_counts, NetNormal};
pub use packages::{
    brick, brick_bit, bricks, chain, chain_owner, mult_champernowne, package, package_bit, package_coverage,
    package_layout, ChainField, PackageLayout, MAX_BRICK_LIST_ORDER, MAX_CHAIN_ORDER, MAX_PACKAGE_ORDER,
};
pub use scheme::{order_index, DoublingScheme, MAX_ORDER};

use crate::error::{Error, Result};
use crate::seq::BitSeq;

/// Binary expansions of 1, 2, 3, … concatenated, truncated to n bits.
pub fn classical_champernowne(n: u64) -> Result<BitSeq> {
    if n > 1 << 31 {
        return Err(Error::InvalidParameter(format!("prefix length {n} exceeds 2^31")));
    }
    let mut words = vec![0u64; n.div_ceil(64) as usize];
    let mut pos = 0u64;
    let mut v = 1u64;
    while pos < n {
        let width = 64 - v.leading_zeros();
        for b in (0..width).rev() {
            if pos == n {
                break;
            }
            if (v >> b) & 1 == 1 {
                words[(pos / 64) as usize] |= 1 << (pos % 64);
            }
            pos += 1;
        }
        v += 1;
    }
    Ok(BitSeq::from_words(words, n).with_provenance("classical-champernowne"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_prefixes() {
        assert_eq!(classical_champernowne(6).unwrap().to_string01(), "110111");
        assert_eq!(classical_champernowne(16).unwrap().to_string01(), "1101110010111011");
        assert_eq!(classical_champernowne(1).unwrap().to_string01(), "1");
        let reference: String = (1..2000u32).map(|v| format!("{v:b}")).collect();
        assert_eq!(classical_champernowne(10_000).unwrap().to_string01(), reference[..10_000]);
    }
}
