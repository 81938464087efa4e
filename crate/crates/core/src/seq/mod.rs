//! Binary sequences, blocks, the occurrence counters N and Ñ, and
//! normality-defect reports.

mod bits;
mod count;
mod lattice;

pub use bits::{shift_mult, BitSeq};
pub use count::{
    block_counts, block_freqs, count_n, count_n_tilde, normality_defect, Block, BlockFreqs,
    MAX_BLOCK_SUPPORT,
};
pub use lattice::{
    box_block_counts, box_block_counts_n, box_normality_defect, ke_normal, BoxBlock, GField, NatField,
};
