//! Seeded Bernoulli(1/2) sampling, genericity diagnostics along Følner
//! sequences, and the adversarial doubling construction.

mod adversarial;

pub use adversarial::{adversarial_doubling, AdversarialRun, AdversarialStep};

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::folner::{nat_to_expvec, AnchoredBox, ExpVec, FiniteSet, FolnerSpec};
use crate::seq::{box_normality_defect, normality_defect, BitSeq, BoxBlock, GField};

/// Seed used when a run config does not name one.
pub const DEFAULT_SEED: u64 = 1;

/// Longest prefix [`bernoulli_seq`] produces.
pub const MAX_BERNOULLI_BITS: u64 = 1 << 30;

fn bit_stream(seed: u64) -> impl Iterator<Item = bool> {
    let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
    std::iter::repeat_with(move || rng.next_u64() >> 63 == 1)
}

/// Bit i is the top bit of the i-th output of xoshiro256** seeded through
/// splitmix64.
pub fn bernoulli_seq(seed: u64, n: u64) -> Result<BitSeq> {
    if n > MAX_BERNOULLI_BITS {
        return Err(Error::InvalidParameter(format!("prefix length {n} exceeds 2^30")));
    }
    let mut words = vec![0u64; n.div_ceil(64) as usize];
    for (i, b) in bit_stream(seed).take(n as usize).enumerate() {
        words[i / 64] |= (b as u64) << (i % 64);
    }
    Ok(BitSeq::from_words(words, n).with_provenance(format!("bernoulli seed={seed}")))
}

/// Smallest anchored box containing K + F.
pub fn enclosing_box(shape: &AnchoredBox, k: &[ExpVec]) -> AnchoredBox {
    let dim = k.iter().map(|h| h.dim()).chain([shape.dim()]).max().unwrap_or(0);
    let sizes = (0..dim)
        .map(|i| shape.sizes().get(i).copied().unwrap_or(0) + k.iter().map(|h| h.get(i + 1)).max().unwrap_or(0))
        .collect();
    AnchoredBox::new(sizes)
}

/// A Bernoulli field on a box of 𝔾: the point of colexicographic rank t
/// gets bit t of the seeded stream.
pub fn bernoulli_box(seed: u64, shape: AnchoredBox) -> Result<BoxBlock> {
    let card = shape
        .cardinality()
        .filter(|&c| c <= MAX_BERNOULLI_BITS as u128)
        .ok_or_else(|| Error::Overflow("box too large to sample".into()))?;
    BoxBlock::new(shape, bit_stream(seed).take(card as usize).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummabilityReport {
    pub alphas: Vec<f64>,
    /// partial_sums[a][j] = Σ α_a^{|F_n|} over the first j + 1 indices.
    pub partial_sums: Vec<Vec<f64>>,
    pub strictly_increasing: bool,
}

/// Partial sums of Σ α^{|F_n|} up to `n_max`, and whether |F_n| strictly
/// increases on that range.
pub fn summability_check(spec: &FolnerSpec, alphas: &[f64], n_max: u64) -> Result<SummabilityReport> {
    if let Some(&a) = alphas.iter().find(|&&a| !(a > 0.0 && a < 1.0)) {
        return Err(Error::InvalidParameter(format!("alpha {a} outside (0, 1)")));
    }
    let cards = (spec.first_index()..=n_max)
        .map(|n| spec.cardinality(n))
        .collect::<Result<Vec<u128>>>()?;
    let partial_sums = alphas
        .iter()
        .map(|&a| {
            cards
                .iter()
                .scan(0.0, |s, &c| {
                    *s += a.powf(c as f64);
                    Some(*s)
                })
                .collect()
        })
        .collect();
    Ok(SummabilityReport {
        alphas: alphas.to_vec(),
        partial_sums,
        strictly_increasing: cards.windows(2).all(|w| w[0] < w[1]),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenericityRow {
    pub k: Vec<u64>,
    pub n: u64,
    pub card: u128,
    pub defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenericityTable {
    pub rows: Vec<GenericityRow>,
    /// Per K (in input order): whether the defect never increases along n.
    pub non_increasing: Vec<bool>,
}

fn table(rows: Vec<GenericityRow>, families: usize) -> GenericityTable {
    let non_increasing = (0..families)
        .map(|f| {
            let ds: Vec<f64> = rows.iter().skip(f).step_by(families).map(|r| r.defect).collect();
            ds.windows(2).all(|w| w[1] <= w[0])
        })
        .collect();
    GenericityTable { rows, non_increasing }
}

/// Normality defect of a prefix over F_n for every K in the family and n
/// in the list (rows ordered by n, then K).
pub fn empirical_genericity(
    x: &BitSeq,
    spec: &FolnerSpec,
    k_family: &[FiniteSet],
    ns: &[u64],
) -> Result<GenericityTable> {
    let mut rows = Vec::new();
    for &n in ns {
        let card = spec.cardinality(n)?;
        for k in k_family {
            rows.push(GenericityRow { k: k.elems().to_vec(), n, card, defect: normality_defect(x, spec, n, k)? });
        }
    }
    Ok(table(rows, k_family.len()))
}

/// The same table for a field on 𝔾 along a box recipe, for boxes beyond
/// 63-bit leading parameters.
pub fn box_genericity<F: GField + ?Sized>(
    field: &F,
    spec: &FolnerSpec,
    k_family: &[FiniteSet],
    ns: &[u64],
) -> Result<GenericityTable> {
    let ks = k_family
        .iter()
        .map(|k| k.iter().map(nat_to_expvec).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for &n in ns {
        let shape = spec.box_at(n)?;
        let card = shape.cardinality().ok_or_else(|| Error::Overflow(format!("|F_{n}|")))?;
        for (k, kv) in k_family.iter().zip(&ks) {
            rows.push(GenericityRow {
                k: k.elems().to_vec(),
                n,
                card,
                defect: box_normality_defect(field, &shape, kv)?,
            });
        }
    }
    Ok(table(rows, k_family.len()))
}

/// Every nonempty K ⊆ {1, ..., m}.
pub fn subsets_of_first(m: u64) -> Vec<FiniteSet> {
    (1u64..1 << m)
        .map(|mask| FiniteSet::from_unsorted((1..=m).filter(|&i| mask >> (i - 1) & 1 == 1).collect()))
        .collect()
}

/// Four binomial standard deviations of a block frequency: the tolerance
/// 4·sqrt(2^{-|K|}(1 - 2^{-|K|}) / n).
pub fn four_sigma(k_len: usize, n: f64) -> f64 {
    let p = 0.5f64.powi(k_len as i32);
    4.0 * (p * (1.0 - p) / n).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::folner::DirectionSchedule;

    #[test]
    fn deterministic_and_balanced() {
        let a = bernoulli_seq(DEFAULT_SEED, 1_000_000).unwrap();
        assert_eq!(a, bernoulli_seq(DEFAULT_SEED, 1_000_000).unwrap());
        let mean = a.count_ones() as f64 / 1e6;
        assert!((0.497..=0.503).contains(&mean), "{mean}");
        let b = bernoulli_seq(7, 1_000_000).unwrap();
        let h = a.hamming(&b) as f64 / 1e6;
        assert!((0.49..=0.51).contains(&h));
        assert!(bernoulli_seq(0, MAX_BERNOULLI_BITS + 1).is_err());
    }

    #[test]
    fn stream_is_top_bits_of_xoshiro() {
        let mut rng = Xoshiro256StarStar::seed_from_u64(42);
        let x = bernoulli_seq(42, 200).unwrap();
        for i in 1..=200 {
            assert_eq!(x.bit(i), rng.next_u64() >> 63 == 1);
        }
    }

    #[test]
    fn summability_flags() {
        let r = summability_check(&FolnerSpec::Classical, &[0.5], 40).unwrap();
        assert!(r.strictly_increasing);
        assert!((r.partial_sums[0][39] - (1.0 - 0.5f64.powi(40))).abs() < 1e-12);
        let d = FolnerSpec::Doubling { directions: DirectionSchedule::Staircase };
        assert!(summability_check(&d, &[0.9], 30).unwrap().strictly_increasing);
        // stages of n_s intervals of length s
        let mut sets = Vec::new();
        let mut start = 1u64;
        for s in 1..=3u64 {
            for _ in 0..10 {
                sets.push(vec![(start, start + s - 1)]);
                start += s;
            }
        }
        let spec = FolnerSpec::IntervalUnion { sets };
        let r = summability_check(&spec, &[0.5], 30).unwrap();
        assert!(!r.strictly_increasing);
        let ps = &r.partial_sums[0];
        assert!((ps[9] - 5.0).abs() < 1e-12);
        assert!((ps[19] - ps[9] - 2.5).abs() < 1e-12);
        assert!(summability_check(&spec, &[1.0], 3).is_err());
    }

    #[test]
    fn constant_sequence_has_half_defect() {
        let x = BitSeq::from_fn(2000, |_| false);
        let t = empirical_genericity(&x, &FolnerSpec::Classical, &[FiniteSet::from_unsorted(vec![1])], &[10, 100, 1000])
            .unwrap();
        assert!(t.rows.iter().all(|r| r.defect == 0.5));
        assert_eq!(t.non_increasing, vec![true]);
    }

    #[test]
    fn box_sampling_matches_stream() {
        let shape = AnchoredBox::new(vec![3, 2]);
        let b = bernoulli_box(5, shape.clone()).unwrap();
        let x = bernoulli_seq(5, 12).unwrap();
        for (t, g) in shape.points().enumerate() {
            assert_eq!(b.bit(&g), Some(x.bit(t as u64 + 1)));
        }
        let k = [ExpVec::zero(), ExpVec::unit(1), ExpVec::unit(2)];
        assert_eq!(enclosing_box(&shape, &k).sizes(), &[4, 3]);
        assert_eq!(subsets_of_first(3).len(), 7);
    }
}
