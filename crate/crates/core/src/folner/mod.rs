//! The semigroups (N, +) and (N, x), their Følner sequences, invariance
//! defects, cores and densities.

mod boxes;
mod expvec;
mod schedule;
mod spec;

pub use boxes::{AnchoredBox, BoxPoints, MAX_MATERIALIZED};
pub use expvec::{expvec_to_nat, exps_to_nat, leading_exps, nat_to_expvec, ExpVec};
pub use schedule::DirectionSchedule;
pub use spec::{slow_step_prime, FolnerSpec, NiceSource};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primes;

const NAT_LIMIT: u64 = 1 << 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Semigroup {
    Additive,
    Multiplicative,
}

impl Semigroup {
    /// The identity element: 0 for (N, +) (adjoined formally), 1 for (N, x).
    pub fn identity(self) -> u64 {
        match self {
            Semigroup::Additive => 0,
            Semigroup::Multiplicative => 1,
        }
    }

    /// `h ∘ g`, or `None` past 63 bits.
    pub fn op(self, h: u64, g: u64) -> Option<u64> {
        let r = match self {
            Semigroup::Additive => h.checked_add(g)?,
            Semigroup::Multiplicative => h.checked_mul(g)?,
        };
        (r < NAT_LIMIT).then_some(r)
    }

    /// The `g` (identity allowed) with `h ∘ g = c`, if any.
    pub fn quotient(self, c: u64, h: u64) -> Option<u64> {
        match self {
            Semigroup::Additive => c.checked_sub(h),
            Semigroup::Multiplicative => (h != 0 && c % h == 0).then(|| c / h),
        }
    }
}

/// A strictly increasing list of naturals. For (N, +) the element 0 stands
/// for the adjoined identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct FiniteSet {
    elems: Vec<u64>,
}

impl FiniteSet {
    pub fn empty() -> Self {
        FiniteSet { elems: Vec::new() }
    }

    pub fn from_unsorted(mut elems: Vec<u64>) -> Self {
        elems.sort_unstable();
        elems.dedup();
        FiniteSet { elems }
    }

    pub fn from_sorted(elems: Vec<u64>) -> Result<Self> {
        if elems.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("set elements not strictly increasing".into()));
        }
        Ok(FiniteSet { elems })
    }

    pub(crate) fn from_sorted_unchecked(elems: Vec<u64>) -> Self {
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        FiniteSet { elems }
    }

    pub fn elems(&self) -> &[u64] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn max(&self) -> Option<u64> {
        self.elems.last().copied()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elems.binary_search(&x).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.elems.iter().copied()
    }

    pub fn is_subset(&self, other: &FiniteSet) -> bool {
        self.elems.iter().all(|&x| other.contains(x))
    }

    pub fn intersection_len(&self, other: &FiniteSet) -> usize {
        merge_counts(&self.elems, &other.elems).1
    }

    pub fn symmetric_difference_len(&self, other: &FiniteSet) -> usize {
        let (only, both) = merge_counts(&self.elems, &other.elems);
        only - both
    }

    /// `{h ∘ f : h ∈ K, f ∈ F}`.
    pub fn product(&self, k: &FiniteSet, sg: Semigroup) -> Result<FiniteSet> {
        let mut out = Vec::with_capacity(self.len() * k.len());
        for h in k.iter() {
            for f in self.iter() {
                out.push(sg.op(h, f).ok_or_else(|| Error::Overflow(format!("{h} ∘ {f}")))?);
            }
        }
        Ok(FiniteSet::from_unsorted(out))
    }
}

/// (|A| + |B|, |A ∩ B|) for sorted slices.
fn merge_counts(a: &[u64], b: &[u64]) -> (usize, usize) {
    let (mut i, mut j, mut both) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                both += 1;
                i += 1;
                j += 1;
            }
        }
    }
    (a.len() + b.len() - both, both)
}

/// |KF △ F| / |F| as an exact fraction.
pub fn invariance_defect(f: &FiniteSet, k: &FiniteSet, sg: Semigroup) -> Result<Ratio<u64>> {
    if f.is_empty() || k.is_empty() {
        return Err(Error::InvalidParameter("F and K must be nonempty".into()));
    }
    let kf = f.product(k, sg)?;
    Ok(Ratio::new(kf.symmetric_difference_len(f) as u64, f.len() as u64))
}

/// The K-core {h : Kh ⊂ F}. With `include_identity`, the identity is
/// adjoined when K ⊆ F (this only changes anything in (N, +)).
pub fn k_core(f: &FiniteSet, k: &FiniteSet, sg: Semigroup, include_identity: bool) -> FiniteSet {
    let Some(k0) = k.elems().first().copied() else {
        return f.clone();
    };
    let mut out = Vec::new();
    for c in f.iter() {
        let Some(h) = sg.quotient(c, k0) else { continue };
        if h == 0 {
            continue;
        }
        if k.iter().all(|kk| sg.op(kk, h).is_some_and(|x| f.contains(x))) {
            out.push(h);
        }
    }
    if include_identity && sg == Semigroup::Additive && k.is_subset(f) {
        out.push(0);
    }
    FiniteSet::from_unsorted(out)
}

/// |F △ F'| / |F| exactly.
pub fn set_equivalence_defect(f: &FiniteSet, f2: &FiniteSet) -> Result<Ratio<u64>> {
    if f.is_empty() {
        return Err(Error::InvalidParameter("F must be nonempty".into()));
    }
    Ok(Ratio::new(f.symmetric_difference_len(f2) as u64, f.len() as u64))
}

/// |F_n △ F'_n| / |F_n| for two recipes over the same semigroup.
pub fn equivalence_defect(a: &FolnerSpec, b: &FolnerSpec, n: u64) -> Result<Ratio<u64>> {
    if a.semigroup() != b.semigroup() {
        return Err(Error::InvalidParameter("recipes live in different semigroups".into()));
    }
    set_equivalence_defect(&a.folner_set(n)?, &b.folner_set(n)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityRow {
    pub n: u64,
    pub card: u128,
    pub hits: u128,
    pub density: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityTable {
    pub rows: Vec<DensityRow>,
    /// Max over the second half of the rows.
    pub upper: f64,
    /// Min over the second half of the rows.
    pub lower: f64,
}

impl DensityTable {
    pub fn from_rows(rows: Vec<DensityRow>) -> Self {
        let tail = &rows[rows.len() / 2..];
        let upper = tail.iter().map(|r| r.density).fold(f64::NAN, f64::max);
        let lower = tail.iter().map(|r| r.density).fold(f64::NAN, f64::min);
        DensityTable { rows, upper, lower }
    }
}

/// |F_n ∩ A| / |F_n| for each n in `ns`, with tail max/min.
pub fn density<P>(member: P, spec: &FolnerSpec, ns: &[u64]) -> Result<DensityTable>
where
    P: Fn(u64) -> bool + Sync,
{
    if ns.is_empty() {
        return Err(Error::InvalidParameter("empty index list".into()));
    }
    let mut rows = Vec::with_capacity(ns.len());
    if *spec == FolnerSpec::Classical && ns.windows(2).all(|w| w[0] < w[1]) {
        // Nested prefixes: one running count.
        let mut hits = 0u128;
        let mut upto = 0u64;
        for &n in ns {
            if n == 0 {
                return Err(Error::InvalidParameter("index 0".into()));
            }
            for m in upto + 1..=n {
                hits += member(m) as u128;
            }
            upto = n;
            rows.push(DensityRow { n, card: n as u128, hits, density: hits as f64 / n as f64 });
        }
    } else {
        for &n in ns {
            let f = spec.folner_set(n)?;
            let hits = f.iter().filter(|&m| member(m)).count() as u128;
            let card = f.len() as u128;
            rows.push(DensityRow { n, card, hits, density: hits as f64 / card as f64 });
        }
    }
    Ok(DensityTable::from_rows(rows))
}

/// Convenience: the divisors of `l` as a set.
pub fn divisors(l: u64) -> Result<FiniteSet> {
    if l == 0 || l >= NAT_LIMIT {
        return Err(Error::InvalidParameter(format!("{l} is outside 1..2^63")));
    }
    AnchoredBox::from_leading(l)
        .and_then(|b| b.to_naturals())
        .or_else(|_| Ok(FiniteSet::from_sorted_unchecked(primes::divisors(l))))
}
