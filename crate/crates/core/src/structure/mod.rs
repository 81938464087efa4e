//! Subsets of N up to a horizon: multiplicative and additive transforms,
//! configuration searches, and densities of derived sets along Følner
//! sequences.

mod ex9;
mod orto;
mod search;
mod thick;

pub use ex9::{ex9_set, Ex9Set, Ex9Stage};
pub use orto::{multiples_fraction, orto_set, OrtoSet, OrtoStage};
pub use search::{config_search, linear_solutions_by_runs, Pattern, SearchBounds, SearchResult, MAX_CANDIDATES};
pub use thick::{separating_delta, thick_counterexample, ThickCounterexample};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::folner::{density, DensityTable, FolnerSpec};
use crate::seq::BitSeq;

/// Largest horizon a set may declare (membership is a bitmap).
pub const MAX_HORIZON: u64 = 1 << 34;

/// A subset of {1, ..., horizon}.
#[derive(Debug, Clone)]
pub struct NatSet {
    horizon: u64,
    elems: Vec<u64>,
    bits: Vec<u64>,
    provenance: String,
}

impl PartialEq for NatSet {
    fn eq(&self, other: &Self) -> bool {
        self.horizon == other.horizon && self.elems == other.elems
    }
}

impl Eq for NatSet {}

impl NatSet {
    /// Sorts and deduplicates; elements must lie in 1..=horizon.
    pub fn new(mut elems: Vec<u64>, horizon: u64) -> Result<Self> {
        if horizon > MAX_HORIZON {
            return Err(Error::InvalidParameter(format!("horizon {horizon} above {MAX_HORIZON}")));
        }
        elems.sort_unstable();
        elems.dedup();
        if elems.first() == Some(&0) || elems.last().is_some_and(|&m| m > horizon) {
            return Err(Error::InvalidParameter(format!("elements must lie in 1..={horizon}")));
        }
        let mut bits = vec![0u64; (horizon / 64 + 1) as usize];
        for &m in &elems {
            bits[(m / 64) as usize] |= 1 << (m % 64);
        }
        Ok(NatSet { horizon, elems, bits, provenance: String::new() })
    }

    pub fn from_fn<P: Fn(u64) -> bool>(horizon: u64, pred: P) -> Result<Self> {
        NatSet::new((1..=horizon).filter(|&m| pred(m)).collect(), horizon)
    }

    pub fn all(horizon: u64) -> Result<Self> {
        NatSet::from_fn(horizon, |_| true)
    }

    /// {m ≤ |x| : x_m = 1}.
    pub fn support_of(x: &BitSeq) -> Result<Self> {
        Ok(NatSet::new(x.support(), x.len())?.with_provenance(format!("support of {}", x.provenance())))
    }

    pub fn with_provenance(mut self, p: impl Into<String>) -> Self {
        self.provenance = p.into();
        self
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
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

    #[inline]
    pub fn contains(&self, m: u64) -> bool {
        m <= self.horizon && self.bits[(m / 64) as usize] >> (m % 64) & 1 == 1
    }

    pub fn indicator(&self) -> BitSeq {
        BitSeq::from_fn(self.horizon, |m| self.contains(m)).with_provenance(self.provenance.clone())
    }

    /// Maximal runs of consecutive elements as closed intervals.
    pub fn runs(&self) -> Vec<(u64, u64)> {
        let mut out: Vec<(u64, u64)> = Vec::new();
        for &m in &self.elems {
            match out.last_mut() {
                Some(last) if last.1 + 1 == m => last.1 = m,
                _ => out.push((m, m)),
            }
        }
        out
    }

    /// Length of the longest run of consecutive elements.
    pub fn longest_run(&self) -> u64 {
        self.runs().iter().map(|(a, b)| b - a + 1).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Transform {
    /// A/n = {m : nm ∈ A}.
    Div(u64),
    /// nA.
    Times(u64),
    /// A + m.
    Plus(u64),
    /// (A - m) ∩ N.
    Minus(u64),
}

/// The transformed set within its natural horizon (⌊N/n⌋, nN, N+m, N-m).
pub fn set_transform(a: &NatSet, kind: Transform) -> Result<NatSet> {
    let n = a.horizon;
    let (elems, horizon, label) = match kind {
        Transform::Div(d) | Transform::Times(d) if d == 0 => {
            return Err(Error::InvalidParameter("factor 0".into()));
        }
        Transform::Div(d) => ((1..=n / d).filter(|&m| a.contains(m * d)).collect(), n / d, format!("/{d}")),
        Transform::Times(d) => {
            let h = n.checked_mul(d).ok_or_else(|| Error::Overflow(format!("{n}·{d}")))?;
            (a.elems.iter().map(|&m| m * d).collect(), h, format!("·{d}"))
        }
        Transform::Plus(s) => (a.elems.iter().map(|&m| m + s).collect(), n + s, format!("+{s}")),
        Transform::Minus(s) => (
            a.elems.iter().filter(|&&m| m > s).map(|&m| m - s).collect(),
            n.saturating_sub(s),
            format!("-{s}"),
        ),
    };
    Ok(NatSet::new(elems, horizon)?.with_provenance(format!("({}){label}", a.provenance)))
}

fn max_index_element(spec: &FolnerSpec, ns: &[u64]) -> Result<u64> {
    let mut top = 0;
    for &n in ns {
        top = top.max(match spec {
            FolnerSpec::Classical => n,
            _ => spec.folner_set(n)?.max().unwrap_or(0),
        });
    }
    Ok(top)
}

/// Density of A/n_1 ∩ ... ∩ A/n_k along the spec.
pub fn intersection_density(a: &NatSet, divisors: &[u64], spec: &FolnerSpec, ns: &[u64]) -> Result<DensityTable> {
    if divisors.contains(&0) {
        return Err(Error::InvalidParameter("divisor 0".into()));
    }
    let top = max_index_element(spec, ns)?;
    let dmax = divisors.iter().copied().max().unwrap_or(1);
    if top.checked_mul(dmax).is_none_or(|r| r > a.horizon) {
        return Err(Error::Horizon(format!("{dmax}·{top} exceeds the set horizon {}", a.horizon)));
    }
    density(|m| divisors.iter().all(|&d| a.contains(m * d)), spec, ns)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndependenceProfile {
    pub shifts: Vec<u64>,
    pub card: u64,
    /// Indexed by the pattern read MSB-first along the sorted shifts.
    pub counts: Vec<u64>,
    pub densities: Vec<f64>,
    /// max over patterns of |density - 2^{-|K|}|.
    pub defect: f64,
}

/// Densities of ∩_{h∈K} h^{-1} A^{B(h)} over F_n for every pattern B, where
/// A^1 = A and A^0 is the complement.
pub fn independence_profile(a: &NatSet, k: &[u64], spec: &FolnerSpec, n: u64) -> Result<IndependenceProfile> {
    let mut shifts = k.to_vec();
    shifts.sort_unstable();
    shifts.dedup();
    if shifts.is_empty() || shifts.len() > crate::seq::MAX_BLOCK_SUPPORT || shifts[0] == 0 {
        return Err(Error::InvalidParameter("K must be a nonempty set of naturals of moderate size".into()));
    }
    let sg = spec.semigroup();
    let f = spec.folner_set(n)?;
    let hmax = *shifts.last().unwrap();
    let reach = f.max().map(|g| sg.op(hmax, g)).unwrap_or(Some(0));
    if reach.is_none_or(|r| r > a.horizon) {
        return Err(Error::Horizon(format!("K∘F_{n} leaves the set horizon {}", a.horizon)));
    }
    let mut counts = vec![0u64; 1 << shifts.len()];
    for g in f.iter() {
        let idx = shifts
            .iter()
            .fold(0usize, |acc, &h| (acc << 1) | a.contains(sg.op(h, g).unwrap()) as usize);
        counts[idx] += 1;
    }
    let card = f.len() as u64;
    let densities: Vec<f64> = counts.iter().map(|&c| c as f64 / card as f64).collect();
    let target = 1.0 / counts.len() as f64;
    let defect = densities.iter().map(|d| (d - target).abs()).fold(0.0, f64::max);
    Ok(IndependenceProfile { shifts, card, counts, densities, defect })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverOp {
    /// B + A.
    Sum,
    /// BA.
    Product,
}

/// Density of B + A or BA along the spec. Every F_n must lie within the
/// horizon of A.
pub fn cover_density(a: &NatSet, b: &NatSet, spec: &FolnerSpec, ns: &[u64], op: CoverOp) -> Result<DensityTable> {
    let top = max_index_element(spec, ns)?;
    if top > a.horizon {
        return Err(Error::Horizon(format!("F_n reaches {top}, beyond the set horizon {}", a.horizon)));
    }
    let bs = b.elems();
    match op {
        CoverOp::Sum => density(|t| bs.iter().take_while(|&&s| s < t).any(|&s| a.contains(t - s)), spec, ns),
        CoverOp::Product => density(
            |t| bs.iter().take_while(|&&s| s <= t).any(|&s| t % s == 0 && a.contains(t / s)),
            spec,
            ns,
        ),
    }
}

/// Density of nA + mA (or nA - mA) along the spec. For the difference only
/// representations t = na - mb with a, b within the horizon are seen.
pub fn combination_density(
    a: &NatSet,
    n: u64,
    m: u64,
    minus: bool,
    spec: &FolnerSpec,
    ns: &[u64],
) -> Result<DensityTable> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidParameter("coefficients must be positive".into()));
    }
    let top = max_index_element(spec, ns)?;
    if top > a.horizon {
        return Err(Error::Horizon(format!("F_n reaches {top}, beyond the set horizon {}", a.horizon)));
    }
    let es = a.elems();
    if minus {
        // t = na - mb  ⇔  na = t + mb
        density(
            |t| {
                es.iter().any(|&s| {
                    let v = t as u128 + m as u128 * s as u128;
                    v % n as u128 == 0 && u64::try_from(v / n as u128).is_ok_and(|r| a.contains(r))
                })
            },
            spec,
            ns,
        )
    } else {
        density(
            |t| {
                es.iter()
                    .take_while(|&&s| n * s < t)
                    .any(|&s| (t - n * s) % m == 0 && a.contains((t - n * s) / m))
            },
            spec,
            ns,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::folner::FiniteSet;
    use crate::sampler::{bernoulli_seq, DEFAULT_SEED};
    use crate::seq::block_freqs;

    fn squares(n: u64) -> NatSet {
        NatSet::from_fn(n, |m| {
            let r = (m as f64).sqrt() as u64;
            (r.saturating_sub(1)..=r + 1).any(|s| s * s == m)
        })
        .unwrap()
    }

    #[test]
    fn transforms() {
        let evens = NatSet::from_fn(100, |m| m % 2 == 0).unwrap();
        assert_eq!(set_transform(&evens, Transform::Div(2)).unwrap(), NatSet::all(50).unwrap());
        let q = set_transform(&squares(100), Transform::Div(4)).unwrap();
        assert_eq!(q.elems(), &[1, 4, 9, 16, 25]);
        assert_eq!(q.horizon(), 25);
        let sq = squares(100);
        assert_eq!(set_transform(&sq, Transform::Plus(0)).unwrap(), sq);
        let t = set_transform(&sq, Transform::Times(3)).unwrap();
        assert_eq!(set_transform(&t, Transform::Div(3)).unwrap(), sq);
        let m = set_transform(&sq, Transform::Minus(4)).unwrap();
        assert_eq!(m.elems()[..3], [5, 12, 21]);
        assert!(set_transform(&sq, Transform::Div(0)).is_err());
    }

    #[test]
    fn runs_and_membership() {
        let a = NatSet::new(vec![3, 1, 2, 7, 9, 8, 3], 10).unwrap();
        assert_eq!(a.runs(), vec![(1, 3), (7, 9)]);
        assert_eq!(a.longest_run(), 3);
        assert!(a.contains(8) && !a.contains(4) && !a.contains(11) && !a.contains(0));
        assert!(NatSet::new(vec![11], 10).is_err());
        assert!(NatSet::new(vec![0], 10).is_err());
    }

    #[test]
    fn intersection_density_trivial_cases() {
        let all = NatSet::all(1000).unwrap();
        let t = intersection_density(&all, &[2, 3, 5], &FolnerSpec::Classical, &[50, 100, 200]).unwrap();
        assert!(t.rows.iter().all(|r| r.density == 1.0));
        let evens = NatSet::from_fn(1000, |m| m % 2 == 0).unwrap();
        let t = intersection_density(&evens, &[2], &FolnerSpec::Classical, &[500]).unwrap();
        assert_eq!(t.rows[0].density, 1.0);
        assert!(intersection_density(&evens, &[3], &FolnerSpec::Classical, &[500]).is_err());
    }

    #[test]
    fn bernoulli_intersection_near_quarter() {
        let x = bernoulli_seq(DEFAULT_SEED, 3_000_000).unwrap();
        let a = NatSet::support_of(&x).unwrap();
        let t = intersection_density(&a, &[2, 3], &FolnerSpec::Classical, &[1_000_000]).unwrap();
        assert!((t.rows[0].density - 0.25).abs() < 0.01, "{t:?}");
    }

    #[test]
    fn profile_matches_block_freqs() {
        let x = bernoulli_seq(DEFAULT_SEED, 1 << 20).unwrap();
        let a = NatSet::support_of(&x).unwrap();
        let doubling = FolnerSpec::Doubling { directions: crate::folner::DirectionSchedule::Staircase };
        for (spec, n) in [(FolnerSpec::Classical, 20_000u64), (doubling, 6)] {
            let k = [1u64, 2, 3];
            let p = independence_profile(&a, &k, &spec, n).unwrap();
            let bf = block_freqs(&x, &spec, n, &FiniteSet::from_unsorted(k.to_vec())).unwrap();
            assert_eq!(p.counts, bf.counts);
            assert_eq!(p.counts.iter().sum::<u64>(), p.card);
        }
        let all = NatSet::all(100).unwrap();
        let p = independence_profile(&all, &[1, 5], &FolnerSpec::Classical, 50).unwrap();
        assert_eq!(p.densities, vec![0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn bernoulli_profile_near_uniform() {
        let x = bernoulli_seq(DEFAULT_SEED, 1_000_010).unwrap();
        let a = NatSet::support_of(&x).unwrap();
        let p = independence_profile(&a, &[1, 2], &FolnerSpec::Classical, 1_000_000).unwrap();
        assert!(p.densities.iter().all(|d| (d - 0.25).abs() < 0.005), "{p:?}");
    }

    #[test]
    fn covers() {
        let empty = NatSet::new(vec![], 1000).unwrap();
        let b = NatSet::new((1..=20).collect(), 20).unwrap();
        let t = cover_density(&empty, &b, &FolnerSpec::Classical, &[1000], CoverOp::Sum).unwrap();
        assert_eq!(t.rows[0].density, 0.0);
        let all = NatSet::all(1000).unwrap();
        let b5 = NatSet::new(vec![5], 5).unwrap();
        let t = cover_density(&all, &b5, &FolnerSpec::Classical, &[5, 1000], CoverOp::Sum).unwrap();
        assert_eq!(t.rows[0].hits, 0);
        assert_eq!(t.rows[1].hits, 995);
        let t = cover_density(&all, &b5, &FolnerSpec::Classical, &[1000], CoverOp::Product).unwrap();
        assert_eq!(t.rows[0].hits, 200);
    }

    #[test]
    fn bernoulli_cover_and_translation() {
        let x = bernoulli_seq(DEFAULT_SEED, 1_000_000).unwrap();
        let a = NatSet::support_of(&x).unwrap();
        let b = NatSet::new((1..=20).collect(), 20).unwrap();
        let t = cover_density(&a, &b, &FolnerSpec::Classical, &[1_000_000], CoverOp::Sum).unwrap();
        assert!(t.rows[0].density >= 1.0 - 2f64.powi(-20) - 0.01);
        let base = density(|m| a.contains(m), &FolnerSpec::Classical, &[999_990]).unwrap().rows[0].density;
        for g in 1..=10u64 {
            let shifted = set_transform(&a, Transform::Plus(g)).unwrap();
            let d = density(|m| shifted.contains(m), &FolnerSpec::Classical, &[999_990]).unwrap().rows[0].density;
            assert!((d - base).abs() <= 0.01);
        }
    }

    #[test]
    fn combinations() {
        let odds = NatSet::from_fn(2000, |m| m % 2 == 1).unwrap();
        // odd + odd is even; 2·odd + odd is odd
        let t = combination_density(&odds, 1, 1, false, &FolnerSpec::Classical, &[1000]).unwrap();
        assert_eq!(t.rows[0].hits, 500);
        let t = combination_density(&odds, 1, 1, true, &FolnerSpec::Classical, &[1000]).unwrap();
        assert_eq!(t.rows[0].hits, 500);
        let t = combination_density(&odds, 2, 1, false, &FolnerSpec::Classical, &[1000]).unwrap();
        assert_eq!(t.rows[0].hits, 499);
    }
}
