use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};
use serde::Serialize;

use super::{verify_witness, RepetitiveSpec, Witness};
use crate::error::{Error, Result};
use crate::folner::FolnerSpec;
use crate::primes::{divisors, next_prime_after};
use crate::seq::BitSeq;

/// p^r with p the least prime above k and r = ⌈1/ε⌉; `None` when it
/// exceeds 64 bits.
pub fn m_k_eps(k: u64, eps: Ratio<u64>) -> Result<Option<u64>> {
    if eps <= Ratio::zero() || eps > Ratio::one() {
        return Err(Error::InvalidParameter(format!("ε = {eps} outside (0, 1]")));
    }
    let r = Integer::div_ceil(eps.denom(), eps.numer());
    let p = next_prime_after(k);
    Ok(u32::try_from(r).ok().and_then(|r| p.checked_pow(r)))
}

/// Fraction of the divisors of `big_m` lying in {m+1, ..., (k+1)m}.
pub fn divisor_window_fraction(m: u64, big_m: u64, k: u64) -> Result<Ratio<u64>> {
    if m == 0 || big_m % m != 0 {
        return Err(Error::InvalidParameter(format!("{m} does not divide {big_m}")));
    }
    let ds = divisors(big_m);
    let hi = (k as u128 + 1) * m as u128;
    let hits = ds.iter().filter(|&&d| d > m && (d as u128) <= hi).count() as u64;
    Ok(Ratio::new(hits, ds.len() as u64))
}

/// Zones {m_k + 1, ..., (k+1) m_k} of the multiplicative construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZoneSchedule {
    /// m_k = LCM(m_{k,2^-k}, L_{n_k - 1}) before thinning.
    pub raw: Vec<u64>,
    /// The thinned list with m_{k+1} > (k+1) m_k.
    pub m: Vec<u64>,
    /// Lower bound on every later m_k; `None` means at least 2^64.
    pub beyond: Option<u64>,
}

impl ZoneSchedule {
    /// Derives the schedule from the leading parameters of a nice recipe.
    pub fn from_spec(spec: &FolnerSpec) -> Result<Self> {
        if !matches!(spec, FolnerSpec::NiceBoxes { .. }) {
            return Err(Error::InvalidParameter("zones need a nice box recipe".into()));
        }
        spec.validate()?;
        let mut leading = Vec::new();
        for n in 1.. {
            match spec.leading_parameter(n) {
                Ok(l) => leading.push(l),
                Err(_) => break,
            }
        }
        let mut raw = Vec::new();
        let mut beyond = None;
        for k in 1u64.. {
            if k >= 64 {
                break;
            }
            let eps = Ratio::new(1, 1u64 << k);
            let Some(base) = m_k_eps(k, eps)? else { break };
            match leading.iter().position(|l| l % base == 0) {
                Some(i) => {
                    let prev = if i == 0 { 1 } else { leading[i - 1] };
                    raw.push(base.lcm(&prev));
                }
                None => {
                    beyond = Some(base);
                    break;
                }
            }
        }
        let mut m: Vec<u64> = Vec::new();
        for &r in &raw {
            let ok = match m.last() {
                None => true,
                Some(&last) => (r as u128) > (m.len() as u128 + 1) * last as u128,
            };
            if ok {
                m.push(r);
            }
        }
        if let (Some(b), Some(&last)) = (beyond, m.last()) {
            let next = ((m.len() as u128 + 1) * last as u128 + 1).min(u64::MAX as u128) as u64;
            beyond = Some(b.max(next));
        }
        Ok(ZoneSchedule { raw, m, beyond })
    }

    /// Zone index k (1-based) containing i, if any among the known zones.
    pub fn zone_of(&self, i: u64) -> Option<usize> {
        self.m
            .iter()
            .enumerate()
            .find(|&(k, &mk)| i > mk && (i as u128) <= (k as u128 + 2) * mk as u128)
            .map(|(k, _)| k + 1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultLiouville {
    pub x: BitSeq,
    pub zones: ZoneSchedule,
}

impl MultLiouville {
    /// w_1 = x|{1..m_1}, w_k = w_{k-1}^k u_k, truncated to the known zones.
    pub fn repetitive_spec(&self) -> RepetitiveSpec {
        let mut steps = Vec::new();
        let mut start = 1u64;
        for (i, &mk) in self.zones.m.iter().enumerate() {
            if mk > self.x.len() {
                break;
            }
            let u: Vec<bool> = (start..=mk).map(|j| self.x.bit(j)).collect();
            steps.push((u, if i == 0 { 0 } else { i as u64 + 1 }));
            start = (i as u64 + 2) * mk + 1;
        }
        RepetitiveSpec { steps }
    }

    /// Witness for exponent e ≥ 2 from the period w_{e-1}: x begins with
    /// e copies of it.
    pub fn witness(&self, e: u32) -> Result<Witness> {
        if e < 2 {
            return Err(Error::InvalidParameter("exponent must be at least 2".into()));
        }
        let m = match self.zones.m.get(e as usize - 2) {
            Some(&m) => m,
            None => {
                return Err(Error::Horizon(format!(
                    "w_{} has length at least {}, beyond the prefix",
                    e - 1,
                    self.zones.beyond.map_or("2^64".to_string(), |b| b.to_string())
                )))
            }
        };
        verify_witness(&self.x, m, e)
    }
}

/// Splices the repetitive structure into `base`: inside zone k,
/// x_i = x_{((i-1) mod m_k) + 1}; elsewhere x agrees with base.
pub fn mult_liouville_normal(spec: &FolnerSpec, base: &BitSeq, n: u64) -> Result<MultLiouville> {
    if base.len() < n {
        return Err(Error::Horizon(format!("base has {} of {n} bits", base.len())));
    }
    let zones = ZoneSchedule::from_spec(spec)?;
    if let Some(b) = zones.beyond {
        if b < n {
            return Err(Error::Horizon(format!(
                "the recipe runs out before the zone beyond {b} is fixed, inside the {n}-bit prefix"
            )));
        }
    }
    let mut words = base.prefix(n).words().to_vec();
    let get = |w: &[u64], i: u64| (w[((i - 1) / 64) as usize] >> ((i - 1) % 64)) & 1;
    for (k, &mk) in zones.m.iter().enumerate() {
        if mk >= n {
            break;
        }
        let end = ((k as u64 + 2).saturating_mul(mk)).min(n);
        for i in mk + 1..=end {
            let src = get(&words, (i - 1) % mk + 1);
            let w = &mut words[((i - 1) / 64) as usize];
            let b = (i - 1) % 64;
            *w = (*w & !(1 << b)) | (src << b);
        }
    }
    let x = BitSeq::from_words(words, n).with_provenance(format!("mult-liouville zones={:?}", zones.m));
    Ok(MultLiouville { x, zones })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZoneDensityRow {
    pub n: u64,
    pub card: u64,
    pub hits: u64,
    /// Indices k with k·m_k ≤ |F_n|^{1/3}.
    pub small: Vec<u64>,
    /// Indices k with m_k < L_n outside the small class.
    pub middle: Vec<u64>,
    /// |F_n|^{-1/3} + Σ_{k middle} 2^{-k}, rounded for display.
    pub bound: f64,
    /// Exact check hits/|F_n| < |F_n|^{-1/3} + Σ_{k middle} 2^{-k}.
    pub holds: bool,
}

/// Zone density along F_n against the bound |F_n|^{-1/3} + Σ_{M_n} 2^{-k}.
pub fn zone_density_check(spec: &FolnerSpec, zones: &ZoneSchedule, n: u64) -> Result<ZoneDensityRow> {
    let l = spec.leading_parameter(n)?;
    if zones.beyond.is_some_and(|b| b < l) {
        return Err(Error::Horizon(format!("zones beyond {} are unknown but L_{n} = {l}", zones.beyond.unwrap())));
    }
    let f = spec.folner_set(n)?;
    let card = f.len() as u64;
    let hits = f.iter().filter(|&d| zones.zone_of(d).is_some()).count() as u64;
    let mut small = Vec::new();
    let mut middle = Vec::new();
    for (i, &mk) in zones.m.iter().enumerate() {
        let k = i as u64 + 1;
        let km = k as u128 * mk as u128;
        if km.checked_pow(3).is_some_and(|c| c <= card as u128) {
            small.push(k);
        } else if mk < l {
            middle.push(k);
        }
    }
    let sum: BigRational = middle
        .iter()
        .map(|&k| BigRational::new(BigInt::one(), BigInt::one() << k))
        .fold(BigRational::zero(), |a, b| a + b);
    let lhs = BigRational::new(BigInt::from(hits), BigInt::from(card)) - &sum;
    let holds = lhs <= BigRational::zero()
        || lhs.pow(3) < BigRational::new(BigInt::one(), BigInt::from(card));
    let bound = (card as f64).powf(-1.0 / 3.0) + middle.iter().map(|&k| 0.5f64.powi(k as i32)).sum::<f64>();
    Ok(ZoneDensityRow { n, card, hits, small, middle, bound, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::folner::NiceSource;

    fn spec() -> FolnerSpec {
        let mut l = vec![2u64, 4, 12, 36, 108, 324];
        for _ in 0..16 {
            l.push(l.last().unwrap() * 5);
        }
        FolnerSpec::NiceBoxes { source: NiceSource::Leading(l) }
    }

    #[test]
    fn m_values() {
        assert_eq!(m_k_eps(1, Ratio::new(1, 2)).unwrap(), Some(4));
        assert_eq!(m_k_eps(2, Ratio::new(1, 4)).unwrap(), Some(81));
        assert_eq!(m_k_eps(3, Ratio::new(1, 8)).unwrap(), Some(5u64.pow(8)));
        assert_eq!(m_k_eps(5, Ratio::new(1, 32)).unwrap(), None);
        assert!(m_k_eps(1, Ratio::new(0, 1)).is_err());
        let z = ZoneSchedule::from_spec(&spec()).unwrap();
        assert_eq!(z.m, vec![4, 324, 324 * 5u64.pow(8), 324 * 5u64.pow(16)]);
        assert_eq!(z.beyond, None);
        assert_eq!(z.zone_of(5), Some(1));
        assert_eq!(z.zone_of(9), None);
        assert_eq!(z.zone_of(972), Some(2));
    }

    #[test]
    fn divisor_window_small() {
        for (k, den) in [(1u64, 2u64), (2, 4)] {
            let base = m_k_eps(k, Ratio::new(1, den)).unwrap().unwrap();
            for a in 1..6 {
                for b in 1..30 {
                    let m = base * a;
                    let f = divisor_window_fraction(m, m * b, k).unwrap();
                    assert!(f <= Ratio::new(1, den));
                }
            }
        }
    }

    #[test]
    fn splice_agrees_off_zones_and_repeats_inside() {
        let base = BitSeq::from_fn(4000, |i| (i * 7919) % 11 < 5);
        let out = mult_liouville_normal(&spec(), &base, 4000).unwrap();
        for i in 1..=4000 {
            match out.zones.zone_of(i) {
                None => assert_eq!(out.x.bit(i), base.bit(i)),
                Some(k) => {
                    let mk = out.zones.m[k - 1];
                    assert_eq!(out.x.bit(i), out.x.bit((i - 1) % mk + 1));
                }
            }
        }
        let rs = out.repetitive_spec();
        assert_eq!(rs.lengths(), vec![4, 324]);
        assert_eq!(super::super::build_repetitive(&rs, 324).unwrap(), out.x.prefix(324));
        assert!(out.witness(2).unwrap().verified);
        assert!(out.witness(3).unwrap().verified);
        assert!(out.witness(4).is_err());
    }

    #[test]
    fn zone_density_rows() {
        let z = ZoneSchedule::from_spec(&spec()).unwrap();
        for n in 1..=22 {
            let row = zone_density_check(&spec(), &z, n).unwrap();
            assert!(row.holds, "{row:?}");
        }
    }
}
