//! Repetitive binary sequences, exact Liouville witnesses, and the two
//! constructions of normal Liouville numbers (along additive Følner
//! sequences and along nice box sequences).

mod balanced;
mod refine;
mod zones;

pub use balanced::{additive_liouville_normal, subword_cover_check, AdditiveLiouville, BalancedLevel, SubwordCoverReport};
pub use refine::{components, interval_folner_refine, t_threshold, RefinedSpec};
pub use zones::{
    m_k_eps, divisor_window_fraction, mult_liouville_normal, zone_density_check, MultLiouville, ZoneDensityRow, ZoneSchedule,
};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::seq::BitSeq;

/// w_1 = u_1 and w_k = w_{k-1}^{rep_k} u_k. Entry k-1 holds (u_k, rep_k);
/// the repetition count of the first entry is ignored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RepetitiveSpec {
    pub steps: Vec<(Vec<bool>, u64)>,
}

impl RepetitiveSpec {
    pub fn new(steps: Vec<(Vec<bool>, u64)>) -> Result<Self> {
        let spec = RepetitiveSpec { steps };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, (u, rep)) in self.steps.iter().enumerate() {
            let k = i as u64 + 1;
            if u.is_empty() {
                return Err(Error::InvalidParameter(format!("u_{k} is empty")));
            }
            if k > 1 && *rep < k - 1 {
                return Err(Error::InvalidParameter(format!("rep_{k} = {rep} is below {}", k - 1)));
            }
        }
        Ok(())
    }

    /// |w_1|, |w_2|, ... (saturating).
    pub fn lengths(&self) -> Vec<u64> {
        let mut out: Vec<u64> = Vec::with_capacity(self.steps.len());
        for (i, (u, rep)) in self.steps.iter().enumerate() {
            let prev = if i == 0 { 0 } else { out[i - 1].saturating_mul(*rep) };
            out.push(prev.saturating_add(u.len() as u64));
        }
        out
    }
}

/// The first n bits of the limit of the words w_k.
pub fn build_repetitive(spec: &RepetitiveSpec, n: u64) -> Result<BitSeq> {
    spec.validate()?;
    let mut w: Vec<bool> = Vec::new();
    for (i, (u, rep)) in spec.steps.iter().enumerate() {
        if w.len() as u64 >= n {
            break;
        }
        let prev = w.clone();
        if i > 0 {
            for _ in 1..*rep {
                if w.len() as u64 >= n {
                    break;
                }
                w.extend_from_slice(&prev);
            }
        }
        w.extend_from_slice(u);
    }
    if (w.len() as u64) < n {
        return Err(Error::Horizon(format!("the words reach only {} of {n} bits", w.len())));
    }
    w.truncate(n as usize);
    Ok(BitSeq::from_bools(&w))
}

fn primitive_root(u: &[bool]) -> &[bool] {
    let n = u.len();
    (1..=n)
        .find(|&d| n % d == 0 && (d..n).all(|i| u[i] == u[i - d]))
        .map(|d| &u[..d])
        .unwrap_or(u)
}

/// The common primitive root when every u_k is a power of one word; such a
/// spec produces a periodic sequence, hence a rational number.
pub fn periodic_root(spec: &RepetitiveSpec) -> Option<Vec<bool>> {
    let first = primitive_root(&spec.steps.first()?.0).to_vec();
    spec.steps
        .iter()
        .all(|(u, _)| primitive_root(u) == first.as_slice())
        .then_some(first)
}

/// The integer whose binary numeral is x_1 ... x_n.
pub fn prefix_integer(x: &BitSeq, n: u64) -> BigUint {
    let p = x.prefix(n);
    let mut bytes = Vec::with_capacity(p.words().len() * 8);
    for &w in p.words() {
        bytes.extend_from_slice(&w.reverse_bits().to_be_bytes());
    }
    BigUint::from_bytes_be(&bytes) >> (p.words().len() as u64 * 64 - n)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub exponent: u32,
    /// Length m of the period word; q = 2^m - 1.
    pub period: u64,
    /// Bits of x used to bracket it.
    pub prefix_len: u64,
    #[serde(serialize_with = "ser_big")]
    pub p: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub q: BigUint,
    pub verified: bool,
}

fn ser_big<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.bits() <= 128 {
        s.serialize_str(&v.to_string())
    } else {
        s.serialize_str(&format!("<{} bits>", v.bits()))
    }
}

/// Checks |x - p/q| < q^{-e} exactly, where p/q is the value of the
/// periodic sequence (x_1 ... x_m)^∞ (q = 2^m - 1, not reduced; reducing
/// only makes the inequality easier). x is bracketed between its prefix of
/// length n = min(|x|, (e+1)m) followed by all zeros or all ones.
pub fn verify_witness(x: &BitSeq, m: u64, e: u32) -> Result<Witness> {
    if m == 0 || e == 0 {
        return Err(Error::InvalidParameter("period and exponent must be positive".into()));
    }
    let need = m
        .checked_mul(e as u64)
        .ok_or_else(|| Error::Overflow("e·m overflows".into()))?;
    if x.len() < need {
        return Err(Error::Horizon(format!("{} bits cannot bracket x to {need} bits", x.len())));
    }
    let n = x.len().min(m.saturating_mul(e as u64 + 1));
    let p = prefix_integer(x, m);
    let q = (BigUint::one() << m) - 1u32;
    let big_p = prefix_integer(x, n);
    // x ∈ [P, P+1] / 2^n; compare q·x with p at both ends, scaled by 2^n.
    let a = (&big_p << m) - &big_p;
    let b = &p << n;
    let lo = if a >= b { &a - &b } else { &b - &a };
    let a1 = &a + &q;
    let hi = if a1 >= b { &a1 - &b } else { &b - &a1 };
    let num = lo.max(hi);
    // |x - p/q| ≤ num / (q 2^n) < q^{-e}  ⇔  num · q^{e-1} < 2^n
    let verified = if num.is_zero() || num.bits() + (e as u64 - 1) * m <= n {
        true
    } else {
        num * q.pow(e - 1) < BigUint::one() << n
    };
    Ok(Witness { exponent: e, period: m, prefix_len: n, p, q, verified })
}

/// Witness for exponent k from the period w_k (x begins with at least k
/// copies of w_k because rep_{k+1} ≥ k).
pub fn liouville_witness(spec: &RepetitiveSpec, k: u32) -> Result<Witness> {
    let lens = spec.lengths();
    let m = *lens
        .get(k as usize - 1)
        .ok_or_else(|| Error::Horizon(format!("w_{k} is not specified")))?;
    let avail = *lens.last().unwrap();
    let n = avail.min(m.saturating_mul(k as u64 + 1));
    let x = build_repetitive(spec, n)?;
    verify_witness(&x, m, k)
}
