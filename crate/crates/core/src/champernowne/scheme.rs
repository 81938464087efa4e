use crate::error::{Error, Result};
use crate::folner::{AnchoredBox, DirectionSchedule, FolnerSpec};

/// Highest order whose packages are addressed positionally: a package of
/// order k has 2^{2^k} slots, so the slot index fits 64 bits up to k = 6.
pub const MAX_ORDER: u32 = 6;

/// Index of the Følner set carrying packages of order k: r(k) = 2^k + k.
pub fn order_index(k: u32) -> u64 {
    (1u64 << k) + k as u64
}

/// A doubling Følner sequence F_0 = {0}, F_n = F_{n-1} ⊔ (v_n + F_{n-1}),
/// with every side a power of two. Sides are kept as base-2 logarithms so
/// boxes far beyond 63-bit leading parameters stay addressable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoublingScheme {
    schedule: DirectionSchedule,
    /// log_sides[n][i] = log2 of the side of F_n in direction i + 1.
    log_sides: Vec<Vec<u32>>,
}

impl DoublingScheme {
    pub fn new(schedule: DirectionSchedule) -> Result<Self> {
        let top = order_index(MAX_ORDER + 1);
        let log_sides = (0..=top)
            .map(|n| schedule.counts(n))
            .collect::<Result<Vec<_>>>()?;
        Ok(DoublingScheme { schedule, log_sides })
    }

    pub fn staircase() -> Self {
        Self::new(DirectionSchedule::Staircase).expect("staircase is infinite")
    }

    pub fn toeplitz() -> Self {
        Self::new(DirectionSchedule::Toeplitz).expect("toeplitz is infinite")
    }

    pub fn schedule(&self) -> &DirectionSchedule {
        &self.schedule
    }

    pub fn spec(&self) -> FolnerSpec {
        FolnerSpec::Doubling { directions: self.schedule.clone() }
    }

    pub fn max_index(&self) -> u64 {
        self.log_sides.len() as u64 - 1
    }

    pub fn log_sides(&self, n: u64) -> &[u32] {
        &self.log_sides[n as usize]
    }

    pub fn box_at(&self, n: u64) -> Result<AnchoredBox> {
        let sizes = self
            .log_sides
            .get(n as usize)
            .ok_or_else(|| Error::Horizon(format!("F_{n} beyond the scheme's table")))?
            .iter()
            .map(|&c| {
                if c >= 32 {
                    Err(Error::Overflow(format!("side 2^{c} of F_{n}")))
                } else {
                    Ok((1u32 << c) - 1)
                }
            })
            .collect::<Result<Vec<u32>>>()?;
        Ok(AnchoredBox::new(sizes))
    }

    /// Whether g lies in F_n.
    pub fn contains(&self, n: u64, g: &[u32]) -> bool {
        let c = self.log_sides(n);
        g.iter().enumerate().all(|(i, &e)| match c.get(i) {
            Some(&ci) => ci >= 32 || e < (1u32 << ci),
            None => e == 0,
        })
    }

    /// g reduced modulo the sides of F_n (its offset inside its F_n-tile).
    pub fn offset(&self, n: u64, g: &[u32]) -> Vec<u32> {
        let c = self.log_sides(n);
        g.iter()
            .enumerate()
            .map(|(i, &e)| match c.get(i) {
                Some(&ci) if ci < 32 => e & ((1u32 << ci) - 1),
                Some(_) => e,
                None => 0,
            })
            .collect()
    }

    /// Corner of the F_n-tile containing g.
    pub fn corner(&self, n: u64, g: &[u32]) -> Vec<u32> {
        let c = self.log_sides(n);
        g.iter()
            .enumerate()
            .map(|(i, &e)| match c.get(i) {
                Some(&ci) if ci < 32 => e & !((1u32 << ci) - 1),
                Some(_) => 0,
                None => e,
            })
            .collect()
    }

    /// Number of directions of F_n.
    pub fn dim(&self, n: u64) -> usize {
        self.log_sides(n).len()
    }
}
