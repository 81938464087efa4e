use crate::error::{Error, Result};

/// A finite prefix x_1 ... x_N of a binary sequence, packed 64 bits per word.
/// Equality compares bits only, not provenance.
#[derive(Debug, Clone)]
pub struct BitSeq {
    words: Vec<u64>,
    len: u64,
    provenance: String,
}

impl PartialEq for BitSeq {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && self.words == other.words
    }
}

impl Eq for BitSeq {}

impl BitSeq {
    pub fn from_fn<F: FnMut(u64) -> bool>(len: u64, mut f: F) -> Self {
        let mut words = vec![0u64; len.div_ceil(64) as usize];
        for i in 1..=len {
            if f(i) {
                let j = i - 1;
                words[(j / 64) as usize] |= 1 << (j % 64);
            }
        }
        BitSeq { words, len, provenance: String::new() }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_fn(bits.len() as u64, |i| bits[(i - 1) as usize])
    }

    /// Parses a string of '0'/'1' characters.
    pub fn from_str01(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Format(format!("unexpected character {c:?}"))),
            })
            .collect::<Result<Vec<bool>>>()?;
        Ok(Self::from_bools(&bits))
    }

    /// Builds from packed words where bit `j` of word `w` is position `64w + j + 1`.
    pub fn from_words(mut words: Vec<u64>, len: u64) -> Self {
        words.resize(len.div_ceil(64) as usize, 0);
        if len % 64 != 0 {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << (len % 64)) - 1;
            }
        }
        BitSeq { words, len, provenance: String::new() }
    }

    pub fn with_provenance(mut self, p: impl Into<String>) -> Self {
        self.provenance = p.into();
        self
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// x_i for 1 <= i <= N.
    pub fn get(&self, i: u64) -> Option<bool> {
        (i >= 1 && i <= self.len).then(|| self.bit(i))
    }

    /// x_i without the range check on `i >= 1` beyond a debug assertion.
    #[inline]
    pub fn bit(&self, i: u64) -> bool {
        debug_assert!(i >= 1 && i <= self.len);
        let j = i - 1;
        (self.words[(j / 64) as usize] >> (j % 64)) & 1 == 1
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn to_string01(&self) -> String {
        (1..=self.len).map(|i| if self.bit(i) { '1' } else { '0' }).collect()
    }

    pub fn prefix(&self, n: u64) -> BitSeq {
        let n = n.min(self.len);
        BitSeq::from_words(self.words[..n.div_ceil(64) as usize].to_vec(), n)
            .with_provenance(self.provenance.clone())
    }

    /// Positions 1..=N where the bit is set.
    pub fn support(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.count_ones() as usize);
        for (w, &word) in self.words.iter().enumerate() {
            let mut v = word;
            while v != 0 {
                let t = v.trailing_zeros() as u64;
                out.push(w as u64 * 64 + t + 1);
                v &= v - 1;
            }
        }
        out
    }

    /// Number of positions where `self` and `other` differ on the common prefix.
    pub fn hamming(&self, other: &BitSeq) -> u64 {
        let n = self.len.min(other.len);
        let full = (n / 64) as usize;
        let mut d: u64 = (0..full).map(|w| (self.words[w] ^ other.words[w]).count_ones() as u64).sum();
        if n % 64 != 0 {
            let mask = (1u64 << (n % 64)) - 1;
            d += ((self.words[full] ^ other.words[full]) & mask).count_ones() as u64;
        }
        d
    }
}

/// y_j = x_{jn}, of length floor(N / n).
pub fn shift_mult(x: &BitSeq, n: u64) -> Result<BitSeq> {
    if n == 0 {
        return Err(Error::InvalidParameter("shift by 0".into()));
    }
    Ok(BitSeq::from_fn(x.len() / n, |j| x.bit(j * n))
        .with_provenance(format!("{} | every {n}th term", x.provenance())))
}
