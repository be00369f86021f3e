use std::fmt;

use super::LinalgError;

pub(crate) const WORD_BITS: usize = 64;

#[inline]
pub(crate) fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// A packed vector over GF(2). Bit `j` lives in bit `j % 64` of word `j / 64`;
/// bits past `len` in the last word are always zero.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for b in bits {
            if len % WORD_BITS == 0 {
                words.push(0);
            }
            if b {
                words[len / WORD_BITS] |= 1 << (len % WORD_BITS);
            }
            len += 1;
        }
        BitVec { len, words }
    }

    pub fn random<R: rand::Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        Self::from_bools((0..len).map(|_| rng.gen::<bool>()))
    }

    /// Low `len` bits of `value`, bit 0 first.
    pub fn from_u64(value: u64, len: usize) -> Self {
        Self::from_bools((0..len).map(|i| i < 64 && (value >> i) & 1 == 1))
    }

    /// Parses a string of `0`/`1` characters; the leftmost character is index 0.
    pub fn parse_bits(s: &str) -> Result<Self, LinalgError> {
        let mut bits = Vec::with_capacity(s.len());
        for (pos, ch) in s.chars().enumerate() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => return Err(LinalgError::InvalidBitChar { ch: other, pos }),
            }
        }
        Ok(Self::from_bools(bits))
    }

    /// Renders as `0`/`1` characters, index 0 leftmost.
    pub fn to_bit_string(&self) -> String {
        self.iter().map(|b| if b { '1' } else { '0' }).collect()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        self.words[i / WORD_BITS] ^= 1 << (i % WORD_BITS);
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Indices of set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD_BITS + b)
            })
        })
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &BitVec) -> Result<(), LinalgError> {
        if self.len != other.len {
            return Err(LinalgError::LengthMismatch {
                expected: self.len,
                found: other.len,
            });
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        Ok(())
    }

    pub fn xor(&self, other: &BitVec) -> Result<BitVec, LinalgError> {
        let mut out = self.clone();
        out.xor_assign(other)?;
        Ok(out)
    }

    /// GF(2) inner product.
    pub fn dot(&self, other: &BitVec) -> Result<bool, LinalgError> {
        if self.len != other.len {
            return Err(LinalgError::LengthMismatch {
                expected: self.len,
                found: other.len,
            });
        }
        let parity = self
            .words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones());
        Ok(parity & 1 == 1)
    }

    /// Bits `[start, start + len)` as a new vector.
    pub fn slice(&self, start: usize, len: usize) -> BitVec {
        assert!(start + len <= self.len, "slice out of range");
        let mut out = BitVec::zeros(len);
        for i in 0..len {
            if self.get(start + i) {
                out.set(i, true);
            }
        }
        out
    }

    /// Overwrites bits `[start, start + src.len())` with `src`.
    pub fn splice(&mut self, start: usize, src: &BitVec) {
        assert!(start + src.len <= self.len, "splice out of range");
        for i in 0..src.len {
            self.set(start + i, src.get(i));
        }
    }

    /// Concatenation `self || other`.
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len + other.len);
        out.splice(0, self);
        out.splice(self.len, other);
        out
    }

    /// Removes bits `[start, start + len)`, shifting the tail down.
    pub fn remove_range(&self, start: usize, len: usize) -> BitVec {
        assert!(start + len <= self.len, "range out of bounds");
        BitVec::from_bools(
            self.iter()
                .enumerate()
                .filter(|&(i, _)| i < start || i >= start + len)
                .map(|(_, b)| b),
        )
    }

    /// Low 64 bits as an integer, bit 0 in the least significant position.
    pub fn to_u64(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({})", self.to_bit_string())
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bit_string_round_trip() {
        let v = BitVec::parse_bits("1100101").unwrap();
        assert!(v.get(0) && v.get(1) && !v.get(2) && v.get(4) && v.get(6));
        assert_eq!(v.to_bit_string(), "1100101");
        assert_eq!(v.weight(), 4);
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![0, 1, 4, 6]);
    }

    #[test]
    fn rejects_non_binary_chars() {
        assert_eq!(
            BitVec::parse_bits("10x1").unwrap_err(),
            LinalgError::InvalidBitChar { ch: 'x', pos: 2 }
        );
    }

    #[test]
    fn little_endian_packing() {
        let mut v = BitVec::zeros(130);
        v.set(0, true);
        v.set(65, true);
        v.set(129, true);
        assert_eq!(v.words(), &[1, 2, 2]);
        assert_eq!(BitVec::from_u64(0b1011, 4).to_bit_string(), "1101");
    }

    #[test]
    fn xor_length_mismatch() {
        let mut a = BitVec::zeros(3);
        assert!(a.xor_assign(&BitVec::zeros(4)).is_err());
    }

    #[test]
    fn slice_splice_concat() {
        let a = BitVec::parse_bits("101").unwrap();
        let b = BitVec::parse_bits("0011").unwrap();
        let c = a.concat(&b);
        assert_eq!(c.to_bit_string(), "1010011");
        assert_eq!(c.slice(3, 4), b);
        assert_eq!(c.remove_range(0, 3), b);
        assert_eq!(c.remove_range(3, 4), a);
    }
}
