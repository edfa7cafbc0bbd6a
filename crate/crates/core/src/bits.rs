//! Growable bit vector packed into `u64` words, least significant bit first,
//! and the [`BitSource`] trait shared by every sequence generator.

/// Producer of a binary stream. A `1` bit is the symbol `-1`, a `0` bit is `+1`.
pub trait BitSource {
    /// Next bit, or `None` once a finite source is exhausted.
    fn next_bit(&mut self) -> Option<bool>;

    /// Appends up to `count` bits to `out` and returns how many were appended.
    fn fill(&mut self, out: &mut PackedBits, count: usize) -> usize {
        for i in 0..count {
            match self.next_bit() {
                Some(b) => out.push(b),
                None => return i,
            }
        }
        count
    }

    /// Discards up to `count` bits and returns how many were skipped.
    fn skip(&mut self, count: u64) -> u64 {
        for i in 0..count {
            if self.next_bit().is_none() {
                return i;
            }
        }
        count
    }
}

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct PackedBits {
    words: Vec<u64>,
    len: usize,
}

impl PackedBits {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        Self {
            words: Vec::with_capacity(bits.div_ceil(64)),
            len: 0,
        }
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn push(&mut self, bit: bool) {
        let (w, b) = (self.len / 64, self.len % 64);
        if b == 0 {
            self.words.push(0);
        }
        self.words[w] |= (bit as u64) << b;
        self.len += 1;
    }

    /// Appends the low `count` bits of `word`, bit 0 first.
    pub fn push_word(&mut self, word: u64, count: u32) {
        debug_assert!(count <= 64);
        if count == 0 {
            return;
        }
        let word = if count == 64 { word } else { word & ((1 << count) - 1) };
        let b = (self.len % 64) as u32;
        if b == 0 {
            self.words.push(word);
        } else {
            let last = self.words.len() - 1;
            self.words[last] |= word << b;
            if b + count > 64 {
                self.words.push(word >> (64 - b));
            }
        }
        self.len += count as usize;
    }

    #[inline]
    pub fn get(&self, i: usize) -> Option<bool> {
        (i < self.len).then(|| self.words[i / 64] >> (i % 64) & 1 == 1)
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % 64);
        if bit {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.words[i / 64] >> (i % 64) & 1 == 1)
    }

    /// Number of set bits in `start..end`.
    pub fn count_ones(&self, start: usize, end: usize) -> usize {
        assert!(start <= end && end <= self.len, "range {start}..{end} out of {}", self.len);
        if start == end {
            return 0;
        }
        let (first, last) = (start / 64, (end - 1) / 64);
        let lo_mask = !0u64 << (start % 64);
        let hi_mask = !0u64 >> (63 - (end - 1) % 64);
        if first == last {
            return (self.words[first] & lo_mask & hi_mask).count_ones() as usize;
        }
        let mut total = (self.words[first] & lo_mask).count_ones() as usize;
        total += self.words[first + 1..last]
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum::<usize>();
        total + (self.words[last] & hi_mask).count_ones() as usize
    }

    /// Reads `count <= 64` bits starting at `start`, first bit in the lowest position.
    pub fn read_word(&self, start: usize, count: u32) -> u64 {
        assert!(count <= 64 && start + count as usize <= self.len);
        if count == 0 {
            return 0;
        }
        let (w, b) = (start / 64, (start % 64) as u32);
        let mut v = self.words[w] >> b;
        if b > 0 && b + count > 64 {
            v |= self.words[w + 1] << (64 - b);
        }
        if count == 64 {
            v
        } else {
            v & ((1 << count) - 1)
        }
    }

    /// Little-endian bytes, bit `8k + j` stored at bit `j` of byte `k`.
    pub fn to_le_bytes(&self) -> Vec<u8> {
        let mut out: Vec<u8> = self.words.iter().flat_map(|w| w.to_le_bytes()).collect();
        out.truncate(self.len.div_ceil(8));
        out
    }

    /// Inverse of [`to_le_bytes`](Self::to_le_bytes); bits past `len` are ignored.
    pub fn from_le_bytes(bytes: &[u8], len: usize) -> Option<Self> {
        if bytes.len() < len.div_ceil(8) {
            return None;
        }
        let mut words = vec![0u64; len.div_ceil(64)];
        for (i, &byte) in bytes.iter().take(len.div_ceil(8)).enumerate() {
            words[i / 8] |= (byte as u64) << (8 * (i % 8));
        }
        if !len.is_multiple_of(64) {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << (len % 64)) - 1;
            }
        }
        Some(Self { words, len })
    }
}

impl FromIterator<bool> for PackedBits {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let mut out = PackedBits::new();
        for b in iter {
            out.push(b);
        }
        out
    }
}

impl std::fmt::Debug for PackedBits {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let shown: String = self.iter().take(128).map(|b| if b { '1' } else { '0' }).collect();
        let ellipsis = if self.len > 128 { "..." } else { "" };
        write!(f, "PackedBits[{}]({shown}{ellipsis})", self.len)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn count_ones_matches_iteration(bits in proptest::collection::vec(any::<bool>(), 0..300), a in 0usize..300, b in 0usize..300) {
            let packed: PackedBits = bits.iter().copied().collect();
            let (lo, hi) = (a.min(b).min(bits.len()), a.max(b).min(bits.len()));
            let expected = bits[lo..hi].iter().filter(|&&x| x).count();
            prop_assert_eq!(packed.count_ones(lo, hi), expected);
        }

        #[test]
        fn push_word_and_read_word_agree(chunks in proptest::collection::vec((any::<u64>(), 0u32..=64), 1..12)) {
            let mut packed = PackedBits::new();
            let mut plain = Vec::new();
            for &(w, c) in &chunks {
                packed.push_word(w, c);
                plain.extend((0..c).map(|i| w >> i & 1 == 1));
            }
            prop_assert_eq!(packed.len(), plain.len());
            prop_assert!(packed.iter().eq(plain.iter().copied()));
            let bytes = packed.to_le_bytes();
            prop_assert_eq!(PackedBits::from_le_bytes(&bytes, plain.len()).unwrap(), packed.clone());
            for start in (0..plain.len()).step_by(7) {
                let count = 64.min(plain.len() - start) as u32;
                let w = packed.read_word(start, count);
                for i in 0..count as usize {
                    prop_assert_eq!(w >> i & 1 == 1, plain[start + i]);
                }
            }
        }
    }

    #[test]
    fn byte_order_is_lsb_first() {
        let packed: PackedBits = [true, false, false, false, false, false, false, false, false, true]
            .into_iter()
            .collect();
        assert_eq!(packed.to_le_bytes(), vec![0x01, 0x02]);
    }
}
