//! Streaming bit sources for sequences too long to materialise.

use crate::bits::{BitSource, PackedBits};
use crate::galois::{validate_characteristic, BinaryPolynomial};
use crate::lfsr::{LfsrState, LfsrStream};

use super::{BipolarSequence, Family, Result, SequenceError};

/// Two LFSRs of equal degree combined by XOR.
#[derive(Clone, Debug)]
pub struct GoldStream {
    first: LfsrStream,
    second: LfsrStream,
}

impl GoldStream {
    pub fn new(
        p1: &BinaryPolynomial,
        p2: &BinaryPolynomial,
        seed1: &LfsrState,
        seed2: &LfsrState,
    ) -> Result<Self> {
        if p1.degree() != p2.degree() {
            return Err(SequenceError::DegreeMismatch(p1.degree(), p2.degree()));
        }
        if seed1.characteristic() != p1 {
            return Err(SequenceError::DegreeMismatch(p1.degree(), seed1.degree()));
        }
        if seed2.characteristic() != p2 {
            return Err(SequenceError::DegreeMismatch(p2.degree(), seed2.degree()));
        }
        validate_characteristic(p1)?;
        validate_characteristic(p2)?;
        if p1 == p2 && seed1 == seed2 {
            return Err(SequenceError::DegenerateGold);
        }
        Ok(Self {
            first: LfsrStream::new(seed1.clone())?,
            second: LfsrStream::new(seed2.clone())?,
        })
    }

    #[inline]
    pub fn next(&mut self) -> bool {
        self.first.next() ^ self.second.next()
    }
}

impl BitSource for GoldStream {
    fn next_bit(&mut self) -> Option<bool> {
        Some(self.next())
    }

    fn fill(&mut self, out: &mut PackedBits, count: usize) -> usize {
        let mut left = count;
        while left > 0 {
            let c = left.min(64) as u32;
            let w = self.first.next_word(c) ^ self.second.next_word(c);
            out.push_word(w, c);
            left -= c as usize;
        }
        count
    }

    fn skip(&mut self, count: u64) -> u64 {
        self.first.skip(count);
        self.second.skip(count)
    }
}

/// Either generator family behind one concrete type.
#[derive(Clone, Debug)]
pub enum PnStream {
    MSequence(LfsrStream),
    Gold(GoldStream),
}

impl PnStream {
    pub fn m_sequence(p: &BinaryPolynomial, seed: &LfsrState) -> Result<Self> {
        validate_characteristic(p)?;
        if seed.characteristic() != p {
            return Err(SequenceError::DegreeMismatch(p.degree(), seed.degree()));
        }
        Ok(Self::MSequence(LfsrStream::new(seed.clone())?))
    }

    pub fn gold(
        p1: &BinaryPolynomial,
        p2: &BinaryPolynomial,
        seed1: &LfsrState,
        seed2: &LfsrState,
    ) -> Result<Self> {
        Ok(Self::Gold(GoldStream::new(p1, p2, seed1, seed2)?))
    }

    pub fn family(&self) -> Family {
        match self {
            PnStream::MSequence(_) => Family::MSequence,
            PnStream::Gold(_) => Family::Gold,
        }
    }
}

impl BitSource for PnStream {
    fn next_bit(&mut self) -> Option<bool> {
        match self {
            PnStream::MSequence(s) => s.next_bit(),
            PnStream::Gold(s) => s.next_bit(),
        }
    }

    fn fill(&mut self, out: &mut PackedBits, count: usize) -> usize {
        match self {
            PnStream::MSequence(s) => s.fill(out, count),
            PnStream::Gold(s) => s.fill(out, count),
        }
    }

    fn skip(&mut self, count: u64) -> u64 {
        match self {
            PnStream::MSequence(s) => s.skip(count),
            PnStream::Gold(s) => s.skip(count),
        }
    }
}

/// Reads a materialised sequence from `start`, wrapping at the period when
/// the full period is stored and stopping at the stored end otherwise.
#[derive(Clone, Debug)]
pub struct SequenceCursor<'a> {
    seq: &'a BipolarSequence,
    position: u64,
}

impl<'a> SequenceCursor<'a> {
    pub fn new(seq: &'a BipolarSequence, start: u64) -> Self {
        Self {
            seq,
            position: start,
        }
    }

    pub fn position(&self) -> u64 {
        self.position
    }
}

impl BitSource for SequenceCursor<'_> {
    fn next_bit(&mut self) -> Option<bool> {
        let bit = self.seq.bit(self.position)?;
        self.position += 1;
        Some(bit)
    }

    fn skip(&mut self, count: u64) -> u64 {
        if self.seq.is_full_period() {
            self.position += count;
            count
        } else {
            let left = (self.seq.bits().len() as u64).saturating_sub(self.position);
            let n = left.min(count);
            self.position += n;
            n
        }
    }
}
