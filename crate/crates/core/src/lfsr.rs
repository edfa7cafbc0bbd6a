//! Fibonacci-form linear feedback shift registers.
//!
//! The register vector `(e_1, ..., e_n)` is shifted towards `e_1`, which is
//! the output bit, and the new last register is the GF(2) inner product of
//! the state with the low coefficients `(b_0, ..., b_{n-1})` of the
//! characteristic polynomial:
//!
//! ```text
//! T(e_1, ..., e_n) = (e_2, ..., e_n, e_1 b_0 + e_2 b_1 + ... + e_n b_{n-1})
//! ```
//!
//! Registers are packed into `u64` words (`e_i` at bit `i - 1`), so a seed
//! written as the hex value `0x1` is the state `(1, 0, ..., 0)`.
//! [`reference`] holds a bit-per-byte transcription of the same map that the
//! tests hold the packed version to.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::{BitSource, PackedBits};
use crate::galois::BinaryPolynomial;

/// Step budget used by [`LfsrState::measure_period`] callers that have no better bound.
pub const DEFAULT_PERIOD_CAP: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LfsrError {
    #[error("all-zero seed never leaves the zero state")]
    DegenerateSeed,
    #[error("seed has {bits} significant bits but the register has {degree}")]
    SeedTooWide { bits: u32, degree: u32 },
    #[error("expected {expected} registers, got {got}")]
    RegisterCount { expected: usize, got: usize },
    #[error("cannot parse seed {0:?} as hex")]
    BadSeed(String),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LfsrState {
    registers: Vec<u64>,
    taps: Vec<u64>,
    characteristic: BinaryPolynomial,
}

/// Outcome of a bounded period search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PeriodMeasurement {
    Found(u64),
    ExceededCap(u64),
}

impl LfsrState {
    /// State from packed register words (`e_i` at bit `i - 1`). Zero states are allowed here.
    pub fn from_words(characteristic: &BinaryPolynomial, words: &[u64]) -> Result<Self, LfsrError> {
        let n = characteristic.degree();
        let word_count = (n as usize).div_ceil(64);
        let mut registers = vec![0u64; word_count];
        for (i, &w) in words.iter().enumerate() {
            if w == 0 {
                continue;
            }
            let top = i as u32 * 64 + (64 - w.leading_zeros());
            if top > n {
                return Err(LfsrError::SeedTooWide { bits: top, degree: n });
            }
            registers[i] = w;
        }
        let mut taps = characteristic.words().to_vec();
        taps.resize(word_count, 0);
        // drop the monic term b_n
        if !n.is_multiple_of(64) {
            taps[word_count - 1] &= (1u64 << (n % 64)) - 1;
        }
        Ok(Self {
            registers,
            taps,
            characteristic: characteristic.clone(),
        })
    }

    /// State from explicit registers `(e_1, ..., e_n)`.
    pub fn from_registers(characteristic: &BinaryPolynomial, registers: &[bool]) -> Result<Self, LfsrError> {
        let n = characteristic.degree() as usize;
        if registers.len() != n {
            return Err(LfsrError::RegisterCount {
                expected: n,
                got: registers.len(),
            });
        }
        let mut words = vec![0u64; n.div_ceil(64)];
        for (i, &e) in registers.iter().enumerate() {
            words[i / 64] |= (e as u64) << (i % 64);
        }
        Self::from_words(characteristic, &words)
    }

    /// State from a hex seed such as `0x1` (`e_1 = 1`, all other registers 0).
    pub fn from_hex(characteristic: &BinaryPolynomial, seed: &str) -> Result<Self, LfsrError> {
        let digits = seed
            .trim()
            .strip_prefix("0x")
            .or_else(|| seed.trim().strip_prefix("0X"))
            .unwrap_or(seed.trim());
        let digits: String = digits.chars().filter(|&c| c != '_').collect();
        if digits.is_empty() {
            return Err(LfsrError::BadSeed(seed.to_string()));
        }
        let mut words = Vec::new();
        let bytes = digits.as_bytes();
        let mut end = bytes.len();
        while end > 0 {
            let start = end.saturating_sub(16);
            let chunk = std::str::from_utf8(&bytes[start..end]).map_err(|_| LfsrError::BadSeed(seed.to_string()))?;
            words.push(u64::from_str_radix(chunk, 16).map_err(|_| LfsrError::BadSeed(seed.to_string()))?);
            end = start;
        }
        Self::from_words(characteristic, &words)
    }

    /// The conventional seed `(1, 0, ..., 0)`.
    pub fn default_seed(characteristic: &BinaryPolynomial) -> Self {
        Self::from_words(characteristic, &[1]).expect("a single bit always fits")
    }

    pub fn characteristic(&self) -> &BinaryPolynomial {
        &self.characteristic
    }

    pub fn degree(&self) -> u32 {
        self.characteristic.degree()
    }

    pub fn is_zero(&self) -> bool {
        self.registers.iter().all(|&w| w == 0)
    }

    pub fn words(&self) -> &[u64] {
        &self.registers
    }

    pub fn registers(&self) -> Vec<bool> {
        (0..self.degree() as usize)
            .map(|i| self.registers[i / 64] >> (i % 64) & 1 == 1)
            .collect()
    }

    pub fn to_hex(&self) -> String {
        let mut out = String::from("0x");
        let mut started = false;
        for &w in self.registers.iter().rev() {
            if started {
                out.push_str(&format!("{w:016x}"));
            } else if w != 0 {
                out.push_str(&format!("{w:x}"));
                started = true;
            }
        }
        if !started {
            out.push('0');
        }
        out
    }

    /// `e_1`, the bit emitted by this state.
    #[inline]
    pub fn output_bit(&self) -> bool {
        self.registers[0] & 1 == 1
    }

    #[inline]
    fn feedback(&self) -> u64 {
        let mut acc = 0u64;
        for (r, t) in self.registers.iter().zip(&self.taps) {
            acc ^= r & t;
        }
        (acc.count_ones() & 1) as u64
    }

    #[inline]
    fn step_in_place(&mut self) {
        let fb = self.feedback();
        let n = self.degree() as usize;
        let last = self.registers.len() - 1;
        for i in 0..last {
            self.registers[i] = self.registers[i] >> 1 | self.registers[i + 1] << 63;
        }
        self.registers[last] >>= 1;
        self.registers[(n - 1) / 64] |= fb << ((n - 1) % 64);
    }

    /// Successor state under the transition map.
    pub fn step(&self) -> Self {
        let mut next = self.clone();
        next.step_in_place();
        next
    }

    /// The state after `steps` transitions.
    pub fn advanced(&self, steps: u64) -> Self {
        let mut s = self.clone();
        for _ in 0..steps {
            s.step_in_place();
        }
        s
    }

    /// The first `count` output bits starting from this state.
    pub fn run(&self, count: usize) -> Result<PackedBits, LfsrError> {
        if self.is_zero() {
            return Err(LfsrError::DegenerateSeed);
        }
        let mut stream = LfsrStream::new(self.clone())?;
        let mut out = PackedBits::with_capacity(count);
        stream.fill(&mut out, count);
        Ok(out)
    }

    /// Smallest `t >= 1` with `T^t(seed) = seed`, searching at most `cap` steps.
    pub fn measure_period(&self, cap: u64) -> Result<PeriodMeasurement, LfsrError> {
        if self.is_zero() {
            return Err(LfsrError::DegenerateSeed);
        }
        let mut s = self.step();
        let mut t = 1u64;
        while s.registers != self.registers {
            if t >= cap {
                return Ok(PeriodMeasurement::ExceededCap(cap));
            }
            s.step_in_place();
            t += 1;
        }
        Ok(PeriodMeasurement::Found(t))
    }
}

impl std::fmt::Debug for LfsrState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LfsrState")
            .field("characteristic", &self.characteristic.to_string())
            .field("registers", &self.to_hex())
            .finish()
    }
}

/// Mutable bit stream over an LFSR; `position` counts emitted bits.
#[derive(Clone, Debug)]
pub struct LfsrStream {
    state: LfsrState,
    position: u64,
}

impl LfsrStream {
    pub fn new(seed: LfsrState) -> Result<Self, LfsrError> {
        if seed.is_zero() {
            return Err(LfsrError::DegenerateSeed);
        }
        Ok(Self {
            state: seed,
            position: 0,
        })
    }

    pub fn state(&self) -> &LfsrState {
        &self.state
    }

    pub fn position(&self) -> u64 {
        self.position
    }

    #[inline]
    pub fn next(&mut self) -> bool {
        let bit = self.state.output_bit();
        self.state.step_in_place();
        self.position += 1;
        bit
    }

    /// Next `count <= 64` output bits, first bit in the lowest position.
    #[inline]
    pub fn next_word(&mut self, count: u32) -> u64 {
        let mut w = 0u64;
        for i in 0..count {
            w |= (self.next() as u64) << i;
        }
        w
    }
}

impl BitSource for LfsrStream {
    fn next_bit(&mut self) -> Option<bool> {
        Some(self.next())
    }

    fn fill(&mut self, out: &mut PackedBits, count: usize) -> usize {
        let mut left = count;
        while left > 0 {
            let c = left.min(64) as u32;
            let w = self.next_word(c);
            out.push_word(w, c);
            left -= c as usize;
        }
        count
    }

    fn skip(&mut self, count: u64) -> u64 {
        let mut left = count;
        while left > 0 {
            let c = left.min(64) as u32;
            self.next_word(c);
            left -= c as u64;
        }
        count
    }
}

/// Literal bit-per-byte transcription of the transition and output maps.
pub mod reference {
    /// `(e_1, ..., e_n) -> (e_2, ..., e_n, sum e_i b_{i-1})`, with `b = (b_0, ..., b_n)`.
    pub fn step(e: &[u8], b: &[u8]) -> Vec<u8> {
        let n = e.len();
        assert_eq!(b.len(), n + 1, "coefficient vector must have n + 1 entries");
        let mut fb = 0u8;
        for i in 1..=n {
            fb ^= e[i - 1] & b[i - 1];
        }
        let mut next = e[1..].to_vec();
        next.push(fb);
        next
    }

    /// `out(T^j(e_0))` for `j = 0..count`.
    pub fn run(e0: &[u8], b: &[u8], count: usize) -> Vec<u8> {
        let mut e = e0.to_vec();
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            out.push(e[0]);
            e = step(&e, b);
        }
        out
    }
}
