//! Bipolar pseudonoise sequences: m-sequences and Gold codes.
//!
//! A bit `b` maps to the symbol `(-1)^b`, so `0 -> +1` and `1 -> -1`.
//! Sequences whose period fits in memory are materialised once and served
//! periodically; long periods (degree 89) are consumed through the
//! [`BitSource`] streams in [`stream`].

pub mod io;
pub mod stream;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::{BitSource, PackedBits};
use crate::galois::{
    self, field_pow, is_mersenne_exponent, minimal_polynomial, poly_mul_mod, trace,
    BinaryPolynomial, FieldElement, GaloisError,
};
use crate::lfsr::{LfsrError, LfsrState, LfsrStream};

pub use stream::{GoldStream, PnStream, SequenceCursor};

/// Largest degree accepted by [`gold_code_trace_oracle`].
pub const MAX_ORACLE_DEGREE: u32 = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SequenceError {
    #[error(transparent)]
    Galois(#[from] GaloisError),
    #[error(transparent)]
    Lfsr(#[from] LfsrError),
    #[error("constituent degrees differ: {0} vs {1}")]
    DegreeMismatch(u32, u32),
    #[error("identical polynomials and seeds cancel to a constant sequence")]
    DegenerateGold,
    #[error("gcd(r = {r}, n = {n}) must be 1")]
    InvalidDecimation { r: u32, n: u32 },
    #[error("trace oracle supports degree <= {limit}, got {degree}")]
    OracleUnsupported { degree: u32, limit: u32 },
    #[error("cyclic shift needs a materialised full period ({stored} of {period} symbols stored)")]
    PartialPeriod { stored: u64, period: u128 },
    #[error("requested length must be positive")]
    EmptyLength,
}

pub type Result<T> = std::result::Result<T, SequenceError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    MSequence,
    Gold,
    External,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::MSequence => "m-sequence",
            Family::Gold => "gold",
            Family::External => "external",
        })
    }
}

/// Where a sequence came from.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub polynomials: Vec<BinaryPolynomial>,
    /// Initial LFSR states as hex (`e_1` in bit 0).
    pub seeds: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    /// Total cyclic shift applied after generation.
    #[serde(default)]
    pub shift: u64,
}

/// Periodic `±1` sequence, stored bit-packed (`1` bit = `-1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipolarSequence {
    bits: PackedBits,
    period: u128,
    length: u64,
    family: Family,
    provenance: Provenance,
}

/// `2^n - 1`, saturating at `u128::MAX`.
pub fn mls_period(n: u32) -> u128 {
    if n >= 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

impl BipolarSequence {
    /// Wraps already-generated bits. At most one period is kept; `length` may exceed it.
    pub fn from_bits(bits: PackedBits, period: u128, length: u64, family: Family, provenance: Provenance) -> Self {
        let stored = (length as u128).min(period) as usize;
        assert!(bits.len() >= stored, "need {stored} bits, got {}", bits.len());
        let bits = if bits.len() == stored {
            bits
        } else {
            bits.iter().take(stored).collect()
        };
        Self {
            bits,
            period,
            length,
            family,
            provenance,
        }
    }

    /// One full period of externally supplied symbols, each `+1` or `-1`.
    pub fn from_symbols(symbols: &[i8]) -> Option<Self> {
        if symbols.is_empty() || symbols.iter().any(|&s| s != 1 && s != -1) {
            return None;
        }
        let bits: PackedBits = symbols.iter().map(|&s| s == -1).collect();
        let n = symbols.len() as u64;
        Some(Self::from_bits(bits, n as u128, n, Family::External, Provenance::default()))
    }

    pub fn period(&self) -> u128 {
        self.period
    }

    /// Logical length; periodic extension serves indices past the stored period.
    pub fn len(&self) -> u64 {
        self.length
    }

    pub fn is_empty(&self) -> bool {
        self.length == 0
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn bits(&self) -> &PackedBits {
        &self.bits
    }

    pub fn is_full_period(&self) -> bool {
        self.bits.len() as u128 == self.period
    }

    /// Raw bit at index `i` (0-based), honouring periodicity for full-period sequences.
    #[inline]
    pub fn bit(&self, i: u64) -> Option<bool> {
        if self.is_full_period() {
            let n = self.bits.len() as u64;
            self.bits.get((i % n) as usize)
        } else {
            self.bits.get(usize::try_from(i).ok()?)
        }
    }

    /// Symbol `s(i)` in `{-1, +1}`.
    #[inline]
    pub fn value(&self, i: u64) -> Option<i8> {
        self.bit(i).map(|b| if b { -1 } else { 1 })
    }

    /// Symbol at a signed index; negative indices wrap for full-period sequences.
    pub fn value_signed(&self, i: i64) -> Option<i8> {
        if i >= 0 {
            self.value(i as u64)
        } else if self.is_full_period() {
            let n = self.bits.len() as i64;
            self.value(i.rem_euclid(n) as u64)
        } else {
            None
        }
    }

    /// The stored symbols (one period, or the whole prefix if shorter).
    pub fn symbols(&self) -> Vec<i8> {
        self.bits.iter().map(|b| if b { -1 } else { 1 }).collect()
    }

    /// Sum of the stored symbols.
    pub fn stored_sum(&self) -> i64 {
        let ones = self.bits.count_ones(0, self.bits.len()) as i64;
        self.bits.len() as i64 - 2 * ones
    }

    /// `t(i) = s(i + d)`; needs the full period in memory.
    pub fn cyclic_shift(&self, d: i64) -> Result<Self> {
        if !self.is_full_period() {
            return Err(SequenceError::PartialPeriod {
                stored: self.bits.len() as u64,
                period: self.period,
            });
        }
        let n = self.bits.len() as i64;
        let offset = d.rem_euclid(n) as usize;
        let bits: PackedBits = (0..self.bits.len())
            .map(|i| self.bits.get((i + offset) % n as usize).expect("in range"))
            .collect();
        let mut provenance = self.provenance.clone();
        provenance.shift = ((provenance.shift as u128 + offset as u128) % self.period) as u64;
        Ok(Self {
            bits,
            period: self.period,
            length: self.length,
            family: self.family,
            provenance,
        })
    }

    /// Elementwise product with another sequence of the same stored length.
    pub fn product(&self, other: &Self) -> Option<Self> {
        if self.bits.len() != other.bits.len() || self.period != other.period {
            return None;
        }
        let bits: PackedBits = self.bits.iter().zip(other.bits.iter()).map(|(a, b)| a ^ b).collect();
        Some(Self {
            bits,
            period: self.period,
            length: self.length,
            family: Family::External,
            provenance: Provenance::default(),
        })
    }

    /// Cursor streaming this sequence's bits from index `start`.
    pub fn cursor(&self, start: u64) -> SequenceCursor<'_> {
        SequenceCursor::new(self, start)
    }
}

fn check_length(length: u64) -> Result<()> {
    if length == 0 {
        Err(SequenceError::EmptyLength)
    } else {
        Ok(())
    }
}

fn stored_len(length: u64, period: u128) -> usize {
    (length as u128).min(period) as usize
}

/// m-sequence of a primitive characteristic polynomial, mapped to `±1`.
pub fn m_sequence(p: &BinaryPolynomial, seed: &LfsrState, length: u64) -> Result<BipolarSequence> {
    check_length(length)?;
    galois::validate_characteristic(p)?;
    if seed.characteristic() != p {
        return Err(SequenceError::DegreeMismatch(p.degree(), seed.degree()));
    }
    let period = mls_period(p.degree());
    let mut stream = LfsrStream::new(seed.clone())?;
    let mut bits = PackedBits::with_capacity(stored_len(length, period));
    stream.fill(&mut bits, stored_len(length, period));
    let provenance = Provenance {
        polynomials: vec![p.clone()],
        seeds: vec![seed.to_hex()],
        ..Provenance::default()
    };
    Ok(BipolarSequence::from_bits(bits, period, length, Family::MSequence, provenance))
}

/// XOR of two maximum-length LFSRs of the same degree.
pub fn gold_code(
    p1: &BinaryPolynomial,
    p2: &BinaryPolynomial,
    seed1: &LfsrState,
    seed2: &LfsrState,
    length: u64,
) -> Result<BipolarSequence> {
    check_length(length)?;
    let mut stream = GoldStream::new(p1, p2, seed1, seed2)?;
    let period = mls_period(p1.degree());
    let mut bits = PackedBits::with_capacity(stored_len(length, period));
    stream.fill(&mut bits, stored_len(length, period));
    let provenance = Provenance {
        polynomials: vec![p1.clone(), p2.clone()],
        seeds: vec![seed1.to_hex(), seed2.to_hex()],
        ..Provenance::default()
    };
    Ok(BipolarSequence::from_bits(bits, period, length, Family::Gold, provenance))
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn check_decimation(r: u32, n: u32) -> Result<()> {
    if r == 0 || gcd(r, n) != 1 {
        Err(SequenceError::InvalidDecimation { r, n })
    } else {
        Ok(())
    }
}

/// Minimal polynomial of `alpha^(2^r + 1)`, the second LFSR of a Gold pair built on `p`.
pub fn gold_partner(p: &BinaryPolynomial, r: u32) -> Result<BinaryPolynomial> {
    let n = p.degree();
    check_decimation(r, n)?;
    if n > MAX_ORACLE_DEGREE {
        return Err(SequenceError::OracleUnsupported {
            degree: n,
            limit: MAX_ORACLE_DEGREE,
        });
    }
    let alpha = FieldElement::generator(p)?;
    let beta = field_pow(alpha, (1u64 << r) + 1, p)?;
    Ok(minimal_polynomial(beta, p)?)
}

/// `s(i) = (-1)^Tr(f(alpha^i))` with `f(x) = x + x^(2^r + 1)` and `alpha = x mod p`.
pub fn gold_code_trace_oracle(p: &BinaryPolynomial, r: u32, length: u64) -> Result<BipolarSequence> {
    check_length(length)?;
    let n = p.degree();
    if n > MAX_ORACLE_DEGREE {
        return Err(SequenceError::OracleUnsupported {
            degree: n,
            limit: MAX_ORACLE_DEGREE,
        });
    }
    check_decimation(r, n)?;
    if !galois::is_primitive(p)? {
        return Err(GaloisError::NotPrimitive(p.to_string()).into());
    }
    let alpha = FieldElement::generator(p)?;
    let beta = field_pow(alpha, (1u64 << r) + 1, p)?;
    let period = mls_period(n);
    let stored = stored_len(length, period);
    let mut a = FieldElement::one(n)?;
    let mut b = FieldElement::one(n)?;
    let mut bits = PackedBits::with_capacity(stored);
    for _ in 0..stored {
        bits.push(trace(a.add(b)?, p)?);
        a = poly_mul_mod(a, alpha, p)?;
        b = poly_mul_mod(b, beta, p)?;
    }
    let provenance = Provenance {
        polynomials: vec![p.clone()],
        r: Some(r),
        ..Provenance::default()
    };
    Ok(BipolarSequence::from_bits(bits, period, length, Family::Gold, provenance))
}

/// Seeds `(seed1, seed2)` for which `gold_code(p1, p2, ..)` reproduces `target`.
///
/// Walks every shift of the first m-sequence; the residual `target * u_a` is
/// a shift of the second m-sequence exactly when its first `n` bits, used as
/// a seed, regenerate it.
pub fn locate_in_gold_family(
    target: &BipolarSequence,
    p1: &BinaryPolynomial,
    p2: &BinaryPolynomial,
) -> Result<Option<(LfsrState, LfsrState)>> {
    let n = p1.degree();
    if p2.degree() != n {
        return Err(SequenceError::DegreeMismatch(n, p2.degree()));
    }
    let period = mls_period(n);
    if !target.is_full_period() || target.period() != period {
        return Ok(None);
    }
    let len = period as usize;
    let mut s1 = LfsrState::default_seed(p1);
    for _ in 0..len {
        let u = s1.run(len)?;
        let residual: PackedBits = target.bits().iter().zip(u.iter()).map(|(t, b)| t ^ b).collect();
        let registers: Vec<bool> = residual.iter().take(n as usize).collect();
        let s2 = LfsrState::from_registers(p2, &registers)?;
        if !s2.is_zero() && s2.run(len)? == residual {
            return Ok(Some((s1, s2)));
        }
        s1 = s1.step();
    }
    Ok(None)
}

/// True when Gold-code bounds that assume a Mersenne-prime period apply to degree `n`.
pub fn has_mersenne_period(n: u32) -> bool {
    is_mersenne_exponent(n)
}
