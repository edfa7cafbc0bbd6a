//! Sequence export and import.
//!
//! Packed layout (all integers little-endian):
//!
//! ```text
//! offset  size  field
//!      0     4  magic "PNSQ"
//!      4     4  version (u32, currently 1)
//!      8     8  period (u64, u64::MAX when the period does not fit)
//!     16     8  declared length (u64)
//!     24     *  min(length, period) symbols, 1 bit each, bit j of byte k = symbol 8k + j
//! ```
//!
//! A set bit is the symbol `-1`. The text form is one `1` or `-1` per line.

use std::io::{self, BufRead, Read, Write};

use thiserror::Error;

use crate::bits::PackedBits;

use super::{BipolarSequence, Family, Provenance};

pub const MAGIC: &[u8; 4] = b"PNSQ";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 24;

#[derive(Debug, Error)]
pub enum SequenceIoError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("bad magic at byte 0: expected \"PNSQ\"")]
    BadMagic,
    #[error("unsupported version {0} at byte 4")]
    UnsupportedVersion(u32),
    #[error("file truncated at byte {offset}: expected {expected} bytes")]
    Truncated { offset: usize, expected: usize },
    #[error("zero period or length at byte 8")]
    EmptySequence,
    #[error("line {line}: expected 1 or -1, found {found:?}")]
    BadSymbol { line: usize, found: String },
}

/// Writes the packed binary form.
pub fn write_packed<W: Write>(seq: &BipolarSequence, mut out: W) -> io::Result<()> {
    let period = u64::try_from(seq.period()).unwrap_or(u64::MAX);
    out.write_all(MAGIC)?;
    out.write_all(&VERSION.to_le_bytes())?;
    out.write_all(&period.to_le_bytes())?;
    out.write_all(&seq.len().to_le_bytes())?;
    out.write_all(&seq.bits().to_le_bytes())?;
    Ok(())
}

/// Reads the packed binary form. Provenance is not carried by the format.
pub fn read_packed<R: Read>(mut input: R) -> Result<BipolarSequence, SequenceIoError> {
    let mut buf = Vec::new();
    input.read_to_end(&mut buf)?;
    if buf.len() < HEADER_LEN {
        if buf.len() < 4 || &buf[..4] != MAGIC {
            return Err(SequenceIoError::BadMagic);
        }
        return Err(SequenceIoError::Truncated {
            offset: buf.len(),
            expected: HEADER_LEN,
        });
    }
    if &buf[..4] != MAGIC {
        return Err(SequenceIoError::BadMagic);
    }
    let version = u32::from_le_bytes(buf[4..8].try_into().expect("4 bytes"));
    if version != VERSION {
        return Err(SequenceIoError::UnsupportedVersion(version));
    }
    let period = u64::from_le_bytes(buf[8..16].try_into().expect("8 bytes"));
    let length = u64::from_le_bytes(buf[16..24].try_into().expect("8 bytes"));
    if period == 0 || length == 0 {
        return Err(SequenceIoError::EmptySequence);
    }
    let period = if period == u64::MAX { u128::MAX } else { period as u128 };
    let stored = (length as u128).min(period) as usize;
    let expected = HEADER_LEN + stored.div_ceil(8);
    if buf.len() < expected {
        return Err(SequenceIoError::Truncated {
            offset: buf.len(),
            expected,
        });
    }
    let bits = PackedBits::from_le_bytes(&buf[HEADER_LEN..], stored).expect("length checked");
    Ok(BipolarSequence::from_bits(
        bits,
        period,
        length,
        Family::External,
        Provenance::default(),
    ))
}

/// Writes the stored symbols as text, one per line.
pub fn write_csv<W: Write>(seq: &BipolarSequence, mut out: W) -> io::Result<()> {
    for b in seq.bits().iter() {
        out.write_all(if b { b"-1\n" } else { b"1\n" })?;
    }
    Ok(())
}

/// Reads one period of `±1` symbols from text; blank lines are skipped.
pub fn read_csv<R: BufRead>(input: R) -> Result<BipolarSequence, SequenceIoError> {
    let mut bits = PackedBits::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        match t {
            "" => continue,
            "1" | "+1" => bits.push(false),
            "-1" => bits.push(true),
            other => {
                return Err(SequenceIoError::BadSymbol {
                    line: i + 1,
                    found: other.to_string(),
                })
            }
        }
    }
    if bits.is_empty() {
        return Err(SequenceIoError::EmptySequence);
    }
    let n = bits.len() as u64;
    Ok(BipolarSequence::from_bits(
        bits,
        n as u128,
        n,
        Family::External,
        Provenance::default(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::{BinaryPolynomial, DEGREE89_TRINOMIAL};
    use crate::lfsr::LfsrState;
    use crate::sequences::m_sequence;

    fn msq(p: &str, len: u64) -> BipolarSequence {
        let p: BinaryPolynomial = p.parse().unwrap();
        m_sequence(&p, &LfsrState::default_seed(&p), len).unwrap()
    }

    #[test]
    fn header_layout() {
        let s = msq("x^3 + x + 1", 7);
        let mut buf = Vec::new();
        write_packed(&s, &mut buf).unwrap();
        assert_eq!(&buf[..4], b"PNSQ");
        assert_eq!(&buf[4..8], &[1, 0, 0, 0]);
        assert_eq!(&buf[8..16], &7u64.to_le_bytes());
        assert_eq!(&buf[16..24], &7u64.to_le_bytes());
        // bits 1,0,0,1,0,1,1 -> 0b1101001
        assert_eq!(&buf[24..], &[0b0110_1001]);
    }

    #[test]
    fn packed_round_trips() {
        for s in [msq("x^3 + x + 1", 7), msq("x^10 + x^3 + 1", 5000), msq(DEGREE89_TRINOMIAL, 777)] {
            let mut buf = Vec::new();
            write_packed(&s, &mut buf).unwrap();
            let back = read_packed(buf.as_slice()).unwrap();
            assert_eq!(back.bits(), s.bits());
            assert_eq!(back.len(), s.len());
            assert_eq!(back.is_full_period(), s.is_full_period());
        }
    }

    #[test]
    fn packed_rejects_bad_input() {
        assert!(matches!(read_packed(&b"NOPE"[..]), Err(SequenceIoError::BadMagic)));
        let s = msq("x^5 + x^2 + 1", 31);
        let mut buf = Vec::new();
        write_packed(&s, &mut buf).unwrap();
        assert!(matches!(
            read_packed(&buf[..buf.len() - 1]),
            Err(SequenceIoError::Truncated { offset: 27, expected: 28 })
        ));
        assert!(matches!(
            read_packed(&buf[..10]),
            Err(SequenceIoError::Truncated { offset: 10, .. })
        ));
        buf[4] = 9;
        assert!(matches!(read_packed(buf.as_slice()), Err(SequenceIoError::UnsupportedVersion(9))));
    }

    #[test]
    fn csv_round_trip_and_errors() {
        let s = msq("x^4 + x + 1", 15);
        let mut buf = Vec::new();
        write_csv(&s, &mut buf).unwrap();
        assert!(String::from_utf8(buf.clone()).unwrap().starts_with("-1\n1\n1\n1\n-1\n"));
        let back = read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.symbols(), s.symbols());
        let err = read_csv(&b"1\n-1\n0\n"[..]).unwrap_err();
        assert!(matches!(err, SequenceIoError::BadSymbol { line: 3, .. }));
    }
}
