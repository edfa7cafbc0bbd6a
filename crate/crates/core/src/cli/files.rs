//! Sample files and atomic writes.
//!
//! Binary samples: `u64` count followed by that many `f64`, little-endian.
//! Text samples: one value per line with 17 significant digits.

use std::io::{self, BufRead, BufWriter, Write};
use std::path::Path;

use crate::analysis::report::format_f64;

use super::CliError;

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, body: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(path, e))?;
    {
        let mut w = BufWriter::new(tmp.as_file());
        body(&mut w).map_err(|e| CliError::io(path, e))?;
        w.flush().map_err(|e| CliError::io(path, e))?;
    }
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    write_atomic(path, |w| {
        serde_json::to_writer_pretty(&mut *w, value).map_err(io::Error::from)?;
        w.write_all(b"\n")
    })
}

pub fn write_samples_csv(w: &mut dyn Write, samples: &[f64]) -> io::Result<()> {
    for &x in samples {
        writeln!(w, "{}", format_f64(x))?;
    }
    Ok(())
}

pub fn write_samples_bin(w: &mut dyn Write, samples: &[f64]) -> io::Result<()> {
    w.write_all(&(samples.len() as u64).to_le_bytes())?;
    for &x in samples {
        w.write_all(&x.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_samples_csv<R: BufRead>(input: R, name: &str) -> Result<Vec<f64>, CliError> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line.map_err(|e| CliError::Input(format!("{name}: line {}: {e}", i + 1)))?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let x: f64 = t
            .parse()
            .map_err(|_| CliError::Input(format!("{name}: line {}: not a number: {t:?}", i + 1)))?;
        if !x.is_finite() {
            return Err(CliError::Input(format!("{name}: line {}: non-finite value", i + 1)));
        }
        out.push(x);
    }
    Ok(out)
}

pub fn read_samples_bin(bytes: &[u8], name: &str) -> Result<Vec<f64>, CliError> {
    if bytes.len() < 8 {
        return Err(CliError::Input(format!("{name}: byte {}: truncated count header (8 bytes)", bytes.len())));
    }
    let count = u64::from_le_bytes(bytes[..8].try_into().expect("8 bytes"));
    let expected = 8 + 8 * count as u128;
    let len = bytes.len() as u128;
    if len != expected {
        return Err(CliError::Input(format!(
            "{name}: byte {}: header declares {count} samples ({expected} bytes), file holds {len} bytes",
            len.min(expected)
        )));
    }
    let mut out = Vec::with_capacity(count as usize);
    for (i, chunk) in bytes[8..].chunks_exact(8).enumerate() {
        let x = f64::from_le_bytes(chunk.try_into().expect("8 bytes"));
        if !x.is_finite() {
            return Err(CliError::Input(format!("{name}: byte {}: non-finite value", 8 + 8 * i)));
        }
        out.push(x);
    }
    Ok(out)
}

pub fn read_samples_json(text: &str, name: &str) -> Result<Vec<f64>, CliError> {
    #[derive(serde::Deserialize)]
    struct Doc {
        samples: Vec<f64>,
    }
    serde_json::from_str::<Doc>(text)
        .map(|d| d.samples)
        .map_err(|e| CliError::Input(format!("{name}: line {}, column {}: {e}", e.line(), e.column())))
}
