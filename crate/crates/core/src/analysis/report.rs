//! Output schemas for moment reports, grids and histograms.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use super::{Histogram, TripleMomentGrid};

/// Moment report as written to JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentDocument {
    pub model: String,
    pub family: String,
    /// Block length, absent for the Tausworthe model.
    #[serde(rename = "M")]
    pub block_len: Option<usize>,
    #[serde(rename = "T")]
    pub count: usize,
    /// Raw moments `m1..m4`.
    pub moments: Vec<f64>,
    /// Seeds as hex strings, first register first.
    pub seeds: Vec<String>,
}

/// Locale-free number format with 17 significant digits.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV matrix: header row of `d2` indices, then one row per `d1`.
pub fn write_grid_csv<W: Write>(grid: &TripleMomentGrid, mut out: W) -> io::Result<()> {
    let mut line = String::from("d1\\d2");
    for d2 in 0..grid.window {
        line.push_str(&format!(",{d2}"));
    }
    writeln!(out, "{line}")?;
    for d1 in 0..grid.window {
        line.clear();
        line.push_str(&d1.to_string());
        for d2 in 0..grid.window {
            line.push(',');
            line.push_str(&format_f64(grid.get(d1, d2)));
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// `bin_lo,bin_hi,count`; underflow and overflow are written as open-ended
/// rows `-inf,lo` and `hi,inf` so every sample is accounted for.
pub fn write_histogram_csv<W: Write>(h: &Histogram, mut out: W) -> io::Result<()> {
    writeln!(out, "bin_lo,bin_hi,count")?;
    writeln!(out, "-inf,{},{}", format_f64(h.lo), h.underflow)?;
    for (i, c) in h.counts.iter().enumerate() {
        writeln!(out, "{},{},{}", format_f64(h.edge(i)), format_f64(h.edge(i + 1)), c)?;
    }
    writeln!(out, "{},inf,{}", format_f64(h.hi), h.overflow)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{histogram, triple_moment_grid};

    #[test]
    fn grid_csv_layout() {
        let g = triple_moment_grid(&[1.0, -1.0, 2.0, 0.5], 2, 3).unwrap();
        let mut buf = Vec::new();
        write_grid_csv(&g, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "d1\\d2,0,1");
        assert_eq!(lines.len(), 3);
        let cells: Vec<f64> = lines[2].split(',').skip(1).map(|c| c.parse().unwrap()).collect();
        assert_eq!(cells, vec![g.get(1, 0), g.get(1, 1)]);
    }

    #[test]
    fn histogram_csv_accounts_for_everything() {
        let h = histogram(&[-9.0, 0.0, 0.0, 9.0, 9.0], 4, -1.0, 1.0).unwrap();
        let mut buf = Vec::new();
        write_histogram_csv(&h, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("bin_lo,bin_hi,count\n-inf,"));
        let total: u64 = text.lines().skip(1).map(|l| l.rsplit(',').next().unwrap().parse::<u64>().unwrap()).sum();
        assert_eq!(total, 5);
        assert!(text.lines().last().unwrap().ends_with(",inf,2"));
    }

    #[test]
    fn format_round_trips() {
        for x in [0.1, -1.0 / 3.0, 1e-300, 12345.678901234567] {
            assert_eq!(format_f64(x).parse::<f64>().unwrap(), x);
        }
    }
}
