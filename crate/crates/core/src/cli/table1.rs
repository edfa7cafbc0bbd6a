//! Moments of the four reference configurations next to published values.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::analysis::{raw_moments, report::format_f64};
use crate::galois::{DEGREE89_PENTANOMIAL, DEGREE89_TRINOMIAL};
use crate::grng;

use super::config::{FamilyArg, GenerateOptions, ModelArg, RunConfig, DEFAULT_SEED};
use super::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table1Config {
    #[serde(rename = "M")]
    pub block_len: usize,
    #[serde(rename = "B")]
    pub bit_depth: u32,
    pub terms: usize,
    #[serde(rename = "T")]
    pub count: usize,
    pub polynomials: Vec<String>,
    pub seeds: Vec<String>,
    /// `None` selects the default for the register degree.
    pub warmup_bits: Option<u64>,
}

impl Default for Table1Config {
    fn default() -> Self {
        Self {
            block_len: grng::DEFAULT_BLOCK_LEN,
            bit_depth: grng::DEFAULT_BIT_DEPTH,
            terms: grng::DEFAULT_TERMS,
            count: 100_000,
            polynomials: vec![DEGREE89_TRINOMIAL.into(), DEGREE89_PENTANOMIAL.into()],
            seeds: vec![DEFAULT_SEED.into(), DEFAULT_SEED.into()],
            warmup_bits: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table1Column {
    pub label: String,
    pub config: RunConfig,
    /// Raw moments `m1..m4`.
    pub measured: Vec<f64>,
    pub published: Vec<f64>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table1Report {
    pub tool: String,
    pub version: String,
    pub columns: Vec<Table1Column>,
    pub all_pass: bool,
}

/// Published moments, in column order.
pub const PUBLISHED: [(&str, [f64; 4]); 4] = [
    ("m-sequence binary", [0.0037, 1.0043, 0.3609, 3.2182]),
    ("gold binary", [-0.0012, 1.0011, 0.0049, 3.0061]),
    ("m-sequence tausworthe", [0.0003, 1.0033, 0.0031, 2.8849]),
    ("gold tausworthe", [0.0018, 0.9992, 0.0022, 2.8421]),
];

/// Fourth moment of a standardised sum of 8 independent uniforms.
pub const IRWIN_HALL_8_KURTOSIS: f64 = 3.0 - 6.0 / (5.0 * 8.0);

fn check(name: &str, value: f64, pass: bool) -> Check {
    Check {
        name: name.into(),
        value,
        pass,
    }
}

fn checks_for(family: FamilyArg, model: ModelArg, m: &[f64]) -> Vec<Check> {
    match (family, model) {
        (FamilyArg::MSequence, ModelArg::Binary) => vec![
            check("|m1| < 0.02", m[0], m[0].abs() < 0.02),
            check("|m2 - 1| < 0.02", m[1], (m[1] - 1.0).abs() < 0.02),
            check("m3 > 0.2", m[2], m[2] > 0.2),
            check("m4 > 3.1", m[3], m[3] > 3.1),
        ],
        (FamilyArg::Gold, ModelArg::Binary) => vec![
            check("|m1| < 0.02", m[0], m[0].abs() < 0.02),
            check("|m2 - 1| < 0.02", m[1], (m[1] - 1.0).abs() < 0.02),
            check("|m3| < 0.03", m[2], m[2].abs() < 0.03),
            check("|m4 - 3| < 0.1", m[3], (m[3] - 3.0).abs() < 0.1),
        ],
        (_, ModelArg::Tausworthe) => vec![check("|m4 - 2.85| < 0.08", m[3], (m[3] - 2.85).abs() < 0.08)],
    }
}

/// Generates and measures the four configurations.
pub fn reproduce_table1(cfg: &Table1Config, seed_override: Option<String>) -> Result<Table1Report, CliError> {
    let cases = [
        (FamilyArg::MSequence, ModelArg::Binary),
        (FamilyArg::Gold, ModelArg::Binary),
        (FamilyArg::MSequence, ModelArg::Tausworthe),
        (FamilyArg::Gold, ModelArg::Tausworthe),
    ];
    let mut columns = Vec::new();
    for ((family, model), (label, published)) in cases.into_iter().zip(PUBLISHED) {
        let gold = family == FamilyArg::Gold;
        let binary = model == ModelArg::Binary;
        let opts = GenerateOptions {
            family: Some(family),
            poly: cfg.polynomials.first().cloned(),
            poly2: if gold { cfg.polynomials.get(1).cloned() } else { None },
            seed: cfg.seeds.first().cloned(),
            seed2: if gold { cfg.seeds.get(1).cloned() } else { None },
            r: gold.then_some(1),
            model: Some(model),
            block_len: binary.then_some(cfg.block_len),
            bit_depth: (!binary).then_some(cfg.bit_depth),
            terms: (!binary).then_some(cfg.terms),
            count: Some(cfg.count),
            warmup: cfg.warmup_bits,
            output: Some("-".into()),
            seed_override: seed_override.clone(),
            ..GenerateOptions::default()
        };
        let run = RunConfig::resolve(&opts)?;
        let block = run.generate()?;
        let measured = raw_moments(&block.samples, 4).map_err(|e| CliError::Config(e.to_string()))?.moments;
        let checks = checks_for(family, model, &measured);
        columns.push(Table1Column {
            label: label.into(),
            config: run,
            pass: checks.iter().all(|c| c.pass),
            measured,
            published: published.to_vec(),
            checks,
        });
    }
    Ok(Table1Report {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        all_pass: columns.iter().all(|c| c.pass),
        columns,
    })
}

/// `column,k,measured,published` followed by one `check` row per criterion.
pub fn write_table1_csv(report: &Table1Report, w: &mut dyn Write) -> io::Result<()> {
    writeln!(w, "column,k,measured,published")?;
    for c in &report.columns {
        for k in 0..4 {
            writeln!(w, "{},{},{},{}", c.label, k + 1, format_f64(c.measured[k]), format_f64(c.published[k]))?;
        }
    }
    writeln!(w, "column,check,value,pass")?;
    for c in &report.columns {
        for ch in &c.checks {
            writeln!(w, "{},{},{},{}", c.label, ch.name, format_f64(ch.value), ch.pass)?;
        }
    }
    Ok(())
}

/// Human-readable side-by-side table.
pub fn render_table1(report: &Table1Report) -> String {
    let mut s = String::from("k  ");
    for c in &report.columns {
        s.push_str(&format!("| {:<30}", c.label));
    }
    s.push('\n');
    for k in 0..4 {
        s.push_str(&format!("{}  ", k + 1));
        for c in &report.columns {
            s.push_str(&format!("| {:>9.4} (pub {:>7.4})       ", c.measured[k], c.published[k]));
        }
        s.push('\n');
    }
    for c in &report.columns {
        for ch in &c.checks {
            s.push_str(&format!("{} {}: {} = {:.4}\n", if ch.pass { "PASS" } else { "FAIL" }, c.label, ch.name, ch.value));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irwin_hall_kurtosis() {
        assert!((IRWIN_HALL_8_KURTOSIS - 2.85).abs() < 1e-15);
    }

    #[test]
    fn small_configuration_runs() {
        let cfg = Table1Config {
            block_len: 16,
            count: 500,
            polynomials: vec!["x^17 + x^3 + 1".into(), "x^17 + x^5 + 1".into()],
            ..Table1Config::default()
        };
        let report = reproduce_table1(&cfg, None).unwrap();
        assert_eq!(report.columns.len(), 4);
        assert_eq!(report.columns[2].checks.len(), 1);
        let mut buf = Vec::new();
        write_table1_csv(&report, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 1 + 16 + 1 + 10);
    }
}
