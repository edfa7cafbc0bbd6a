//! Bound checks at desk scale.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::analysis::{report::format_f64, RestrictedSearch, Witness};
use crate::bounds::{self, BoundReport, ThetaMode};
use crate::galois::BinaryPolynomial;
use crate::lfsr::LfsrState;
use crate::sequences::{gold_code, gold_partner, mls_period};

use super::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Which {
    All,
    T1,
    T2,
    T3,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub which: Which,
    /// Replaces every measured or assumed `theta`.
    pub theta: Option<f64>,
    /// Gold base polynomial for the exact correlation checks.
    pub exact_poly: String,
    /// Gold base polynomial for the product moment checks.
    pub product_poly: String,
    pub r: u32,
    #[serde(rename = "M")]
    pub block_len: usize,
    /// Order of the full-peak probe.
    pub peak_order: usize,
}

pub const DEFAULT_EXACT_POLY: &str = "x^5 + x^2 + 1";
pub const DEFAULT_PRODUCT_POLY: &str = "x^13 + x^4 + x^3 + x + 1";

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            which: Which::All,
            theta: None,
            exact_poly: DEFAULT_EXACT_POLY.into(),
            product_poly: DEFAULT_PRODUCT_POLY.into(),
            r: 1,
            block_len: 16,
            peak_order: 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FullPeakProbe {
    pub k: usize,
    pub value: u64,
    pub found: bool,
    pub witness: Witness,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub tool: String,
    pub version: String,
    pub options: VerifyOptions,
    pub reports: Vec<BoundReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub full_peak: Option<FullPeakProbe>,
    pub all_hold: bool,
}

fn config_err(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

fn override_theta(mut rep: BoundReport, theta: f64) -> Result<BoundReport, CliError> {
    let p = &rep.parameters;
    let (m, k, t) = (p.block_len.unwrap_or(1), p.k.unwrap_or(1), p.count.unwrap_or(1));
    rep.rhs_value = bounds::theorem2_rhs(m, k, t, theta).map_err(config_err)?;
    rep.satisfied = rep.lhs_value.map(|l| bounds::check_bound(l, rep.rhs_value)).transpose().map_err(config_err)?;
    rep.parameters.theta_max = Some(theta);
    rep.parameters.theta_mode = Some(ThetaMode::Override);
    Ok(rep)
}

pub fn verify_bounds(o: &VerifyOptions) -> Result<VerifyReport, CliError> {
    let mut reports = Vec::new();
    let mut full_peak = None;
    let run = |w: Which| o.which == Which::All || o.which == w;
    if run(Which::T1) {
        reports.extend(bounds::theorem1_sweep(o.theta).map_err(config_err)?);
    }
    if run(Which::T2) {
        let p: BinaryPolynomial = o.product_poly.parse().map_err(config_err)?;
        let m = o.block_len;
        let search = RestrictedSearch {
            steps: vec![1, m as u64],
            max_delay: 2 * m as u64,
            counts: None,
            periodic: false,
        };
        let reps = bounds::theorem2_gold_sweep(&p, o.r, m, &bounds::theorem2_delay_sets(), &search).map_err(config_err)?;
        for rep in reps {
            match o.theta {
                Some(t) if rep.parameters.theta_mode == Some(ThetaMode::Restricted) => reports.push(override_theta(rep, t)?),
                Some(_) => {}
                None => reports.push(rep),
            }
        }
    }
    if run(Which::T3) {
        reports.push(bounds::theorem3_report(89, o.r).map_err(config_err)?);
        let p: BinaryPolynomial = o.exact_poly.parse().map_err(config_err)?;
        reports.push(bounds::theorem3_report(p.degree(), o.r).map_err(config_err)?);
        let q = gold_partner(&p, o.r).map_err(config_err)?;
        let n = mls_period(p.degree()) as u64;
        let seq = gold_code(&p, &q, &LfsrState::default_seed(&p), &LfsrState::default_seed(&q), n).map_err(config_err)?;
        for k in 1..=3 {
            let (rep, _) = bounds::theorem3_check(&seq, o.r, k).map_err(config_err)?;
            reports.push(rep);
        }
        let res = crate::analysis::correlation_measure_exact(&seq, o.peak_order).map_err(config_err)?;
        full_peak = Some(FullPeakProbe {
            k: o.peak_order,
            value: res.value,
            found: res.witness.is_full_peak(n),
            witness: res.witness,
        });
    }
    let all_hold = reports.iter().all(BoundReport::holds) && full_peak.as_ref().is_none_or(|p| p.found);
    Ok(VerifyReport {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        options: o.clone(),
        reports,
        full_peak,
        all_hold,
    })
}

/// One row per bound check.
pub fn write_verify_csv(r: &VerifyReport, w: &mut dyn Write) -> io::Result<()> {
    writeln!(w, "theorem,family,N,M,T,k,theta_mode,theta_max,lhs,rhs,satisfied")?;
    for rep in &r.reports {
        let p = &rep.parameters;
        let opt = |v: Option<String>| v.unwrap_or_default();
        writeln!(
            w,
            "{:?},{},{},{},{},{},{},{},{},{},{}",
            rep.theorem,
            opt(p.family.clone()),
            opt(p.period.map(|v| v.to_string())),
            opt(p.block_len.map(|v| v.to_string())),
            opt(p.count.map(|v| v.to_string())),
            opt(p.k.map(|v| v.to_string())),
            opt(p.theta_mode.map(|m| serde_json::to_value(m).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default())),
            opt(p.theta_max.map(format_f64)),
            opt(rep.lhs_value.map(format_f64)),
            format_f64(rep.rhs_value),
            opt(rep.satisfied.map(|s| s.to_string())),
        )?;
    }
    Ok(())
}
