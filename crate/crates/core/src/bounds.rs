//! Right-hand sides of the moment and correlation bounds, and checks of
//! empirical quantities against them.
//!
//! * Block-sum moments of a `±1` sequence of period `N`:
//!   `|(1/N) sum_i (sum_{n=1}^{M} s(i+n))^k| <= (M(k-1))^{k/2} + M^k theta / T`.
//! * Delayed product moments of normalised block sums:
//!   `|(1/T) sum_i S(i+d_1)...S(i+d_k)| <= (k-1)^{k/2} + M^{k/2} theta / T`.
//! * Gold codes of degree `n` with decimation `r`:
//!   `theta_k <= 9 n 2^{2r + 1 + n/2}`.
//!
//! In the first two the leading term is present only for even `k`, and
//! `theta` is `max_{r <= k} theta_r(s, N)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{self, product_moment, AnalysisError, RestrictedSearch};
use crate::galois::{self, BinaryPolynomial, GaloisError};
use crate::grng::{block_sum_gaussian, BlockSumConfig, GrngError};
use crate::lfsr::LfsrState;
use crate::sequences::{self, gold_code, gold_partner, m_sequence, mls_period, BipolarSequence, SequenceError};

/// Relative slack for floating-point evaluation of the right-hand sides.
pub const RELATIVE_SLACK: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("order k must be at least 1")]
    ZeroOrder,
    #[error("block length M must be at least 1")]
    ZeroBlock,
    #[error("T must be at least 1")]
    ZeroCount,
    #[error("non-finite input: lhs = {lhs}, rhs = {rhs}")]
    NonFinite { lhs: f64, rhs: f64 },
    #[error("gcd(r = {r}, n = {n}) must be 1")]
    InvalidDecimation { r: u32, n: u32 },
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Galois(#[from] GaloisError),
    #[error(transparent)]
    Grng(#[from] GrngError),
}

pub type Result<T> = std::result::Result<T, BoundsError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Theorem {
    /// Block-sum moment bound.
    T1,
    /// Delayed product moment bound.
    T2,
    /// Gold-code correlation bound.
    T3,
}

/// Where the `theta` fed into a right-hand side came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThetaMode {
    /// Exhaustive search.
    Exact,
    /// Restricted search: a lower bound on theta, so a satisfied check still holds for the true value.
    Restricted,
    /// The Gold-code correlation bound used in place of a measured theta.
    AssumedTheta,
    /// Supplied by the caller.
    Override,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundParameters {
    /// Sequence period.
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub period: Option<u128>,
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    pub block_len: Option<usize>,
    /// Sum truncation in the bound.
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    pub count: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// LFSR degree.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delays: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_mode: Option<ThetaMode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub polynomials: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub seeds: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub theorem: Theorem,
    pub parameters: BoundParameters,
    pub rhs_value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs_value: Option<f64>,
    /// Present exactly when `lhs_value` is.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub satisfied: Option<bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl BoundReport {
    pub fn new(theorem: Theorem, parameters: BoundParameters, rhs: f64, lhs: Option<f64>) -> Result<Self> {
        let satisfied = lhs.map(|l| check_bound(l, rhs)).transpose()?;
        Ok(Self {
            theorem,
            parameters,
            rhs_value: rhs,
            lhs_value: lhs,
            satisfied,
            warnings: Vec::new(),
        })
    }

    /// False only for a checked and violated bound.
    pub fn holds(&self) -> bool {
        self.satisfied != Some(false)
    }
}

/// `lhs <= rhs` up to [`RELATIVE_SLACK`].
pub fn check_bound(lhs: f64, rhs: f64) -> Result<bool> {
    if !lhs.is_finite() || !rhs.is_finite() {
        return Err(BoundsError::NonFinite { lhs, rhs });
    }
    Ok(lhs <= rhs + rhs.abs() * RELATIVE_SLACK)
}

fn check_rhs_inputs(m: usize, k: usize, t: u64) -> Result<()> {
    if k == 0 {
        return Err(BoundsError::ZeroOrder);
    }
    if m == 0 {
        return Err(BoundsError::ZeroBlock);
    }
    if t == 0 {
        return Err(BoundsError::ZeroCount);
    }
    Ok(())
}

/// `(M(k-1))^{k/2} + M^k theta / T`, leading term for even `k` only.
pub fn theorem1_rhs(m: usize, k: usize, t: u64, theta_max: f64) -> Result<f64> {
    check_rhs_inputs(m, k, t)?;
    let m = m as f64;
    let lead = if k.is_multiple_of(2) { (m * (k - 1) as f64).powi(k as i32 / 2) } else { 0.0 };
    Ok(lead + m.powi(k as i32) * theta_max / t as f64)
}

/// `(k-1)^{k/2} + M^{k/2} theta / T`, leading term for even `k` only.
pub fn theorem2_rhs(m: usize, k: usize, t: u64, theta_max: f64) -> Result<f64> {
    check_rhs_inputs(m, k, t)?;
    let lead = if k.is_multiple_of(2) { ((k - 1) as f64).powi(k as i32 / 2) } else { 0.0 };
    Ok(lead + (m as f64).powf(k as f64 / 2.0) * theta_max / t as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoldBound {
    pub value: f64,
    /// `2^n - 1` is prime, as the bound requires.
    pub mersenne: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

/// `9 n 2^{2r + 1 + n/2}`, independent of `k` for `1 <= k <= 4`.
pub fn theorem3_gold_bound(n: u32, r: u32) -> Result<GoldBound> {
    if r == 0 || gcd(r, n) != 1 {
        return Err(BoundsError::InvalidDecimation { r, n });
    }
    let value = 9.0 * n as f64 * 2f64.powf(2.0 * r as f64 + 1.0 + n as f64 / 2.0);
    let mersenne = galois::is_mersenne_exponent(n);
    let warning = (!mersenne).then(|| format!("2^{n} - 1 is not a Mersenne prime; the bound is not established for this degree"));
    Ok(GoldBound { value, mersenne, warning })
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `|(1/N) sum_{i=1}^{N} (sum_{n=1}^{M} s(i+n))^k|` over one period.
pub fn theorem1_lhs(seq: &BipolarSequence, m: usize, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(BoundsError::ZeroOrder);
    }
    if m == 0 {
        return Err(BoundsError::ZeroBlock);
    }
    if !seq.is_full_period() {
        return Err(AnalysisError::NotFullPeriod.into());
    }
    let sym = seq.symbols();
    let n = sym.len();
    // window sum starting after position i, rolled forward
    let mut window: i64 = (1..=m).map(|j| sym[j % n] as i64).sum();
    let mut total = 0f64;
    let mut carry = 0f64;
    for i in 1..=n {
        let term = (window as f64).powi(k as i32);
        let t = total + term;
        carry += if total.abs() >= term.abs() { (total - t) + term } else { (term - t) + total };
        total = t;
        window += sym[(i + m) % n] as i64 - sym[i % n] as i64;
    }
    Ok(((total + carry) / n as f64).abs())
}

/// `max_{r <= k} theta_r` by exhaustive search.
pub fn theta_max_exact(seq: &BipolarSequence, k: usize) -> Result<f64> {
    let mut best = 0;
    for r in 1..=k {
        best = best.max(analysis::correlation_measure_exact(seq, r)?.value);
    }
    Ok(best as f64)
}

/// `max_{r <= k} theta_r` over a restricted search.
pub fn theta_max_restricted(seq: &BipolarSequence, k: usize, search: &RestrictedSearch) -> Result<f64> {
    let mut best = 0;
    for r in 1..=k {
        match analysis::correlation_measure_restricted(seq, r, search) {
            Ok(res) => best = best.max(res.value),
            Err(AnalysisError::EmptySearch) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(best as f64)
}

fn sequence_parameters(seq: &BipolarSequence) -> BoundParameters {
    let prov = seq.provenance();
    BoundParameters {
        period: Some(seq.period()),
        family: Some(seq.family().to_string()),
        polynomials: prov.polynomials.iter().map(|p| p.to_string()).collect(),
        seeds: prov.seeds.clone(),
        r: prov.r,
        n: prov.polynomials.first().map(|p| p.degree()),
        ..BoundParameters::default()
    }
}

/// Block-sum moment check over one full period with the given `theta`.
pub fn theorem1_check(seq: &BipolarSequence, m: usize, k: usize, theta_max: f64, mode: ThetaMode) -> Result<BoundReport> {
    let t = u64::try_from(seq.period()).map_err(|_| AnalysisError::NotFullPeriod)?;
    let rhs = theorem1_rhs(m, k, t, theta_max)?;
    let lhs = theorem1_lhs(seq, m, k)?;
    let params = BoundParameters {
        block_len: Some(m),
        count: Some(t),
        k: Some(k),
        theta_max: Some(theta_max),
        theta_mode: Some(mode),
        ..sequence_parameters(seq)
    };
    BoundReport::new(Theorem::T1, params, rhs, Some(lhs))
}

/// Primitive polynomials of degree `n` (at most [`galois::MAX_FIELD_DEGREE`]), ascending.
pub fn primitive_polynomials(n: u32) -> Result<Vec<BinaryPolynomial>> {
    let mut out = Vec::new();
    for middle in 0..(1u128 << (n - 1)) {
        let p = BinaryPolynomial::from_mask((1 << n) | (middle << 1) | 1)?;
        if galois::is_primitive(&p)? {
            out.push(p);
        }
    }
    Ok(out)
}

/// Sequences covered by the block-sum moment sweep: every m-sequence of
/// degree 3 to 5 and every Gold code (partner `r = 1`) of degree 3 and 5,
/// all from default seeds.
pub fn theorem1_sweep_sequences() -> Result<Vec<BipolarSequence>> {
    let mut out = Vec::new();
    for n in [3, 4, 5] {
        for p in primitive_polynomials(n)? {
            let seed = LfsrState::default_seed(&p);
            out.push(m_sequence(&p, &seed, mls_period(n) as u64)?);
        }
    }
    for n in [3, 5] {
        for p in primitive_polynomials(n)? {
            let q = gold_partner(&p, 1)?;
            let (s1, s2) = (LfsrState::default_seed(&p), LfsrState::default_seed(&q));
            out.push(gold_code(&p, &q, &s1, &s2, mls_period(n) as u64)?);
        }
    }
    Ok(out)
}

/// Block-sum moment checks for every sweep sequence, `k` in `1..=3` and `M`
/// in `{2, 4, 8}`, with exact `theta` unless `theta_override` is given.
pub fn theorem1_sweep(theta_override: Option<f64>) -> Result<Vec<BoundReport>> {
    let mut reports = Vec::new();
    for seq in theorem1_sweep_sequences()? {
        for k in 1..=3 {
            let (theta, mode) = match theta_override {
                Some(t) => (t, ThetaMode::Override),
                None => (theta_max_exact(&seq, k)?, ThetaMode::Exact),
            };
            for m in [2, 4, 8] {
                reports.push(theorem1_check(&seq, m, k, theta, mode)?);
            }
        }
    }
    Ok(reports)
}

/// Delayed product moment check on normalised block sums of one full period.
///
/// `samples` must hold at least `t + d_k` values.
pub fn theorem2_check(samples: &[f64], m: usize, delays: &[usize], t: usize, theta_max: f64, mode: ThetaMode) -> Result<BoundReport> {
    let k = delays.len();
    let rhs = theorem2_rhs(m, k, t as u64, theta_max)?;
    let lhs = product_moment(samples, delays, t, Some(m))?.abs();
    let params = BoundParameters {
        block_len: Some(m),
        count: Some(t as u64),
        k: Some(k),
        delays: Some(delays.to_vec()),
        theta_max: Some(theta_max),
        theta_mode: Some(mode),
        ..BoundParameters::default()
    };
    BoundReport::new(Theorem::T2, params, rhs, Some(lhs))
}

/// Delay tuples used by the product moment sweep.
pub fn theorem2_delay_sets() -> Vec<Vec<usize>> {
    vec![
        vec![0, 1],
        vec![0, 2],
        vec![0, 7],
        vec![3, 40],
        vec![0, 1, 2],
        vec![0, 1, 3],
        vec![0, 2, 5],
        vec![0, 3, 7],
        vec![1, 4, 9],
        vec![0, 10, 30],
    ]
}

/// Product moment checks on a Gold code of degree `p.degree()` (partner
/// decimation `r`) with block length `m` over one full period.
///
/// Each delay set is checked twice: with `theta` from `search` (a lower
/// bound, so satisfaction is conclusive) and, when the Gold-code bound
/// applies, with that bound as `theta`.
pub fn theorem2_gold_sweep(p: &BinaryPolynomial, r: u32, m: usize, delay_sets: &[Vec<usize>], search: &RestrictedSearch) -> Result<Vec<BoundReport>> {
    let q = gold_partner(p, r)?;
    let n = p.degree();
    let (s1, s2) = (LfsrState::default_seed(p), LfsrState::default_seed(&q));
    let period = mls_period(n) as u64;
    let seq = gold_code(p, &q, &s1, &s2, period)?;
    let t = period as usize;
    let max_delay = delay_sets.iter().filter_map(|d| d.last()).copied().max().unwrap_or(0);
    let cfg = BlockSumConfig::new(m);
    let samples = block_sum_gaussian(&cfg, &mut seq.cursor(0), t + max_delay)?.samples;
    let gold = theorem3_gold_bound(n, r)?;
    let base = BoundParameters {
        n: Some(n),
        r: Some(r),
        ..sequence_parameters(&seq)
    };
    let mut reports = Vec::new();
    let max_k = delay_sets.iter().map(Vec::len).max().unwrap_or(0);
    let mut restricted = vec![0.0];
    for k in 1..=max_k {
        restricted.push(theta_max_restricted(&seq, k, search)?);
    }
    for delays in delay_sets {
        let k = delays.len();
        let mut modes = vec![(restricted[k], ThetaMode::Restricted)];
        if gold.mersenne && k <= 4 {
            modes.push((gold.value, ThetaMode::AssumedTheta));
        }
        for (theta, mode) in modes {
            let mut rep = theorem2_check(&samples, m, delays, t, theta, mode)?;
            rep.parameters = BoundParameters {
                period: base.period,
                family: base.family.clone(),
                polynomials: base.polynomials.clone(),
                seeds: base.seeds.clone(),
                n: base.n,
                r: base.r,
                ..rep.parameters
            };
            reports.push(rep);
        }
    }
    Ok(reports)
}

/// Report of the Gold-code correlation bound for degree `n`, decimation `r`.
pub fn theorem3_report(n: u32, r: u32) -> Result<BoundReport> {
    let bound = theorem3_gold_bound(n, r)?;
    let params = BoundParameters {
        period: Some(mls_period(n)),
        n: Some(n),
        r: Some(r),
        family: Some(sequences::Family::Gold.to_string()),
        ..BoundParameters::default()
    };
    let mut rep = BoundReport::new(Theorem::T3, params, bound.value, None)?;
    rep.warnings.extend(bound.warning);
    Ok(rep)
}

/// Exact correlation measure at order `k` compared with the Gold-code bound:
/// the measured `theta_k` is the left-hand side.
pub fn theorem3_check(seq: &BipolarSequence, r: u32, k: usize) -> Result<(BoundReport, analysis::CorrelationMeasureResult)> {
    let n = seq
        .provenance()
        .polynomials
        .first()
        .map(|p| p.degree())
        .ok_or(AnalysisError::NotFullPeriod)?;
    let bound = theorem3_gold_bound(n, r)?;
    let res = analysis::correlation_measure_exact(seq, k)?;
    let params = BoundParameters {
        k: Some(k),
        n: Some(n),
        r: Some(r),
        theta_mode: Some(ThetaMode::Exact),
        ..sequence_parameters(seq)
    };
    let mut rep = BoundReport::new(Theorem::T3, params, bound.value, Some(res.value as f64))?;
    rep.warnings.extend(bound.warning);
    if k > 4 {
        rep.warnings.push(format!("the bound is stated for k <= 4, got k = {k}"));
    }
    Ok((rep, res))
}
