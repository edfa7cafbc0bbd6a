//! Run configuration shared by the commands, and its JSON sidecar.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bits::BitSource;
use crate::galois::{self, BinaryPolynomial, DEGREE89_PENTANOMIAL, DEGREE89_TRINOMIAL};
use crate::grng::{self, BlockSumConfig, GaussianSampleBlock, ModelConfig, TauswortheConfig};
use crate::lfsr::LfsrState;
use crate::sequences::{gold_partner, mls_period, PnStream, MAX_ORACLE_DEGREE};

use super::CliError;

/// Environment variable that replaces every LFSR seed (hex).
pub const SEED_OVERRIDE_ENV: &str = "PNGAUSS_SEED_OVERRIDE";
/// Default initial state `(1, 0, ..., 0)` for every register.
pub const DEFAULT_SEED: &str = "0x1";
/// Bits discarded before sampling from registers longer than [`WARMUP_MIN_DEGREE`].
///
/// From a weight-one state a long sparse register emits a visibly
/// structured prefix (block sums of the degree-89 trinomial stay biased for
/// roughly the first 2 million bits); this skips it with a wide margin.
pub const DEFAULT_WARMUP_BITS: u64 = 1 << 23;
pub const WARMUP_MIN_DEGREE: u32 = 32;

/// Discard length used when none is given.
pub fn default_warmup(degree: u32) -> u64 {
    if degree > WARMUP_MIN_DEGREE {
        DEFAULT_WARMUP_BITS
    } else {
        0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyArg {
    MSequence,
    Gold,
}

impl std::fmt::Display for FamilyArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FamilyArg::MSequence => "m-sequence",
            FamilyArg::Gold => "gold",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ModelArg {
    Binary,
    Tausworthe,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Bin,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Bin => "bin",
            Format::Json => "json",
        }
    }
}

/// Everything needed to regenerate a sample file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub family: FamilyArg,
    pub polynomials: Vec<BinaryPolynomial>,
    /// Initial states as hex, one per polynomial.
    pub seeds: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    pub model: ModelConfig,
    /// Number of samples `T`.
    #[serde(rename = "T")]
    pub count: usize,
    /// Bits discarded from the stream before the first sample.
    pub warmup_bits: u64,
    pub output: PathBuf,
    pub format: Format,
}

/// Generation options as given on the command line; `None` means default.
#[derive(Clone, Debug, Default)]
pub struct GenerateOptions {
    pub family: Option<FamilyArg>,
    pub poly: Option<String>,
    pub poly2: Option<String>,
    pub seed: Option<String>,
    pub seed2: Option<String>,
    pub r: Option<u32>,
    pub model: Option<ModelArg>,
    pub block_len: Option<usize>,
    pub overlapping: bool,
    pub bit_depth: Option<u32>,
    pub terms: Option<usize>,
    pub count: Option<usize>,
    pub warmup: Option<u64>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    /// Value of [`SEED_OVERRIDE_ENV`], passed in so callers control the environment.
    pub seed_override: Option<String>,
}

pub const DEFAULT_COUNT: usize = 100_000;

fn parse_poly(s: &str) -> Result<BinaryPolynomial, CliError> {
    s.parse().map_err(|e| CliError::Config(format!("polynomial {s:?}: {e}")))
}

fn check_seed(p: &BinaryPolynomial, hex: &str) -> Result<String, CliError> {
    let state = LfsrState::from_hex(p, hex).map_err(|e| CliError::Config(format!("seed {hex:?} for {p}: {e}")))?;
    if state.is_zero() {
        return Err(CliError::Config(format!("seed {hex:?} for {p}: all-zero state never leaves zero")));
    }
    Ok(state.to_hex())
}

impl RunConfig {
    /// Resolves defaults and validates every referenced polynomial and seed.
    pub fn resolve(o: &GenerateOptions) -> Result<Self, CliError> {
        let family = o.family.unwrap_or(FamilyArg::Gold);
        let p1 = parse_poly(o.poly.as_deref().unwrap_or(DEGREE89_TRINOMIAL))?;
        galois::validate_characteristic(&p1).map_err(|e| CliError::Config(e.to_string()))?;
        let (polynomials, r) = match family {
            FamilyArg::MSequence => {
                if o.poly2.is_some() || o.seed2.is_some() {
                    return Err(CliError::Config("--poly2/--seed2 apply to gold codes only".into()));
                }
                (vec![p1], o.r)
            }
            FamilyArg::Gold => {
                let r = o.r.unwrap_or(1);
                let p2 = match &o.poly2 {
                    Some(s) => parse_poly(s)?,
                    None if p1.degree() <= MAX_ORACLE_DEGREE => gold_partner(&p1, r).map_err(|e| CliError::Config(e.to_string()))?,
                    None if p1.to_string() == DEGREE89_TRINOMIAL && r == 1 => parse_poly(DEGREE89_PENTANOMIAL)?,
                    None => {
                        return Err(CliError::Config(format!(
                            "no default partner for degree {}; pass --poly2",
                            p1.degree()
                        )))
                    }
                };
                if p2.degree() != p1.degree() {
                    return Err(CliError::Config(format!("--poly2 has degree {}, expected {}", p2.degree(), p1.degree())));
                }
                galois::validate_characteristic(&p2).map_err(|e| CliError::Config(e.to_string()))?;
                (vec![p1, p2], Some(r))
            }
        };
        let given = [o.seed.as_deref(), o.seed2.as_deref()];
        let seeds = polynomials
            .iter()
            .zip(given)
            .map(|(p, s)| {
                let hex = o.seed_override.as_deref().or(s).unwrap_or(DEFAULT_SEED);
                check_seed(p, hex)
            })
            .collect::<Result<Vec<_>, _>>()?;
        if family == FamilyArg::Gold && polynomials[0] == polynomials[1] && seeds[0] == seeds[1] {
            return Err(CliError::Config("identical registers cancel to a constant sequence".into()));
        }
        let model = match o.model.unwrap_or(ModelArg::Binary) {
            ModelArg::Binary => {
                if o.bit_depth.is_some() || o.terms.is_some() {
                    return Err(CliError::Config("--B/--terms apply to the tausworthe model only".into()));
                }
                let cfg = BlockSumConfig {
                    overlapping: o.overlapping,
                    ..BlockSumConfig::new(o.block_len.unwrap_or(grng::DEFAULT_BLOCK_LEN))
                };
                cfg.validate().map_err(|e| CliError::Config(e.to_string()))?;
                ModelConfig::BinaryBlockSum(cfg)
            }
            ModelArg::Tausworthe => {
                if o.block_len.is_some() || o.overlapping {
                    return Err(CliError::Config("--M/--overlapping apply to the binary model only".into()));
                }
                let cfg = TauswortheConfig {
                    bit_depth: o.bit_depth.unwrap_or(grng::DEFAULT_BIT_DEPTH),
                    terms: o.terms.unwrap_or(grng::DEFAULT_TERMS),
                };
                cfg.validate().map_err(|e| CliError::Config(e.to_string()))?;
                ModelConfig::TauswortheClt(cfg)
            }
        };
        let count = o.count.unwrap_or(DEFAULT_COUNT);
        if count == 0 {
            return Err(CliError::Config("--T must be positive".into()));
        }
        let format = o.format.unwrap_or(Format::Csv);
        let output = o.output.clone().unwrap_or_else(|| PathBuf::from(format!("samples.{}", format.extension())));
        let cfg = RunConfig {
            warmup_bits: o.warmup.unwrap_or_else(|| default_warmup(polynomials[0].degree())),
            family,
            polynomials,
            seeds,
            r,
            model,
            count,
            output,
            format,
        };
        cfg.period_warning()?;
        Ok(cfg)
    }

    pub fn degree(&self) -> u32 {
        self.polynomials[0].degree()
    }

    /// Error when the stream period is too short for the block length, warning when it is marginal.
    pub fn period_warning(&self) -> Result<Option<String>, CliError> {
        match self.model {
            ModelConfig::BinaryBlockSum(c) => c.check_against_period(mls_period(self.degree())).map_err(|e| CliError::Config(e.to_string())),
            ModelConfig::TauswortheClt(_) => Ok(None),
        }
    }

    fn states(&self) -> Result<Vec<LfsrState>, CliError> {
        self.polynomials
            .iter()
            .zip(&self.seeds)
            .map(|(p, s)| LfsrState::from_hex(p, s).map_err(|e| CliError::Config(e.to_string())))
            .collect()
    }

    /// The bit stream after the warm-up discard.
    pub fn source(&self) -> Result<PnStream, CliError> {
        let st = self.states()?;
        let mut src = match self.family {
            FamilyArg::MSequence => PnStream::m_sequence(&self.polynomials[0], &st[0]),
            FamilyArg::Gold => PnStream::gold(&self.polynomials[0], &self.polynomials[1], &st[0], &st[1]),
        }
        .map_err(|e| CliError::Config(e.to_string()))?;
        src.skip(self.warmup_bits);
        Ok(src)
    }

    pub fn generate(&self) -> Result<GaussianSampleBlock, CliError> {
        let mut src = self.source()?;
        let block = match &self.model {
            ModelConfig::BinaryBlockSum(c) => grng::block_sum_gaussian(c, &mut src, self.count),
            ModelConfig::TauswortheClt(c) => grng::tausworthe_gaussian(c, &mut src, self.count),
        };
        block.map_err(|e| CliError::Config(e.to_string()))
    }
}

/// JSON written next to every sample file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub tool: String,
    pub version: String,
    pub config: RunConfig,
}

impl Sidecar {
    pub fn new(config: RunConfig) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
        }
    }
}

/// `samples.csv` -> `samples.csv.json`.
pub fn sidecar_path(samples: &Path) -> PathBuf {
    let mut s = samples.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

pub fn load_sidecar(samples: &Path) -> Result<Option<Sidecar>, CliError> {
    let path = sidecar_path(samples);
    if !path.exists() {
        return Ok(None);
    }
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
    serde_json::from_str(&text)
        .map(Some)
        .map_err(|e| CliError::Input(format!("{}: line {}, column {}: {e}", path.display(), e.line(), e.column())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_the_reference_experiment() {
        let c = RunConfig::resolve(&GenerateOptions::default()).unwrap();
        assert_eq!(c.family, FamilyArg::Gold);
        assert_eq!(c.polynomials[0].to_string(), DEGREE89_TRINOMIAL);
        assert_eq!(c.polynomials[1].to_string(), DEGREE89_PENTANOMIAL);
        assert_eq!(c.seeds, vec!["0x1", "0x1"]);
        assert_eq!(c.warmup_bits, DEFAULT_WARMUP_BITS);
        assert_eq!(c.count, 100_000);
        assert!(matches!(c.model, ModelConfig::BinaryBlockSum(b) if b.block_len == 256));
    }

    #[test]
    fn small_gold_partner_and_override() {
        let o = GenerateOptions {
            poly: Some("x^5 + x^2 + 1".into()),
            seed_override: Some("0x13".into()),
            seed: Some("0x2".into()),
            block_len: Some(4),
            ..GenerateOptions::default()
        };
        let c = RunConfig::resolve(&o).unwrap();
        assert_eq!(c.polynomials[1].to_string(), "x^5 + x^4 + x^3 + x^2 + 1");
        assert_eq!(c.seeds, vec!["0x13", "0x13"]);
        assert_eq!(c.warmup_bits, 0);
    }

    #[test]
    fn rejects_bad_configs() {
        let bad = [
            GenerateOptions { poly: Some("x^4 + x^2 + 1".into()), ..Default::default() },
            GenerateOptions { poly: Some("x^5 + x^2 + 1".into()), ..Default::default() },
            GenerateOptions { family: Some(FamilyArg::MSequence), poly2: Some("x^5 + x^2 + 1".into()), ..Default::default() },
            GenerateOptions { seed: Some("0x0".into()), ..Default::default() },
            GenerateOptions { model: Some(ModelArg::Tausworthe), bit_depth: Some(64), ..Default::default() },
            GenerateOptions { count: Some(0), ..Default::default() },
            GenerateOptions { poly: Some("x^10 + x^3 + 1".into()), r: Some(2), ..Default::default() },
        ];
        for o in bad {
            assert!(matches!(RunConfig::resolve(&o), Err(CliError::Config(_))), "{o:?}");
        }
    }

    #[test]
    fn sidecar_round_trips() {
        let c = RunConfig::resolve(&GenerateOptions { model: Some(ModelArg::Tausworthe), ..Default::default() }).unwrap();
        let json = serde_json::to_string(&Sidecar::new(c.clone())).unwrap();
        let back: Sidecar = serde_json::from_str(&json).unwrap();
        assert_eq!(back.config, c);
    }
}
