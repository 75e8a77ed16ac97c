//! Parsing of keys, IV modes, chaotic seed overrides and metric lists.

use std::path::{Path, PathBuf};

use chaos_aes::pipeline::{REFERENCE_IV, REFERENCE_KEY};
use chaos_aes::{ChaoticParams, CipherKey};
use clap::Args;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{io, CliError, Result};

#[derive(Args, Debug, Clone)]
pub struct KeyArgs {
    /// AES-128 key as 32 hex characters
    #[arg(long, value_name = "HEX", conflicts_with = "key_file")]
    pub key: Option<String>,
    /// File holding the raw 16-byte key
    #[arg(long, value_name = "PATH")]
    pub key_file: Option<PathBuf>,
}

impl KeyArgs {
    /// The key, or `fallback` when neither flag is given.
    pub fn resolve(&self, fallback: Option<CipherKey>) -> Result<CipherKey> {
        match (&self.key, &self.key_file) {
            (Some(hex), _) => parse_key_hex(hex),
            (None, Some(path)) => read_key_file(path),
            (None, None) => fallback.ok_or_else(|| {
                CliError::Usage("a key is required (--key HEX or --key-file PATH)".into())
            }),
        }
    }
}

pub fn parse_key_hex(s: &str) -> Result<CipherKey> {
    s.parse::<CipherKey>()
        .map_err(|e| CliError::Usage(format!("bad key {s:?}: {e} (expected 32 hex characters)")))
}

pub fn read_key_file(path: &Path) -> Result<CipherKey> {
    let bytes = std::fs::read(path).map_err(|e| io(path, e))?;
    CipherKey::from_slice(&bytes).map_err(|_| {
        CliError::Usage(format!(
            "{}: key file must hold exactly 16 bytes",
            path.display()
        ))
    })
}

pub fn reference_key() -> CipherKey {
    CipherKey(REFERENCE_KEY)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IvMode {
    Random,
    Paper,
    Explicit([u8; 16]),
}

impl std::str::FromStr for IvMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "random" => Ok(IvMode::Random),
            "paper" | "fixed" => Ok(IvMode::Paper),
            hex_iv => {
                let bytes = hex::decode(hex_iv).map_err(|e| format!("IV is not hex: {e}"))?;
                let iv: [u8; 16] = bytes
                    .try_into()
                    .map_err(|_| "IV must be 32 hex characters".to_string())?;
                Ok(IvMode::Explicit(iv))
            }
        }
    }
}

impl IvMode {
    pub fn resolve(self, rng: &mut impl Rng) -> [u8; 16] {
        match self {
            IvMode::Random => rng.gen(),
            IvMode::Paper => REFERENCE_IV,
            IvMode::Explicit(iv) => iv,
        }
    }
}

/// `mask=F,perm=F,shift=F,shuffle=F` plus optional `r`, `henon_x`,
/// `henon_y`, `henon_a`, `henon_b`; unspecified fields keep their defaults.
pub fn parse_seeds(s: &str) -> std::result::Result<ChaoticParams, String> {
    let mut p = ChaoticParams::default();
    for part in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| format!("expected NAME=VALUE, got {part:?}"))?;
        let v: f64 = value
            .trim()
            .parse()
            .map_err(|_| format!("{name}: {value:?} is not a number"))?;
        let slot = match name.trim() {
            "mask" => &mut p.mask_seed,
            "perm" => &mut p.perm_seed,
            "shift" => &mut p.shift_seed,
            "shuffle" => &mut p.shuffle_seed,
            "r" => &mut p.r,
            "henon_x" => &mut p.henon_x0,
            "henon_y" => &mut p.henon_y0,
            "henon_a" => &mut p.henon_a,
            "henon_b" => &mut p.henon_b,
            other => return Err(format!("unknown seed name {other:?}")),
        };
        *slot = v;
    }
    p.validate().map_err(|e| e.to_string())?;
    Ok(p)
}

pub fn rng(seed: Option<u64>) -> ChaCha8Rng {
    match seed {
        Some(s) => ChaCha8Rng::seed_from_u64(s),
        None => ChaCha8Rng::from_entropy(),
    }
}

pub const METRICS: [&str; 9] = [
    "entropy",
    "correlation",
    "npcr",
    "uaci",
    "mse",
    "psnr",
    "ssim",
    "homogeneity",
    "energy",
];

/// Comma-separated metric selection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricList(pub Vec<String>);

pub fn parse_metrics(s: &str) -> std::result::Result<MetricList, String> {
    let list: Vec<String> = s
        .split(',')
        .map(|m| m.trim().to_ascii_lowercase())
        .filter(|m| !m.is_empty())
        .collect();
    if list.iter().any(|m| m == "all") {
        return Ok(MetricList(METRICS.iter().map(|m| m.to_string()).collect()));
    }
    for m in &list {
        if !METRICS.contains(&m.as_str()) {
            return Err(format!(
                "unknown metric {m:?}; choose from {}",
                METRICS.join(",")
            ));
        }
    }
    Ok(MetricList(list))
}

/// Report fields behind a metric name.
pub fn metric_fields(metric: &str) -> &'static [&'static str] {
    match metric {
        "entropy" => &["plain_entropy", "entropy"],
        "correlation" => &["plain_correlation", "correlation"],
        "ssim" => &["wrong_key_ssim"],
        "npcr" => &["npcr"],
        "uaci" => &["uaci"],
        "mse" => &["mse"],
        "psnr" => &["psnr"],
        "homogeneity" => &["homogeneity"],
        "energy" => &["energy"],
        _ => &[],
    }
}
