//! Argument parsing and file helpers shared by the subcommands.

use std::collections::BTreeMap;
use std::path::Path;

use clap::ValueEnum;
use rcldpc::extension::{load_ladder, ExtensionLadder, LadderManifest};
use rcldpc::gf2::{load_alist, systematize, GeneratorMatrix, SparseBinaryMatrix};
use rcldpc::puncturing::{load_pattern, PuncturingPattern};
use rcldpc::sim::ReportFormat;
use rcldpc::Rate;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::CliError;
use crate::manifest;

/// `5/8`, `5` or a decimal such as `0.625`.
pub fn parse_rate(s: &str) -> Result<Rate, String> {
    let s = s.trim();
    if let Ok(r) = s.parse::<Rate>() {
        return Ok(r);
    }
    let (whole, frac) = s
        .split_once('.')
        .ok_or_else(|| format!("{s:?} is not a rate"))?;
    if frac.is_empty() || frac.len() > 12 || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("{s:?} is not a rate"));
    }
    let whole: u64 = if whole.is_empty() {
        0
    } else {
        whole.parse().map_err(|_| format!("{s:?} is not a rate"))?
    };
    let scale = 10u64.pow(frac.len() as u32);
    let frac: u64 = frac.parse().map_err(|_| format!("{s:?} is not a rate"))?;
    Ok(Rate::new(whole * scale + frac, scale))
}

/// SNR values in dB, as given on the command line.
#[derive(Debug, Clone, PartialEq)]
pub struct SnrGrid(pub Vec<f64>);

pub fn parse_snr_arg(s: &str) -> Result<SnrGrid, String> {
    parse_snr_grid(s).map(SnrGrid)
}

/// Comma-separated values, each a number, `inf`, or an inclusive range
/// `start:step:stop`.
pub fn parse_snr_grid(s: &str) -> Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim) {
        let parts: Vec<&str> = item.split(':').collect();
        let num = |t: &str| -> Result<f64, String> {
            match t.trim() {
                "inf" | "+inf" => Ok(f64::INFINITY),
                v => v
                    .parse::<f64>()
                    .ok()
                    .filter(|x| !x.is_nan())
                    .ok_or_else(|| format!("bad SNR value {v:?}")),
            }
        };
        match parts.as_slice() {
            [v] => out.push(num(v)?),
            [a, step, b] => {
                let (a, step, b) = (num(a)?, num(step)?, num(b)?);
                if !(step > 0.0 && a.is_finite() && b.is_finite() && b >= a) {
                    return Err(format!("bad SNR range {item:?}"));
                }
                let count = ((b - a) / step + 1e-9).floor() as usize;
                // stepping by multiplication keeps the values free of accumulated error
                out.extend((0..=count).map(|i| ((a + i as f64 * step) * 1e9).round() / 1e9));
            }
            _ => return Err(format!("bad SNR grid item {item:?}")),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => ReportFormat::Csv,
            Format::Json => ReportFormat::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Precision {
    F64,
    F32,
}

/// A parity-check matrix read from disk, with its systematic encoder.
pub struct LoadedCode {
    pub file_hash: String,
    pub h: SparseBinaryMatrix,
    pub g: GeneratorMatrix,
}

pub fn load_code(path: &Path) -> Result<LoadedCode, CliError> {
    let file_hash = manifest::verify(path)?;
    let h = load_alist(path).map_err(|e| CliError::from(e).context(path.display()))?;
    let g = systematize(&h).map_err(|e| {
        CliError::from(e).context(format!(
            "{} (rebuild it with `construct --drop-dependent-rows`)",
            path.display()
        ))
    })?;
    Ok(LoadedCode { file_hash, h, g })
}

pub fn load_pattern_for(
    path: &Path,
    code: &LoadedCode,
) -> Result<(PuncturingPattern, String), CliError> {
    let hash = manifest::verify(path)?;
    let pattern =
        load_pattern(path, &code.h).map_err(|e| CliError::from(e).context(path.display()))?;
    Ok((pattern, hash))
}

pub fn load_ladder_dir(dir: &Path) -> Result<(ExtensionLadder, LadderManifest, String), CliError> {
    let hash = manifest::verify(&dir.join("manifest.json"))?;
    let (ladder, m) = load_ladder(dir).map_err(|e| CliError::from(e).context(dir.display()))?;
    Ok((ladder, m, hash))
}

/// A JSON configuration file and its hash.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<(T, String), CliError> {
    let hash = manifest::verify(path)?;
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::from(e).context(path.display()))?;
    let value = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    Ok((value, hash))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    ensure_parent(path)?;
    std::fs::write(path, serde_json::to_string_pretty(value)? + "\n")
        .map_err(|e| CliError::from(e).context(path.display()))
}

pub fn ensure_parent(path: &Path) -> Result<(), CliError> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => {
            std::fs::create_dir_all(dir).map_err(|e| CliError::from(e).context(dir.display()))
        }
        _ => Ok(()),
    }
}

/// Input map for a manifest entry.
pub fn inputs<'a>(
    items: impl IntoIterator<Item = (&'a Path, &'a str)>,
) -> BTreeMap<String, String> {
    items
        .into_iter()
        .map(|(p, h)| (p.display().to_string(), h.to_string()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rates() {
        assert_eq!(parse_rate("5/8").unwrap(), Rate::new(5, 8));
        assert_eq!(parse_rate("0.625").unwrap(), Rate::new(5, 8));
        assert_eq!(parse_rate("1").unwrap(), Rate::new(1, 1));
        assert!(parse_rate("five").is_err());
        assert!(parse_rate("0.").is_err());
    }

    #[test]
    fn snr_grids() {
        assert_eq!(
            parse_snr_grid("1,1.5, inf").unwrap(),
            vec![1.0, 1.5, f64::INFINITY]
        );
        assert_eq!(
            parse_snr_grid("0:0.1:0.3").unwrap(),
            vec![0.0, 0.1, 0.2, 0.3]
        );
        assert_eq!(
            parse_snr_grid("-1:0.5:0,2").unwrap(),
            vec![-1.0, -0.5, 0.0, 2.0]
        );
        assert!(parse_snr_grid("1:0:2").is_err());
        assert!(parse_snr_grid("x").is_err());
        assert!(parse_snr_grid("nan").is_err());
    }
}
