use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use rcldpc::channel::SnrKind;
use rcldpc::sim::{emit_report, run_sweep, CodeUnderTest, SweepConfig};
use rcldpc::Rate;
use serde_json::json;

use crate::common::{
    inputs, load_code, load_ladder_dir, load_pattern_for, parse_rate, parse_snr_arg, read_json,
    Format, Precision, SnrGrid,
};
use crate::error::CliError;
use crate::manifest;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// E_b/N_0, per information bit.
    Ebn0,
    /// E_s/N_0, per transmitted symbol.
    Esn0,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Code to simulate (alist); the mother code when --pattern is given.
    #[arg(long, required_unless_present = "ladder", conflicts_with = "ladder")]
    pub code: Option<PathBuf>,
    /// Puncturing pattern applied to --code.
    #[arg(long, requires = "code")]
    pub pattern: Option<PathBuf>,
    /// Ladder directory written by `extend`; pick the member with --rate or --level.
    #[arg(long)]
    pub ladder: Option<PathBuf>,
    #[arg(long, value_parser = parse_rate, requires = "ladder", conflicts_with = "level")]
    pub rate: Option<Rate>,
    #[arg(long, requires = "ladder")]
    pub level: Option<usize>,
    /// Sweep config (JSON); the flags below override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// SNR grid in dB: comma list, start:step:stop ranges, or inf.
    #[arg(long, value_parser = parse_snr_arg, allow_hyphen_values = true)]
    pub snr_grid: Option<SnrGrid>,
    #[arg(long, value_enum)]
    pub snr_kind: Option<Kind>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// Stop a point after this many frame errors.
    #[arg(long)]
    pub stop_frame_errors: Option<u64>,
    /// Stop a point after this many frames.
    #[arg(long)]
    pub max_frames: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value = "f64")]
    pub precision: Precision,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Report file.
    #[arg(long)]
    pub out: PathBuf,
}

fn sweep_config(
    args: &SimulateArgs,
    ins: &mut Vec<(PathBuf, String)>,
) -> Result<SweepConfig, CliError> {
    let mut cfg = match &args.config {
        Some(path) => {
            let (cfg, hash) = read_json(path)?;
            ins.push((path.clone(), hash));
            cfg
        }
        None => SweepConfig::new(Vec::new(), 10_000, 100, 50, 1),
    };
    if let Some(grid) = &args.snr_grid {
        cfg.snr_db = grid.0.clone();
    }
    if let Some(kind) = args.snr_kind {
        cfg.snr_kind = match kind {
            Kind::Ebn0 => SnrKind::EbN0,
            Kind::Esn0 => SnrKind::EsN0,
        };
    }
    cfg.max_iters = args.max_iters.unwrap_or(cfg.max_iters);
    cfg.min_frame_errors = args.stop_frame_errors.unwrap_or(cfg.min_frame_errors);
    cfg.max_frames = args.max_frames.unwrap_or(cfg.max_frames);
    cfg.seed = args.seed.unwrap_or(cfg.seed);
    cfg.validate()?;
    Ok(cfg)
}

fn label(path: &Path) -> String {
    path.file_stem().map_or_else(
        || path.display().to_string(),
        |s| s.to_string_lossy().into_owned(),
    )
}

fn code_under_test(
    args: &SimulateArgs,
    ins: &mut Vec<(PathBuf, String)>,
) -> Result<CodeUnderTest, CliError> {
    if let Some(dir) = &args.ladder {
        let (ladder, _, hash) = load_ladder_dir(dir)?;
        ins.push((dir.join("manifest.json"), hash));
        let level = match (args.level, args.rate) {
            (Some(l), _) => ladder.level(l).ok_or_else(|| {
                CliError::Config(format!("the ladder has levels 1..={}", ladder.levels.len()))
            })?,
            (None, Some(r)) => ladder
                .level_for_rate(r)
                .ok_or_else(|| CliError::Config(format!("no ladder level has rate {r}")))?,
            (None, None) => ladder.deepest(),
        };
        let name = format!("{} level {}", label(dir), level.level);
        return Ok(CodeUnderTest::new(name, level.h.clone(), level.g.clone())?);
    }
    let path = args
        .code
        .as_ref()
        .expect("clap requires --code without --ladder");
    let code = load_code(path)?;
    ins.push((path.clone(), code.file_hash.clone()));
    match &args.pattern {
        None => Ok(CodeUnderTest::new(label(path), code.h, code.g)?),
        Some(pp) => {
            let (pattern, hash) = load_pattern_for(pp, &code)?;
            ins.push((pp.clone(), hash));
            let name = format!("{} punctured by {}", label(path), label(pp));
            Ok(CodeUnderTest::new(name, code.h, code.g)?.with_pattern(&pattern)?)
        }
    }
}

pub fn run(args: &SimulateArgs) -> Result<(), CliError> {
    let mut ins = Vec::new();
    let code = code_under_test(args, &mut ins)?;
    let cfg = sweep_config(args, &mut ins)?;
    let report = match args.precision {
        Precision::F64 => run_sweep::<f64>(&code, &cfg)?,
        Precision::F32 => run_sweep::<f32>(&code, &cfg)?,
    };
    crate::common::ensure_parent(&args.out)?;
    emit_report(&report, args.format.into(), &args.out)
        .map_err(|e| CliError::from(e).context(args.out.display()))?;
    let config = json!({ "sweep": cfg, "precision": report.precision, "ladder_level": args.level, "ladder_rate": args.rate });
    manifest::record(
        &args.out,
        "simulate",
        config,
        inputs(ins.iter().map(|(p, h)| (p.as_path(), h.as_str()))),
    )?;

    println!("{} (R = {}):", report.code.label, report.code.rate);
    for p in &report.points {
        println!(
            "  {:>6} dB  frames {:>7}  BER {:.3e}  FER {:.3e}  iters {:.1}",
            p.snr_db, p.frames, p.ber, p.fer, p.mean_iters
        );
    }
    Ok(())
}
