use std::path::PathBuf;

use clap::Args;
use rcldpc::sim::{emit_throughput_report, run_arq_throughput, ArqConfig, ArqPolicy};
use serde_json::json;

use crate::common::{
    ensure_parent, inputs, load_code, load_ladder_dir, load_pattern_for, parse_snr_arg, read_json,
    Format, Precision, SnrGrid,
};
use crate::error::CliError;
use crate::manifest;

#[derive(Debug, Args)]
pub struct ThroughputArgs {
    /// Mother code (alist).
    #[arg(long)]
    pub code: PathBuf,
    /// Puncturing pattern of the mother; its prefixes give the high-rate stages.
    #[arg(long)]
    pub pattern: Option<PathBuf>,
    /// Punctured-bit counts of the high-rate stages, strictly decreasing
    /// (default: the whole pattern only).
    #[arg(long, value_delimiter = ',', requires = "pattern")]
    pub punctures: Option<Vec<usize>>,
    /// Ladder directory built on the same mother; its levels follow the mother.
    #[arg(long)]
    pub ladder: Option<PathBuf>,
    /// Throughput config (JSON: es_n0_db, frames, max_iters, seed); the flags
    /// below override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// E_s/N_0 grid in dB.
    #[arg(long, value_parser = parse_snr_arg, allow_hyphen_values = true)]
    pub snr_grid: Option<SnrGrid>,
    /// Frames per SNR point.
    #[arg(long)]
    pub frames: Option<u64>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// Attempts per frame; each repeats the whole ladder.
    #[arg(long, default_value_t = 2)]
    pub max_transmissions: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value = "f64")]
    pub precision: Precision,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub out: PathBuf,
}

fn arq_config(
    args: &ThroughputArgs,
    ins: &mut Vec<(PathBuf, String)>,
) -> Result<ArqConfig, CliError> {
    let mut cfg = match &args.config {
        Some(path) => {
            let (cfg, hash) = read_json(path)?;
            ins.push((path.clone(), hash));
            cfg
        }
        None => ArqConfig {
            es_n0_db: Vec::new(),
            frames: 1000,
            max_iters: 50,
            seed: 1,
        },
    };
    if let Some(grid) = &args.snr_grid {
        cfg.es_n0_db = grid.0.clone();
    }
    cfg.frames = args.frames.unwrap_or(cfg.frames);
    cfg.max_iters = args.max_iters.unwrap_or(cfg.max_iters);
    cfg.seed = args.seed.unwrap_or(cfg.seed);
    Ok(cfg)
}

pub fn run(args: &ThroughputArgs) -> Result<(), CliError> {
    let code = load_code(&args.code)?;
    let mut ins = vec![(args.code.clone(), code.file_hash.clone())];
    let pattern = match &args.pattern {
        Some(path) => {
            let (pattern, hash) = load_pattern_for(path, &code)?;
            ins.push((path.clone(), hash));
            Some(pattern)
        }
        None => None,
    };
    let punctures = match (&pattern, &args.punctures) {
        (Some(_), Some(list)) => list.clone(),
        (Some(p), None) => vec![p.len()],
        (None, _) => Vec::new(),
    };
    let ladder = match &args.ladder {
        Some(dir) => {
            let (ladder, _, hash) = load_ladder_dir(dir)?;
            ins.push((dir.join("manifest.json"), hash));
            Some(ladder)
        }
        None => None,
    };
    let policy = ArqPolicy::family(
        &code.h,
        &code.g,
        pattern.as_ref().map(|p| (p, punctures.as_slice())),
        ladder.as_ref(),
        args.max_transmissions,
    )?;
    let cfg = arq_config(args, &mut ins)?;
    let report = match args.precision {
        Precision::F64 => run_arq_throughput::<f64>(&policy, &cfg)?,
        Precision::F32 => run_arq_throughput::<f32>(&policy, &cfg)?,
    };
    ensure_parent(&args.out)?;
    emit_throughput_report(&report, args.format.into(), &args.out)
        .map_err(|e| CliError::from(e).context(args.out.display()))?;
    let config = json!({
        "arq": cfg,
        "punctures": punctures,
        "max_transmissions": args.max_transmissions,
        "precision": format!("{:?}", args.precision).to_lowercase(),
    });
    manifest::record(
        &args.out,
        "throughput",
        config,
        inputs(ins.iter().map(|(p, h)| (p.as_path(), h.as_str()))),
    )?;

    let stages: Vec<&str> = report.stages.iter().map(|s| s.label.as_str()).collect();
    println!("stages: {}", stages.join(" -> "));
    for p in &report.points {
        println!(
            "  {:>6} dB  throughput {:.4}  capacity {:.4}",
            p.es_n0_db, p.throughput, p.capacity
        );
    }
    Ok(())
}
