use std::path::PathBuf;

use clap::Args;
use rcldpc::construction::{construction_report, peg_construct, ConstructionConfig};
use rcldpc::gf2::{content_hash, information_first, save_alist, systematize};
use serde_json::json;

use crate::common::{ensure_parent, inputs, read_json, write_json};
use crate::error::CliError;
use crate::manifest;

#[derive(Debug, Args)]
pub struct ConstructArgs {
    /// Construction config (JSON: N, M, mu, nu, seed, ace_depth, ace_threshold).
    #[arg(long)]
    pub config: PathBuf,
    /// Seed for the PEG tiebreaks; overrides the config's seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output alist file. A JSON report goes next to it as <stem>.report.json.
    #[arg(long)]
    pub out: PathBuf,
    /// Remove linearly dependent rows (with a warning) instead of failing.
    #[arg(long)]
    pub drop_dependent_rows: bool,
}

pub fn run(args: &ConstructArgs) -> Result<(), CliError> {
    let (mut cfg, config_hash): (ConstructionConfig, _) = read_json(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let mut h = peg_construct(&cfg)?;
    let mut dropped = Vec::new();
    if let Err(deficient) = systematize(&h) {
        if !args.drop_dependent_rows {
            return Err(CliError::Data(format!(
                "{deficient} (pass --drop-dependent-rows to remove them)"
            )));
        }
        log::warn!(
            "dropping {} dependent rows: {:?}",
            deficient.dependent_rows.len(),
            deficient.dependent_rows
        );
        dropped = deficient.dependent_rows;
        h = h.without_rows(&dropped);
        h = information_first(&h).expect("dependent rows were removed");
    }

    ensure_parent(&args.out)?;
    save_alist(&h, &args.out).map_err(|e| CliError::from(e).context(args.out.display()))?;
    let summary = construction_report(&h);
    let report_path = args.out.with_extension("report.json");
    let report = json!({
        "code": args.out.display().to_string(),
        "hash": content_hash(&h),
        "config": cfg,
        "dropped_rows": dropped,
        "summary": summary,
    });
    write_json(&report_path, &report)?;

    let config = serde_json::to_value(&cfg)?;
    let ins = inputs([(args.config.as_path(), config_hash.as_str())]);
    manifest::record(&args.out, "construct", config.clone(), ins.clone())?;
    manifest::record(&report_path, "construct", config, ins)?;
    println!(
        "constructed N={} M={} rank={} girth={} -> {}",
        summary.n,
        summary.m,
        summary.rank,
        summary.girth.map_or("none".into(), |g| g.to_string()),
        args.out.display()
    );
    Ok(())
}
