use std::path::PathBuf;

use clap::Args;
use rcldpc::sim::{emit_report, emit_throughput_report, SimReport, ThroughputReport};
use serde_json::json;

use crate::common::{ensure_parent, inputs, read_json, Format};
use crate::error::CliError;
use crate::manifest;

/// Either kind of JSON report; the throughput shape is tried first because
/// its fields are disjoint from a sweep's.
#[derive(serde::Deserialize)]
#[serde(untagged)]
enum AnyReport {
    Throughput(ThroughputReport),
    Sweep(SimReport),
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// A JSON report written by `simulate` or `throughput`.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: &ReportArgs) -> Result<(), CliError> {
    let (report, hash): (serde_json::Value, _) = read_json(&args.input)?;
    let report: AnyReport = serde_json::from_value(report).map_err(|e| {
        CliError::Data(format!(
            "{}: neither a simulation nor a throughput report ({e})",
            args.input.display()
        ))
    })?;
    ensure_parent(&args.out)?;
    let written = match &report {
        AnyReport::Throughput(r) => {
            emit_throughput_report(r, args.format.into(), &args.out).map(|_| "throughput")
        }
        AnyReport::Sweep(r) => emit_report(r, args.format.into(), &args.out).map(|_| "simulation"),
    };
    let kind = written.map_err(|e| CliError::from(e).context(args.out.display()))?;
    let config = json!({ "format": format!("{:?}", args.format).to_lowercase() });
    manifest::record(
        &args.out,
        "report",
        config,
        inputs([(args.input.as_path(), hash.as_str())]),
    )?;
    println!("{kind} report -> {}", args.out.display());
    Ok(())
}
