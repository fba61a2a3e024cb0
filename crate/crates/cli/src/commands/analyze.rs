use std::io::Write;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use rcldpc::cycles::{
    census_report, count_cycles, count_cycles_from, residual_graph, StatsPopulation,
};
use serde_json::json;

use crate::common::{ensure_parent, inputs, load_code, load_pattern_for, write_json, Format};
use crate::error::CliError;
use crate::manifest;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Population {
    /// Mean and deviation over all N variable nodes.
    AllNodes,
    /// Only over nodes lying on at least one cycle of the length.
    OnCycle,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Parity-check matrix (alist).
    #[arg(long)]
    pub code: PathBuf,
    /// Analyze the residual graph left after removing this pattern's columns,
    /// counted at the mother code's girth.
    #[arg(long)]
    pub pattern: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "all-nodes")]
    pub population: Population,
    /// Output file: census JSON, or a per-node CSV table.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

pub fn run(args: &AnalyzeArgs) -> Result<(), CliError> {
    let code = load_code(&args.code)?;
    let population = match args.population {
        Population::AllNodes => StatsPopulation::AllNodes,
        Population::OnCycle => StatsPopulation::OnCycle,
    };
    let mut ins = vec![(args.code.as_path(), code.file_hash.clone())];
    let (census, columns) = match &args.pattern {
        None => (
            count_cycles(&code.h),
            (0..code.h.num_cols()).collect::<Vec<_>>(),
        ),
        Some(path) => {
            let (pattern, hash) = load_pattern_for(path, &code)?;
            ins.push((path.as_path(), hash));
            let mother = count_cycles(&code.h);
            let base = mother.girth.ok_or_else(|| {
                CliError::Data("the mother code has no cycles; nothing to compare".into())
            })?;
            let removed = pattern.sorted();
            let kept = (0..code.h.num_cols())
                .filter(|v| removed.binary_search(v).is_err())
                .collect();
            (
                count_cycles_from(&residual_graph(&code.h, &pattern.indices), base),
                kept,
            )
        }
    };
    let report = census_report(&census, population);

    ensure_parent(&args.out)?;
    match args.format {
        Format::Json => write_json(
            &args.out,
            &json!({
                "code": args.code.display().to_string(),
                "pattern": args.pattern.as_ref().map(|p| p.display().to_string()),
                "columns": columns,
                "census": report,
            }),
        )?,
        Format::Csv => {
            let mut buf = Vec::new();
            let [a, b, c] = census.lengths().unwrap_or([0, 0, 0]);
            writeln!(buf, "column,n{a},n{b},n{c},alpha{a},alpha{b},alpha{c}")?;
            let cell = |x: Option<f64>| x.map_or(String::new(), |v| v.to_string());
            for (col, node) in columns.iter().zip(&report.per_node) {
                writeln!(
                    buf,
                    "{col},{},{},{},{},{},{}",
                    node.counts[0],
                    node.counts[1],
                    node.counts[2],
                    cell(node.alpha[0]),
                    cell(node.alpha[1]),
                    cell(node.alpha[2])
                )?;
            }
            std::fs::write(&args.out, buf)
                .map_err(|e| CliError::from(e).context(args.out.display()))?;
        }
    }
    let config = json!({ "population": format!("{:?}", args.population), "pattern": args.pattern });
    manifest::record(
        &args.out,
        "analyze",
        config,
        inputs(ins.iter().map(|(p, h)| (*p, h.as_str()))),
    )?;

    match census.girth {
        None => println!("acyclic graph"),
        Some(g) => {
            let stats: Vec<String> = report
                .lengths
                .values()
                .map(|s| {
                    format!(
                        "N_{}={} mu={:.3} sigma={:.3}",
                        s.length, s.total, s.mean, s.std_dev
                    )
                })
                .collect();
            println!("girth {g}; {}", stats.join("; "));
        }
    }
    Ok(())
}
