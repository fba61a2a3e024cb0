use std::path::PathBuf;

use clap::{Args, ValueEnum};
use rcldpc::construction::DegreeDistribution;
use rcldpc::extension::{
    default_distributions, design_extension, plan_levels, save_ladder, ExtensionScheme,
};
use rcldpc::Rate;
use serde_json::json;

use crate::common::{inputs, load_code, parse_rate, read_json};
use crate::error::CliError;
use crate::manifest;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scheme {
    /// Fewest girth-length cycles in the submatrix.
    Cc,
    /// Largest average ACE of the girth-length cycles.
    Ace,
    /// Random edges with the degrees of the ACE choice.
    Random,
}

impl From<Scheme> for ExtensionScheme {
    fn from(s: Scheme) -> Self {
        match s {
            Scheme::Cc => ExtensionScheme::Cc,
            Scheme::Ace => ExtensionScheme::Ace,
            Scheme::Random => ExtensionScheme::Random,
        }
    }
}

#[derive(Debug, Args)]
pub struct ExtendArgs {
    /// Mother code (alist).
    #[arg(long)]
    pub code: PathBuf,
    /// Target rates below the mother rate, e.g. 5/12,5/13,5/14.
    #[arg(long, value_parser = parse_rate, value_delimiter = ',', required = true)]
    pub levels: Vec<Rate>,
    #[arg(long, value_enum, default_value = "ace")]
    pub scheme: Scheme,
    /// JSON list of degree distributions for the B×B submatrix; a built-in
    /// set is used otherwise.
    #[arg(long)]
    pub distributions: Option<PathBuf>,
    #[arg(long, default_value_t = 7)]
    pub dv_max: usize,
    #[arg(long, default_value_t = 7)]
    pub dc_max: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Output directory for the ladder.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: &ExtendArgs) -> Result<(), CliError> {
    let code = load_code(&args.code)?;
    let targets: Vec<Rate> = args.levels.clone();
    let mut ins = vec![(args.code.as_path(), code.file_hash.clone())];
    let distributions: Vec<DegreeDistribution> = match &args.distributions {
        Some(path) => {
            let (d, hash) = read_json(path)?;
            ins.push((path.as_path(), hash));
            d
        }
        None => default_distributions(),
    };
    let plan = plan_levels(code.h.num_rows(), code.h.num_cols(), code.g.k(), &targets)?;
    let design = design_extension(
        &code.h,
        &plan,
        args.scheme.into(),
        &distributions,
        args.dv_max,
        args.dc_max,
        args.seed,
    )?;

    let config = json!({
        "scheme": design.scheme,
        "targets": targets,
        "dv_max": args.dv_max,
        "dc_max": args.dc_max,
        "seed": args.seed,
        "distributions": args.distributions,
    });
    let provenance = json!({
        "config": config,
        "mother": args.code.display().to_string(),
        "selected": design.selected,
        "candidates": design.candidates,
    });
    save_ladder(&design.ladder, &args.out, provenance)
        .map_err(|e| CliError::from(e).context(args.out.display()))?;
    manifest::record(
        &args.out.join("manifest.json"),
        "extend",
        config,
        inputs(ins.iter().map(|(p, h)| (*p, h.as_str()))),
    )?;

    let chosen = &design.candidates[design.selected];
    println!(
        "B={} depth={} ({} scheme, candidate {}: girth {}, N_g {}) -> {}",
        plan.b,
        plan.depth(),
        design.scheme,
        chosen.index,
        chosen.girth.map_or("none".into(), |g| g.to_string()),
        chosen.girth_cycles,
        args.out.display()
    );
    for (rate, level) in plan.targets.iter().zip(&plan.target_levels) {
        println!("  {rate}: level {level}");
    }
    Ok(())
}
