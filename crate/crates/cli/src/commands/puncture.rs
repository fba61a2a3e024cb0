use std::path::PathBuf;

use clap::{Args, ValueEnum};
use rcldpc::puncturing::{
    ace_puncture, cc_puncture, punctures_for_rate, save_pattern, sim_puncture, CcOrder,
    PuncturingPattern, SimPuncturingConfig,
};
use rcldpc::Rate;
use serde_json::json;

use crate::common::{
    ensure_parent, inputs, load_code, parse_rate, parse_snr_arg, read_json, write_json, Precision,
    SnrGrid,
};
use crate::error::CliError;
use crate::manifest;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PunctureScheme {
    /// Fewest short cycles left in the residual graph.
    Cc,
    /// Largest ACE values among the punctured nodes; needs an irregular code.
    Ace,
    /// Monte Carlo search over random patterns.
    Sim,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Order {
    Forward,
    Reverse,
}

#[derive(Debug, Args)]
pub struct PunctureArgs {
    /// Mother code (alist).
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long, value_enum)]
    pub scheme: PunctureScheme,
    /// Rate after puncturing (e.g. 5/8 or 0.625); P = N − K/R′ rounded.
    #[arg(long, value_parser = parse_rate, required_unless_present = "count", conflicts_with = "count")]
    pub target_rate: Option<Rate>,
    /// Number of punctured bits P, instead of a target rate.
    #[arg(long)]
    pub count: Option<usize>,
    /// Output pattern (JSON). The SIM scheme also writes <stem>.search.json.
    #[arg(long)]
    pub out: PathBuf,
    /// CC scheme: order in which girth-cycle counts are ranked. `reverse`
    /// exists to show how much worse the opposite ranking is.
    #[arg(long, alias = "order", value_enum, default_value = "forward")]
    pub cc_order: Order,
    /// SIM scheme: JSON config {q, snr_db, repetitions, training_bits, max_iters, seed};
    /// the flags below override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// SIM scheme: number of random candidate patterns Q.
    #[arg(long)]
    pub q: Option<usize>,
    /// SIM scheme: E_b/N_0 grid in dB (comma list or start:step:stop).
    #[arg(long, value_parser = parse_snr_arg, allow_hyphen_values = true)]
    pub snr_grid: Option<SnrGrid>,
    /// SIM scheme: repetitions per grid point.
    #[arg(long)]
    pub repetitions: Option<usize>,
    /// SIM scheme: information bits per trial.
    #[arg(long)]
    pub training_bits: Option<usize>,
    /// SIM scheme: decoder iteration limit.
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// SIM scheme: seed for patterns and frames.
    #[arg(long)]
    pub seed: Option<u64>,
    /// SIM scheme: decoder arithmetic.
    #[arg(long, value_enum, default_value = "f64")]
    pub precision: Precision,
}

fn sim_config(args: &PunctureArgs) -> Result<(SimPuncturingConfig, Option<String>), CliError> {
    let (mut cfg, hash) = match &args.config {
        Some(path) => {
            let (cfg, hash) = read_json(path)?;
            (cfg, Some(hash))
        }
        None => (
            SimPuncturingConfig {
                q: 50,
                snr_db: Vec::new(),
                repetitions: 3,
                training_bits: 1000,
                max_iters: 60,
                seed: 1,
            },
            None,
        ),
    };
    cfg.q = args.q.unwrap_or(cfg.q);
    cfg.snr_db = args.snr_grid.clone().map_or(cfg.snr_db, |g| g.0);
    cfg.repetitions = args.repetitions.unwrap_or(cfg.repetitions);
    cfg.training_bits = args.training_bits.unwrap_or(cfg.training_bits);
    cfg.max_iters = args.max_iters.unwrap_or(cfg.max_iters);
    cfg.seed = args.seed.unwrap_or(cfg.seed);
    if cfg.snr_db.is_empty() {
        return Err(CliError::Config(
            "the SIM scheme needs an SNR grid (--snr-grid or config snr_db)".into(),
        ));
    }
    Ok((cfg, hash))
}

pub fn run(args: &PunctureArgs) -> Result<(), CliError> {
    let code = load_code(&args.code)?;
    let (n, k) = (code.h.num_cols(), code.g.k());
    if code
        .g
        .info_positions()
        .iter()
        .enumerate()
        .any(|(i, &p)| i != p)
    {
        return Err(CliError::Data(format!(
            "{}: information bits are not in the first K columns; construct the code with this tool",
            args.code.display()
        )));
    }
    let p = match (args.target_rate, args.count) {
        (_, Some(p)) => p,
        (Some(rate), None) => {
            let mother = Rate::new(k as u64, n as u64);
            if rate <= mother || rate >= Rate::from_integer(1) {
                return Err(CliError::Config(format!(
                    "target rate {rate} must lie strictly between {mother} and 1"
                )));
            }
            let (p, exact) = punctures_for_rate(n, k, rate);
            if !exact {
                log::warn!(
                    "rate {rate} is not reachable exactly; P = {p} gives {}",
                    Rate::new(k as u64, (n - p) as u64)
                );
            }
            p
        }
        (None, None) => unreachable!("clap requires one of them"),
    };

    let mut ins = vec![(args.code.as_path(), code.file_hash.clone())];
    let mut config = json!({ "scheme": format!("{:?}", args.scheme).to_lowercase(), "P": p });
    let pattern: PuncturingPattern = match args.scheme {
        PunctureScheme::Cc => {
            let order = match args.cc_order {
                Order::Forward => CcOrder::Forward,
                Order::Reverse => CcOrder::Reverse,
            };
            config["cc_order"] = json!(format!("{:?}", args.cc_order).to_lowercase());
            cc_puncture(&code.h, k, p, order)?
        }
        PunctureScheme::Ace => ace_puncture(&code.h, k, p)?,
        PunctureScheme::Sim => {
            let (cfg, hash) = sim_config(args)?;
            if let (Some(path), Some(hash)) = (&args.config, hash) {
                ins.push((path.as_path(), hash));
            }
            let search = match args.precision {
                Precision::F64 => sim_puncture::<f64>(&code.h, &code.g, k, p, &cfg)?,
                Precision::F32 => sim_puncture::<f32>(&code.h, &code.g, k, p, &cfg)?,
            };
            let search_path = args.out.with_extension("search.json");
            write_json(&search_path, &search)?;
            config["sim"] = serde_json::to_value(&cfg)?;
            manifest::record(
                &search_path,
                "puncture",
                config.clone(),
                inputs(ins.iter().map(|(p, h)| (*p, h.as_str()))),
            )?;
            search.pattern
        }
    };

    ensure_parent(&args.out)?;
    save_pattern(&pattern, &args.out).map_err(|e| CliError::from(e).context(args.out.display()))?;
    manifest::record(
        &args.out,
        "puncture",
        config,
        inputs(ins.iter().map(|(p, h)| (*p, h.as_str()))),
    )?;
    println!(
        "{} pattern: P={} R'={} -> {}",
        pattern.scheme,
        pattern.len(),
        pattern.rate(),
        args.out.display()
    );
    Ok(())
}
