//! `modsat gen`: deterministic dataset generation.

use std::path::PathBuf;

use anyhow::Result;
use clap::Args as ClapArgs;

use modsat_bench::generate::{write_dataset, Family};
use modsat_bench::manifest::training_preset;

use super::usage;

#[derive(ClapArgs)]
pub struct Args {
    /// Instance family: random-3sat | pigeonhole | parity-chain.
    #[arg(long)]
    pub family: String,
    /// Output directory for instances and manifest.
    #[arg(long)]
    pub out: PathBuf,
    /// Number of instances.
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    /// Base seed; instance i uses seed + i.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// random-3sat: variable count.
    #[arg(long, default_value_t = 50)]
    pub vars: usize,
    /// random-3sat: explicit clause count (otherwise ratio applies).
    #[arg(long)]
    pub clauses: Option<usize>,
    /// random-3sat: clause/variable ratio.
    #[arg(long, default_value_t = 4.26)]
    pub ratio: f64,
    /// pigeonhole: pigeons.
    #[arg(long, default_value_t = 5)]
    pub pigeons: usize,
    /// pigeonhole: holes.
    #[arg(long, default_value_t = 4)]
    pub holes: usize,
    /// parity-chain: width.
    #[arg(long, default_value_t = 12)]
    pub width: usize,
    /// parity-chain: generate the unsatisfiable variant.
    #[arg(long)]
    pub unsat: bool,

    /// Training timeout recorded in the manifest (seconds).
    #[arg(long, default_value_t = 1.0)]
    pub training_timeout: f64,
    /// Hook-candidate indices recorded in the manifest, e.g. `2,5,6,7`.
    #[arg(long)]
    pub candidates: Option<String>,
    /// Use a named training preset for timeout and candidates (e.g. `eda`).
    #[arg(long)]
    pub preset: Option<String>,
}

pub fn run(args: Args) -> Result<i32> {
    let family = match args.family.as_str() {
        "random-3sat" => Family::Random3Sat {
            num_vars: args.vars,
            num_clauses: args.clauses,
            clause_ratio: args.ratio,
        },
        "pigeonhole" => Family::Pigeonhole {
            pigeons: args.pigeons,
            holes: args.holes,
        },
        "parity-chain" => Family::ParityChain {
            width: args.width,
            satisfiable: !args.unsat,
        },
        other => return Err(usage(format!("unknown family `{other}`"))),
    };
    let (timeout, candidates) = match &args.preset {
        Some(name) => training_preset(name)
            .ok_or_else(|| usage(format!("unknown training preset `{name}`")))?,
        None => {
            let candidates = match &args.candidates {
                Some(list) => list
                    .split(',')
                    .map(|s| {
                        s.trim()
                            .parse::<u8>()
                            .map_err(|_| usage(format!("bad candidate index `{s}`")))
                    })
                    .collect::<Result<Vec<u8>>>()?,
                None => vec![1, 2, 3, 4, 5, 6, 7],
            };
            (args.training_timeout, candidates)
        }
    };
    let manifest = write_dataset(
        &args.out, &family, args.count, args.seed, timeout, candidates,
    )
    .map_err(|e| usage(e.to_string()))?;
    println!(
        "wrote {} instances to {} (manifest.json, training timeout {}s)",
        manifest.instances.len(),
        args.out.display(),
        manifest.training_timeout_s
    );
    Ok(0)
}
