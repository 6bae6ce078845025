//! `modsat solve`: SAT-competition style output and exit codes.

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args as ClapArgs;
use serde::Serialize;

use modsat_core::cnf::parse_dimacs;
use modsat_core::solver::{SolveStatus, Solver, Stats};
use modsat_core::Var;

use super::{load_config, load_suite, solver_config, usage, write_json};

#[derive(ClapArgs)]
pub struct Args {
    /// DIMACS CNF file.
    pub instance: PathBuf,
    /// Heuristic suite file; defaults to all baselines.
    #[arg(long)]
    pub suite: Option<PathBuf>,
    /// Wall-clock timeout in seconds.
    #[arg(long)]
    pub timeout: Option<f64>,
    /// RNG seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Reject instances whose header clause count disagrees.
    #[arg(long)]
    pub strict: bool,
    /// Enable recursive learnt-clause minimization.
    #[arg(long)]
    pub ccmin: bool,
    /// Suppress the model (v lines).
    #[arg(long)]
    pub no_model: bool,
    /// Write a JSON result (status, stats, model) here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Shared run configuration file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Serialize)]
struct SolveDoc {
    status: String,
    wall_time: f64,
    stats: Stats,
    model: Option<Vec<i64>>,
}

pub fn run(args: Args) -> Result<i32> {
    let config = load_config(&args.config)?;
    let text = std::fs::read_to_string(&args.instance)
        .with_context(|| format!("reading {}", args.instance.display()))?;
    let parsed = parse_dimacs(&text, args.strict).map_err(|e| usage(e.to_string()))?;
    if parsed.clause_count_mismatch {
        println!("c warning: clause count differs from header");
    }
    if parsed.tautologies_dropped > 0 {
        println!(
            "c note: dropped {} tautological clauses",
            parsed.tautologies_dropped
        );
    }

    let suite = load_suite(args.suite.as_deref().or(config.suite.as_deref()))?;
    let mut cfg = solver_config(config.solver.clone(), args.seed.or(config.seed))?;
    cfg.timeout_s = args.timeout.or(config.timeout_s);
    cfg.ccmin |= args.ccmin;

    let mut solver = Solver::new(&parsed.formula, cfg);
    let result = solver
        .solve(&suite)
        .map_err(|fault| anyhow::anyhow!("{fault}"))?;

    println!(
        "c conflicts={} decisions={} propagations={} restarts={}",
        result.stats.conflicts,
        result.stats.decisions,
        result.stats.propagations,
        result.stats.restarts
    );
    let model_lits = result.model.as_ref().map(|m| {
        (0..parsed.formula.num_vars)
            .map(|i| {
                let v = Var(i as u32);
                let positive = m.get(v).unwrap_or(false);
                if positive {
                    i as i64 + 1
                } else {
                    -(i as i64 + 1)
                }
            })
            .collect::<Vec<i64>>()
    });

    let (line, code) = match result.status {
        SolveStatus::Sat => ("s SATISFIABLE", 10),
        SolveStatus::Unsat => ("s UNSATISFIABLE", 20),
        SolveStatus::Unknown => ("s UNKNOWN", 0),
    };
    println!("{line}");
    if let (Some(lits), false) = (&model_lits, args.no_model) {
        let mut line = String::from("v");
        for &l in lits {
            if line.len() > 70 {
                println!("{line}");
                line = String::from("v");
            }
            line.push_str(&format!(" {l}"));
        }
        println!("{line} 0");
    }

    if let Some(out) = &args.out {
        write_json(
            out,
            &SolveDoc {
                status: result.status.to_string(),
                wall_time: result.wall_time,
                stats: result.stats,
                model: model_lits,
            },
        )?;
    }
    Ok(code)
}
