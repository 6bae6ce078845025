//! Desk-scale instance generators: seeded random 3-SAT, pigeonhole and
//! parity chains. Output is deterministic per seed, byte for byte.

use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use modsat_core::cnf::{write_dimacs, Formula, Lit, Var};

use crate::manifest::DatasetManifest;
use crate::BenchError;

/// Generator families.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// Uniform random 3-SAT; `clause_ratio` defaults to 4.26 when `num_clauses`
    /// is not given explicitly.
    Random3Sat {
        num_vars: usize,
        num_clauses: Option<usize>,
        clause_ratio: f64,
    },
    /// PHP(pigeons, holes) in the standard direct encoding; unsatisfiable
    /// exactly when pigeons > holes.
    Pigeonhole { pigeons: usize, holes: usize },
    /// Two Tseitin parity chains over the same `width` inputs, forced to
    /// opposite parities when `satisfiable` is false.
    ParityChain { width: usize, satisfiable: bool },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Random3Sat { .. } => "random-3sat",
            Family::Pigeonhole { .. } => "pigeonhole",
            Family::ParityChain { .. } => "parity-chain",
        }
    }
}

pub fn random_3sat(num_vars: usize, num_clauses: usize, seed: u64) -> Formula {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = Formula::new(num_vars);
    while f.clauses.len() < num_clauses {
        let mut vars: Vec<u32> = Vec::with_capacity(3);
        while vars.len() < 3.min(num_vars) {
            let v = rng.random_range(0..num_vars as u32);
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        let clause = vars
            .iter()
            .map(|&v| Lit::new(Var(v), rng.random::<bool>()))
            .collect();
        f.add_clause(clause);
    }
    f
}

pub fn pigeonhole(pigeons: usize, holes: usize) -> Formula {
    let var = |p: usize, h: usize| Var((p * holes + h) as u32);
    let mut f = Formula::new(pigeons * holes);
    for p in 0..pigeons {
        f.add_clause((0..holes).map(|h| Lit::new(var(p, h), true)).collect());
    }
    for h in 0..holes {
        for p1 in 0..pigeons {
            for p2 in p1 + 1..pigeons {
                f.add_clause(vec![
                    Lit::new(var(p1, h), false),
                    Lit::new(var(p2, h), false),
                ]);
            }
        }
    }
    f
}

/// Encodes `c ≡ a ⊕ b` with the four standard clauses.
fn xor_gate(f: &mut Formula, a: Lit, b: Lit, c: Lit) {
    f.add_clause(vec![!a, !b, !c]);
    f.add_clause(vec![a, b, !c]);
    f.add_clause(vec![a, !b, c]);
    f.add_clause(vec![!a, b, c]);
}

pub fn parity_chain(width: usize, satisfiable: bool) -> Result<Formula, BenchError> {
    if width < 2 {
        return Err(BenchError::BadParams(
            "parity chain needs width >= 2".into(),
        ));
    }
    // Inputs x_0..x_{w-1}, then one accumulator chain per constraint.
    let chains = if satisfiable { 1 } else { 2 };
    let num_vars = width + chains * (width - 1);
    let mut f = Formula::new(num_vars);
    let x = |i: usize| Lit::new(Var(i as u32), true);
    let mut outputs = Vec::new();
    for chain in 0..chains {
        let acc_base = width + chain * (width - 1);
        let acc = |i: usize| Lit::new(Var((acc_base + i) as u32), true);
        xor_gate(&mut f, x(0), x(1), acc(0));
        for i in 2..width {
            xor_gate(&mut f, acc(i - 2), x(i), acc(i - 1));
        }
        outputs.push(acc(width - 2));
    }
    // Constrain the chain outputs: one chain pinned to odd parity is always
    // satisfiable; two chains pinned to opposite parities never are.
    f.add_clause(vec![outputs[0]]);
    if !satisfiable {
        f.add_clause(vec![!outputs[1]]);
    }
    Ok(f)
}

/// Builds one formula from a family description.
pub fn generate_formula(family: &Family, seed: u64) -> Result<Formula, BenchError> {
    match family {
        Family::Random3Sat {
            num_vars,
            num_clauses,
            clause_ratio,
        } => {
            if *num_vars < 3 {
                return Err(BenchError::BadParams("random 3-SAT needs >= 3 vars".into()));
            }
            if *clause_ratio <= 0.0 {
                return Err(BenchError::BadParams(
                    "clause ratio must be positive".into(),
                ));
            }
            let m = num_clauses.unwrap_or(((*num_vars as f64) * clause_ratio).round() as usize);
            Ok(random_3sat(*num_vars, m, seed))
        }
        Family::Pigeonhole { pigeons, holes } => {
            if *pigeons == 0 || *holes == 0 {
                return Err(BenchError::BadParams(
                    "pigeonhole needs pigeons, holes >= 1".into(),
                ));
            }
            Ok(pigeonhole(*pigeons, *holes))
        }
        Family::ParityChain { width, satisfiable } => parity_chain(*width, *satisfiable),
    }
}

/// Writes `count` instances plus a manifest into `dir`. Instance `i` uses
/// seed `seed + i`, so datasets are reproducible byte for byte.
pub fn write_dataset(
    dir: &Path,
    family: &Family,
    count: usize,
    seed: u64,
    training_timeout_s: f64,
    function_candidates: Vec<u8>,
) -> Result<DatasetManifest, BenchError> {
    fs::create_dir_all(dir)?;
    let mut instances = Vec::with_capacity(count);
    for i in 0..count {
        let f = generate_formula(family, seed.wrapping_add(i as u64))?;
        let file = format!("{}-{i:03}.cnf", family.name());
        fs::write(dir.join(&file), write_dimacs(&f))?;
        instances.push(file);
    }
    let manifest = DatasetManifest {
        schema: 1,
        name: format!("{}-n{count}-s{seed}", family.name()),
        instances,
        training_timeout_s,
        function_candidates,
    };
    manifest.save(&dir.join("manifest.json"))?;
    Ok(manifest)
}
