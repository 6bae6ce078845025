//! Engine soundness against the independent reference solvers.

use modsat_core::cnf::{evaluate, Eval, Formula, Lit, Var};
use modsat_core::hooks::snapshot::SplitMix64;
use modsat_core::hooks::{registry, HeuristicSuite, Slot, Strategy};
use modsat_core::reference::dpll_sat;
use modsat_core::solver::{solve, SolveStatus, Solver, SolverConfig};

fn formula(num_vars: usize, clauses: &[&[i64]]) -> Formula {
    let mut f = Formula::new(num_vars);
    for c in clauses {
        f.add_clause(c.iter().map(|&x| Lit::from_dimacs(x)).collect());
    }
    f
}

fn random_3sat(num_vars: usize, num_clauses: usize, rng: &mut SplitMix64) -> Formula {
    let mut f = Formula::new(num_vars);
    while f.clauses.len() < num_clauses {
        let mut vars = Vec::new();
        while vars.len() < 3.min(num_vars) {
            let v = rng.below(num_vars as u64) as u32;
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        let clause = vars
            .iter()
            .map(|&v| Lit::new(Var(v), rng.below(2) == 0))
            .collect();
        f.add_clause(clause);
    }
    f
}

#[test]
fn trivial_instances() {
    let unsat = formula(1, &[&[1], &[-1]]);
    let result = solve(
        &unsat,
        &HeuristicSuite::all_baseline(),
        SolverConfig::default(),
    )
    .unwrap();
    assert_eq!(result.status, SolveStatus::Unsat);

    let sat = formula(2, &[&[1, 2], &[-2]]);
    let result = solve(
        &sat,
        &HeuristicSuite::all_baseline(),
        SolverConfig::default(),
    )
    .unwrap();
    assert_eq!(result.status, SolveStatus::Sat);
    let model = result.model.unwrap();
    assert_eq!(evaluate(&sat, &model), Eval::Satisfied);
    assert_eq!(model.get(Var(1)), Some(false));
}

#[test]
fn empty_clause_is_unsat_and_empty_formula_is_sat() {
    let mut with_empty = Formula::new(2);
    with_empty.add_clause(vec![]);
    let result = solve(
        &with_empty,
        &HeuristicSuite::all_baseline(),
        SolverConfig::default(),
    )
    .unwrap();
    assert_eq!(result.status, SolveStatus::Unsat);

    let empty = Formula::new(0);
    let result = solve(
        &empty,
        &HeuristicSuite::all_baseline(),
        SolverConfig::default(),
    )
    .unwrap();
    assert_eq!(result.status, SolveStatus::Sat);
}

fn pigeonhole(pigeons: usize, holes: usize) -> Formula {
    // Variable x_{p,h} = pigeon p sits in hole h, 0-based packed p*holes + h.
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

#[test]
fn pigeonhole_5_into_4_is_unsat() {
    let f = pigeonhole(5, 4);
    assert!(
        dpll_sat(&f).is_none(),
        "oracle agrees PHP(5,4) is unsatisfiable"
    );
    for suite in [
        HeuristicSuite::all_baseline(),
        HeuristicSuite::all_discovered(),
    ] {
        let result = solve(&f, &suite, SolverConfig::default()).unwrap();
        assert_eq!(result.status, SolveStatus::Unsat);
    }
}

#[test]
fn pigeonhole_4_into_4_is_sat() {
    let f = pigeonhole(4, 4);
    let result = solve(&f, &HeuristicSuite::all_baseline(), SolverConfig::default()).unwrap();
    assert_eq!(result.status, SolveStatus::Sat);
    assert_eq!(evaluate(&f, &result.model.unwrap()), Eval::Satisfied);
}

#[test]
fn matches_oracle_on_random_instances() {
    let mut rng = SplitMix64::new(0xfeed);
    let suites = [
        ("baseline", HeuristicSuite::all_baseline()),
        ("discovered", HeuristicSuite::all_discovered()),
    ];
    for round in 0..120 {
        let n = 4 + rng.below(14) as usize;
        let m = (n as f64 * 4.26) as usize;
        let f = random_3sat(n, m, &mut rng);
        let expected = dpll_sat(&f).is_some();
        for (name, suite) in &suites {
            let cfg = SolverConfig {
                seed: round,
                ..SolverConfig::default()
            };
            let result = solve(&f, suite, cfg).unwrap();
            let got = match result.status {
                SolveStatus::Sat => true,
                SolveStatus::Unsat => false,
                SolveStatus::Unknown => panic!("no budget set, cannot be unknown"),
            };
            assert_eq!(got, expected, "suite {name}, round {round}");
            if let Some(model) = result.model {
                assert_eq!(evaluate(&f, &model), Eval::Satisfied);
            }
        }
    }
}

#[test]
fn learnt_clauses_are_implied_by_the_formula() {
    let mut rng = SplitMix64::new(0xabcd);
    for _ in 0..20 {
        let n = 6 + rng.below(6) as usize;
        let f = random_3sat(n, (n as f64 * 4.26) as usize, &mut rng);
        let mut solver = Solver::new(&f, SolverConfig::default());
        solver.solve(&HeuristicSuite::all_baseline()).unwrap();
        for learnt in solver.learnt_clauses() {
            // f ∧ ¬learnt must be unsatisfiable.
            let mut refuted = f.clone();
            for l in &learnt {
                refuted.add_clause(vec![!*l]);
            }
            assert!(
                dpll_sat(&refuted).is_none(),
                "learnt clause {learnt:?} is not implied"
            );
        }
    }
}

#[test]
fn identical_inputs_give_identical_runs() {
    let mut rng = SplitMix64::new(7);
    let f = random_3sat(18, 76, &mut rng);
    for suite in [
        HeuristicSuite::all_baseline(),
        HeuristicSuite::all_discovered(),
    ] {
        let cfg = SolverConfig {
            seed: 3,
            rnd_freq: 0.2,
            ..SolverConfig::default()
        };
        let a = solve(&f, &suite, cfg.clone()).unwrap();
        let b = solve(&f, &suite, cfg).unwrap();
        assert_eq!(a.status, b.status);
        assert_eq!(a.stats, b.stats);
    }
}

#[test]
fn random_branching_replays_with_fixed_seed() {
    let mut rng = SplitMix64::new(91);
    let f = random_3sat(16, 68, &mut rng);
    let cfg = SolverConfig {
        rnd_freq: 1.0,
        seed: 12345,
        ..SolverConfig::default()
    };
    let a = solve(&f, &HeuristicSuite::all_baseline(), cfg.clone()).unwrap();
    let b = solve(&f, &HeuristicSuite::all_baseline(), cfg).unwrap();
    assert_eq!(a.stats, b.stats);
}

#[test]
fn tick_budget_gives_unknown() {
    // Large enough to be nontrivial, tiny tick budget forces Unknown.
    let mut rng = SplitMix64::new(5);
    let f = random_3sat(60, 255, &mut rng);
    let cfg = SolverConfig {
        tick_limit: Some(10),
        ..SolverConfig::default()
    };
    let result = solve(&f, &HeuristicSuite::all_baseline(), cfg).unwrap();
    assert_eq!(result.status, SolveStatus::Unknown);
    assert!(result.model.is_none());
}

#[test]
fn dsl_suite_solves_like_native() {
    use modsat_core::dsl::transcriptions;
    let dsl_suite = HeuristicSuite::from_fn(|slot| {
        Strategy::Dsl(transcriptions::program_for(registry::baseline_id(slot)).unwrap())
    });
    let mut rng = SplitMix64::new(0x5eed);
    for _ in 0..25 {
        let n = 5 + rng.below(10) as usize;
        let f = random_3sat(n, (n as f64 * 4.26) as usize, &mut rng);
        let native = solve(&f, &HeuristicSuite::all_baseline(), SolverConfig::default()).unwrap();
        let viadsl = solve(&f, &dsl_suite, SolverConfig::default()).unwrap();
        assert_eq!(native.status, viadsl.status);
        assert_eq!(
            native.stats, viadsl.stats,
            "DSL and native runs must match exactly"
        );
    }
}

#[test]
fn mixed_suites_preserve_soundness() {
    // Heuristics change speed, never answers: flip one slot at a time.
    let mut rng = SplitMix64::new(0xc0de);
    let f = random_3sat(14, 59, &mut rng);
    let expected = dpll_sat(&f).is_some();
    for slot in modsat_core::hooks::ALL_SLOTS {
        let suite = HeuristicSuite::all_baseline()
            .with_slot(slot, Strategy::native(registry::discovered_id(slot)));
        let result = solve(&f, &suite, SolverConfig::default()).unwrap();
        assert_eq!(result.status == SolveStatus::Sat, expected, "slot {slot}");
    }
}

#[test]
fn faulting_dsl_hook_aborts_with_slot() {
    let src = "return 1 / (conflicts - conflicts) > 0;";
    let program = modsat_core::dsl::compile(src, Slot::ReduceCondition).unwrap();
    let suite =
        HeuristicSuite::all_baseline().with_slot(Slot::ReduceCondition, Strategy::Dsl(program));
    let mut rng = SplitMix64::new(17);
    let f = random_3sat(12, 51, &mut rng);
    match solve(&f, &suite, SolverConfig::default()) {
        Err(fault) => assert_eq!(fault.slot, Slot::ReduceCondition),
        Ok(r) => {
            // The instance might be solved without ever reaching a conflict
            // gate; only a conflict-free run may pass.
            assert_eq!(r.stats.conflicts, 0, "gates must have run on conflicts");
        }
    }
}
