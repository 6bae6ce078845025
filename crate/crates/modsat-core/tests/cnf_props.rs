//! Property tests for the CNF model.

use modsat_core::cnf::{evaluate, parse_dimacs, write_dimacs, Assignment, Eval, Formula, Lit, Var};
use proptest::prelude::*;

fn arb_formula() -> impl Strategy<Value = Formula> {
    (1usize..=20).prop_flat_map(|num_vars| {
        let lit = (1..=num_vars as i64, any::<bool>())
            .prop_map(|(v, sign)| Lit::from_dimacs(if sign { v } else { -v }));
        let clause = prop::collection::vec(lit, 1..=5);
        prop::collection::vec(clause, 0..=40).prop_map(move |clauses| {
            let mut f = Formula::new(num_vars);
            for c in clauses {
                f.add_clause(c);
            }
            f
        })
    })
}

proptest! {
    #[test]
    fn write_then_parse_is_identity(f in arb_formula()) {
        let text = write_dimacs(&f);
        let parsed = parse_dimacs(&text, true).unwrap();
        prop_assert_eq!(parsed.formula, f);
        prop_assert_eq!(parsed.tautologies_dropped, 0);
    }

    #[test]
    fn evaluate_matches_bruteforce_on_complete_assignments(
        f in arb_formula().prop_filter("small enough to enumerate", |f| f.num_vars <= 10),
        bits in any::<u64>(),
    ) {
        let mut a = Assignment::new(f.num_vars);
        for v in 0..f.num_vars {
            a.set(Var(v as u32), bits >> v & 1 == 1);
        }
        // Literal-by-literal reference evaluation.
        let expected = if f.clauses.iter().all(|c| {
            c.iter().any(|&l| a.lit_value(l) == Some(true))
        }) {
            Eval::Satisfied
        } else {
            Eval::Falsified
        };
        prop_assert_eq!(evaluate(&f, &a), expected);
    }
}

#[test]
fn evaluate_exhaustive_on_all_assignments_small() {
    // Deterministic exhaustive sweep: every assignment of every formula in a
    // small seeded batch agrees with the reference evaluation.
    use modsat_core::hooks::snapshot::SplitMix64;
    let mut rng = SplitMix64::new(99);
    for _ in 0..30 {
        let n = 1 + rng.below(8) as usize;
        let mut f = Formula::new(n);
        let m = rng.below(20) as usize;
        for _ in 0..m {
            let len = 1 + rng.below(4) as usize;
            let clause = (0..len)
                .map(|_| Lit::new(Var(rng.below(n as u64) as u32), rng.below(2) == 0))
                .collect();
            f.add_clause(clause);
        }
        for bits in 0u64..(1 << n) {
            let mut a = Assignment::new(n);
            for v in 0..n {
                a.set(Var(v as u32), bits >> v & 1 == 1);
            }
            let expected = if f
                .clauses
                .iter()
                .all(|c| c.iter().any(|&l| a.lit_value(l) == Some(true)))
            {
                Eval::Satisfied
            } else {
                Eval::Falsified
            };
            assert_eq!(evaluate(&f, &a), expected);
        }
    }
}
