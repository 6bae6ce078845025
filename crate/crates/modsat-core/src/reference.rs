//! Small independent reference solvers used as oracles in tests.
//!
//! Both deliberately share no code with the CDCL engine: [`enumerate_sat`]
//! walks every assignment, and [`dpll_sat`] is a plain recursive DPLL with
//! clause-scanning unit propagation and first-unassigned-variable branching.

use crate::cnf::{evaluate, Assignment, Eval, Formula, Var};

/// Exhaustive check over all `2^num_vars` assignments. Returns the first
/// satisfying assignment found, or `None` when the formula is unsatisfiable.
/// Intended for formulas with at most ~20 variables.
pub fn enumerate_sat(f: &Formula) -> Option<Assignment> {
    assert!(f.num_vars <= 25, "enumeration oracle limited to 25 vars");
    let n = f.num_vars;
    for bits in 0u64..(1u64 << n) {
        let mut a = Assignment::new(n);
        for v in 0..n {
            a.set(Var(v as u32), bits >> v & 1 == 1);
        }
        if evaluate(f, &a) == Eval::Satisfied {
            return Some(a);
        }
    }
    None
}

/// Plain DPLL: unit propagation by clause scan, then branch on the first
/// unassigned variable. Complete, so usable as a satisfiability oracle for
/// instances where enumeration is too slow.
pub fn dpll_sat(f: &Formula) -> Option<Assignment> {
    let mut a = Assignment::new(f.num_vars);
    if dpll(f, &mut a) {
        Some(a)
    } else {
        None
    }
}

fn dpll(f: &Formula, a: &mut Assignment) -> bool {
    // Unit propagation to fixpoint; remember what we assigned for undo.
    let mut propagated: Vec<Var> = Vec::new();
    loop {
        let mut changed = false;
        for clause in &f.clauses {
            let mut unassigned = None;
            let mut unassigned_count = 0;
            let mut satisfied = false;
            for &lit in clause {
                match a.lit_value(lit) {
                    Some(true) => {
                        satisfied = true;
                        break;
                    }
                    Some(false) => {}
                    None => {
                        unassigned = Some(lit);
                        unassigned_count += 1;
                    }
                }
            }
            if satisfied {
                continue;
            }
            match unassigned_count {
                0 => {
                    for v in propagated {
                        a.clear(v);
                    }
                    return false;
                }
                1 => {
                    let lit = unassigned.unwrap();
                    a.set(lit.var(), lit.is_positive());
                    propagated.push(lit.var());
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }

    let branch = (0..f.num_vars)
        .map(|i| Var(i as u32))
        .find(|&v| a.get(v).is_none());
    let result = match branch {
        None => true, // complete and conflict-free: satisfying
        Some(v) => {
            let mut sat = false;
            for value in [true, false] {
                a.set(v, value);
                if dpll(f, a) {
                    sat = true;
                    break;
                }
                a.clear(v);
            }
            sat
        }
    };
    if !result {
        for v in propagated {
            a.clear(v);
        }
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::Lit;

    fn formula(num_vars: usize, clauses: &[&[i64]]) -> Formula {
        let mut f = Formula::new(num_vars);
        for c in clauses {
            f.add_clause(c.iter().map(|&x| Lit::from_dimacs(x)).collect());
        }
        f
    }

    #[test]
    fn trivial_cases() {
        assert!(enumerate_sat(&formula(1, &[&[1]])).is_some());
        assert!(enumerate_sat(&formula(1, &[&[1], &[-1]])).is_none());
        assert!(dpll_sat(&formula(1, &[&[1]])).is_some());
        assert!(dpll_sat(&formula(1, &[&[1], &[-1]])).is_none());
    }

    #[test]
    fn dpll_agrees_with_enumeration_on_random_instances() {
        // Tiny deterministic LCG so the test needs no external RNG.
        let mut state = 0x2545f4914f6cdd1du64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..200 {
            let n = 3 + (next() % 8) as usize;
            let m = 2 + (next() % (4 * n as u64)) as usize;
            let mut f = Formula::new(n);
            for _ in 0..m {
                let mut clause = Vec::new();
                for _ in 0..3 {
                    let v = (next() % n as u64) as i64 + 1;
                    let sign = if next() % 2 == 0 { 1 } else { -1 };
                    clause.push(Lit::from_dimacs(sign * v));
                }
                f.add_clause(clause);
            }
            let by_enum = enumerate_sat(&f).is_some();
            let by_dpll = dpll_sat(&f);
            assert_eq!(by_enum, by_dpll.is_some());
            if let Some(model) = by_dpll {
                // DPLL may leave don't-care variables unassigned; complete them.
                let mut full = model.clone();
                for v in 0..n {
                    if full.get(Var(v as u32)).is_none() {
                        full.set(Var(v as u32), false);
                    }
                }
                assert_ne!(evaluate(&f, &full), Eval::Falsified);
                assert_eq!(evaluate(&f, &full), Eval::Satisfied);
            }
        }
    }
}
