//! A modular CDCL SAT solver built around seven pluggable heuristic hook
//! points, plus the constrained DSL in which replacement heuristics can be
//! written, validated and interpreted at runtime.
//!
//! The crate is split along the natural seams of the solver:
//!
//! - [`cnf`] — CNF formulas, DIMACS parsing/serialization, assignment
//!   evaluation.
//! - [`solver`] — the CDCL engine itself: two-watched-literal propagation,
//!   first-UIP learning, activity heap, clause database management. All
//!   restart/rephase/reduce/bump decisions are delegated to a
//!   [`hooks::HeuristicSuite`].
//! - [`hooks`] — the seven hook slots, the [`hooks::SolverView`] surface they
//!   operate on, and the registry of native strategy presets.
//! - [`dsl`] — parser, checker, interpreter and canonicalizer for the
//!   heuristic language generated code is expressed in.
//! - [`mod@reference`] — small independent reference solvers (exhaustive
//!   enumeration and plain DPLL) used as test oracles.

pub mod cnf;
pub mod dsl;
pub mod hooks;
pub mod reference;
pub mod solver;
pub mod util;

pub use cnf::{Assignment, Clause, Formula, Lit, Var};
pub use hooks::{HeuristicSuite, Slot, SolverView, Strategy};
pub use solver::{SolveResult, SolveStatus, Solver, SolverConfig};
