//! CNF data model, DIMACS parsing/serialization and assignment evaluation.
//!
//! Variables are 0-based everywhere inside the crate; the 1-based DIMACS
//! numbering is translated exactly once at the parser/writer boundary.

use std::fmt;
use std::ops::Not;

use thiserror::Error;

/// A propositional variable, identified by a 0-based index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u32);

impl Var {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0 + 1)
    }
}

/// A literal: a variable together with a polarity, packed as `2*var + neg`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    #[inline]
    pub fn new(var: Var, positive: bool) -> Lit {
        Lit(var.0 << 1 | u32::from(!positive))
    }

    /// Converts a nonzero DIMACS literal (±1-based) to the internal form.
    #[inline]
    pub fn from_dimacs(code: i64) -> Lit {
        debug_assert!(code != 0);
        let var = Var(code.unsigned_abs() as u32 - 1);
        Lit::new(var, code > 0)
    }

    #[inline]
    pub fn to_dimacs(self) -> i64 {
        let v = i64::from(self.0 >> 1) + 1;
        if self.is_positive() {
            v
        } else {
            -v
        }
    }

    #[inline]
    pub fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    /// Index usable for watch lists and other per-literal tables.
    #[inline]
    pub fn code(self) -> usize {
        self.0 as usize
    }

    /// The truth value this literal takes when its variable is `value`.
    #[inline]
    pub fn eval(self, value: bool) -> bool {
        value == self.is_positive()
    }
}

impl Not for Lit {
    type Output = Lit;
    #[inline]
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A disjunction of literals.
pub type Clause = Vec<Lit>;

/// A CNF formula: a conjunction of clauses over `num_vars` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formula {
    pub num_vars: usize,
    pub clauses: Vec<Clause>,
}

impl Formula {
    pub fn new(num_vars: usize) -> Formula {
        Formula {
            num_vars,
            clauses: Vec::new(),
        }
    }

    /// Adds a clause after normalization: duplicate literals are removed and
    /// tautological clauses (x ∨ ¬x ∨ …) are dropped. Returns whether the
    /// clause was kept.
    pub fn add_clause(&mut self, mut lits: Clause) -> bool {
        lits.sort_unstable();
        lits.dedup();
        for w in lits.windows(2) {
            if w[0].var() == w[1].var() {
                return false; // tautology
            }
        }
        self.clauses.push(lits);
        true
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }
}

/// Truth value of a clause or formula under a (partial) assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Eval {
    Satisfied,
    Falsified,
    Undetermined,
}

/// A partial assignment: one optional truth value per variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<Option<bool>>,
}

impl Assignment {
    pub fn new(num_vars: usize) -> Assignment {
        Assignment {
            values: vec![None; num_vars],
        }
    }

    pub fn from_values(values: Vec<Option<bool>>) -> Assignment {
        Assignment { values }
    }

    #[inline]
    pub fn get(&self, v: Var) -> Option<bool> {
        self.values.get(v.index()).copied().flatten()
    }

    pub fn set(&mut self, v: Var, value: bool) {
        self.values[v.index()] = Some(value);
    }

    pub fn clear(&mut self, v: Var) {
        self.values[v.index()] = None;
    }

    #[inline]
    pub fn lit_value(&self, l: Lit) -> Option<bool> {
        self.get(l.var()).map(|b| l.eval(b))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.values.iter().all(|v| v.is_some())
    }
}

/// Evaluates `f` under `a`: satisfied iff every clause has a true literal,
/// falsified iff some clause has all literals false, otherwise undetermined.
pub fn evaluate(f: &Formula, a: &Assignment) -> Eval {
    let mut undetermined = false;
    'clauses: for clause in &f.clauses {
        let mut clause_open = false;
        for &lit in clause {
            match a.lit_value(lit) {
                Some(true) => continue 'clauses,
                Some(false) => {}
                None => clause_open = true,
            }
        }
        if clause_open {
            undetermined = true;
        } else {
            return Eval::Falsified;
        }
    }
    if undetermined {
        Eval::Undetermined
    } else {
        Eval::Satisfied
    }
}

/// Errors raised while parsing DIMACS CNF input.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum DimacsError {
    #[error("line {line}: malformed header: {detail}")]
    MalformedHeader { line: usize, detail: String },
    #[error("line {line}: non-integer token `{token}`")]
    BadToken { line: usize, token: String },
    #[error("line {line}: literal {lit} exceeds declared variable count {nvars}")]
    LiteralOutOfRange { line: usize, lit: i64, nvars: usize },
    #[error("missing terminating 0 at end of stream")]
    MissingTerminator,
    #[error("missing `p cnf` header")]
    MissingHeader,
    #[error("header declares {declared} clauses but {found} were read")]
    ClauseCountMismatch { declared: usize, found: usize },
}

/// The result of a DIMACS parse: the formula plus normalization notes.
#[derive(Debug, Clone)]
pub struct ParsedDimacs {
    pub formula: Formula,
    /// Header clause count disagreed with the number of clauses read.
    pub clause_count_mismatch: bool,
    /// Number of tautological clauses dropped during normalization.
    pub tautologies_dropped: usize,
}

/// Parses DIMACS CNF text. Clause-count mismatches against the header are
/// tolerated and reported via [`ParsedDimacs::clause_count_mismatch`]; pass
/// `strict = true` to turn them into errors instead.
pub fn parse_dimacs(text: &str, strict: bool) -> Result<ParsedDimacs, DimacsError> {
    let mut header: Option<(usize, usize)> = None;
    let mut formula = Formula::new(0);
    let mut tautologies_dropped = 0usize;
    let mut current: Clause = Vec::new();
    let mut clauses_read = 0usize;

    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let trimmed = line.trim_start();
        if trimmed.starts_with('c') || trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(DimacsError::MalformedHeader {
                    line: lineno,
                    detail: "duplicate header".into(),
                });
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            if fields.len() != 4 || fields[0] != "p" || fields[1] != "cnf" {
                return Err(DimacsError::MalformedHeader {
                    line: lineno,
                    detail: format!("expected `p cnf <vars> <clauses>`, got `{trimmed}`"),
                });
            }
            let nvars: usize = fields[2]
                .parse()
                .map_err(|_| DimacsError::MalformedHeader {
                    line: lineno,
                    detail: format!("bad variable count `{}`", fields[2]),
                })?;
            let nclauses: usize = fields[3]
                .parse()
                .map_err(|_| DimacsError::MalformedHeader {
                    line: lineno,
                    detail: format!("bad clause count `{}`", fields[3]),
                })?;
            header = Some((nvars, nclauses));
            formula.num_vars = nvars;
            continue;
        }
        let (nvars, _) = header.ok_or(DimacsError::MissingHeader)?;
        for token in trimmed.split_whitespace() {
            let code: i64 = token.parse().map_err(|_| DimacsError::BadToken {
                line: lineno,
                token: token.to_string(),
            })?;
            if code == 0 {
                if formula.add_clause(std::mem::take(&mut current)) {
                    clauses_read += 1;
                } else {
                    tautologies_dropped += 1;
                    clauses_read += 1;
                }
            } else {
                if code.unsigned_abs() as usize > nvars {
                    return Err(DimacsError::LiteralOutOfRange {
                        line: lineno,
                        lit: code,
                        nvars,
                    });
                }
                current.push(Lit::from_dimacs(code));
            }
        }
    }

    let (_, declared) = header.ok_or(DimacsError::MissingHeader)?;
    if !current.is_empty() {
        return Err(DimacsError::MissingTerminator);
    }
    let clause_count_mismatch = clauses_read != declared;
    if strict && clause_count_mismatch {
        return Err(DimacsError::ClauseCountMismatch {
            declared,
            found: clauses_read,
        });
    }
    Ok(ParsedDimacs {
        formula,
        clause_count_mismatch,
        tautologies_dropped,
    })
}

/// Serializes a formula as DIMACS CNF text.
pub fn write_dimacs(f: &Formula) -> String {
    let mut out = String::new();
    out.push_str(&format!("p cnf {} {}\n", f.num_vars, f.clauses.len()));
    for clause in &f.clauses {
        for &lit in clause {
            out.push_str(&lit.to_dimacs().to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(code: i64) -> Lit {
        Lit::from_dimacs(code)
    }

    #[test]
    fn parse_basic() {
        let parsed = parse_dimacs("p cnf 2 2\n1 -2 0\n2 0", false).unwrap();
        assert_eq!(parsed.formula.num_vars, 2);
        assert_eq!(
            parsed.formula.clauses,
            vec![vec![lit(1), lit(-2)], vec![lit(2)]]
        );
        assert!(!parsed.clause_count_mismatch);
        assert_eq!(parsed.tautologies_dropped, 0);
    }

    #[test]
    fn parse_skips_comments() {
        let parsed = parse_dimacs("c comment\np cnf 1 2\n1 0\n-1 0", false).unwrap();
        assert_eq!(parsed.formula.clauses, vec![vec![lit(1)], vec![lit(-1)]]);
    }

    #[test]
    fn parse_drops_tautology() {
        let parsed = parse_dimacs("p cnf 1 1\n1 -1 0", false).unwrap();
        assert_eq!(parsed.formula.clauses.len(), 0);
        assert_eq!(parsed.tautologies_dropped, 1);
    }

    #[test]
    fn parse_deduplicates_literals() {
        let parsed = parse_dimacs("p cnf 2 1\n1 1 2 0", false).unwrap();
        assert_eq!(parsed.formula.clauses, vec![vec![lit(1), lit(2)]]);
    }

    #[test]
    fn parse_retains_empty_clause() {
        let parsed = parse_dimacs("p cnf 2 1\n0", false).unwrap();
        assert_eq!(parsed.formula.clauses, vec![Vec::<Lit>::new()]);
    }

    #[test]
    fn parse_count_mismatch_is_warning() {
        let parsed = parse_dimacs("p cnf 1 5\n1 0", false).unwrap();
        assert!(parsed.clause_count_mismatch);
        assert_eq!(
            parse_dimacs("p cnf 1 5\n1 0", true).unwrap_err(),
            DimacsError::ClauseCountMismatch {
                declared: 5,
                found: 1
            }
        );
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(matches!(
            parse_dimacs("p cnf x 1\n1 0", false),
            Err(DimacsError::MalformedHeader { .. })
        ));
        assert!(matches!(
            parse_dimacs("p cnf 1 1\n1 foo 0", false),
            Err(DimacsError::BadToken { .. })
        ));
        assert!(matches!(
            parse_dimacs("p cnf 1 1\n2 0", false),
            Err(DimacsError::LiteralOutOfRange { .. })
        ));
        assert!(matches!(
            parse_dimacs("p cnf 2 1\n1 2", false),
            Err(DimacsError::MissingTerminator)
        ));
        assert!(matches!(
            parse_dimacs("1 0", false),
            Err(DimacsError::MissingHeader)
        ));
    }

    #[test]
    fn write_basic() {
        let mut f = Formula::new(1);
        f.add_clause(vec![lit(1)]);
        assert_eq!(write_dimacs(&f), "p cnf 1 1\n1 0\n");
        assert_eq!(write_dimacs(&Formula::new(0)), "p cnf 0 0\n");
    }

    #[test]
    fn evaluate_examples() {
        // (x1 ∨ x2) ∧ (¬x1) with x1=F, x2=T is satisfied.
        let mut f = Formula::new(2);
        f.add_clause(vec![lit(1), lit(2)]);
        f.add_clause(vec![lit(-1)]);
        let mut a = Assignment::new(2);
        a.set(Var(0), false);
        a.set(Var(1), true);
        assert_eq!(evaluate(&f, &a), Eval::Satisfied);

        // (x1) ∧ (¬x1) is falsified under any complete assignment.
        let mut g = Formula::new(1);
        g.add_clause(vec![lit(1)]);
        g.add_clause(vec![lit(-1)]);
        for value in [false, true] {
            let mut a = Assignment::new(1);
            a.set(Var(0), value);
            assert_eq!(evaluate(&g, &a), Eval::Falsified);
        }

        // (x1 ∨ x2) with only x1=F is undetermined.
        let mut h = Formula::new(2);
        h.add_clause(vec![lit(1), lit(2)]);
        let mut a = Assignment::new(2);
        a.set(Var(0), false);
        assert_eq!(evaluate(&h, &a), Eval::Undetermined);
    }

    #[test]
    fn empty_clause_falsifies() {
        let mut f = Formula::new(1);
        f.add_clause(vec![]);
        assert_eq!(evaluate(&f, &Assignment::new(1)), Eval::Falsified);
    }
}
