//! The constrained language generated heuristics are written in.
//!
//! A program is the body of one hook function: statements over the scalar
//! fields, per-variable arrays and effects of a [`SolverView`], with C-style
//! expressions and a single bounded loop form (`for_each_var`). Programs are
//! parsed and checked before they ever run; interpretation is total — every
//! checked program either produces its slot-typed result or a
//! [`RuntimeFault`] within a fixed step budget.
//!
//! Generated sources travel between the `// start <slot>` / `// end <slot>`
//! marker lines ([`extract_marked`]); [`canonicalize`] and [`is_synonymous`]
//! provide the deterministic synonym detection used to dedupe generations.

pub mod ast;
pub mod canon;
pub mod check;
pub mod interp;
pub mod lexer;
pub mod parser;
pub mod transcriptions;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use ast::{DslProgram, Span, Ty};
pub use canon::{canonicalize, is_synonymous, CanonicalForm};
pub use check::check;

use crate::cnf::Var;
use crate::hooks::{ClauseId, Slot, SolverView};

/// Machine-readable diagnostic category, stable for the repair loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagCode {
    LexError,
    SyntaxError,
    UnknownIdentifier,
    UnknownFunction,
    IllegalWrite,
    IllegalCapability,
    TypeMismatch,
    ReturnTypeMismatch,
    ArityMismatch,
    DuplicateLocal,
    MissingReturn,
}

impl DiagCode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagCode::LexError => "lex-error",
            DiagCode::SyntaxError => "syntax-error",
            DiagCode::UnknownIdentifier => "unknown-identifier",
            DiagCode::UnknownFunction => "unknown-function",
            DiagCode::IllegalWrite => "illegal-write",
            DiagCode::IllegalCapability => "illegal-capability",
            DiagCode::TypeMismatch => "type-mismatch",
            DiagCode::ReturnTypeMismatch => "return-type-mismatch",
            DiagCode::ArityMismatch => "arity-mismatch",
            DiagCode::DuplicateLocal => "duplicate-local",
            DiagCode::MissingReturn => "missing-return",
        }
    }
}

/// A diagnostic with position, category and message.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub code: DiagCode,
    pub message: String,
    pub line: u32,
    pub col: u32,
}

impl Diagnostic {
    pub fn new(code: DiagCode, message: String, span: Span) -> Diagnostic {
        Diagnostic {
            code,
            message,
            line: span.line,
            col: span.col,
        }
    }
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}:{}: [{}] {}",
            self.line,
            self.col,
            self.code.as_str(),
            self.message
        )
    }
}

/// Failures surfaced by the interpreter at run time.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum RuntimeFault {
    #[error("division by zero")]
    DivisionByZero,
    #[error("step budget exceeded")]
    StepBudgetExceeded,
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("integer overflow")]
    IntegerOverflow,
    #[error("internal interpreter error: {0}")]
    Internal(String),
}

/// Parses `source` as the body of a `slot` program. No checking is done;
/// pair with [`fn@check`] or use [`compile`].
pub fn parse(source: &str, slot: Slot) -> Result<DslProgram, Vec<Diagnostic>> {
    let tokens = lexer::lex(source)?;
    let body = parser::Parser::new(&tokens).parse_program()?;
    Ok(DslProgram {
        slot,
        source: source.to_string(),
        body,
    })
}

/// Parse + check in one go.
pub fn compile(source: &str, slot: Slot) -> Result<DslProgram, Vec<Diagnostic>> {
    let program = parse(source, slot)?;
    check(&program)?;
    Ok(program)
}

pub fn interpret_condition(
    program: &DslProgram,
    view: &mut dyn SolverView,
) -> Result<bool, RuntimeFault> {
    debug_assert!(program.slot.returns_bool());
    interp::run_condition(program, view)
}

pub fn interpret_function(
    program: &DslProgram,
    view: &mut dyn SolverView,
) -> Result<(), RuntimeFault> {
    interp::run_function(program, view)
}

pub fn interpret_var_bump(
    program: &DslProgram,
    view: &mut dyn SolverView,
    v: Var,
    inc: f64,
) -> Result<(), RuntimeFault> {
    interp::run_var_bump(program, view, v, inc)
}

pub fn interpret_cla_bump(
    program: &DslProgram,
    view: &mut dyn SolverView,
    c: ClauseId,
) -> Result<(), RuntimeFault> {
    interp::run_cla_bump(program, view, c)
}

/// Extracts the text strictly between the `// start <slot>` and
/// `// end <slot>` marker lines. Returns `None` when either marker is
/// missing or they are out of order.
pub fn extract_marked(text: &str, slot: Slot) -> Option<String> {
    let start_marker = format!("// start {}", slot.name());
    let end_marker = format!("// end {}", slot.name());
    let mut collecting = false;
    let mut lines: Vec<&str> = Vec::new();
    for line in text.lines() {
        let trimmed = line.trim();
        if !collecting && trimmed.starts_with(&start_marker) {
            collecting = true;
            continue;
        }
        if collecting {
            if trimmed.starts_with(&end_marker) {
                return Some(lines.join("\n"));
            }
            lines.push(line);
        }
    }
    None
}
