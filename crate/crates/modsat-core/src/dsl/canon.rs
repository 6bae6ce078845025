//! Canonical forms for synonym detection.
//!
//! Two programs that differ only in comments, local names, operand order of
//! commutative operators, or already-constant subexpressions canonicalize to
//! the same form. Passes run in a fixed order — alpha-rename, constant fold,
//! commutative sort — and the result is rendered to a deterministic source
//! string that re-parses to itself, which makes idempotence testable.

use crate::dsl::ast::{BinOp, Call, DslProgram, Expr, Span, Stmt, UnOp};
use crate::dsl::interp;
use crate::dsl::RuntimeFault;

/// The canonical form of a program: a normalized rendering of its AST.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalForm {
    pub text: String,
}

pub fn canonicalize(program: &DslProgram) -> CanonicalForm {
    let mut body = program.body.clone();
    let mut renamer = Renamer::default();
    renamer.rename_body(&mut body, &mut vec![Vec::new()]);
    for stmt in &mut body {
        fold_stmt(stmt);
    }
    for stmt in &mut body {
        sort_stmt(stmt);
    }
    CanonicalForm {
        text: render_body(&body, 0),
    }
}

pub fn is_synonymous(a: &DslProgram, b: &DslProgram) -> bool {
    a.slot == b.slot && canonicalize(a) == canonicalize(b)
}

// --- alpha renaming --------------------------------------------------------

#[derive(Default)]
struct Renamer {
    counter: usize,
}

type ScopeStack = Vec<Vec<(String, String)>>;

impl Renamer {
    fn fresh(&mut self) -> String {
        let name = format!("_l{}", self.counter);
        self.counter += 1;
        name
    }

    fn resolve(scopes: &ScopeStack, name: &str) -> Option<String> {
        for scope in scopes.iter().rev() {
            if let Some((_, new)) = scope.iter().rev().find(|(old, _)| old == name) {
                return Some(new.clone());
            }
        }
        None
    }

    fn rename_body(&mut self, stmts: &mut [Stmt], scopes: &mut ScopeStack) {
        for stmt in stmts {
            match stmt {
                Stmt::Let { name, value, .. } => {
                    self.rename_expr(value, scopes);
                    let fresh = self.fresh();
                    scopes
                        .last_mut()
                        .unwrap()
                        .push((name.clone(), fresh.clone()));
                    *name = fresh;
                }
                Stmt::Assign { name, value, .. } => {
                    self.rename_expr(value, scopes);
                    if let Some(new) = Self::resolve(scopes, name) {
                        *name = new;
                    }
                }
                Stmt::If {
                    cond,
                    then_branch,
                    else_branch,
                    ..
                } => {
                    self.rename_expr(cond, scopes);
                    scopes.push(Vec::new());
                    self.rename_body(then_branch, scopes);
                    scopes.pop();
                    scopes.push(Vec::new());
                    self.rename_body(else_branch, scopes);
                    scopes.pop();
                }
                Stmt::Return { value, .. } => {
                    if let Some(v) = value {
                        self.rename_expr(v, scopes);
                    }
                }
                Stmt::ForEachVar { name, body, .. } => {
                    let fresh = self.fresh();
                    scopes.push(vec![(name.clone(), fresh.clone())]);
                    *name = fresh;
                    self.rename_body(body, scopes);
                    scopes.pop();
                }
                Stmt::Call { call, .. } => {
                    for arg in &mut call.args {
                        self.rename_expr(arg, scopes);
                    }
                }
            }
        }
    }

    fn rename_expr(&mut self, expr: &mut Expr, scopes: &mut ScopeStack) {
        match expr {
            Expr::Ident(name, _) => {
                if let Some(new) = Self::resolve(scopes, name) {
                    *name = new;
                }
            }
            Expr::Call(call, _) => {
                for arg in &mut call.args {
                    self.rename_expr(arg, scopes);
                }
            }
            Expr::Unary(_, inner, _) => self.rename_expr(inner, scopes),
            Expr::Binary(_, lhs, rhs, _) => {
                self.rename_expr(lhs, scopes);
                self.rename_expr(rhs, scopes);
            }
            Expr::Int(..) | Expr::Real(..) | Expr::Bool(..) => {}
        }
    }
}

// --- constant folding ------------------------------------------------------

fn fold_stmt(stmt: &mut Stmt) {
    match stmt {
        Stmt::Let { value, .. } | Stmt::Assign { value, .. } => fold_expr(value),
        Stmt::If {
            cond,
            then_branch,
            else_branch,
            ..
        } => {
            fold_expr(cond);
            for s in then_branch {
                fold_stmt(s);
            }
            for s in else_branch {
                fold_stmt(s);
            }
        }
        Stmt::Return { value, .. } => {
            if let Some(v) = value {
                fold_expr(v);
            }
        }
        Stmt::ForEachVar { body, .. } => {
            for s in body {
                fold_stmt(s);
            }
        }
        Stmt::Call { call, .. } => {
            for arg in &mut call.args {
                fold_expr(arg);
            }
        }
    }
}

fn literal_value(expr: &Expr) -> Option<interp::Value> {
    match expr {
        Expr::Int(v, _) => Some(interp::Value::Int(*v)),
        Expr::Real(v, _) => Some(interp::Value::Real(*v)),
        Expr::Bool(v, _) => Some(interp::Value::Bool(*v)),
        _ => None,
    }
}

fn value_to_expr(value: interp::Value) -> Option<Expr> {
    let span = Span::default();
    match value {
        interp::Value::Int(i) => Some(Expr::Int(i, span)),
        interp::Value::Real(r) if r.is_finite() => Some(Expr::Real(r, span)),
        interp::Value::Bool(b) => Some(Expr::Bool(b, span)),
        _ => None,
    }
}

fn fold_expr(expr: &mut Expr) {
    match expr {
        Expr::Unary(op, inner, _) => {
            fold_expr(inner);
            if let Some(v) = literal_value(inner) {
                let folded = match (op, v) {
                    (UnOp::Not, interp::Value::Bool(b)) => Some(interp::Value::Bool(!b)),
                    (UnOp::Neg, interp::Value::Int(i)) => i.checked_neg().map(interp::Value::Int),
                    (UnOp::Neg, interp::Value::Real(r)) => Some(interp::Value::Real(-r)),
                    _ => None,
                };
                if let Some(e) = folded.and_then(value_to_expr) {
                    *expr = e;
                }
            }
        }
        Expr::Binary(op, lhs, rhs, _) => {
            fold_expr(lhs);
            fold_expr(rhs);
            if let (Some(l), Some(r)) = (literal_value(lhs), literal_value(rhs)) {
                let folded: Result<interp::Value, RuntimeFault> = match op {
                    BinOp::And => match (l, r) {
                        (interp::Value::Bool(a), interp::Value::Bool(b)) => {
                            Ok(interp::Value::Bool(a && b))
                        }
                        _ => return,
                    },
                    BinOp::Or => match (l, r) {
                        (interp::Value::Bool(a), interp::Value::Bool(b)) => {
                            Ok(interp::Value::Bool(a || b))
                        }
                        _ => return,
                    },
                    _ => interp::eval_binop_const(*op, l, r),
                };
                if let Ok(v) = folded {
                    if let Some(e) = value_to_expr(v) {
                        *expr = e;
                    }
                }
            }
        }
        Expr::Call(call, _) => {
            for arg in &mut call.args {
                fold_expr(arg);
            }
        }
        _ => {}
    }
}

// --- commutative sorting ---------------------------------------------------

/// Reordering is only safe for operands that cannot fault and have no side
/// effects: no division/remainder, no `log`/`sqrt`, no `rand01`.
fn reorder_safe(expr: &Expr) -> bool {
    match expr {
        Expr::Int(..) | Expr::Real(..) | Expr::Bool(..) | Expr::Ident(..) => true,
        Expr::Unary(_, inner, _) => reorder_safe(inner),
        Expr::Binary(op, lhs, rhs, _) => {
            !matches!(op, BinOp::Div | BinOp::Rem) && reorder_safe(lhs) && reorder_safe(rhs)
        }
        Expr::Call(call, _) => {
            !matches!(call.name.as_str(), "rand01" | "log" | "sqrt")
                && call.args.iter().all(reorder_safe)
        }
    }
}

fn sort_stmt(stmt: &mut Stmt) {
    match stmt {
        Stmt::Let { value, .. } | Stmt::Assign { value, .. } => sort_expr(value),
        Stmt::If {
            cond,
            then_branch,
            else_branch,
            ..
        } => {
            sort_expr(cond);
            for s in then_branch {
                sort_stmt(s);
            }
            for s in else_branch {
                sort_stmt(s);
            }
        }
        Stmt::Return { value, .. } => {
            if let Some(v) = value {
                sort_expr(v);
            }
        }
        Stmt::ForEachVar { body, .. } => {
            for s in body {
                sort_stmt(s);
            }
        }
        Stmt::Call { call, .. } => {
            for arg in &mut call.args {
                sort_expr(arg);
            }
        }
    }
}

fn flatten_chain(op: BinOp, expr: Expr, out: &mut Vec<Expr>) {
    match expr {
        Expr::Binary(o, lhs, rhs, _) if o == op => {
            flatten_chain(op, *lhs, out);
            flatten_chain(op, *rhs, out);
        }
        other => out.push(other),
    }
}

fn sort_expr(expr: &mut Expr) {
    match expr {
        Expr::Binary(op, lhs, rhs, span) => {
            let (op, span) = (*op, *span);
            sort_expr(lhs);
            sort_expr(rhs);
            if !op.commutative() {
                return;
            }
            match op {
                BinOp::Add | BinOp::Mul | BinOp::And | BinOp::Or => {
                    let mut operands = Vec::new();
                    flatten_chain(op, expr.clone(), &mut operands);
                    if !operands.iter().all(reorder_safe) {
                        return;
                    }
                    operands.sort_by_key(render_expr);
                    let mut iter = operands.into_iter();
                    let mut acc = iter.next().expect("chain has at least two operands");
                    for next in iter {
                        acc = Expr::Binary(op, Box::new(acc), Box::new(next), span);
                    }
                    *expr = acc;
                }
                BinOp::Eq | BinOp::Ne
                    if reorder_safe(lhs)
                        && reorder_safe(rhs)
                        && render_expr(rhs) < render_expr(lhs) =>
                {
                    std::mem::swap(lhs, rhs);
                }
                _ => {}
            }
        }
        Expr::Unary(_, inner, _) => sort_expr(inner),
        Expr::Call(call, _) => {
            for arg in &mut call.args {
                sort_expr(arg);
            }
            if matches!(call.name.as_str(), "min" | "max")
                && call.args.iter().all(reorder_safe)
                && render_expr(&call.args[1]) < render_expr(&call.args[0])
            {
                call.args.swap(0, 1);
            }
        }
        _ => {}
    }
}

// --- rendering -------------------------------------------------------------

pub fn render_body(stmts: &[Stmt], indent: usize) -> String {
    let mut out = String::new();
    for stmt in stmts {
        render_stmt(stmt, indent, &mut out);
    }
    out
}

fn pad(indent: usize, out: &mut String) {
    for _ in 0..indent {
        out.push_str("    ");
    }
}

fn render_stmt(stmt: &Stmt, indent: usize, out: &mut String) {
    pad(indent, out);
    match stmt {
        Stmt::Let { name, value, .. } => {
            out.push_str(&format!("let {name} = {};\n", render_expr(value)));
        }
        Stmt::Assign { name, value, .. } => {
            out.push_str(&format!("{name} = {};\n", render_expr(value)));
        }
        Stmt::If {
            cond,
            then_branch,
            else_branch,
            ..
        } => {
            out.push_str(&format!("if ({}) {{\n", render_expr(cond)));
            out.push_str(&render_body(then_branch, indent + 1));
            pad(indent, out);
            if else_branch.is_empty() {
                out.push_str("}\n");
            } else {
                out.push_str("} else {\n");
                out.push_str(&render_body(else_branch, indent + 1));
                pad(indent, out);
                out.push_str("}\n");
            }
        }
        Stmt::Return { value, .. } => match value {
            Some(v) => out.push_str(&format!("return {};\n", render_expr(v))),
            None => out.push_str("return;\n"),
        },
        Stmt::ForEachVar { name, body, .. } => {
            out.push_str(&format!("for_each_var({name}) {{\n"));
            out.push_str(&render_body(body, indent + 1));
            pad(indent, out);
            out.push_str("}\n");
        }
        Stmt::Call { call, .. } => {
            out.push_str(&format!("{};\n", render_call(call)));
        }
    }
}

fn render_call(call: &Call) -> String {
    let args: Vec<String> = call.args.iter().map(render_expr).collect();
    format!("{}({})", call.name, args.join(", "))
}

pub fn render_expr(expr: &Expr) -> String {
    match expr {
        Expr::Int(v, _) => {
            if *v < 0 {
                format!("(-{})", v.unsigned_abs())
            } else {
                v.to_string()
            }
        }
        Expr::Real(v, _) => {
            if v.is_sign_negative() {
                format!("(-{:?})", -v)
            } else {
                format!("{v:?}")
            }
        }
        Expr::Bool(v, _) => v.to_string(),
        Expr::Ident(name, _) => name.clone(),
        Expr::Call(call, _) => render_call(call),
        Expr::Unary(op, inner, _) => {
            let sym = match op {
                UnOp::Not => "!",
                UnOp::Neg => "-",
            };
            format!("({sym}{})", render_expr(inner))
        }
        Expr::Binary(op, lhs, rhs, _) => {
            format!(
                "({} {} {})",
                render_expr(lhs),
                op.symbol(),
                render_expr(rhs)
            )
        }
    }
}
