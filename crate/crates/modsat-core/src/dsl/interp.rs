//! Big-step interpreter for checked heuristic programs.
//!
//! Arithmetic follows the C conventions the originals were written in:
//! int/int stays integral with truncating division, any real operand
//! promotes the operation to 64-bit floating point, and `min`/`max` use the
//! `(a < b)` comparison form. Any division or remainder by zero, domain
//! error, integer overflow or exhausted step budget surfaces as a
//! [`RuntimeFault`] rather than a value.

use crate::cnf::Var;
use crate::dsl::ast::{BinOp, Call, DslProgram, Expr, Stmt, UnOp};
use crate::dsl::RuntimeFault;
use crate::hooks::{ClauseId, SolverView};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Int(i64),
    Real(f64),
    Bool(bool),
    Var(Var),
    Clause(ClauseId),
}

impl Value {
    fn as_real(self) -> f64 {
        match self {
            Value::Int(i) => i as f64,
            Value::Real(r) => r,
            _ => unreachable!("checker admits only numeric values here"),
        }
    }
}

enum Flow {
    Normal,
    Return(Option<Value>),
}

struct Interp<'a> {
    view: &'a mut dyn SolverView,
    frames: Vec<Vec<(String, Value)>>,
    steps_left: u64,
}

/// Per-invocation step budget: generous enough for a handful of full
/// variable sweeps plus straight-line work.
pub fn step_budget(num_vars: i64) -> u64 {
    (10 * num_vars.max(0) as u64).saturating_add(10_000)
}

pub fn run_condition(
    program: &DslProgram,
    view: &mut dyn SolverView,
) -> Result<bool, RuntimeFault> {
    match run(program, view, Vec::new())? {
        Some(Value::Bool(b)) => Ok(b),
        other => Err(RuntimeFault::Internal(format!(
            "condition slot produced {other:?} despite passing checks"
        ))),
    }
}

pub fn run_function(program: &DslProgram, view: &mut dyn SolverView) -> Result<(), RuntimeFault> {
    run(program, view, Vec::new()).map(|_| ())
}

pub fn run_var_bump(
    program: &DslProgram,
    view: &mut dyn SolverView,
    v: Var,
    inc: f64,
) -> Result<(), RuntimeFault> {
    let params = vec![
        ("v".to_string(), Value::Var(v)),
        ("inc".to_string(), Value::Real(inc)),
    ];
    run(program, view, params).map(|_| ())
}

pub fn run_cla_bump(
    program: &DslProgram,
    view: &mut dyn SolverView,
    c: ClauseId,
) -> Result<(), RuntimeFault> {
    let params = vec![("c".to_string(), Value::Clause(c))];
    run(program, view, params).map(|_| ())
}

fn run(
    program: &DslProgram,
    view: &mut dyn SolverView,
    params: Vec<(String, Value)>,
) -> Result<Option<Value>, RuntimeFault> {
    let steps_left = step_budget(view.num_vars());
    let mut interp = Interp {
        view,
        frames: vec![params],
        steps_left,
    };
    match interp.exec_body(&program.body)? {
        Flow::Return(v) => Ok(v),
        Flow::Normal => Ok(None),
    }
}

impl<'a> Interp<'a> {
    fn step(&mut self) -> Result<(), RuntimeFault> {
        if self.steps_left == 0 {
            return Err(RuntimeFault::StepBudgetExceeded);
        }
        self.steps_left -= 1;
        Ok(())
    }

    fn lookup(&self, name: &str) -> Option<Value> {
        for frame in self.frames.iter().rev() {
            if let Some((_, v)) = frame.iter().rev().find(|(n, _)| n == name) {
                return Some(*v);
            }
        }
        None
    }

    fn assign_local(&mut self, name: &str, value: Value) -> bool {
        for frame in self.frames.iter_mut().rev() {
            if let Some((_, slot)) = frame.iter_mut().rev().find(|(n, _)| n == name) {
                *slot = value;
                return true;
            }
        }
        false
    }

    fn exec_body(&mut self, stmts: &[Stmt]) -> Result<Flow, RuntimeFault> {
        for stmt in stmts {
            match self.exec_stmt(stmt)? {
                Flow::Normal => {}
                ret => return Ok(ret),
            }
        }
        Ok(Flow::Normal)
    }

    fn exec_block(
        &mut self,
        stmts: &[Stmt],
        extra: Option<(String, Value)>,
    ) -> Result<Flow, RuntimeFault> {
        self.frames.push(extra.into_iter().collect());
        let flow = self.exec_body(stmts);
        self.frames.pop();
        flow
    }

    fn exec_stmt(&mut self, stmt: &Stmt) -> Result<Flow, RuntimeFault> {
        self.step()?;
        match stmt {
            Stmt::Let { name, value, .. } => {
                let v = self.eval(value)?;
                self.frames.last_mut().unwrap().push((name.clone(), v));
                Ok(Flow::Normal)
            }
            Stmt::Assign { name, value, .. } => {
                let v = self.eval(value)?;
                if self.assign_local(name, self.coerce_local(name, v)) {
                    return Ok(Flow::Normal);
                }
                self.write_field(name, v);
                Ok(Flow::Normal)
            }
            Stmt::If {
                cond,
                then_branch,
                else_branch,
                ..
            } => {
                let c = match self.eval(cond)? {
                    Value::Bool(b) => b,
                    _ => unreachable!("checker enforces bool conditions"),
                };
                if c {
                    self.exec_block(then_branch, None)
                } else {
                    self.exec_block(else_branch, None)
                }
            }
            Stmt::Return { value, .. } => {
                let v = value.as_ref().map(|e| self.eval(e)).transpose()?;
                Ok(Flow::Return(v))
            }
            Stmt::ForEachVar { name, body, .. } => {
                let n = self.view.num_vars();
                for i in 0..n {
                    let var = Value::Var(Var(i as u32));
                    match self.exec_block(body, Some((name.clone(), var)))? {
                        Flow::Normal => {}
                        ret => return Ok(ret),
                    }
                }
                Ok(Flow::Normal)
            }
            Stmt::Call { call, .. } => {
                self.eval_call(call)?;
                Ok(Flow::Normal)
            }
        }
    }

    /// Keeps a reassigned local at its declared numeric type (`real` locals
    /// absorb int values; everything else passed the checker as-is).
    fn coerce_local(&self, name: &str, value: Value) -> Value {
        match (self.lookup(name), value) {
            (Some(Value::Real(_)), Value::Int(i)) => Value::Real(i as f64),
            _ => value,
        }
    }

    fn write_field(&mut self, name: &str, value: Value) {
        let as_int = |v: Value| match v {
            Value::Int(i) => i,
            _ => unreachable!("checker enforces int fields take int values"),
        };
        let as_real = |v: Value| match v {
            Value::Int(i) => i as f64,
            Value::Real(r) => r,
            _ => unreachable!("checker enforces real fields take numeric values"),
        };
        match name {
            "conflict_r" => self.view.set_conflict_r(as_int(value)),
            "rephases" => self.view.set_rephases(as_int(value)),
            "rephase_count" => self.view.set_rephase_count(as_int(value)),
            "rephase_limit" => self.view.set_rephase_limit(as_int(value)),
            "restart_count" => self.view.set_restart_count(as_int(value)),
            "threshold" => self.view.set_threshold(as_real(value)),
            "last_rephase_progress" => self.view.set_last_rephase_progress(as_real(value)),
            "last_restart_progress" => self.view.set_last_restart_progress(as_real(value)),
            "fast_avg" => self.view.set_fast_avg(as_real(value)),
            "slow_avg" => self.view.set_slow_avg(as_real(value)),
            "var_inc" => self.view.set_var_inc(as_real(value)),
            "cla_inc" => self.view.set_cla_inc(as_real(value)),
            _ => unreachable!("checker rejects writes to `{name}`"),
        }
    }

    fn read_field(&self, name: &str) -> Option<Value> {
        let v = match name {
            "conflicts" => Value::Int(self.view.conflicts()),
            "decisions" => Value::Int(self.view.decisions()),
            "lbd_queue_size" => Value::Int(self.view.lbd_queue_size()),
            "fast_lbd_sum" => Value::Real(self.view.fast_lbd_sum()),
            "slow_lbd_sum" => Value::Real(self.view.slow_lbd_sum()),
            "trail_size" => Value::Int(self.view.trail_size()),
            "decision_level" => Value::Int(self.view.decision_level()),
            "num_vars" => Value::Int(self.view.num_vars()),
            "num_clauses" => Value::Int(self.view.num_clauses()),
            "learnts_size" => Value::Int(self.view.learnts_size()),
            "max_learnts" => Value::Real(self.view.max_learnts()),
            "garbage_frac" => Value::Real(self.view.garbage_frac()),
            "wasted_bytes" => Value::Int(self.view.wasted_bytes()),
            "arena_bytes" => Value::Int(self.view.arena_bytes()),
            "restart_first" => Value::Int(self.view.restart_first()),
            "var_inc" => Value::Real(self.view.var_inc()),
            "cla_inc" => Value::Real(self.view.cla_inc()),
            "conflict_r" => Value::Int(self.view.conflict_r()),
            "rephases" => Value::Int(self.view.rephases()),
            "rephase_count" => Value::Int(self.view.rephase_count()),
            "rephase_limit" => Value::Int(self.view.rephase_limit()),
            "threshold" => Value::Real(self.view.threshold()),
            "last_rephase_progress" => Value::Real(self.view.last_rephase_progress()),
            "last_restart_progress" => Value::Real(self.view.last_restart_progress()),
            "fast_avg" => Value::Real(self.view.fast_avg()),
            "slow_avg" => Value::Real(self.view.slow_avg()),
            "restart_count" => Value::Int(self.view.restart_count()),
            _ => return None,
        };
        Some(v)
    }

    fn eval(&mut self, expr: &Expr) -> Result<Value, RuntimeFault> {
        self.step()?;
        match expr {
            Expr::Int(v, _) => Ok(Value::Int(*v)),
            Expr::Real(v, _) => Ok(Value::Real(*v)),
            Expr::Bool(v, _) => Ok(Value::Bool(*v)),
            Expr::Ident(name, _) => {
                if let Some(v) = self.lookup(name) {
                    Ok(v)
                } else if let Some(v) = self.read_field(name) {
                    Ok(v)
                } else {
                    unreachable!("checker resolves all identifiers")
                }
            }
            Expr::Call(call, _) => self
                .eval_call(call)?
                .ok_or_else(|| RuntimeFault::Internal(format!("`{}` used as value", call.name))),
            Expr::Unary(op, inner, _) => {
                let v = self.eval(inner)?;
                match (op, v) {
                    (UnOp::Not, Value::Bool(b)) => Ok(Value::Bool(!b)),
                    (UnOp::Neg, Value::Int(i)) => i
                        .checked_neg()
                        .map(Value::Int)
                        .ok_or(RuntimeFault::IntegerOverflow),
                    (UnOp::Neg, Value::Real(r)) => Ok(Value::Real(-r)),
                    _ => unreachable!("checker enforces unary operand types"),
                }
            }
            Expr::Binary(op, lhs, rhs, _) => {
                // Short-circuit boolean operators never evaluate their rhs.
                if *op == BinOp::And {
                    if let Value::Bool(false) = self.eval(lhs)? {
                        return Ok(Value::Bool(false));
                    }
                    return self.eval(rhs);
                }
                if *op == BinOp::Or {
                    if let Value::Bool(true) = self.eval(lhs)? {
                        return Ok(Value::Bool(true));
                    }
                    return self.eval(rhs);
                }
                let l = self.eval(lhs)?;
                let r = self.eval(rhs)?;
                eval_binop(*op, l, r)
            }
        }
    }

    fn eval_call(&mut self, call: &Call) -> Result<Option<Value>, RuntimeFault> {
        let name = call.name.as_str();
        let mut args = Vec::with_capacity(call.args.len());
        for a in &call.args {
            args.push(self.eval(a)?);
        }
        let arg_var = |i: usize| -> Var {
            match args[i] {
                Value::Var(v) => v,
                _ => unreachable!("checker enforces var arguments"),
            }
        };
        let arg_clause = |i: usize| -> ClauseId {
            match args[i] {
                Value::Clause(c) => c,
                _ => unreachable!("checker enforces clause arguments"),
            }
        };
        let arg_bool = |i: usize| -> bool {
            match args[i] {
                Value::Bool(b) => b,
                _ => unreachable!("checker enforces bool arguments"),
            }
        };
        let arg_real = |i: usize| -> f64 { args[i].as_real() };

        let out = match name {
            // Numeric builtins.
            "min" | "max" => Some(eval_min_max(name, args[0], args[1])),
            "abs" => Some(match args[0] {
                Value::Int(i) => i
                    .checked_abs()
                    .map(Value::Int)
                    .ok_or(RuntimeFault::IntegerOverflow)?,
                Value::Real(r) => Value::Real(r.abs()),
                _ => unreachable!(),
            }),
            "floor" => Some(Value::Int(match args[0] {
                Value::Int(i) => i,
                Value::Real(r) => r.floor() as i64,
                _ => unreachable!(),
            })),
            "trunc" => Some(Value::Int(match args[0] {
                Value::Int(i) => i,
                Value::Real(r) => r as i64,
                _ => unreachable!(),
            })),
            "real" => Some(Value::Real(arg_real(0))),
            "log" => {
                let x = arg_real(0);
                if x <= 0.0 {
                    return Err(RuntimeFault::DomainError(format!("log of {x}")));
                }
                Some(Value::Real(x.ln()))
            }
            "sqrt" => {
                let x = arg_real(0);
                if x < 0.0 {
                    return Err(RuntimeFault::DomainError(format!("sqrt of {x}")));
                }
                Some(Value::Real(x.sqrt()))
            }

            // View reads.
            "progress_estimate" => Some(Value::Real(self.view.progress_estimate())),
            "rand01" => Some(Value::Real(self.view.rand01())),
            "activity" => Some(Value::Real(self.view.activity(arg_var(0)))),
            "polarity" => Some(Value::Bool(self.view.polarity(arg_var(0)))),
            "saved" => Some(Value::Bool(self.view.saved(arg_var(0)))),
            "local_best" => Some(Value::Bool(self.view.local_best(arg_var(0)))),
            "user_pol" => Some(Value::Bool(self.view.user_pol(arg_var(0)).unwrap_or(false))),
            "user_pol_defined" => Some(Value::Bool(self.view.user_pol(arg_var(0)).is_some())),
            "in_heap" => Some(Value::Bool(self.view.in_heap(arg_var(0)))),
            "heap_top_activity" => Some(Value::Real(self.view.heap_top_activity())),
            "is_unassigned" => Some(Value::Bool(self.view.is_unassigned(arg_var(0)))),
            "cla_activity" => Some(Value::Real(self.view.cla_activity(arg_clause(0)))),

            // View writes and effects.
            "set_polarity" => {
                self.view.set_polarity(arg_var(0), arg_bool(1));
                None
            }
            "set_saved" => {
                self.view.set_saved(arg_var(0), arg_bool(1));
                None
            }
            "set_local_best" => {
                self.view.set_local_best(arg_var(0), arg_bool(1));
                None
            }
            "set_user_pol" => {
                self.view.set_user_pol(arg_var(0), Some(arg_bool(1)));
                None
            }
            "set_activity" => {
                self.view.set_activity(arg_var(0), arg_real(1));
                None
            }
            "heap_update" => {
                self.view.heap_update(arg_var(0));
                None
            }
            "heap_insert" => {
                self.view.heap_insert(arg_var(0));
                None
            }
            "set_cla_activity" => {
                self.view.set_cla_activity(arg_clause(0), arg_real(1));
                None
            }
            "rescale_cla_activity" => {
                self.view.rescale_cla_activity(arg_real(0));
                None
            }
            "clamp_cla_activity_min" => {
                self.view.clamp_cla_activity_min(arg_real(0));
                None
            }
            "cancel_until" => {
                let level = match args[0] {
                    Value::Int(i) => i,
                    _ => unreachable!(),
                };
                self.view.cancel_until(level);
                None
            }
            "reduce_db" => {
                self.view.reduce_db();
                None
            }
            "rebuild_order_heap" => {
                self.view.rebuild_order_heap();
                None
            }
            "clear_lbd_queue" => {
                self.view.clear_lbd_queue();
                None
            }
            other => unreachable!("checker admits only known functions, got `{other}`"),
        };
        Ok(out)
    }
}

/// Constant evaluation of a pure binary operation; shared with the
/// canonicalizer's folding pass. Short-circuit operators are not handled.
pub fn eval_binop_const(op: BinOp, l: Value, r: Value) -> Result<Value, RuntimeFault> {
    eval_binop(op, l, r)
}

fn eval_min_max(name: &str, a: Value, b: Value) -> Value {
    match (a, b) {
        (Value::Int(x), Value::Int(y)) => Value::Int(if name == "max" {
            if x < y {
                y
            } else {
                x
            }
        } else if y < x {
            y
        } else {
            x
        }),
        _ => {
            let (x, y) = (a.as_real(), b.as_real());
            Value::Real(if name == "max" {
                if x < y {
                    y
                } else {
                    x
                }
            } else if y < x {
                y
            } else {
                x
            })
        }
    }
}

fn eval_binop(op: BinOp, l: Value, r: Value) -> Result<Value, RuntimeFault> {
    use BinOp::*;
    match op {
        Add | Sub | Mul | Div | Rem => match (l, r) {
            (Value::Int(a), Value::Int(b)) => {
                let out = match op {
                    Add => a.checked_add(b).ok_or(RuntimeFault::IntegerOverflow)?,
                    Sub => a.checked_sub(b).ok_or(RuntimeFault::IntegerOverflow)?,
                    Mul => a.checked_mul(b).ok_or(RuntimeFault::IntegerOverflow)?,
                    Div => {
                        if b == 0 {
                            return Err(RuntimeFault::DivisionByZero);
                        }
                        a.checked_div(b).ok_or(RuntimeFault::IntegerOverflow)?
                    }
                    Rem => {
                        if b == 0 {
                            return Err(RuntimeFault::DivisionByZero);
                        }
                        a.checked_rem(b).ok_or(RuntimeFault::IntegerOverflow)?
                    }
                    _ => unreachable!(),
                };
                Ok(Value::Int(out))
            }
            _ => {
                let (a, b) = (l.as_real(), r.as_real());
                let out = match op {
                    Add => a + b,
                    Sub => a - b,
                    Mul => a * b,
                    Div => {
                        if b == 0.0 {
                            return Err(RuntimeFault::DivisionByZero);
                        }
                        a / b
                    }
                    Rem => {
                        if b == 0.0 {
                            return Err(RuntimeFault::DivisionByZero);
                        }
                        a % b
                    }
                    _ => unreachable!(),
                };
                Ok(Value::Real(out))
            }
        },
        Lt | Le | Gt | Ge => match (l, r) {
            (Value::Int(a), Value::Int(b)) => Ok(Value::Bool(match op {
                Lt => a < b,
                Le => a <= b,
                Gt => a > b,
                Ge => a >= b,
                _ => unreachable!(),
            })),
            _ => {
                let (a, b) = (l.as_real(), r.as_real());
                Ok(Value::Bool(match op {
                    Lt => a < b,
                    Le => a <= b,
                    Gt => a > b,
                    Ge => a >= b,
                    _ => unreachable!(),
                }))
            }
        },
        Eq | Ne => {
            let eq = match (l, r) {
                (Value::Bool(a), Value::Bool(b)) => a == b,
                (Value::Int(a), Value::Int(b)) => a == b,
                _ => l.as_real() == r.as_real(),
            };
            Ok(Value::Bool(if op == Eq { eq } else { !eq }))
        }
        And | Or => unreachable!("short-circuit ops handled in eval"),
    }
}
