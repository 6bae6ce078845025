//! Capability and type checking for heuristic programs.
//!
//! Each slot sees the same read surface but has its own write set: condition
//! slots are pure apart from their designated writes, function slots may call
//! solver effects and update heuristic-state fields, bump slots write
//! activities (plus their increment) and nothing else.

use crate::dsl::ast::{BinOp, Call, DslProgram, Expr, Span, Stmt, Ty, UnOp};
use crate::dsl::{DiagCode, Diagnostic};
use crate::hooks::Slot;

/// `(name, type, is_int)` for every scalar view field readable in programs.
pub const SCALAR_FIELDS: [(&str, Ty); 27] = [
    ("conflicts", Ty::Int),
    ("decisions", Ty::Int),
    ("lbd_queue_size", Ty::Int),
    ("fast_lbd_sum", Ty::Real),
    ("slow_lbd_sum", Ty::Real),
    ("trail_size", Ty::Int),
    ("decision_level", Ty::Int),
    ("num_vars", Ty::Int),
    ("num_clauses", Ty::Int),
    ("learnts_size", Ty::Int),
    ("max_learnts", Ty::Real),
    ("garbage_frac", Ty::Real),
    ("wasted_bytes", Ty::Int),
    ("arena_bytes", Ty::Int),
    ("restart_first", Ty::Int),
    ("var_inc", Ty::Real),
    ("cla_inc", Ty::Real),
    ("conflict_r", Ty::Int),
    ("rephases", Ty::Int),
    ("rephase_count", Ty::Int),
    ("rephase_limit", Ty::Int),
    ("threshold", Ty::Real),
    ("last_rephase_progress", Ty::Real),
    ("last_restart_progress", Ty::Real),
    ("fast_avg", Ty::Real),
    ("slow_avg", Ty::Real),
    ("restart_count", Ty::Int),
];

pub fn scalar_field_ty(name: &str) -> Option<Ty> {
    SCALAR_FIELDS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|&(_, ty)| ty)
}

/// Scalar fields a slot is allowed to assign to.
pub fn writable_fields(slot: Slot) -> &'static [&'static str] {
    const HEURISTIC_STATE: &[&str] = &[
        "conflict_r",
        "rephases",
        "rephase_count",
        "rephase_limit",
        "threshold",
        "last_rephase_progress",
        "last_restart_progress",
        "fast_avg",
        "slow_avg",
        "restart_count",
    ];
    match slot {
        Slot::RestartCondition => &["conflict_r"],
        Slot::RephaseCondition => &["rephase_limit"],
        Slot::ReduceCondition => &[],
        Slot::RestartFunction | Slot::RephaseFunction => HEURISTIC_STATE,
        Slot::VarBumpActivity => &["var_inc"],
        Slot::ClaBumpActivity => &["cla_inc"],
    }
}

/// Formal parameters injected by the slot signature.
pub fn slot_params(slot: Slot) -> &'static [(&'static str, Ty)] {
    match slot {
        Slot::VarBumpActivity => &[("v", Ty::Var), ("inc", Ty::Real)],
        Slot::ClaBumpActivity => &[("c", Ty::Clause)],
        _ => &[],
    }
}

/// Where a view function may be called from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Cap {
    Everywhere,
    FunctionSlots,
    RephaseFunction,
    VarBump,
    ClaBump,
}

impl Cap {
    fn allows(self, slot: Slot) -> bool {
        match self {
            Cap::Everywhere => true,
            Cap::FunctionSlots => {
                matches!(slot, Slot::RestartFunction | Slot::RephaseFunction)
            }
            Cap::RephaseFunction => slot == Slot::RephaseFunction,
            Cap::VarBump => slot == Slot::VarBumpActivity,
            Cap::ClaBump => slot == Slot::ClaBumpActivity,
        }
    }
}

/// Fixed-signature view functions. Numeric-polymorphic builtins (`min`,
/// `max`, `abs`, …) are handled separately in [`Checker::check_call`].
const VIEW_FUNCS: &[(&str, &[Ty], Option<Ty>, Cap)] = &[
    ("progress_estimate", &[], Some(Ty::Real), Cap::Everywhere),
    ("rand01", &[], Some(Ty::Real), Cap::Everywhere),
    ("activity", &[Ty::Var], Some(Ty::Real), Cap::Everywhere),
    ("polarity", &[Ty::Var], Some(Ty::Bool), Cap::Everywhere),
    ("saved", &[Ty::Var], Some(Ty::Bool), Cap::Everywhere),
    ("local_best", &[Ty::Var], Some(Ty::Bool), Cap::Everywhere),
    ("user_pol", &[Ty::Var], Some(Ty::Bool), Cap::Everywhere),
    (
        "user_pol_defined",
        &[Ty::Var],
        Some(Ty::Bool),
        Cap::Everywhere,
    ),
    ("cancel_until", &[Ty::Int], None, Cap::FunctionSlots),
    ("reduce_db", &[], None, Cap::FunctionSlots),
    ("rebuild_order_heap", &[], None, Cap::FunctionSlots),
    ("clear_lbd_queue", &[], None, Cap::FunctionSlots),
    (
        "set_polarity",
        &[Ty::Var, Ty::Bool],
        None,
        Cap::RephaseFunction,
    ),
    (
        "set_saved",
        &[Ty::Var, Ty::Bool],
        None,
        Cap::RephaseFunction,
    ),
    (
        "set_local_best",
        &[Ty::Var, Ty::Bool],
        None,
        Cap::RephaseFunction,
    ),
    (
        "set_user_pol",
        &[Ty::Var, Ty::Bool],
        None,
        Cap::RephaseFunction,
    ),
    ("set_activity", &[Ty::Var, Ty::Real], None, Cap::VarBump),
    ("heap_update", &[Ty::Var], None, Cap::VarBump),
    ("heap_insert", &[Ty::Var], None, Cap::VarBump),
    ("in_heap", &[Ty::Var], Some(Ty::Bool), Cap::VarBump),
    ("heap_top_activity", &[], Some(Ty::Real), Cap::VarBump),
    ("is_unassigned", &[Ty::Var], Some(Ty::Bool), Cap::VarBump),
    ("cla_activity", &[Ty::Clause], Some(Ty::Real), Cap::ClaBump),
    (
        "set_cla_activity",
        &[Ty::Clause, Ty::Real],
        None,
        Cap::ClaBump,
    ),
    ("rescale_cla_activity", &[Ty::Real], None, Cap::ClaBump),
    ("clamp_cla_activity_min", &[Ty::Real], None, Cap::ClaBump),
];

const NUMERIC_BUILTINS: &[&str] = &["min", "max", "abs", "floor", "trunc", "real", "log", "sqrt"];

pub fn is_known_function(name: &str) -> bool {
    VIEW_FUNCS.iter().any(|(n, ..)| *n == name) || NUMERIC_BUILTINS.contains(&name)
}

struct Scope {
    locals: Vec<(String, Ty)>,
}

pub struct Checker {
    slot: Slot,
    scopes: Vec<Scope>,
    diags: Vec<Diagnostic>,
}

/// Checks `program` against its slot signature and capability table.
pub fn check(program: &DslProgram) -> Result<(), Vec<Diagnostic>> {
    let mut checker = Checker {
        slot: program.slot,
        scopes: vec![Scope { locals: Vec::new() }],
        diags: Vec::new(),
    };
    checker.check_body(&program.body);
    if program.slot.returns_bool() && !definitely_returns(&program.body) {
        checker.diags.push(Diagnostic::new(
            DiagCode::MissingReturn,
            format!(
                "condition slot {} must return a bool on every path",
                program.slot
            ),
            Span::new(1, 1),
        ));
    }
    if checker.diags.is_empty() {
        Ok(())
    } else {
        Err(checker.diags)
    }
}

/// True when every execution path through `stmts` hits a `return`.
fn definitely_returns(stmts: &[Stmt]) -> bool {
    stmts.iter().any(|stmt| match stmt {
        Stmt::Return { .. } => true,
        Stmt::If {
            then_branch,
            else_branch,
            ..
        } => definitely_returns(then_branch) && definitely_returns(else_branch),
        _ => false,
    })
}

impl Checker {
    fn error(&mut self, code: DiagCode, message: String, span: Span) {
        self.diags.push(Diagnostic::new(code, message, span));
    }

    fn lookup_local(&self, name: &str) -> Option<Ty> {
        for scope in self.scopes.iter().rev() {
            if let Some((_, ty)) = scope.locals.iter().rev().find(|(n, _)| n == name) {
                return Some(*ty);
            }
        }
        None
    }

    fn lookup_param(&self, name: &str) -> Option<Ty> {
        slot_params(self.slot)
            .iter()
            .find(|(n, _)| *n == name)
            .map(|&(_, ty)| ty)
    }

    fn current_scope_has(&self, name: &str) -> bool {
        self.scopes
            .last()
            .map(|s| s.locals.iter().any(|(n, _)| n == name))
            .unwrap_or(false)
    }

    fn check_body(&mut self, stmts: &[Stmt]) {
        for stmt in stmts {
            self.check_stmt(stmt);
        }
    }

    fn check_block(&mut self, stmts: &[Stmt], extra: Option<(String, Ty)>) {
        self.scopes.push(Scope { locals: Vec::new() });
        if let Some((name, ty)) = extra {
            self.scopes.last_mut().unwrap().locals.push((name, ty));
        }
        self.check_body(stmts);
        self.scopes.pop();
    }

    fn check_stmt(&mut self, stmt: &Stmt) {
        match stmt {
            Stmt::Let { name, value, span } => {
                let ty = self.check_expr(value);
                if self.current_scope_has(name) {
                    self.error(
                        DiagCode::DuplicateLocal,
                        format!("local `{name}` already declared in this scope"),
                        *span,
                    );
                } else if self.lookup_param(name).is_some() {
                    self.error(
                        DiagCode::DuplicateLocal,
                        format!("`{name}` is a parameter and cannot be redeclared"),
                        *span,
                    );
                }
                if let Some(ty) = ty {
                    if matches!(ty, Ty::Var | Ty::Clause) {
                        self.error(
                            DiagCode::TypeMismatch,
                            format!("locals may not hold `{ty}` values"),
                            *span,
                        );
                    }
                    self.scopes
                        .last_mut()
                        .unwrap()
                        .locals
                        .push((name.clone(), ty));
                }
            }
            Stmt::Assign { name, value, span } => {
                let value_ty = self.check_expr(value);
                let target_ty = if let Some(ty) = self.lookup_local(name) {
                    Some(ty)
                } else if self.lookup_param(name).is_some() {
                    self.error(
                        DiagCode::IllegalWrite,
                        format!("cannot assign to parameter `{name}`"),
                        *span,
                    );
                    None
                } else if let Some(ty) = scalar_field_ty(name) {
                    if writable_fields(self.slot).contains(&name.as_str()) {
                        Some(ty)
                    } else {
                        self.error(
                            DiagCode::IllegalWrite,
                            format!("field `{name}` is read-only in slot {}", self.slot),
                            *span,
                        );
                        None
                    }
                } else {
                    self.error(
                        DiagCode::UnknownIdentifier,
                        format!("unknown assignment target `{name}`"),
                        *span,
                    );
                    None
                };
                if let (Some(target), Some(value)) = (target_ty, value_ty) {
                    let ok = matches!(
                        (target, value),
                        (Ty::Int, Ty::Int)
                            | (Ty::Bool, Ty::Bool)
                            | (Ty::Real, Ty::Real)
                            | (Ty::Real, Ty::Int)
                    );
                    if !ok {
                        let hint = if target == Ty::Int && value == Ty::Real {
                            " (use trunc(..) for an explicit conversion)"
                        } else {
                            ""
                        };
                        self.error(
                            DiagCode::TypeMismatch,
                            format!("cannot assign `{value}` to `{name}` of type `{target}`{hint}"),
                            *span,
                        );
                    }
                }
            }
            Stmt::If {
                cond,
                then_branch,
                else_branch,
                span,
            } => {
                if let Some(ty) = self.check_expr(cond) {
                    if ty != Ty::Bool {
                        self.error(
                            DiagCode::TypeMismatch,
                            format!("if-condition must be bool, found `{ty}`"),
                            *span,
                        );
                    }
                }
                self.check_block(then_branch, None);
                self.check_block(else_branch, None);
            }
            Stmt::Return { value, span } => {
                let value_ty = value.as_ref().and_then(|e| self.check_expr(e));
                if self.slot.returns_bool() {
                    match (value, value_ty) {
                        (None, _) => self.error(
                            DiagCode::ReturnTypeMismatch,
                            format!("condition slot {} must return a bool value", self.slot),
                            *span,
                        ),
                        (Some(_), Some(ty)) if ty != Ty::Bool => self.error(
                            DiagCode::ReturnTypeMismatch,
                            format!(
                                "condition slot {} must return bool, found `{ty}`",
                                self.slot
                            ),
                            *span,
                        ),
                        _ => {}
                    }
                } else if value.is_some() {
                    self.error(
                        DiagCode::ReturnTypeMismatch,
                        format!("slot {} returns nothing; use a bare `return;`", self.slot),
                        *span,
                    );
                }
            }
            Stmt::ForEachVar { name, body, span } => {
                if self.lookup_param(name).is_some() {
                    self.error(
                        DiagCode::DuplicateLocal,
                        format!("loop variable `{name}` shadows a parameter"),
                        *span,
                    );
                }
                self.check_block(body, Some((name.clone(), Ty::Var)));
            }
            Stmt::Call { call, span } => {
                if let Some(Some(ty)) = self.check_call(call, *span) {
                    self.error(
                        DiagCode::TypeMismatch,
                        format!("result of `{}` (type `{ty}`) is discarded", call.name),
                        *span,
                    )
                }
            }
        }
    }

    fn check_expr(&mut self, expr: &Expr) -> Option<Ty> {
        match expr {
            Expr::Int(..) => Some(Ty::Int),
            Expr::Real(..) => Some(Ty::Real),
            Expr::Bool(..) => Some(Ty::Bool),
            Expr::Ident(name, span) => {
                if let Some(ty) = self.lookup_local(name) {
                    Some(ty)
                } else if let Some(ty) = self.lookup_param(name) {
                    Some(ty)
                } else if let Some(ty) = scalar_field_ty(name) {
                    Some(ty)
                } else {
                    self.error(
                        DiagCode::UnknownIdentifier,
                        format!("unknown identifier `{name}`"),
                        *span,
                    );
                    None
                }
            }
            Expr::Call(call, span) => match self.check_call(call, *span) {
                Some(Some(ty)) => Some(ty),
                Some(None) => {
                    self.error(
                        DiagCode::TypeMismatch,
                        format!(
                            "`{}` returns nothing and cannot be used as a value",
                            call.name
                        ),
                        *span,
                    );
                    None
                }
                None => None,
            },
            Expr::Unary(op, inner, span) => {
                let ty = self.check_expr(inner)?;
                match op {
                    UnOp::Not => {
                        if ty == Ty::Bool {
                            Some(Ty::Bool)
                        } else {
                            self.error(
                                DiagCode::TypeMismatch,
                                format!("`!` needs a bool operand, found `{ty}`"),
                                *span,
                            );
                            None
                        }
                    }
                    UnOp::Neg => match ty {
                        Ty::Int => Some(Ty::Int),
                        Ty::Real => Some(Ty::Real),
                        _ => {
                            self.error(
                                DiagCode::TypeMismatch,
                                format!("`-` needs a numeric operand, found `{ty}`"),
                                *span,
                            );
                            None
                        }
                    },
                }
            }
            Expr::Binary(op, lhs, rhs, span) => {
                let lt = self.check_expr(lhs);
                let rt = self.check_expr(rhs);
                let (lt, rt) = (lt?, rt?);
                let numeric = |t: Ty| matches!(t, Ty::Int | Ty::Real);
                match op {
                    BinOp::Add | BinOp::Sub | BinOp::Mul | BinOp::Div | BinOp::Rem => {
                        if numeric(lt) && numeric(rt) {
                            if lt == Ty::Int && rt == Ty::Int {
                                Some(Ty::Int)
                            } else {
                                Some(Ty::Real)
                            }
                        } else {
                            self.error(
                                DiagCode::TypeMismatch,
                                format!(
                                    "`{}` needs numeric operands, found `{lt}` and `{rt}`",
                                    op.symbol()
                                ),
                                *span,
                            );
                            None
                        }
                    }
                    BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => {
                        if numeric(lt) && numeric(rt) {
                            Some(Ty::Bool)
                        } else {
                            self.error(
                                DiagCode::TypeMismatch,
                                format!(
                                    "`{}` needs numeric operands, found `{lt}` and `{rt}`",
                                    op.symbol()
                                ),
                                *span,
                            );
                            None
                        }
                    }
                    BinOp::Eq | BinOp::Ne => {
                        if (numeric(lt) && numeric(rt)) || (lt == Ty::Bool && rt == Ty::Bool) {
                            Some(Ty::Bool)
                        } else {
                            self.error(
                                DiagCode::TypeMismatch,
                                format!("`{}` cannot compare `{lt}` with `{rt}`", op.symbol()),
                                *span,
                            );
                            None
                        }
                    }
                    BinOp::And | BinOp::Or => {
                        if lt == Ty::Bool && rt == Ty::Bool {
                            Some(Ty::Bool)
                        } else {
                            self.error(
                                DiagCode::TypeMismatch,
                                format!(
                                    "`{}` needs bool operands, found `{lt}` and `{rt}`",
                                    op.symbol()
                                ),
                                *span,
                            );
                            None
                        }
                    }
                }
            }
        }
    }

    /// Returns `None` if the call itself was invalid, `Some(ret)` otherwise.
    fn check_call(&mut self, call: &Call, span: Span) -> Option<Option<Ty>> {
        let name = call.name.as_str();

        if NUMERIC_BUILTINS.contains(&name) {
            let expected_arity = if matches!(name, "min" | "max") { 2 } else { 1 };
            if call.args.len() != expected_arity {
                self.error(
                    DiagCode::ArityMismatch,
                    format!(
                        "`{name}` takes {expected_arity} argument(s), found {}",
                        call.args.len()
                    ),
                    span,
                );
                return None;
            }
            let mut tys = Vec::new();
            for arg in &call.args {
                let ty = self.check_expr(arg)?;
                if !matches!(ty, Ty::Int | Ty::Real) {
                    self.error(
                        DiagCode::TypeMismatch,
                        format!("`{name}` needs numeric arguments, found `{ty}`"),
                        span,
                    );
                    return None;
                }
                tys.push(ty);
            }
            let ret = match name {
                "min" | "max" => {
                    if tys.iter().all(|&t| t == Ty::Int) {
                        Ty::Int
                    } else {
                        Ty::Real
                    }
                }
                "abs" => tys[0],
                "floor" | "trunc" => Ty::Int,
                "real" | "log" | "sqrt" => Ty::Real,
                _ => unreachable!(),
            };
            return Some(Some(ret));
        }

        let Some(&(_, params, ret, cap)) = VIEW_FUNCS.iter().find(|(n, ..)| *n == name) else {
            self.error(
                DiagCode::UnknownFunction,
                format!("unknown function `{name}`"),
                span,
            );
            return None;
        };
        if !cap.allows(self.slot) {
            self.error(
                DiagCode::IllegalCapability,
                format!("`{name}` is not available in slot {}", self.slot),
                span,
            );
            return None;
        }
        if call.args.len() != params.len() {
            self.error(
                DiagCode::ArityMismatch,
                format!(
                    "`{name}` takes {} argument(s), found {}",
                    params.len(),
                    call.args.len()
                ),
                span,
            );
            return None;
        }
        for (arg, &expected) in call.args.iter().zip(params) {
            let found = self.check_expr(arg)?;
            let ok = found == expected || (expected == Ty::Real && found == Ty::Int);
            if !ok {
                self.error(
                    DiagCode::TypeMismatch,
                    format!("`{name}` expects `{expected}`, found `{found}`"),
                    arg.span(),
                );
                return None;
            }
        }
        Some(ret)
    }
}
