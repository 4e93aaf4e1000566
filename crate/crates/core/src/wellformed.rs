//! Static checks: name resolution, typing, and the structural rules of
//! contracts and properties.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::ast::*;
use crate::diag::Diagnostic;

const RESERVED: &[&str] = &["balance", "st", "invariant", "selfdestruct", "constructor"];

/// Returns every violated rule. An empty list means the inputs are well formed.
/// The order of diagnostics is deterministic.
pub fn check_wellformed(c: &Contract, props: &[Property]) -> Vec<Diagnostic> {
    let mut ck = Checker { c, diags: Vec::new() };
    ck.contract();
    let mut names = BTreeSet::new();
    for p in props {
        if !names.insert(p.name.as_str()) {
            ck.diags.push(Diagnostic::error(p.span, "duplicate-property", format!("property `{}` declared twice", p.name)));
        }
        ck.property(p);
    }
    ck.diags
}

/// Checks candidate state invariants: boolean, no bound variables, no
/// transaction environment, no `<tx>` markers.
pub fn check_invariants(c: &Contract, invariants: &[Expr]) -> Vec<Diagnostic> {
    let mut ck = Checker { c, diags: Vec::new() };
    for inv in invariants {
        let ctx = Ctx { params: &[], qvars: &[], span: c.span, in_property: true, post_ok: false };
        ck.expect_bool(inv, &ctx);
    }
    ck.diags
}

/// The static type of an expression in a well-formed context, where
/// arithmetic results are `Int`.
pub fn type_of(c: &Contract, params: &[Param], qvars: &[String], e: &Expr) -> Option<Ty> {
    let mut ck = Checker { c, diags: Vec::new() };
    let ctx = Ctx { params, qvars, span: Span::default(), in_property: !qvars.is_empty(), post_ok: true };
    let t = ck.ty(e, &ctx);
    if ck.diags.is_empty() {
        t
    } else {
        None
    }
}

struct Checker<'a> {
    c: &'a Contract,
    diags: Vec<Diagnostic>,
}

#[derive(Clone, Copy)]
struct Ctx<'a> {
    params: &'a [Param],
    qvars: &'a [String],
    span: Span,
    in_property: bool,
    post_ok: bool,
}

impl Checker<'_> {
    fn err(&mut self, span: Span, rule: &'static str, msg: alloc::string::String) {
        self.diags.push(Diagnostic::error(span, rule, msg));
    }

    fn contract(&mut self) {
        let c = self.c;
        let mut seen = BTreeSet::new();
        for v in &c.state_vars {
            if !seen.insert(v.name.as_str()) {
                self.err(v.span, "duplicate-state-var", format!("state variable `{}` declared twice", v.name));
            }
            if RESERVED.contains(&v.name.as_str()) {
                self.err(v.span, "reserved-name", format!("`{}` is a built-in name", v.name));
            }
            if let Ty::Mapping(val) = &v.ty {
                if !val.is_numeric() {
                    self.err(v.span, "mapping-value", format!("mapping `{}` must have a numeric value type", v.name));
                }
            }
        }
        let mut seen = BTreeSet::new();
        for m in &c.methods {
            if !seen.insert(m.name.as_str()) {
                self.err(m.span, "duplicate-method", format!("method `{}` declared twice", m.name));
            }
            if RESERVED.contains(&m.name.as_str()) {
                self.err(m.span, "reserved-name", format!("`{}` is a built-in name", m.name));
            }
        }
        self.method(&c.ctor, true);
        for m in &c.methods {
            self.method(m, false);
        }
    }

    fn method(&mut self, m: &Method, is_ctor: bool) {
        let mut seen = BTreeSet::new();
        for p in &m.params {
            if !seen.insert(p.name.as_str()) {
                self.err(m.span, "duplicate-param", format!("parameter `{}` declared twice in `{}`", p.name, m.name));
            }
            if matches!(p.ty, Ty::Mapping(_)) {
                self.err(m.span, "param-type", format!("parameter `{}` cannot be a mapping", p.name));
            }
            if self.c.state_var(&p.name).is_some() || RESERVED.contains(&p.name.as_str()) {
                self.err(m.span, "shadowing", format!("parameter `{}` shadows a state variable or built-in", p.name));
            }
        }
        self.stmts(&m.body, &m.params, is_ctor);
    }

    fn stmts(&mut self, body: &[Stmt], params: &[Param], is_ctor: bool) {
        for s in body {
            let ctx = Ctx { params, qvars: &[], span: s.span, in_property: false, post_ok: false };
            match &s.kind {
                StmtKind::Require(e) => self.expect_bool(e, &ctx),
                StmtKind::Assign(lv, e) => {
                    let name = lv.root();
                    if params.iter().any(|p| p.name == name) {
                        self.err(s.span, "assign-param", format!("cannot assign to parameter `{name}`"));
                        continue;
                    }
                    let Some(decl) = self.c.state_var(name) else {
                        self.err(s.span, "unresolved-name", format!("unknown state variable `{name}`"));
                        continue;
                    };
                    if decl.immutable && !is_ctor {
                        self.err(s.span, "immutable-assign", format!("immutable `{name}` assigned outside the constructor"));
                    }
                    let target = match (lv, &decl.ty) {
                        (LValue::Var(_), Ty::Mapping(_)) => {
                            self.err(s.span, "mapping-as-value", format!("mapping `{name}` cannot be assigned whole"));
                            continue;
                        }
                        (LValue::Var(_), t) => t.clone(),
                        (LValue::MapEntry(_, k), Ty::Mapping(v)) => {
                            self.expect(k, &Ty::Address, &ctx);
                            (**v).clone()
                        }
                        (LValue::MapEntry(..), _) => {
                            self.err(s.span, "not-a-mapping", format!("`{name}` is not a mapping"));
                            continue;
                        }
                    };
                    self.expect(e, &target, &ctx);
                }
                StmtKind::Transfer { to, amount } => {
                    self.expect(to, &Ty::Address, &ctx);
                    self.expect(amount, &Ty::Int, &ctx);
                }
                StmtKind::If { cond, then_branch, else_branch } => {
                    self.expect_bool(cond, &ctx);
                    self.stmts(then_branch, params, is_ctor);
                    self.stmts(else_branch, params, is_ctor);
                }
            }
        }
    }

    fn property(&mut self, p: &Property) {
        if p.qvars.is_empty() {
            self.err(p.span, "no-binders", format!("property `{}` binds no variables", p.name));
        }
        let mut seen = BTreeSet::new();
        for q in &p.qvars {
            if !seen.insert(q.as_str()) {
                self.err(p.span, "duplicate-binder", format!("`{q}` bound twice in `{}`", p.name));
            }
            if self.c.state_var(q).is_some() || RESERVED.contains(&q.as_str()) {
                self.err(p.span, "shadowing", format!("binder `{q}` shadows a state variable or built-in"));
            }
        }
        if !p.qvars.contains(&p.actor) {
            self.err(p.span, "unbound-actor", format!("actor `{}` is not bound by `Forall`", p.actor));
        }
        if p.bound_m == 0 {
            self.err(p.span, "bound-zero", "transaction bound must be at least 1".into());
        }
        let ctx = Ctx { params: &[], qvars: &p.qvars, span: p.span, in_property: true, post_ok: false };
        self.expect_bool(&p.antecedent, &ctx);
        let ctx = Ctx { post_ok: true, ..ctx };
        self.expect_bool(&p.consequent, &ctx);
    }

    fn expect_bool(&mut self, e: &Expr, ctx: &Ctx<'_>) {
        self.expect(e, &Ty::Bool, ctx);
    }

    fn expect(&mut self, e: &Expr, want: &Ty, ctx: &Ctx<'_>) {
        if let Some(t) = self.ty(e, ctx) {
            let ok = match want {
                Ty::Int | Ty::UInt => t.is_numeric(),
                other => &t == other,
            };
            if !ok {
                self.err(ctx.span, "type-mismatch", format!("expected {want}, found {t}"));
            }
        }
    }

    fn ty(&mut self, e: &Expr, ctx: &Ctx<'_>) -> Option<Ty> {
        let span = ctx.span;
        match e {
            Expr::IntLit(_) => Some(Ty::Int),
            Expr::BoolLit(_) => Some(Ty::Bool),
            Expr::AddressLit(v) => {
                if v.sign() == num_bigint::Sign::Minus {
                    self.err(span, "negative-address", "address literals are nonnegative".into());
                }
                Some(Ty::Address)
            }
            Expr::StateVar(n) => match self.c.state_var(n) {
                Some(d) if matches!(d.ty, Ty::Mapping(_)) => {
                    self.err(span, "mapping-as-value", format!("mapping `{n}` used as a value"));
                    None
                }
                Some(d) => Some(d.ty.clone()),
                None => {
                    self.err(span, "unresolved-name", format!("unknown name `{n}`"));
                    None
                }
            },
            Expr::Param(n) => match ctx.params.iter().find(|p| &p.name == n) {
                Some(p) => Some(p.ty.clone()),
                None => {
                    self.err(span, "unresolved-name", format!("unknown parameter `{n}`"));
                    None
                }
            },
            Expr::QVar(n) => {
                if ctx.qvars.contains(n) {
                    Some(Ty::Address)
                } else {
                    self.err(span, "unresolved-name", format!("unbound variable `{n}`"));
                    None
                }
            }
            Expr::MapGet(n, k) => {
                self.expect(k, &Ty::Address, ctx);
                match self.c.state_var(n).map(|d| &d.ty) {
                    Some(Ty::Mapping(v)) => Some((**v).clone()),
                    Some(_) => {
                        self.err(span, "not-a-mapping", format!("`{n}` is not a mapping"));
                        None
                    }
                    None => {
                        self.err(span, "unresolved-name", format!("unknown mapping `{n}`"));
                        None
                    }
                }
            }
            Expr::MsgSender | Expr::MsgValue => {
                if ctx.in_property {
                    self.err(span, "env-in-property", "`msg` is not available in properties".into());
                    return None;
                }
                Some(if matches!(e, Expr::MsgSender) { Ty::Address } else { Ty::UInt })
            }
            Expr::BlockNumber | Expr::ContractBalance => Some(Ty::UInt),
            Expr::AccountBalance(a) => {
                self.expect(a, &Ty::Address, ctx);
                Some(Ty::UInt)
            }
            Expr::Unary(UnOp::Neg, a) => {
                self.expect(a, &Ty::Int, ctx);
                Some(Ty::Int)
            }
            Expr::Unary(UnOp::Not, a) => {
                self.expect(a, &Ty::Bool, ctx);
                Some(Ty::Bool)
            }
            Expr::Binary(op, l, r) => {
                if op.is_arith() {
                    self.expect(l, &Ty::Int, ctx);
                    self.expect(r, &Ty::Int, ctx);
                    Some(Ty::Int)
                } else if matches!(op, BinOp::And | BinOp::Or) {
                    self.expect(l, &Ty::Bool, ctx);
                    self.expect(r, &Ty::Bool, ctx);
                    Some(Ty::Bool)
                } else if matches!(op, BinOp::Eq | BinOp::Ne) {
                    let lt = self.ty(l, ctx)?;
                    let rt = self.ty(r, ctx)?;
                    let ok = (lt.is_numeric() && rt.is_numeric()) || lt == rt;
                    if !ok {
                        self.err(span, "type-mismatch", format!("cannot compare {lt} with {rt}"));
                    }
                    Some(Ty::Bool)
                } else {
                    self.expect(l, &Ty::Int, ctx);
                    self.expect(r, &Ty::Int, ctx);
                    Some(Ty::Bool)
                }
            }
            Expr::Post(inner) => {
                if !ctx.post_ok {
                    self.err(span, "misplaced-post", "`<tx>` is only allowed in a property consequent".into());
                    return None;
                }
                if inner.contains_post() {
                    self.err(span, "nested-post", "`<tx>` markers do not nest".into());
                    return None;
                }
                self.ty(inner, ctx)
            }
        }
    }
}
