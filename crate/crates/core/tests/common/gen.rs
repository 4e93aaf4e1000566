//! Seeded generators for well-formed contracts, properties and concrete
//! traces, and the per-step interpreter invariants.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::{BigInt, Sign};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use solvent_core::ast::*;
use solvent_core::interp::{apply_tx, ConcreteState, StepOutcome, Transaction, TxKind, Value};

/// Addresses used for senders, literals and arguments.
pub const ADDRS: i64 = 6;

pub struct Gen {
    rng: StdRng,
}

#[derive(Clone, Copy)]
enum Scope<'a> {
    Body { params: &'a [Param] },
    Property { qvars: &'a [String], post: bool },
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen { rng: StdRng::seed_from_u64(seed) }
    }

    fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    fn pick<'a, T>(&mut self, xs: &'a [T]) -> Option<&'a T> {
        (!xs.is_empty()).then(|| &xs[self.below(xs.len())])
    }

    fn scalar_ty(&mut self) -> Ty {
        [Ty::Int, Ty::UInt, Ty::Bool, Ty::Address][self.below(4)].clone()
    }

    pub fn contract(&mut self) -> Contract {
        let mut state_vars = Vec::new();
        for i in 0..self.rng.gen_range(1..=4) {
            let ty = if self.chance(0.3) {
                Ty::Mapping(Box::new(if self.chance(0.5) { Ty::UInt } else { Ty::Int }))
            } else {
                self.scalar_ty()
            };
            let immutable = !matches!(ty, Ty::Mapping(_)) && self.chance(0.2);
            state_vars.push(VarDecl { name: format!("s{i}"), ty, immutable, span: Span::default() });
        }
        let mut c = Contract {
            name: format!("C{}", self.below(100)),
            state_vars,
            ctor: Method { name: CONSTRUCTOR.into(), params: vec![], payable: false, body: vec![], span: Span::default() },
            methods: vec![],
            span: Span::default(),
        };
        c.ctor.params = self.params();
        c.ctor.payable = self.chance(0.5);
        c.ctor.body = self.body(&c, &c.ctor.params.clone(), true, 3, 2);
        for i in 0..self.rng.gen_range(1..=3) {
            let params = self.params();
            let payable = self.chance(0.5);
            let body = self.body(&c, &params, false, 4, 2);
            c.methods.push(Method { name: format!("m{i}"), params, payable, body, span: Span::default() });
        }
        c
    }

    fn params(&mut self) -> Vec<Param> {
        (0..self.rng.gen_range(0..=2)).map(|i| Param { name: format!("p{i}"), ty: self.scalar_ty() }).collect()
    }

    fn body(&mut self, c: &Contract, params: &[Param], ctor: bool, max: usize, depth: u32) -> Vec<Stmt> {
        (0..self.rng.gen_range(0..=max)).filter_map(|_| self.stmt(c, params, ctor, depth)).collect()
    }

    fn stmt(&mut self, c: &Contract, params: &[Param], ctor: bool, depth: u32) -> Option<Stmt> {
        let sc = Scope::Body { params };
        let kind = match self.below(if depth > 0 { 8 } else { 7 }) {
            0 | 1 => StmtKind::Require(self.bool_expr(c, sc, 2)),
            2..=4 => {
                let targets: Vec<&VarDecl> = c.state_vars.iter().filter(|v| ctor || !v.immutable).collect();
                let v = (*self.pick(&targets)?).clone();
                match &v.ty {
                    Ty::Mapping(_) => {
                        let k = self.addr_expr(c, sc);
                        StmtKind::Assign(LValue::MapEntry(v.name.clone(), k), self.num_expr(c, sc, 2))
                    }
                    ty => StmtKind::Assign(LValue::Var(v.name.clone()), self.expr_of(c, sc, ty, 2)),
                }
            }
            5 | 6 => StmtKind::Transfer { to: self.addr_expr(c, sc), amount: self.num_expr(c, sc, 2) },
            _ => StmtKind::If {
                cond: self.bool_expr(c, sc, 2),
                then_branch: self.body(c, params, ctor, 2, depth - 1),
                else_branch: if self.chance(0.5) { self.body(c, params, ctor, 2, depth - 1) } else { vec![] },
            },
        };
        Some(Stmt::new(kind))
    }

    fn expr_of(&mut self, c: &Contract, sc: Scope<'_>, ty: &Ty, d: u32) -> Expr {
        match ty {
            Ty::Bool => self.bool_expr(c, sc, d),
            Ty::Address => self.addr_expr(c, sc),
            _ => self.num_expr(c, sc, d),
        }
    }

    fn vars_of<'c>(c: &'c Contract, sc: Scope<'_>, want: impl Fn(&Ty) -> bool) -> Vec<Expr> {
        let mut out: Vec<Expr> = c.state_vars.iter().filter(|v| want(&v.ty)).map(|v| Expr::StateVar(v.name.clone())).collect();
        if let Scope::Body { params } = sc {
            out.extend(params.iter().filter(|p| want(&p.ty)).map(|p| Expr::Param(p.name.clone())));
        }
        out
    }

    /// Operands of an expression that may itself be wrapped in `<tx>`.
    fn pre(sc: Scope<'_>) -> Scope<'_> {
        match sc {
            Scope::Property { qvars, .. } => Scope::Property { qvars, post: false },
            body => body,
        }
    }

    fn wrap_post(&mut self, sc: Scope<'_>, e: Expr) -> Expr {
        match sc {
            Scope::Property { post: true, .. } if self.chance(0.4) => Expr::post(e),
            _ => e,
        }
    }

    fn num_expr(&mut self, c: &Contract, sc: Scope<'_>, d: u32) -> Expr {
        if d == 0 || self.chance(0.4) {
            let e = match self.below(7) {
                0 | 1 => Expr::int(self.rng.gen_range(0..=5)),
                2 | 3 => {
                    let vars = Self::vars_of(c, sc, Ty::is_numeric);
                    match self.pick(&vars) {
                        Some(v) => v.clone(),
                        None => Expr::int(1),
                    }
                }
                4 => {
                    let maps: Vec<String> =
                        c.state_vars.iter().filter(|v| matches!(v.ty, Ty::Mapping(_))).map(|v| v.name.clone()).collect();
                    match self.pick(&maps).cloned() {
                        Some(m) => Expr::MapGet(m, Box::new(self.addr_expr(c, Self::pre(sc)))),
                        None => Expr::ContractBalance,
                    }
                }
                5 => match sc {
                    Scope::Body { .. } if self.chance(0.5) => Expr::MsgValue,
                    _ => [Expr::ContractBalance, Expr::BlockNumber][self.below(2)].clone(),
                },
                _ => Expr::AccountBalance(Box::new(self.addr_expr(c, Self::pre(sc)))),
            };
            return self.wrap_post(sc, e);
        }
        match self.below(9) {
            0 => Expr::Unary(UnOp::Neg, Box::new(self.num_expr(c, sc, d - 1))),
            1 => {
                // Mostly linear: one side is usually a literal.
                let l = self.num_expr(c, sc, d - 1);
                let r = if self.chance(0.7) { Expr::int(self.rng.gen_range(0..=3)) } else { self.num_expr(c, sc, d - 1) };
                Expr::bin(BinOp::Mul, l, r)
            }
            2 => {
                let l = self.num_expr(c, sc, d - 1);
                let r = if self.chance(0.6) { Expr::int(self.rng.gen_range(1..=3)) } else { self.num_expr(c, sc, d - 1) };
                Expr::bin(BinOp::Div, l, r)
            }
            3..=5 => Expr::bin(BinOp::Add, self.num_expr(c, sc, d - 1), self.num_expr(c, sc, d - 1)),
            _ => Expr::bin(BinOp::Sub, self.num_expr(c, sc, d - 1), self.num_expr(c, sc, d - 1)),
        }
    }

    fn addr_expr(&mut self, c: &Contract, sc: Scope<'_>) -> Expr {
        let mut opts = Self::vars_of(c, sc, |t| *t == Ty::Address);
        match sc {
            Scope::Body { .. } => {
                opts.push(Expr::MsgSender);
                opts.push(Expr::MsgSender);
            }
            Scope::Property { qvars, .. } => opts.extend(qvars.iter().map(|q| Expr::QVar(q.clone()))),
        }
        if self.chance(0.25) || opts.is_empty() {
            return Expr::addr(self.rng.gen_range(0..ADDRS));
        }
        let e = self.pick(&opts).unwrap().clone();
        if matches!(e, Expr::StateVar(_)) {
            self.wrap_post(sc, e)
        } else {
            e
        }
    }

    fn bool_expr(&mut self, c: &Contract, sc: Scope<'_>, d: u32) -> Expr {
        if d == 0 || self.chance(0.2) {
            let vars = Self::vars_of(c, sc, |t| *t == Ty::Bool);
            return match self.pick(&vars) {
                Some(v) if self.chance(0.7) => {
                    let v = v.clone();
                    self.wrap_post(sc, v)
                }
                _ => Expr::BoolLit(self.chance(0.5)),
            };
        }
        let cmp = [BinOp::Eq, BinOp::Ne, BinOp::Lt, BinOp::Le, BinOp::Gt, BinOp::Ge];
        match self.below(7) {
            0 => Expr::not(self.bool_expr(c, sc, d - 1)),
            1 => Expr::bin(BinOp::And, self.bool_expr(c, sc, d - 1), self.bool_expr(c, sc, d - 1)),
            2 => Expr::bin(BinOp::Or, self.bool_expr(c, sc, d - 1), self.bool_expr(c, sc, d - 1)),
            3 => {
                let op = if self.chance(0.5) { BinOp::Eq } else { BinOp::Ne };
                Expr::bin(op, self.addr_expr(c, sc), self.addr_expr(c, sc))
            }
            _ => {
                let op = cmp[self.below(cmp.len())];
                Expr::bin(op, self.num_expr(c, sc, d - 1), self.num_expr(c, sc, d - 1))
            }
        }
    }

    pub fn property(&mut self, c: &Contract, i: usize) -> Property {
        let qvars: Vec<String> = (0..self.rng.gen_range(1..=2)).map(|j| format!("x{j}")).collect();
        let antecedent = self.bool_expr(c, Scope::Property { qvars: &qvars, post: false }, 2);
        let consequent = self.bool_expr(c, Scope::Property { qvars: &qvars, post: true }, 2);
        Property {
            name: format!("prop{i}"),
            actor: qvars[self.below(qvars.len())].clone(),
            bound_m: self.rng.gen_range(1..=3),
            qvars,
            antecedent,
            consequent,
            span: Span::default(),
        }
    }

    pub fn unit(&mut self) -> SourceUnit {
        let contract = self.contract();
        let properties = (0..self.rng.gen_range(0..=2)).map(|i| self.property(&contract, i)).collect();
        let invariants = (0..self.rng.gen_range(0..=2))
            .map(|_| self.bool_expr(&contract, Scope::Property { qvars: &[], post: false }, 2))
            .collect();
        SourceUnit { contract, properties, invariants }
    }

    pub fn accounts(&mut self) -> BTreeMap<BigInt, BigInt> {
        (0..ADDRS)
            .filter_map(|a| {
                let v = self.rng.gen_range(0..=8);
                (v > 0).then(|| (BigInt::from(a), BigInt::from(v)))
            })
            .collect()
    }

    fn arg(&mut self, ty: &Ty) -> Value {
        match ty {
            Ty::Bool => Value::Bool(self.chance(0.5)),
            Ty::Int => Value::int(self.rng.gen_range(-3..=5)),
            Ty::Address => Value::int(self.rng.gen_range(0..ADDRS)),
            _ => Value::int(self.rng.gen_range(0..=5)),
        }
    }

    /// A transaction the interpreter accepts in state `s`: nondecreasing
    /// block, a sender who can afford the value, well-typed arguments.
    pub fn tx(&mut self, c: &Contract, s: &ConcreteState) -> Transaction {
        let sender = BigInt::from(self.rng.gen_range(0..ADDRS));
        let funds = s.account(&sender);
        let value = if funds.sign() == Sign::NoSign || self.chance(0.4) {
            BigInt::from(0)
        } else {
            BigInt::from(self.rng.gen_range(1..=3)).min(funds)
        };
        let block = &s.block_number + [0, 0, 1, 3, 10][self.below(5)];
        let (kind, params) = if !s.deployed {
            (TxKind::Constructor, c.ctor.params.clone())
        } else if self.chance(0.1) {
            (TxKind::Selfdestruct, vec![])
        } else {
            let m = &c.methods[self.below(c.methods.len())];
            (TxKind::Call(m.name.clone()), m.params.clone())
        };
        let args = params.iter().map(|p| self.arg(&p.ty)).collect();
        Transaction { kind, args, sender, value, block }
    }

    /// Up to `len` transactions starting with the constructor, with every
    /// outcome. Stops early only if the interpreter rejects a step, which
    /// the generator is meant to rule out.
    pub fn trace(
        &mut self,
        c: &Contract,
        accounts: &BTreeMap<BigInt, BigInt>,
        len: usize,
    ) -> (Vec<Transaction>, Vec<StepOutcome>) {
        let mut s = ConcreteState::genesis(c, accounts.clone());
        let (mut txs, mut outs) = (Vec::new(), Vec::new());
        for _ in 0..len {
            let t = self.tx(c, &s);
            let o = apply_tx(c, &s, &t).expect("generated transactions satisfy the preconditions");
            s = o.next.clone();
            txs.push(t);
            outs.push(o);
        }
        (txs, outs)
    }
}

/// Conservation, revert atomicity, block monotonicity and nonnegativity for
/// one step.
pub fn check_step(c: &Contract, pre: &ConcreteState, t: &Transaction, o: &StepOutcome) -> Result<(), String> {
    let post = &o.next;
    if pre.total_funds() != post.total_funds() {
        return Err(format!("funds {} -> {}", pre.total_funds(), post.total_funds()));
    }
    if post.block_number != t.block || post.block_number < pre.block_number {
        return Err(format!("block {} -> {} (tx {})", pre.block_number, post.block_number, t.block));
    }
    if o.reverted {
        let mut expect = pre.clone();
        expect.block_number = t.block.clone();
        if *post != expect {
            return Err("reverted step changed state".into());
        }
    }
    if post.contract_balance.sign() == Sign::Minus || post.accounts.values().any(|v| v.sign() != Sign::Plus) {
        return Err("negative or non-canonical balance".into());
    }
    for v in &c.state_vars {
        let bad = match (&v.ty, &post.storage[&v.name]) {
            (Ty::UInt | Ty::Address, Value::Int(x)) => x.sign() == Sign::Minus,
            (Ty::Mapping(inner), Value::Map(m)) => {
                m.values().any(|x| x.sign() == Sign::NoSign) || (**inner == Ty::UInt && m.values().any(|x| x.sign() == Sign::Minus))
            }
            (Ty::Int, Value::Int(_)) | (Ty::Bool, Value::Bool(_)) => false,
            _ => true,
        };
        if bad {
            return Err(format!("`{}` holds {}", v.name, post.storage[&v.name]));
        }
    }
    Ok(())
}
