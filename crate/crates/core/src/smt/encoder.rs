//! Transition relation, deployment, and negated liquidity properties.
//!
//! Selector tags: methods are numbered by declaration order, followed by
//! selfdestruct and then skip. Skip only occurs in the existential suffix.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;

use super::term::{self, Sort, Term};
use super::{select_logic, AddrRef, DecodeField, EncodedQuery, QueryKind};
use crate::ast::*;
use crate::interp::{ConcreteState, Transaction, TxKind, Value};

fn sort_of(ty: &Ty) -> Sort {
    match ty {
        Ty::Bool => Sort::Bool,
        Ty::Mapping(_) => Sort::IntArray,
        _ => Sort::Int,
    }
}

fn zero() -> Term {
    Term::int(0)
}

fn ge0(t: Term) -> Term {
    term::cmp(">=", t, zero())
}

/// One blockchain state as terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub storage: BTreeMap<String, Term>,
    pub balance: Term,
    pub accounts: Term,
    pub block: Term,
}

impl Frame {
    fn merge(cond: &Term, a: &Frame, b: &Frame) -> Frame {
        Frame {
            storage: a
                .storage
                .iter()
                .map(|(k, v)| (k.clone(), term::ite(cond.clone(), v.clone(), b.storage[k].clone())))
                .collect(),
            balance: term::ite(cond.clone(), a.balance.clone(), b.balance.clone()),
            accounts: term::ite(cond.clone(), a.accounts.clone(), b.accounts.clone()),
            block: term::ite(cond.clone(), a.block.clone(), b.block.clone()),
        }
    }
}

/// Symbols of one transaction. Argument slots are shared between methods
/// by position; unused slots are `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TxVars {
    pub sel: Option<Term>,
    pub ints: Vec<Option<Term>>,
    pub bools: Vec<Option<Term>>,
    pub sender: Term,
    pub value: Term,
    pub block: Term,
}

impl TxVars {
    fn arg(&self, pos: usize, ty: &Ty) -> Term {
        let slot = if *ty == Ty::Bool { &self.bools[pos] } else { &self.ints[pos] };
        slot.clone().expect("argument slot declared for every parameter position")
    }
}

/// A deployment followed by `k - 1` transactions with no property attached.
#[derive(Debug, Clone)]
pub struct Chain {
    pub query: EncodedQuery,
    pub genesis_accounts: Term,
    pub txs: Vec<TxVars>,
    /// State after each transaction; `frames[0]` follows deployment.
    pub frames: Vec<Frame>,
}

struct Cx<'a> {
    pre: &'a Frame,
    post: Option<&'a Frame>,
    tx: Option<(&'a TxVars, &'a [Param])>,
    qvars: &'a BTreeMap<String, Term>,
}

/// Longest suffix whose states are substituted rather than `let`-bound.
const INLINE_SUFFIX: u32 = 2;

pub struct Encoder<'c> {
    c: &'c Contract,
    int_pos: Vec<bool>,
    bool_pos: Vec<bool>,
    addr_pos: Vec<bool>,
}

impl<'c> Encoder<'c> {
    pub fn new(c: &'c Contract) -> Self {
        let n = c.max_arity();
        let mut enc = Encoder { c, int_pos: alloc::vec![false; n], bool_pos: alloc::vec![false; n], addr_pos: alloc::vec![false; n] };
        for m in &c.methods {
            for (i, p) in m.params.iter().enumerate() {
                match p.ty {
                    Ty::Bool => enc.bool_pos[i] = true,
                    Ty::Address => {
                        enc.int_pos[i] = true;
                        enc.addr_pos[i] = true;
                    }
                    _ => enc.int_pos[i] = true,
                }
            }
        }
        enc
    }

    pub fn contract(&self) -> &'c Contract {
        self.c
    }

    pub fn selfdestruct_tag(&self) -> usize {
        self.c.methods.len()
    }

    pub fn skip_tag(&self) -> usize {
        self.c.methods.len() + 1
    }

    /// A frame whose components are the symbols `{prefix}.{var}`,
    /// `{prefix}$bal`, `{prefix}$acc` and `{prefix}$blk`.
    pub fn symbolic_frame(&self, prefix: &str) -> Frame {
        Frame {
            storage: self.c.state_vars.iter().map(|v| (v.name.clone(), Term::sym(format!("{prefix}.{}", v.name)))).collect(),
            balance: Term::sym(format!("{prefix}$bal")),
            accounts: Term::sym(format!("{prefix}$acc")),
            block: Term::sym(format!("{prefix}$blk")),
        }
    }

    /// Component names and sorts in declaration order, paired with the
    /// frame's terms.
    pub fn components<'f>(&self, prefix: &str, f: &'f Frame) -> Vec<(String, Sort, &'f Term)> {
        let mut out: Vec<(String, Sort, &'f Term)> = self
            .c
            .state_vars
            .iter()
            .map(|v| (format!("{prefix}.{}", v.name), sort_of(&v.ty), &f.storage[&v.name]))
            .collect();
        out.push((format!("{prefix}$bal"), Sort::Int, &f.balance));
        out.push((format!("{prefix}$acc"), Sort::IntArray, &f.accounts));
        out.push((format!("{prefix}$blk"), Sort::Int, &f.block));
        out
    }

    fn declare_frame(&self, prefix: &str, decls: &mut Vec<(String, Sort)>) -> Frame {
        let f = self.symbolic_frame(prefix);
        for (n, s, _) in self.components(prefix, &f) {
            decls.push((n, s));
        }
        f
    }

    /// The pre-deployment state: default storage, no contract funds, block 0.
    pub fn genesis_frame(&self, accounts: Term) -> Frame {
        Frame {
            storage: self
                .c
                .state_vars
                .iter()
                .map(|v| {
                    let t = match &v.ty {
                        Ty::Bool => Term::ff(),
                        Ty::Mapping(_) => term::const_array(zero()),
                        _ => zero(),
                    };
                    (v.name.clone(), t)
                })
                .collect(),
            balance: zero(),
            accounts,
            block: zero(),
        }
    }

    /// Component-wise equality. Array equalities are distributed over `ite`
    /// so no array-sorted `ite` remains; some solvers give up on those in
    /// the presence of quantifiers.
    fn frame_eq(a: &Frame, b: &Frame) -> Vec<Term> {
        let mut out: Vec<Term> = a.storage.iter().map(|(k, v)| array_eq(v.clone(), b.storage[k].clone())).collect();
        out.push(term::eq(a.balance.clone(), b.balance.clone()));
        out.push(array_eq(a.accounts.clone(), b.accounts.clone()));
        out.push(term::eq(a.block.clone(), b.block.clone()));
        out
    }

    /// Transaction symbols. With `ctor` set only the constructor's slots
    /// exist and there is no selector. A fixed `sender` is not declared.
    fn tx_vars(&self, prefix: &str, ctor: bool, sender: Option<Term>, out: &mut Vec<(String, Sort)>) -> TxVars {
        let n = self.c.max_arity();
        let mut tx = TxVars {
            sel: None,
            ints: alloc::vec![None; n],
            bools: alloc::vec![None; n],
            sender: Term::sym(format!("{prefix}$snd")),
            value: Term::sym(format!("{prefix}$val")),
            block: Term::sym(format!("{prefix}$blk")),
        };
        if !ctor {
            out.push((format!("{prefix}$sel"), Sort::Int));
            tx.sel = Some(Term::sym(format!("{prefix}$sel")));
        }
        let (ints, bools): (Vec<bool>, Vec<bool>) = if ctor {
            let mut ints = alloc::vec![false; n];
            let mut bools = alloc::vec![false; n];
            for (i, p) in self.c.ctor.params.iter().enumerate() {
                if p.ty == Ty::Bool {
                    bools[i] = true;
                } else {
                    ints[i] = true;
                }
            }
            (ints, bools)
        } else {
            (self.int_pos.clone(), self.bool_pos.clone())
        };
        for i in 0..n {
            if ints[i] {
                out.push((format!("{prefix}$a{i}"), Sort::Int));
                tx.ints[i] = Some(Term::sym(format!("{prefix}$a{i}")));
            }
            if bools[i] {
                out.push((format!("{prefix}$b{i}"), Sort::Bool));
                tx.bools[i] = Some(Term::sym(format!("{prefix}$b{i}")));
            }
        }
        match sender {
            Some(s) => tx.sender = s,
            None => out.push((format!("{prefix}$snd"), Sort::Int)),
        }
        out.push((format!("{prefix}$val"), Sort::Int));
        out.push((format!("{prefix}$blk"), Sort::Int));
        tx
    }

    fn eval(&self, cx: &Cx<'_>, e: &Expr, in_post: bool, pc: &Term, guards: &mut Vec<Term>) -> Term {
        let st = if in_post { cx.post.unwrap_or(cx.pre) } else { cx.pre };
        match e {
            Expr::IntLit(v) | Expr::AddressLit(v) => Term::Int(v.clone()),
            Expr::BoolLit(b) => Term::Bool(*b),
            Expr::StateVar(n) => st.storage[n].clone(),
            Expr::Param(n) => {
                let (tx, params) = cx.tx.expect("parameters only occur in method bodies");
                let pos = params.iter().position(|p| &p.name == n).expect("resolved parameter");
                tx.arg(pos, &params[pos].ty)
            }
            Expr::QVar(n) => cx.qvars[n].clone(),
            Expr::MapGet(n, k) => {
                let key = self.eval(cx, k, in_post, pc, guards);
                term::select(st.storage[n].clone(), key)
            }
            Expr::MsgSender => cx.tx.expect("msg.sender in body").0.sender.clone(),
            Expr::MsgValue => cx.tx.expect("msg.value in body").0.value.clone(),
            Expr::BlockNumber => st.block.clone(),
            Expr::ContractBalance => st.balance.clone(),
            Expr::AccountBalance(a) => {
                let a = self.eval(cx, a, in_post, pc, guards);
                term::select(st.accounts.clone(), a)
            }
            Expr::Unary(UnOp::Neg, a) => term::neg(self.eval(cx, a, in_post, pc, guards)),
            Expr::Unary(UnOp::Not, a) => term::not(self.eval(cx, a, in_post, pc, guards)),
            Expr::Post(a) => self.eval(cx, a, true, pc, guards),
            Expr::Binary(op, l, r) => {
                let lv = self.eval(cx, l, in_post, pc, guards);
                match op {
                    BinOp::And => {
                        let rpc = term::and([pc.clone(), lv.clone()]);
                        let rv = self.eval(cx, r, in_post, &rpc, guards);
                        term::and([lv, rv])
                    }
                    BinOp::Or => {
                        let rpc = term::and([pc.clone(), term::not(lv.clone())]);
                        let rv = self.eval(cx, r, in_post, &rpc, guards);
                        term::or([lv, rv])
                    }
                    _ => {
                        let rv = self.eval(cx, r, in_post, pc, guards);
                        match op {
                            BinOp::Add => term::add(lv, rv),
                            BinOp::Sub => term::sub(lv, rv),
                            BinOp::Mul => term::mul(lv, rv),
                            BinOp::Div => {
                                guards.push(term::and([pc.clone(), term::eq(rv.clone(), zero())]));
                                term::trunc_div(lv, rv)
                            }
                            BinOp::Eq => term::eq(lv, rv),
                            BinOp::Ne => term::not(term::eq(lv, rv)),
                            BinOp::Lt => term::cmp("<", lv, rv),
                            BinOp::Le => term::cmp("<=", lv, rv),
                            BinOp::Gt => term::cmp(">", lv, rv),
                            BinOp::Ge => term::cmp(">=", lv, rv),
                            BinOp::And | BinOp::Or => unreachable!(),
                        }
                    }
                }
            }
        }
    }

    /// Evaluates a property or invariant expression; division by zero is
    /// left to the solver's total `div`.
    fn eval_prop(&self, e: &Expr, pre: &Frame, post: Option<&Frame>, qvars: &BTreeMap<String, Term>) -> Term {
        let cx = Cx { pre, post, tx: None, qvars };
        self.eval(&cx, e, false, &Term::tt(), &mut Vec::new())
    }

    fn exec(&self, body: &[Stmt], st: &mut Frame, tx: &TxVars, params: &[Param], pc: &Term, reverts: &mut Vec<Term>) {
        let no_q = BTreeMap::new();
        for s in body {
            match &s.kind {
                StmtKind::Require(cond) => {
                    let cx = Cx { pre: st, post: None, tx: Some((tx, params)), qvars: &no_q };
                    let v = self.eval(&cx, cond, false, pc, reverts);
                    reverts.push(term::and([pc.clone(), term::not(v)]));
                }
                StmtKind::Assign(lv, rhs) => {
                    let cx = Cx { pre: st, post: None, tx: Some((tx, params)), qvars: &no_q };
                    let v = self.eval(&cx, rhs, false, pc, reverts);
                    let decl = self.c.state_var(lv.root()).expect("resolved state variable");
                    match lv {
                        LValue::Var(n) => {
                            if decl.ty == Ty::UInt {
                                reverts.push(term::and([pc.clone(), term::cmp("<", v.clone(), zero())]));
                            }
                            st.storage.insert(n.clone(), v);
                        }
                        LValue::MapEntry(n, k) => {
                            let key = self.eval(&cx, k, false, pc, reverts);
                            if matches!(&decl.ty, Ty::Mapping(t) if **t == Ty::UInt) {
                                reverts.push(term::and([pc.clone(), term::cmp("<", v.clone(), zero())]));
                            }
                            let arr = st.storage[n].clone();
                            st.storage.insert(n.clone(), term::store(arr, key, v));
                        }
                    }
                }
                StmtKind::Transfer { to, amount } => {
                    let cx = Cx { pre: st, post: None, tx: Some((tx, params)), qvars: &no_q };
                    let a = self.eval(&cx, to, false, pc, reverts);
                    let v = self.eval(&cx, amount, false, pc, reverts);
                    let bad = term::or([
                        term::cmp("<", v.clone(), zero()),
                        term::cmp(">", v.clone(), st.balance.clone()),
                    ]);
                    reverts.push(term::and([pc.clone(), bad]));
                    st.balance = term::sub(st.balance.clone(), v.clone());
                    let cur = term::select(st.accounts.clone(), a.clone());
                    st.accounts = term::store(st.accounts.clone(), a, term::add(cur, v));
                }
                StmtKind::If { cond, then_branch, else_branch } => {
                    let cx = Cx { pre: st, post: None, tx: Some((tx, params)), qvars: &no_q };
                    let cv = self.eval(&cx, cond, false, pc, reverts);
                    let mut t = st.clone();
                    self.exec(then_branch, &mut t, tx, params, &term::and([pc.clone(), cv.clone()]), reverts);
                    let mut f = st.clone();
                    self.exec(else_branch, &mut f, tx, params, &term::and([pc.clone(), term::not(cv.clone())]), reverts);
                    *st = Frame::merge(&cv, &t, &f);
                }
            }
        }
    }

    /// The frame after the prologue: sender debited, contract credited,
    /// block advanced.
    fn prologue(pre: &Frame, tx: &TxVars) -> Frame {
        let mut st = pre.clone();
        st.block = tx.block.clone();
        let has = term::select(st.accounts.clone(), tx.sender.clone());
        st.accounts = term::store(st.accounts.clone(), tx.sender.clone(), term::sub(has, tx.value.clone()));
        st.balance = term::add(st.balance.clone(), tx.value.clone());
        st
    }

    /// Executes a method body. Returns the post-state (the pre-state with
    /// the new block number if the call reverts) and the revert condition.
    pub fn encode_method(&self, m: &Method, pre: &Frame, tx: &TxVars) -> (Frame, Term) {
        let mut st = Self::prologue(pre, tx);
        let mut reverts = Vec::new();
        if !m.payable {
            reverts.push(term::cmp(">", tx.value.clone(), zero()));
        }
        self.exec(&m.body, &mut st, tx, &m.params, &Term::tt(), &mut reverts);
        let r = term::or(reverts);
        let mut reverted = pre.clone();
        reverted.block = tx.block.clone();
        (Frame::merge(&r, &reverted, &st), r)
    }

    /// Well-formedness of a transaction against its pre-state, independent
    /// of which method it selects.
    fn tx_env(pre: &Frame, tx: &TxVars) -> Vec<Term> {
        alloc::vec![
            ge0(tx.value.clone()),
            ge0(tx.sender.clone()),
            term::cmp(">=", term::select(pre.accounts.clone(), tx.sender.clone()), tx.value.clone()),
            term::cmp(">=", tx.block.clone(), pre.block.clone()),
        ]
    }

    fn arg_env(&self, params: &[Param], tx: &TxVars) -> Vec<Term> {
        params
            .iter()
            .enumerate()
            .filter(|(_, p)| matches!(p.ty, Ty::UInt | Ty::Address))
            .map(|(i, p)| ge0(tx.arg(i, &p.ty)))
            .collect()
    }

    /// The environment constraint and the symbolic post-state of one
    /// transaction after deployment.
    pub fn encode_transition(&self, pre: &Frame, tx: &TxVars, allow_skip: bool) -> (Term, Frame) {
        let sel = tx.sel.clone().expect("transition needs a selector");
        let is = |tag: usize| term::eq(sel.clone(), Term::int(tag as u64));
        let max = if allow_skip { self.skip_tag() } else { self.selfdestruct_tag() };
        let mut env = Self::tx_env(pre, tx);
        env.push(ge0(sel.clone()));
        env.push(term::cmp("<=", sel.clone(), Term::int(max as u64)));
        for (i, m) in self.c.methods.iter().enumerate() {
            let args = self.arg_env(&m.params, tx);
            if !args.is_empty() {
                env.push(term::implies(is(i), term::and(args)));
            }
        }
        let mut post = Self::prologue(pre, tx);
        if allow_skip {
            env.push(term::implies(is(self.skip_tag()), term::eq(tx.value.clone(), zero())));
            let mut skip = pre.clone();
            skip.block = tx.block.clone();
            post = Frame::merge(&is(self.skip_tag()), &skip, &post);
        }
        for (i, m) in self.c.methods.iter().enumerate().rev() {
            let (f, _) = self.encode_method(m, pre, tx);
            post = Frame::merge(&is(i), &f, &post);
        }
        (term::and(env), post)
    }

    fn qvar_terms(p: &Property) -> BTreeMap<String, Term> {
        p.qvars.iter().map(|q| (q.clone(), Term::sym(format!("q.{q}")))).collect()
    }

    /// `antecedent(reached) ∧ ¬∃ suffix. consequent`, with the qvars as
    /// free constants `q.<name>`.
    ///
    /// Short suffixes are substituted into the consequent so that array
    /// reads of the post-state simplify to reads of the reached state;
    /// longer ones bind each intermediate state with `let`.
    pub fn encode_negated_property(&self, p: &Property, reached: &Frame) -> Term {
        let qv = Self::qvar_terms(p);
        let actor = qv[&p.actor].clone();
        let mut parts: Vec<Term> = qv.values().map(|q| ge0(q.clone())).collect();
        parts.push(self.eval_prop(&p.antecedent, reached, None, &qv));

        let mut vars = Vec::new();
        let mut envs = Vec::new();
        let mut lets = Vec::new();
        let mut pre = reached.clone();
        for j in 1..=p.bound_m {
            let mut decls = Vec::new();
            let tx = self.tx_vars(&format!("s{j}"), false, Some(actor.clone()), &mut decls);
            vars.extend(decls);
            let (env, post) = self.encode_transition(&pre, &tx, true);
            envs.push(env);
            if p.bound_m <= INLINE_SUFFIX {
                pre = post;
            } else {
                let name = format!("u{j}");
                let sym = self.symbolic_frame(&name);
                lets.push(self.components(&name, &post).into_iter().map(|(n, _, t)| (n, t.clone())).collect::<Vec<_>>());
                pre = sym;
            }
        }
        let cons = self.eval_prop(&p.consequent, reached, Some(&pre), &qv);
        let mut body = term::implies(term::and(envs), term::not(cons));
        for binds in lets.into_iter().rev() {
            body = Term::Let(binds, alloc::boxed::Box::new(body));
        }
        parts.push(Term::Forall(vars, alloc::boxed::Box::new(body)));
        term::and(parts)
    }

    fn nonneg_accounts(acc: &Term) -> Term {
        Term::Forall(
            alloc::vec![("idx".into(), Sort::Int)],
            alloc::boxed::Box::new(ge0(term::select(acc.clone(), Term::sym("idx")))),
        )
    }

    /// Facts every reachable state satisfies by construction.
    fn structural_invariants(&self, f: &Frame) -> Vec<Term> {
        let mut out = Vec::new();
        for v in &self.c.state_vars {
            let t = &f.storage[&v.name];
            match &v.ty {
                Ty::UInt | Ty::Address => out.push(ge0(t.clone())),
                Ty::Mapping(inner) if **inner == Ty::UInt => out.push(Self::nonneg_accounts(t)),
                _ => {}
            }
        }
        out.push(ge0(f.balance.clone()));
        out.push(ge0(f.block.clone()));
        out.push(Self::nonneg_accounts(&f.accounts));
        out
    }

    /// Declares genesis and the constructor transaction, asserts a
    /// non-reverting deployment into frame `f0`.
    fn deployment(&self, decls: &mut Vec<(String, Sort)>, asserts: &mut Vec<Term>) -> (Term, TxVars, Frame) {
        let acc = Term::sym("fg$acc");
        decls.push(("fg$acc".into(), Sort::IntArray));
        asserts.push(Self::nonneg_accounts(&acc));
        let genesis = self.genesis_frame(acc.clone());
        let tx = self.tx_vars("t1", true, None, decls);
        let mut env = Self::tx_env(&genesis, &tx);
        env.extend(self.arg_env(&self.c.ctor.params, &tx));
        asserts.push(term::and(env));
        let (post, r) = self.encode_method(&self.c.ctor, &genesis, &tx);
        asserts.push(term::not(r));
        let f0 = self.declare_frame("f0", decls);
        asserts.extend(Self::frame_eq(&f0, &post));
        (acc, tx, f0)
    }

    fn unroll(&self, k: u32, decls: &mut Vec<(String, Sort)>, asserts: &mut Vec<Term>) -> (Term, Vec<TxVars>, Vec<Frame>) {
        let (acc, t1, f0) = self.deployment(decls, asserts);
        let mut txs = alloc::vec![t1];
        let mut frames = alloc::vec![f0];
        for i in 2..=k {
            let tx = self.tx_vars(&format!("t{i}"), false, None, decls);
            let (env, post) = self.encode_transition(frames.last().unwrap(), &tx, false);
            asserts.push(env);
            let f = self.declare_frame(&format!("f{}", i - 1), decls);
            asserts.extend(Self::frame_eq(&f, &post));
            txs.push(tx);
            frames.push(f);
        }
        (acc, txs, frames)
    }

    fn decode_map(&self, p: &Property, acc: &Term, txs: &[TxVars], reached: &Frame) -> Vec<(Term, DecodeField)> {
        let mut out = Vec::new();
        for (i, tx) in txs.iter().enumerate() {
            let step = i + 1;
            if let Some(sel) = &tx.sel {
                out.push((sel.clone(), DecodeField::Selector { step }));
            }
            for pos in 0..tx.ints.len() {
                if let Some(t) = &tx.ints[pos] {
                    out.push((t.clone(), DecodeField::Arg { step, pos, boolean: false }));
                }
                if let Some(t) = &tx.bools[pos] {
                    out.push((t.clone(), DecodeField::Arg { step, pos, boolean: true }));
                }
            }
            out.push((tx.sender.clone(), DecodeField::Sender { step }));
            out.push((tx.value.clone(), DecodeField::Value { step }));
            out.push((tx.block.clone(), DecodeField::Block { step }));
        }
        let qv = Self::qvar_terms(p);
        for q in &p.qvars {
            out.push((qv[q].clone(), DecodeField::QVar(q.clone())));
        }
        for v in &self.c.state_vars {
            if !matches!(v.ty, Ty::Mapping(_)) {
                out.push((reached.storage[&v.name].clone(), DecodeField::ReachedScalar(v.name.clone())));
            }
        }
        out.push((reached.balance.clone(), DecodeField::ReachedBalance));
        out.push((reached.block.clone(), DecodeField::ReachedBlock));

        let mut addrs: Vec<(AddrRef, Term)> = Vec::new();
        for (i, tx) in txs.iter().enumerate() {
            addrs.push((AddrRef::Sender(i + 1), tx.sender.clone()));
            for (pos, slot) in tx.ints.iter().enumerate() {
                let is_addr = if tx.sel.is_some() {
                    self.addr_pos[pos]
                } else {
                    self.c.ctor.params.get(pos).is_some_and(|p| p.ty == Ty::Address)
                };
                if let (true, Some(t)) = (is_addr, slot) {
                    addrs.push((AddrRef::Arg { step: i + 1, pos }, t.clone()));
                }
            }
        }
        for q in &p.qvars {
            addrs.push((AddrRef::QVar(q.clone()), qv[q].clone()));
        }
        for v in &self.c.state_vars {
            if v.ty == Ty::Address {
                addrs.push((AddrRef::StateVar(v.name.clone()), reached.storage[&v.name].clone()));
            }
        }
        for lit in self.address_literals(p) {
            addrs.push((AddrRef::Lit(lit.clone()), Term::Int(lit)));
        }
        for v in &self.c.state_vars {
            if matches!(v.ty, Ty::Mapping(_)) {
                for (r, t) in &addrs {
                    out.push((
                        term::select(reached.storage[&v.name].clone(), t.clone()),
                        DecodeField::ReachedMapEntry { var: v.name.clone(), addr: r.clone() },
                    ));
                }
            }
        }
        for (r, t) in &addrs {
            out.push((term::select(reached.accounts.clone(), t.clone()), DecodeField::ReachedAccount(r.clone())));
        }
        for (r, t) in &addrs {
            out.push((term::select(acc.clone(), t.clone()), DecodeField::GenesisAccount(r.clone())));
        }
        out
    }

    fn address_literals(&self, p: &Property) -> Vec<BigInt> {
        let mut lits = alloc::collections::BTreeSet::new();
        let mut visit = |e: &Expr| {
            e.walk(&mut |x| {
                if let Expr::AddressLit(v) = x {
                    lits.insert(v.clone());
                }
            })
        };
        visit(&p.antecedent);
        visit(&p.consequent);
        for m in core::iter::once(&self.c.ctor).chain(&self.c.methods) {
            stmt_exprs(&m.body, &mut visit);
        }
        lits.into_iter().collect()
    }
}

fn array_eq(lhs: Term, rhs: Term) -> Term {
    match rhs {
        Term::App("ite", mut parts) if matches!(parts[1], Term::App("store" | "ite", _) | Term::Sym(_) | Term::ConstArray(_)) => {
            let e = parts.pop().unwrap();
            let t = parts.pop().unwrap();
            let c = parts.pop().unwrap();
            term::ite(c, array_eq(lhs.clone(), t), array_eq(lhs, e))
        }
        rhs => term::eq(lhs, rhs),
    }
}

fn stmt_exprs(body: &[Stmt], f: &mut dyn FnMut(&Expr)) {
    for s in body {
        match &s.kind {
            StmtKind::Require(e) => f(e),
            StmtKind::Assign(lv, e) => {
                if let LValue::MapEntry(_, k) = lv {
                    f(k);
                }
                f(e);
            }
            StmtKind::Transfer { to, amount } => {
                f(to);
                f(amount);
            }
            StmtKind::If { cond, then_branch, else_branch } => {
                f(cond);
                stmt_exprs(then_branch, f);
                stmt_exprs(else_branch, f);
            }
        }
    }
}

pub(super) fn for_each_body_expr(c: &Contract, f: &mut dyn FnMut(&Expr)) {
    for m in core::iter::once(&c.ctor).chain(&c.methods) {
        stmt_exprs(&m.body, f);
    }
}

/// Bounded query: deployment, `k - 1` further transactions, then the
/// negated property on the reached state. Satisfiable iff a violation is
/// reachable in exactly `k` transactions.
pub fn build_bmc_query(c: &Contract, p: &Property, k: u32) -> EncodedQuery {
    assert!(k >= 1, "depth starts at 1");
    let enc = Encoder::new(c);
    let mut decls = Vec::new();
    let mut asserts = Vec::new();
    let (acc, txs, frames) = enc.unroll(k, &mut decls, &mut asserts);
    for q in &p.qvars {
        decls.push((format!("q.{q}"), Sort::Int));
    }
    let reached = frames.last().unwrap();
    asserts.push(enc.encode_negated_property(p, reached));
    let decode_map = enc.decode_map(p, &acc, &txs, reached);
    EncodedQuery { kind: QueryKind::Bmc(k), logic: select_logic(c, Some(p), &[]), decls, assertions: asserts, decode_map }
}

/// Unbounded query over one arbitrary state satisfying the structural
/// invariants and `invariants`. Unsatisfiable means the property holds in
/// every state satisfying them.
pub fn build_abstract_query(c: &Contract, p: &Property, invariants: &[Expr]) -> EncodedQuery {
    let enc = Encoder::new(c);
    let mut decls = Vec::new();
    let a = enc.declare_frame("a", &mut decls);
    for q in &p.qvars {
        decls.push((format!("q.{q}"), Sort::Int));
    }
    let mut asserts = enc.structural_invariants(&a);
    let none = BTreeMap::new();
    for inv in invariants {
        asserts.push(enc.eval_prop(inv, &a, None, &none));
    }
    asserts.push(enc.encode_negated_property(p, &a));
    EncodedQuery {
        kind: QueryKind::Abstract,
        logic: select_logic(c, Some(p), invariants),
        decls,
        assertions: asserts,
        decode_map: Vec::new(),
    }
}

/// Satisfiable iff `goal` can be false right after deployment.
pub fn build_invariant_init_query(c: &Contract, goal: &Expr) -> EncodedQuery {
    let enc = Encoder::new(c);
    let mut decls = Vec::new();
    let mut asserts = Vec::new();
    let (_, _, f0) = enc.deployment(&mut decls, &mut asserts);
    asserts.push(term::not(enc.eval_prop(goal, &f0, None, &BTreeMap::new())));
    EncodedQuery {
        kind: QueryKind::InvariantInit,
        logic: select_logic(c, None, core::slice::from_ref(goal)),
        decls,
        assertions: asserts,
        decode_map: Vec::new(),
    }
}

/// Satisfiable iff one transaction from a state satisfying the structural
/// invariants and `assumed` can falsify `goal`.
pub fn build_invariant_step_query(c: &Contract, assumed: &[Expr], goal: &Expr) -> EncodedQuery {
    let enc = Encoder::new(c);
    let mut decls = Vec::new();
    let a = enc.declare_frame("a", &mut decls);
    let none = BTreeMap::new();
    let mut asserts = enc.structural_invariants(&a);
    for inv in assumed {
        asserts.push(enc.eval_prop(inv, &a, None, &none));
    }
    let tx = enc.tx_vars("t", false, None, &mut decls);
    let (env, post) = enc.encode_transition(&a, &tx, false);
    asserts.push(env);
    asserts.push(term::not(enc.eval_prop(goal, &post, None, &none)));
    let mut all: Vec<Expr> = assumed.to_vec();
    all.push(goal.clone());
    EncodedQuery { kind: QueryKind::InvariantStep, logic: select_logic(c, None, &all), decls, assertions: asserts, decode_map: Vec::new() }
}

/// The transition system alone, unrolled to `k` transactions including
/// deployment.
pub fn encode_chain(c: &Contract, k: u32) -> Chain {
    assert!(k >= 1, "depth starts at 1");
    let enc = Encoder::new(c);
    let mut decls = Vec::new();
    let mut asserts = Vec::new();
    let (acc, txs, frames) = enc.unroll(k, &mut decls, &mut asserts);
    Chain {
        query: EncodedQuery { kind: QueryKind::Chain(k), logic: select_logic(c, None, &[]), decls, assertions: asserts, decode_map: Vec::new() },
        genesis_accounts: acc,
        txs,
        frames,
    }
}

fn map_term(m: &BTreeMap<BigInt, BigInt>) -> Term {
    m.iter().fold(term::const_array(zero()), |arr, (k, v)| term::store(arr, Term::Int(k.clone()), Term::Int(v.clone())))
}

/// Pins an account array to a concrete map.
pub fn accounts_equal(arr: &Term, accounts: &BTreeMap<BigInt, BigInt>) -> Term {
    term::eq(arr.clone(), map_term(accounts))
}

/// Pins every component of a frame to a concrete state.
pub fn state_equals(f: &Frame, s: &ConcreteState) -> Term {
    let mut parts = Vec::new();
    for (name, t) in &f.storage {
        let v = match &s.storage[name] {
            Value::Int(i) => Term::Int(i.clone()),
            Value::Bool(b) => Term::Bool(*b),
            Value::Map(m) => map_term(m),
        };
        parts.push(term::eq(t.clone(), v));
    }
    parts.push(term::eq(f.balance.clone(), Term::Int(s.contract_balance.clone())));
    parts.push(accounts_equal(&f.accounts, &s.accounts));
    parts.push(term::eq(f.block.clone(), Term::Int(s.block_number.clone())));
    term::and(parts)
}

/// Pins transaction symbols to a concrete transaction. Slots unused by the
/// selected method stay free.
pub fn tx_equals(c: &Contract, vars: &TxVars, t: &Transaction) -> Term {
    let mut parts = alloc::vec![
        term::eq(vars.sender.clone(), Term::Int(t.sender.clone())),
        term::eq(vars.value.clone(), Term::Int(t.value.clone())),
        term::eq(vars.block.clone(), Term::Int(t.block.clone())),
    ];
    let n = c.methods.len();
    let (tag, params): (Option<usize>, &[Param]) = match &t.kind {
        TxKind::Constructor => (None, &c.ctor.params),
        TxKind::Call(name) => {
            let i = c.methods.iter().position(|m| &m.name == name).expect("known method");
            (Some(i), &c.methods[i].params)
        }
        TxKind::Selfdestruct => (Some(n), &[]),
        TxKind::Skip => (Some(n + 1), &[]),
    };
    if let (Some(sel), Some(tag)) = (&vars.sel, tag) {
        parts.push(term::eq(sel.clone(), Term::int(tag as u64)));
    }
    for (i, (p, v)) in params.iter().zip(&t.args).enumerate() {
        let val = match v {
            Value::Bool(b) => Term::Bool(*b),
            Value::Int(x) => Term::Int(x.clone()),
            Value::Map(_) => continue,
        };
        parts.push(term::eq(vars.arg(i, &p.ty), val));
    }
    term::and(parts)
}
