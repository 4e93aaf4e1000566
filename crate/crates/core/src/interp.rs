//! Concrete semantics: executes ground transactions against a ground
//! blockchain state with revert atomicity.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::ast::*;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Value {
    Int(BigInt),
    Bool(bool),
    /// A total address-to-integer map; absent keys read as zero.
    Map(BTreeMap<BigInt, BigInt>),
}

impl Value {
    pub fn int(v: i64) -> Value {
        Value::Int(BigInt::from(v))
    }

    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            Value::Int(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn default_for(ty: &Ty) -> Value {
        match ty {
            Ty::Bool => Value::Bool(false),
            Ty::Mapping(_) => Value::Map(BTreeMap::new()),
            _ => Value::Int(BigInt::zero()),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(v) => write!(f, "{v}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Map(m) => {
                f.write_str("{")?;
                for (i, (k, v)) in m.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{k}: {v}")?;
                }
                f.write_str("}")
            }
        }
    }
}

/// Reads a total map with zero default.
pub fn map_get(m: &BTreeMap<BigInt, BigInt>, k: &BigInt) -> BigInt {
    m.get(k).cloned().unwrap_or_default()
}

/// Writes a total map, keeping the representation canonical (no zero entries).
pub fn map_set(m: &mut BTreeMap<BigInt, BigInt>, k: BigInt, v: BigInt) {
    if v.is_zero() {
        m.remove(&k);
    } else {
        m.insert(k, v);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcreteState {
    pub storage: BTreeMap<String, Value>,
    pub contract_balance: BigInt,
    pub accounts: BTreeMap<BigInt, BigInt>,
    pub block_number: BigInt,
    pub deployed: bool,
}

impl ConcreteState {
    /// The state before deployment: default storage, empty contract balance.
    pub fn genesis(c: &Contract, accounts: BTreeMap<BigInt, BigInt>) -> Self {
        let storage = c.state_vars.iter().map(|v| (v.name.clone(), Value::default_for(&v.ty))).collect();
        let mut accounts = accounts;
        accounts.retain(|_, v| !v.is_zero());
        ConcreteState {
            storage,
            contract_balance: BigInt::zero(),
            accounts,
            block_number: BigInt::zero(),
            deployed: false,
        }
    }

    pub fn account(&self, a: &BigInt) -> BigInt {
        map_get(&self.accounts, a)
    }

    /// Contract balance plus every account balance.
    pub fn total_funds(&self) -> BigInt {
        self.accounts.values().fold(self.contract_balance.clone(), |acc, v| acc + v)
    }

    pub fn map_entry(&self, var: &str, key: &BigInt) -> Option<BigInt> {
        match self.storage.get(var)? {
            Value::Map(m) => Some(map_get(m, key)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TxKind {
    Constructor,
    Call(String),
    Selfdestruct,
    Skip,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transaction {
    pub kind: TxKind,
    pub args: Vec<Value>,
    pub sender: BigInt,
    pub value: BigInt,
    pub block: BigInt,
}

impl Transaction {
    pub fn call(name: &str, args: Vec<Value>, sender: i64, value: i64, block: i64) -> Self {
        Transaction {
            kind: TxKind::Call(name.into()),
            args,
            sender: sender.into(),
            value: value.into(),
            block: block.into(),
        }
    }

    pub fn constructor(args: Vec<Value>, sender: i64, value: i64, block: i64) -> Self {
        Transaction { kind: TxKind::Constructor, ..Self::call("", args, sender, value, block) }
    }

    pub fn selfdestruct(sender: i64, value: i64, block: i64) -> Self {
        Transaction { kind: TxKind::Selfdestruct, ..Self::call("", Vec::new(), sender, value, block) }
    }

    pub fn skip(sender: i64, block: i64) -> Self {
        Transaction { kind: TxKind::Skip, ..Self::call("", Vec::new(), sender, 0, block) }
    }

    pub fn name(&self) -> &str {
        match &self.kind {
            TxKind::Constructor => CONSTRUCTOR,
            TxKind::Call(n) => n,
            TxKind::Selfdestruct => SELFDESTRUCT,
            TxKind::Skip => "skip",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepOutcome {
    pub next: ConcreteState,
    pub reverted: bool,
}

/// Precondition violations. These are distinct from reverts, which are
/// ordinary outcomes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpError {
    #[error("block {tx} precedes current block {current}")]
    BlockOrder { current: BigInt, tx: BigInt },
    #[error("unknown method `{0}`")]
    UnknownMethod(String),
    #[error("`{method}` expects {expected} arguments, got {got}")]
    Arity { method: String, expected: usize, got: usize },
    #[error("argument {index} of `{method}` has the wrong type")]
    ArgType { method: String, index: usize },
    #[error("sender {sender} holds {has}, cannot send {value}")]
    InsufficientFunds { sender: BigInt, has: BigInt, value: BigInt },
    #[error("negative transaction value or address")]
    Negative,
    #[error("contract is not deployed")]
    NotDeployed,
    #[error("contract is already deployed")]
    AlreadyDeployed,
    #[error("skip transactions carry no arguments or value")]
    SkipPayload,
    #[error("division by zero in property evaluation")]
    DivByZero,
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("ill-typed expression: {0}")]
    IllTyped(String),
    #[error("step {index}: {source}")]
    AtStep { index: usize, source: alloc::boxed::Box<InterpError> },
}

/// Why execution of a body stopped early.
enum Halt {
    Revert,
    Error(InterpError),
}

impl From<InterpError> for Halt {
    fn from(e: InterpError) -> Self {
        Halt::Error(e)
    }
}

struct TxEnv<'a> {
    sender: &'a BigInt,
    value: &'a BigInt,
    block: &'a BigInt,
    params: BTreeMap<&'a str, Value>,
}

/// Executes one transaction.
pub fn apply_tx(c: &Contract, s: &ConcreteState, t: &Transaction) -> Result<StepOutcome, InterpError> {
    if t.block < s.block_number {
        return Err(InterpError::BlockOrder { current: s.block_number.clone(), tx: t.block.clone() });
    }
    if t.value.is_negative() || t.sender.is_negative() {
        return Err(InterpError::Negative);
    }
    let method = match &t.kind {
        TxKind::Constructor if s.deployed => return Err(InterpError::AlreadyDeployed),
        TxKind::Constructor => Some(&c.ctor),
        _ if !s.deployed => return Err(InterpError::NotDeployed),
        TxKind::Call(name) => Some(c.method(name).ok_or_else(|| InterpError::UnknownMethod(name.clone()))?),
        TxKind::Selfdestruct => None,
        TxKind::Skip => {
            if !t.args.is_empty() || !t.value.is_zero() {
                return Err(InterpError::SkipPayload);
            }
            let mut next = s.clone();
            next.block_number = t.block.clone();
            return Ok(StepOutcome { next, reverted: false });
        }
    };
    if let Some(m) = method {
        check_args(m, &t.args)?;
    } else if !t.args.is_empty() {
        return Err(InterpError::Arity { method: SELFDESTRUCT.into(), expected: 0, got: t.args.len() });
    }
    let has = s.account(&t.sender);
    if has < t.value {
        return Err(InterpError::InsufficientFunds { sender: t.sender.clone(), has, value: t.value.clone() });
    }

    let mut next = s.clone();
    next.block_number = t.block.clone();
    let mut reverted_state = next.clone();
    map_set(&mut next.accounts, t.sender.clone(), &has - &t.value);
    next.contract_balance += &t.value;

    let Some(m) = method else {
        // selfdestruct: funds are injected, no code runs
        return Ok(StepOutcome { next, reverted: false });
    };
    let env = TxEnv {
        sender: &t.sender,
        value: &t.value,
        block: &t.block,
        params: m.params.iter().map(|p| p.name.as_str()).zip(t.args.iter().cloned()).collect(),
    };
    let result = if !m.payable && t.value.is_positive() {
        Err(Halt::Revert)
    } else {
        exec_block(c, &m.body, &mut next, &env)
    };
    match result {
        Ok(()) => {
            if matches!(t.kind, TxKind::Constructor) {
                next.deployed = true;
            }
            Ok(StepOutcome { next, reverted: false })
        }
        Err(Halt::Revert) => {
            reverted_state.block_number = t.block.clone();
            Ok(StepOutcome { next: reverted_state, reverted: true })
        }
        Err(Halt::Error(e)) => Err(e),
    }
}

fn check_args(m: &Method, args: &[Value]) -> Result<(), InterpError> {
    if m.params.len() != args.len() {
        return Err(InterpError::Arity { method: m.name.clone(), expected: m.params.len(), got: args.len() });
    }
    for (i, (p, a)) in m.params.iter().zip(args).enumerate() {
        let ok = match (&p.ty, a) {
            (Ty::Bool, Value::Bool(_)) => true,
            (Ty::Int, Value::Int(_)) => true,
            (Ty::UInt | Ty::Address, Value::Int(v)) => !v.is_negative(),
            _ => false,
        };
        if !ok {
            return Err(InterpError::ArgType { method: m.name.clone(), index: i });
        }
    }
    Ok(())
}

fn exec_block(c: &Contract, body: &[Stmt], st: &mut ConcreteState, env: &TxEnv<'_>) -> Result<(), Halt> {
    for s in body {
        match &s.kind {
            StmtKind::Require(e) => {
                if !eval_body(c, st, env, e)?.as_bool().unwrap_or(false) {
                    return Err(Halt::Revert);
                }
            }
            StmtKind::Assign(lv, e) => {
                let v = eval_body(c, st, env, e)?;
                let decl = c
                    .state_var(lv.root())
                    .ok_or_else(|| InterpError::Unbound(lv.root().into()))?;
                match lv {
                    LValue::Var(n) => {
                        if decl.ty == Ty::UInt && v.as_int().is_some_and(|x| x.is_negative()) {
                            return Err(Halt::Revert);
                        }
                        st.storage.insert(n.clone(), v);
                    }
                    LValue::MapEntry(n, k) => {
                        let key = int_of(eval_body(c, st, env, k)?)?;
                        let v = int_of(v)?;
                        if matches!(&decl.ty, Ty::Mapping(t) if **t == Ty::UInt) && v.is_negative() {
                            return Err(Halt::Revert);
                        }
                        match st.storage.get_mut(n) {
                            Some(Value::Map(m)) => map_set(m, key, v),
                            _ => return Err(InterpError::IllTyped(format!("`{n}` is not a mapping")).into()),
                        }
                    }
                }
            }
            StmtKind::Transfer { to, amount } => {
                let to = int_of(eval_body(c, st, env, to)?)?;
                let amount = int_of(eval_body(c, st, env, amount)?)?;
                if amount.is_negative() || amount > st.contract_balance {
                    return Err(Halt::Revert);
                }
                st.contract_balance -= &amount;
                let cur = st.account(&to);
                map_set(&mut st.accounts, to, cur + amount);
            }
            StmtKind::If { cond, then_branch, else_branch } => {
                let b = eval_body(c, st, env, cond)?.as_bool().unwrap_or(false);
                exec_block(c, if b { then_branch } else { else_branch }, st, env)?;
            }
        }
    }
    Ok(())
}

fn int_of(v: Value) -> Result<BigInt, InterpError> {
    match v {
        Value::Int(i) => Ok(i),
        other => Err(InterpError::IllTyped(format!("expected integer, found {other}"))),
    }
}

fn bool_of(v: Value) -> Result<bool, InterpError> {
    match v {
        Value::Bool(b) => Ok(b),
        other => Err(InterpError::IllTyped(format!("expected boolean, found {other}"))),
    }
}

/// Division truncating toward zero.
pub fn trunc_div(a: &BigInt, b: &BigInt) -> BigInt {
    let q = a.abs().div_floor(&b.abs());
    if a.is_negative() != b.is_negative() {
        -q
    } else {
        q
    }
}

/// Evaluation context: which state atoms read, and what the environment is.
struct EvalCx<'a> {
    pre: &'a ConcreteState,
    post: Option<&'a ConcreteState>,
    tx: Option<&'a TxEnv<'a>>,
    qenv: Option<&'a BTreeMap<String, BigInt>>,
    /// Division by zero reverts inside method bodies; it is an error in
    /// properties.
    in_body: bool,
}

fn eval_body(c: &Contract, st: &ConcreteState, env: &TxEnv<'_>, e: &Expr) -> Result<Value, Halt> {
    let cx = EvalCx { pre: st, post: None, tx: Some(env), qenv: None, in_body: true };
    eval(c, &cx, e, false)
}

fn eval(c: &Contract, cx: &EvalCx<'_>, e: &Expr, in_post: bool) -> Result<Value, Halt> {
    let st = if in_post { cx.post.unwrap_or(cx.pre) } else { cx.pre };
    Ok(match e {
        Expr::IntLit(v) | Expr::AddressLit(v) => Value::Int(v.clone()),
        Expr::BoolLit(b) => Value::Bool(*b),
        Expr::StateVar(n) => st.storage.get(n).cloned().ok_or_else(|| InterpError::Unbound(n.clone()))?,
        Expr::Param(n) => cx
            .tx
            .and_then(|t| t.params.get(n.as_str()).cloned())
            .ok_or_else(|| InterpError::Unbound(n.clone()))?,
        Expr::QVar(n) => Value::Int(
            cx.qenv
                .and_then(|q| q.get(n).cloned())
                .ok_or_else(|| InterpError::Unbound(n.clone()))?,
        ),
        Expr::MapGet(n, k) => {
            let key = int_of(eval(c, cx, k, in_post)?)?;
            Value::Int(st.map_entry(n, &key).ok_or_else(|| InterpError::Unbound(n.clone()))?)
        }
        Expr::MsgSender => Value::Int(cx.tx.ok_or_else(|| InterpError::Unbound("msg.sender".into()))?.sender.clone()),
        Expr::MsgValue => Value::Int(cx.tx.ok_or_else(|| InterpError::Unbound("msg.value".into()))?.value.clone()),
        Expr::BlockNumber => match cx.tx {
            Some(t) if !in_post => Value::Int(t.block.clone()),
            _ => Value::Int(st.block_number.clone()),
        },
        Expr::ContractBalance => Value::Int(st.contract_balance.clone()),
        Expr::AccountBalance(a) => {
            let a = int_of(eval(c, cx, a, in_post)?)?;
            Value::Int(st.account(&a))
        }
        Expr::Unary(UnOp::Neg, a) => Value::Int(-int_of(eval(c, cx, a, in_post)?)?),
        Expr::Unary(UnOp::Not, a) => Value::Bool(!bool_of(eval(c, cx, a, in_post)?)?),
        Expr::Post(a) => eval(c, cx, a, true)?,
        Expr::Binary(op, l, r) => match op {
            BinOp::And => {
                let lv = bool_of(eval(c, cx, l, in_post)?)?;
                Value::Bool(lv && bool_of(eval(c, cx, r, in_post)?)?)
            }
            BinOp::Or => {
                let lv = bool_of(eval(c, cx, l, in_post)?)?;
                Value::Bool(lv || bool_of(eval(c, cx, r, in_post)?)?)
            }
            BinOp::Eq | BinOp::Ne => {
                let eq = eval(c, cx, l, in_post)? == eval(c, cx, r, in_post)?;
                Value::Bool(if *op == BinOp::Eq { eq } else { !eq })
            }
            _ => {
                let a = int_of(eval(c, cx, l, in_post)?)?;
                let b = int_of(eval(c, cx, r, in_post)?)?;
                match op {
                    BinOp::Add => Value::Int(a + b),
                    BinOp::Sub => Value::Int(a - b),
                    BinOp::Mul => Value::Int(a * b),
                    BinOp::Div => {
                        if b.is_zero() {
                            return Err(if cx.in_body { Halt::Revert } else { InterpError::DivByZero.into() });
                        }
                        Value::Int(trunc_div(&a, &b))
                    }
                    BinOp::Lt => Value::Bool(a < b),
                    BinOp::Le => Value::Bool(a <= b),
                    BinOp::Gt => Value::Bool(a > b),
                    BinOp::Ge => Value::Bool(a >= b),
                    _ => unreachable!("logical operators handled above"),
                }
            }
        },
    })
}

fn unhalt(r: Result<Value, Halt>) -> Result<Value, InterpError> {
    r.map_err(|h| match h {
        Halt::Error(e) => e,
        Halt::Revert => InterpError::DivByZero,
    })
}

/// Evaluates a property or invariant expression in a single state.
pub fn eval_pre(c: &Contract, s: &ConcreteState, e: &Expr, env: &BTreeMap<String, BigInt>) -> Result<Value, InterpError> {
    let cx = EvalCx { pre: s, post: None, tx: None, qenv: Some(env), in_body: false };
    unhalt(eval(c, &cx, e, false))
}

/// Evaluates a consequent: `<tx>` subterms read `post`, the rest read `pre`.
pub fn eval_post(
    c: &Contract,
    pre: &ConcreteState,
    post: &ConcreteState,
    e: &Expr,
    env: &BTreeMap<String, BigInt>,
) -> Result<Value, InterpError> {
    let cx = EvalCx { pre, post: Some(post), tx: None, qenv: Some(env), in_body: false };
    unhalt(eval(c, &cx, e, false))
}

/// Executes a trace from the genesis state, returning every outcome.
pub fn run_trace(
    c: &Contract,
    txs: &[Transaction],
    initial_accounts: &BTreeMap<BigInt, BigInt>,
) -> Result<Vec<StepOutcome>, InterpError> {
    let mut state = ConcreteState::genesis(c, initial_accounts.clone());
    let mut out = Vec::with_capacity(txs.len());
    for (index, t) in txs.iter().enumerate() {
        let o = apply_tx(c, &state, t)
            .map_err(|e| InterpError::AtStep { index, source: alloc::boxed::Box::new(e) })?;
        state = o.next.clone();
        out.push(o);
    }
    Ok(out)
}
