//! Turning a model back into a concrete counterexample.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use super::{AddrRef, DecodeField, EncodedQuery, ModelValue};
use crate::ast::{Contract, Ty};
use crate::interp::{map_set, ConcreteState, Transaction, TxKind, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("expected {expected} model values, got {got}")]
    Count { expected: usize, got: usize },
    #[error("model value `{value}` for {field} has the wrong sort")]
    Sort { field: String, value: String },
    #[error("model has no value for {0}")]
    Missing(String),
    #[error("step {step} selects tag {tag}, which is not a prefix transaction")]
    Selector { step: usize, tag: BigInt },
    #[error("model gives address {addr} two different values in {what}")]
    Inconsistent { what: String, addr: BigInt },
}

/// The decoded values of the last state in the trace.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReachedSnapshot {
    /// Non-mapping state variables.
    pub scalars: BTreeMap<String, Value>,
    pub balance: BigInt,
    pub block: BigInt,
    /// Mapping entries at the addresses the model mentions.
    pub map_entries: BTreeMap<(String, BigInt), BigInt>,
    /// Account balances at the addresses the model mentions.
    pub accounts: BTreeMap<BigInt, BigInt>,
}

impl ReachedSnapshot {
    /// Descriptions of every field that differs from `s`.
    pub fn mismatches(&self, s: &ConcreteState) -> Vec<String> {
        let mut out = Vec::new();
        for (n, v) in &self.scalars {
            match s.storage.get(n) {
                Some(have) if have == v => {}
                have => out.push(format!("{n}: model {v}, interpreter {}", opt(have))),
            }
        }
        if self.balance != s.contract_balance {
            out.push(format!("balance: model {}, interpreter {}", self.balance, s.contract_balance));
        }
        if self.block != s.block_number {
            out.push(format!("block.number: model {}, interpreter {}", self.block, s.block_number));
        }
        for ((n, k), v) in &self.map_entries {
            let have = s.map_entry(n, k);
            if have.as_ref() != Some(v) {
                out.push(format!("{n}[{k}]: model {v}, interpreter {}", opt(have.as_ref())));
            }
        }
        for (a, v) in &self.accounts {
            let have = s.account(a);
            if &have != v {
                out.push(format!("balance[{a}]: model {v}, interpreter {have}"));
            }
        }
        out
    }
}

fn opt<T: core::fmt::Display>(v: Option<T>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_else(|| "<none>".into())
}

/// A violation witness read from a BMC model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    /// Deployment first.
    pub trace: Vec<Transaction>,
    pub qenv: BTreeMap<String, BigInt>,
    pub initial_accounts: BTreeMap<BigInt, BigInt>,
    pub reached: ReachedSnapshot,
}

#[derive(Default)]
struct Fields {
    sel: BTreeMap<usize, BigInt>,
    args: BTreeMap<(usize, usize, bool), ModelValue>,
    sender: BTreeMap<usize, BigInt>,
    value: BTreeMap<usize, BigInt>,
    block: BTreeMap<usize, BigInt>,
    qvars: BTreeMap<String, BigInt>,
    scalars: BTreeMap<String, ModelValue>,
}

fn int(field: &DecodeField, v: &ModelValue) -> Result<BigInt, DecodeError> {
    v.as_int()
        .cloned()
        .ok_or_else(|| DecodeError::Sort { field: format!("{field:?}"), value: format!("{v}") })
}

impl Fields {
    fn resolve(&self, r: &AddrRef) -> Result<BigInt, DecodeError> {
        let found = match r {
            AddrRef::Sender(s) => self.sender.get(s).cloned(),
            AddrRef::QVar(q) => self.qvars.get(q).cloned(),
            AddrRef::StateVar(n) => self.scalars.get(n).and_then(|v| v.as_int().cloned()),
            AddrRef::Lit(v) => Some(v.clone()),
            AddrRef::Arg { step, pos } => self.args.get(&(*step, *pos, false)).and_then(|v| v.as_int().cloned()),
        };
        found.ok_or_else(|| DecodeError::Missing(format!("{r:?}")))
    }

    fn arg(&self, step: usize, pos: usize, ty: &Ty) -> Result<Value, DecodeError> {
        let boolean = *ty == Ty::Bool;
        let v = self
            .args
            .get(&(step, pos, boolean))
            .ok_or_else(|| DecodeError::Missing(format!("argument {pos} of step {step}")))?;
        let field = DecodeField::Arg { step, pos, boolean };
        Ok(if boolean {
            Value::Bool(v.as_bool().ok_or_else(|| DecodeError::Sort { field: format!("{field:?}"), value: format!("{v}") })?)
        } else {
            Value::Int(int(&field, v)?)
        })
    }
}

fn insert_consistent(
    m: &mut BTreeMap<BigInt, BigInt>,
    addr: BigInt,
    v: BigInt,
    what: &str,
) -> Result<(), DecodeError> {
    match m.get(&addr) {
        Some(old) if *old != v => Err(DecodeError::Inconsistent { what: what.into(), addr }),
        _ => {
            m.insert(addr, v);
            Ok(())
        }
    }
}

/// Reads a counterexample out of the `get-value` answer to a BMC query.
pub fn decode_trace(c: &Contract, q: &EncodedQuery, values: &[ModelValue]) -> Result<Counterexample, DecodeError> {
    if values.len() != q.decode_map.len() {
        return Err(DecodeError::Count { expected: q.decode_map.len(), got: values.len() });
    }
    let mut f = Fields::default();
    let mut steps = 0;
    for ((_, field), v) in q.decode_map.iter().zip(values) {
        match field {
            DecodeField::Selector { step } => {
                f.sel.insert(*step, int(field, v)?);
            }
            DecodeField::Arg { step, pos, boolean } => {
                f.args.insert((*step, *pos, *boolean), v.clone());
            }
            DecodeField::Sender { step } => {
                steps = steps.max(*step);
                f.sender.insert(*step, int(field, v)?);
            }
            DecodeField::Value { step } => {
                f.value.insert(*step, int(field, v)?);
            }
            DecodeField::Block { step } => {
                f.block.insert(*step, int(field, v)?);
            }
            DecodeField::QVar(n) => {
                f.qvars.insert(n.clone(), int(field, v)?);
            }
            DecodeField::ReachedScalar(n) => {
                f.scalars.insert(n.clone(), v.clone());
            }
            _ => {}
        }
    }

    let mut trace = Vec::with_capacity(steps);
    for step in 1..=steps {
        let missing = |what: &str| DecodeError::Missing(format!("{what} of step {step}"));
        let sender = f.sender.get(&step).cloned().ok_or_else(|| missing("sender"))?;
        let value = f.value.get(&step).cloned().ok_or_else(|| missing("value"))?;
        let block = f.block.get(&step).cloned().ok_or_else(|| missing("block"))?;
        let (kind, params) = match f.sel.get(&step) {
            None if step == 1 => (TxKind::Constructor, c.ctor.params.as_slice()),
            None => return Err(missing("selector")),
            Some(tag) => match tag.to_usize() {
                Some(i) if i < c.methods.len() => (TxKind::Call(c.methods[i].name.clone()), c.methods[i].params.as_slice()),
                Some(i) if i == c.methods.len() => (TxKind::Selfdestruct, &[][..]),
                _ => return Err(DecodeError::Selector { step, tag: tag.clone() }),
            },
        };
        let args = params.iter().enumerate().map(|(i, p)| f.arg(step, i, &p.ty)).collect::<Result<Vec<_>, _>>()?;
        trace.push(Transaction { kind, args, sender, value, block });
    }

    let mut reached = ReachedSnapshot::default();
    let mut initial_accounts = BTreeMap::new();
    for ((_, field), v) in q.decode_map.iter().zip(values) {
        match field {
            DecodeField::ReachedScalar(n) => {
                let val = match v {
                    ModelValue::Int(i) => Value::Int(i.clone()),
                    ModelValue::Bool(b) => Value::Bool(*b),
                    ModelValue::Other(o) => {
                        return Err(DecodeError::Sort { field: format!("{field:?}"), value: o.clone() })
                    }
                };
                reached.scalars.insert(n.clone(), val);
            }
            DecodeField::ReachedBalance => reached.balance = int(field, v)?,
            DecodeField::ReachedBlock => reached.block = int(field, v)?,
            DecodeField::ReachedMapEntry { var, addr } => {
                let a = f.resolve(addr)?;
                let val = int(field, v)?;
                match reached.map_entries.get(&(var.clone(), a.clone())) {
                    Some(old) if *old != val => return Err(DecodeError::Inconsistent { what: var.clone(), addr: a }),
                    _ => {
                        reached.map_entries.insert((var.clone(), a), val);
                    }
                }
            }
            DecodeField::ReachedAccount(addr) => {
                insert_consistent(&mut reached.accounts, f.resolve(addr)?, int(field, v)?, "reached accounts")?;
            }
            DecodeField::GenesisAccount(addr) => {
                insert_consistent(&mut initial_accounts, f.resolve(addr)?, int(field, v)?, "initial accounts")?;
            }
            _ => {}
        }
    }
    let mut canonical = BTreeMap::new();
    for (a, v) in initial_accounts {
        if !v.is_zero() {
            map_set(&mut canonical, a, v);
        }
    }
    Ok(Counterexample { trace, qenv: f.qvars, initial_accounts: canonical, reached })
}
