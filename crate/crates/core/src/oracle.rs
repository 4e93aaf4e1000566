//! Exhaustive liquidity decision over finite domains.
//!
//! This is the ground-truth check for counterexamples: it searches every
//! actor-signed trace of at most `m` transactions whose arguments, values and
//! block advances range over small finite sets.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::ast::{Contract, Property, Ty};
use crate::interp::{apply_tx, eval_post, ConcreteState, InterpError, Transaction, TxKind, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteDomains {
    /// Candidate numeric arguments and transaction values.
    pub values: Vec<BigInt>,
    /// Candidate address arguments.
    pub addresses: Vec<BigInt>,
    /// Candidate block advances relative to the current block.
    pub block_offsets: Vec<BigInt>,
    /// Upper bound on the number of enumerated transactions.
    pub max_traces: u64,
}

impl Default for FiniteDomains {
    fn default() -> Self {
        FiniteDomains {
            values: (0..=3).map(BigInt::from).collect(),
            addresses: (0..=5).map(BigInt::from).collect(),
            block_offsets: [0, 1, 1000].into_iter().map(BigInt::from).collect(),
            max_traces: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("enumeration exceeded {0} transactions")]
    TooManyTraces(u64),
    #[error("actor `{0}` is unbound")]
    UnboundActor(String),
    #[error(transparent)]
    Interp(#[from] InterpError),
}

/// Returns a witness trace if some sequence of at most `p.bound_m`
/// transactions signed by the actor makes the consequent true from `s`.
pub fn find_liquidating_trace(
    c: &Contract,
    s: &ConcreteState,
    p: &Property,
    env: &BTreeMap<String, BigInt>,
    dom: &FiniteDomains,
) -> Result<Option<Vec<Transaction>>, OracleError> {
    let actor = env.get(&p.actor).cloned().ok_or_else(|| OracleError::UnboundActor(p.actor.clone()))?;
    let dom = enrich(dom, s, env);
    let mut search = Search { c, p, env, root: s, actor, dom: &dom, count: 0, path: Vec::new() };
    if search.dfs(s, p.bound_m)? {
        Ok(Some(search.path))
    } else {
        Ok(None)
    }
}

/// True iff some actor-signed trace of at most `p.bound_m` transactions
/// over the finite domains satisfies the consequent.
pub fn bruteforce_liquid(
    c: &Contract,
    s: &ConcreteState,
    p: &Property,
    env: &BTreeMap<String, BigInt>,
    dom: &FiniteDomains,
) -> Result<bool, OracleError> {
    Ok(find_liquidating_trace(c, s, p, env, dom)?.is_some())
}

/// Adds the numbers and addresses occurring in the state and environment to
/// the candidate sets.
fn enrich(dom: &FiniteDomains, s: &ConcreteState, env: &BTreeMap<String, BigInt>) -> FiniteDomains {
    let mut values: BTreeSet<BigInt> = dom.values.iter().cloned().collect();
    let mut addrs: BTreeSet<BigInt> = dom.addresses.iter().cloned().collect();
    values.insert(s.contract_balance.clone());
    for v in s.storage.values() {
        match v {
            Value::Int(i) => {
                values.insert(i.clone());
                if !i.is_negative() {
                    addrs.insert(i.clone());
                }
            }
            Value::Map(m) => {
                for (k, v) in m {
                    addrs.insert(k.clone());
                    values.insert(v.clone());
                }
            }
            Value::Bool(_) => {}
        }
    }
    for a in env.values() {
        addrs.insert(a.clone());
        values.insert(s.account(a));
    }
    FiniteDomains {
        values: values.into_iter().collect(),
        addresses: addrs.into_iter().collect(),
        block_offsets: dom.block_offsets.clone(),
        max_traces: dom.max_traces,
    }
}

struct Search<'a> {
    c: &'a Contract,
    p: &'a Property,
    env: &'a BTreeMap<String, BigInt>,
    root: &'a ConcreteState,
    actor: BigInt,
    dom: &'a FiniteDomains,
    count: u64,
    path: Vec<Transaction>,
}

impl Search<'_> {
    fn dfs(&mut self, st: &ConcreteState, left: u32) -> Result<bool, OracleError> {
        if eval_post(self.c, self.root, st, &self.p.consequent, self.env)?.as_bool() == Some(true) {
            return Ok(true);
        }
        if left == 0 {
            return Ok(false);
        }
        for t in self.candidates(st) {
            self.count += 1;
            if self.count > self.dom.max_traces {
                return Err(OracleError::TooManyTraces(self.dom.max_traces));
            }
            let out = match apply_tx(self.c, st, &t) {
                Ok(o) => o,
                Err(InterpError::InsufficientFunds { .. }) => continue,
                Err(e) => return Err(e.into()),
            };
            // a reverted step is indistinguishable from a skip to the same block
            if out.reverted {
                continue;
            }
            self.path.push(t);
            if self.dfs(&out.next, left - 1)? {
                return Ok(true);
            }
            self.path.pop();
        }
        Ok(false)
    }

    fn candidates(&self, st: &ConcreteState) -> Vec<Transaction> {
        let blocks: Vec<BigInt> = self.dom.block_offsets.iter().map(|o| &st.block_number + o).collect();
        let funds = st.account(&self.actor);
        let values: Vec<BigInt> =
            self.dom.values.iter().filter(|v| !v.is_negative() && **v <= funds).cloned().collect();
        let zero = [BigInt::zero()];
        let mut out = Vec::new();
        for m in &self.c.methods {
            let mut arg_lists: Vec<Vec<Value>> = alloc::vec![Vec::new()];
            for param in &m.params {
                let choices: Vec<Value> = match param.ty {
                    Ty::Bool => alloc::vec![Value::Bool(false), Value::Bool(true)],
                    Ty::Address => self.dom.addresses.iter().cloned().map(Value::Int).collect(),
                    Ty::UInt => self.dom.values.iter().filter(|v| !v.is_negative()).cloned().map(Value::Int).collect(),
                    _ => self.dom.values.iter().cloned().map(Value::Int).collect(),
                };
                arg_lists = arg_lists
                    .into_iter()
                    .flat_map(|prefix| {
                        choices.iter().map(move |ch| {
                            let mut v = prefix.clone();
                            v.push(ch.clone());
                            v
                        })
                    })
                    .collect();
            }
            let vals: &[BigInt] = if m.payable { &values } else { &zero };
            for args in &arg_lists {
                for v in vals {
                    for b in &blocks {
                        out.push(Transaction {
                            kind: TxKind::Call(m.name.clone()),
                            args: args.clone(),
                            sender: self.actor.clone(),
                            value: v.clone(),
                            block: b.clone(),
                        });
                    }
                }
            }
        }
        for v in values.iter().filter(|v| !v.is_zero()) {
            for b in &blocks {
                out.push(Transaction {
                    kind: TxKind::Selfdestruct,
                    args: Vec::new(),
                    sender: self.actor.clone(),
                    value: v.clone(),
                    block: b.clone(),
                });
            }
        }
        for b in blocks.iter().filter(|b| **b != st.block_number) {
            out.push(Transaction {
                kind: TxKind::Skip,
                args: Vec::new(),
                sender: self.actor.clone(),
                value: BigInt::zero(),
                block: b.clone(),
            });
        }
        out
    }
}
