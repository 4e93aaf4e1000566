//! Verification of one property: invariant inference, abstract proof,
//! iterative-deepening BMC and counterexample replay.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use solvent_core::ast::{Contract, Expr, Property};
use solvent_core::interp::{eval_pre, run_trace, ConcreteState, Transaction, TxKind};
use solvent_core::oracle::{find_liquidating_trace, FiniteDomains};
use solvent_core::smt::{
    build_abstract_query, build_bmc_query, build_invariant_init_query, build_invariant_step_query, decode_trace,
    select_logic, CheckSat, DecodeError, EncodedQuery, Logic,
};
use solvent_core::trace::format_trace;
use solvent_core::verdict::Verdict;
use thiserror::Error;

use crate::solver::{run_query, SolverAnswer, SolverConfig, SolverError};

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub max_depth: u32,
    /// Wall-clock budget for the whole property.
    pub budget: Duration,
    pub replay_check: bool,
    pub oracle: FiniteDomains,
    pub dump_dir: Option<PathBuf>,
    /// After an unbounded proof, re-check BMC up to this depth; 0 disables.
    pub confirm_depth: u32,
    /// Fraction of the budget the invariant and abstract phases may use.
    pub abstract_share: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            max_depth: 10,
            budget: Duration::from_secs(400),
            replay_check: true,
            oracle: FiniteDomains::default(),
            dump_dir: None,
            confirm_depth: 0,
            abstract_share: 0.25,
        }
    }
}

/// One solver call.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Phase {
    pub name: String,
    pub k: u32,
    pub result: String,
    pub elapsed_s: f64,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub verdict: Verdict,
    pub logic: Logic,
    pub phases: Vec<Phase>,
    pub dumped: Vec<PathBuf>,
    /// Invariants that survived the inductiveness checks.
    pub invariants: Vec<Expr>,
}

#[derive(Debug, Error)]
pub enum VerifyError {
    /// The solver's answer contradicts the interpreter.
    #[error("unsound-encoding: {0}")]
    UnsoundEncoding(String),
    #[error("cannot decode model: {0}")]
    Decode(#[from] DecodeError),
    #[error("cannot write query dump: {0}")]
    Dump(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct ReplayMismatch(pub String);

/// Re-executes a decoded counterexample. The trace must deploy the contract
/// and run without interpreter errors from `initial_accounts`, the final
/// state must satisfy the antecedent, and the finite-domain oracle must find
/// no liquidating suffix. Returns the final state.
pub fn replay_validate(
    c: &Contract,
    p: &Property,
    trace: &[Transaction],
    qenv: &BTreeMap<String, BigInt>,
    initial_accounts: &BTreeMap<BigInt, BigInt>,
    dom: &FiniteDomains,
) -> Result<ConcreteState, ReplayMismatch> {
    let mismatch = |m: String| Err(ReplayMismatch(m));
    match trace.first() {
        None => return mismatch("empty trace".into()),
        Some(t) if t.kind != TxKind::Constructor => return mismatch("trace does not start with the constructor".into()),
        _ => {}
    }
    let outcomes = match run_trace(c, trace, initial_accounts) {
        Ok(o) => o,
        Err(e) => return mismatch(format!("interpreter rejected the trace: {e}")),
    };
    if outcomes[0].reverted {
        return mismatch("constructor reverted".into());
    }
    let last = outcomes.last().expect("non-empty trace").next.clone();
    match eval_pre(c, &last, &p.antecedent, qenv) {
        Ok(v) if v.as_bool() == Some(true) => {}
        Ok(_) => return mismatch("antecedent is false in the reached state".into()),
        Err(e) => return mismatch(format!("cannot evaluate antecedent: {e}")),
    }
    match find_liquidating_trace(c, &last, p, qenv, dom) {
        Ok(None) => Ok(last),
        Ok(Some(w)) => mismatch(format!("oracle found a liquidating suffix:\n{}", format_trace(&w))),
        Err(e) => mismatch(format!("oracle failed: {e}")),
    }
}

struct Run<'a> {
    c: &'a Contract,
    p: &'a Property,
    cfg: &'a SolverConfig,
    opts: &'a VerifyOptions,
    deadline: Instant,
    phases: Vec<Phase>,
    dumped: Vec<PathBuf>,
}

enum Answer {
    Done(SolverAnswer),
    Timeout,
    Unknown(String),
}

impl Run<'_> {
    fn solve(&mut self, name: &str, k: u32, q: &EncodedQuery, limit: Instant) -> Result<Answer, VerifyError> {
        if let Some(dir) = &self.opts.dump_dir {
            std::fs::create_dir_all(dir)?;
            let path = dir.join(format!("query_{}_{}_{}.smt2", self.p.name, name, k));
            std::fs::write(&path, q.script())?;
            self.dumped.push(path);
        }
        let now = Instant::now();
        let limit = limit.min(self.deadline);
        if now >= limit {
            return Ok(Answer::Timeout);
        }
        let res = run_query(self.cfg, q, limit - now);
        let (result, ans) = match res {
            Ok(a) => {
                let r = match a.status {
                    CheckSat::Sat => "sat",
                    CheckSat::Unsat => "unsat",
                    CheckSat::Unknown => "unknown",
                };
                (r.to_owned(), Answer::Done(a))
            }
            Err(SolverError::Timeout(_)) => ("timeout".to_owned(), Answer::Timeout),
            Err(e) => (format!("crash: {e}"), Answer::Unknown(format!("crash: {e}"))),
        };
        self.phases.push(Phase { name: name.into(), k, result, elapsed_s: now.elapsed().as_secs_f64() });
        Ok(ans)
    }

    fn is_unsat(&mut self, name: &str, k: u32, q: &EncodedQuery, limit: Instant) -> Result<bool, VerifyError> {
        Ok(matches!(self.solve(name, k, q, limit)?, Answer::Done(a) if a.status == CheckSat::Unsat))
    }

    /// Keeps the candidates that hold after deployment and are jointly
    /// preserved by every transaction.
    fn infer_invariants(&mut self, candidates: &[Expr], limit: Instant) -> Result<Vec<Expr>, VerifyError> {
        let mut keep = Vec::new();
        for (i, inv) in candidates.iter().enumerate() {
            let q = build_invariant_init_query(self.c, inv);
            if self.is_unsat("invinit", i as u32, &q, limit)? {
                keep.push((i, inv.clone()));
            }
        }
        loop {
            let assumed: Vec<Expr> = keep.iter().map(|(_, e)| e.clone()).collect();
            let mut next = Vec::new();
            for (i, inv) in &keep {
                let q = build_invariant_step_query(self.c, &assumed, inv);
                if self.is_unsat("invstep", *i as u32, &q, limit)? {
                    next.push((*i, inv.clone()));
                }
            }
            if next.len() == keep.len() {
                return Ok(next.into_iter().map(|(_, e)| e).collect());
            }
            keep = next;
        }
    }

    fn bmc(&mut self, k: u32) -> Result<Result<Option<Verdict>, Answer>, VerifyError> {
        let q = build_bmc_query(self.c, self.p, k);
        let ans = match self.solve("bmc", k, &q, self.deadline)? {
            Answer::Done(a) => a,
            other => return Ok(Err(other)),
        };
        match ans.status {
            CheckSat::Unsat => Ok(Ok(None)),
            CheckSat::Unknown => Ok(Err(Answer::Unknown("solver-unknown".into()))),
            CheckSat::Sat => {
                let model = ans.model.unwrap_or_default();
                let cex = decode_trace(self.c, &q, &model)?;
                if self.opts.replay_check {
                    let last = replay_validate(self.c, self.p, &cex.trace, &cex.qenv, &cex.initial_accounts, &self.opts.oracle)
                        .map_err(|m| VerifyError::UnsoundEncoding(format!("depth {k}: {m}")))?;
                    let diffs = cex.reached.mismatches(&last);
                    if !diffs.is_empty() {
                        return Err(VerifyError::UnsoundEncoding(format!(
                            "depth {k}: replayed state differs from the model: {}",
                            diffs.join("; ")
                        )));
                    }
                }
                let xa = cex.qenv.get(&self.p.actor).cloned().unwrap_or_default();
                Ok(Ok(Some(Verdict::Violated { n: k, trace: cex.trace, xa, qenv: cex.qenv })))
            }
        }
    }
}

/// Decides one property with one solver.
pub fn verify(
    c: &Contract,
    p: &Property,
    candidates: &[Expr],
    cfg: &SolverConfig,
    opts: &VerifyOptions,
) -> Result<Outcome, VerifyError> {
    assert!(opts.max_depth >= 1, "max_depth starts at 1");
    let start = Instant::now();
    let mut run = Run { c, p, cfg, opts, deadline: start + opts.budget, phases: Vec::new(), dumped: Vec::new() };
    let abstract_limit = start + opts.budget.mul_f64(opts.abstract_share.clamp(0.0, 1.0));

    let invariants = if candidates.is_empty() { Vec::new() } else { run.infer_invariants(candidates, abstract_limit)? };
    let logic = select_logic(c, Some(p), &invariants);
    let finish = |run: Run<'_>, verdict: Verdict| Outcome {
        verdict,
        logic,
        phases: run.phases,
        dumped: run.dumped,
        invariants: invariants.clone(),
    };

    let q = build_abstract_query(c, p, &invariants);
    if run.is_unsat("abstract", 0, &q, abstract_limit)? {
        for k in 1..=opts.confirm_depth {
            if let Ok(Some(v)) = run.bmc(k)? {
                return Err(VerifyError::UnsoundEncoding(format!(
                    "abstract proof contradicted by a depth-{k} counterexample ({})",
                    v.mark()
                )));
            }
        }
        return Ok(finish(run, Verdict::HoldsUnbounded));
    }

    let mut checked = 0;
    for k in 1..=opts.max_depth {
        match run.bmc(k)? {
            Ok(None) => checked = k,
            Ok(Some(v)) => return Ok(finish(run, v)),
            Err(Answer::Timeout) => {
                let v = if checked >= 1 { Verdict::HoldsBounded(checked) } else { Verdict::Unknown("timeout".into()) };
                return Ok(finish(run, v));
            }
            Err(Answer::Unknown(reason)) => return Ok(finish(run, Verdict::Unknown(reason))),
            Err(Answer::Done(_)) => unreachable!("definitive answers are classified above"),
        }
    }
    Ok(finish(run, Verdict::HoldsBounded(checked)))
}

/// Where a query dump for a file goes inside the dump root.
pub fn dump_dir_for(root: &Path, stem: &str, solver: &str) -> PathBuf {
    root.join(stem).join(solver)
}
