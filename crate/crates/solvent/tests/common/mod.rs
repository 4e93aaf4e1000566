#![allow(dead_code)]

#[path = "../../../core/tests/common/gen.rs"]
pub mod gen;

use std::path::PathBuf;
use std::time::Duration;

use num_bigint::BigInt;
use solvent::solver::{run_checks, SolverConfig};
use solvent_core::ast::SourceUnit;
use solvent_core::interp::{ConcreteState, Value};
use solvent_core::parser::parse_file;
use solvent_core::smt::{accounts_equal, encode_chain, state_equals, tx_equals, CheckSat, Term};

use gen::Gen;

pub fn bench_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../benchmarks").join(name)
}

pub fn bench_unit(name: &str) -> SourceUnit {
    parse_file(&std::fs::read_to_string(bench_path(name)).unwrap()).unwrap()
}

/// A different final state: one component changed, chosen by `which`.
fn perturb(s: &ConcreteState, which: u64) -> (ConcreteState, &'static str) {
    let mut t = s.clone();
    let scalars: Vec<(String, Value)> = s.storage.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    match which % 4 {
        0 => {
            t.contract_balance += 1;
            (t, "balance")
        }
        1 => {
            t.block_number += 1;
            (t, "block")
        }
        2 => {
            let cur = t.account(&BigInt::from(0));
            solvent_core::interp::map_set(&mut t.accounts, BigInt::from(0), cur + 1);
            (t, "account")
        }
        _ => {
            let (name, v) = scalars[(which / 4) as usize % scalars.len()].clone();
            let changed = match v {
                Value::Int(i) => Value::Int(i + 1),
                Value::Bool(b) => Value::Bool(!b),
                Value::Map(mut m) => {
                    let cur = solvent_core::interp::map_get(&m, &BigInt::from(1));
                    solvent_core::interp::map_set(&mut m, BigInt::from(1), cur + 1);
                    Value::Map(m)
                }
            };
            t.storage.insert(name, changed);
            (t, "storage")
        }
    }
}

/// Pins the symbolic chain to a random concrete run and checks that the
/// pinned chain is satisfiable and becomes unsatisfiable once the final
/// state is perturbed.
pub fn differential_case(seed: u64, cfg: &SolverConfig) -> Result<(), String> {
    let mut g = Gen::new(seed);
    // Generated constructors may revert; the chain requires a deployment.
    let (c, acc, txs, outs) = (0..50)
        .find_map(|_| {
            let c = g.contract();
            let acc = g.accounts();
            let len = 1 + (seed % 4) as usize;
            let (txs, outs) = g.trace(&c, &acc, len);
            (!outs[0].reverted).then_some((c, acc, txs, outs))
        })
        .ok_or("no deployable contract generated")?;
    let k = txs.len() as u32;
    let chain = encode_chain(&c, k);
    let mut pins = vec![accounts_equal(&chain.genesis_accounts, &acc)];
    for (i, (t, o)) in txs.iter().zip(&outs).enumerate() {
        pins.push(tx_equals(&c, &chain.txs[i], t));
        if i + 1 < txs.len() {
            pins.push(state_equals(&chain.frames[i], &o.next));
        }
    }
    let last = &outs.last().unwrap().next;
    let frame = chain.frames.last().unwrap();
    let (bad, what) = perturb(last, seed / 7);

    let mut script = chain.query.body().replace("(check-sat)\n", "");
    for p in &pins {
        script.push_str(&format!("(assert {p})\n"));
    }
    let check = |s: &mut String, t: &Term| s.push_str(&format!("(push 1)\n(assert {t})\n(check-sat)\n(pop 1)\n"));
    check(&mut script, &state_equals(frame, last));
    check(&mut script, &state_equals(frame, &bad));
    script.push_str("(exit)\n");

    let statuses = run_checks(cfg, &script, Duration::from_secs(60)).map_err(|e| e.to_string())?;
    let names: Vec<&str> = txs.iter().map(|t| t.name()).collect();
    match statuses.as_slice() {
        [CheckSat::Sat, CheckSat::Unsat] => Ok(()),
        [CheckSat::Sat, other] => Err(format!("seed {seed}: perturbed {what} not rejected ({other:?}), trace {names:?}")),
        [first, _] => Err(format!("seed {seed}: concrete run rejected ({first:?}), trace {names:?}")),
        other => Err(format!("seed {seed}: unexpected solver output {other:?}")),
    }
}

/// Runs cases `0..n` and returns the failures.
pub fn differential_suite(n: u64, cfg: &SolverConfig) -> Vec<String> {
    (0..n).filter_map(|seed| differential_case(seed, cfg).err()).collect()
}

/// (steps, reverted steps, selfdestructs, traces longer than one step)
/// over the traces that `differential_case` uses for seeds `0..n`.
pub fn differential_coverage(n: u64) -> (usize, usize, usize, usize) {
    let mut cov = (0, 0, 0, 0);
    for seed in 0..n {
        let mut g = Gen::new(seed);
        for _ in 0..50 {
            let c = g.contract();
            let acc = g.accounts();
            let (txs, outs) = g.trace(&c, &acc, 1 + (seed % 4) as usize);
            if outs[0].reverted {
                continue;
            }
            cov.0 += txs.len();
            cov.1 += outs.iter().filter(|o| o.reverted).count();
            cov.2 += txs.iter().filter(|t| t.kind == solvent_core::interp::TxKind::Selfdestruct).count();
            cov.3 += usize::from(txs.len() > 1);
            break;
        }
    }
    cov
}
