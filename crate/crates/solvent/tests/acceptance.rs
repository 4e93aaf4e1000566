//! End-to-end acceptance run: one PASS/FAIL line per criterion.

mod common;

use std::time::{Duration, Instant};

use common::gen::{check_step, Gen};
use common::{bench_path, bench_unit};
use solvent::driver::{replay_validate, verify, VerifyOptions};
use solvent::load::load_file;
use solvent::report::RunReport;
use solvent::solver::{run_query, SolverConfig};
use solvent::suite::{verify_suite, SuiteOptions};
use solvent_core::interp::{apply_tx, ConcreteState};
use solvent_core::oracle::FiniteDomains;
use solvent_core::smt::{build_bmc_query, decode_trace, CheckSat, Logic};
use solvent_core::verdict::Verdict;

const BUG_RUNTIME: Duration = Duration::from_secs(120);
const OWNER_RUNTIME: Duration = Duration::from_secs(300);
const FIX_RUNTIME: Duration = Duration::from_secs(600);
const FIX_DEPTH: u32 = 4;
const FIX2_MIN_DEPTH: u32 = 3;
const BUG_FROZEN_MAX_N: u32 = 3;
const DIFFERENTIAL_CASES: u64 = 1000;
const INTERP_STEPS: usize = 100_000;
const SUITE_DEPTH: u32 = 4;
const SUITE_BUDGET: Duration = Duration::from_secs(60);
const CONFIRM_DEPTH: u32 = 3;
const SUITE_FILES: &[&str] = &[
    "crowdfund_bug.sol",
    "crowdfund_fix.sol",
    "crowdfund_fix2.sol",
    "freezable.sol",
    "transfer.sol",
    "bank.sol",
    "payment_splitter.sol",
];

struct Tally {
    failed: usize,
}

impl Tally {
    fn report(&mut self, id: u32, title: &str, result: Result<String, String>) {
        match result {
            Ok(detail) => println!("PASS  {id:>2}  {title}: {detail}"),
            Err(detail) => {
                self.failed += 1;
                println!("FAIL  {id:>2}  {title}: {detail}");
            }
        }
    }
}

fn solvers() -> [SolverConfig; 2] {
    [SolverConfig::z3(), SolverConfig::cvc5()]
}

fn opts(max_depth: u32, budget: Duration) -> VerifyOptions {
    VerifyOptions { max_depth, budget, confirm_depth: CONFIRM_DEPTH, ..VerifyOptions::default() }
}

fn crowdfund_bug() -> Result<String, String> {
    let u = bench_unit("crowdfund_bug.sol");
    let p = u.property("donor_wd").unwrap();
    let mut hits = Vec::new();
    for cfg in solvers() {
        let start = Instant::now();
        let out = verify(&u.contract, p, &u.invariants, &cfg, &opts(5, BUG_RUNTIME)).map_err(|e| format!("{}: {e}", cfg.name))?;
        let took = start.elapsed();
        if let Verdict::Violated { n, trace, xa, .. } = &out.verdict {
            let names: Vec<&str> = trace.iter().map(|t| t.name()).collect();
            if *n == 3 && names == ["constructor", "donate", "selfdestruct"] && took < BUG_RUNTIME {
                hits.push(format!("{} ✗(3) xa={xa} in {:.2}s", cfg.name, took.as_secs_f64()));
            }
        }
    }
    if hits.is_empty() {
        Err("no solver produced ✗(3) with constructor, donate, selfdestruct".into())
    } else {
        Ok(hits.join(", "))
    }
}

fn owner_wd() -> Result<String, String> {
    let u = bench_unit("crowdfund_bug.sol");
    let p = u.property("owner_wd").unwrap();
    let mut hits = Vec::new();
    for cfg in solvers() {
        let start = Instant::now();
        let out = verify(&u.contract, p, &u.invariants, &cfg, &opts(3, OWNER_RUNTIME)).map_err(|e| e.to_string())?;
        let proved_by_abstraction = out.phases.iter().any(|ph| ph.name == "abstract" && ph.result == "unsat");
        if out.verdict == Verdict::HoldsUnbounded && proved_by_abstraction && start.elapsed() < OWNER_RUNTIME {
            hits.push(format!("{} ✓ in {:.2}s", cfg.name, start.elapsed().as_secs_f64()));
        }
    }
    if hits.is_empty() {
        Err("no unbounded proof".into())
    } else {
        Ok(hits.join(", "))
    }
}

fn crowdfund_fix() -> Result<String, String> {
    let u = bench_unit("crowdfund_fix.sol");
    let p = u.property("donor_wd").unwrap();
    let mut marks = Vec::new();
    let mut ok = false;
    for cfg in solvers() {
        let start = Instant::now();
        let out = verify(&u.contract, p, &u.invariants, &cfg, &opts(FIX_DEPTH, FIX_RUNTIME)).map_err(|e| e.to_string())?;
        if matches!(out.verdict, Verdict::Violated { .. }) {
            return Err(format!("{} found {}", cfg.name, out.verdict.mark()));
        }
        ok |= matches!(out.verdict, Verdict::HoldsBounded(k) if k >= FIX_DEPTH) || out.verdict == Verdict::HoldsUnbounded;
        marks.push(format!("{} {} in {:.2}s", cfg.name, out.verdict.mark(), start.elapsed().as_secs_f64()));
    }
    if ok {
        Ok(marks.join(", "))
    } else {
        Err(marks.join(", "))
    }
}

fn frozen_funds(reports: &[RunReport]) -> Result<String, String> {
    let find = |file: &'static str| reports.iter().filter(move |r| r.file == file && r.property == "no_frozen_funds");
    let mut notes = Vec::new();
    let fix2_ok = find("crowdfund_fix2").any(|r| match r.verdict() {
        Some(Verdict::HoldsUnbounded) => true,
        Some(Verdict::HoldsBounded(k)) => k >= FIX2_MIN_DEPTH,
        _ => false,
    });
    let bug_ok = find("crowdfund_bug").any(|r| matches!(r.verdict(), Some(Verdict::Violated { n, .. }) if n <= BUG_FROZEN_MAX_N));
    for r in find("crowdfund_fix2").chain(find("crowdfund_bug")) {
        notes.push(format!("{} {} {}", r.file, r.solver, r.verdict.mark));
    }
    if fix2_ok && bug_ok {
        Ok(notes.join(", "))
    } else {
        Err(notes.join(", "))
    }
}

fn solver_named(name: &str) -> SolverConfig {
    SolverConfig::by_name(name).expect("suite solvers are known")
}

fn minimality(reports: &[RunReport]) -> Result<String, String> {
    let mut checked = 0;
    for r in reports {
        let Some(Verdict::Violated { n, .. }) = r.verdict() else { continue };
        if n == 1 {
            checked += 1;
            continue;
        }
        let u = bench_unit(&format!("{}.sol", r.file));
        let p = u.property(&r.property).unwrap();
        let ans = run_query(&solver_named(&r.solver), &build_bmc_query(&u.contract, p, n - 1), SUITE_BUDGET)
            .map_err(|e| format!("{} {}: {e}", r.file, r.property))?;
        if ans.status != CheckSat::Unsat {
            return Err(format!("{} {} [{}]: depth {} is {:?}", r.file, r.property, r.solver, n - 1, ans.status));
        }
        checked += 1;
    }
    Ok(format!("{checked} counterexamples, every depth N-1 unsat"))
}

fn differential() -> Result<String, String> {
    let failures = common::differential_suite(DIFFERENTIAL_CASES, &SolverConfig::z3());
    if failures.is_empty() {
        Ok(format!("{DIFFERENTIAL_CASES}/{DIFFERENTIAL_CASES} pinned chains sat, perturbed unsat"))
    } else {
        Err(format!("{} of {DIFFERENTIAL_CASES} failed, first: {}", failures.len(), failures[0]))
    }
}

/// Every counterexample in the suite passed the driver's replay check (a
/// failure would have been reported as an error). Each one is also
/// re-derived from a fresh model and replayed here.
fn replay(reports: &[RunReport]) -> Result<String, String> {
    let mut n_ok = 0;
    for r in reports {
        let Some(Verdict::Violated { n, .. }) = r.verdict() else { continue };
        if let Some(e) = &r.error {
            return Err(format!("{} {} [{}]: {e}", r.file, r.property, r.solver));
        }
        let u = bench_unit(&format!("{}.sol", r.file));
        let p = u.property(&r.property).unwrap();
        let q = build_bmc_query(&u.contract, p, n);
        let ans = run_query(&solver_named(&r.solver), &q, SUITE_BUDGET).map_err(|e| e.to_string())?;
        let model = ans.model.ok_or("sat answer without a model")?;
        let cex = decode_trace(&u.contract, &q, &model).map_err(|e| e.to_string())?;
        let last = replay_validate(&u.contract, p, &cex.trace, &cex.qenv, &cex.initial_accounts, &FiniteDomains::default())
            .map_err(|e| format!("{} {} [{}]: {e}", r.file, r.property, r.solver))?;
        let diffs = cex.reached.mismatches(&last);
        if !diffs.is_empty() {
            return Err(format!("{} {}: {}", r.file, r.property, diffs.join("; ")));
        }
        n_ok += 1;
    }
    if n_ok == 0 {
        return Err("the suite produced no counterexamples".into());
    }
    Ok(format!("{n_ok}/{n_ok} counterexamples replay"))
}

fn consistency(reports: &[RunReport]) -> Result<String, String> {
    let mut pairs = 0;
    for (i, a) in reports.iter().enumerate() {
        for b in &reports[i + 1..] {
            if a.file != b.file || a.property != b.property || a.solver == b.solver {
                continue;
            }
            let (va, vb) = (a.verdict().unwrap(), b.verdict().unwrap());
            if va.contradicts(&vb) {
                return Err(format!("{} {}: {} vs {}", a.file, a.property, va.mark(), vb.mark()));
            }
            pairs += 1;
        }
    }
    if let Some(r) = reports.iter().find(|r| r.error.is_some()) {
        return Err(format!("{} {} [{}]: {}", r.file, r.property, r.solver, r.error.as_deref().unwrap()));
    }
    Ok(format!("{pairs} solver pairs, no contradictions"))
}

fn interpreter() -> Result<String, String> {
    let mut steps = 0;
    let mut seed = 0u64;
    while steps < INTERP_STEPS {
        let mut g = Gen::new(seed);
        let c = g.contract();
        let mut s = ConcreteState::genesis(&c, g.accounts());
        for _ in 0..200 {
            let t = g.tx(&c, &s);
            let o = apply_tx(&c, &s, &t).map_err(|e| format!("seed {seed}: {e}"))?;
            check_step(&c, &s, &t, &o).map_err(|e| format!("seed {seed}: {e}"))?;
            s = o.next;
            steps += 1;
        }
        seed += 1;
    }
    Ok(format!("{steps} random steps over {seed} contracts"))
}

fn nia(reports: &[RunReport]) -> Result<String, String> {
    let rows: Vec<&RunReport> = reports.iter().filter(|r| r.file == "payment_splitter").collect();
    if rows.is_empty() {
        return Err("payment splitter not run".into());
    }
    let u = bench_unit("payment_splitter.sol");
    for p in &u.properties {
        let logic = build_bmc_query(&u.contract, p, 1).logic;
        if logic != Logic::Nia {
            return Err(format!("{} classified {logic}", p.name));
        }
    }
    if let Some(r) = rows.iter().find(|r| r.logic != "NIA") {
        return Err(format!("{} reported {}", r.property, r.logic));
    }
    let marks: Vec<String> = rows.iter().map(|r| format!("{} {} {}", r.property, r.solver, r.verdict.mark)).collect();
    Ok(format!("NIA; {}", marks.join(", ")))
}

fn main() {
    let mut t = Tally { failed: 0 };
    let start = Instant::now();
    t.report(1, "crowdfund bug reproduction", crowdfund_bug());
    t.report(2, "crowdfund unbounded proof", owner_wd());
    t.report(3, "crowdfund fix", crowdfund_fix());

    let files: Vec<_> = SUITE_FILES.iter().map(|f| load_file(&bench_path(f))).collect();
    let so = SuiteOptions { verify: opts(SUITE_DEPTH, SUITE_BUDGET), properties: vec![], jobs: 1, dump_root: None };
    let reports = verify_suite(&files, &solvers(), &so);
    print!("{}", solvent::report::render_table(&reports));

    t.report(4, "no_frozen_funds", frozen_funds(&reports));
    t.report(5, "shortest traces", minimality(&reports));
    t.report(6, "encoder/interpreter differential", differential());
    t.report(7, "replay validation", replay(&reports));
    t.report(8, "solver consistency", consistency(&reports));
    t.report(9, "interpreter invariants", interpreter());
    t.report(10, "nonlinear contracts", nia(&reports));
    println!("acceptance: {} failed, {:.1}s", t.failed, start.elapsed().as_secs_f64());
    if t.failed > 0 {
        std::process::exit(1);
    }
}
