//! Running every (property, solver) task of a set of files.

use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use solvent_core::ast::{Contract, Expr, Property};
use solvent_core::smt::select_logic;
use solvent_core::verdict::Verdict;

use crate::driver::{dump_dir_for, verify, VerifyOptions};
use crate::load::Loaded;
use crate::report::RunReport;
use crate::solver::SolverConfig;

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub verify: VerifyOptions,
    /// Property names to run; empty means all.
    pub properties: Vec<String>,
    pub jobs: usize,
    /// Root for `.smt2` dumps, laid out as `<root>/<file stem>/<solver>/`.
    pub dump_root: Option<PathBuf>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { verify: VerifyOptions::default(), properties: Vec::new(), jobs: 1, dump_root: None }
    }
}

struct Task<'a> {
    file: &'a Loaded,
    contract: &'a Contract,
    property: &'a Property,
    invariants: &'a [Expr],
    solver: &'a SolverConfig,
}

fn run_task(t: &Task<'_>, opts: &SuiteOptions) -> RunReport {
    let mut vo = opts.verify.clone();
    vo.dump_dir = opts.dump_root.as_ref().map(|r| dump_dir_for(r, &t.file.stem, &t.solver.name));
    let start = Instant::now();
    let res = verify(t.contract, t.property, t.invariants, t.solver, &vo);
    let elapsed_s = start.elapsed().as_secs_f64();
    let base = |verdict: &Verdict, logic: String| RunReport {
        file: t.file.stem.clone(),
        contract: t.contract.name.clone(),
        property: t.property.name.clone(),
        solver: t.solver.name.clone(),
        verdict: verdict.into(),
        logic,
        elapsed_s,
        phases: Vec::new(),
        dumped: Vec::new(),
        error: None,
        diagnostics: t.file.diagnostics.clone(),
    };
    match res {
        Ok(o) => {
            let mut r = base(&o.verdict, o.logic.to_string());
            r.phases = o.phases;
            r.dumped = o.dumped.iter().map(|p| p.display().to_string()).collect();
            // A crashed solver is an internal error, not just an inconclusive run.
            if let Verdict::Unknown(reason) = &o.verdict {
                if reason.starts_with("crash") {
                    r.error = Some(reason.clone());
                }
            }
            r
        }
        Err(e) => {
            let logic = select_logic(t.contract, Some(t.property), t.invariants).to_string();
            let mut r = base(&Verdict::Unknown("internal-error".into()), logic);
            r.error = Some(e.to_string());
            r
        }
    }
}

/// One `?` row per solver for a file that could not be loaded.
fn failed_file(file: &Loaded, solvers: &[SolverConfig]) -> Vec<RunReport> {
    solvers
        .iter()
        .map(|s| RunReport {
            file: file.stem.clone(),
            contract: "-".into(),
            property: "-".into(),
            solver: s.name.clone(),
            verdict: (&Verdict::Unknown("load-error".into())).into(),
            logic: "-".into(),
            elapsed_s: 0.0,
            phases: Vec::new(),
            dumped: Vec::new(),
            error: None,
            diagnostics: file.diagnostics.clone(),
        })
        .collect()
}

/// Flags every pair of reports on the same task whose verdicts contradict.
fn flag_disagreements(reports: &mut [RunReport]) {
    for i in 0..reports.len() {
        for j in i + 1..reports.len() {
            let (a, b) = (&reports[i], &reports[j]);
            if a.file != b.file || a.property != b.property || a.solver == b.solver {
                continue;
            }
            let (Some(va), Some(vb)) = (a.verdict(), b.verdict()) else { continue };
            if va.contradicts(&vb) {
                let msg = format!("solver-disagreement: {} says {}, {} says {}", a.solver, va.mark(), b.solver, vb.mark());
                reports[i].error.get_or_insert_with(|| msg.clone());
                reports[j].error.get_or_insert(msg);
            }
        }
    }
}

/// Runs properties × solvers for every file, up to `opts.jobs` tasks at a
/// time. Reports come back in file, property, solver order.
pub fn verify_suite(files: &[Loaded], solvers: &[SolverConfig], opts: &SuiteOptions) -> Vec<RunReport> {
    enum Slot<'a> {
        Task(Task<'a>),
        Done(RunReport),
    }
    let mut slots = Vec::new();
    for f in files {
        let Some(unit) = &f.unit else {
            slots.extend(failed_file(f, solvers).into_iter().map(Slot::Done));
            continue;
        };
        for p in &unit.properties {
            if !opts.properties.is_empty() && !opts.properties.contains(&p.name) {
                continue;
            }
            for s in solvers {
                slots.push(Slot::Task(Task {
                    file: f,
                    contract: &unit.contract,
                    property: p,
                    invariants: &unit.invariants,
                    solver: s,
                }));
            }
        }
    }

    let results: Vec<Mutex<Option<RunReport>>> = slots.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = opts.jobs.max(1).min(slots.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(slot) = slots.get(i) else { break };
                let r = match slot {
                    Slot::Task(t) => run_task(t, opts),
                    Slot::Done(r) => r.clone(),
                };
                *results[i].lock().expect("no worker panics while holding the lock") = Some(r);
            });
        }
    });
    let mut reports: Vec<RunReport> =
        results.into_iter().map(|m| m.into_inner().expect("lock not poisoned").expect("every slot is filled")).collect();
    flag_disagreements(&mut reports);
    reports
}
