//! Run reports: JSON form, the results table, and the exit-code policy.

use std::collections::BTreeMap;
use std::fmt::Write;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use solvent_core::trace::{format_trace, parse_trace};
use solvent_core::verdict::Verdict;

use crate::driver::Phase;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictReport {
    /// `violated`, `holds`, `holds-bounded` or `unknown`.
    pub kind: String,
    pub mark: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    /// Counterexample steps in the human trace format.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xa: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qenv: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl From<&Verdict> for VerdictReport {
    fn from(v: &Verdict) -> Self {
        let mut r = VerdictReport {
            kind: v.kind().into(),
            mark: v.mark(),
            n: None,
            trace: None,
            xa: None,
            qenv: None,
            reason: None,
        };
        match v {
            Verdict::Violated { n, trace, xa, qenv } => {
                r.n = Some(*n);
                r.trace = Some(format_trace(trace).lines().map(str::to_owned).collect());
                r.xa = Some(xa.to_string());
                r.qenv = Some(qenv.iter().map(|(k, v)| (k.clone(), v.to_string())).collect());
            }
            Verdict::HoldsBounded(n) => r.n = Some(*n),
            Verdict::Unknown(reason) => r.reason = Some(reason.clone()),
            Verdict::HoldsUnbounded => {}
        }
        r
    }
}

impl VerdictReport {
    /// Rebuilds the verdict; `None` if the report is malformed.
    pub fn to_verdict(&self) -> Option<Verdict> {
        Some(match self.kind.as_str() {
            "violated" => {
                let trace = parse_trace(&self.trace.as_ref()?.join("\n")).ok()?;
                let qenv = self
                    .qenv
                    .as_ref()?
                    .iter()
                    .map(|(k, v)| Some((k.clone(), v.parse::<BigInt>().ok()?)))
                    .collect::<Option<_>>()?;
                Verdict::Violated { n: self.n?, trace, xa: self.xa.as_ref()?.parse().ok()?, qenv }
            }
            "holds" => Verdict::HoldsUnbounded,
            "holds-bounded" => Verdict::HoldsBounded(self.n?),
            "unknown" => Verdict::Unknown(self.reason.clone().unwrap_or_default()),
            _ => return None,
        })
    }
}

/// The result of one (file, property, solver) task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub file: String,
    pub contract: String,
    pub property: String,
    pub solver: String,
    pub verdict: VerdictReport,
    pub logic: String,
    pub elapsed_s: f64,
    #[serde(default)]
    pub phases: Vec<Phase>,
    #[serde(default)]
    pub dumped: Vec<String>,
    /// Internal errors: crashes, replay mismatches, solver disagreement.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
}

impl RunReport {
    pub fn verdict(&self) -> Option<Verdict> {
        self.verdict.to_verdict()
    }
}

const HEADER: [&str; 6] = ["file", "contract", "property", "solver", "result", "time"];

/// One row per report, in report order. Bounded holds print `---` for the
/// time, since the run stopped at the depth or time limit rather than
/// finishing a proof.
pub fn render_table(reports: &[RunReport]) -> String {
    let rows: Vec<[String; 6]> = reports
        .iter()
        .map(|r| {
            let time = if r.verdict.kind == "holds-bounded" { "---".to_owned() } else { format!("{:.2}", r.elapsed_s) };
            [r.file.clone(), r.contract.clone(), r.property.clone(), r.solver.clone(), r.verdict.mark.clone(), time]
        })
        .collect();
    let mut widths = HEADER.map(|h| h.chars().count());
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let line = |out: &mut String, cells: &[&str]| {
        let mut s = String::new();
        for (i, (cell, w)) in cells.iter().zip(widths).enumerate() {
            if i + 1 == cells.len() {
                let _ = write!(s, "{cell:>w$}");
            } else {
                let _ = write!(s, "{cell:<w$}  ");
            }
        }
        out.push_str(s.trim_end());
        out.push('\n');
    };
    line(&mut out, &HEADER);
    for row in &rows {
        line(&mut out, &row.iter().map(String::as_str).collect::<Vec<_>>());
    }
    out
}

/// Counterexamples and problems, one block per affected report.
pub fn render_details(reports: &[RunReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let head = format!("{} {} [{}]", r.file, r.property, r.solver);
        if let Some(trace) = &r.verdict.trace {
            let _ = writeln!(out, "\n{head} {} with xa = {}:", r.verdict.mark, r.verdict.xa.as_deref().unwrap_or("?"));
            for l in trace {
                let _ = writeln!(out, "  {l}");
            }
        }
        if let Some(e) = &r.error {
            let _ = writeln!(out, "\n{head} error: {e}");
        }
        if let Some(reason) = &r.verdict.reason {
            let _ = writeln!(out, "\n{head} inconclusive: {reason}");
        }
        for d in &r.diagnostics {
            let _ = writeln!(out, "  {d}");
        }
    }
    out
}

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;
pub const EXIT_UNKNOWN: i32 = 4;

/// Internal errors dominate, then violations, then inconclusive results.
pub fn exit_code(reports: &[RunReport]) -> i32 {
    if reports.iter().any(|r| r.error.is_some()) {
        EXIT_INTERNAL
    } else if reports.iter().any(|r| r.verdict.kind == "violated") {
        EXIT_VIOLATED
    } else if reports.iter().any(|r| r.verdict.kind == "unknown") {
        EXIT_UNKNOWN
    } else {
        EXIT_HOLDS
    }
}
