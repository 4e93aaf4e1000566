//! Running external SMT solvers on generated scripts.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use solvent_core::smt::{parse_all, parse_check_sat, parse_response, CheckSat, EncodedQuery, ModelValue, SExpError};
use thiserror::Error;

/// Directories searched for solver binaries before `PATH`, in `PATH` syntax.
pub const SOLVER_PATH_VAR: &str = "SOLVENT_SOLVER_PATH";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverConfig {
    /// Short name used in reports.
    pub name: String,
    pub program: String,
    pub args: Vec<String>,
}

impl SolverConfig {
    pub fn z3() -> Self {
        SolverConfig { name: "z3".into(), program: "z3".into(), args: vec!["-in".into(), "-smt2".into()] }
    }

    /// cvc5 needs `--arrays-exp` for constant arrays and model-based
    /// instantiation to answer `sat` on quantified queries.
    pub fn cvc5() -> Self {
        SolverConfig {
            name: "cvc5".into(),
            program: "cvc5".into(),
            args: vec!["--lang".into(), "smt2".into(), "--arrays-exp".into(), "--mbqi".into()],
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "z3" => Some(Self::z3()),
            "cvc5" => Some(Self::cvc5()),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverAnswer {
    pub status: CheckSat,
    /// Values of the query's decode map, present on `sat`.
    pub model: Option<Vec<ModelValue>>,
    pub elapsed: Duration,
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("solver `{0}` not found (searched ${SOLVER_PATH_VAR} and $PATH)")]
    NotFound(String),
    #[error("i/o error talking to the solver: {0}")]
    Io(#[from] std::io::Error),
    #[error("solver exceeded {0:?}")]
    Timeout(Duration),
    #[error("solver failed: {0}")]
    Crashed(String),
}

fn bundled_tools() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../tools")
}

/// Resolves a program name. Names containing a path separator are used as
/// given; otherwise `SOLVENT_SOLVER_PATH`, then `PATH`, then the bundled
/// `tools/` directory are searched.
pub fn locate(program: &str) -> Option<PathBuf> {
    if program.contains(std::path::MAIN_SEPARATOR) {
        let p = PathBuf::from(program);
        return p.is_file().then_some(p);
    }
    let mut dirs: Vec<PathBuf> = Vec::new();
    for var in [SOLVER_PATH_VAR, "PATH"] {
        if let Some(v) = std::env::var_os(var) {
            dirs.extend(std::env::split_paths(&v));
        }
    }
    dirs.push(bundled_tools());
    dirs.into_iter().map(|d| d.join(program)).find(|p| p.is_file())
}

struct Raw {
    out: String,
    err: String,
    status: std::process::ExitStatus,
    elapsed: Duration,
}

fn run_raw(cfg: &SolverConfig, script: &str, timeout: Duration) -> Result<Raw, SolverError> {
    let exe = locate(&cfg.program).ok_or_else(|| SolverError::NotFound(cfg.program.clone()))?;
    let start = Instant::now();
    let mut child = Command::new(&exe)
        .args(cfg.args.iter().map(OsString::from))
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()?;

    let mut stdin = child.stdin.take().expect("piped stdin");
    let input = script.to_owned();
    // A solver that exits early closes the pipe; that surfaces as a crash later.
    let writer = thread::spawn(move || {
        let _ = stdin.write_all(input.as_bytes());
    });
    let mut stdout = child.stdout.take().expect("piped stdout");
    let out_reader = thread::spawn(move || {
        let mut s = String::new();
        let _ = stdout.read_to_string(&mut s);
        s
    });
    let mut stderr = child.stderr.take().expect("piped stderr");
    let err_reader = thread::spawn(move || {
        let mut s = String::new();
        let _ = stderr.read_to_string(&mut s);
        s
    });

    let status = loop {
        if let Some(st) = child.try_wait()? {
            break st;
        }
        if start.elapsed() >= timeout {
            let _ = child.kill();
            let _ = child.wait();
            let _ = writer.join();
            let _ = out_reader.join();
            let _ = err_reader.join();
            return Err(SolverError::Timeout(timeout));
        }
        thread::sleep(Duration::from_millis(5));
    };
    let _ = writer.join();
    let out = out_reader.join().unwrap_or_default();
    let err = err_reader.join().unwrap_or_default();
    Ok(Raw { out, err, status, elapsed: start.elapsed() })
}

fn crashed(raw: &Raw, e: SExpError) -> SolverError {
    match e {
        SExpError::Solver(msg) => SolverError::Crashed(msg),
        e => {
            let detail = if raw.err.trim().is_empty() { e.to_string() } else { raw.err.trim().to_owned() };
            SolverError::Crashed(format!("{detail} (exit status {})", raw.status))
        }
    }
}

/// Runs a complete script and reads the `check-sat` status and, on `sat`,
/// `expected` values of the trailing `get-value`. The process is killed
/// once `timeout` elapses.
pub fn run_script(cfg: &SolverConfig, script: &str, expected: usize, timeout: Duration) -> Result<SolverAnswer, SolverError> {
    let raw = run_raw(cfg, script, timeout)?;
    match parse_response(&raw.out, expected) {
        Ok((status, model)) => Ok(SolverAnswer { status, model, elapsed: raw.elapsed }),
        Err(e) => Err(crashed(&raw, e)),
    }
}

/// Runs a script with several `check-sat` commands and no `get-value`,
/// returning one status per command.
pub fn run_checks(cfg: &SolverConfig, script: &str, timeout: Duration) -> Result<Vec<CheckSat>, SolverError> {
    let raw = run_raw(cfg, script, timeout)?;
    let forms = parse_all(&raw.out).map_err(|e| crashed(&raw, e))?;
    forms
        .iter()
        .map(|f| parse_check_sat(&f.to_string()).map_err(|e| crashed(&raw, e)))
        .collect()
}

/// Runs an encoded query, requesting its decode map on `sat`.
pub fn run_query(cfg: &SolverConfig, q: &EncodedQuery, timeout: Duration) -> Result<SolverAnswer, SolverError> {
    let mut script = q.script();
    script.push_str("(exit)\n");
    run_script(cfg, &script, q.decode_map.len(), timeout)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_binary_is_reported() {
        let cfg = SolverConfig { name: "none".into(), program: "no-such-solver-binary".into(), args: vec![] };
        assert!(matches!(run_script(&cfg, "(check-sat)", 0, Duration::from_secs(1)), Err(SolverError::NotFound(_))));
    }

    #[test]
    fn names() {
        assert_eq!(SolverConfig::by_name("z3").unwrap().program, "z3");
        assert!(SolverConfig::by_name("cvc5").unwrap().args.contains(&"--mbqi".to_string()));
        assert!(SolverConfig::by_name("yices").is_none());
    }
}
