//! The `solvent` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::domain::parse_domain;
use crate::driver::VerifyOptions;
use crate::load::{load_file, sol_files, Loaded};
use crate::report::{exit_code, render_details, render_table, RunReport, EXIT_INTERNAL, EXIT_USAGE};
use crate::solver::SolverConfig;
use crate::suite::{verify_suite, SuiteOptions};

#[derive(Debug, Parser)]
#[command(name = "solvent", version, about = "Check liquidity properties of Solidity contracts with SMT solvers")]
#[command(args_conflicts_with_subcommands = true, subcommand_negates_reqs = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,
    /// Source files to verify.
    #[arg(required = true)]
    pub paths: Vec<PathBuf>,
    #[command(flatten)]
    pub opts: CommonOpts,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verify every `.sol` file in a directory; unloadable files become `?` rows.
    Bench {
        dir: PathBuf,
        #[command(flatten)]
        opts: CommonOpts,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverChoice {
    Z3,
    Cvc5,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

#[derive(Debug, Clone, Args)]
pub struct CommonOpts {
    #[arg(long, value_enum, default_value = "z3")]
    pub solver: SolverChoice,
    /// Wall-clock budget per property and solver, in seconds.
    #[arg(long, default_value_t = 400, value_parser = clap::value_parser!(u64).range(1..))]
    pub timeout: u64,
    /// Deepest BMC unrolling.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_depth: u32,
    /// Only run the named property; repeatable.
    #[arg(long = "property", value_name = "NAME")]
    pub properties: Vec<String>,
    /// Write the JSON report here; `-` prints it instead of the table.
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Write every solver query under this directory.
    #[arg(long, value_name = "DIR")]
    pub dump_smt: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "on")]
    pub replay_check: Switch,
    /// Concurrent verification tasks.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub jobs: u32,
    /// Finite domains for the replay oracle, e.g. `values=0..3,addresses=0..5,blocks=0:1:1000,max=1000000`.
    #[arg(long, value_name = "SPEC", value_parser = parse_domain)]
    pub oracle_domain: Option<solvent_core::oracle::FiniteDomains>,
    /// Re-run BMC up to this depth after an unbounded proof.
    #[arg(long, default_value_t = 0, hide = true)]
    pub confirm_depth: u32,
}

impl CommonOpts {
    pub fn solvers(&self) -> Vec<SolverConfig> {
        match self.solver {
            SolverChoice::Z3 => vec![SolverConfig::z3()],
            SolverChoice::Cvc5 => vec![SolverConfig::cvc5()],
            SolverChoice::Both => vec![SolverConfig::z3(), SolverConfig::cvc5()],
        }
    }

    pub fn suite_options(&self) -> SuiteOptions {
        SuiteOptions {
            verify: VerifyOptions {
                max_depth: self.max_depth,
                budget: Duration::from_secs(self.timeout),
                replay_check: self.replay_check == Switch::On,
                oracle: self.oracle_domain.clone().unwrap_or_default(),
                dump_dir: None,
                confirm_depth: self.confirm_depth,
                ..VerifyOptions::default()
            },
            properties: self.properties.clone(),
            jobs: self.jobs as usize,
            dump_root: self.dump_smt.clone(),
        }
    }
}

fn emit(reports: &[RunReport], opts: &CommonOpts) -> Result<(), String> {
    let json = || serde_json::to_string_pretty(reports).expect("reports serialize");
    let to_stdout = opts.json.as_deref().is_some_and(|p| p.as_os_str() == "-");
    if to_stdout {
        println!("{}", json());
        return Ok(());
    }
    let mut out = std::io::stdout().lock();
    let _ = write!(out, "{}{}", render_table(reports), render_details(reports));
    if let Some(path) = &opts.json {
        std::fs::write(path, json() + "\n").map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    Ok(())
}

fn finish(reports: &[RunReport], opts: &CommonOpts) -> i32 {
    match emit(reports, opts) {
        Ok(()) => exit_code(reports),
        Err(e) => {
            eprintln!("solvent: {e}");
            EXIT_INTERNAL
        }
    }
}

/// Property filters must name at least one property somewhere.
fn check_filter(files: &[Loaded], opts: &CommonOpts) -> Result<(), String> {
    for name in &opts.properties {
        let known = files.iter().filter_map(|f| f.unit.as_ref()).any(|u| u.property(name).is_some());
        if !known {
            return Err(format!("no property named `{name}`"));
        }
    }
    Ok(())
}

pub fn run(cli: Cli) -> i32 {
    match cli.command {
        Some(Command::Bench { dir, opts }) => {
            let paths = match sol_files(&dir) {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("solvent: cannot list {}: {e}", dir.display());
                    return EXIT_USAGE;
                }
            };
            let files: Vec<Loaded> = paths.iter().map(|p| load_file(p)).collect();
            let reports = verify_suite(&files, &opts.solvers(), &opts.suite_options());
            finish(&reports, &opts)
        }
        None => {
            let opts = cli.opts;
            let files: Vec<Loaded> = cli.paths.iter().map(|p| load_file(p)).collect();
            let mut failed = false;
            for f in &files {
                for d in &f.diagnostics {
                    eprintln!("{d}");
                }
                failed |= f.has_errors();
            }
            if failed {
                return EXIT_USAGE;
            }
            if let Err(e) = check_filter(&files, &opts) {
                eprintln!("solvent: {e}");
                return EXIT_USAGE;
            }
            let reports = verify_suite(&files, &opts.solvers(), &opts.suite_options());
            finish(&reports, &opts)
        }
    }
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_USAGE
            } else {
                0
            }
        }
    }
}
