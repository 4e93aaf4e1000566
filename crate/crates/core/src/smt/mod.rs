//! Symbolic encoding into SMT-LIB v2 scripts.

mod decode;
mod encoder;
mod logic;
mod sexp;
pub mod term;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::{self, Write};

pub use decode::{decode_trace, Counterexample, DecodeError, ReachedSnapshot};
pub use encoder::{
    build_abstract_query, build_bmc_query, build_invariant_init_query, build_invariant_step_query, encode_chain,
    accounts_equal, state_equals, tx_equals, Chain, Encoder, Frame, TxVars,
};
pub use logic::select_logic;
pub use sexp::{parse_all, parse_check_sat, parse_get_value, parse_response, CheckSat, ModelValue, SExp, SExpError};
pub use term::{Sort, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Logic {
    /// Linear integer arithmetic with arrays and quantifiers.
    Lia,
    /// Nonlinear integer arithmetic with arrays and quantifiers.
    Nia,
}

impl Logic {
    pub fn as_str(self) -> &'static str {
        match self {
            Logic::Lia => "LIA",
            Logic::Nia => "NIA",
        }
    }
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryKind {
    /// Unrolled from deployment to the given depth.
    Bmc(u32),
    /// Single unconstrained state restricted by invariants.
    Abstract,
    InvariantInit,
    InvariantStep,
    Chain(u32),
}

impl QueryKind {
    /// Short tag used in dump file names.
    pub fn tag(self) -> String {
        match self {
            QueryKind::Bmc(k) => alloc::format!("bmc_{k}"),
            QueryKind::Abstract => "abstract_0".into(),
            QueryKind::InvariantInit => "invinit_0".into(),
            QueryKind::InvariantStep => "invstep_0".into(),
            QueryKind::Chain(k) => alloc::format!("chain_{k}"),
        }
    }
}

/// An address whose value is read back from a model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AddrRef {
    Sender(usize),
    QVar(String),
    /// An address-typed state variable of the reached state.
    StateVar(String),
    Lit(num_bigint::BigInt),
    /// An address-typed argument slot of a step.
    Arg { step: usize, pos: usize },
}

/// What a `get-value` entry means. Steps are numbered from 1, where step 1
/// is the constructor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeField {
    Selector { step: usize },
    Arg { step: usize, pos: usize, boolean: bool },
    Sender { step: usize },
    Value { step: usize },
    Block { step: usize },
    QVar(String),
    ReachedScalar(String),
    ReachedBalance,
    ReachedBlock,
    ReachedMapEntry { var: String, addr: AddrRef },
    ReachedAccount(AddrRef),
    GenesisAccount(AddrRef),
}

/// A self-contained satisfiability query.
#[derive(Debug, Clone)]
pub struct EncodedQuery {
    pub kind: QueryKind,
    pub logic: Logic,
    pub decls: Vec<(String, Sort)>,
    pub assertions: Vec<Term>,
    /// Terms to read back on `sat`, in `get-value` order.
    pub decode_map: Vec<(Term, DecodeField)>,
}

impl EncodedQuery {
    /// Everything up to and including `(check-sat)`.
    pub fn body(&self) -> String {
        let mut out = String::new();
        out.push_str("(set-option :produce-models true)\n(set-logic ALL)\n");
        let _ = writeln!(out, "; logic: {}", self.logic);
        for (n, s) in &self.decls {
            let _ = writeln!(out, "(declare-fun {n} () {s})");
        }
        for a in &self.assertions {
            let _ = writeln!(out, "(assert {a})");
        }
        out.push_str("(check-sat)\n");
        out
    }

    /// The `get-value` command over the decode map, if any.
    pub fn get_value_command(&self) -> Option<String> {
        if self.decode_map.is_empty() {
            return None;
        }
        let mut out = String::from("(get-value (");
        for (i, (t, _)) in self.decode_map.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{t}");
        }
        out.push_str("))\n");
        Some(out)
    }

    /// The complete script: body followed by `get-value`.
    pub fn script(&self) -> String {
        let mut s = self.body();
        if let Some(gv) = self.get_value_command() {
            s.push_str(&gv);
        }
        s
    }

    /// Names in `get-value` order.
    pub fn requested_terms(&self) -> Vec<String> {
        self.decode_map.iter().map(|(t, _)| alloc::format!("{t}")).collect()
    }
}
