//! Verification outcomes and their table marks.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::interp::Transaction;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// A shortest violating trace of `n` transactions, deployment included.
    Violated { n: u32, trace: Vec<Transaction>, xa: BigInt, qenv: BTreeMap<String, BigInt> },
    HoldsUnbounded,
    /// Every trace of length at most `n` was checked.
    HoldsBounded(u32),
    Unknown(String),
}

impl Verdict {
    /// `✗(N)`, `✓`, `✓(N)` or `?`.
    pub fn mark(&self) -> String {
        match self {
            Verdict::Violated { n, .. } => format!("✗({n})"),
            Verdict::HoldsUnbounded => "✓".into(),
            Verdict::HoldsBounded(n) => format!("✓({n})"),
            Verdict::Unknown(_) => "?".into(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Verdict::Violated { .. } => "violated",
            Verdict::HoldsUnbounded => "holds",
            Verdict::HoldsBounded(_) => "holds-bounded",
            Verdict::Unknown(_) => "unknown",
        }
    }

    pub fn is_definitive(&self) -> bool {
        !matches!(self, Verdict::Unknown(_))
    }

    /// Definitive verdicts contradict each other when one finds a
    /// violation of length `n` that the other rules out.
    pub fn contradicts(&self, other: &Verdict) -> bool {
        match (self, other) {
            (Verdict::Violated { n: a, .. }, Verdict::Violated { n: b, .. }) => a != b,
            (Verdict::Violated { .. }, Verdict::HoldsUnbounded) | (Verdict::HoldsUnbounded, Verdict::Violated { .. }) => true,
            (Verdict::Violated { n, .. }, Verdict::HoldsBounded(k)) | (Verdict::HoldsBounded(k), Verdict::Violated { n, .. }) => {
                n <= k
            }
            _ => false,
        }
    }
}
