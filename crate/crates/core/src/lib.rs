//! Liquidity verification for a small Solidity-like contract language.
//!
//! The crate is `no_std` with `alloc`: parsing, well-formedness checks,
//! concrete execution, a finite-domain oracle, and SMT-LIB encoding. Running
//! solvers and reading files lives in the `solvent` crate.

#![no_std]

extern crate alloc;

pub mod ast;
pub mod diag;
pub mod lexer;
pub mod oracle;
pub mod parser;
pub mod pretty;
pub mod smt;
pub mod trace;
pub mod verdict;
pub mod wellformed;
pub mod interp;
