//! Liquidity verification for a Solidity fragment: solver processes,
//! the verification driver, suite runner, reports and the command line.

pub mod cli;
pub mod domain;
pub mod driver;
pub mod load;
pub mod report;
pub mod solver;
pub mod suite;
