//! Fractional-ply alpha-beta search driven by piece entropy rates.
//!
//! * [`chess`]: rules, move generation, material evaluation.
//! * [`entropy`]: mobility graphs, random-walk entropy rates, position entropy.
//! * [`policy`]: per-move depth increments (entropy reduction and related schemes).
//! * [`search`]: the fractional-depth negamax engine and synthetic-tree checks.
//! * [`harness`]: EPD suites, parameter sweeps, policy comparison, CSV output.

pub mod chess;
pub mod entropy;
pub mod harness;
pub mod policy;
pub mod search;
