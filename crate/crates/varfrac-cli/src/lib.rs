//! Command-line companion for the `varfrac-core` numerics library:
//! benchmark harnesses, decay-rate fitting, and deterministic CSV output.

pub mod bench;
pub mod csv;
pub mod fit;
