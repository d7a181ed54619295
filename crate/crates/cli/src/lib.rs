//! Library surface of the experiment harness; the `awqv` binary is a thin
//! wrapper over these modules.

pub mod config;
pub mod suite;
