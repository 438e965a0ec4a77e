//! Safety-case compiler for instruction-following driving systems.
//!
//! The pipeline reads an extended HARA ([`hara`]), builds a top-level GSN
//! argument from it, instantiates argument patterns ([`pattern`]) under the
//! reject- and accept-instruction goals ([`builder`]), checks the result
//! against the HARA, and renders it ([`emit`]).

pub mod builder;
pub mod cli;
pub mod diag;
pub mod emit;
pub mod gsn;
pub mod hara;
pub mod pattern;
pub mod scaffold;
