//! Func-QAOA for integer factorization.
//!
//! Phase separators are built as reversible classical programs
//! (compute, phase, uncompute) over a small gate IR and simulated on a dense
//! statevector. The `vqf` module derives clause-based reductions of the
//! initial state from the binary multiplication model.

pub mod ansatz;
pub mod arithmetic;
pub mod certificates;
pub mod circuits;
pub mod error;
pub mod optimizer;
pub mod statevec;
pub mod vqf;

pub use error::{Error, Result};
