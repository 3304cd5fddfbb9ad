//! Exact identifiability analysis for isolated loop networks.
//!
//! A loop network is a directed cycle of `n` nodes whose edges are rational
//! transfer functions. Given an excitation and measurement pattern (EMP),
//! this crate decides whether every edge can be recovered from the
//! input-output map, reconstructs the edges when it can, builds explicit
//! indistinguishable networks when it cannot, and cross-checks the verdict
//! against an independent Jacobian-rank oracle.

pub mod ambiguity;
pub mod emp;
pub mod error;
pub mod exactalg;
pub mod json;
pub mod loopnet;
pub mod oracle;
pub mod recover;

pub use emp::{Emp, EmpClass, Verdict};
pub use error::{Error, Result};
pub use exactalg::{Poly, Rat, RationalFunction};
pub use loopnet::{IoMap, LoopNetwork};
