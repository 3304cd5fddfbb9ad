//! Exact arithmetic: big rationals, univariate polynomials over them,
//! reduced rational functions, forward-mode dual numbers and
//! fraction-free rank.

mod dual;
mod poly;
mod rank;
mod ratfunc;

use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;

pub use dual::{dual_lift, DualRat};
pub use poly::{poly_gcd, Poly};
pub use rank::ffge_rank;
pub use ratfunc::{rf_arith, rf_eval, rf_normalize, ArithOp, RationalFunction};

use crate::error::{Error, Result};

/// Arbitrary-precision rational scalar. Always stored in lowest terms with
/// a positive denominator.
pub type Rat = BigRational;

pub const DEFAULT_DEGREE_CAP: usize = 64;

static DEGREE_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_DEGREE_CAP);

/// Largest numerator or denominator degree a [`RationalFunction`] may reach.
pub fn degree_cap() -> usize {
    DEGREE_CAP.load(Ordering::Relaxed)
}

/// Process-wide override of the degree guard.
pub fn set_degree_cap(cap: usize) {
    DEGREE_CAP.store(cap, Ordering::Relaxed);
}

pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rat {
    Rat::from_integer(BigInt::from(value))
}

/// Canonical text form: `p/q`, or `p` when `q = 1`.
pub fn format_rat(value: &Rat) -> String {
    value.to_string()
}

pub fn parse_rat(text: &str) -> Result<Rat> {
    let trimmed = text.trim();
    let (numer, denom) = match trimmed.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (trimmed, "1"),
    };
    let numer: BigInt = numer
        .parse()
        .map_err(|_| Error::format("rational", format!("cannot parse `{text}`")))?;
    let denom: BigInt = denom
        .parse()
        .map_err(|_| Error::format("rational", format!("cannot parse `{text}`")))?;
    if denom == BigInt::from(0) {
        return Err(Error::format(
            "rational",
            format!("zero denominator in `{text}`"),
        ));
    }
    Ok(Rat::new(numer, denom))
}
