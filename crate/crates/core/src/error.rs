//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not squarefree")]
    NotSquarefree(u64),

    #[error("p must be 2 or a prime ≡ 1 (mod 4), got {0}")]
    InvalidP(u64),

    #[error("invalid a = {a}: {reason}")]
    InvalidA { a: u64, reason: String },

    #[error("elements live in different fields: sqrt({0}) vs sqrt({1})")]
    MismatchedField(u64, u64),

    #[error("(s={s}, t={t}, den={den}) is not integral over sqrt({p})")]
    NotIntegral { s: String, t: String, den: u8, p: u64 },

    #[error("element is even (shares a factor with 2); mod-4 square test requires an odd element")]
    NotOdd,

    #[error("zero element where a nonzero one is required")]
    ZeroElement,

    #[error("lambda exponent is defined only for odd p, got p = 2")]
    LambdaUndefinedForTwo,

    #[error("q = {q} does not split in Q(sqrt({p}))")]
    NotSplit { p: u64, q: u64 },

    #[error("q = {q} is not representable as x^2 - 2y^2 (need q ≡ ±1 mod 8)")]
    NotRepresentable { q: u64 },

    #[error("bounded search exhausted while {context} (cap {cap})")]
    SearchExhausted { context: String, cap: u64 },

    #[error("malformed standard form: {0}")]
    MalformedStandardForm(String),

    #[error("split-prime valuation shortcut precondition failed at q = {q}")]
    PrimitivityViolated { q: u64 },

    #[error("no sign/unit normalization of x + y*sqrt({p}) is a square mod 4 for q = {q}")]
    NormalizationFailed { p: u64, q: u64 },

    #[error("cannot parse {input:?} as an element of Q(sqrt({p}))")]
    ParseElement { input: String, p: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
