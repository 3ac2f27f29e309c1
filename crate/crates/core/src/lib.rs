//! Exact construction and certification of the genus field and the Hilbert
//! genus field of imaginary cyclic quartic fields
//! K = Q(sqrt(-a * eps_p * sqrt(p))), for p = 2 or a prime p ≡ 1 (mod 4) and
//! a positive squarefree integer a coprime to p.
//!
//! All arithmetic is exact (big integers); every emitted generator set is
//! re-verified from first principles: square-class vectors over F2 certify
//! multiplicative independence, and an ideal-square plus mod-4 criterion
//! certifies unramifiedness.

pub mod arith;
pub mod cli;
pub mod error;
pub mod fieldcase;
pub mod forms;
pub mod grid;
pub mod hilbert;
pub mod normeq;
pub mod quadfield;
pub mod verify;

pub use error::{Error, Result};
