//! Exact arithmetic on two-dimensional local fields F_q((t1))((t2)):
//! truncated iterated Laurent series, residues of 2-forms, truncated
//! Witt vectors, the higher tame symbol and the Witt symbol, expansions
//! of rational functions on P^2 into local fields, and verifiers for
//! the point and curve reciprocity laws.

pub mod error;
pub mod fq;
pub mod galois_ring;
pub mod homog;
pub mod laurent1;
pub mod laurent2;
pub mod poly;
pub mod pone;
pub mod surface;
pub mod forms;
pub mod precision;
pub mod reciprocity;
pub mod ring;
pub mod selftest;
pub mod symbols;
pub mod witt;

pub use error::{Error, Result};
pub use fq::{Fq, FqElem};
pub use galois_ring::{GaloisRing, GrElem};
pub use laurent1::{Bound, Laurent1};
pub use laurent2::{Axis, FqSeries, GrSeries, Laurent2, Valuation2};
pub use precision::Precision;
pub use ring::Ring;
