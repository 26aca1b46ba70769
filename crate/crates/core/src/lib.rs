//! Computational companion to the non-extensibility proof for the Diophantine
//! pair `{1, 3}` in `Z[√−2]`.
//!
//! The crate is organised bottom-up:
//!
//! * [`quad_ring`] exact arithmetic in `Z[√D]` and square testing,
//! * [`sequences`] the `c_k`, `d_l`, `s_k`, `t_k` families with closed forms,
//! * [`pell`] solver for `z² − D·x² = N` (units, fundamental classes, orbits),
//! * [`congruence_sieve`] residue patterns and the small-index elimination,
//! * [`bounds`] Bennett's simultaneous-approximation chain,
//! * [`linear_forms`] Weil heights and the Baker–Wüstholz constant,
//! * [`reduction`] certified continued fractions and Baker–Davenport reduction,
//! * [`intersect`] sequence intersection, the six small cases and the full pipeline.
//!
//! Every transcendental quantity is carried as an [`interval::Interval`]
//! enclosure, so comparisons that drive a conclusion are certified.

pub mod bounds;
pub mod congruence_sieve;
pub mod expr;
pub mod intersect;
pub mod interval;
pub mod linear_forms;
pub mod pell;
pub mod quad_ring;
pub mod reduction;
pub mod sequences;

pub use expr::{parse_surd_expr, Expr, ParseError};
pub use interval::{CertifiedDecimal, Interval};
pub use quad_ring::{isqrt, is_square_in_ring, verify_tuple, QuadInt, SquareWitness, TupleReport};
