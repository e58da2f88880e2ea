//! Exact computations on twists of supersingular elliptic curves.
//!
//! The crate is layered bottom-up:
//!
//! * [`arith`], [`field`], [`linalg`]: exact scalars, small finite fields and
//!   rational linear algebra.
//! * [`quat`]: definite quaternion algebras `B_{p,inf}`, maximal orders,
//!   unit groups, centralizers.
//! * [`ellcurve`]: Weierstrass curves over small finite fields, point
//!   counting and the supersingular census.
//! * [`cohomology`]: finite Galois groups acting on a quaternion algebra,
//!   1-cocycles, `H^1` and twisted fixed subalgebras.
//! * [`scenarios`]: end-to-end constructions that tie the pieces together.

pub mod arith;
pub mod cohomology;
pub mod ellcurve;
pub mod error;
pub mod field;
pub mod linalg;
pub mod quat;
pub mod scenarios;

pub use error::{Error, Result};
