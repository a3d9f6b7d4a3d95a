//! Finite-dimensional irreducible representations of the rank-1 double
//! affine Hecke algebra `H(k0, k1, u0, u1; q)` of type `C^vC_1`, for `q` not
//! a root of unity.
//!
//! The pipeline runs parameters through the strata predicates
//! ([`strata::classify_params`]), builds the matching quotient module as
//! four matrices ([`rep::build_quotient_rep`]), and checks it against the
//! defining relations, the dimension vector, irreducibility and the
//! Deligne-Simpson data ([`dsbridge`]).

pub mod dsbridge;
pub mod error;
pub mod laurent;
pub mod linalg;
pub mod rep;
pub mod roots;
pub mod sampling;
pub mod scalar;
pub mod selftest;
pub mod strata;

pub use error::{Error, Result};
pub use laurent::LaurentPoly;
pub use rep::{Rep, Side, SignVector};
pub use roots::{RootKind, RootVector, Sign};
pub use scalar::{Params, Scalar, Tolerance};
