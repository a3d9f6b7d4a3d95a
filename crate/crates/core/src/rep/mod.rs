//! Explicit matrix representations of the algebra.
//!
//! The polynomial representations live on `C[z, z^{-1}]`; their finite
//! quotients by principal ideals are turned into matrices on a window of
//! monomials and then checked against the defining relations.

mod diagnostics;
mod file;
mod operators;
mod quotient;

pub use diagnostics::{
    commutant_dim, conjugacy_class_dim, dim_vector, kernel_dims, rho, rho_spectrum, rigidity_d, spectrum_of_z,
    verify_relations, DimVector, RelationResiduals,
};
pub use file::{MatrixRecord, ParamsRecord, ProvenanceRecord, RepFile};
pub use operators::{
    apply_t0, apply_t0v_bar, apply_t1, apply_t1v_bar, build_truncated_polyrep, quadratic_residual, TruncatedPolyRep,
};
#[doc(hidden)]
pub use operators::{build_truncated_polyrep_with, Convention};
pub use quotient::{
    build_quotient_rep, build_quotient_rep_unchecked, build_quotient_rep_with, quotient_plan, BuildOptions,
    QuotientPlan, CONVENTION_CHECK_RADIUS, INVARIANCE_TOL, RELATION_TOL,
};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::linalg::Matrix;
use crate::roots::{RootKind, Sign};
use crate::scalar::Scalar;

/// Which polynomial representation a module is a quotient of.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// Induced from the affine Hecke algebra `<T0, T1>`.
    P,
    /// Induced from `<T0v, T1v>`.
    Pbar,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::P => "P",
            Side::Pbar => "Pbar",
        }
    }

    pub fn parse(s: &str) -> Result<Side> {
        match s {
            "P" => Ok(Side::P),
            "Pbar" => Ok(Side::Pbar),
            _ => Err(Error::Parse(format!("unknown side {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SignVector {
    pub eps0: Sign,
    pub eps1: Sign,
    pub del0: Sign,
    pub del1: Sign,
}

impl SignVector {
    pub fn new(eps0: Sign, eps1: Sign, del0: Sign, del1: Sign) -> Self {
        Self { eps0, eps1, del0, del1 }
    }

    /// The two signs of the characters a side is induced from.
    pub fn side_signs(&self, side: Side) -> [Sign; 2] {
        match side {
            Side::P => [self.eps0, self.eps1],
            Side::Pbar => [self.del0, self.del1],
        }
    }

    pub fn all() -> impl Iterator<Item = SignVector> {
        Sign::BOTH.into_iter().flat_map(|a| {
            Sign::BOTH.into_iter().flat_map(move |b| {
                Sign::BOTH
                    .into_iter()
                    .flat_map(move |c| Sign::BOTH.into_iter().map(move |d| SignVector::new(a, b, c, d)))
            })
        })
    }
}

impl Default for SignVector {
    fn default() -> Self {
        Self::new(Sign::Plus, Sign::Plus, Sign::Plus, Sign::Plus)
    }
}

/// Where a constructed representation came from.
#[derive(Clone, Debug, PartialEq)]
pub struct Provenance {
    pub kind: RootKind,
    pub side: Side,
    pub signs: [Sign; 2],
    pub e: LaurentPoly,
    pub a: Scalar,
    pub window: (i32, i32),
}

/// Four square matrices for `T0, T1, T0v, T1v`.
#[derive(Clone, Debug, PartialEq)]
pub struct Rep {
    pub t0: Matrix,
    pub t1: Matrix,
    pub t0v: Matrix,
    pub t1v: Matrix,
    pub basis: Vec<i32>,
    pub provenance: Option<Provenance>,
}

impl Rep {
    pub fn from_matrices(t0: Matrix, t1: Matrix, t0v: Matrix, t1v: Matrix) -> Result<Rep> {
        let n = t0.nrows();
        for m in [&t0, &t1, &t0v, &t1v] {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::DimensionMismatch(format!("expected {n}x{n}, got {}x{}", m.nrows(), m.ncols())));
            }
        }
        Ok(Rep { t0, t1, t0v, t1v, basis: (0..n as i32).collect(), provenance: None })
    }

    pub fn dim(&self) -> usize {
        self.t0.nrows()
    }

    pub fn generators(&self) -> [&Matrix; 4] {
        [&self.t0, &self.t1, &self.t0v, &self.t1v]
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, other: &Rep) -> Rep {
        let (a, b) = (self.dim(), other.dim());
        let block = |x: &Matrix, y: &Matrix| {
            let mut m = Matrix::zeros(a + b, a + b);
            m.view_mut((0, 0), (a, a)).copy_from(x);
            m.view_mut((a, a), (b, b)).copy_from(y);
            m
        };
        Rep {
            t0: block(&self.t0, &other.t0),
            t1: block(&self.t1, &other.t1),
            t0v: block(&self.t0v, &other.t0v),
            t1v: block(&self.t1v, &other.t1v),
            basis: (0..(a + b) as i32).collect(),
            provenance: None,
        }
    }
}
