//! Deligne-Simpson data of a representation.
//!
//! A representation gives four matrices `A1 = q^{1/2} T0`, `A2 = T0v`,
//! `A3 = T1`, `A4 = T1v`, each annihilated by a quadratic with prescribed
//! roots. The defining product relation becomes `A4 A3 A1 A2 = 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{determinant, identity, numerical_rank, spectral_norm, Matrix};
use crate::rep::{Rep, RELATION_TOL};
use crate::roots::{classify_root, RootVector};
use crate::scalar::{approx_eq, Params, Scalar, Tolerance};
use crate::strata::{row_ranks, sigma_membership, xi_product_with, xi_table, XiTable};

/// Largest product residual [`to_ds_tuple`] accepts.
pub const PRODUCT_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct DsTuple {
    /// `A1, A2, A3, A4`.
    pub a: [Matrix; 4],
}

impl DsTuple {
    pub fn dim(&self) -> usize {
        self.a[0].nrows()
    }

    /// `A4 A3 A1 A2`, the ordering in which the product is the identity.
    pub fn product(&self) -> Matrix {
        let [a1, a2, a3, a4] = &self.a;
        a4 * a3 * a1 * a2
    }

    /// `|A4 A3 A1 A2 - 1|` relative to the product of the four norms.
    pub fn product_residual(&self) -> f64 {
        let scale: f64 = self.a.iter().map(spectral_norm).product();
        spectral_norm(&(self.product() - identity(self.dim()))) / scale.max(f64::MIN_POSITIVE)
    }

    pub fn det_product(&self) -> Scalar {
        self.a.iter().map(determinant).product()
    }
}

pub fn to_ds_tuple(r: &Rep, p: &Params) -> Result<DsTuple> {
    let t = DsTuple { a: [&r.t0 * p.q_half, r.t0v.clone(), r.t1.clone(), r.t1v.clone()] };
    let residual = t.product_residual();
    if residual > PRODUCT_TOL {
        return Err(Error::ProductNotIdentity { residual });
    }
    Ok(t)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassRow {
    pub xi1: Scalar,
    pub xi2: Scalar,
    /// `rank(A_i - xi1)`.
    pub rank1: u32,
}

/// Conjugacy-class data: for each `A_i` the two eigenvalues and the rank
/// of `A_i - xi1`; `rank(A_i) = n` and `(A_i - xi1)(A_i - xi2) = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassSpec {
    pub n: u32,
    pub rows: [ClassRow; 4],
}

pub fn class_spec_with(alpha: RootVector, xi: &XiTable) -> Result<ClassSpec> {
    let n = alpha.central();
    let ranks = row_ranks(alpha);
    if ranks.iter().any(|&r| r > n) {
        return Err(Error::InconsistentRanks(alpha.to_string()));
    }
    let rows = std::array::from_fn(|i| ClassRow { xi1: xi.rows[i][0], xi2: xi.rows[i][1], rank1: ranks[i] });
    Ok(ClassSpec { n, rows })
}

pub fn class_spec(alpha: RootVector, p: &Params) -> Result<ClassSpec> {
    class_spec_with(alpha, &xi_table(p))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RowCheck {
    pub rank: usize,
    pub expected_rank: u32,
    /// `|(A - xi1)(A - xi2)|` relative to `(|A| + |xi1|)(|A| + |xi2|)`.
    pub quadratic_residual: f64,
    pub ok: bool,
}

pub fn verify_class_membership(t: &DsTuple, c: &ClassSpec, tol: &Tolerance) -> Result<[RowCheck; 4]> {
    let n = t.dim();
    if n != c.n as usize {
        return Err(Error::DimensionMismatch(format!("tuple has size {n}, class data expects {}", c.n)));
    }
    let id = identity(n);
    let mut out = Vec::with_capacity(4);
    for (a, row) in t.a.iter().zip(&c.rows) {
        let norm = spectral_norm(a);
        let first = a - &id * row.xi1;
        let rank = numerical_rank(&first, norm + row.xi1.norm(), tol.rank_tol())?;
        let quad = &first * (a - &id * row.xi2);
        let quadratic_residual = spectral_norm(&quad) / ((norm + row.xi1.norm()) * (norm + row.xi2.norm()));
        let ok = rank == row.rank1 as usize && quadratic_residual <= RELATION_TOL;
        out.push(RowCheck { rank, expected_rank: row.rank1, quadratic_residual, ok });
    }
    Ok(out.try_into().expect("four rows"))
}

/// Existence of an irreducible tuple with class data `(alpha, xi)`: `alpha`
/// is a strict real root, `xi^[alpha] = 1`, and the stratum inequalities
/// hold.
pub fn ds_existence_predicate(alpha: RootVector, xi: &XiTable, p: &Params) -> bool {
    let Some(kind) = classify_root(alpha).filter(|k| k.is_real()) else {
        return false;
    };
    let Ok(prod) = xi_product_with(alpha, xi) else {
        return false;
    };
    if !approx_eq(prod, Scalar::new(1.0, 0.0), &p.tol) {
        return false;
    }
    sigma_membership(p, kind).map(|v| v.member).unwrap_or(false)
}
