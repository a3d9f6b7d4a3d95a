//! Parameter strata on which each strict real root carries an irreducible
//! representation, and the eigenvalue data `xi_ij` of the associated
//! multiplicative Deligne-Simpson problem.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::roots::{enumerate_strict_roots, RootKind, RootVector, Sign};
use crate::scalar::{approx_eq, clearly_distinct, signed_power, Params, Scalar};

/// Prescribed eigenvalue pairs, one row per matrix
/// `A1 = q^{1/2} T0`, `A2 = T0v`, `A3 = T1`, `A4 = T1v`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XiTable {
    pub rows: [[Scalar; 2]; 4],
}

impl XiTable {
    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.rows[i - 1][j - 1]
    }
}

pub fn xi_table(p: &Params) -> XiTable {
    let qh = p.q_half;
    XiTable {
        rows: [
            [p.k0 * qh, -p.k0.inv() * qh],
            [p.u0, -p.u0.inv()],
            [p.k1, -p.k1.inv()],
            [p.u1, -p.u1.inv()],
        ],
    }
}

/// Leg label of `alpha` attached to each row of the xi table.
pub fn row_ranks(alpha: RootVector) -> [u32; 4] {
    let [_, a1, a2, a3, a4] = alpha.0;
    [a1, a3, a2, a4]
}

pub fn xi_product_with(alpha: RootVector, xi: &XiTable) -> Result<Scalar> {
    let a0 = alpha.central();
    let ranks = row_ranks(alpha);
    if ranks.iter().any(|&r| r > a0) {
        return Err(Error::InconsistentRanks(alpha.to_string()));
    }
    Ok(ranks
        .iter()
        .zip(xi.rows.iter())
        .map(|(&r, row)| row[0].powi((a0 - r) as i32) * row[1].powi(r as i32))
        .product())
}

/// `xi^[alpha] = prod_i xi_i1^(a0 - leg_i) xi_i2^(leg_i)`.
pub fn xi_product(alpha: RootVector, p: &Params) -> Result<Scalar> {
    xi_product_with(alpha, &xi_table(p))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratumVerdict {
    pub member: bool,
    pub failed: Vec<String>,
}

impl StratumVerdict {
    fn from_failures(failed: Vec<String>) -> Self {
        Self { member: failed.is_empty(), failed }
    }
}

/// `eps1 k1^eps1 * eps0 k0^eps0 * del1 u1^del1 * del0 u0^del0`.
pub fn signed_product(p: &Params, eps: [Sign; 2], del: [Sign; 2]) -> Scalar {
    signed_power(p.k0, eps[0].is_plus())
        * signed_power(p.k1, eps[1].is_plus())
        * signed_power(p.u0, del[0].is_plus())
        * signed_power(p.u1, del[1].is_plus())
}

/// `q^{-1/2-n}`, computed from `q^{1/2}`.
pub fn product_target(p: &Params, n: i32) -> Scalar {
    p.q_half.powi(-1 - 2 * n)
}

fn square_power(t: Scalar, s: Sign) -> Scalar {
    t.powi(2 * s.value())
}

fn all_signs() -> impl Iterator<Item = ([Sign; 2], [Sign; 2])> {
    Sign::BOTH.into_iter().flat_map(|e0| {
        Sign::BOTH.into_iter().flat_map(move |e1| {
            Sign::BOTH
                .into_iter()
                .flat_map(move |d0| Sign::BOTH.into_iter().map(move |d1| ([e0, e1], [d0, d1])))
        })
    })
}

fn type1_conditions(p: &Params, name: &str, t: Scalar, s: Sign, n: u32) -> Vec<String> {
    let q = p.q();
    let mut failed = Vec::new();
    if !approx_eq(square_power(t, s), -q.powi(n as i32), &p.tol) {
        failed.push(format!("eq.{name}.n"));
    }
    for m in 0..n as i32 {
        let target = product_target(p, m);
        if all_signs().any(|(e, d)| !clearly_distinct(signed_product(p, e, d), target, &p.tol)) {
            failed.push(format!("neq.product.m{m}"));
        }
    }
    failed
}

pub fn sigma_membership(p: &Params, kind: RootKind) -> Result<StratumVerdict> {
    let q = p.q();
    let failed = match kind {
        RootKind::Imaginary { .. } => return Err(Error::ImaginaryKind),
        RootKind::Type2 { eps, del, n } => {
            let mut failed = Vec::new();
            if !approx_eq(signed_product(p, eps, del), product_target(p, n as i32), &p.tol) {
                failed.push("eq.product.n".to_string());
            }
            let params = [("k0", p.k0, eps[0]), ("k1", p.k1, eps[1]), ("u0", p.u0, del[0]), ("u1", p.u1, del[1])];
            for (name, t, s) in params {
                let start = if s.is_plus() { 1 } else { 0 };
                for m in start..n as i32 {
                    if !clearly_distinct(square_power(t, s), -q.powi(m), &p.tol) {
                        failed.push(format!("neq.{name}.m{m}"));
                    }
                }
            }
            failed
        }
        RootKind::Type1E { i, eps, n } => {
            let (name, t) = if i == 0 { ("k0", p.k0) } else { ("k1", p.k1) };
            type1_conditions(p, name, t, eps, n)
        }
        RootKind::Type1F { i, del, n } => {
            let (name, t) = if i == 0 { ("u0", p.u0) } else { ("u1", p.u1) };
            type1_conditions(p, name, t, del, n)
        }
    };
    Ok(StratumVerdict::from_failures(failed))
}

/// Every strict real root with `n <= n_max` whose stratum contains `p`.
pub fn classify_params(p: &Params, n_max: u32) -> Vec<(RootKind, RootVector)> {
    enumerate_strict_roots(n_max)
        .into_iter()
        .filter(|(k, _)| k.is_real())
        .filter(|(k, _)| sigma_membership(p, *k).map(|v| v.member).unwrap_or(false))
        .collect()
}
