//! Finite quotients `P / (E)` and `Pbar / (E)` as matrices.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::laurent::{build_e, canonical_window, reduce_mod, LaurentPoly};
use crate::linalg::{identity, Matrix};
use crate::roots::{RootKind, Sign};
use crate::scalar::{signed_power, validate_params, Params, Scalar};
use crate::strata::sigma_membership;

use super::diagnostics::verify_relations;
use super::operators::{apply_generator, build_truncated_polyrep_with, Convention, Generator};
use super::{Provenance, Rep, Side, SignVector};

/// Relative residual above which `T(z^j E)` is not in `(E)`.
pub const INVARIANCE_TOL: f64 = 1e-6;
/// Largest relation residual a constructed representation may carry.
pub const RELATION_TOL: f64 = 1e-8;
/// Radius of the truncated polynomial representation used as a convention
/// check before any construction.
pub const CONVENTION_CHECK_RADIUS: u32 = 5;
const CONVENTION_TOL: f64 = 1e-9;

/// How a root kind is realized as a quotient.
///
/// The modulus is `E_{±n}(a; z / lambda)`, normalized to a monic Laurent
/// polynomial, whose roots are the eigenvalues of
/// `Z = q^{1/2} T0 T0v = (T1v T1)^{-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuotientPlan {
    pub side: Side,
    pub signs: [Sign; 2],
    pub n_signed: i32,
    pub a: Scalar,
    pub dilation: Scalar,
    pub e: LaurentPoly,
    pub window: (i32, i32),
}

/// Quotient data for `kind`.
///
/// For Type2 the kind fixes every sign and `free` is ignored. For the Type1
/// families the sign attached to the distinguished leg is the opposite of
/// the root's sign, and `free` supplies the remaining character sign and the
/// sign used in the argument of `E`; every choice gives an isomorphic module.
pub fn quotient_plan(kind: RootKind, free: SignVector, p: &Params) -> Result<QuotientPlan> {
    let q = p.q();
    let half = p.q_half.inv();
    let full = q.inv();
    let sp = |t: Scalar, s: Sign| signed_power(t, s.is_plus());
    let (side, signs, n_signed, a, lambda_inv) = match kind {
        RootKind::Imaginary { .. } => return Err(Error::ImaginaryKind),
        RootKind::Type2 { eps, del, n } => (Side::P, eps, n as i32, sp(p.k0, eps[0]) * sp(p.u0, del[0]), half),
        RootKind::Type1E { i: 0, eps, n } => {
            let s = eps.flip();
            (Side::P, [s, free.eps1], -(n as i32), sp(p.k0, s) * sp(p.u0, free.del0), half)
        }
        RootKind::Type1E { eps, n, .. } => {
            let s = eps.flip();
            (Side::P, [free.eps0, s], -(n as i32), sp(p.k1, s) * sp(p.u1, free.del1), full)
        }
        RootKind::Type1F { i: 0, del, n } => {
            let s = del.flip();
            (Side::Pbar, [s, free.del1], -(n as i32), sp(p.u0, s) * sp(p.k0, free.eps0), half)
        }
        RootKind::Type1F { del, n, .. } => {
            let s = del.flip();
            (Side::Pbar, [free.del0, s], -(n as i32), sp(p.u1, s) * sp(p.k1, free.eps1), full)
        }
    };
    let raw = build_e(n_signed, a, q).dilate(lambda_inv);
    let lead = raw.coeff(raw.max_degree().expect("E is nonzero"));
    let e = raw.scale(lead.inv());
    let window = canonical_window(&e).expect("E is nonzero");
    Ok(QuotientPlan { side, signs, n_signed, a, dilation: lambda_inv.inv(), e, window })
}

#[doc(hidden)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildOptions {
    pub check_stratum: bool,
    pub convention: Convention,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self { check_stratum: true, convention: Convention::Difference }
    }
}

/// `V_alpha` for a kind whose stratum contains `p`.
///
/// `s` supplies the free signs of a Type1 construction; a Type2 kind carries
/// its own sign vector and `s` is ignored.
pub fn build_quotient_rep(kind: RootKind, s: SignVector, p: &Params) -> Result<Rep> {
    build_quotient_rep_with(kind, s, p, BuildOptions::default())
}

/// Construction without the stratum precondition; off the stratum it fails
/// with `IdealNotInvariant` or `RelationResidual`.
pub fn build_quotient_rep_unchecked(kind: RootKind, p: &Params) -> Result<Rep> {
    let opts = BuildOptions { check_stratum: false, ..BuildOptions::default() };
    build_quotient_rep_with(kind, SignVector::default(), p, opts)
}

struct Quotient<'a> {
    e: &'a LaurentPoly,
    window: (i32, i32),
    p: &'a Params,
    cache: HashMap<i32, LaurentPoly>,
}

impl Quotient<'_> {
    fn monomial(&mut self, k: i32) -> Result<&LaurentPoly> {
        if !self.cache.contains_key(&k) {
            let red = reduce_mod(&LaurentPoly::monomial(k, Scalar::new(1.0, 0.0)), self.e, self.window, &self.p.tol)?;
            self.cache.insert(k, red);
        }
        Ok(&self.cache[&k])
    }

    /// Reduction of `f` together with the size of the terms it sums.
    fn reduce(&mut self, f: &LaurentPoly) -> Result<(LaurentPoly, f64)> {
        let mut acc = Vec::new();
        let mut scale = 0.0;
        for (k, c) in f.terms() {
            let red = self.monomial(k)?;
            scale += c.norm() * red.norm_inf();
            acc.extend(red.terms().map(|(d, v)| (d, v * c)));
        }
        Ok((LaurentPoly::from_terms(acc), scale))
    }

    fn matrix(&mut self, op: impl Fn(&LaurentPoly) -> Result<LaurentPoly>) -> Result<Matrix> {
        let (lo, hi) = self.window;
        let n = (hi - lo + 1) as usize;
        let mut m = Matrix::zeros(n, n);
        for (col, b) in (lo..=hi).enumerate() {
            let image = op(&LaurentPoly::monomial(b, Scalar::new(1.0, 0.0)))?;
            let (red, _) = self.reduce(&image)?;
            for (k, c) in red.terms() {
                m[((k - lo) as usize, col)] = c;
            }
        }
        Ok(m)
    }
}

#[doc(hidden)]
pub fn build_quotient_rep_with(kind: RootKind, free: SignVector, p: &Params, opts: BuildOptions) -> Result<Rep> {
    validate_params(p)?;
    if opts.check_stratum {
        let verdict = sigma_membership(p, kind)?;
        if !verdict.member {
            return Err(Error::NotOnStratum(verdict.failed));
        }
    }
    let plan = quotient_plan(kind, free, p)?;
    let conv = opts.convention;

    let mut check_signs = SignVector::default();
    match plan.side {
        Side::P => [check_signs.eps0, check_signs.eps1] = plan.signs,
        Side::Pbar => [check_signs.del0, check_signs.del1] = plan.signs,
    }
    let truncated = build_truncated_polyrep_with(plan.side, check_signs, CONVENTION_CHECK_RADIUS, p, conv)?;
    let worst = truncated.quadratic_residuals(p).into_iter().fold(0.0, f64::max);
    if worst > CONVENTION_TOL {
        return Err(Error::RelationResidual { relation: "convention", residual: worst });
    }

    let op = |which: Generator| {
        let sign = if which == Generator::Zero { plan.signs[0] } else { plan.signs[1] };
        move |f: &LaurentPoly| apply_generator(plan.side, which, sign, f, p, conv)
    };
    let mut quotient = Quotient { e: &plan.e, window: plan.window, p, cache: HashMap::new() };

    let reach = 2 * kind.n() as i32 + 2;
    let mut invariance = 0.0f64;
    for j in -reach..=reach {
        let shifted = plan.e.shift(j);
        for which in [Generator::Zero, Generator::One] {
            let image = op(which)(&shifted)?;
            let (red, scale) = quotient.reduce(&image)?;
            if scale > 0.0 {
                invariance = invariance.max(red.norm_inf() / scale);
            }
        }
    }
    if invariance > INVARIANCE_TOL {
        return Err(Error::IdealNotInvariant { residual: invariance });
    }

    let first = quotient.matrix(op(Generator::Zero))?;
    let second = quotient.matrix(op(Generator::One))?;
    let z = quotient.matrix(|f| Ok(f.shift(1)))?;
    let z_inv = quotient.matrix(|f| Ok(f.shift(-1)))?;
    let dim = first.nrows();
    let id = identity(dim);
    let inverse = |m: &Matrix, t: Scalar| m - &id * (t - t.inv());
    let qh_inv = p.q_half.inv();

    let (t0, t1, t0v, t1v) = match plan.side {
        Side::P => {
            let t0v = (inverse(&first, p.k0) * &z) * qh_inv;
            let t1v = &z_inv * inverse(&second, p.k1);
            (first, second, t0v, t1v)
        }
        Side::Pbar => {
            let t1 = inverse(&second, p.u1) * &z_inv;
            let t0 = (&z * inverse(&first, p.u0)) * qh_inv;
            (t0, t1, first, second)
        }
    };
    let (lo, hi) = plan.window;
    let rep = Rep {
        t0,
        t1,
        t0v,
        t1v,
        basis: (lo..=hi).collect(),
        provenance: Some(Provenance {
            kind,
            side: plan.side,
            signs: plan.signs,
            e: plan.e.clone(),
            a: plan.a,
            window: plan.window,
        }),
    };
    let residuals = verify_relations(&rep, p);
    let (name, worst) = residuals.worst();
    if worst > RELATION_TOL {
        return Err(Error::RelationResidual { relation: name, residual: worst });
    }
    Ok(rep)
}
