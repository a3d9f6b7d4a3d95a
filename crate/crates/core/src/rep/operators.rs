//! Demazure-Lusztig operators on `C[z, z^{-1}]`.
//!
//! Each generator acts as `t s + c(z) (1 - s)` with `t = eps k^eps` and `s`
//! one of the two involutions; the difference `f - s f` is what makes the
//! rational coefficient `c(z)` produce a Laurent polynomial.

use crate::error::{Error, Result};
use crate::laurent::{divide_exact_scaled, LaurentPoly};
use crate::linalg::{identity, spectral_norm, Matrix};
use crate::roots::Sign;
use crate::scalar::{signed_power, Params, Scalar};

use super::{Side, SignVector};

/// How the difference part of an operator is read.
///
/// Only [`Convention::Difference`] yields a representation; the flipped
/// reading exists so the self-checks can be seen to fail.
#[doc(hidden)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Convention {
    #[default]
    Difference,
    Flipped,
}

#[derive(Clone, Copy)]
enum Reflection {
    S0,
    S1,
}

fn r(x: f64) -> Scalar {
    Scalar::new(x, 0.0)
}

fn demazure_lusztig(
    f: &LaurentPoly,
    eigen: Scalar,
    numerator: LaurentPoly,
    reflection: Reflection,
    p: &Params,
    convention: Convention,
) -> Result<LaurentPoly> {
    let q = p.q();
    let (sf, denominator) = match reflection {
        Reflection::S0 => (f.apply_s0(q), LaurentPoly::from_terms([(0, r(1.0)), (-2, -q)])),
        Reflection::S1 => (f.apply_s1(), LaurentPoly::from_terms([(0, r(1.0)), (2, r(-1.0))])),
    };
    let diff = match convention {
        Convention::Difference => f - &sf,
        Convention::Flipped => &sf - f,
    };
    let mut out = sf.scale(eigen);
    if !diff.is_zero() {
        // rounding in f - s f is relative to f, not to the difference
        let scale = numerator.norm_inf() * f.norm_inf().max(sf.norm_inf());
        out = &out + &divide_exact_scaled(&(&numerator * &diff), &denominator, scale, &p.tol)?;
    }
    Ok(out)
}

fn gap(t: Scalar) -> Scalar {
    t - t.inv()
}

fn affine_numerator(constant: Scalar, linear: Scalar, degree: i32) -> LaurentPoly {
    LaurentPoly::from_terms([(0, constant), (degree, linear)])
}

/// Which generator of a polynomial representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Generator {
    /// `T0` on `P`, `T0v` on `Pbar`.
    Zero,
    /// `T1` on `P`, `T1v` on `Pbar`.
    One,
}

pub(crate) fn apply_generator(
    side: Side,
    which: Generator,
    sign: Sign,
    f: &LaurentPoly,
    p: &Params,
    convention: Convention,
) -> Result<LaurentPoly> {
    // On Pbar the roles of (k_i, u_i) are exchanged.
    let (own0, other0, own1, other1) = match side {
        Side::P => (p.k0, p.u0, p.k1, p.u1),
        Side::Pbar => (p.u0, p.k0, p.u1, p.k1),
    };
    match which {
        Generator::Zero => demazure_lusztig(
            f,
            signed_power(own0, sign.is_plus()),
            affine_numerator(gap(own0), gap(other0) * p.q_half, -1),
            Reflection::S0,
            p,
            convention,
        ),
        Generator::One => demazure_lusztig(
            f,
            signed_power(own1, sign.is_plus()),
            affine_numerator(gap(own1), gap(other1), 1),
            Reflection::S1,
            p,
            convention,
        ),
    }
}

/// `T0` on `P^{eps0, eps1}`.
pub fn apply_t0(f: &LaurentPoly, eps0: Sign, p: &Params) -> Result<LaurentPoly> {
    apply_generator(Side::P, Generator::Zero, eps0, f, p, Convention::Difference)
}

/// `T1` on `P^{eps0, eps1}`.
pub fn apply_t1(f: &LaurentPoly, eps1: Sign, p: &Params) -> Result<LaurentPoly> {
    apply_generator(Side::P, Generator::One, eps1, f, p, Convention::Difference)
}

/// `T0v` on `Pbar^{del0, del1}`.
pub fn apply_t0v_bar(f: &LaurentPoly, del0: Sign, p: &Params) -> Result<LaurentPoly> {
    apply_generator(Side::Pbar, Generator::Zero, del0, f, p, Convention::Difference)
}

/// `T1v` on `Pbar^{del0, del1}`.
pub fn apply_t1v_bar(f: &LaurentPoly, del1: Sign, p: &Params) -> Result<LaurentPoly> {
    apply_generator(Side::Pbar, Generator::One, del1, f, p, Convention::Difference)
}

/// Matrices of the two directly defined generators on the ball `z^{-N}..z^N`.
#[derive(Clone, Debug)]
pub struct TruncatedPolyRep {
    pub side: Side,
    pub radius: u32,
    /// `T0` on `P`, `T0v` on `Pbar`.
    pub first: Matrix,
    /// `T1` on `P`, `T1v` on `Pbar`.
    pub second: Matrix,
}

pub fn build_truncated_polyrep(side: Side, s: SignVector, radius: u32, p: &Params) -> Result<TruncatedPolyRep> {
    build_truncated_polyrep_with(side, s, radius, p, Convention::Difference)
}

#[doc(hidden)]
pub fn build_truncated_polyrep_with(
    side: Side,
    s: SignVector,
    radius: u32,
    p: &Params,
    convention: Convention,
) -> Result<TruncatedPolyRep> {
    let n = radius as i32;
    let size = (2 * n + 1) as usize;
    let signs = s.side_signs(side);
    let mut mats = [Matrix::zeros(size, size), Matrix::zeros(size, size)];
    for (m, which) in mats.iter_mut().zip([Generator::Zero, Generator::One]) {
        let sign = if which == Generator::Zero { signs[0] } else { signs[1] };
        for j in -n..=n {
            let image = apply_generator(side, which, sign, &LaurentPoly::monomial(j, r(1.0)), p, convention)?;
            for (k, c) in image.terms() {
                if k.abs() > j.abs() {
                    return Err(Error::BallViolation { degree: j });
                }
                m[((k + n) as usize, (j + n) as usize)] = c;
            }
        }
    }
    let [first, second] = mats;
    Ok(TruncatedPolyRep { side, radius, first, second })
}

/// Normalized residual of `(T - t)(T + t^{-1})`.
pub fn quadratic_residual(m: &Matrix, t: Scalar) -> f64 {
    let id = identity(m.nrows());
    let norm = spectral_norm(m);
    let lhs = (m - &id * t) * (m + &id * t.inv());
    spectral_norm(&lhs) / ((norm + t.norm()) * (norm + t.inv().norm()))
}

impl TruncatedPolyRep {
    /// Quadratic residuals of the two generators.
    pub fn quadratic_residuals(&self, p: &Params) -> [f64; 2] {
        let (t0, t1) = match self.side {
            Side::P => (p.k0, p.k1),
            Side::Pbar => (p.u0, p.u1),
        };
        [quadratic_residual(&self.first, t0), quadratic_residual(&self.second, t1)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Sign::{Minus as M, Plus as P};

    fn params() -> Params {
        Params::new(
            Scalar::from_polar(1.1, 0.3),
            Scalar::from_polar(0.8, -1.2),
            Scalar::from_polar(1.3, 2.1),
            Scalar::from_polar(0.9, 0.7),
            Scalar::from_polar(1.2, 0.5),
        )
        .unwrap()
    }

    fn close(a: &LaurentPoly, b: &LaurentPoly) -> bool {
        (a - b).norm_inf() < 1e-12 * 1f64.max(a.norm_inf())
    }

    #[test]
    fn constants_are_eigenvectors() {
        let p = params();
        let one = LaurentPoly::one();
        assert!(close(&apply_t1(&one, P, &p).unwrap(), &LaurentPoly::constant(p.k1)));
        assert!(close(&apply_t0(&one, M, &p).unwrap(), &LaurentPoly::constant(-p.k0.inv())));
        assert!(close(&apply_t0v_bar(&one, P, &p).unwrap(), &LaurentPoly::constant(p.u0)));
        assert!(close(&apply_t1v_bar(&one, M, &p).unwrap(), &LaurentPoly::constant(-p.u1.inv())));
    }

    #[test]
    fn action_on_z() {
        let p = params();
        let z = LaurentPoly::z();
        // (z - z^{-1}) / (1 - z^2) = -z^{-1}, so
        // T1 z = k1 z^{-1} - (k1 - 1/k1) z^{-1} - (u1 - 1/u1)
        let expect = LaurentPoly::from_terms([(-1, p.k1.inv()), (0, -(p.u1 - p.u1.inv()))]);
        assert!(close(&apply_t1(&z, P, &p).unwrap(), &expect));
        let bar = LaurentPoly::from_terms([(-1, p.u1.inv()), (0, -(p.k1 - p.k1.inv()))]);
        assert!(close(&apply_t1v_bar(&z, P, &p).unwrap(), &bar));
        // (z - q z^{-1}) / (1 - q z^{-2}) = z, so
        // T0 z = k0 q z^{-1} + (k0 - 1/k0) z + (u0 - 1/u0) q^{1/2}
        let q = p.q();
        let expect0 = LaurentPoly::from_terms([
            (-1, p.k0 * q),
            (1, p.k0 - p.k0.inv()),
            (0, (p.u0 - p.u0.inv()) * p.q_half),
        ]);
        assert!(close(&apply_t0(&z, P, &p).unwrap(), &expect0));
    }

    #[test]
    fn quadratic_relations_on_monomials() {
        let p = params();
        for sign in [P, M] {
            for j in -4..=4 {
                let f = LaurentPoly::monomial(j, Scalar::new(0.7, -0.2));
                let check = |apply: &dyn Fn(&LaurentPoly) -> LaurentPoly, t: Scalar| {
                    let tf = apply(&f);
                    let ttf = apply(&tf);
                    // T^2 - (t - 1/t) T - 1 = 0
                    let res = &(&ttf - &tf.scale(t - t.inv())) - &f;
                    assert!(res.norm_inf() < 1e-9 * 1f64.max(ttf.norm_inf()), "j={j}");
                };
                check(&|g| apply_t0(g, sign, &p).unwrap(), p.k0);
                check(&|g| apply_t1(g, sign, &p).unwrap(), p.k1);
                check(&|g| apply_t0v_bar(g, sign, &p).unwrap(), p.u0);
                check(&|g| apply_t1v_bar(g, sign, &p).unwrap(), p.u1);
            }
        }
    }

    #[test]
    fn truncated_matrices() {
        let p = params();
        let s = SignVector::default();
        let zero = build_truncated_polyrep(Side::P, s, 0, &p).unwrap();
        assert!((zero.first[(0, 0)] - p.k0).norm() < 1e-15);
        assert!((zero.second[(0, 0)] - p.k1).norm() < 1e-15);
        for side in [Side::P, Side::Pbar] {
            let tr = build_truncated_polyrep(side, SignVector::new(M, P, P, M), 5, &p).unwrap();
            let [a, b] = tr.quadratic_residuals(&p);
            assert!(a < 1e-9 && b < 1e-9, "{side:?}: {a:e} {b:e}");
        }
        let flipped = build_truncated_polyrep_with(Side::P, s, 5, &p, Convention::Flipped).unwrap();
        assert!(flipped.quadratic_residuals(&p)[0] > 1e-3);
    }

    #[test]
    fn matrix_agrees_with_operator() {
        let p = params();
        let tr = build_truncated_polyrep(Side::P, SignVector::default(), 3, &p).unwrap();
        let f = LaurentPoly::from_terms([(-2, Scalar::new(1.0, 1.0)), (1, Scalar::new(-0.5, 0.0)), (3, Scalar::new(0.0, 2.0))]);
        let v = nalgebra::DVector::from_iterator(7, (-3..=3).map(|k| f.coeff(k)));
        let w = &tr.second * v;
        let direct = apply_t1(&f, P, &p).unwrap();
        for k in -3..=3 {
            assert!((w[(k + 3) as usize] - direct.coeff(k)).norm() < 1e-12);
        }
    }
}
