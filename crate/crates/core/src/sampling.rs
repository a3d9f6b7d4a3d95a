//! Random parameter points, generic or on a prescribed stratum.
//!
//! Magnitudes stay near the unit circle (`|q^{1/2}|` in `[1.1, 1.3]`,
//! `|t|` in `[0.8, 1.25]`) with uniform phases, which keeps the quotient
//! matrices well conditioned up to dimension 9.

use std::f64::consts::TAU;

use rand::Rng;

use crate::roots::{RootKind, Sign};
use crate::scalar::{signed_power, Params, Scalar, Tolerance};
use crate::strata::{product_target, sigma_membership, signed_product};

pub const Q_HALF_RANGE: (f64, f64) = (1.1, 1.3);
pub const T_RANGE: (f64, f64) = (0.8, 1.25);
/// Rejection attempts before a sampler gives up.
pub const MAX_ATTEMPTS: usize = 1000;

fn polar<R: Rng + ?Sized>(rng: &mut R, range: (f64, f64)) -> Scalar {
    Scalar::from_polar(rng.random_range(range.0..range.1), rng.random_range(0.0..TAU))
}

/// One draw from the sampling box, with no stratum check.
pub fn random_params<R: Rng + ?Sized>(rng: &mut R, tol: Tolerance) -> Params {
    let q_half = polar(rng, Q_HALF_RANGE);
    let [k0, k1, u0, u1] = std::array::from_fn(|_| polar(rng, T_RANGE));
    Params::unchecked(k0, k1, u0, u1, q_half).with_tolerance(tol)
}

fn rel_gap(a: Scalar, b: Scalar) -> f64 {
    (a - b).norm() / 1f64.max(a.norm()).max(b.norm())
}

/// Smallest relative gap between the two sides of any stratum equality with
/// `n <= n_max`.
pub fn stratum_distance(p: &Params, n_max: u32) -> f64 {
    let q = p.q();
    let mut best = f64::INFINITY;
    for e0 in Sign::BOTH {
        for e1 in Sign::BOTH {
            for d0 in Sign::BOTH {
                for d1 in Sign::BOTH {
                    let prod = signed_product(p, [e0, e1], [d0, d1]);
                    for n in 0..=n_max as i32 {
                        best = best.min(rel_gap(prod, product_target(p, n)));
                    }
                }
            }
        }
    }
    for t in p.t() {
        for s in Sign::BOTH {
            for n in 1..=n_max as i32 {
                best = best.min(rel_gap(t.powi(2 * s.value()), -q.powi(n)));
            }
        }
    }
    best
}

/// A validated point at relative distance at least `margin` from every
/// stratum equality with `n <= n_max`.
pub fn generic_params<R: Rng + ?Sized>(rng: &mut R, n_max: u32, margin: f64, tol: Tolerance) -> Option<Params> {
    (0..MAX_ATTEMPTS).find_map(|_| {
        let p = random_params(rng, tol);
        (crate::scalar::validate_params(&p).is_ok() && stratum_distance(&p, n_max) >= margin).then_some(p)
    })
}

/// `t` with `signed_power(t, s) = c`.
fn unsign(c: Scalar, s: Sign) -> Scalar {
    if s.is_plus() {
        c
    } else {
        -c.inv()
    }
}

fn stratum_candidate<R: Rng + ?Sized>(rng: &mut R, kind: RootKind, tol: Tolerance) -> Option<Params> {
    let q_half = polar(rng, Q_HALF_RANGE);
    let mut t: [Scalar; 4] = std::array::from_fn(|_| polar(rng, T_RANGE));
    match kind {
        RootKind::Imaginary { .. } => return None,
        RootKind::Type2 { eps, del, n } => {
            // balance the four signed characters, then solve for the last
            let target = q_half.powi(-1 - 2 * n as i32);
            let signs = [eps[0], eps[1], del[0], del[1]];
            let size = target.norm().powf(0.25);
            let mut chars: [Scalar; 4] =
                std::array::from_fn(|_| Scalar::from_polar(size * rng.random_range(0.9..1.1), rng.random_range(0.0..TAU)));
            chars[3] = target / (chars[0] * chars[1] * chars[2]);
            let [k0, k1, u0, u1] = std::array::from_fn(|i| unsign(chars[i], signs[i]));
            t = [k0, k1, u0, u1];
        }
        RootKind::Type1E { i, eps, n } | RootKind::Type1F { i, del: eps, n } => {
            // t^{2 eps} = -q^n  <=>  t^eps = ±i q^{n/2}
            let root = Scalar::new(0.0, if rng.random_bool(0.5) { 1.0 } else { -1.0 }) * q_half.powi(n as i32);
            let value = root.powi(eps.value());
            let slot = match kind {
                RootKind::Type1E { .. } => i as usize,
                _ => 2 + i as usize,
            };
            // slot order (k0, k1, u0, u1)
            t[slot] = value;
        }
    }
    let [k0, k1, u0, u1] = t;
    Some(Params::unchecked(k0, k1, u0, u1, q_half).with_tolerance(tol))
}

/// A validated point on the stratum of `kind`, inequalities included.
pub fn stratum_params<R: Rng + ?Sized>(rng: &mut R, kind: RootKind, tol: Tolerance) -> Option<Params> {
    (0..MAX_ATTEMPTS).find_map(|_| {
        let p = stratum_candidate(rng, kind, tol)?;
        let ok = crate::scalar::validate_params(&p).is_ok() && sigma_membership(&p, kind).map(|v| v.member).ok()?;
        ok.then_some(p)
    })
}

/// Signed characters `eps_i k_i^{eps_i}` etc. for a sign vector.
pub fn signed_characters(p: &Params, eps: [Sign; 2], del: [Sign; 2]) -> [Scalar; 4] {
    [
        signed_power(p.k0, eps[0].is_plus()),
        signed_power(p.k1, eps[1].is_plus()),
        signed_power(p.u0, del[0].is_plus()),
        signed_power(p.u1, del[1].is_plus()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::enumerate_strict_roots;
    use crate::strata::classify_params;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn stratum_points_are_members() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (kind, _) in enumerate_strict_roots(4).into_iter().filter(|(k, _)| k.is_real()) {
            let p = stratum_params(&mut rng, kind, Tolerance::default()).unwrap_or_else(|| panic!("{kind}"));
            assert!(sigma_membership(&p, kind).unwrap().member);
            assert!(classify_params(&p, 4).contains(&(kind, crate::roots::root_of_kind(kind).unwrap())));
        }
    }

    #[test]
    fn generic_points_avoid_strata() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let p = generic_params(&mut rng, 6, 1e-6, Tolerance::default()).unwrap();
            assert!(stratum_distance(&p, 6) >= 1e-6);
            assert!(classify_params(&p, 6).is_empty());
        }
    }

    #[test]
    fn seeded_draws_repeat() {
        let a = random_params(&mut ChaCha8Rng::seed_from_u64(3), Tolerance::default());
        let b = random_params(&mut ChaCha8Rng::seed_from_u64(3), Tolerance::default());
        assert_eq!(a, b);
    }
}
