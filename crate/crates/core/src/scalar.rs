//! Scalars, tolerances and algebra parameters.
//!
//! Every numerical decision in the crate (equality of parameters, exponent
//! matching, rank counting) goes through a [`Tolerance`], so a single policy
//! governs how close to a stratum a parameter point may sit.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Scalar = Complex64;

/// Factor by which an inequality must be violated, relative to `eq_tol`,
/// before two quantities count as distinct.
pub const INEQUALITY_MARGIN: f64 = 1e3;

pub const DEFAULT_ROOTS_BOUND: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    eq_tol: f64,
    rank_tol: f64,
}

impl Tolerance {
    pub fn new(eq_tol: f64, rank_tol: f64) -> Result<Self> {
        for (name, v) in [("eq_tol", eq_tol), ("rank_tol", rank_tol)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidTolerance(format!("{name} = {v} not in (0, 1)")));
            }
        }
        Ok(Self { eq_tol, rank_tol })
    }

    pub fn eq_tol(&self) -> f64 {
        self.eq_tol
    }

    pub fn rank_tol(&self) -> f64 {
        self.rank_tol
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { eq_tol: 1e-9, rank_tol: 1e-9 }
    }
}

fn rel_gap(a: Scalar, b: Scalar) -> f64 {
    (a - b).norm() / 1f64.max(a.norm()).max(b.norm())
}

/// `|a - b| <= eq_tol * max(1, |a|, |b|)`.
pub fn approx_eq(a: Scalar, b: Scalar, tol: &Tolerance) -> bool {
    rel_gap(a, b) <= tol.eq_tol
}

/// True when `a` and `b` differ by more than the inequality margin.
pub fn clearly_distinct(a: Scalar, b: Scalar, tol: &Tolerance) -> bool {
    rel_gap(a, b) > INEQUALITY_MARGIN * tol.eq_tol
}

fn match_within(x: Scalar, q: Scalar, lo: i32, hi: i32, thresh: f64) -> Result<Option<i32>> {
    let mut found = None;
    for m in lo..=hi {
        if rel_gap(x, q.powi(m)) <= thresh {
            if let Some(prev) = found {
                return Err(Error::AmbiguousMatch(prev, m));
            }
            found = Some(m);
        }
    }
    Ok(found)
}

/// The unique exponent `m` in `[lo, hi]` with `x ≈ q^m`, if any.
pub fn match_q_power(x: Scalar, q: Scalar, lo: i32, hi: i32, tol: &Tolerance) -> Result<Option<i32>> {
    match_within(x, q, lo, hi, tol.eq_tol)
}

/// Like [`match_q_power`] but with the wider inequality margin: any exponent
/// returned here is one that `x` is not clearly distinct from.
pub fn near_q_power(x: Scalar, q: Scalar, lo: i32, hi: i32, tol: &Tolerance) -> Result<Option<i32>> {
    match_within(x, q, lo, hi, INEQUALITY_MARGIN * tol.eq_tol)
}

/// Parameters `(k0, k1, u0, u1; q^{1/2})` of the algebra.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Params {
    pub k0: Scalar,
    pub k1: Scalar,
    pub u0: Scalar,
    pub u1: Scalar,
    pub q_half: Scalar,
    pub roots_bound: u32,
    pub tol: Tolerance,
}

impl Params {
    /// Validated parameters with the default tolerance and roots bound.
    pub fn new(k0: Scalar, k1: Scalar, u0: Scalar, u1: Scalar, q_half: Scalar) -> Result<Self> {
        let p = Self::unchecked(k0, k1, u0, u1, q_half);
        validate_params(&p)?;
        Ok(p)
    }

    pub fn unchecked(k0: Scalar, k1: Scalar, u0: Scalar, u1: Scalar, q_half: Scalar) -> Self {
        Self { k0, k1, u0, u1, q_half, roots_bound: DEFAULT_ROOTS_BOUND, tol: Tolerance::default() }
    }

    pub fn with_tolerance(mut self, tol: Tolerance) -> Self {
        self.tol = tol;
        self
    }

    pub fn q(&self) -> Scalar {
        self.q_half * self.q_half
    }

    /// The parameter tuple `(t1, t2, t3, t4) = (k0, k1, u0, u1)`.
    pub fn t(&self) -> [Scalar; 4] {
        [self.k0, self.k1, self.u0, self.u1]
    }
}

pub fn validate_params(p: &Params) -> Result<()> {
    let named = [("k0", p.k0), ("k1", p.k1), ("u0", p.u0), ("u1", p.u1), ("q_half", p.q_half)];
    for (name, v) in named {
        if !(v.re.is_finite() && v.im.is_finite()) || v.norm() == 0.0 {
            return Err(Error::ZeroParameter(name));
        }
    }
    let q = p.q();
    let one = Scalar::new(1.0, 0.0);
    let mut power = one;
    for m in 1..=p.roots_bound {
        power *= q;
        if approx_eq(power, one, &p.tol) {
            return Err(Error::RootOfUnity(m));
        }
    }
    Ok(())
}

/// `eps * t^eps` for a sign `eps`.
pub(crate) fn signed_power(t: Scalar, positive: bool) -> Scalar {
    if positive {
        t
    } else {
        -t.inv()
    }
}

/// Text form of a scalar: `"a+bi"`, `"a-bi"` or a bare real.
pub struct Literal(pub Scalar);

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = self.0;
        if z.im == 0.0 {
            write!(f, "{:?}", z.re)
        } else if z.im.is_sign_negative() {
            write!(f, "{:?}-{:?}i", z.re, -z.im)
        } else {
            write!(f, "{:?}+{:?}i", z.re, z.im)
        }
    }
}

pub fn format_scalar(z: Scalar) -> String {
    Literal(z).to_string()
}

fn parse_real(s: &str, whole: &str) -> Result<f64> {
    f64::from_str(s).map_err(|_| Error::Parse(format!("bad complex literal {whole:?}")))
}

/// Parse `"a+bi"`, `"a-bi"`, `"bi"`, `"i"` or a bare real.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty complex literal".into()));
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Scalar::new(parse_real(&s, text)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&j| (bytes[j] == b'+' || bytes[j] == b'-') && !matches!(bytes[j - 1], b'e' | b'E'));
    let imag = |part: &str| -> Result<f64> {
        match part {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            other => parse_real(other, text),
        }
    };
    match split {
        Some(j) => Ok(Scalar::new(parse_real(&body[..j], text)?, imag(&body[j..])?)),
        None => Ok(Scalar::new(0.0, imag(body)?)),
    }
}
