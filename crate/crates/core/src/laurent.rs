//! The Laurent polynomial ring `C[z, z^{-1}]`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::{format_scalar, parse_scalar, Scalar, Tolerance};

/// Coefficients below this modulus are dropped.
pub const TRIM_FLOOR: f64 = 1e-14;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i32, Scalar>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, Scalar::new(1.0, 0.0))
    }

    pub fn z() -> Self {
        Self::monomial(1, Scalar::new(1.0, 0.0))
    }

    pub fn monomial(degree: i32, c: Scalar) -> Self {
        Self::from_terms([(degree, c)])
    }

    pub fn constant(c: Scalar) -> Self {
        Self::monomial(0, c)
    }

    /// Sums repeated degrees, then trims.
    pub fn from_terms(terms: impl IntoIterator<Item = (i32, Scalar)>) -> Self {
        let mut coeffs = BTreeMap::new();
        for (k, c) in terms {
            *coeffs.entry(k).or_insert(Scalar::new(0.0, 0.0)) += c;
        }
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        self.coeffs.retain(|_, c| c.norm() >= TRIM_FLOOR && c.re.is_finite() && c.im.is_finite());
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, degree: i32) -> Scalar {
        self.coeffs.get(&degree).copied().unwrap_or_default()
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, Scalar)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    pub fn norm_inf(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: Scalar) -> Self {
        Self::from_terms(self.terms().map(|(k, v)| (k, v * c)))
    }

    /// Multiplication by the unit `z^k`.
    pub fn shift(&self, k: i32) -> Self {
        Self { coeffs: self.terms().map(|(d, v)| (d + k, v)).collect() }
    }

    /// `f(z) -> f(lambda z)`.
    pub fn dilate(&self, lambda: Scalar) -> Self {
        Self::from_terms(self.terms().map(|(k, v)| (k, v * lambda.powi(k))))
    }

    pub fn eval(&self, z: Scalar) -> Scalar {
        self.terms().map(|(k, v)| v * z.powi(k)).sum()
    }

    /// `z^n -> q^n z^{-n}`, i.e. `f(z) -> f(q/z)`.
    pub fn apply_s0(&self, q: Scalar) -> Self {
        Self::from_terms(self.terms().map(|(k, v)| (-k, v * q.powi(k))))
    }

    /// `z^n -> z^{-n}`.
    pub fn apply_s1(&self) -> Self {
        Self { coeffs: self.terms().map(|(k, v)| (-k, v)).collect() }
    }

    fn dense(&self) -> (i32, Vec<Scalar>) {
        let lo = self.min_degree().unwrap_or(0);
        let hi = self.max_degree().unwrap_or(0);
        let v = (lo..=hi).map(|k| self.coeff(k)).collect();
        (lo, v)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms().chain(rhs.terms()))
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms().chain(rhs.terms().map(|(k, v)| (k, -v))))
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(Scalar::new(-1.0, 0.0))
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.terms().flat_map(|(a, x)| rhs.terms().map(move |(b, y)| (a + b, x * y))),
        )
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

/// Exact quotient `f / g`, checked by the size of the remainder relative to
/// `max(|f|, |f / g| |g|)`.
pub fn divide_exact(f: &LaurentPoly, g: &LaurentPoly, tol: &Tolerance) -> Result<LaurentPoly> {
    divide_exact_scaled(f, g, 0.0, tol)
}

/// [`divide_exact`] for an `f` that is itself the result of a cancellation
/// among terms of size `scale`.
pub fn divide_exact_scaled(f: &LaurentPoly, g: &LaurentPoly, scale: f64, tol: &Tolerance) -> Result<LaurentPoly> {
    if g.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if f.is_zero() {
        return Ok(LaurentPoly::zero());
    }
    let (flo, mut num) = f.dense();
    let (glo, den) = g.dense();
    let lead = *den.last().unwrap();
    let steps = (num.len() + 1).saturating_sub(den.len());
    let mut quot = vec![Scalar::default(); steps];
    for s in (0..steps).rev() {
        let c = num[s + den.len() - 1] / lead;
        quot[s] = c;
        for (j, d) in den.iter().enumerate() {
            num[s + j] -= c * d;
        }
    }
    let remainder = num[..num.len().min(den.len() - 1)].iter().map(|c| c.norm()).fold(0.0, f64::max);
    // measured against the terms the elimination actually subtracted
    let q_norm = quot.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let size = f.norm_inf().max(q_norm * g.norm_inf()).max(scale);
    if remainder > tol.eq_tol() * size {
        return Err(Error::InexactDivision { remainder });
    }
    Ok(LaurentPoly::from_terms(quot.into_iter().enumerate().map(|(s, c)| (flo - glo + s as i32, c))))
}

/// `E_n(a; z)` for `n >= 0` and `E_{-n}(a; z)` for negative `n_signed`.
///
/// `E_n = z^{-n} prod_{i=-n}^{-1} (z - q^i/a) prod_{i=0}^{n} (z - a q^i)`;
/// `E_{-n}` stops the second product at `i = n - 1`.
pub fn build_e(n_signed: i32, a: Scalar, q: Scalar) -> LaurentPoly {
    let n = n_signed.abs();
    let upper = if n_signed >= 0 { n } else { n - 1 };
    let linear = |root: Scalar| LaurentPoly::from_terms([(1, Scalar::new(1.0, 0.0)), (0, -root)]);
    let mut e = LaurentPoly::one();
    for i in -n..=-1 {
        e = &e * &linear(q.powi(i) / a);
    }
    for i in 0..=upper {
        e = &e * &linear(a * q.powi(i));
    }
    e.shift(-n)
}

/// The roots of [`build_e`], in the order `q^{-n}/a, ..., q^{-1}/a, a, a q, ...`.
pub fn e_roots(n_signed: i32, a: Scalar, q: Scalar) -> Vec<Scalar> {
    let n = n_signed.abs();
    let upper = if n_signed >= 0 { n } else { n - 1 };
    (-n..=-1).map(|i| q.powi(i) / a).chain((0..=upper).map(|i| a * q.powi(i))).collect()
}

/// Canonical quotient window `[lo, hi]` for a modulus: its support with the
/// top degree removed.
pub fn canonical_window(e: &LaurentPoly) -> Option<(i32, i32)> {
    Some((e.min_degree()?, e.max_degree()? - 1))
}

/// Reduce `f` modulo the ideal `(E)` into the degree window `[lo, hi]`.
///
/// Terms above the window are cancelled with the leading coefficient of `E`,
/// terms below with the trailing one.
pub fn reduce_mod(f: &LaurentPoly, e: &LaurentPoly, window: (i32, i32), tol: &Tolerance) -> Result<LaurentPoly> {
    let (lo, hi) = window;
    let (Some(elo), Some(ehi)) = (e.min_degree(), e.max_degree()) else {
        return Err(Error::DivisionByZero);
    };
    let span = ehi - elo;
    if hi - lo + 1 != span || span < 1 {
        return Err(Error::WindowMismatch { lo, hi, span });
    }
    let lead = e.coeff(ehi);
    let trail = e.coeff(elo);
    let floor = tol.eq_tol() * e.norm_inf();
    if lead.norm() <= floor || trail.norm() <= floor {
        return Err(Error::WindowMismatch { lo, hi, span });
    }
    let mut acc: BTreeMap<i32, Scalar> = f.coeffs.clone();
    loop {
        let top = acc.keys().next_back().copied();
        let bottom = acc.keys().next().copied();
        let (deg, pivot_deg, pivot) = match (top, bottom) {
            (Some(t), _) if t > hi => (t, ehi, lead),
            (_, Some(b)) if b < lo => (b, elo, trail),
            _ => break,
        };
        let c = acc.remove(&deg).unwrap() / pivot;
        for (k, v) in e.terms() {
            if k == pivot_deg {
                continue;
            }
            let slot = acc.entry(k + deg - pivot_deg).or_default();
            *slot -= c * v;
        }
    }
    Ok(LaurentPoly::from_terms(acc))
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0*z^0");
        }
        for (n, (k, c)) in self.terms().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            if c.im == 0.0 {
                write!(f, "{}*z^{k}", format_scalar(c))?;
            } else {
                write!(f, "({})*z^{k}", format_scalar(c))?;
            }
        }
        Ok(())
    }
}

fn parse_term(term: &str, whole: &str) -> Result<(i32, Scalar)> {
    let bad = || Error::Parse(format!("bad Laurent term {term:?} in {whole:?}"));
    let (coef, degree) = match term.rsplit_once('z') {
        Some((head, tail)) => {
            let degree = match tail.strip_prefix('^') {
                Some(d) => d.parse::<i32>().map_err(|_| bad())?,
                None if tail.is_empty() => 1,
                None => return Err(bad()),
            };
            let head = head.strip_suffix('*').unwrap_or(head);
            (head, degree)
        }
        None => (term, 0),
    };
    let coef = coef.trim();
    let coef = coef.strip_prefix('(').and_then(|c| c.strip_suffix(')')).unwrap_or(coef);
    let value = match coef {
        "" | "+" => Scalar::new(1.0, 0.0),
        "-" => Scalar::new(-1.0, 0.0),
        c => parse_scalar(c).map_err(|_| bad())?,
    };
    Ok((degree, value))
}

impl FromStr for LaurentPoly {
    type Err = Error;

    /// Accepts the printed form: `c*z^k` terms joined by `" + "`, with
    /// complex coefficients in parentheses.
    fn from_str(s: &str) -> Result<Self> {
        let mut terms = Vec::new();
        let mut depth = 0i32;
        let mut start = 0;
        let chars: Vec<char> = s.chars().collect();
        // split on '+' at paren depth 0 that is surrounded by spaces
        let mut pieces = Vec::new();
        for (i, &ch) in chars.iter().enumerate() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                '+' if depth == 0 && i > 0 && chars[i - 1] == ' ' && chars.get(i + 1) == Some(&' ') => {
                    pieces.push(chars[start..i].iter().collect::<String>());
                    start = i + 1;
                }
                _ => {}
            }
        }
        pieces.push(chars[start..].iter().collect());
        for piece in pieces {
            let piece = piece.trim();
            if piece.is_empty() {
                return Err(Error::Parse(format!("empty term in {s:?}")));
            }
            terms.push(parse_term(piece, s)?);
        }
        Ok(Self::from_terms(terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(x: f64) -> Scalar {
        Scalar::new(x, 0.0)
    }

    fn poly(terms: &[(i32, f64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|&(k, c)| (k, r(c))))
    }

    fn close(a: &LaurentPoly, b: &LaurentPoly, eps: f64) -> bool {
        (a - b).norm_inf() <= eps * 1f64.max(a.norm_inf())
    }

    #[test]
    fn arithmetic() {
        let zp1 = poly(&[(1, 1.0), (0, 1.0)]);
        let zm1 = poly(&[(1, 1.0), (0, -1.0)]);
        assert_eq!(&zp1 * &zm1, poly(&[(2, 1.0), (0, -1.0)]));
        assert_eq!(&zp1 + &LaurentPoly::zero(), zp1);
        assert_eq!(poly(&[(-1, 1.0), (0, 2.0)]).shift(3), poly(&[(2, 1.0), (3, 2.0)]));
        assert!((&zp1 - &zp1).is_zero());
        assert_eq!(LaurentPoly::zero().min_degree(), None);
    }

    #[test]
    fn involutions() {
        let q = r(4.0);
        let f = poly(&[(1, 1.0), (0, 1.0)]);
        assert_eq!(f.apply_s0(q), poly(&[(-1, 4.0), (0, 1.0)]));
        assert!(close(&f.apply_s0(q).apply_s0(q), &f, 1e-15));
        assert_eq!(poly(&[(-2, 1.0)]).apply_s0(q), poly(&[(2, 1.0 / 16.0)]));
        assert_eq!(poly(&[(2, 1.0), (0, 3.0)]).apply_s1(), poly(&[(-2, 1.0), (0, 3.0)]));
        assert_eq!(LaurentPoly::one().apply_s1(), LaurentPoly::one());
        let anti = poly(&[(1, 1.0), (-1, -1.0)]);
        assert_eq!(anti.apply_s1(), -&anti);
    }

    #[test]
    fn exact_division() {
        let t = Tolerance::default();
        let h = divide_exact(&poly(&[(2, 1.0), (0, -1.0)]), &poly(&[(1, 1.0), (0, -1.0)]), &t).unwrap();
        assert_eq!(h, poly(&[(1, 1.0), (0, 1.0)]));
        let f = poly(&[(3, 1.0), (-3, -64.0)]);
        let g = poly(&[(0, 1.0), (-2, -4.0)]);
        let h = divide_exact(&f, &g, &t).unwrap();
        assert!(close(&h, &poly(&[(3, 1.0), (1, 4.0), (-1, 16.0)]), 1e-14));
        assert!(close(&(&g * &h), &f, 1e-14));
        let err = divide_exact(&poly(&[(2, 1.0), (0, 1.0)]), &poly(&[(1, 1.0), (0, -1.0)]), &t);
        assert!(matches!(err, Err(Error::InexactDivision { .. })));
        assert_eq!(divide_exact(&f, &LaurentPoly::zero(), &t), Err(Error::DivisionByZero));
    }

    #[test]
    fn e_polynomials() {
        let q = r(4.0);
        let a = r(3.0);
        assert_eq!(build_e(0, a, q), poly(&[(1, 1.0), (0, -3.0)]));
        // z^{-1} (z - q^{-1}/a)(z - a) = z - (a + 1/(qa)) + (1/q) z^{-1}
        let expected = poly(&[(1, 1.0), (0, -(3.0 + 1.0 / 12.0)), (-1, 1.0 / 4.0)]);
        assert!(close(&build_e(-1, a, q), &expected, 1e-15));
        let e2 = build_e(2, a, q);
        assert_eq!((e2.min_degree(), e2.max_degree()), (Some(-2), Some(3)));
        for root in [1.0 / 48.0, 1.0 / 12.0, 3.0, 12.0, 48.0] {
            assert!(e2.eval(r(root)).norm() < 1e-8 * e2.norm_inf(), "root {root}");
        }
        let em3 = build_e(-3, a, q);
        assert_eq!((em3.min_degree(), em3.max_degree()), (Some(-3), Some(3)));
    }

    #[test]
    fn reduction() {
        let t = Tolerance::default();
        let a = r(2.5);
        let e = poly(&[(1, 1.0), (0, -2.5)]);
        assert_eq!(reduce_mod(&poly(&[(2, 1.0)]), &e, (0, 0), &t).unwrap(), LaurentPoly::constant(a * a));
        let e2 = build_e(2, r(1.5), r(1.7));
        let inside = poly(&[(-2, 1.0), (2, 3.0)]);
        assert_eq!(reduce_mod(&inside, &e2, (-2, 2), &t).unwrap(), inside);
        assert!(matches!(reduce_mod(&inside, &e2, (-2, 1), &t), Err(Error::WindowMismatch { .. })));
        // z^3 minus one leading-normalized copy of E lands in the window
        let f = poly(&[(3, 1.0)]);
        let red = reduce_mod(&f, &e2, (-2, 2), &t).unwrap();
        let expected = &f - &e2.scale(e2.coeff(3).inv());
        assert!(close(&red, &expected, 1e-14));
    }

    #[test]
    fn text_round_trip() {
        let f = LaurentPoly::from_terms([(-1, r(1.0)), (0, Scalar::new(0.5, 2.0)), (2, r(-1.0))]);
        let s = f.to_string();
        assert_eq!(s, "1.0*z^-1 + (0.5+2.0i)*z^0 + -1.0*z^2");
        assert_eq!(s.parse::<LaurentPoly>().unwrap(), f);
        let g: LaurentPoly = "1*z^-1 + (0.5+2i)*z^0 + 1*z^2".parse().unwrap();
        assert_eq!(g.coeff(0), Scalar::new(0.5, 2.0));
        assert!("1*z^x".parse::<LaurentPoly>().is_err());
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((-4i32..=4, -2.0f64..2.0, -2.0f64..2.0), 1..6)
            .prop_map(|t| LaurentPoly::from_terms(t.into_iter().map(|(k, a, b)| (k, Scalar::new(a, b)))))
    }

    fn arb_divisor() -> impl Strategy<Value = LaurentPoly> {
        (prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 0..3), -2i32..=2).prop_map(|(mid, lo)| {
            let mut t = vec![(lo, Scalar::new(1.0, 0.5))];
            for (j, (a, b)) in mid.iter().enumerate() {
                t.push((lo + 1 + j as i32, Scalar::new(*a, *b)));
            }
            t.push((lo + 1 + mid.len() as i32, Scalar::new(-0.75, 1.0)));
            LaurentPoly::from_terms(t)
        })
    }

    proptest! {
        #[test]
        fn divide_recovers_factor(f in arb_poly(), g in arb_divisor()) {
            prop_assume!(!f.is_zero());
            let h = divide_exact(&(&f * &g), &g, &Tolerance::default()).unwrap();
            prop_assert!(close(&h, &f, 1e-9));
        }

        #[test]
        fn difference_factors_divide(f in arb_poly(), qmag in 0.6f64..1.6, qarg in 0.0f64..std::f64::consts::TAU) {
            let t = Tolerance::default();
            let q = Scalar::from_polar(qmag, qarg);
            let d1 = &f - &f.apply_s1();
            let one_minus_z2 = poly(&[(0, 1.0), (2, -1.0)]);
            prop_assert!(divide_exact(&d1, &one_minus_z2, &t).is_ok());
            let d0 = &f - &f.apply_s0(q);
            let den0 = LaurentPoly::from_terms([(0, r(1.0)), (-2, -q)]);
            prop_assert!(divide_exact(&d0, &den0, &t).is_ok());
        }

        #[test]
        fn reduction_stays_in_ideal(f in arb_poly(), amag in 0.7f64..1.4, n in 0i32..3) {
            let t = Tolerance::default();
            let q = Scalar::from_polar(1.3, 0.4);
            let e = build_e(n, Scalar::from_polar(amag, 1.1), q);
            let window = canonical_window(&e).unwrap();
            let red = reduce_mod(&f, &e, window, &t).unwrap();
            prop_assert!(red.min_degree().is_none_or(|d| d >= window.0));
            prop_assert!(red.max_degree().is_none_or(|d| d <= window.1));
            // f - red must vanish at every root of E
            let diff = &f - &red;
            let scale = 1f64.max(f.norm_inf()).max(red.norm_inf());
            for root in e_roots(n, Scalar::from_polar(amag, 1.1), q) {
                let w = root.norm().max(root.norm().recip()).powi(8);
                prop_assert!(diff.eval(root).norm() <= 1e-8 * scale * w);
            }
        }

        #[test]
        fn e_vanishes_on_roots(n in -4i32..=4, amag in 0.6f64..1.6, aarg in 0.0f64..std::f64::consts::TAU) {
            let q = Scalar::from_polar(1.25, 0.9);
            let a = Scalar::from_polar(amag, aarg);
            let e = build_e(n, a, q);
            for root in e_roots(n, a, q) {
                let w = root.norm().max(root.norm().recip()).powi(n.abs() + 1);
                prop_assert!(e.eval(root).norm() < 1e-8 * e.norm_inf() * w);
            }
        }
    }
}
