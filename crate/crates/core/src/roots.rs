//! Strict roots of the affine root system `D4^(1)`.
//!
//! Vectors are labelled `(a0, a1, a2, a3, a4)` with `a0` on the central node
//! and the legs ordered `e0, e1, f0, f1`. The imaginary root is
//! `Delta = (2, 1, 1, 1, 1)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn is_plus(self) -> bool {
        self == Sign::Plus
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// `(1 - sign) / 2`.
    pub fn defect(self) -> u32 {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn from_symbol(c: char) -> Option<Sign> {
        match c {
            '+' => Some(Sign::Plus),
            '-' => Some(Sign::Minus),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RootVector(pub [u32; 5]);

impl RootVector {
    pub const C: RootVector = RootVector([1, 0, 0, 0, 0]);
    pub const E0: RootVector = RootVector([0, 1, 0, 0, 0]);
    pub const E1: RootVector = RootVector([0, 0, 1, 0, 0]);
    pub const F0: RootVector = RootVector([0, 0, 0, 1, 0]);
    pub const F1: RootVector = RootVector([0, 0, 0, 0, 1]);
    pub const DELTA: RootVector = RootVector([2, 1, 1, 1, 1]);

    pub fn central(&self) -> u32 {
        self.0[0]
    }

    /// Leg labels `(a1, a2, a3, a4)`.
    pub fn legs(&self) -> [u32; 4] {
        [self.0[1], self.0[2], self.0[3], self.0[4]]
    }
}

impl fmt::Display for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a0, a1, a2, a3, a4] = self.0;
        write!(f, "({a0},{a1},{a2},{a3},{a4})")
    }
}

impl FromStr for RootVector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad root vector {s:?}"));
        let inner = s.trim().strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(bad)?;
        let parts: Vec<u32> =
            inner.split(',').map(|p| p.trim().parse::<u32>()).collect::<std::result::Result<_, _>>().map_err(|_| bad())?;
        let arr: [u32; 5] = parts.try_into().map_err(|_| bad())?;
        Ok(RootVector(arr))
    }
}

/// The strict-root families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RootKind {
    /// `c + n Delta + sum (1 - eps_i)/2 e_i + sum (1 - del_i)/2 f_i`, `n >= 0`.
    Type2 { eps: [Sign; 2], del: [Sign; 2], n: u32 },
    /// `n Delta + eps e_i`, `n >= 1`.
    Type1E { i: u8, eps: Sign, n: u32 },
    /// `n Delta + del f_i`, `n >= 1`.
    Type1F { i: u8, del: Sign, n: u32 },
    /// `n Delta`, `n >= 1`.
    Imaginary { n: u32 },
}

impl RootKind {
    pub fn n(&self) -> u32 {
        match *self {
            RootKind::Type2 { n, .. }
            | RootKind::Type1E { n, .. }
            | RootKind::Type1F { n, .. }
            | RootKind::Imaginary { n } => n,
        }
    }

    pub fn is_real(&self) -> bool {
        !matches!(self, RootKind::Imaginary { .. })
    }

    fn tag_rank(&self) -> u8 {
        match self {
            RootKind::Type2 { .. } => 0,
            RootKind::Type1E { .. } => 1,
            RootKind::Type1F { .. } => 2,
            RootKind::Imaginary { .. } => 3,
        }
    }
}

fn check_index(i: u8) -> Result<()> {
    if i > 1 {
        return Err(Error::InvalidKind(format!("leg index {i} not in {{0, 1}}")));
    }
    Ok(())
}

pub fn root_of_kind(k: RootKind) -> Result<RootVector> {
    let n = k.n();
    let delta = RootVector::DELTA.0.map(|x| (x * n) as i64);
    let mut v = delta;
    match k {
        RootKind::Type2 { eps, del, .. } => {
            v[0] += 1;
            v[1] += eps[0].defect() as i64;
            v[2] += eps[1].defect() as i64;
            v[3] += del[0].defect() as i64;
            v[4] += del[1].defect() as i64;
        }
        RootKind::Type1E { i, eps, .. } => {
            check_index(i)?;
            v[1 + i as usize] += eps.value() as i64;
        }
        RootKind::Type1F { i, del, .. } => {
            check_index(i)?;
            v[3 + i as usize] += del.value() as i64;
        }
        RootKind::Imaginary { .. } => {}
    }
    let needs_positive_n = !matches!(k, RootKind::Type2 { .. });
    if v.iter().any(|&x| x < 0) || (needs_positive_n && n == 0) {
        return Err(Error::NonPositiveEntry(k.to_string()));
    }
    Ok(RootVector(v.map(|x| x as u32)))
}

/// The strict-root family containing `v`, if any.
pub fn classify_root(v: RootVector) -> Option<RootKind> {
    let a0 = v.central();
    let legs = v.legs();
    let candidate = if a0 % 2 == 1 {
        let n = (a0 - 1) / 2;
        let sign = |x: u32| match x.checked_sub(n)? {
            0 => Some(Sign::Plus),
            1 => Some(Sign::Minus),
            _ => None,
        };
        RootKind::Type2 {
            eps: [sign(legs[0])?, sign(legs[1])?],
            del: [sign(legs[2])?, sign(legs[3])?],
            n,
        }
    } else {
        let n = a0 / 2;
        if n == 0 {
            return None;
        }
        let off: Vec<(usize, i64)> =
            legs.iter().enumerate().map(|(j, &x)| (j, x as i64 - n as i64)).filter(|&(_, d)| d != 0).collect();
        match off.as_slice() {
            [] => RootKind::Imaginary { n },
            [(j, d)] if d.abs() == 1 => {
                let s = if *d > 0 { Sign::Plus } else { Sign::Minus };
                match j {
                    0 | 1 => RootKind::Type1E { i: *j as u8, eps: s, n },
                    _ => RootKind::Type1F { i: (*j - 2) as u8, del: s, n },
                }
            }
            _ => return None,
        }
    };
    (root_of_kind(candidate).ok()? == v).then_some(candidate)
}

/// Tits quadratic form of the four-leg star graph.
pub fn tits_form(v: RootVector) -> i64 {
    let a: Vec<i64> = v.0.iter().map(|&x| x as i64).collect();
    let squares: i64 = a.iter().map(|x| x * x).sum();
    squares - a[0] * (a[1] + a[2] + a[3] + a[4])
}

fn kinds_at(n: u32) -> Vec<RootKind> {
    let mut out = Vec::new();
    for e0 in Sign::BOTH {
        for e1 in Sign::BOTH {
            for d0 in Sign::BOTH {
                for d1 in Sign::BOTH {
                    out.push(RootKind::Type2 { eps: [e0, e1], del: [d0, d1], n });
                }
            }
        }
    }
    if n >= 1 {
        for i in 0..2 {
            for eps in Sign::BOTH {
                out.push(RootKind::Type1E { i, eps, n });
            }
        }
        for i in 0..2 {
            for del in Sign::BOTH {
                out.push(RootKind::Type1F { i, del, n });
            }
        }
        out.push(RootKind::Imaginary { n });
    }
    debug_assert!(out.windows(2).all(|w| w[0].tag_rank() <= w[1].tag_rank()));
    out
}

/// All strict roots with `n <= n_max`, ordered by `n`, family, then signs.
pub fn enumerate_strict_roots(n_max: u32) -> Vec<(RootKind, RootVector)> {
    (0..=n_max)
        .flat_map(kinds_at)
        .map(|k| (k, root_of_kind(k).expect("enumerated kinds are valid")))
        .collect()
}

impl fmt::Display for RootKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            RootKind::Type2 { eps, del, n } => write!(
                f,
                "T2[{}{},{}{};n={n}]",
                eps[0].symbol(),
                eps[1].symbol(),
                del[0].symbol(),
                del[1].symbol()
            ),
            RootKind::Type1E { i, eps, n } => write!(f, "T1E[i={i},{};n={n}]", eps.symbol()),
            RootKind::Type1F { i, del, n } => write!(f, "T1F[i={i},{};n={n}]", del.symbol()),
            RootKind::Imaginary { n } => write!(f, "IM[n={n}]"),
        }
    }
}

impl FromStr for RootKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad root kind {s:?}"));
        let s = s.trim();
        let open = s.find('[').ok_or_else(bad)?;
        let tag = &s[..open];
        let body = s[open + 1..].strip_suffix(']').ok_or_else(bad)?;
        let (fields, n) = match body.rsplit_once(';') {
            Some((fields, n)) => (fields, n),
            None => ("", body),
        };
        let n: u32 = n.strip_prefix("n=").ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let sign = |t: &str| -> Result<Sign> {
            let mut it = t.chars();
            match (it.next().and_then(Sign::from_symbol), it.next()) {
                (Some(s), None) => Ok(s),
                _ => Err(bad()),
            }
        };
        let pair = |t: &str| -> Result<[Sign; 2]> {
            let c: Vec<char> = t.chars().collect();
            match c.as_slice() {
                [a, b] => Ok([Sign::from_symbol(*a).ok_or_else(bad)?, Sign::from_symbol(*b).ok_or_else(bad)?]),
                _ => Err(bad()),
            }
        };
        let kind = match tag {
            "T2" => {
                let (e, d) = fields.split_once(',').ok_or_else(bad)?;
                RootKind::Type2 { eps: pair(e)?, del: pair(d)?, n }
            }
            "T1E" | "T1F" => {
                let (i, sg) = fields.split_once(',').ok_or_else(bad)?;
                let i: u8 = i.strip_prefix("i=").ok_or_else(bad)?.parse().map_err(|_| bad())?;
                check_index(i)?;
                if tag == "T1E" {
                    RootKind::Type1E { i, eps: sign(sg)?, n }
                } else {
                    RootKind::Type1F { i, del: sign(sg)?, n }
                }
            }
            "IM" if fields.is_empty() => RootKind::Imaginary { n },
            _ => return Err(bad()),
        };
        Ok(kind)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Sign::{Minus as M, Plus as P};

    #[test]
    fn kind_vectors() {
        let t2 = |n| RootKind::Type2 { eps: [P, P], del: [P, P], n };
        assert_eq!(root_of_kind(t2(0)).unwrap(), RootVector([1, 0, 0, 0, 0]));
        assert_eq!(root_of_kind(RootKind::Type1E { i: 0, eps: P, n: 1 }).unwrap(), RootVector([2, 2, 1, 1, 1]));
        let all_minus = RootKind::Type2 { eps: [M, M], del: [M, M], n: 0 };
        assert_eq!(root_of_kind(all_minus).unwrap(), RootVector([1, 1, 1, 1, 1]));
        assert!(matches!(
            root_of_kind(RootKind::Type1E { i: 0, eps: M, n: 0 }),
            Err(Error::NonPositiveEntry(_))
        ));
        assert!(root_of_kind(RootKind::Imaginary { n: 0 }).is_err());
        assert!(root_of_kind(RootKind::Type1F { i: 2, del: P, n: 1 }).is_err());
    }

    #[test]
    fn classification() {
        assert_eq!(classify_root(RootVector([3, 1, 1, 1, 1])), Some(RootKind::Type2 { eps: [P, P], del: [P, P], n: 1 }));
        assert_eq!(classify_root(RootVector([2, 1, 1, 1, 1])), Some(RootKind::Imaginary { n: 1 }));
        assert_eq!(classify_root(RootVector([1, 2, 0, 0, 0])), None);
        assert_eq!(classify_root(RootVector([4, 2, 2, 1, 2])), Some(RootKind::Type1F { i: 0, del: M, n: 2 }));
        assert_eq!(classify_root(RootVector([0, 0, 0, 0, 0])), None);
        assert_eq!(classify_root(RootVector([4, 3, 3, 2, 2])), None);
    }

    #[test]
    fn tits_values() {
        assert_eq!(tits_form(RootVector::C), 1);
        assert_eq!(tits_form(RootVector::DELTA), 0);
        assert_eq!(tits_form(RootVector([2, 2, 1, 1, 1])), 1);
    }

    #[test]
    fn enumeration_counts() {
        let zero = enumerate_strict_roots(0);
        assert_eq!(zero.len(), 16);
        assert!(zero.iter().all(|(k, _)| matches!(k, RootKind::Type2 { n: 0, .. })));
        let one = enumerate_strict_roots(1);
        assert_eq!(one.len(), 41);
        for (k, v) in &one {
            assert_eq!(tits_form(*v), if k.is_real() { 1 } else { 0 }, "{k}");
        }
        assert_eq!(one[16].0, RootKind::Type2 { eps: [P, P], del: [P, P], n: 1 });
        assert_eq!(one.last().unwrap().0, RootKind::Imaginary { n: 1 });
    }

    #[test]
    fn all_kinds_round_trip() {
        for n in 0..=20 {
            for k in kinds_at(n) {
                let v = root_of_kind(k).unwrap();
                assert_eq!(classify_root(v), Some(k));
                assert_eq!(tits_form(v), if k.is_real() { 1 } else { 0 });
                assert_eq!(k.to_string().parse::<RootKind>().unwrap(), k);
                assert_eq!(v.to_string().parse::<RootVector>().unwrap(), v);
            }
        }
        assert_eq!(enumerate_strict_roots(20).len(), 16 * 21 + 9 * 20);
    }

    #[test]
    fn kind_strings() {
        let k: RootKind = "T2[++,-+;n=3]".parse().unwrap();
        assert_eq!(k, RootKind::Type2 { eps: [P, P], del: [M, P], n: 3 });
        assert_eq!("T1E[i=0,+;n=2]".parse::<RootKind>().unwrap(), RootKind::Type1E { i: 0, eps: P, n: 2 });
        assert_eq!("T1F[i=1,-;n=1]".parse::<RootKind>().unwrap(), RootKind::Type1F { i: 1, del: M, n: 1 });
        assert_eq!("IM[n=2]".parse::<RootKind>().unwrap(), RootKind::Imaginary { n: 2 });
        assert!("T1E[i=2,+;n=2]".parse::<RootKind>().is_err());
        assert!("T2[+,-+;n=3]".parse::<RootKind>().is_err());
    }
}
