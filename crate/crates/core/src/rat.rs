//! Exact rational arithmetic with a machine-word fast path.
//!
//! `Rat` is a reduced fraction that lives in two `i64`s as long as it fits
//! and transparently promotes to `num::BigRational` when it does not.
//! Intermediate products on the small path are computed in `i128`, so the
//! fast path never wraps; values are demoted back to the small form whenever
//! they fit. All arithmetic is exact.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

#[derive(Clone)]
pub enum Rat {
    /// Reduced fraction, denominator > 0.
    Small(i64, i64),
    /// Reduced fraction, denominator > 0, does not fit in the small form.
    Big(Box<BigRational>),
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

const fn fits(n: i128) -> bool {
    n >= i64::MIN as i128 && n <= i64::MAX as i128
}

impl Rat {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "rational with zero denominator");
        Self::from_i128(numer as i128, denom as i128)
    }

    fn from_i128(mut n: i128, mut d: i128) -> Self {
        if n == 0 {
            return Rat::Small(0, 1);
        }
        if d < 0 {
            n = -n;
            d = -d;
        }
        let g = gcd_i128(n, d);
        n /= g;
        d /= g;
        if fits(n) && fits(d) {
            Rat::Small(n as i64, d as i64)
        } else {
            Rat::Big(Box::new(BigRational::new(BigInt::from(n), BigInt::from(d))))
        }
    }

    fn from_big(b: BigRational) -> Self {
        // BigRational::new reduces and fixes the denominator sign.
        if let (Some(n), Some(d)) = (b.numer().try_into().ok(), b.denom().try_into().ok()) {
            Rat::Small(n, d)
        } else {
            Rat::Big(Box::new(b))
        }
    }

    pub fn integer(n: i64) -> Self {
        Rat::Small(n, 1)
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rat::from_big(BigRational::from_integer(n))
    }

    pub fn zero() -> Self {
        Rat::Small(0, 1)
    }

    pub fn one() -> Self {
        Rat::Small(1, 1)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Rat::Small(n, _) => *n == 0,
            Rat::Big(b) => b.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Rat::Small(n, d) => *n == 1 && *d == 1,
            Rat::Big(b) => b.is_one(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rat::Small(n, _) => *n < 0,
            Rat::Big(b) => b.is_negative(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rat::Small(_, d) => *d == 1,
            Rat::Big(b) => b.is_integer(),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rat::Small(n, d) => BigRational::new(BigInt::from(*n), BigInt::from(*d)),
            Rat::Big(b) => (**b).clone(),
        }
    }

    /// Numerator and denominator as big integers (denominator > 0).
    pub fn numer_denom(&self) -> (BigInt, BigInt) {
        match self {
            Rat::Small(n, d) => (BigInt::from(*n), BigInt::from(*d)),
            Rat::Big(b) => (b.numer().clone(), b.denom().clone()),
        }
    }

    pub fn add(&self, rhs: &Rat) -> Rat {
        match (self, rhs) {
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                let n = *a as i128 * *d as i128 + *c as i128 * *b as i128;
                let den = *b as i128 * *d as i128;
                Rat::from_i128(n, den)
            }
            _ => Rat::from_big(self.to_big() + rhs.to_big()),
        }
    }

    pub fn sub(&self, rhs: &Rat) -> Rat {
        match (self, rhs) {
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                let n = *a as i128 * *d as i128 - *c as i128 * *b as i128;
                let den = *b as i128 * *d as i128;
                Rat::from_i128(n, den)
            }
            _ => Rat::from_big(self.to_big() - rhs.to_big()),
        }
    }

    pub fn mul(&self, rhs: &Rat) -> Rat {
        match (self, rhs) {
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                Rat::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Rat::from_big(self.to_big() * rhs.to_big()),
        }
    }

    pub fn div(&self, rhs: &Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero rational");
        match (self, rhs) {
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                Rat::from_i128(*a as i128 * *d as i128, *b as i128 * *c as i128)
            }
            _ => Rat::from_big(self.to_big() / rhs.to_big()),
        }
    }

    pub fn neg(&self) -> Rat {
        match self {
            Rat::Small(n, d) => Rat::Small(-n, *d),
            Rat::Big(b) => Rat::from_big(-(**b).clone()),
        }
    }

    pub fn recip(&self) -> Option<Rat> {
        if self.is_zero() {
            return None;
        }
        Some(Rat::one().div(self))
    }

    pub fn abs(&self) -> Rat {
        if self.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn pow(&self, exp: i64) -> Rat {
        if exp == 0 {
            return Rat::one();
        }
        let base = if exp < 0 {
            self.recip().expect("zero rational raised to a negative power")
        } else {
            self.clone()
        };
        let mut e = exp.unsigned_abs();
        let mut acc = Rat::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Rat::Small(n, d) => *n as f64 / *d as f64,
            Rat::Big(b) => {
                // Good enough for reporting; exact paths never round-trip
                // through floats.
                let n = b.numer().to_string().parse::<f64>().unwrap_or(f64::NAN);
                let d = b.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
                n / d
            }
        }
    }

    /// Exact square root, when the value is a square of a rational.
    pub fn sqrt_exact(&self) -> Option<Rat> {
        if self.is_negative() {
            return None;
        }
        let (n, d) = self.numer_denom();
        let sn = n.sqrt();
        let sd = d.sqrt();
        if &sn * &sn == n && &sd * &sd == d {
            Some(Rat::from_big(BigRational::new(sn, sd)))
        } else {
            None
        }
    }

    /// Fractional part in `[0, 1)`.
    pub fn rem_one(&self) -> Rat {
        let (n, d) = self.numer_denom();
        let r = ((n % &d) + &d) % &d;
        Rat::from_big(BigRational::new(r, d))
    }
}

impl PartialEq for Rat {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            // Both sides are reduced canonical forms, and any big value that
            // fits small is demoted on construction, so representations are
            // unique per value.
            (Rat::Small(a, b), Rat::Small(c, d)) => a == c && b == d,
            (Rat::Big(a), Rat::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Rat {}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl std::hash::Hash for Rat {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        let (n, d) = self.numer_denom();
        n.hash(state);
        d.hash(state);
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rat::Small(n, 1) => write!(f, "{n}"),
            Rat::Small(n, d) => write!(f, "{n}/{d}"),
            Rat::Big(b) => {
                if b.is_integer() {
                    write!(f, "{}", b.numer())
                } else {
                    write!(f, "{}/{}", b.numer(), b.denom())
                }
            }
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = String;

    /// Parses `"p"` or `"p/q"` with arbitrary-precision digits.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n = BigInt::from_str(num).map_err(|e| format!("bad numerator {num:?}: {e}"))?;
        let d = BigInt::from_str(den).map_err(|e| format!("bad denominator {den:?}: {e}"))?;
        if d.is_zero() {
            return Err("zero denominator".into());
        }
        Ok(Rat::from_big(BigRational::new(n, d)))
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::integer(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_small() {
        let a = Rat::new(1, 2);
        let b = Rat::new(1, 3);
        assert_eq!(a.add(&b), Rat::new(5, 6));
        assert_eq!(a.sub(&b), Rat::new(1, 6));
        assert_eq!(a.mul(&b), Rat::new(1, 6));
        assert_eq!(a.div(&b), Rat::new(3, 2));
        assert_eq!(a.neg(), Rat::new(-1, 2));
    }

    #[test]
    fn reduction_and_sign() {
        assert_eq!(Rat::new(2, -4), Rat::new(-1, 2));
        assert_eq!(Rat::new(-6, -9), Rat::new(2, 3));
        assert_eq!(Rat::new(0, 7), Rat::zero());
    }

    #[test]
    fn promotion_round_trip() {
        // (2^62)/1 * 4 overflows i64 and must promote; dividing back demotes.
        let big = Rat::integer(1 << 62).mul(&Rat::integer(4));
        assert!(matches!(big, Rat::Big(_)));
        let back = big.div(&Rat::integer(4));
        assert!(matches!(back, Rat::Small(_, _)));
        assert_eq!(back, Rat::integer(1 << 62));
    }

    #[test]
    fn parse_display() {
        let r: Rat = "-3/9".parse().unwrap();
        assert_eq!(r, Rat::new(-1, 3));
        assert_eq!(r.to_string(), "-1/3");
        assert_eq!("7".parse::<Rat>().unwrap(), Rat::integer(7));
        assert!("1/0".parse::<Rat>().is_err());
    }

    #[test]
    fn pow_and_rem_one() {
        assert_eq!(Rat::new(2, 3).pow(3), Rat::new(8, 27));
        assert_eq!(Rat::new(2, 3).pow(-2), Rat::new(9, 4));
        assert_eq!(Rat::new(7, 3).rem_one(), Rat::new(1, 3));
        assert_eq!(Rat::new(-1, 3).rem_one(), Rat::new(2, 3));
    }

    #[test]
    fn sqrt() {
        assert_eq!(Rat::new(4, 9).sqrt_exact(), Some(Rat::new(2, 3)));
        assert_eq!(Rat::new(2, 1).sqrt_exact(), None);
        assert_eq!(Rat::new(-4, 9).sqrt_exact(), None);
    }
}
