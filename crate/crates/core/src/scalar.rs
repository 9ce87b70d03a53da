//! Coefficient backends for the series ring.
//!
//! Three backends implement the [`Scalar`] interface:
//!
//! * [`GaussRat`] — Gaussian rationals `a + bi` with exact arithmetic;
//! * [`Cyclo`] — the cyclotomic field of the twelfth roots of unity, which
//!   contains the Gaussian rationals together with the primitive third and
//!   sixth roots of unity needed to build finite-order germs exactly;
//! * [`C64`] — complex `f64` with a process-wide comparison tolerance.
//!
//! Exact backends compare coefficients exactly; the float backend treats
//! `|a - b| <= eps` as equality, with `eps` configurable via
//! [`set_float_tolerance`] (default `1e-10`).

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;

use crate::rat::Rat;

static FLOAT_EPS_BITS: AtomicU64 = AtomicU64::new(0);

/// Comparison tolerance of the float backend.
pub fn float_tolerance() -> f64 {
    let bits = FLOAT_EPS_BITS.load(Ordering::Relaxed);
    if bits == 0 {
        1e-10
    } else {
        f64::from_bits(bits)
    }
}

/// Overrides the float backend's comparison tolerance for this process.
pub fn set_float_tolerance(eps: f64) {
    assert!(eps > 0.0, "tolerance must be positive");
    FLOAT_EPS_BITS.store(eps.to_bits(), Ordering::Relaxed);
}

/// Field operations the series ring needs from its coefficients.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// Whether comparisons on this backend are exact.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_integer(n: i64) -> Self;
    fn from_rat(r: &Rat) -> Self;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; `None` for (backend-)zero values.
    fn inv(&self) -> Option<Self>;

    /// Backend equality to zero: exact for the exact backends, within the
    /// global tolerance for the float backend.
    fn is_zero(&self) -> bool;
    /// Structural zero, used to keep stored coefficient maps free of zeros
    /// without ever eps-dropping float residuals.
    fn is_storage_zero(&self) -> bool {
        self.is_zero()
    }

    fn to_c64(&self) -> Complex64;

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.mul(&r))
    }

    fn mul_integer(&self, n: i64) -> Self {
        self.mul(&Self::from_integer(n))
    }

    /// Magnitude used when reporting residual sizes.
    fn abs(&self) -> f64 {
        self.to_c64().norm()
    }
}

// ---------------------------------------------------------------------------
// Gaussian rationals
// ---------------------------------------------------------------------------

/// Exact Gaussian rational `re + im·i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussRat {
    pub re: Rat,
    pub im: Rat,
}

impl GaussRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        GaussRat { re, im }
    }

    pub fn real(re: Rat) -> Self {
        GaussRat { re, im: Rat::zero() }
    }

    pub fn i() -> Self {
        GaussRat { re: Rat::zero(), im: Rat::one() }
    }

    pub fn conj(&self) -> Self {
        GaussRat { re: self.re.clone(), im: self.im.neg() }
    }

    /// Squared modulus `re² + im²`, an exact rational.
    pub fn norm_sqr(&self) -> Rat {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Exact square root inside the Gaussian rationals, when one exists:
    /// for `w = c + di` with `w² = z`, `|z|` must be a rational square and
    /// `(Re z + |z|)/2` a square again.
    pub fn sqrt_exact(&self) -> Option<GaussRat> {
        if self.im.is_zero() {
            return if self.re.is_negative() {
                self.re.neg().sqrt_exact().map(|s| GaussRat::new(Rat::zero(), s))
            } else {
                self.re.sqrt_exact().map(GaussRat::real)
            };
        }
        let t = self.norm_sqr().sqrt_exact()?;
        let c = self.re.add(&t).div(&Rat::integer(2)).sqrt_exact()?;
        if c.is_zero() {
            return None;
        }
        let d = self.im.div(&c.mul(&Rat::integer(2)));
        let w = GaussRat::new(c, d);
        if w.mul(&w) == *self {
            Some(w)
        } else {
            None
        }
    }
}

impl Scalar for GaussRat {
    const EXACT: bool = true;

    fn zero() -> Self {
        GaussRat::real(Rat::zero())
    }

    fn one() -> Self {
        GaussRat::real(Rat::one())
    }

    fn from_integer(n: i64) -> Self {
        GaussRat::real(Rat::integer(n))
    }

    fn from_rat(r: &Rat) -> Self {
        GaussRat::real(r.clone())
    }

    fn add(&self, rhs: &Self) -> Self {
        GaussRat { re: self.re.add(&rhs.re), im: self.im.add(&rhs.im) }
    }

    fn sub(&self, rhs: &Self) -> Self {
        GaussRat { re: self.re.sub(&rhs.re), im: self.im.sub(&rhs.im) }
    }

    fn mul(&self, rhs: &Self) -> Self {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussRat::real(self.re.mul(&rhs.re));
        }
        GaussRat {
            re: self.re.mul(&rhs.re).sub(&self.im.mul(&rhs.im)),
            im: self.re.mul(&rhs.im).add(&self.im.mul(&rhs.re)),
        }
    }

    fn neg(&self) -> Self {
        GaussRat { re: self.re.neg(), im: self.im.neg() }
    }

    fn inv(&self) -> Option<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return None;
        }
        Some(GaussRat {
            re: self.re.div(&n),
            im: self.im.neg().div(&n),
        })
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}{}i", self.re, self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// ---------------------------------------------------------------------------
// Cyclotomic field Q(zeta_12)
// ---------------------------------------------------------------------------

/// Element of `Q(z)` with `z` a primitive twelfth root of unity, stored on
/// the power basis `1, z, z², z³` modulo `z⁴ = z² - 1`.
///
/// Contains `i = z³`, `ζ₆ = z²` and `ζ₃ = z² - 1`, so diagonal germs of
/// orders 2, 3, 4 and 6 have exact coefficients here.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclo {
    pub coeffs: [Rat; 4],
}

impl Cyclo {
    pub fn from_coeffs(coeffs: [Rat; 4]) -> Self {
        Cyclo { coeffs }
    }

    /// The generator `z = e^{iπ/6}`.
    pub fn zeta12() -> Self {
        let mut c = Self::zero();
        c.coeffs[1] = Rat::one();
        c
    }

    /// Primitive k-th root of unity for k dividing 12.
    pub fn root_of_unity(k: u32) -> Option<Self> {
        if k == 0 || 12 % k != 0 {
            return None;
        }
        Some(Self::zeta12().pow_u32(12 / k))
    }

    pub fn from_gauss(g: &GaussRat) -> Self {
        // i = z³.
        let mut c = Self::zero();
        c.coeffs[0] = g.re.clone();
        c.coeffs[3] = g.im.clone();
        c
    }

    /// Recovers `a + bi` when the element lies in the Gaussian subfield.
    pub fn to_gauss(&self) -> Option<GaussRat> {
        if self.coeffs[1].is_zero() && self.coeffs[2].is_zero() {
            Some(GaussRat::new(self.coeffs[0].clone(), self.coeffs[3].clone()))
        } else {
            None
        }
    }

    pub fn pow_u32(&self, mut e: u32) -> Self {
        let mut acc = Self::one();
        let mut sq = self.clone();
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
}

impl Scalar for Cyclo {
    const EXACT: bool = true;

    fn zero() -> Self {
        Cyclo { coeffs: [Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero()] }
    }

    fn one() -> Self {
        let mut c = Self::zero();
        c.coeffs[0] = Rat::one();
        c
    }

    fn from_integer(n: i64) -> Self {
        let mut c = Self::zero();
        c.coeffs[0] = Rat::integer(n);
        c
    }

    fn from_rat(r: &Rat) -> Self {
        let mut c = Self::zero();
        c.coeffs[0] = r.clone();
        c
    }

    fn add(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for k in 0..4 {
            out.coeffs[k] = self.coeffs[k].add(&rhs.coeffs[k]);
        }
        out
    }

    fn sub(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for k in 0..4 {
            out.coeffs[k] = self.coeffs[k].sub(&rhs.coeffs[k]);
        }
        out
    }

    fn mul(&self, rhs: &Self) -> Self {
        // Convolution up to degree 6, then reduce with
        // z⁴ = z² - 1,  z⁵ = z³ - z,  z⁶ = -1.
        let mut raw = [
            Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero(),
            Rat::zero(), Rat::zero(), Rat::zero(),
        ];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                raw[i + j] = raw[i + j].add(&a.mul(b));
            }
        }
        let mut out = [
            raw[0].clone(), raw[1].clone(), raw[2].clone(), raw[3].clone(),
        ];
        out[2] = out[2].add(&raw[4]);
        out[0] = out[0].sub(&raw[4]);
        out[3] = out[3].add(&raw[5]);
        out[1] = out[1].sub(&raw[5]);
        out[0] = out[0].sub(&raw[6]);
        Cyclo { coeffs: out }
    }

    fn neg(&self) -> Self {
        let mut out = Self::zero();
        for k in 0..4 {
            out.coeffs[k] = self.coeffs[k].neg();
        }
        out
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // Solve  self · x = 1  as a 4x4 rational linear system over the
        // power basis: column j of the matrix is self · z^j.
        let mut cols: Vec<[Rat; 4]> = Vec::with_capacity(4);
        let mut power = Self::one();
        for _ in 0..4 {
            let prod = self.mul(&power);
            cols.push(prod.coeffs.clone());
            power = power.mul(&Self::zeta12());
        }
        // Dense elimination on the 4x5 augmented system.
        let mut a = vec![vec![Rat::zero(); 5]; 4];
        for r in 0..4 {
            for c in 0..4 {
                a[r][c] = cols[c][r].clone();
            }
        }
        a[0][4] = Rat::one();
        for col in 0..4 {
            let pivot = (col..4).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, pivot);
            let p = a[col][col].clone();
            for c in col..5 {
                a[col][c] = a[col][c].div(&p);
            }
            for r in 0..4 {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for c in col..5 {
                        a[r][c] = a[r][c].sub(&f.mul(&a[col][c]));
                    }
                }
            }
        }
        Some(Cyclo {
            coeffs: [
                a[0][4].clone(), a[1][4].clone(), a[2][4].clone(), a[3][4].clone(),
            ],
        })
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn to_c64(&self) -> Complex64 {
        let z = Complex64::from_polar(1.0, std::f64::consts::PI / 6.0);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut p = Complex64::new(1.0, 0.0);
        for c in &self.coeffs {
            acc += p * c.to_f64();
            p *= z;
        }
        acc
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(g) = self.to_gauss() {
            return write!(f, "{g}");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if k == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "({c})·ζ12^{k}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// ---------------------------------------------------------------------------
// Complex float backend
// ---------------------------------------------------------------------------

/// Complex `f64` coefficient; comparisons use the global tolerance.
#[derive(Clone, Copy, PartialEq)]
pub struct C64(pub Complex64);

impl C64 {
    pub fn new(re: f64, im: f64) -> Self {
        C64(Complex64::new(re, im))
    }
}

impl Scalar for C64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }

    fn one() -> Self {
        C64::new(1.0, 0.0)
    }

    fn from_integer(n: i64) -> Self {
        C64::new(n as f64, 0.0)
    }

    fn from_rat(r: &Rat) -> Self {
        C64::new(r.to_f64(), 0.0)
    }

    fn add(&self, rhs: &Self) -> Self {
        C64(self.0 + rhs.0)
    }

    fn sub(&self, rhs: &Self) -> Self {
        C64(self.0 - rhs.0)
    }

    fn mul(&self, rhs: &Self) -> Self {
        C64(self.0 * rhs.0)
    }

    fn neg(&self) -> Self {
        C64(-self.0)
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(C64(self.0.finv()))
        }
    }

    fn is_zero(&self) -> bool {
        self.0.norm() <= float_tolerance()
    }

    fn is_storage_zero(&self) -> bool {
        self.0.re == 0.0 && self.0.im == 0.0
    }

    fn to_c64(&self) -> Complex64 {
        self.0
    }
}

impl fmt::Display for C64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for C64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_field_ops() {
        let z = GaussRat::new(Rat::new(1, 2), Rat::new(-1, 3));
        let w = z.inv().unwrap();
        assert_eq!(z.mul(&w), GaussRat::one());
        assert_eq!(GaussRat::i().mul(&GaussRat::i()), GaussRat::from_integer(-1));
    }

    #[test]
    fn cyclo_roots_of_unity() {
        for k in [1u32, 2, 3, 4, 6, 12] {
            let z = Cyclo::root_of_unity(k).unwrap();
            assert_eq!(z.pow_u32(k), Cyclo::one(), "order {k}");
            for j in 1..k {
                assert_ne!(z.pow_u32(j), Cyclo::one(), "premature power {j} of order {k}");
            }
        }
        assert!(Cyclo::root_of_unity(5).is_none());
    }

    #[test]
    fn cyclo_inverse() {
        let x = Cyclo::from_coeffs([
            Rat::new(1, 2), Rat::new(-2, 3), Rat::zero(), Rat::new(5, 1),
        ]);
        let y = x.inv().unwrap();
        assert_eq!(x.mul(&y), Cyclo::one());
    }

    #[test]
    fn cyclo_gauss_embedding() {
        let g = GaussRat::new(Rat::new(3, 4), Rat::new(-2, 7));
        let c = Cyclo::from_gauss(&g);
        assert_eq!(c.to_gauss().unwrap(), g);
        let i = Cyclo::root_of_unity(4).unwrap();
        assert_eq!(i.to_gauss().unwrap(), GaussRat::i());
    }

    #[test]
    fn float_eps_semantics() {
        let tiny = C64::new(1e-12, 0.0);
        assert!(tiny.is_zero());
        assert!(!tiny.is_storage_zero());
    }
}
