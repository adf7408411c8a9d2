//! Scalar arithmetic for the engine.
//!
//! Two interchangeable scalar types back every algebraic structure here:
//!
//! * [`ExactScalar`] — an element of the number field Q(i, √2), stored as
//!   four rationals `a + b·i + c·√2 + d·i·√2`. Every constant that appears
//!   in the explicit representation matrices and orbit spinors lives in
//!   this field, so all algebraic identities can be checked with zero
//!   residual.
//! * [`CF64`] — a thin wrapper around `Complex<f64>` with the same trait
//!   surface, used by the numerical chart pipeline.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Common interface of [`ExactScalar`] and [`CF64`].
///
/// `re_part`/`im_part` return scalars that are again elements of the field
/// (with zero imaginary component), so that reality projections compose
/// with the rest of the algebra.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    /// The imaginary unit.
    fn i() -> Self;
    /// √2 as a field element.
    fn sqrt2() -> Self;
    fn from_rational(num: i64, den: i64) -> Self;
    fn from_f64(x: f64) -> Self;
    /// Complex conjugation (negates the `i` components).
    fn conj(&self) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn is_zero(&self) -> bool;
    /// Real part as a field element.
    fn re_part(&self) -> Self;
    /// Imaginary part as a field element (real-valued: `Im(a+bi) = b`).
    fn im_part(&self) -> Self;
    /// A floating-point magnitude estimate, used for reports and pivoting.
    fn norm_f64(&self) -> f64;
    /// Approximate value as a complex double.
    fn to_complex(&self) -> Complex64;
    /// True when the scalar is exactly representable (no rounding anywhere).
    const EXACT: bool;
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Element of Q(i, √2): `a + b·i + c·√2 + d·i·√2` with rational `a,b,c,d`.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactScalar {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
    pub d: BigRational,
}

impl ExactScalar {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Self {
        ExactScalar { a, b, c, d }
    }

    pub fn from_parts(a: (i64, i64), b: (i64, i64), c: (i64, i64), d: (i64, i64)) -> Self {
        ExactScalar::new(rat(a.0, a.1), rat(b.0, b.1), rat(c.0, c.1), rat(d.0, d.1))
    }

    pub fn int(n: i64) -> Self {
        Self::from_rational(n, 1)
    }

    /// `n/d · i`.
    pub fn imag_rational(n: i64, d: i64) -> Self {
        ExactScalar::new(rat(0, 1), rat(n, d), rat(0, 1), rat(0, 1))
    }

    /// True if the element lies in Q(√2) (no `i` components).
    pub fn is_real(&self) -> bool {
        self.b.is_zero() && self.d.is_zero()
    }

    /// True if the element lies in i·Q(√2) (no real components).
    pub fn is_imaginary(&self) -> bool {
        self.a.is_zero() && self.c.is_zero()
    }

    fn rational_f64(r: &BigRational) -> f64 {
        let n = r.numer().to_string().parse::<f64>().unwrap_or(f64::NAN);
        let d = r.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
        n / d
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut term = |f: &mut fmt::Formatter<'_>, r: &BigRational, unit: &str| -> fmt::Result {
            if r.is_zero() {
                return Ok(());
            }
            let sign = if r.is_negative() { "-" } else if first { "" } else { "+" };
            let mag = r.abs();
            if !first {
                write!(f, " {} ", if sign == "-" { "-" } else { "+" })?;
            } else if sign == "-" {
                write!(f, "-")?;
            }
            first = false;
            if unit.is_empty() {
                write!(f, "{}", mag)
            } else if mag.is_one() {
                write!(f, "{}", unit)
            } else {
                write!(f, "{}*{}", mag, unit)
            }
        };
        term(f, &self.a, "")?;
        term(f, &self.b, "i")?;
        term(f, &self.c, "sqrt2")?;
        term(f, &self.d, "i*sqrt2")?;
        Ok(())
    }
}

impl Add for ExactScalar {
    type Output = ExactScalar;
    fn add(self, o: ExactScalar) -> ExactScalar {
        ExactScalar::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }
}

impl Sub for ExactScalar {
    type Output = ExactScalar;
    fn sub(self, o: ExactScalar) -> ExactScalar {
        ExactScalar::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar::new(-self.a, -self.b, -self.c, -self.d)
    }
}

impl Mul for ExactScalar {
    type Output = ExactScalar;
    fn mul(self, o: ExactScalar) -> ExactScalar {
        // (a + bi + c√2 + di√2)(a' + b'i + c'√2 + d'i√2), using i² = −1, (√2)² = 2.
        let two = rat(2, 1);
        let a = &self.a * &o.a - &self.b * &o.b + (&self.c * &o.c - &self.d * &o.d) * &two;
        let b = &self.a * &o.b + &self.b * &o.a + (&self.c * &o.d + &self.d * &o.c) * &two;
        let c = &self.a * &o.c + &self.c * &o.a - (&self.b * &o.d + &self.d * &o.b);
        let d = &self.a * &o.d + &self.d * &o.a + &self.b * &o.c + &self.c * &o.b;
        ExactScalar::new(a, b, c, d)
    }
}

impl Scalar for ExactScalar {
    const EXACT: bool = true;

    fn zero() -> Self {
        ExactScalar::from_parts((0, 1), (0, 1), (0, 1), (0, 1))
    }
    fn one() -> Self {
        ExactScalar::from_parts((1, 1), (0, 1), (0, 1), (0, 1))
    }
    fn i() -> Self {
        ExactScalar::from_parts((0, 1), (1, 1), (0, 1), (0, 1))
    }
    fn sqrt2() -> Self {
        ExactScalar::from_parts((0, 1), (0, 1), (1, 1), (0, 1))
    }
    fn from_rational(num: i64, den: i64) -> Self {
        ExactScalar::new(rat(num, den), rat(0, 1), rat(0, 1), rat(0, 1))
    }
    fn from_f64(_x: f64) -> Self {
        panic!("decimal literals have no exact representation in Q(i,sqrt2)");
    }

    fn conj(&self) -> Self {
        ExactScalar::new(self.a.clone(), -self.b.clone(), self.c.clone(), -self.d.clone())
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // z·conj(z) = (a+c√2)² + (b+d√2)² = r + s√2 with rational r, s.
        // Invert the real part in Q(√2): (r+s√2)⁻¹ = (r−s√2)/(r²−2s²).
        let z_conj = Scalar::conj(self);
        let n = self.clone() * z_conj.clone();
        debug_assert!(n.is_real());
        let (r, s) = (n.a.clone(), n.c.clone());
        let denom = &r * &r - rat(2, 1) * &s * &s;
        if denom.is_zero() {
            // Only possible for r = s = 0, i.e. z = 0, excluded above.
            return None;
        }
        let real_inv = ExactScalar::new(&r / &denom, rat(0, 1), -(&s / &denom), rat(0, 1));
        Some(z_conj * real_inv)
    }

    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    fn re_part(&self) -> Self {
        ExactScalar::new(self.a.clone(), rat(0, 1), self.c.clone(), rat(0, 1))
    }

    fn im_part(&self) -> Self {
        ExactScalar::new(self.b.clone(), rat(0, 1), self.d.clone(), rat(0, 1))
    }

    fn norm_f64(&self) -> f64 {
        self.to_complex().norm()
    }

    fn to_complex(&self) -> Complex64 {
        let s2 = std::f64::consts::SQRT_2;
        Complex64::new(
            Self::rational_f64(&self.a) + s2 * Self::rational_f64(&self.c),
            Self::rational_f64(&self.b) + s2 * Self::rational_f64(&self.d),
        )
    }
}

/// Complex double with the [`Scalar`] interface.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct CF64(pub Complex64);

impl CF64 {
    pub fn new(re: f64, im: f64) -> Self {
        CF64(Complex64::new(re, im))
    }
    pub fn re(&self) -> f64 {
        self.0.re
    }
    pub fn im(&self) -> f64 {
        self.0.im
    }
}

impl fmt::Display for CF64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+.6e}{:+.6e}i", self.0.re, self.0.im)
    }
}

impl Add for CF64 {
    type Output = CF64;
    fn add(self, o: CF64) -> CF64 {
        CF64(self.0 + o.0)
    }
}
impl Sub for CF64 {
    type Output = CF64;
    fn sub(self, o: CF64) -> CF64 {
        CF64(self.0 - o.0)
    }
}
impl Mul for CF64 {
    type Output = CF64;
    fn mul(self, o: CF64) -> CF64 {
        CF64(self.0 * o.0)
    }
}
impl Neg for CF64 {
    type Output = CF64;
    fn neg(self) -> CF64 {
        CF64(-self.0)
    }
}

impl Scalar for CF64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        CF64::new(0.0, 0.0)
    }
    fn one() -> Self {
        CF64::new(1.0, 0.0)
    }
    fn i() -> Self {
        CF64::new(0.0, 1.0)
    }
    fn sqrt2() -> Self {
        CF64::new(std::f64::consts::SQRT_2, 0.0)
    }
    fn from_rational(num: i64, den: i64) -> Self {
        CF64::new(num as f64 / den as f64, 0.0)
    }
    fn from_f64(x: f64) -> Self {
        CF64::new(x, 0.0)
    }
    fn conj(&self) -> Self {
        CF64(self.0.conj())
    }
    fn inv(&self) -> Option<Self> {
        if self.0.norm() == 0.0 {
            None
        } else {
            Some(CF64(self.0.inv()))
        }
    }
    fn is_zero(&self) -> bool {
        self.0.re == 0.0 && self.0.im == 0.0
    }
    fn re_part(&self) -> Self {
        CF64::new(self.0.re, 0.0)
    }
    fn im_part(&self) -> Self {
        CF64::new(self.0.im, 0.0)
    }
    fn norm_f64(&self) -> f64 {
        self.0.norm()
    }
    fn to_complex(&self) -> Complex64 {
        self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_squared_is_minus_one() {
        let i = ExactScalar::i();
        assert_eq!(i.clone() * i, -ExactScalar::one());
    }

    #[test]
    fn inv_sqrt2_squares_to_half() {
        let h = ExactScalar::sqrt2().inv().unwrap();
        assert_eq!(h.clone() * h, ExactScalar::from_rational(1, 2));
    }

    #[test]
    fn inv_of_one_plus_i() {
        // (1+i)⁻¹ = (1−i)/2, confirmed by multiplying back out.
        let z = ExactScalar::one() + ExactScalar::i();
        let w = z.inv().unwrap();
        assert_eq!(
            w,
            ExactScalar::from_parts((1, 2), (-1, 2), (0, 1), (0, 1))
        );
        assert_eq!(z * w, ExactScalar::one());
    }

    #[test]
    fn inv_of_zero_is_none() {
        assert!(ExactScalar::zero().inv().is_none());
    }

    #[test]
    fn conjugation_negates_i_components_only() {
        let z = ExactScalar::from_parts((1, 1), (2, 1), (3, 1), (4, 1));
        let c = Scalar::conj(&z);
        assert_eq!(c, ExactScalar::from_parts((1, 1), (-2, 1), (3, 1), (-4, 1)));
    }

    #[test]
    fn mixed_inverse_roundtrip() {
        // A generic element with all four components.
        let z = ExactScalar::from_parts((3, 2), (-1, 3), (2, 5), (7, 4));
        let w = z.inv().unwrap();
        assert_eq!(z * w, ExactScalar::one());
    }

    #[test]
    fn re_im_split() {
        let z = ExactScalar::from_parts((1, 1), (2, 1), (3, 1), (4, 1));
        let re = z.re_part();
        let im = z.im_part();
        assert_eq!(z, re.clone() + ExactScalar::i() * im.clone());
        assert!(re.is_real() && im.is_real());
    }
}
