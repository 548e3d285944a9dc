//! Coefficient fields for truncated series: exact rationals and fixed-precision
//! MPFR floats.

use std::fmt;

use rug::float::{Constant, Round};
use rug::{Float, Integer, Rational};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type ExactRational = Rational;

/// Multiple-precision binary float. Every value in one computation carries the
/// same mantissa precision.
pub type HighPrecisionFloat = Float;

/// Mantissa precision in bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Precision(pub u32);

impl Precision {
    pub const DEFAULT: Precision = Precision(256);

    pub fn bits(self) -> u32 {
        self.0
    }

    /// The same precision widened by `extra` guard bits.
    pub fn with_guard(self, extra: u32) -> Precision {
        Precision(self.0 + extra)
    }

    /// `2^(-k)` at this precision.
    pub fn pow2_neg(self, k: i32) -> Float {
        Float::with_val(self.0, Float::i_exp(1, -k))
    }

    pub fn float(self, v: impl Into<f64>) -> Float {
        Float::with_val(self.0, v.into())
    }

    pub fn from_rational(self, q: &Rational) -> Float {
        Float::with_val(self.0, q)
    }

    pub fn pi(self) -> Float {
        Float::with_val(self.0, Constant::Pi)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::DEFAULT
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} bits", self.0)
    }
}

/// A field usable as series coefficients.
///
/// The associated context carries whatever is needed to manufacture new
/// constants (the precision, for floats).
pub trait Coeff: Clone + fmt::Debug + PartialEq + Send + Sync {
    type Ctx: Copy + fmt::Debug + PartialEq + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn from_i64(v: i64, ctx: Self::Ctx) -> Self;
    fn from_rational(q: &Rational, ctx: Self::Ctx) -> Self;

    fn zero(ctx: Self::Ctx) -> Self {
        Self::from_i64(0, ctx)
    }
    fn one(ctx: Self::Ctx) -> Self {
        Self::from_i64(1, ctx)
    }

    fn is_zero(&self) -> bool;
    /// Exact for rationals; within a few ulps for floats.
    fn is_unit(&self) -> bool;

    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// Callers guarantee `other` is nonzero.
    fn div(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;

    fn mul_i64(&self, k: i64) -> Self {
        self.mul(&Self::from_i64(k, self.ctx()))
    }
    fn div_i64(&self, k: i64) -> Self {
        self.div(&Self::from_i64(k, self.ctx()))
    }

    /// Lossy rendering used in error messages.
    fn describe(&self) -> String;
}

impl Coeff for Rational {
    type Ctx = ();

    fn ctx(&self) {}
    fn from_i64(v: i64, _: ()) -> Self {
        Rational::from(v)
    }
    fn from_rational(q: &Rational, _: ()) -> Self {
        q.clone()
    }
    fn is_zero(&self) -> bool {
        self.cmp0() == std::cmp::Ordering::Equal
    }
    fn is_unit(&self) -> bool {
        *self == 1
    }
    fn add(&self, other: &Self) -> Self {
        Rational::from(self + other)
    }
    fn sub(&self, other: &Self) -> Self {
        Rational::from(self - other)
    }
    fn mul(&self, other: &Self) -> Self {
        Rational::from(self * other)
    }
    fn div(&self, other: &Self) -> Self {
        Rational::from(self / other)
    }
    fn neg(&self) -> Self {
        Rational::from(-self)
    }
    fn mul_i64(&self, k: i64) -> Self {
        Rational::from(self * k)
    }
    fn div_i64(&self, k: i64) -> Self {
        Rational::from(self / k)
    }
    fn describe(&self) -> String {
        self.to_string()
    }
}

impl Coeff for Float {
    type Ctx = u32;

    fn ctx(&self) -> u32 {
        self.prec()
    }
    fn from_i64(v: i64, prec: u32) -> Self {
        Float::with_val(prec, v)
    }
    fn from_rational(q: &Rational, prec: u32) -> Self {
        Float::with_val(prec, q)
    }
    fn is_zero(&self) -> bool {
        self.is_zero()
    }
    fn is_unit(&self) -> bool {
        let prec = self.prec();
        let dev = Float::with_val(prec, self - 1u32).abs();
        dev <= Float::with_val(prec, Float::i_exp(1, 8 - prec as i32))
    }
    fn add(&self, other: &Self) -> Self {
        Float::with_val(self.prec(), self + other)
    }
    fn sub(&self, other: &Self) -> Self {
        Float::with_val(self.prec(), self - other)
    }
    fn mul(&self, other: &Self) -> Self {
        Float::with_val(self.prec(), self * other)
    }
    fn div(&self, other: &Self) -> Self {
        Float::with_val(self.prec(), self / other)
    }
    fn neg(&self) -> Self {
        Float::with_val(self.prec(), -self)
    }
    fn mul_i64(&self, k: i64) -> Self {
        Float::with_val(self.prec(), self * k)
    }
    fn div_i64(&self, k: i64) -> Self {
        Float::with_val(self.prec(), self / k)
    }
    fn describe(&self) -> String {
        self.to_string_radix(10, Some(20))
    }
}

/// `n!` as an exact integer.
pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

/// `(2k-1)!! = (2k)!/(k! 2^k)`, with `(-1)!! = 1`.
pub fn odd_double_factorial(k: u32) -> Integer {
    if k == 0 {
        return Integer::from(1);
    }
    Integer::from(Integer::factorial_2(2 * k - 1))
}

/// `(-1)^m (2m)! / (m! 2^m)`, the Gaussian-moment factor that turns `g_{2m}`
/// into the coefficient of the `m`-th correction term.
pub fn gaussian_factor(m: u32) -> Rational {
    let v = Rational::from(odd_double_factorial(m));
    if m % 2 == 1 {
        -v
    } else {
        v
    }
}

/// Binomial coefficient `C(x, n)` for real `x` and integer `n >= 0`, at the
/// given precision.
pub fn binomial_real(x: &Float, n: u32) -> Float {
    let prec = x.prec();
    let mut acc = Float::with_val(prec, 1);
    for k in 0..n {
        let num = Float::with_val(prec, x - k);
        acc *= num;
        acc /= k + 1;
    }
    acc
}

/// Round-to-nearest decimal rendering with `digits` significant digits.
pub fn render_decimal(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix_round(10, Some(digits), Round::Nearest)
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_factorials() {
        assert_eq!(odd_double_factorial(0), 1);
        assert_eq!(odd_double_factorial(1), 1);
        assert_eq!(odd_double_factorial(2), 3);
        assert_eq!(odd_double_factorial(3), 15);
        assert_eq!(gaussian_factor(3), -15);
        assert_eq!(gaussian_factor(2), 3);
    }

    #[test]
    fn real_binomial_matches_integer_case() {
        let x = Float::with_val(128, 10);
        assert_eq!(binomial_real(&x, 3), 120);
        let half = Float::with_val(128, 0.5);
        // C(1/2, 2) = (1/2)(-1/2)/2 = -1/8
        assert_eq!(binomial_real(&half, 2), -0.125);
    }

    #[test]
    fn float_unit_tolerance() {
        let p = 128;
        let one = Float::with_val(p, 1);
        let near = Float::with_val(p, &one + Float::with_val(p, Float::i_exp(1, -125)));
        let far = Float::with_val(p, 1.001);
        assert!(one.is_unit());
        assert!(Coeff::is_unit(&near));
        assert!(!Coeff::is_unit(&far));
    }
}
