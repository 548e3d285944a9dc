//! Dense truncated power series.
//!
//! A [`Series`] of order `N` stores the coefficients of `x^0 .. x^(N-1)` and is
//! known only modulo `x^N`. Binary operations truncate to the order of the
//! least precise operand, so nothing at or beyond that order is ever claimed.

use rug::{Float, Rational};
use thiserror::Error;

use crate::scalar::Coeff;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("division by a series that vanishes to its full order")]
    DivisionByZeroSeries,
    #[error("numerator vanishes to order {numerator}, below the denominator's order {denominator}")]
    LeadingOrderMismatch { numerator: usize, denominator: usize },
    #[error("bad constant term {found}; expected {expected}")]
    BadConstantTerm { expected: &'static str, found: String },
    #[error("series reversion needs a nonzero linear coefficient")]
    ZeroLinearTerm,
    #[error("coefficient x^{index} requested from a series of order {order}")]
    OrderExceeded { index: usize, order: usize },
}

pub type Result<T> = std::result::Result<T, SeriesError>;

#[derive(Clone, Debug, PartialEq)]
pub struct Series<C: Coeff> {
    coeffs: Vec<C>,
    ctx: C::Ctx,
}

pub type ExactSeries = Series<Rational>;
pub type FloatSeries = Series<Float>;

impl<C: Coeff> Series<C> {
    pub fn new(coeffs: Vec<C>, ctx: C::Ctx) -> Self {
        Series { coeffs, ctx }
    }

    pub fn zero(order: usize, ctx: C::Ctx) -> Self {
        Series::new(vec![C::zero(ctx); order], ctx)
    }

    pub fn one(order: usize, ctx: C::Ctx) -> Self {
        let mut s = Self::zero(order, ctx);
        if order > 0 {
            s.coeffs[0] = C::one(ctx);
        }
        s
    }

    /// The series `x`.
    pub fn variable(order: usize, ctx: C::Ctx) -> Self {
        let mut s = Self::zero(order, ctx);
        if order > 1 {
            s.coeffs[1] = C::one(ctx);
        }
        s
    }

    /// Series whose `k`-th coefficient is `f(k)`, for `k < order`.
    pub fn from_fn(order: usize, ctx: C::Ctx, f: impl FnMut(usize) -> C) -> Self {
        Series::new((0..order).map(f).collect(), ctx)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn ctx(&self) -> C::Ctx {
        self.ctx
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    /// `[x^k]` of the series.
    pub fn coefficient(&self, k: usize) -> Result<&C> {
        self.coeffs.get(k).ok_or(SeriesError::OrderExceeded {
            index: k,
            order: self.order(),
        })
    }

    pub fn set_coefficient(&mut self, k: usize, value: C) {
        self.coeffs[k] = value;
    }

    /// Index of the first nonzero coefficient, or `None` if every known
    /// coefficient is zero.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        Series::new(self.coeffs[..order].to_vec(), self.ctx)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Series::from_fn(n, self.ctx, |k| self.coeffs[k].add(&other.coeffs[k]))
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Series::from_fn(n, self.ctx, |k| self.coeffs[k].sub(&other.coeffs[k]))
    }

    pub fn neg(&self) -> Self {
        Series::new(self.coeffs.iter().map(C::neg).collect(), self.ctx)
    }

    pub fn scale(&self, c: &C) -> Self {
        Series::new(self.coeffs.iter().map(|a| a.mul(c)).collect(), self.ctx)
    }

    /// `f(x) -> f(c x)`: the `k`-th coefficient is multiplied by `c^k`.
    pub fn scale_variable(&self, c: &C) -> Self {
        let mut power = C::one(self.ctx);
        let mut out = Vec::with_capacity(self.order());
        for a in &self.coeffs {
            out.push(a.mul(&power));
            power = power.mul(c);
        }
        Series::new(out, self.ctx)
    }

    /// Exact convolution truncated to the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = C::zero(self.ctx);
            for i in 0..=k {
                if self.coeffs[i].is_zero() || other.coeffs[k - i].is_zero() {
                    continue;
                }
                acc = acc.add(&self.coeffs[i].mul(&other.coeffs[k - i]));
            }
            out.push(acc);
        }
        Series::new(out, self.ctx)
    }

    /// Integer power by repeated squaring; `a^0 = 1`.
    pub fn powi(&self, mut e: u32) -> Self {
        let mut result = Series::one(self.order(), self.ctx);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Quotient `a / b`.
    ///
    /// If `b` has a zero constant term, both operands must vanish to the same
    /// leading order `v` (with `b`'s `x^v` coefficient nonzero); the common
    /// factor `x^v` is cancelled first and the quotient is known modulo
    /// `x^(min(order a, order b) - v)`.
    pub fn div(&self, other: &Self) -> Result<Self> {
        let v = other.valuation().ok_or(SeriesError::DivisionByZeroSeries)?;
        if let Some(va) = self.valuation() {
            if va < v {
                return Err(SeriesError::LeadingOrderMismatch {
                    numerator: va,
                    denominator: v,
                });
            }
        }
        let n = self.order().min(other.order()) - v;
        let num = &self.coeffs[v..v + n];
        let den = &other.coeffs[v..v + n];
        let lead = &den[0];
        let mut q: Vec<C> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = num[k].clone();
            for i in 1..=k {
                if den[i].is_zero() {
                    continue;
                }
                acc = acc.sub(&den[i].mul(&q[k - i]));
            }
            q.push(acc.div(lead));
        }
        Ok(Series::new(q, self.ctx))
    }

    pub fn inverse(&self) -> Result<Self> {
        Series::one(self.order(), self.ctx).div(self)
    }

    pub fn derivative(&self) -> Self {
        let n = self.order().saturating_sub(1);
        Series::from_fn(n, self.ctx, |k| self.coeffs[k + 1].mul_i64(k as i64 + 1))
    }

    /// Antiderivative with zero constant term; the order grows by one.
    pub fn integral(&self) -> Self {
        let mut out = Vec::with_capacity(self.order() + 1);
        out.push(C::zero(self.ctx));
        for (k, a) in self.coeffs.iter().enumerate() {
            out.push(a.div_i64(k as i64 + 1));
        }
        Series::new(out, self.ctx)
    }

    /// Multiply by `x^k`; the order grows by `k`.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut out = vec![C::zero(self.ctx); k];
        out.extend(self.coeffs.iter().cloned());
        Series::new(out, self.ctx)
    }

    /// Divide by `x^k`, discarding the first `k` coefficients. Callers are
    /// responsible for those coefficients being zero.
    pub fn shift_down(&self, k: usize) -> Self {
        let k = k.min(self.order());
        Series::new(self.coeffs[k..].to_vec(), self.ctx)
    }

    fn require_constant(&self, expect_unit: bool) -> Result<()> {
        let Some(c0) = self.coeffs.first() else {
            return Ok(());
        };
        let ok = if expect_unit { c0.is_unit() } else { c0.is_zero() };
        if ok {
            Ok(())
        } else {
            Err(SeriesError::BadConstantTerm {
                expected: if expect_unit { "1" } else { "0" },
                found: c0.describe(),
            })
        }
    }

    /// `exp(a)` for `a` with zero constant term.
    pub fn exp(&self) -> Result<Self> {
        self.require_constant(false)?;
        let n = self.order();
        let mut f: Vec<C> = Vec::with_capacity(n);
        if n == 0 {
            return Ok(Series::new(f, self.ctx));
        }
        f.push(C::one(self.ctx));
        // n f_n = sum_{k=1}^n k a_k f_{n-k}
        for m in 1..n {
            let mut acc = C::zero(self.ctx);
            for k in 1..=m {
                if self.coeffs[k].is_zero() {
                    continue;
                }
                acc = acc.add(&self.coeffs[k].mul_i64(k as i64).mul(&f[m - k]));
            }
            f.push(acc.div_i64(m as i64));
        }
        Ok(Series::new(f, self.ctx))
    }

    /// `log(a)` for `a` with constant term 1.
    pub fn log(&self) -> Result<Self> {
        self.require_constant(true)?;
        let n = self.order();
        let mut b: Vec<C> = Vec::with_capacity(n);
        if n == 0 {
            return Ok(Series::new(b, self.ctx));
        }
        b.push(C::zero(self.ctx));
        // a' = a b'  =>  b_m = a_m - (1/m) sum_{k=1}^{m-1} k b_k a_{m-k}
        for m in 1..n {
            let mut acc = C::zero(self.ctx);
            for k in 1..m {
                if b[k].is_zero() || self.coeffs[m - k].is_zero() {
                    continue;
                }
                acc = acc.add(&b[k].mul_i64(k as i64).mul(&self.coeffs[m - k]));
            }
            b.push(self.coeffs[m].sub(&acc.div_i64(m as i64)));
        }
        Ok(Series::new(b, self.ctx))
    }

    /// `a^(k/2)` for `a` with constant term 1, computed as `exp((k/2) log a)`.
    pub fn pow_half_integer(&self, k: i64) -> Result<Self> {
        let l = self.log()?;
        let half_k = C::from_i64(k, self.ctx).div_i64(2);
        l.scale(&half_k).exp()
    }

    /// `outer(inner(x))` by Horner's rule; `inner` must have zero constant
    /// term. The result order is the smaller of the two orders.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        inner.require_constant(false)?;
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let mut acc = Series::zero(n, self.ctx);
        for k in (0..n).rev() {
            acc = acc.mul(&inner);
            if n > 0 {
                acc.coeffs[0] = acc.coeffs[0].add(&self.coeffs[k]);
            }
        }
        Ok(acc)
    }

    /// Compositional inverse: the series `b` with `a(b(x)) = x` to the order
    /// of `a`.
    ///
    /// Coefficients are fixed one at a time from the power table of `b`, with
    /// no appeal to Lagrange's formula.
    pub fn reversion(&self) -> Result<Self> {
        self.require_constant(false)?;
        let n = self.order();
        if n < 2 {
            return Ok(Series::zero(n, self.ctx));
        }
        let a1 = &self.coeffs[1];
        if a1.is_zero() {
            return Err(SeriesError::ZeroLinearTerm);
        }
        let zero = C::zero(self.ctx);
        // powers[j][k] = [x^k] b^j, filled column by column
        let mut powers: Vec<Vec<C>> = vec![vec![zero.clone(); n]; n];
        let mut b = vec![zero.clone(); n];
        b[1] = C::one(self.ctx).div(a1);
        powers[1][1] = b[1].clone();
        for j in 2..n {
            powers[j][j] = powers[j - 1][j - 1].mul(&b[1]);
        }
        for k in 2..n {
            // [x^k] b^j for j >= 2 only involves b_1 .. b_{k-1}
            for j in 2..k {
                let mut acc = zero.clone();
                for i in 1..=(k - j + 1) {
                    if b[i].is_zero() || powers[j - 1][k - i].is_zero() {
                        continue;
                    }
                    acc = acc.add(&b[i].mul(&powers[j - 1][k - i]));
                }
                powers[j][k] = acc;
            }
            let mut rest = zero.clone();
            for j in 2..=k {
                if self.coeffs[j].is_zero() {
                    continue;
                }
                rest = rest.add(&self.coeffs[j].mul(&powers[j][k]));
            }
            b[k] = rest.neg().div(a1);
            powers[1][k] = b[k].clone();
        }
        Ok(Series::new(b, self.ctx))
    }
}

impl Series<Rational> {
    /// Exact series from integer-ratio pairs.
    pub fn from_ratios(pairs: &[(i64, i64)]) -> Self {
        Series::new(
            pairs.iter().map(|&(p, q)| Rational::from((p, q))).collect(),
            (),
        )
    }

    pub fn to_float(&self, prec: u32) -> Series<Float> {
        Series::new(
            self.coeffs.iter().map(|q| Float::with_val(prec, q)).collect(),
            prec,
        )
    }
}

/// Stock exact series used throughout the crate.
pub mod stock {
    use rug::{Integer, Rational};

    use super::ExactSeries;
    use crate::scalar::factorial;

    fn inv_factorial(k: usize) -> Rational {
        Rational::from((Integer::from(1), factorial(k as u32)))
    }

    /// `e^x`.
    pub fn exp(order: usize) -> ExactSeries {
        ExactSeries::from_fn(order, (), inv_factorial)
    }

    /// `e^x - 1`.
    pub fn expm1(order: usize) -> ExactSeries {
        ExactSeries::from_fn(order, (), |k| {
            if k == 0 {
                Rational::new()
            } else {
                inv_factorial(k)
            }
        })
    }

    /// `e^x - 1 - x`.
    pub fn expm1_minus_x(order: usize) -> ExactSeries {
        ExactSeries::from_fn(order, (), |k| {
            if k < 2 {
                Rational::new()
            } else {
                inv_factorial(k)
            }
        })
    }

    /// `log(1 + x)`.
    pub fn log1p(order: usize) -> ExactSeries {
        ExactSeries::from_fn(order, (), |k| {
            if k == 0 {
                Rational::new()
            } else {
                let q = Rational::from((1, k as i64));
                if k % 2 == 0 {
                    -q
                } else {
                    q
                }
            }
        })
    }

    /// `1 / (1 - x)`.
    pub fn geometric(order: usize) -> ExactSeries {
        ExactSeries::from_fn(order, (), |_| Rational::from(1))
    }

    /// `c x^k` as a series of the given order.
    pub fn monomial(order: usize, k: usize, c: Rational) -> ExactSeries {
        ExactSeries::from_fn(order, (), |i| if i == k { c.clone() } else { Rational::new() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::from((p, d))
    }

    fn exact(c: &[(i64, i64)]) -> ExactSeries {
        ExactSeries::from_ratios(c)
    }

    #[test]
    fn difference_of_squares() {
        let a = exact(&[(1, 1), (1, 1), (0, 1)]);
        let b = exact(&[(1, 1), (-1, 1), (0, 1)]);
        assert_eq!(a.mul(&b), exact(&[(1, 1), (0, 1), (-1, 1)]));
    }

    #[test]
    fn x_times_x() {
        let x = ExactSeries::variable(4, ());
        assert_eq!(x.mul(&x), stock::monomial(4, 2, q(1, 1)));
    }

    #[test]
    fn exp_squared() {
        let e = stock::exp(4);
        assert_eq!(e.mul(&e), exact(&[(1, 1), (2, 1), (2, 1), (4, 3)]));
    }

    #[test]
    fn mul_truncates_to_smaller_order() {
        let a = stock::exp(7);
        let b = stock::exp(3);
        assert_eq!(a.mul(&b).order(), 3);
    }

    #[test]
    fn geometric_by_division() {
        let one = ExactSeries::one(6, ());
        let d = exact(&[(1, 1), (-1, 1), (0, 1), (0, 1), (0, 1), (0, 1)]);
        assert_eq!(one.div(&d).unwrap(), stock::geometric(6));
    }

    #[test]
    fn cancel_then_divide_against_long_division() {
        // (t^2/2) / (e^t - 1 - t): long division by hand on
        // 1/2 / (1/2 + t/6 + t^2/24 + ...) = 1 / (1 + t/3 + t^2/12 + t^3/60 + ...)
        let n = 8;
        let num = stock::monomial(n, 2, q(1, 2));
        let den = stock::expm1_minus_x(n);
        let quo = num.div(&den).unwrap();
        assert_eq!(quo.order(), n - 2);
        // independent oracle: geometric inversion of u = t/3 + t^2/12 + ...
        let u: Vec<Rational> = (0..n - 2)
            .map(|k| {
                if k == 0 {
                    q(0, 1)
                } else {
                    // 2/(k+2)!
                    Rational::from((2, 1)) / Rational::from(crate::scalar::factorial(k as u32 + 2))
                }
            })
            .collect();
        let mut oracle = vec![q(0, 1); n - 2];
        oracle[0] = q(1, 1);
        for k in 1..n - 2 {
            let mut s = q(0, 1);
            for i in 1..=k {
                s -= Rational::from(&u[i] * &oracle[k - i]);
            }
            oracle[k] = s;
        }
        assert_eq!(quo.coeffs(), &oracle[..]);
        assert_eq!(quo.coeffs()[..3], [q(1, 1), q(-1, 3), q(1, 36)]);
    }

    #[test]
    fn quotient_must_be_power_series() {
        let x = ExactSeries::variable(5, ());
        let x2 = stock::monomial(5, 2, q(1, 1));
        assert_eq!(
            x.div(&x2),
            Err(SeriesError::LeadingOrderMismatch {
                numerator: 1,
                denominator: 2
            })
        );
        let zero = ExactSeries::zero(5, ());
        assert_eq!(x.div(&zero), Err(SeriesError::DivisionByZeroSeries));
    }

    #[test]
    fn exp_and_log_of_stock_series() {
        assert_eq!(
            ExactSeries::variable(4, ()).exp().unwrap(),
            exact(&[(1, 1), (1, 1), (1, 2), (1, 6)])
        );
        let one_plus_x = exact(&[(1, 1), (1, 1), (0, 1), (0, 1)]);
        assert_eq!(
            one_plus_x.log().unwrap(),
            exact(&[(0, 1), (1, 1), (-1, 2), (1, 3)])
        );
    }

    #[test]
    fn constant_term_checks() {
        let e = stock::exp(4);
        assert!(matches!(
            e.exp(),
            Err(SeriesError::BadConstantTerm { expected: "0", .. })
        ));
        let x = ExactSeries::variable(4, ());
        match x.log() {
            Err(SeriesError::BadConstantTerm { found, .. }) => assert_eq!(found, "0"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(stock::geometric(4).compose(&e).is_err());
    }

    #[test]
    fn pow_exponent_one_is_identity() {
        let base = stock::monomial(10, 2, q(1, 2))
            .div(&stock::expm1_minus_x(10))
            .unwrap();
        assert_eq!(base.pow_half_integer(2).unwrap(), base);
        assert_eq!(base.pow_half_integer(0).unwrap(), ExactSeries::one(8, ()));
    }

    #[test]
    fn compose_inverse_pair() {
        let log = stock::log1p(8);
        let t = log.compose(&stock::expm1(8)).unwrap();
        assert_eq!(t, ExactSeries::variable(8, ()));
    }

    #[test]
    fn compose_square() {
        let s2 = stock::monomial(4, 2, q(1, 1));
        let inner = exact(&[(0, 1), (1, 1), (1, 1), (0, 1)]);
        assert_eq!(
            s2.compose(&inner).unwrap(),
            exact(&[(0, 1), (0, 1), (1, 1), (2, 1)])
        );
        let s2 = stock::monomial(5, 2, q(1, 1));
        let inner = exact(&[(0, 1), (1, 1), (1, 1), (0, 1), (0, 1)]);
        assert_eq!(
            s2.compose(&inner).unwrap(),
            exact(&[(0, 1), (0, 1), (1, 1), (2, 1), (1, 1)])
        );
    }

    #[test]
    fn reversion_cases() {
        let x = ExactSeries::variable(6, ());
        assert_eq!(x.reversion().unwrap(), x);
        assert_eq!(stock::expm1(10).reversion().unwrap(), stock::log1p(10));
        let bad = exact(&[(0, 1), (0, 1), (1, 1)]);
        assert_eq!(bad.reversion(), Err(SeriesError::ZeroLinearTerm));
        assert!(stock::exp(4).reversion().is_err());
    }

    #[test]
    fn coefficient_extraction() {
        assert_eq!(*stock::geometric(5).coefficient(2).unwrap(), 1);
        assert_eq!(*stock::exp(5).coefficient(3).unwrap(), q(1, 6));
        assert_eq!(
            stock::exp(5).coefficient(5),
            Err(SeriesError::OrderExceeded { index: 5, order: 5 })
        );
    }

    #[test]
    fn half_integer_power_at_m4() {
        // [t^4] ((t^2/2)/(e^t-1-t))^(5/2) = 1/864
        let base = stock::monomial(7, 2, q(1, 2))
            .div(&stock::expm1_minus_x(7))
            .unwrap();
        let p = base.pow_half_integer(5).unwrap();
        assert_eq!(*p.coefficient(4).unwrap(), q(1, 864));
    }

    #[test]
    fn float_series_follow_exact_ones() {
        let prec = 200;
        let e = stock::exp(12);
        let ef = e.to_float(prec);
        let sq = ef.mul(&ef);
        let exact_sq = e.mul(&e).to_float(prec);
        for (a, b) in sq.coeffs().iter().zip(exact_sq.coeffs()) {
            let d = Float::with_val(prec, a - b).abs();
            assert!(d < Float::with_val(prec, Float::i_exp(1, -190)));
        }
        let l = ef.log().unwrap();
        assert!(Float::with_val(prec, &l.coeffs()[1] - 1u32).abs() < 1e-50);
    }

    #[test]
    fn integral_and_derivative() {
        let e = stock::exp(6);
        assert_eq!(e.derivative(), stock::exp(5));
        assert_eq!(e.integral().order(), 7);
        assert_eq!(stock::exp(5).integral().shift_down(1), {
            // (e^x - 1)/x
            ExactSeries::from_fn(5, (), |k| {
                Rational::from((1, 1)) / Rational::from(crate::scalar::factorial(k as u32 + 1))
            })
        });
    }
}
