//! Lagrangean coefficients `[z^n] f` for `f = z G(f)`.
//!
//! With `phi = log G` and the saddle `R phi'(R) = 1`,
//!
//! ```text
//! n [z^n] f ~ R^(1-n) G(R)^n / (sqrt(2 pi n) sigma) * sum_m h_{2m} (-1)^m (2m)!/(2^m m!) (sigma^2 n)^(-m)
//! ```
//!
//! where `sigma^2 = R phi'(R) + R^2 phi''(R)`. The coefficients `h_m` come from
//! the vertical-line change of variables and `g_m` from the circular one; the
//! two agree. Catalan numbers get their own set of expansions for comparison.

use std::fmt;
use std::str::FromStr;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use thiserror::Error;

use crate::oracles::{self, SequenceValue};
use crate::scalar::{binomial_real, factorial, gaussian_factor, Coeff, Precision};
use crate::series::{stock, ExactSeries, FloatSeries, Series, SeriesError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LagError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no positive root of zG'(z) = G(z) found for {0}")]
    NoSaddle(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

pub type Result<T> = std::result::Result<T, LagError>;

/// What the Lagrangean machinery needs to know about `G`.
pub trait GSpec: Sync {
    fn name(&self) -> &str;

    /// Taylor series of `G` at the origin.
    fn exact_series(&self, order: usize) -> ExactSeries;

    /// Radius of convergence at the origin; `None` for entire `G`.
    fn radius(&self) -> Option<f64>;

    fn value(&self, x: &Float) -> Float;
    fn d1(&self, x: &Float) -> Float;

    /// Coefficients of `G(x + u) / G(x)` in `u`.
    fn shifted_float(&self, x: &Float, order: usize) -> FloatSeries;

    /// Exact `G(x + u) / G(x)` when it is rational at a rational point.
    fn shifted_exact(&self, x: &Rational, order: usize) -> Option<ExactSeries>;

    /// The saddle `R phi'(R) = 1` when it is rational.
    fn exact_saddle(&self) -> Option<Rational>;
}

/// Built-in `G`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LagrangeanG {
    /// `1/(1-z)`: Catalan numbers `(1/n) C(2n-2, n-1)`.
    Catalan,
    /// `e^z`: Cayley trees, `n [z^n] f = n^(n-1)/(n-1)!`.
    Exponential,
    /// `(1+z)^2`: Catalan numbers `(1/(n+1)) C(2n, n)`.
    SquarePlus,
    /// `1 + z + z^3`, whose saddle `2^(-1/3)` is irrational.
    Trinomial,
}

impl LagrangeanG {
    pub const ALL: [LagrangeanG; 4] = [
        LagrangeanG::Catalan,
        LagrangeanG::Exponential,
        LagrangeanG::SquarePlus,
        LagrangeanG::Trinomial,
    ];

    pub fn key(self) -> &'static str {
        match self {
            LagrangeanG::Catalan => "catalan",
            LagrangeanG::Exponential => "exp",
            LagrangeanG::SquarePlus => "square",
            LagrangeanG::Trinomial => "trinomial",
        }
    }

    fn shifted<C: Coeff>(self, x: &C, order: usize) -> Series<C> {
        let ctx = x.ctx();
        let one = C::one(ctx);
        match self {
            // (1-x)/(1-x-u) = sum (u/(1-x))^k
            LagrangeanG::Catalan => {
                let ratio = one.div(&one.sub(x));
                let mut power = one.clone();
                Series::from_fn(order, ctx, |_| {
                    let c = power.clone();
                    power = power.mul(&ratio);
                    c
                })
            }
            LagrangeanG::Exponential => {
                Series::from_fn(order, ctx, |k| C::from_rational(&inv_factorial(k), ctx))
            }
            // (1 + u/(1+x))^2
            LagrangeanG::SquarePlus => {
                let inv = one.div(&one.add(x));
                Series::from_fn(order, ctx, |k| match k {
                    0 => one.clone(),
                    1 => inv.mul_i64(2),
                    2 => inv.mul(&inv),
                    _ => C::zero(ctx),
                })
            }
            LagrangeanG::Trinomial => {
                let x2 = x.mul(x);
                let g = one.add(x).add(&x2.mul(x));
                Series::from_fn(order, ctx, |k| match k {
                    0 => one.clone(),
                    1 => one.add(&x2.mul_i64(3)).div(&g),
                    2 => x.mul_i64(3).div(&g),
                    3 => one.div(&g),
                    _ => C::zero(ctx),
                })
            }
        }
    }
}

impl fmt::Display for LagrangeanG {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for LagrangeanG {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "catalan" => Ok(LagrangeanG::Catalan),
            "exp" | "cayley" => Ok(LagrangeanG::Exponential),
            "square" | "plus" => Ok(LagrangeanG::SquarePlus),
            "trinomial" => Ok(LagrangeanG::Trinomial),
            _ => Err(format!("unknown G `{s}` (expected catalan, exp, square, trinomial)")),
        }
    }
}

fn inv_factorial(k: usize) -> Rational {
    Rational::from((Integer::from(1), factorial(k as u32)))
}

impl GSpec for LagrangeanG {
    fn name(&self) -> &str {
        self.key()
    }

    fn exact_series(&self, order: usize) -> ExactSeries {
        match self {
            LagrangeanG::Catalan => stock::geometric(order),
            LagrangeanG::Exponential => stock::exp(order),
            LagrangeanG::SquarePlus => PolynomialG::new(vec![1, 2, 1]).exact_series(order),
            LagrangeanG::Trinomial => PolynomialG::new(vec![1, 1, 0, 1]).exact_series(order),
        }
    }

    fn radius(&self) -> Option<f64> {
        match self {
            LagrangeanG::Catalan => Some(1.0),
            _ => None,
        }
    }

    fn value(&self, x: &Float) -> Float {
        let p = x.prec();
        match self {
            LagrangeanG::Catalan => Float::with_val(p, 1 - x).recip(),
            LagrangeanG::Exponential => Float::with_val(p, x.exp_ref()),
            LagrangeanG::SquarePlus => Float::with_val(p, x + 1u32).square(),
            LagrangeanG::Trinomial => PolynomialG::new(vec![1, 1, 0, 1]).value(x),
        }
    }

    fn d1(&self, x: &Float) -> Float {
        let p = x.prec();
        match self {
            LagrangeanG::Catalan => Float::with_val(p, 1 - x).square().recip(),
            LagrangeanG::Exponential => Float::with_val(p, x.exp_ref()),
            LagrangeanG::SquarePlus => Float::with_val(p, x + 1u32) * 2u32,
            LagrangeanG::Trinomial => PolynomialG::new(vec![1, 1, 0, 1]).d1(x),
        }
    }

    fn shifted_float(&self, x: &Float, order: usize) -> FloatSeries {
        self.shifted(x, order)
    }

    fn shifted_exact(&self, x: &Rational, order: usize) -> Option<ExactSeries> {
        Some(self.shifted(x, order))
    }

    fn exact_saddle(&self) -> Option<Rational> {
        match self {
            LagrangeanG::Catalan => Some(Rational::from((1, 2))),
            LagrangeanG::Exponential | LagrangeanG::SquarePlus => Some(Rational::from(1)),
            LagrangeanG::Trinomial => None,
        }
    }
}

/// A polynomial `G` given by exact coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialG {
    coeffs: Vec<Rational>,
    label: String,
}

impl PolynomialG {
    pub fn new(coeffs: Vec<i64>) -> Self {
        Self::from_rationals(coeffs.into_iter().map(Rational::from).collect())
    }

    pub fn from_rationals(coeffs: Vec<Rational>) -> Self {
        let label = format!(
            "poly[{}]",
            coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
        );
        PolynomialG { coeffs, label }
    }

    fn taylor_shift<C: Coeff>(&self, x: &C) -> Vec<C> {
        // coefficient of u^k in G(x+u) is sum_{j>=k} a_j C(j,k) x^(j-k)
        let ctx = x.ctx();
        let d = self.coeffs.len();
        (0..d)
            .map(|k| {
                let mut acc = C::zero(ctx);
                for j in (k..d).rev() {
                    let binom = Rational::from(Integer::from(j as u64).binomial(k as u32));
                    let a = C::from_rational(&Rational::from(&self.coeffs[j] * &binom), ctx);
                    acc = acc.mul(x).add(&a);
                }
                acc
            })
            .collect()
    }

    fn shifted<C: Coeff>(&self, x: &C, order: usize) -> Series<C> {
        let shift = self.taylor_shift(x);
        let ctx = x.ctx();
        let g = shift[0].clone();
        Series::from_fn(order, ctx, |k| {
            shift.get(k).map_or_else(|| C::zero(ctx), |c| c.div(&g))
        })
    }
}

impl GSpec for PolynomialG {
    fn name(&self) -> &str {
        &self.label
    }

    fn exact_series(&self, order: usize) -> ExactSeries {
        ExactSeries::from_fn(order, (), |k| self.coeffs.get(k).cloned().unwrap_or_default())
    }

    fn radius(&self) -> Option<f64> {
        None
    }

    fn value(&self, x: &Float) -> Float {
        let p = x.prec();
        self.coeffs
            .iter()
            .rev()
            .fold(Float::with_val(p, 0), |acc, a| acc * x + a)
    }

    fn d1(&self, x: &Float) -> Float {
        let p = x.prec();
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(Float::with_val(p, 0), |acc, (j, a)| {
                acc * x + Rational::from(a * j as u64)
            })
    }

    fn shifted_float(&self, x: &Float, order: usize) -> FloatSeries {
        self.shifted(x, order)
    }

    fn shifted_exact(&self, x: &Rational, order: usize) -> Option<ExactSeries> {
        Some(self.shifted(x, order))
    }

    fn exact_saddle(&self) -> Option<Rational> {
        None
    }
}

/// Outcome of checking the sub-criticality conditions on finitely many
/// coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct SubCriticalityReport {
    /// Radius of analyticity from the catalog entry; `None` means entire.
    pub radius: Option<f64>,
    pub order_checked: usize,
    pub nonnegative: bool,
    /// `gcd{j : [z^j] G > 0} = 1`.
    pub aperiodic: bool,
    /// Root of `z G'(z) = G(z)` inside the disk, when one exists.
    pub rho0: Option<Float>,
}

impl SubCriticalityReport {
    pub fn passes(&self) -> bool {
        self.nonnegative && self.aperiodic && self.rho0.is_some()
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Positive root of `z G'(z) = G(z)` below the radius of convergence, by
/// bisection to full precision.
pub fn solve_lagrangean_saddle(g: &dyn GSpec, prec: Precision) -> Option<Float> {
    let p = prec.bits();
    let h = |z: &Float| Float::with_val(p, z * g.d1(z)) - g.value(z);
    let mut lo = Float::with_val(p, 0);
    let mut hi = match g.radius() {
        Some(rho) => {
            let rho = Float::with_val(p, rho);
            let mut k = 1;
            loop {
                let c = Float::with_val(p, &rho * (1 - prec.pow2_neg(k)));
                if h(&c) > 0 {
                    break c;
                }
                lo = c;
                k += 1;
                if k > 64 {
                    return None;
                }
            }
        }
        None => {
            let mut c = Float::with_val(p, 1);
            let mut tries = 0;
            while h(&c) <= 0 {
                lo = c.clone();
                c *= 2u32;
                tries += 1;
                if tries > 64 {
                    return None;
                }
            }
            c
        }
    };
    for _ in 0..(p + 8) {
        let mid = Float::with_val(p, &lo + &hi) / 2u32;
        if h(&mid) <= 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(Float::with_val(p, &lo + &hi) / 2u32)
}

/// Checks nonnegativity and aperiodicity on `[z^0 .. z^(order-1)] G`, and
/// locates `rho0`.
pub fn check_subcriticality(g: &dyn GSpec, order: usize) -> Result<SubCriticalityReport> {
    let coeffs = g.exact_series(order.max(1));
    let g0 = &coeffs.coeffs()[0];
    if g0.cmp0() != std::cmp::Ordering::Greater {
        return Err(LagError::Precondition(format!("G(0) = {g0} must be positive")));
    }
    let nonnegative = coeffs.coeffs().iter().all(|c| c.cmp0() != std::cmp::Ordering::Less);
    let period = coeffs
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.cmp0() == std::cmp::Ordering::Greater)
        .fold(0, |acc, (j, _)| gcd(acc, j));
    Ok(SubCriticalityReport {
        radius: g.radius(),
        order_checked: order,
        nonnegative,
        aperiodic: period == 1,
        rho0: solve_lagrangean_saddle(g, Precision(128)),
    })
}

/// Saddle, variance and local expansion `phi(R(1+v)) - phi(R)` of one `G`.
#[derive(Clone, Debug, PartialEq)]
pub struct LagrangeanScheme<C: Coeff> {
    pub saddle: C,
    pub sigma2: C,
    /// `phi(R(1+v)) - phi(R)` modulo `v^order`.
    pub local: Series<C>,
}

impl<C: Coeff> LagrangeanScheme<C> {
    fn from_shifted(saddle: C, shifted: Series<C>) -> Result<Self> {
        let local = shifted.scale_variable(&saddle).log()?;
        let sigma2 = local.coeffs()[1].add(&local.coeffs()[2].mul_i64(2));
        Ok(LagrangeanScheme {
            saddle,
            sigma2,
            local,
        })
    }

    pub fn order(&self) -> usize {
        self.local.order()
    }

    fn r_dphi(&self) -> &C {
        &self.local.coeffs()[1]
    }

    /// `[v^m] ((sigma^2 v^2 / 2) / (phi(R(1+v)) - phi(R) - R phi'(R) log(1+v)))^((m+1)/2)`.
    pub fn h(&self, m: usize) -> Result<C> {
        let order = m + 3;
        self.require(order)?;
        let ctx = self.sigma2.ctx();
        let log1p = lift(&stock::log1p(order), ctx);
        let mut den = self.local.truncate(order).sub(&log1p.scale(self.r_dphi()));
        den.set_coefficient(0, C::zero(ctx));
        den.set_coefficient(1, C::zero(ctx));
        self.extract(den, m, None)
    }

    /// `[t^m] e^t ((sigma^2 t^2 / 2) / (phi(R e^t) - phi(R) - R phi'(R) t))^((m+1)/2)`.
    pub fn g(&self, m: usize) -> Result<C> {
        let order = m + 3;
        self.require(order)?;
        let ctx = self.sigma2.ctx();
        let expm1 = lift(&stock::expm1(order), ctx);
        let t = Series::<C>::variable(order, ctx);
        let mut den = self.local.truncate(order).compose(&expm1)?.sub(&t.scale(self.r_dphi()));
        den.set_coefficient(0, C::zero(ctx));
        den.set_coefficient(1, C::zero(ctx));
        let exp = lift(&stock::exp(m + 1), ctx);
        self.extract(den, m, Some(exp))
    }

    fn require(&self, order: usize) -> Result<()> {
        if self.order() < order {
            return Err(SeriesError::OrderExceeded {
                index: order - 1,
                order: self.order(),
            }
            .into());
        }
        Ok(())
    }

    fn extract(&self, den: Series<C>, m: usize, factor: Option<Series<C>>) -> Result<C> {
        let ctx = self.sigma2.ctx();
        let order = den.order();
        let half_sigma2 = self.sigma2.div_i64(2);
        let num = Series::from_fn(order, ctx, |k| if k == 2 { half_sigma2.clone() } else { C::zero(ctx) });
        let mut power = num.div(&den)?.pow_half_integer(m as i64 + 1)?;
        if let Some(f) = factor {
            power = power.mul(&f);
        }
        Ok(power.coefficient(m)?.clone())
    }
}

fn lift<C: Coeff>(s: &ExactSeries, ctx: C::Ctx) -> Series<C> {
    Series::new(s.coeffs().iter().map(|q| C::from_rational(q, ctx)).collect(), ctx)
}

/// Exact scheme when the saddle and the shifted Taylor series are rational.
pub fn exact_scheme(g: &dyn GSpec, order: usize) -> Option<Result<LagrangeanScheme<Rational>>> {
    let r = g.exact_saddle()?;
    let shifted = g.shifted_exact(&r, order)?;
    Some(LagrangeanScheme::from_shifted(r, shifted))
}

/// Floating-point scheme; uses the rational saddle when there is one.
pub fn float_scheme(g: &dyn GSpec, order: usize, prec: Precision) -> Result<LagrangeanScheme<Float>> {
    let p = prec.bits();
    let r = match g.exact_saddle() {
        Some(q) => Float::with_val(p, &q),
        None => solve_lagrangean_saddle(g, prec).ok_or_else(|| LagError::NoSaddle(g.name().to_string()))?,
    };
    let shifted = g.shifted_float(&r, order);
    LagrangeanScheme::from_shifted(r, shifted)
}

/// `h_m` exactly, if the scheme is rational.
pub fn lag_h_exact(g: &dyn GSpec, m: usize) -> Option<Result<Rational>> {
    exact_scheme(g, m + 3).map(|s| s?.h(m))
}

/// `g_m` exactly, if the scheme is rational.
pub fn lag_g_exact(g: &dyn GSpec, m: usize) -> Option<Result<Rational>> {
    exact_scheme(g, m + 3).map(|s| s?.g(m))
}

pub fn lag_h_float(g: &dyn GSpec, m: usize, prec: Precision) -> Result<Float> {
    float_scheme(g, m + 3, prec)?.h(m)
}

pub fn lag_g_float(g: &dyn GSpec, m: usize, prec: Precision) -> Result<Float> {
    float_scheme(g, m + 3, prec)?.g(m)
}

/// `h_m` at the given precision, computed exactly first whenever possible.
pub fn lag_h(g: &dyn GSpec, m: usize, prec: Precision) -> Result<Float> {
    match lag_h_exact(g, m) {
        Some(q) => Ok(Float::with_val(prec.bits(), &q?)),
        None => lag_h_float(g, m, prec),
    }
}

/// The Lagrangean expansion of `n [z^n] f`, with its exact value alongside.
#[derive(Clone, Debug, PartialEq)]
pub struct LagrangeanExpansion {
    pub n: u64,
    pub saddle: Float,
    pub sigma2: Float,
    /// `R^(1-n) G(R)^n / (sqrt(2 pi n) sigma)`.
    pub prefactor: Float,
    /// `h_{2m} (-1)^m (2m)!/(2^m m!)`.
    pub coefficients: Vec<Float>,
    /// `coefficients[m] (sigma^2 n)^(-m)`.
    pub terms: Vec<Float>,
    pub partial_sums: Vec<Float>,
    /// `n [z^n] f`.
    pub exact: Rational,
    pub precision: Precision,
}

impl LagrangeanExpansion {
    pub fn abs_error(&self, m: usize) -> Float {
        let p = self.precision.bits();
        Float::with_val(p, &self.partial_sums[m] - &self.exact).abs()
    }

    pub fn relative_error(&self, m: usize) -> Float {
        let p = self.precision.bits();
        self.abs_error(m) / Float::with_val(p, &self.exact)
    }
}

pub fn lag_expand(g: &dyn GSpec, n: u64, max_terms: usize, prec: Precision) -> Result<LagrangeanExpansion> {
    if n == 0 {
        return Err(LagError::Precondition("n must be at least 1".into()));
    }
    let p = prec.bits();
    let order = 2 * max_terms + 3;
    let scheme = float_scheme(g, order, prec)?;
    let exact = exact_scheme(g, order).transpose()?;
    let r = scheme.saddle.clone();
    let sigma2 = scheme.sigma2.clone();

    let log_pref = Float::with_val(p, r.ln_ref()) * (1 - n as i64)
        + Float::with_val(p, g.value(&r).ln()) * n
        - Float::with_val(p, prec.pi() * 2u32 * n).ln() / 2u32
        - Float::with_val(p, sigma2.ln_ref()) / 2u32;
    let prefactor = log_pref.exp();

    let scale = Float::with_val(p, &sigma2 * n);
    let mut power = Float::with_val(p, 1);
    let mut running = Float::with_val(p, 0);
    let mut coefficients = Vec::new();
    let mut terms = Vec::new();
    let mut partial_sums = Vec::new();
    for m in 0..=max_terms {
        let h = match &exact {
            Some(s) => Float::with_val(p, &s.h(2 * m)?),
            None => scheme.h(2 * m)?,
        };
        let c = h * &gaussian_factor(m as u32);
        let term = Float::with_val(p, &c * &power);
        running += &term;
        partial_sums.push(Float::with_val(p, &running * &prefactor));
        coefficients.push(c);
        terms.push(term);
        power /= &scale;
    }
    Ok(LagrangeanExpansion {
        n,
        saddle: r,
        sigma2,
        prefactor,
        coefficients,
        terms,
        partial_sums,
        exact: oracles::lagrangean_an(g, n).value,
        precision: prec,
    })
}

/// `b_m = [t^m] ((1 - e^(-t))/t)^(1/2)`, `m = 0 ..= max_m`.
pub fn catalan_b_table(max_m: usize) -> Vec<Rational> {
    let order = max_m + 1;
    // (1 - e^(-t))/t = sum (-1)^k t^k/(k+1)!
    let base = ExactSeries::from_fn(order, (), |k| {
        let q = inv_factorial(k + 1);
        if k % 2 == 1 {
            -q
        } else {
            q
        }
    });
    base.pow_half_integer(1).expect("unit constant").into_coeffs()
}

pub fn catalan_b(m: usize) -> Rational {
    catalan_b_table(m).swap_remove(m)
}

/// `[t^m] ((2/t) sinh(t/2))^(1/2)`; odd `m` give zero.
pub fn catalan_bprime_table(max_m: usize) -> Vec<Rational> {
    let order = max_m + 1;
    // (2/t) sinh(t/2) = sum_k (t/2)^(2k)/(2k+1)!
    let base = ExactSeries::from_fn(order, (), |k| {
        if k % 2 == 1 {
            Rational::new()
        } else {
            inv_factorial(k + 1) / Integer::from(Integer::u_pow_u(2, k as u32))
        }
    });
    base.pow_half_integer(1).expect("unit constant").into_coeffs()
}

pub fn catalan_bprime(m: usize) -> Rational {
    catalan_bprime_table(m).swap_remove(m)
}

/// `4^(-m) [y^m] (2e^y - 1) sqrt(y/(1 - e^(-y)))`, the closed form of `h_{2m}`
/// for `G = (1+z)^2`.
pub fn plus_route_h(m: usize) -> Rational {
    let order = m + 1;
    let base = ExactSeries::from_fn(order, (), |k| {
        let q = inv_factorial(k + 1);
        if k % 2 == 1 {
            -q
        } else {
            q
        }
    });
    let root = base.pow_half_integer(-1).expect("unit constant");
    let two_exp_minus_one = stock::exp(order).scale(&Rational::from(2)).sub(&ExactSeries::one(order, ()));
    let value = root.mul(&two_exp_minus_one).coefficient(m).unwrap().clone();
    value / Integer::from(Integer::u_pow_u(4, m as u32))
}

/// The four Catalan expansions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CatalanVariant {
    /// Lagrangean: `4^(n-1)/sqrt(pi) sum h_{2m} (-1)^m (2m)!/(4^m m!) n^(-m-3/2)`.
    Lag,
    /// Singularity analysis: `4^n/(2 sqrt(pi)) sum b_m (-1)^m (2m+2)!/((m+1)! 4^(m+1)) n^(-m-3/2)`.
    Sing,
    /// Same, in powers of `n - 1/4` with only even `b'` terms.
    Refined,
    /// Through `G = (1+z)^2`, approximating `(1/(n+1)) C(2n, n)`.
    Plus,
}

impl CatalanVariant {
    pub const ALL: [CatalanVariant; 4] = [
        CatalanVariant::Lag,
        CatalanVariant::Sing,
        CatalanVariant::Refined,
        CatalanVariant::Plus,
    ];

    pub fn key(self) -> &'static str {
        match self {
            CatalanVariant::Lag => "lag",
            CatalanVariant::Sing => "sing",
            CatalanVariant::Refined => "refined",
            CatalanVariant::Plus => "plus",
        }
    }
}

impl fmt::Display for CatalanVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for CatalanVariant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        CatalanVariant::ALL
            .into_iter()
            .find(|v| v.key() == s)
            .ok_or_else(|| format!("unknown Catalan variant `{s}` (expected lag, sing, refined, plus)"))
    }
}

/// Terms and partial sums of one Catalan expansion against its exact target.
#[derive(Clone, Debug, PartialEq)]
pub struct CatalanExpansion {
    pub which: CatalanVariant,
    pub n: u64,
    /// `catalan(n)`, or `(1/(n+1)) C(2n, n)` for [`CatalanVariant::Plus`].
    pub target: Rational,
    pub terms: Vec<Float>,
    pub partial_sums: Vec<Float>,
    pub precision: Precision,
}

impl CatalanExpansion {
    pub fn abs_error(&self, m: usize) -> Float {
        Float::with_val(self.precision.bits(), &self.partial_sums[m] - &self.target).abs()
    }

    pub fn relative_error(&self, m: usize) -> Float {
        let p = self.precision.bits();
        self.abs_error(m) / Float::with_val(p, &self.target)
    }
}

pub fn catalan_expansions(
    n: u64,
    max_terms: usize,
    which: CatalanVariant,
    prec: Precision,
) -> Result<CatalanExpansion> {
    if n < 2 {
        return Err(LagError::Precondition("Catalan expansions need n >= 2".into()));
    }
    let p = prec.bits();
    let nf = Float::with_val(p, n);
    let sqrt_pi = prec.pi().sqrt();
    let four_n = Float::with_val(p, Integer::from(Integer::u_pow_u(4, n as u32)));
    let mut terms = Vec::with_capacity(max_terms + 1);
    let target = match which {
        CatalanVariant::Plus => Rational::from((
            Integer::from(n * 2).binomial(n as u32),
            Integer::from(n + 1),
        )),
        _ => oracles::catalan(n).value,
    };
    match which {
        CatalanVariant::Lag => {
            let scheme = exact_scheme(&LagrangeanG::Catalan, 2 * max_terms + 3)
                .expect("rational scheme")?;
            let lead = Float::with_val(p, &four_n / 4u32) / &sqrt_pi;
            for m in 0..=max_terms {
                // (-1)^m (2m)!/(4^m m!) = gaussian_factor(m) / 2^m
                let c = scheme.h(2 * m)? * gaussian_factor(m as u32)
                    / Integer::from(Integer::u_pow_u(2, m as u32));
                let power = n_power(&nf, m, 0);
                terms.push(Float::with_val(p, &lead * &c) * power);
            }
        }
        CatalanVariant::Sing => {
            let b = catalan_b_table(max_terms);
            let lead = Float::with_val(p, &four_n / 2u32) / &sqrt_pi;
            for (m, bm) in b.iter().enumerate() {
                let c = bm * sing_factor(m);
                let power = n_power(&nf, m, 0);
                terms.push(Float::with_val(p, &lead * &c) * power);
            }
        }
        CatalanVariant::Refined => {
            let bp = catalan_bprime_table(2 * max_terms);
            let lead = Float::with_val(p, &four_n / 2u32) / &sqrt_pi;
            let shifted = Float::with_val(p, &nf - 0.25);
            for m in 0..=max_terms {
                // b'_{2m} (4m+2)!/((2m+1)! 4^(2m+1))
                let c = &bp[2 * m] * sing_factor(2 * m);
                let power = n_power(&shifted, 2 * m, 0);
                terms.push(Float::with_val(p, &lead * &c) * power);
            }
        }
        CatalanVariant::Plus => {
            let lead = Float::with_val(p, &four_n / &sqrt_pi);
            for m in 0..=max_terms {
                // (-1)^m (2m)!/m! = gaussian_factor(m) 2^m
                let c = plus_route_h(m) * gaussian_factor(m as u32)
                    * Integer::from(Integer::u_pow_u(2, m as u32));
                let power = n_power(&nf, m, 0);
                terms.push(Float::with_val(p, &lead * &c) * power);
            }
        }
    }
    let mut running = Float::with_val(p, 0);
    let partial_sums = terms
        .iter()
        .map(|t| {
            running += t;
            running.clone()
        })
        .collect();
    Ok(CatalanExpansion {
        which,
        n,
        target,
        terms,
        partial_sums,
        precision: prec,
    })
}

/// `x^(-m-3/2)`.
fn n_power(x: &Float, m: usize, _: u32) -> Float {
    let p = x.prec();
    let e = Float::with_val(p, -(m as f64) - 1.5);
    Float::with_val(p, (x).pow(&e))
}

/// `(-1)^m (2m+2)! / ((m+1)! 4^(m+1))`, i.e. `-sqrt(pi)/(2 Gamma(-m-1/2))`
/// up to the factor 2.
fn sing_factor(m: usize) -> Rational {
    let num = factorial(2 * m as u32 + 2);
    let den = factorial(m as u32 + 1) * Integer::from(Integer::u_pow_u(4, m as u32 + 1));
    let q = Rational::from((num, den));
    if m % 2 == 1 {
        -q
    } else {
        q
    }
}

/// One row of the `b_m` growth table.
#[derive(Clone, Debug, PartialEq)]
pub struct BRow {
    pub m: usize,
    pub b: Rational,
    /// `b_m (2 pi)^m m^(3/2)` for odd `m`, `b_m (2 pi)^m m^(5/2)` for even `m`.
    pub normalized: Float,
    /// `(-1)^floor(m/2)` times `1/sqrt(pi)` (odd) or `3 sqrt(pi)/4` (even).
    pub predicted: Float,
    pub ratio: Float,
    pub sign_matches: bool,
    /// `|b_m (2m+2)!/((m+1)! 4^(m+1))|`, the size of the `m`-th term at `n = 1`.
    pub term_at_one: Float,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BAsymptoticReport {
    pub rows: Vec<BRow>,
    /// The odd-`m` terms at `n = 1` increase strictly from `m = 11` on.
    pub divergent_at_one: bool,
}

/// Compares `b_1 ..= b_max` against the two-case growth law.
pub fn b_asymptotic_check(m_max: usize, prec: Precision) -> Result<BAsymptoticReport> {
    if m_max < 10 {
        return Err(LagError::Precondition("m_max must be at least 10".into()));
    }
    let p = prec.bits();
    let b = catalan_b_table(m_max);
    let two_pi = Float::with_val(p, prec.pi() * 2u32);
    let sqrt_pi = prec.pi().sqrt();
    let mut rows = Vec::with_capacity(m_max);
    for (m, bm) in b.iter().enumerate().skip(1) {
        let mf = Float::with_val(p, m);
        let growth = Float::with_val(p, (&two_pi).pow(m as u32));
        let (exponent, constant) = if m % 2 == 1 {
            (1.5, Float::with_val(p, sqrt_pi.recip_ref()))
        } else {
            (2.5, Float::with_val(p, &sqrt_pi * 3u32) / 4u32)
        };
        let normalized = Float::with_val(p, bm * growth) * mf.pow(exponent);
        let sign = if (m / 2) % 2 == 0 { 1 } else { -1 };
        let predicted = constant * sign;
        let ratio = Float::with_val(p, &normalized / &predicted);
        let sign_matches = (bm.cmp0() as i32) == sign;
        let term_at_one = Float::with_val(p, bm * sing_factor(m)).abs();
        rows.push(BRow {
            m,
            b: bm.clone(),
            normalized,
            predicted,
            ratio,
            sign_matches,
            term_at_one,
        });
    }
    let odd_tail: Vec<&BRow> = rows.iter().filter(|r| r.m % 2 == 1 && r.m >= 11).collect();
    let divergent_at_one = odd_tail.len() >= 2
        && odd_tail.windows(2).all(|w| w[1].term_at_one > w[0].term_at_one);
    Ok(BAsymptoticReport {
        rows,
        divergent_at_one,
    })
}

/// `c_k = ((-1)^k / k) [t^(k-1)] Q(t)^(-k/2)` with
/// `Q(t) = (1 - (tau+t) G(tau) / (tau G(tau+t))) / t^2` and `tau` the root of
/// `tau G'(tau) = G(tau)`.
///
/// These are the coefficients of `f = tau + sum_k c_k (1 - z/rho)^(k/2)` near
/// the singularity `rho = tau / G(tau)`.
pub fn sing_coeff(g: &dyn GSpec, k: usize, prec: Precision) -> Result<Float> {
    if k == 0 {
        return Err(LagError::Precondition("k must be at least 1".into()));
    }
    let p = prec.bits();
    let tau = float_scheme(g, 3, prec)?.saddle;
    let order = k + 2;
    let shifted = g.shifted_float(&tau, order);
    let inv_tau = Float::with_val(p, tau.recip_ref());
    let linear = FloatSeries::from_fn(order, p, |j| match j {
        0 => Float::with_val(p, 1),
        1 => inv_tau.clone(),
        _ => Float::with_val(p, 0),
    });
    let ratio = linear.div(&shifted)?;
    let mut numer = FloatSeries::one(order, p).sub(&ratio);
    // vanishes to second order at the saddle
    numer.set_coefficient(0, Float::with_val(p, 0));
    numer.set_coefficient(1, Float::with_val(p, 0));
    let q = numer.shift_down(2);
    let q0 = q.coeffs()[0].clone();
    let unit = q.scale(&Float::with_val(p, q0.recip_ref()));
    let power = unit.pow_half_integer(-(k as i64))?;
    let scale = Float::with_val(p, (&q0).pow(&Float::with_val(p, -(k as f64) / 2.0)));
    let coeff = Float::with_val(p, power.coefficient(k - 1)? * scale) / k as u32;
    Ok(if k % 2 == 1 { -coeff } else { coeff })
}

/// `rho = tau / G(tau)`, the radius of convergence of `f`.
pub fn singularity_radius(g: &dyn GSpec, prec: Precision) -> Result<Float> {
    let tau = float_scheme(g, 3, prec)?.saddle;
    let gv = g.value(&tau);
    Ok(tau / gv)
}

/// Singularity-analysis expansion
/// `[z^n] f ~ rho^(-n) sum_j c_{2j+1} C(n - j - 3/2, n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularityExpansion {
    pub n: u64,
    pub rho: Float,
    /// `c_1, c_3, c_5, ...`
    pub coefficients: Vec<Float>,
    pub partial_sums: Vec<Float>,
    /// `[z^n] f`.
    pub exact: Rational,
}

pub fn sing_expand(g: &dyn GSpec, n: u64, max_terms: usize, prec: Precision) -> Result<SingularityExpansion> {
    let p = prec.bits();
    let rho = singularity_radius(g, prec)?;
    let scale = Float::with_val(p, (&rho).pow(-(n as i64)));
    let mut running = Float::with_val(p, 0);
    let mut coefficients = Vec::new();
    let mut partial_sums = Vec::new();
    for j in 0..=max_terms {
        let c = sing_coeff(g, 2 * j + 1, prec)?;
        let x = Float::with_val(p, n as f64 - j as f64 - 1.5);
        running += Float::with_val(p, &c * binomial_real(&x, n as u32));
        partial_sums.push(Float::with_val(p, &running * &scale));
        coefficients.push(c);
    }
    Ok(SingularityExpansion {
        n,
        rho,
        coefficients,
        partial_sums,
        exact: oracles::lagrangean_coefficient(g, n).value,
    })
}

impl SingularityExpansion {
    pub fn relative_error(&self, m: usize) -> Float {
        let p = self.rho.prec();
        let exact = Float::with_val(p, &self.exact);
        Float::with_val(p, &self.partial_sums[m] - &exact).abs() / exact
    }
}

/// Exact `[z^n] f` as a [`SequenceValue`], for the CLI.
pub fn lagrangean_value(g: &dyn GSpec, n: u64) -> SequenceValue {
    oracles::lagrangean_coefficient(g, n)
}
