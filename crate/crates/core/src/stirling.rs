//! The four Stirling coefficient families and their identities.
//!
//! `c_m` and `d_m` are Gaussian moments of `[y^m] exp(sum_{j>=3} w_j (it)^j y^(j-2))`
//! with weights `w_j = 1/j!` and `w_j = 1/j` respectively. `g_m` and `h_m` are
//! the Lagrange-inversion coefficients of the two changes of variables
//! `e^u - 1 - u = v^2/2` and `x - log(1+x) = y^2/2`. All four live over exact
//! rationals; the imaginary unit is folded into [`gaussian_moment`].

use rayon::prelude::*;
use rug::{Float, Integer, Rational};

use crate::scalar::{factorial, gaussian_factor, odd_double_factorial, Precision};
use crate::series::{stock, ExactSeries, Result};

/// Polynomial in the auxiliary variable `t`, exact coefficients indexed by
/// power.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct TPolynomial {
    coeffs: Vec<Rational>,
}

impl TPolynomial {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        let mut p = TPolynomial { coeffs };
        p.trim();
        p
    }

    pub fn one() -> Self {
        TPolynomial::new(vec![Rational::from(1)])
    }

    /// `c t^k`.
    pub fn monomial(k: usize, c: Rational) -> Self {
        let mut coeffs = vec![Rational::new(); k + 1];
        coeffs[k] = c;
        TPolynomial::new(coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| *c == 0) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Powers of `t` carrying a nonzero coefficient.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(k, _)| k)
    }

    pub fn add_assign_scaled_shift(&mut self, other: &TPolynomial, scale: &Rational, shift: usize) {
        if other.is_zero() {
            return;
        }
        let need = other.coeffs.len() + shift;
        if self.coeffs.len() < need {
            self.coeffs.resize(need, Rational::new());
        }
        for (k, c) in other.coeffs.iter().enumerate() {
            self.coeffs[k + shift] += Rational::from(c * scale);
        }
        self.trim();
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        TPolynomial::new(self.coeffs.iter().map(|a| Rational::from(a * c)).collect())
    }

    pub fn mul(&self, other: &TPolynomial) -> Self {
        if self.is_zero() || other.is_zero() {
            return TPolynomial::default();
        }
        let mut out = vec![Rational::new(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        TPolynomial::new(out)
    }
}

/// The normalized Gaussian functional
/// `t^k -> (1/sqrt(2 pi)) int e^(-t^2/2) (it)^k dt`, i.e. zero for odd `k` and
/// `(-1)^(k/2) (k-1)!!` for even `k`.
pub fn gaussian_moment(p: &TPolynomial) -> Rational {
    let mut acc = Rational::new();
    for (k, c) in p.coeffs.iter().enumerate() {
        if k % 2 == 1 || *c == 0 {
            continue;
        }
        let half = (k / 2) as u32;
        let mut moment = Rational::from(odd_double_factorial(half));
        if half % 2 == 1 {
            moment = -moment;
        }
        acc += moment * c;
    }
    acc
}

/// The weight attached to `(it)^j y^(j-2)` in the exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Weights {
    /// `1/j!` (circle contour).
    Factorial,
    /// `1/j` (vertical line contour).
    Reciprocal,
}

impl Weights {
    pub fn weight(self, j: usize) -> Rational {
        match self {
            Weights::Factorial => Rational::from((Integer::from(1), factorial(j as u32))),
            Weights::Reciprocal => Rational::from((1, j as i64)),
        }
    }
}

/// Power series in `y` with [`TPolynomial`] coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct BivariateSeries {
    y_coeffs: Vec<TPolynomial>,
}

impl BivariateSeries {
    /// `exp(sum_{j>=3} w_j t^j y^(j-2))` modulo `y^order`.
    pub fn exponential(weights: Weights, order: usize) -> Self {
        let mut f: Vec<TPolynomial> = Vec::with_capacity(order);
        if order == 0 {
            return BivariateSeries { y_coeffs: f };
        }
        f.push(TPolynomial::one());
        // exponent coefficient of y^k is w_{k+2} t^{k+2}, so
        // n F_n = sum_k k w_{k+2} t^{k+2} F_{n-k}
        let w: Vec<Rational> = (0..order + 2).map(|j| weights.weight(j.max(1))).collect();
        for n in 1..order {
            let mut acc = TPolynomial::default();
            for k in 1..=n {
                let scale = Rational::from(&w[k + 2] * k as i64) / n as i64;
                acc.add_assign_scaled_shift(&f[n - k], &scale, k + 2);
            }
            f.push(acc);
        }
        BivariateSeries { y_coeffs: f }
    }

    pub fn order(&self) -> usize {
        self.y_coeffs.len()
    }

    pub fn y_coefficient(&self, m: usize) -> Option<&TPolynomial> {
        self.y_coeffs.get(m)
    }

    pub fn y_coeffs(&self) -> &[TPolynomial] {
        &self.y_coeffs
    }
}

fn moments(weights: Weights, max_m: usize) -> Vec<Rational> {
    BivariateSeries::exponential(weights, max_m + 1)
        .y_coeffs
        .iter()
        .map(gaussian_moment)
        .collect()
}

/// `c_m` through the bivariate exponential with `1/j!` weights.
pub fn c_coeff(m: usize) -> Rational {
    moments(Weights::Factorial, m).swap_remove(m)
}

/// `d_m` through the bivariate exponential with `1/j` weights.
pub fn d_coeff(m: usize) -> Rational {
    moments(Weights::Reciprocal, m).swap_remove(m)
}

/// `c_0 ..= c_max`.
pub fn c_coeffs(max_m: usize) -> Vec<Rational> {
    moments(Weights::Factorial, max_m)
}

/// `d_0 ..= d_max`.
pub fn d_coeffs(max_m: usize) -> Vec<Rational> {
    moments(Weights::Reciprocal, max_m)
}

/// `c_{2l}` as the double sum over multiplicity vectors
/// `(j_1, .., j_{2l})` with `sum i j_i = 2l` and `sum j_i = h`.
pub fn c_explicit(l: usize) -> Rational {
    explicit_sum(l, Weights::Factorial)
}

/// `d_{2l}` by the same double sum with `1/(i+2)` in place of `1/(i+2)!`.
pub fn d_explicit(l: usize) -> Rational {
    explicit_sum(l, Weights::Reciprocal)
}

fn explicit_sum(l: usize, weights: Weights) -> Rational {
    if l == 0 {
        return Rational::from(1);
    }
    let total = 2 * l;
    // by_h[h] = sum over multiplicity vectors with h parts of
    //   prod_i w_{i+2}^{j_i} / j_i!
    let mut by_h = vec![Rational::new(); total + 1];
    let part_weights: Vec<Rational> = (0..=total).map(|i| weights.weight(i + 2)).collect();
    enumerate_parts(total, total, 0, Rational::from(1), &part_weights, &mut by_h);

    let mut sum = Rational::new();
    for (h, inner) in by_h.iter().enumerate().skip(1) {
        if *inner == 0 {
            continue;
        }
        let mut outer = Rational::from(odd_double_factorial((l + h) as u32));
        if (l + h) % 2 == 1 {
            outer = -outer;
        }
        sum += outer * inner;
    }
    sum
}

// Chooses the multiplicity of part `largest`, then recurses on smaller parts;
// the remaining sum and the part count are both pruned as we go.
fn enumerate_parts(
    remaining: usize,
    largest: usize,
    parts: usize,
    acc: Rational,
    w: &[Rational],
    by_h: &mut [Rational],
) {
    if remaining == 0 {
        by_h[parts] += acc;
        return;
    }
    if largest == 0 {
        return;
    }
    let mut term = acc;
    let mut j = 0usize;
    loop {
        enumerate_parts(remaining - j * largest, largest - 1, parts + j, term.clone(), w, by_h);
        j += 1;
        if j * largest > remaining {
            break;
        }
        term = term * &w[largest] / j as i64;
    }
}

/// `(t^2/2) / (e^t - 1 - t)` modulo `t^order`.
pub fn g_base(order: usize) -> ExactSeries {
    let n = order + 2;
    stock::monomial(n, 2, Rational::from((1, 2)))
        .div(&stock::expm1_minus_x(n))
        .expect("e^t-1-t has valuation 2")
}

/// `(y^2/2) / (y - log(1+y))` modulo `y^order`.
pub fn h_base(order: usize) -> ExactSeries {
    let n = order + 2;
    let y_minus_log = ExactSeries::variable(n, ()).sub(&stock::log1p(n));
    stock::monomial(n, 2, Rational::from((1, 2)))
        .div(&y_minus_log)
        .expect("y-log(1+y) has valuation 2")
}

fn lagrange_coeff(base: ExactSeries, m: usize) -> Rational {
    base.pow_half_integer(m as i64 + 1)
        .expect("base has unit constant term")
        .coefficient(m)
        .expect("order m+1")
        .clone()
}

/// `g_m = [t^m] ((t^2/2)/(e^t-1-t))^((m+1)/2)`.
pub fn g_coeff(m: usize) -> Rational {
    lagrange_coeff(g_base(m + 1), m)
}

/// `h_m = [y^m] ((y^2/2)/(y-log(1+y)))^((m+1)/2)`.
pub fn h_coeff(m: usize) -> Rational {
    lagrange_coeff(h_base(m + 1), m)
}

/// `c_{2m}` from `g_{2m}` via the Gaussian factor `(-1)^m (2m)!/(m! 2^m)`.
pub fn c_from_g(m: usize) -> Rational {
    g_coeff(2 * m) * gaussian_factor(m as u32)
}

/// `d_{2m}` from `h_{2m}`.
pub fn d_from_h(m: usize) -> Rational {
    h_coeff(2 * m) * gaussian_factor(m as u32)
}

/// `phi(s)^(m+1) / (1+s)` modulo `s^(m+1)`, where
/// `phi(s)^2 = s^2 / (2 (s - log(1+s)))`.
fn phi_power_over_one_plus(m: usize) -> ExactSeries {
    let order = m + 1;
    let power = h_base(order)
        .pow_half_integer(m as i64 + 1)
        .expect("unit constant term");
    let alternating = ExactSeries::from_fn(order, (), |k| {
        Rational::from(if k % 2 == 0 { 1 } else { -1 })
    });
    power.mul(&alternating)
}

/// `[s^(m-1)] phi(s)^(m+1)/(1+s)`, which vanishes for every `m != 1`.
pub fn zero_lemma_check(m: usize) -> Rational {
    if m == 0 {
        return Rational::new();
    }
    phi_power_over_one_plus(m).coefficient(m - 1).unwrap().clone()
}

/// `[s^m] phi(s)^(m+1)/(1+s)`, the `s = e^t - 1` rewriting of `g_m`.
pub fn g_via_phi_s(m: usize) -> Rational {
    phi_power_over_one_plus(m).coefficient(m).unwrap().clone()
}

/// `g_0 ..= g_max` read off `du/dv`, where `u(v)` is obtained by series
/// reversion of `v = u sqrt(2(e^u-1-u))/u` (the branch with `u ~ v`).
pub fn g_by_reversion(max_m: usize) -> Result<Vec<Rational>> {
    let n = max_m + 1;
    // w(u) = (e^u-1-u)/(u^2/2), order n+1
    let w = stock::expm1_minus_x(n + 3).div(&stock::monomial(n + 3, 2, Rational::from((1, 2))))?;
    let v_of_u = w.pow_half_integer(1)?.shift_up(1).truncate(n + 1);
    let u_of_v = v_of_u.reversion()?;
    Ok(u_of_v.derivative().into_coeffs())
}

/// Which Stirling expansion to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StirlingVariant {
    /// `e^n n^(-n-1/2) / sqrt(2 pi) * sum c_{2m} n^(-m)`.
    Circle,
    /// `e^(n+1) (n+1)^(-n-1/2) / sqrt(2 pi) * sum d_{2m} (n+1)^(-m)`.
    Line,
}

/// Partial sum through `m = terms` of the asymptotic expansion of `1/n!`.
pub fn stirling_eval(n: u32, terms: usize, variant: StirlingVariant, prec: Precision) -> Float {
    let p = prec.bits();
    let (scale, coeffs) = match variant {
        StirlingVariant::Circle => (Float::with_val(p, n), c_coeffs(2 * terms)),
        StirlingVariant::Line => (Float::with_val(p, n + 1), d_coeffs(2 * terms)),
    };
    let mut sum = Float::with_val(p, 0);
    let mut power = Float::with_val(p, 1);
    for m in 0..=terms {
        sum += Float::with_val(p, &coeffs[2 * m] * &power);
        power /= &scale;
    }
    // e^x x^(-n-1/2) / sqrt(2 pi)
    let log_prefactor = Float::with_val(p, &scale)
        - Float::with_val(p, Float::with_val(p, n) + 0.5) * Float::with_val(p, scale.ln_ref())
        - Float::with_val(p, prec.pi() * 2u32).ln() / 2u32;
    Float::with_val(p, log_prefactor.exp() * sum)
}

/// The four families side by side, `m = 0 ..= max_m`.
#[derive(Clone, Debug, PartialEq)]
pub struct StirlingCoefficientTable {
    pub c: Vec<Rational>,
    pub d: Vec<Rational>,
    pub g: Vec<Rational>,
    pub h: Vec<Rational>,
}

/// One failed identity in a [`StirlingCoefficientTable`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdentityViolation {
    CNotD(usize),
    OddNonzero(usize),
    GNotH(usize),
}

impl StirlingCoefficientTable {
    pub fn compute(max_m: usize) -> Self {
        let ((c, d), (g, h)) = rayon::join(
            || rayon::join(|| c_coeffs(max_m), || d_coeffs(max_m)),
            || {
                rayon::join(
                    || (0..=max_m).into_par_iter().map(g_coeff).collect(),
                    || (0..=max_m).into_par_iter().map(h_coeff).collect(),
                )
            },
        );
        StirlingCoefficientTable { c, d, g, h }
    }

    pub fn max_m(&self) -> usize {
        self.c.len() - 1
    }

    pub fn violations(&self) -> Vec<IdentityViolation> {
        let mut out = Vec::new();
        for m in 0..=self.max_m() {
            if self.c[m] != self.d[m] {
                out.push(IdentityViolation::CNotD(m));
            }
            if m % 2 == 1 && (self.c[m] != 0 || self.d[m] != 0) {
                out.push(IdentityViolation::OddNonzero(m));
            }
            if m != 1 && self.g[m] != self.h[m] {
                out.push(IdentityViolation::GNotH(m));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::from((p, d))
    }

    #[test]
    fn gaussian_moment_examples() {
        assert_eq!(gaussian_moment(&TPolynomial::one()), 1);
        assert_eq!(gaussian_moment(&TPolynomial::monomial(2, q(1, 1))), -1);
        assert_eq!(gaussian_moment(&TPolynomial::monomial(4, q(1, 1))), 3);
        assert_eq!(gaussian_moment(&TPolynomial::monomial(3, q(1, 1))), 0);
        assert_eq!(gaussian_moment(&TPolynomial::monomial(6, q(2, 1))), -30);
    }

    #[test]
    fn c_and_d_small_values() {
        assert_eq!(c_coeff(0), 1);
        assert_eq!(c_coeff(1), 0);
        assert_eq!(c_coeff(2), q(-1, 12));
        assert_eq!(c_coeff(4), q(1, 288));
        assert_eq!(c_coeff(10), q(-163879, 209018880));
        assert_eq!(d_coeff(0), 1);
        assert_eq!(d_coeff(2), q(-1, 12));
        assert_eq!(d_coeff(3), 0);
    }

    #[test]
    fn explicit_double_sum() {
        assert_eq!(c_explicit(0), 1);
        assert_eq!(c_explicit(1), q(-1, 12));
        assert_eq!(c_explicit(2), q(1, 288));
        assert_eq!(c_explicit(3), q(139, 51840));
        assert_eq!(d_explicit(3), q(139, 51840));
    }

    #[test]
    fn g_and_h_table() {
        let g = [
            q(1, 1),
            q(-1, 3),
            q(1, 12),
            q(-2, 135),
            q(1, 864),
            q(1, 2835),
            q(-139, 777600),
            q(1, 25515),
            q(-571, 261273600),
            q(-281, 151559100),
        ];
        for (m, expected) in g.iter().enumerate() {
            assert_eq!(g_coeff(m), *expected, "g_{m}");
            if m != 1 {
                assert_eq!(h_coeff(m), *expected, "h_{m}");
            }
        }
        assert_eq!(h_coeff(1), q(2, 3));
    }

    #[test]
    fn from_g_factor() {
        assert_eq!(c_from_g(0), 1);
        assert_eq!(c_from_g(2), q(1, 288));
        assert_eq!(c_from_g(3), q(139, 51840));
        assert_eq!(d_from_h(3), q(139, 51840));
    }

    #[test]
    fn zero_lemma() {
        assert_eq!(zero_lemma_check(0), 0);
        assert_eq!(zero_lemma_check(1), 1);
        for m in 2..12 {
            assert_eq!(zero_lemma_check(m), 0, "m = {m}");
        }
    }

    #[test]
    fn phi_composed_with_expm1_matches_g_base() {
        // phi(e^t - 1)^2 = g_base(t) * ((e^t - 1)/t)^2
        let n = 12;
        let phi_sq = h_base(n);
        let lhs = phi_sq.compose(&stock::expm1(n)).unwrap();
        let ratio = stock::expm1(n + 1).shift_down(1);
        let rhs = g_base(n).mul(&ratio.mul(&ratio));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn reversion_route_agrees_with_lagrange_route() {
        let via_reversion = g_by_reversion(12).unwrap();
        assert!(via_reversion.len() >= 13);
        for m in 0..=12 {
            assert_eq!(via_reversion[m], g_coeff(m), "g_{m}");
        }
    }

    #[test]
    fn bivariate_parity() {
        for weights in [Weights::Factorial, Weights::Reciprocal] {
            let b = BivariateSeries::exponential(weights, 14);
            for (m, p) in b.y_coeffs().iter().enumerate() {
                assert!(p.support().all(|k| k % 2 == m % 2));
                if let Some(deg) = p.degree() {
                    assert!(deg <= 3 * m);
                }
            }
        }
    }

    #[test]
    fn stirling_leading_term() {
        let prec = Precision::DEFAULT;
        let approx = stirling_eval(10, 0, StirlingVariant::Circle, prec);
        let fact = Float::with_val(256, factorial(10));
        let rel = Float::with_val(256, &approx * &fact) - 1u32;
        // relative error is close to c_2/n in magnitude
        assert!((rel.to_f64() - 1.0 / 120.0).abs() < 1.5e-3, "{rel}");

        let line = stirling_eval(1, 0, StirlingVariant::Line, prec);
        let expected = (2f64).exp() * 2f64.powf(-1.5) / (2.0 * std::f64::consts::PI).sqrt();
        assert!((line.to_f64() - expected).abs() < 1e-12);
        assert!((line.to_f64() - 1.0428).abs() < 1e-3);
    }

    #[test]
    fn stirling_three_terms_both_variants() {
        let prec = Precision::DEFAULT;
        let fact = Float::with_val(256, factorial(10));
        let bound = 10.0 * (571.0 / 2488320.0) * 1e-4;
        for v in [StirlingVariant::Circle, StirlingVariant::Line] {
            let approx = stirling_eval(10, 3, v, prec);
            let err = (Float::with_val(256, &approx * &fact) - 1u32).abs();
            assert!(err.to_f64() <= bound, "{v:?}: {err}");
        }
    }

    #[test]
    fn table_has_no_violations() {
        let t = StirlingCoefficientTable::compute(16);
        assert!(t.violations().is_empty());
        assert_eq!(t.g[1], q(-1, 3));
        assert_eq!(t.h[1], q(2, 3));
    }
}
