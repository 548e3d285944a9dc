//! Two-contour saddle-point expansions of `a_n = [z^n] e^(phi(z))`.
//!
//! The circle contour `z = r e^(i theta)` uses the saddle `r phi'(r) = n` and
//! the cumulants `kappa_j(r) = j! [s^j] phi(r e^s)`; the vertical line
//! `z = R(1 + i t)` uses `R phi'(R) = n + 1` and
//! `lambda_j(R) = (-1)^j (j-1)! R phi'(R) + j! [s^j] phi(R(1+s))`.
//! Both lead to the same Gaussian-moment machinery, fed by different
//! cumulants.

use std::fmt;
use std::str::FromStr;

use rug::{Float, Integer, Rational};
use thiserror::Error;

use crate::phi::PhiSpec;
use crate::scalar::{factorial, gaussian_factor, Precision};
use crate::series::{FloatSeries, SeriesError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SaddleError {
    #[error("no sign change of x*phi'(x) - {target} found for phi = {phi}")]
    NoBracket { phi: String, target: String },
    #[error("base point {point} lies outside the disk of convergence of {phi}")]
    Domain { phi: String, point: String },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

pub type Result<T> = std::result::Result<T, SaddleError>;

/// Which integration contour the expansion comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Contour {
    Circle,
    Line,
}

impl Contour {
    pub const BOTH: [Contour; 2] = [Contour::Circle, Contour::Line];

    /// Saddle equation right-hand side: `n` on the circle, `n + 1` on the line.
    pub fn target(self, n: u64) -> u64 {
        match self {
            Contour::Circle => n,
            Contour::Line => n + 1,
        }
    }

    /// `c` for the circle, `v` for the vertical line.
    pub fn tag(self) -> &'static str {
        match self {
            Contour::Circle => "c",
            Contour::Line => "v",
        }
    }
}

impl fmt::Display for Contour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Contour::Circle => "circle",
            Contour::Line => "line",
        })
    }
}

impl FromStr for Contour {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "circle" | "c" => Ok(Contour::Circle),
            "line" | "v" | "vertical" => Ok(Contour::Line),
            _ => Err(format!("unknown contour `{s}` (expected circle or line)")),
        }
    }
}

const NEWTON_CAP: usize = 200;

fn saddle_residual(phi: &dyn PhiSpec, x: &Float, target: &Float) -> Float {
    Float::with_val(x.prec(), x * phi.d1(x)) - target
}

/// Positive root of `x phi'(x) = target`.
///
/// A bracket is found by doubling (or by creeping towards the radius of
/// convergence), then Newton's method polishes the root, falling back to
/// bisection whenever a step leaves the bracket. Convergence is declared on
/// the step size.
pub fn solve_saddle(phi: &dyn PhiSpec, target: &Float, prec: Precision) -> Result<Float> {
    let p = prec.bits();
    let no_bracket = || SaddleError::NoBracket {
        phi: phi.name().to_string(),
        target: target.to_string_radix(10, Some(12)),
    };
    let mut lo = Float::with_val(p, 0);
    let mut hi = match phi.radius() {
        Some(rho) => {
            let rho = Float::with_val(p, rho);
            let mut k = 1;
            loop {
                let candidate = Float::with_val(p, &rho * (1 - prec.pow2_neg(k)));
                if saddle_residual(phi, &candidate, target) > 0 {
                    break candidate;
                }
                k += 1;
                if k as u32 > p {
                    return Err(no_bracket());
                }
            }
        }
        None => {
            let mut candidate = Float::with_val(p, 1);
            let mut doublings = 0;
            while saddle_residual(phi, &candidate, target) <= 0 {
                lo = candidate.clone();
                candidate *= 2u32;
                doublings += 1;
                if doublings > 4096 {
                    return Err(no_bracket());
                }
            }
            candidate
        }
    };

    let tol = prec.pow2_neg(p as i32 - 8);
    let mut x = Float::with_val(p, &lo + &hi) / 2u32;
    for _ in 0..NEWTON_CAP {
        let f = saddle_residual(phi, &x, target);
        if f.is_zero() {
            return Ok(x);
        }
        if f < 0 {
            lo = x.clone();
        } else {
            hi = x.clone();
        }
        let slope = Float::with_val(p, phi.d1(&x) + Float::with_val(p, &x * phi.d2(&x)));
        let mut next = Float::with_val(p, &x - Float::with_val(p, &f / &slope));
        if !(next >= lo && next <= hi) {
            next = Float::with_val(p, &lo + &hi) / 2u32;
        }
        let step = Float::with_val(p, &next - &x).abs();
        x = next;
        if step <= Float::with_val(p, &tol * &x) {
            return Ok(x);
        }
    }
    Ok(x)
}

/// `kappa_1 ..= kappa_J` (or `lambda_*`) at a base point.
#[derive(Clone, Debug, PartialEq)]
pub struct CumulantSequence {
    pub contour: Contour,
    pub base_point: Float,
    /// Right-hand side of the saddle equation the base point is meant to solve.
    pub target: Float,
    /// `values[j]` is the `j`-th cumulant; `values[0]` is unused and zero and
    /// `values[1]` is the saddle residual.
    values: Vec<Float>,
}

impl CumulantSequence {
    pub fn get(&self, j: usize) -> &Float {
        &self.values[j]
    }

    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    pub fn kappa2(&self) -> &Float {
        &self.values[2]
    }

    /// Cumulants from explicit values; `values[0]` is ignored.
    pub fn from_values(contour: Contour, base_point: Float, target: Float, values: Vec<Float>) -> Self {
        CumulantSequence {
            contour,
            base_point,
            target,
            values,
        }
    }
}

fn check_domain(phi: &dyn PhiSpec, x: &Float) -> Result<()> {
    if x.is_sign_negative() || x.is_zero() || phi.radius().is_some_and(|rho| *x >= rho) {
        return Err(SaddleError::Domain {
            phi: phi.name().to_string(),
            point: x.to_string_radix(10, Some(12)),
        });
    }
    Ok(())
}

fn factorial_f(j: usize, p: u32) -> Float {
    Float::with_val(p, factorial(j as u32))
}

/// `kappa_j(r) = j! [s^j] phi(r e^s)` for `2 <= j <= max_j`, via composition of
/// the Taylor series at `r` with `r (e^s - 1)`.
pub fn cumulants_circle(
    phi: &dyn PhiSpec,
    r: &Float,
    target: &Float,
    max_j: usize,
) -> Result<CumulantSequence> {
    check_domain(phi, r)?;
    let p = r.prec();
    let order = max_j + 1;
    let taylor = phi.taylor_at(r, order);
    let inner = FloatSeries::from_fn(order, p, |k| {
        if k == 0 {
            Float::with_val(p, 0)
        } else {
            Float::with_val(p, r / factorial_f(k, p))
        }
    });
    let composed = taylor.compose(&inner)?;
    let mut values = Vec::with_capacity(order);
    values.push(Float::with_val(p, 0));
    values.push(saddle_residual(phi, r, target));
    for j in 2..=max_j {
        values.push(Float::with_val(p, &composed.coeffs()[j] * factorial_f(j, p)));
    }
    Ok(CumulantSequence {
        contour: Contour::Circle,
        base_point: r.clone(),
        target: target.clone(),
        values,
    })
}

/// `lambda_j(R) = (-1)^j (j-1)! R phi'(R) + j! R^j phi^(j)(R)/j!`.
pub fn cumulants_line(
    phi: &dyn PhiSpec,
    big_r: &Float,
    target: &Float,
    max_j: usize,
) -> Result<CumulantSequence> {
    check_domain(phi, big_r)?;
    let p = big_r.prec();
    let order = max_j + 1;
    let scaled = phi.taylor_at(big_r, order).scale_variable(big_r);
    let r_dphi = Float::with_val(p, big_r * phi.d1(big_r));
    let mut values = Vec::with_capacity(order);
    values.push(Float::with_val(p, 0));
    values.push(saddle_residual(phi, big_r, target));
    for j in 2..=max_j {
        let mut log_part = Float::with_val(p, &r_dphi * factorial_f(j - 1, p));
        if j % 2 == 1 {
            log_part = -log_part;
        }
        let local = Float::with_val(p, &scaled.coeffs()[j] * factorial_f(j, p));
        values.push(log_part + local);
    }
    Ok(CumulantSequence {
        contour: Contour::Line,
        base_point: big_r.clone(),
        target: target.clone(),
        values,
    })
}

/// Cumulants for either contour.
pub fn cumulants(
    phi: &dyn PhiSpec,
    contour: Contour,
    x: &Float,
    target: &Float,
    max_j: usize,
) -> Result<CumulantSequence> {
    match contour {
        Contour::Circle => cumulants_circle(phi, x, target, max_j),
        Contour::Line => cumulants_line(phi, x, target, max_j),
    }
}

/// `c_m` (or `d_m`) from cumulants through index `2m + 2`:
/// `g_{2m} = [v^(2m)] ((kappa_2 v^2/2) / sum_{j>=2} kappa_j v^j / j!)^((2m+1)/2)`
/// times `(-1)^m (2m)!/(m! 2^m)`.
pub fn coeff_from_cumulants(cums: &CumulantSequence, m: usize) -> Result<Float> {
    let p = cums.kappa2().prec();
    let order = 2 * m + 3;
    assert!(cums.max_index() + 1 >= order, "need cumulants through 2m+2");
    let den = FloatSeries::from_fn(order, p, |j| {
        if j < 2 {
            Float::with_val(p, 0)
        } else {
            Float::with_val(p, cums.get(j) / factorial_f(j, p))
        }
    });
    let half_kappa2 = Float::with_val(p, cums.kappa2() / 2u32);
    let num = FloatSeries::from_fn(order, p, |j| {
        if j == 2 {
            half_kappa2.clone()
        } else {
            Float::with_val(p, 0)
        }
    });
    let base = num.div(&den)?;
    let g = base
        .pow_half_integer(2 * m as i64 + 1)?
        .coefficient(2 * m)?
        .clone();
    Ok(Float::with_val(p, g * &gaussian_factor(m as u32)))
}

/// `c_m(x)` on the circle or `d_m(x)` on the line at the base point `x`.
pub fn coeff_saddle(
    phi: &dyn PhiSpec,
    x: &Float,
    m: usize,
    contour: Contour,
) -> Result<Float> {
    let p = x.prec();
    let target = Float::with_val(p, x * phi.d1(x));
    let cums = cumulants(phi, contour, x, &target, 2 * m + 2)?;
    coeff_from_cumulants(&cums, m)
}

/// The displayed closed forms for the first two correction coefficients.
pub fn c1_c2_closed(cums: &CumulantSequence) -> (Float, Float) {
    let p = cums.kappa2().prec();
    let k = |j: usize| cums.get(j);
    let f = |v: Float| v;
    let k2 = k(2);
    let k2_sq = Float::with_val(p, k2.square_ref());
    let k3_sq = Float::with_val(p, k(3).square_ref());

    let c1_num = f(Float::with_val(p, k2 * k(4)) * 3u32) - f(Float::with_val(p, &k3_sq * 5u32));
    let c1 = c1_num / Float::with_val(p, &k2_sq * 24u32);

    let k2_cu = Float::with_val(p, &k2_sq * k2);
    let t1 = Float::with_val(p, &k2_cu * k(6)) * 24u32;
    let t2 = Float::with_val(p, &k2_sq * k(3)) * k(5) * 168u32;
    let t3 = Float::with_val(p, &k2_sq * Float::with_val(p, k(4).square_ref())) * 105u32;
    let t4 = Float::with_val(p, k2 * &k3_sq) * k(4) * 630u32;
    let t5 = Float::with_val(p, k3_sq.square_ref()) * 385u32;
    let c2_num = t1 - t2 - t3 + t4 - t5;
    let k2_4 = Float::with_val(p, k2_sq.square_ref());
    let c2 = -(c2_num / (k2_4 * 1152u32));
    (c1, c2)
}

/// Saddle point, prefactor, and the term table of one expansion.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionResult {
    pub contour: Contour,
    pub n: u64,
    /// `n` on the circle, `n + 1` on the line.
    pub target: u64,
    pub saddle: Float,
    pub kappa2: Float,
    /// `x^(-n) e^(phi(x)) / sqrt(2 pi kappa_2)`.
    pub prefactor: Float,
    /// `c_m(r)` or `d_m(R)` for `m = 0 ..= M`.
    pub coefficients: Vec<Float>,
    /// `coefficients[m] * kappa_2^(-m)`.
    pub terms: Vec<Float>,
    /// `prefactor * sum_{m' <= m} terms[m']`.
    pub partial_sums: Vec<Float>,
    pub precision: Precision,
}

impl ExpansionResult {
    /// `sum_{m' <= m} terms[m']`, without the prefactor.
    pub fn normalized_partial_sum(&self, m: usize) -> Float {
        let p = self.precision.bits();
        self.terms[..=m]
            .iter()
            .fold(Float::with_val(p, 0), |acc, t| acc + t)
    }

    pub fn max_terms(&self) -> usize {
        self.terms.len() - 1
    }
}

/// Log of the prefactor `x^(-n) e^(phi(x)) / sqrt(2 pi kappa_2)`.
pub fn log_prefactor(phi: &dyn PhiSpec, x: &Float, n: u64, kappa2: &Float) -> Float {
    let p = x.prec();
    let two_pi_kappa = Float::with_val(p, Precision(p).pi() * kappa2) * 2u32;
    phi.value(x) - Float::with_val(p, Float::with_val(p, x.ln_ref()) * n)
        - Float::with_val(p, two_pi_kappa.ln()) / 2u32
}

/// The expansion of `[z^n] e^(phi(z))` through `m = max_terms` along the given
/// contour.
pub fn expand(
    phi: &dyn PhiSpec,
    n: u64,
    max_terms: usize,
    contour: Contour,
    prec: Precision,
) -> Result<ExpansionResult> {
    let p = prec.bits();
    let target_int = contour.target(n);
    let target = Float::with_val(p, target_int);
    let x = solve_saddle(phi, &target, prec)?;
    let cums = cumulants(phi, contour, &x, &target, 2 * max_terms + 2)?;
    let kappa2 = cums.kappa2().clone();
    let prefactor = log_prefactor(phi, &x, n, &kappa2).exp();

    let mut coefficients = Vec::with_capacity(max_terms + 1);
    let mut terms = Vec::with_capacity(max_terms + 1);
    let mut partial_sums = Vec::with_capacity(max_terms + 1);
    let mut power = Float::with_val(p, 1);
    let mut running = Float::with_val(p, 0);
    for m in 0..=max_terms {
        let c = coeff_from_cumulants(&cums, m)?;
        let term = Float::with_val(p, &c * &power);
        running += &term;
        partial_sums.push(Float::with_val(p, &running * &prefactor));
        coefficients.push(c);
        terms.push(term);
        power /= &kappa2;
    }
    Ok(ExpansionResult {
        contour,
        n,
        target: target_int,
        saddle: x,
        kappa2,
        prefactor,
        coefficients,
        terms,
        partial_sums,
        precision: prec,
    })
}

/// Relative error `|approx / exact - 1|` of a float against an exact rational.
pub fn relative_error(approx: &Float, exact: &Rational) -> Float {
    let p = approx.prec();
    let e = Float::with_val(p, exact);
    (Float::with_val(p, approx / &e) - 1u32).abs()
}

/// `n!` as a float.
pub fn factorial_float(n: u32, p: u32) -> Float {
    Float::with_val(p, Integer::from(Integer::factorial(n)))
}
