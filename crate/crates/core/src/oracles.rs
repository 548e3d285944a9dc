//! Exact ground truth: `a_n = n! [z^n] e^(phi(z))`, factorials, Catalan numbers
//! and Lagrangean coefficients.
//!
//! Every catalog sequence is available twice, once through series
//! exponentiation and once through its classical recurrence or closed form.

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::lagrangean::GSpec;
use crate::phi::{CatalogPhi, PhiSpec};
use crate::scalar;

/// One exact sequence term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceValue {
    pub n: u64,
    pub value: Rational,
}

impl SequenceValue {
    pub fn new(n: u64, value: impl Into<Rational>) -> Self {
        SequenceValue {
            n,
            value: value.into(),
        }
    }

    pub fn is_integer(&self) -> bool {
        *self.value.denom() == 1
    }

    pub fn integer(&self) -> Option<&Integer> {
        self.is_integer().then(|| self.value.numer())
    }
}

/// `n! [z^n] e^(phi(z))` for `n = 0 ..= n_max`, from one series exponential.
pub fn exact_an_table(phi: &dyn PhiSpec, n_max: usize) -> Vec<SequenceValue> {
    let e = phi
        .exact_series(n_max + 1)
        .exp()
        .expect("catalog phi vanishes at 0");
    e.coeffs()
        .iter()
        .enumerate()
        .map(|(n, c)| SequenceValue::new(n as u64, Rational::from(c * scalar::factorial(n as u32))))
        .collect()
}

/// `n! [z^n] e^(phi(z))`.
pub fn exact_an(phi: &dyn PhiSpec, n: usize) -> SequenceValue {
    exact_an_table(phi, n).swap_remove(n)
}

fn binomial(n: u64, k: u64) -> Integer {
    Integer::from(n).binomial(k as u32)
}

/// The same sequence from its recurrence or closed form, `n = 0 ..= n_max`.
pub fn recurrence_an_table(phi: CatalogPhi, n_max: usize) -> Vec<Integer> {
    match phi {
        CatalogPhi::Identity => vec![Integer::from(1); n_max + 1],
        CatalogPhi::Bell => {
            // B_{n+1} = sum_k C(n,k) B_k
            let mut b = vec![Integer::from(1)];
            for n in 0..n_max as u64 {
                let next = (0..=n).fold(Integer::new(), |acc, k| acc + binomial(n, k) * &b[k as usize]);
                b.push(next);
            }
            b
        }
        CatalogPhi::Idempotent => (0..=n_max as u64)
            .map(|n| {
                (0..=n).fold(Integer::new(), |acc, k| {
                    let power = Integer::from(k).pow((n - k) as u32);
                    acc + binomial(n, k) * power
                })
            })
            .collect(),
        CatalogPhi::OrderedSets => (0..=n_max as u64)
            .map(|n| {
                if n == 0 {
                    return Integer::from(1);
                }
                (1..=n).fold(Integer::new(), |acc, k| {
                    let falling = scalar::factorial(n as u32) / scalar::factorial(k as u32);
                    acc + falling * binomial(n - 1, k - 1)
                })
            })
            .collect(),
        CatalogPhi::Involutions => {
            let mut a = vec![Integer::from(1), Integer::from(1)];
            for n in 2..=n_max {
                let next = Integer::from(&a[n - 1]) + Integer::from(&a[n - 2] * (n as u64 - 1));
                a.push(next);
            }
            a.truncate(n_max + 1);
            a
        }
    }
}

pub fn factorial(n: u64) -> SequenceValue {
    SequenceValue::new(n, scalar::factorial(n as u32))
}

/// `(1/n) C(2n-2, n-1)` for `n >= 1`.
pub fn catalan(n: u64) -> SequenceValue {
    assert!(n >= 1, "catalan(n) needs n >= 1");
    SequenceValue::new(n, Rational::from((binomial(2 * n - 2, n - 1), Integer::from(n))))
}

/// `n [z^n] f = [t^(n-1)] G(t)^n` for `f = z G(f)`, exactly.
pub fn lagrangean_an(g: &dyn GSpec, n: u64) -> SequenceValue {
    assert!(n >= 1, "lagrangean_an needs n >= 1");
    let series = g.exact_series(n as usize);
    let value = series.powi(n as u32).coefficient(n as usize - 1).unwrap().clone();
    SequenceValue::new(n, value)
}

/// `[z^n] f`, the coefficient itself.
pub fn lagrangean_coefficient(g: &dyn GSpec, n: u64) -> SequenceValue {
    let scaled = lagrangean_an(g, n);
    SequenceValue::new(n, scaled.value / Integer::from(n))
}
