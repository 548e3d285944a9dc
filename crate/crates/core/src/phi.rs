//! Catalog of exponents `phi` for coefficients `[z^n] e^(phi(z))`.

use std::fmt;
use std::str::FromStr;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::scalar::factorial;
use crate::series::{ExactSeries, FloatSeries};

/// What the saddle engine needs to know about an exponent `phi`.
pub trait PhiSpec: Sync {
    fn name(&self) -> &str;

    /// Taylor series of `phi` at the origin, modulo `z^order`.
    fn exact_series(&self, order: usize) -> ExactSeries;

    fn value(&self, x: &Float) -> Float;
    fn d1(&self, x: &Float) -> Float;
    fn d2(&self, x: &Float) -> Float;

    /// Taylor coefficients `phi^(k)(x)/k!` for `k < order`, from closed-form
    /// derivatives.
    fn taylor_at(&self, x: &Float, order: usize) -> FloatSeries;

    /// Radius of convergence at the origin; `None` for entire functions.
    fn radius(&self) -> Option<f64>;
}

/// The built-in exponents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CatalogPhi {
    /// `phi(z) = z`: `[z^n] e^z = 1/n!`.
    Identity,
    /// `phi(z) = e^z - 1`: Bell numbers.
    Bell,
    /// `phi(z) = z e^z`: idempotent maps.
    Idempotent,
    /// `phi(z) = z/(1-z)`: sets partitioned into ordered blocks.
    OrderedSets,
    /// `phi(z) = z + z^2/2`: involutions.
    Involutions,
}

impl CatalogPhi {
    pub const ALL: [CatalogPhi; 5] = [
        CatalogPhi::Identity,
        CatalogPhi::Bell,
        CatalogPhi::Idempotent,
        CatalogPhi::OrderedSets,
        CatalogPhi::Involutions,
    ];

    pub fn key(self) -> &'static str {
        match self {
            CatalogPhi::Identity => "stirling",
            CatalogPhi::Bell => "bell",
            CatalogPhi::Idempotent => "idempotent",
            CatalogPhi::OrderedSets => "ordered-sets",
            CatalogPhi::Involutions => "involutions",
        }
    }

    pub fn formula(self) -> &'static str {
        match self {
            CatalogPhi::Identity => "z",
            CatalogPhi::Bell => "e^z-1",
            CatalogPhi::Idempotent => "z*e^z",
            CatalogPhi::OrderedSets => "z/(1-z)",
            CatalogPhi::Involutions => "z+z^2/2",
        }
    }
}

impl fmt::Display for CatalogPhi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown phi `{0}` (expected one of stirling, bell, idempotent, ordered-sets, involutions)")]
pub struct UnknownPhi(pub String);

impl FromStr for CatalogPhi {
    type Err = UnknownPhi;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "stirling" | "identity" | "z" => CatalogPhi::Identity,
            "bell" | "a000110" => CatalogPhi::Bell,
            "idempotent" | "idempotents" | "a000248" => CatalogPhi::Idempotent,
            "ordered-sets" | "a000262" => CatalogPhi::OrderedSets,
            "involutions" | "involution" | "a000085" => CatalogPhi::Involutions,
            _ => return Err(UnknownPhi(s.to_string())),
        })
    }
}

fn inv_factorial(k: usize) -> Rational {
    Rational::from((Integer::from(1), factorial(k as u32)))
}

impl PhiSpec for CatalogPhi {
    fn name(&self) -> &str {
        self.key()
    }

    fn exact_series(&self, order: usize) -> ExactSeries {
        ExactSeries::from_fn(order, (), |k| match (self, k) {
            (_, 0) => Rational::new(),
            (CatalogPhi::Identity, 1) => Rational::from(1),
            (CatalogPhi::Identity, _) => Rational::new(),
            (CatalogPhi::Bell, k) => inv_factorial(k),
            (CatalogPhi::Idempotent, k) => inv_factorial(k - 1),
            (CatalogPhi::OrderedSets, _) => Rational::from(1),
            (CatalogPhi::Involutions, 1) => Rational::from(1),
            (CatalogPhi::Involutions, 2) => Rational::from((1, 2)),
            (CatalogPhi::Involutions, _) => Rational::new(),
        })
    }

    fn value(&self, x: &Float) -> Float {
        let p = x.prec();
        match self {
            CatalogPhi::Identity => x.clone(),
            CatalogPhi::Bell => Float::with_val(p, x.exp_m1_ref()),
            CatalogPhi::Idempotent => Float::with_val(p, x * Float::with_val(p, x.exp_ref())),
            CatalogPhi::OrderedSets => Float::with_val(p, x / Float::with_val(p, 1 - x)),
            CatalogPhi::Involutions => {
                Float::with_val(p, x + Float::with_val(p, x.square_ref()) / 2u32)
            }
        }
    }

    fn d1(&self, x: &Float) -> Float {
        let p = x.prec();
        match self {
            CatalogPhi::Identity => Float::with_val(p, 1),
            CatalogPhi::Bell => Float::with_val(p, x.exp_ref()),
            CatalogPhi::Idempotent => Float::with_val(p, x + 1u32) * Float::with_val(p, x.exp_ref()),
            CatalogPhi::OrderedSets => {
                let one_minus = Float::with_val(p, 1 - x);
                Float::with_val(p, one_minus.square_ref()).recip()
            }
            CatalogPhi::Involutions => Float::with_val(p, x + 1u32),
        }
    }

    fn d2(&self, x: &Float) -> Float {
        let p = x.prec();
        match self {
            CatalogPhi::Identity => Float::with_val(p, 0),
            CatalogPhi::Bell => Float::with_val(p, x.exp_ref()),
            CatalogPhi::Idempotent => Float::with_val(p, x + 2u32) * Float::with_val(p, x.exp_ref()),
            CatalogPhi::OrderedSets => {
                let one_minus = Float::with_val(p, 1 - x);
                Float::with_val(p, 2u32 / Float::with_val(p, one_minus.pow(3u32)))
            }
            CatalogPhi::Involutions => Float::with_val(p, 1),
        }
    }

    fn taylor_at(&self, x: &Float, order: usize) -> FloatSeries {
        let p = x.prec();
        let zero = || Float::with_val(p, 0);
        match self {
            CatalogPhi::Identity => FloatSeries::from_fn(order, p, |k| match k {
                0 => x.clone(),
                1 => Float::with_val(p, 1),
                _ => zero(),
            }),
            CatalogPhi::Bell => {
                let ex = Float::with_val(p, x.exp_ref());
                FloatSeries::from_fn(order, p, |k| match k {
                    0 => Float::with_val(p, x.exp_m1_ref()),
                    k => Float::with_val(p, &ex * &inv_factorial(k)),
                })
            }
            CatalogPhi::Idempotent => {
                // phi^(k)(x) = (x + k) e^x
                let ex = Float::with_val(p, x.exp_ref());
                FloatSeries::from_fn(order, p, |k| {
                    let d = Float::with_val(p, x + k as u32) * &ex;
                    Float::with_val(p, d * &inv_factorial(k))
                })
            }
            CatalogPhi::OrderedSets => {
                // phi^(k)(x)/k! = (1-x)^(-k-1) for k >= 1
                let inv = Float::with_val(p, 1 - x).recip();
                let mut power = Float::with_val(p, &inv);
                FloatSeries::from_fn(order, p, |k| {
                    if k == 0 {
                        Float::with_val(p, x * &inv)
                    } else {
                        power *= &inv;
                        power.clone()
                    }
                })
            }
            CatalogPhi::Involutions => FloatSeries::from_fn(order, p, |k| match k {
                0 => self.value(x),
                1 => Float::with_val(p, x + 1u32),
                2 => Float::with_val(p, 0.5),
                _ => zero(),
            }),
        }
    }

    fn radius(&self) -> Option<f64> {
        match self {
            CatalogPhi::OrderedSets => Some(1.0),
            _ => None,
        }
    }
}
