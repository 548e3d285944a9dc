//! Normalized error of truncated saddle expansions,
//!
//! `Delta_{n,M} = N(n, M) |[z^n] e^phi / prefactor - sum_{m <= M} c_m kappa_2^(-m)|`,
//!
//! and CSV sweeps over `(n, M, contour)`.

use std::fmt::Write as _;

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::oracles;
use crate::phi::CatalogPhi;
use crate::saddle::{self, Contour, SaddleError};
use crate::scalar::{render_decimal, Precision};

/// Digits written to CSV.
pub const CSV_DIGITS: usize = 30;

/// How `Delta` is scaled so that the curves stay of order one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Normalization {
    /// `(n / log n)^(M+1)`
    NOverLog,
    /// `n^((M+1)/2)`
    SqrtN,
    /// `n^(M+1)`
    N,
}

impl Normalization {
    pub fn for_phi(phi: CatalogPhi) -> Self {
        match phi {
            CatalogPhi::Idempotent | CatalogPhi::Bell => Normalization::NOverLog,
            CatalogPhi::OrderedSets => Normalization::SqrtN,
            CatalogPhi::Involutions | CatalogPhi::Identity => Normalization::N,
        }
    }

    pub fn factor(self, n: u64, m: usize, p: u32) -> Float {
        let nf = Float::with_val(p, n);
        let base = match self {
            Normalization::NOverLog => Float::with_val(p, &nf / Float::with_val(p, nf.ln_ref())),
            Normalization::SqrtN => nf.sqrt(),
            Normalization::N => nf,
        };
        Float::with_val(p, base.pow(m as u32 + 1))
    }

    pub fn label(self) -> &'static str {
        match self {
            Normalization::NOverLog => "(n/log n)^(M+1)",
            Normalization::SqrtN => "n^((M+1)/2)",
            Normalization::N => "n^(M+1)",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeltaRow {
    pub phi: CatalogPhi,
    pub n: u64,
    pub m: usize,
    pub contour: Contour,
    pub normalization: Normalization,
    pub delta: Float,
}

impl DeltaRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.phi.key(),
            self.n,
            self.m,
            self.contour.tag(),
            render_decimal(&self.delta, CSV_DIGITS)
        )
    }
}

/// `[z^n] e^(phi(z))`, exactly.
pub fn exact_coefficient(phi: CatalogPhi, n: u64) -> Rational {
    let an = oracles::recurrence_an_table(phi, n as usize).swap_remove(n as usize);
    Rational::from((an, Integer::from(Integer::factorial(n as u32))))
}

fn delta_rows_from_exact(
    phi: CatalogPhi,
    n: u64,
    max_m: usize,
    contour: Contour,
    exact: &Rational,
    prec: Precision,
) -> Result<Vec<DeltaRow>, SaddleError> {
    let guarded = prec.with_guard(64).bits();
    let p = prec.bits();
    let res = saddle::expand(&phi, n, max_m, contour, prec)?;
    // one exact-to-float conversion, with guard bits, before dividing
    let target = Float::with_val(guarded, exact);
    let ratio = Float::with_val(p, target / Float::with_val(guarded, &res.prefactor));
    let norm = Normalization::for_phi(phi);
    Ok((0..=max_m)
        .map(|m| {
            let diff = Float::with_val(p, &ratio - res.normalized_partial_sum(m)).abs();
            DeltaRow {
                phi,
                n,
                m,
                contour,
                normalization: norm,
                delta: diff * norm.factor(n, m, p),
            }
        })
        .collect())
}

/// `Delta_{n,M}` for one contour.
pub fn delta(phi: CatalogPhi, n: u64, m: usize, contour: Contour, prec: Precision) -> Result<DeltaRow, SaddleError> {
    assert!(n >= 3, "delta needs n >= 3");
    let exact = exact_coefficient(phi, n);
    Ok(delta_rows_from_exact(phi, n, m, contour, &exact, prec)?.swap_remove(m))
}

/// Rows for every `n` in `n_from ..= n_to` (step `step`), every `M <= max_m`
/// and both contours, ordered by `n`, then `M`, then circle before line.
pub fn delta_sweep(
    phi: CatalogPhi,
    n_from: u64,
    n_to: u64,
    step: u64,
    max_m: usize,
    prec: Precision,
) -> Result<Vec<DeltaRow>, SaddleError> {
    assert!(n_from >= 3 && n_from <= n_to && step >= 1, "bad sweep range");
    let table = oracles::recurrence_an_table(phi, n_to as usize);
    let ns: Vec<u64> = (n_from..=n_to).step_by(step as usize).collect();
    let cells: Vec<(u64, Contour)> = ns
        .iter()
        .flat_map(|&n| Contour::BOTH.into_iter().map(move |c| (n, c)))
        .collect();
    let mut rows = cells
        .par_iter()
        .map(|&(n, contour)| {
            let exact = Rational::from((
                table[n as usize].clone(),
                Integer::from(Integer::factorial(n as u32)),
            ));
            delta_rows_from_exact(phi, n, max_m, contour, &exact, prec)
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect::<Vec<_>>();
    rows.sort_by_key(|r| (r.n, r.m, r.contour == Contour::Line));
    Ok(rows)
}

/// CSV text for a sweep. The involution sweep carries an extra
/// `delta_diff = Delta^(c) - Delta^(v)` column, repeated on both rows of a pair.
pub fn sweep_csv(rows: &[DeltaRow]) -> String {
    let with_diff = rows.first().is_some_and(|r| r.phi == CatalogPhi::Involutions);
    let mut out = String::from("phi,n,M,variant,delta");
    if with_diff {
        out.push_str(",delta_diff");
    }
    out.push('\n');
    for row in rows {
        out.push_str(&row.csv_line());
        if with_diff {
            let other = rows
                .iter()
                .find(|r| r.n == row.n && r.m == row.m && r.contour != row.contour);
            let diff = other.map(|o| match row.contour {
                Contour::Circle => Float::with_val(row.delta.prec(), &row.delta - &o.delta),
                Contour::Line => Float::with_val(row.delta.prec(), &o.delta - &row.delta),
            });
            let _ = write!(
                out,
                ",{}",
                diff.map(|d| render_decimal(&d, CSV_DIGITS)).unwrap_or_default()
            );
        }
        out.push('\n');
    }
    out
}

/// Fraction of sampled `n` at which `Delta^(c) < Delta^(v)` for the given `M`.
pub fn circle_wins_fraction(rows: &[DeltaRow], m: usize) -> f64 {
    let mut wins = 0usize;
    let mut total = 0usize;
    for c in rows.iter().filter(|r| r.m == m && r.contour == Contour::Circle) {
        if let Some(v) = rows
            .iter()
            .find(|r| r.n == c.n && r.m == m && r.contour == Contour::Line)
        {
            total += 1;
            if c.delta < v.delta {
                wins += 1;
            }
        }
    }
    if total == 0 {
        0.0
    } else {
        wins as f64 / total as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: Precision = Precision(256);

    #[test]
    fn normalizations_follow_the_catalog() {
        assert_eq!(Normalization::for_phi(CatalogPhi::Bell), Normalization::NOverLog);
        assert_eq!(Normalization::for_phi(CatalogPhi::OrderedSets), Normalization::SqrtN);
        assert_eq!(Normalization::for_phi(CatalogPhi::Involutions), Normalization::N);
        let f = Normalization::SqrtN.factor(16, 1, 128);
        assert_eq!(f, 16);
    }

    #[test]
    fn deltas_are_finite_and_nonnegative() {
        for phi in CatalogPhi::ALL {
            for contour in Contour::BOTH {
                let row = delta(phi, 30, 2, contour, P).unwrap();
                assert!(row.delta.is_finite() && !row.delta.is_sign_negative(), "{phi} {contour}");
            }
        }
    }

    #[test]
    fn line_beats_circle_for_idempotents_at_m0() {
        let c = delta(CatalogPhi::Idempotent, 100, 0, Contour::Circle, P).unwrap();
        let v = delta(CatalogPhi::Idempotent, 100, 0, Contour::Line, P).unwrap();
        assert!(v.delta < c.delta);
    }

    #[test]
    fn circle_beats_line_for_ordered_sets_at_m2() {
        let c = delta(CatalogPhi::OrderedSets, 100, 2, Contour::Circle, P).unwrap();
        let v = delta(CatalogPhi::OrderedSets, 100, 2, Contour::Line, P).unwrap();
        assert!(c.delta < v.delta);
    }

    #[test]
    fn involution_curves_stay_within_a_factor_two() {
        for m in 1..=3 {
            let c = delta(CatalogPhi::Involutions, 100, m, Contour::Circle, P).unwrap();
            let v = delta(CatalogPhi::Involutions, 100, m, Contour::Line, P).unwrap();
            let ratio = Float::with_val(256, &c.delta / &v.delta).to_f64();
            assert!((0.5..2.0).contains(&ratio), "M={m}: {ratio}");
        }
    }

    #[test]
    fn sweep_is_ordered_and_deterministic() {
        let a = delta_sweep(CatalogPhi::Involutions, 100, 110, 5, 1, P).unwrap();
        let b = delta_sweep(CatalogPhi::Involutions, 100, 110, 5, 1, P).unwrap();
        assert_eq!(a.len(), 3 * 2 * 2);
        assert_eq!(sweep_csv(&a), sweep_csv(&b));
        let csv = sweep_csv(&a);
        assert!(csv.starts_with("phi,n,M,variant,delta,delta_diff\n"));
        assert!(csv.lines().nth(1).unwrap().starts_with("involutions,100,0,c,"));
        assert!(!csv.contains('\r'));
    }
}
