use rug::ops::Pow;
use rug::{Float, Integer};

use saddle_core::lagrangean::{
    b_asymptotic_check, catalan_expansions, check_subcriticality, lag_expand, sing_coeff, sing_expand,
    singularity_radius, CatalanVariant, LagrangeanG,
};
use saddle_core::oracles::catalan;
use saddle_core::scalar::{binomial_real, Precision};

const P: Precision = Precision(256);

#[test]
fn remainder_is_bounded_by_next_term() {
    let g = LagrangeanG::Catalan;
    for n in [50u64, 100, 200] {
        let res = lag_expand(&g, n, 5, P).unwrap();
        for m in 0..=4 {
            let bound = Float::with_val(256, res.terms[m + 1].abs_ref()) * 4u32;
            assert!(res.relative_error(m) <= bound, "n={n} M={m}");
        }
    }
}

#[test]
fn catalan_lag_and_sing_coincide() {
    let lag = catalan_expansions(50, 2, CatalanVariant::Lag, P).unwrap();
    let sing = catalan_expansions(50, 2, CatalanVariant::Sing, P).unwrap();
    let tol = P.pow2_neg(128);
    for (a, b) in lag.partial_sums.iter().zip(&sing.partial_sums) {
        let rel = Float::with_val(256, a - b).abs() / b;
        assert!(rel <= tol);
    }
}

#[test]
fn b_growth_law() {
    let report = b_asymptotic_check(31, P).unwrap();
    for row in report.rows.iter().filter(|r| r.m % 2 == 1 && r.m >= 11) {
        assert!(row.sign_matches, "m={}", row.m);
    }
    let last = report.rows.iter().find(|r| r.m == 31).unwrap();
    let r = last.ratio.to_f64();
    assert!((0.8..1.2).contains(&r), "{r}");
    assert!(report.divergent_at_one);
}

#[test]
fn catalan_singularity_data() {
    let rho = singularity_radius(&LagrangeanG::Catalan, P).unwrap();
    assert!(Float::with_val(256, rho - 0.25).abs() < 1e-70);
    // leading behavior of catalan(n) 4^(-n) against c_1 C(n - 3/2, n)
    let n = 200u64;
    let c1 = sing_coeff(&LagrangeanG::Catalan, 1, P).unwrap();
    let x = Float::with_val(256, n as f64 - 1.5);
    let approx = c1 * binomial_real(&x, n as u32);
    let exact = Float::with_val(256, &catalan(n).value) / Float::with_val(256, Integer::from(4).pow(n as u32));
    let rel = Float::with_val(256, &approx - &exact).abs() / &exact;
    assert!(rel < 0.05, "{rel}");
}

#[test]
fn singular_expansion_improves_with_terms() {
    for g in [LagrangeanG::Exponential, LagrangeanG::SquarePlus, LagrangeanG::Trinomial] {
        let res = sing_expand(&g, 80, 3, P).unwrap();
        let errs: Vec<f64> = (0..=3).map(|m| res.relative_error(m).to_f64()).collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{g}: {errs:?}");
    }
}

#[test]
fn test_functions_are_subcritical() {
    for g in LagrangeanG::ALL {
        let report = check_subcriticality(&g, 30).unwrap();
        assert!(report.passes(), "{g}: {report:?}");
    }
}
