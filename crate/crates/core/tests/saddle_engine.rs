use proptest::prelude::*;
use rug::Float;

use saddle_core::phi::{CatalogPhi, PhiSpec};
use saddle_core::saddle::{
    c1_c2_closed, coeff_saddle, cumulants, cumulants_circle, cumulants_line, expand, solve_saddle, Contour,
};
use saddle_core::scalar::Precision;
use saddle_core::stirling::{c_coeff, d_coeff};

const P: Precision = Precision(256);

fn rel(a: &Float, b: &Float) -> Float {
    let p = a.prec();
    Float::with_val(p, a - b).abs() / Float::with_val(p, b.abs_ref())
}

#[test]
fn saddle_residuals_are_tiny() {
    for phi in CatalogPhi::ALL {
        if phi == CatalogPhi::Identity {
            continue; // x phi'(x) = x, trivially exact
        }
        for t in [1u32, 10, 100, 1000] {
            let target = Float::with_val(256, t);
            let x = solve_saddle(&phi, &target, P).unwrap();
            let resid = Float::with_val(256, &x * phi.d1(&x)) - &target;
            let tol = P.pow2_neg(256 - 12) * &target;
            assert!(resid.abs() <= tol, "{phi} target {t}");
        }
    }
}

#[test]
fn identity_saddle_is_the_target() {
    let target = Float::with_val(256, 42);
    let x = solve_saddle(&CatalogPhi::Identity, &target, P).unwrap();
    assert!(rel(&x, &target) < 1e-70);
}

fn point_for(phi: CatalogPhi, u: f64) -> Float {
    // spread u in (0, 1) over a range that stays inside the disk of convergence
    let v = match phi.radius() {
        Some(rho) => rho * (0.02 + 0.95 * u),
        None => 0.05 + 40.0 * u,
    };
    Float::with_val(256, v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn lambda2_equals_kappa2(u in 0.0f64..1.0) {
        for phi in CatalogPhi::ALL {
            let x = point_for(phi, u);
            let target = Float::with_val(256, &x * phi.d1(&x));
            let k = cumulants_circle(&phi, &x, &target, 4).unwrap();
            let l = cumulants_line(&phi, &x, &target, 4).unwrap();
            let tol = P.pow2_neg(256 - 12);
            prop_assert!(rel(l.kappa2(), k.kappa2()) <= tol, "{} at {}", phi, u);
        }
    }
}

#[test]
fn identity_phi_reproduces_stirling_coefficients() {
    let half = P.pow2_neg(128);
    for x in [7.0, 50.0, 1000.0] {
        let x = Float::with_val(256, x);
        for m in 0..=6 {
            let circle = coeff_saddle(&CatalogPhi::Identity, &x, m, Contour::Circle).unwrap();
            let line = coeff_saddle(&CatalogPhi::Identity, &x, m, Contour::Line).unwrap();
            let c = Float::with_val(256, &c_coeff(2 * m));
            let d = Float::with_val(256, &d_coeff(2 * m));
            assert!(rel(&circle, &c) <= half, "circle m={m}");
            assert!(rel(&line, &d) <= half, "line m={m}");
        }
    }
}

#[test]
fn closed_forms_match_general_engine() {
    let half = P.pow2_neg(128);
    for phi in CatalogPhi::ALL {
        for n in [20u64, 100] {
            for contour in Contour::BOTH {
                let target = Float::with_val(256, contour.target(n));
                let x = solve_saddle(&phi, &target, P).unwrap();
                let cums = cumulants(&phi, contour, &x, &target, 6).unwrap();
                let (c1, c2) = c1_c2_closed(&cums);
                for (m, closed) in [(1, c1), (2, c2)] {
                    let general = coeff_saddle(&phi, &x, m, contour).unwrap();
                    let diff = Float::with_val(256, &closed - &general).abs();
                    let scale = Float::with_val(256, general.abs_ref()).max(&Float::with_val(256, 1e-30));
                    assert!(diff <= half.clone() * scale, "{phi} n={n} {contour} m={m}");
                }
            }
        }
    }
}

#[test]
fn terms_decay_at_n_200() {
    for phi in CatalogPhi::ALL {
        for contour in Contour::BOTH {
            let res = expand(&phi, 200, 4, contour, P).unwrap();
            for m in 0..=3 {
                assert!(
                    Float::with_val(256, res.terms[m + 1].abs_ref()) < Float::with_val(256, res.terms[m].abs_ref()),
                    "{phi} {contour} m={m}"
                );
            }
        }
    }
}

#[test]
fn ordered_sets_rejects_points_outside_the_disk() {
    let x = Float::with_val(256, 1.5);
    let t = Float::with_val(256, 3);
    assert!(cumulants_circle(&CatalogPhi::OrderedSets, &x, &t, 4).is_err());
}
