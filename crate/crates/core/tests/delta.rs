use saddle_core::delta::{delta_sweep, sweep_csv, Normalization};
use saddle_core::phi::CatalogPhi;
use saddle_core::saddle::Contour;
use saddle_core::scalar::Precision;

const P: Precision = Precision(256);

#[test]
fn deltas_are_finite_and_nonnegative_over_sweep_ranges() {
    let ranges = [
        (CatalogPhi::Idempotent, 20, 200, 9),
        (CatalogPhi::Bell, 15, 200, 5),
        (CatalogPhi::OrderedSets, 10, 200, 10),
        (CatalogPhi::Involutions, 100, 200, 5),
        (CatalogPhi::Identity, 10, 200, 19),
    ];
    for (phi, from, to, step) in ranges {
        let rows = delta_sweep(phi, from, to, step, 4, P).unwrap();
        for r in &rows {
            assert!(r.delta.is_finite() && !r.delta.is_sign_negative(), "{phi} n={} M={}", r.n, r.m);
            assert_eq!(r.normalization, Normalization::for_phi(phi));
        }
    }
}

#[test]
fn idempotent_sweep_row_count() {
    let rows = delta_sweep(CatalogPhi::Idempotent, 20, 200, 1, 4, P).unwrap();
    assert_eq!(rows.len(), 2 * 181 * 5);
    assert_eq!(rows[0].contour, Contour::Circle);
    assert_eq!(rows[1].contour, Contour::Line);
}

#[test]
fn csv_is_reproducible() {
    let a = sweep_csv(&delta_sweep(CatalogPhi::Bell, 15, 40, 5, 2, P).unwrap());
    let b = sweep_csv(&delta_sweep(CatalogPhi::Bell, 15, 40, 5, 2, P).unwrap());
    assert_eq!(a, b);
    assert!(a.starts_with("phi,n,M,variant,delta\n"));
    let fields = a.lines().nth(1).unwrap().split(',').count();
    assert_eq!(fields, 5);
}
