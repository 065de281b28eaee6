use landaucap_core::chebyshev::{capacity, capacity_estimate, chebyshev_polynomial, solve_on_points, SampleRule};
use landaucap_core::region::{Point, Region};
use landaucap_core::Error;
use num_complex::Complex64;
use proptest::prelude::*;

#[test]
fn segment_chebyshev_norm() {
    // on [-1, 1] the monic Chebyshev polynomial has norm 2^{1-n}; the grid
    // holds every extremum for n dividing 120
    let pts: Vec<Complex64> = (0..=120)
        .map(|k| Complex64::new((std::f64::consts::PI * k as f64 / 120.0).cos(), 0.0))
        .collect();
    for n in [2, 3, 5, 8] {
        let r = solve_on_points(&pts, n, 1e-6).unwrap();
        assert!(r.converged);
        let exact = 2f64.powi(1 - n as i32);
        assert!((r.sup_norm() - exact).abs() <= 1e-5 * exact, "n = {n}: {}", r.sup_norm());
    }
}

#[test]
fn square_capacity_near_closed_form() {
    // Γ(1/4)²/(4π^{3/2})
    let exact = 0.590_170_299_508_048_9;
    let c = capacity(&Region::unit_square()).unwrap();
    assert!((c - exact).abs() < 5e-3 * exact, "{c}");
}

#[test]
fn ladder_rejects_bad_degrees() {
    let d = Region::unit_square();
    assert!(matches!(
        capacity_estimate(&d, &[4, 4, 8], SampleRule::PerDegree(16), 1e-4),
        Err(Error::InvalidArgument(_))
    ));
}

#[test]
fn too_few_converged_degrees() {
    let d = Region::unit_square();
    assert!(matches!(
        capacity_estimate(&d, &[1, 2], SampleRule::PerDegree(16), 1e-4),
        Err(Error::TooFewConverged { .. })
    ));
}

#[test]
fn t_n_zeros_in_square_hull() {
    let sq = Region::unit_square();
    let hull = sq.convex_hull();
    for n in [3, 6, 10] {
        let t = chebyshev_polynomial(&sq, n, 16 * n, 1e-4).unwrap();
        for z in t.zeros().unwrap() {
            assert!(hull.contains(z) || hull.distance_to_boundary(z) <= 1e-3, "n = {n}, {z}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn disc_capacity_is_radius(x in -2.0..2.0f64, y in -2.0..2.0f64, r in 0.2..3.0f64) {
        let d = Region::disc(Point::new(x, y), r).unwrap();
        let e = capacity_estimate(&d, &[4, 8, 12, 16], SampleRule::PerDegree(16), 1e-4).unwrap();
        prop_assert!((e.extrapolated - r).abs() <= 0.02 * r);
    }

    #[test]
    fn polygon_capacity_scales(alpha in 0.5..3.0f64) {
        let base = Region::rectangle(0.0, 1.0, 0.0, 0.5).unwrap();
        let degrees = [4, 8, 12, 16];
        let a = capacity_estimate(&base, &degrees, SampleRule::PerDegree(16), 1e-4).unwrap();
        let b = capacity_estimate(&base.affine(alpha, Point::new(0.3, 0.0)), &degrees, SampleRule::PerDegree(16), 1e-4)
            .unwrap();
        let ratio = b.extrapolated / a.extrapolated;
        prop_assert!((ratio - alpha).abs() <= 0.01 * alpha, "{ratio} vs {alpha}");
    }
}
