use landaucap_core::mp::pi;
use landaucap_core::Error;
use landaucap_core::orthopoly::{monic_orthogonalize, rho_estimates, zeros, MonicOrthoBasis};
use landaucap_core::region::{Point, Region};
use landaucap_core::weight::{mixed_moments, MomentKind, Profile, Weight};
use proptest::prelude::*;
use rug::Float;

fn basis(w: &Weight, n: usize, prec: u32) -> MonicOrthoBasis {
    monic_orthogonalize(&mixed_moments(w, MomentKind::Plain, n, prec).unwrap()).unwrap()
}

fn log_m(b: &MonicOrthoBasis, n: usize) -> f64 {
    b.log_norms()[n].to_f64()
}

#[test]
fn off_center_disc_keeps_the_centered_norms() {
    // p_n(z) = (z − c)^n, so M_n does not depend on the center
    let w = Weight::indicator(Region::disc(Point::new(0.4, -0.3), 1.0).unwrap()).unwrap();
    let b = basis(&w, 20, 256);
    for n in 0..=20 {
        let exact = (std::f64::consts::PI / (n + 1) as f64).ln();
        assert!((log_m(&b, n) - exact).abs() < 1e-12, "n = {n}");
    }
    let c = b.coeff(2, 1).to_c64();
    assert!((c - Point::new(-0.8, 0.6)).norm() < 1e-12);
}

#[test]
fn power_profile_norms() {
    // ∫_{|z|<1} |z|^{2n+2} dm = π/(n+2)
    let w = Weight::radial(Region::disc(Point::new(0.0, 0.0), 1.0).unwrap(), Point::new(0.0, 0.0), Profile::Power(2))
        .unwrap();
    let b = basis(&w, 12, 128);
    for n in 0..=12 {
        let exact = Float::with_val(128, pi(128) / (n as u32 + 2)).ln().to_f64();
        assert!((log_m(&b, n) - exact).abs() < 1e-14);
    }
}

#[test]
fn orthogonality_of_square_basis() {
    let w = Weight::indicator(Region::unit_square()).unwrap();
    let t = mixed_moments(&w, MomentKind::Plain, 14, 256).unwrap();
    let b = monic_orthogonalize(&t).unwrap();
    assert!(b.orthogonality_defect(&t) < 1e-40);
}

#[test]
fn unit_disc_rho_estimate_near_one() {
    let w = Weight::indicator(Region::disc(Point::new(0.0, 0.0), 1.0).unwrap()).unwrap();
    let r = rho_estimates(&basis(&w, 40, 256), 10).unwrap();
    assert!((r.extrapolated.unwrap() - 1.0).abs() < 0.02);
    assert!(r.rho_plus_hat >= r.rho_minus_hat);
}

#[test]
fn short_window_is_rejected() {
    let w = Weight::indicator(Region::unit_square()).unwrap();
    assert!(rho_estimates(&basis(&w, 6, 128), 5).is_err());
}

#[test]
fn high_degree_at_low_precision_is_degenerate() {
    let w = Weight::indicator(Region::unit_square()).unwrap();
    let r = mixed_moments(&w, MomentKind::Plain, 60, 64).and_then(|t| monic_orthogonalize(&t));
    assert!(matches!(
        r,
        Err(Error::DegenerateMoments { .. } | Error::DegenerateMomentMatrix { .. })
    ));
}

fn small_region() -> impl Strategy<Value = Region> {
    prop_oneof![
        (-1.0..1.0f64, -1.0..1.0f64, 0.3..1.2f64).prop_map(|(x, y, r)| Region::disc(Point::new(x, y), r).unwrap()),
        (-1.0..0.0f64, 0.3..1.5f64, -1.0..0.0f64, 0.3..1.5f64)
            .prop_map(|(x0, w, y0, h)| Region::rectangle(x0, x0 + w, y0, y0 + h).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn zeros_lie_in_the_dilated_hull(r in small_region()) {
        let w = Weight::indicator(r.clone()).unwrap();
        let b = basis(&w, 10, 128);
        let hull = r.convex_hull();
        for n in 1..=10 {
            for root in zeros(&b, n).unwrap() {
                prop_assert!(hull.contains(root.z) || hull.distance_to_boundary(root.z) <= 1e-6,
                    "n = {n}, z = {}", root.z);
            }
        }
    }

    #[test]
    fn norms_drop_by_at_most_bounding_radius_squared(r in small_region()) {
        let w = Weight::indicator(r.clone()).unwrap();
        let b = basis(&w, 12, 128);
        let two_ln_r0 = 2.0 * r.bounding_radius().ln();
        for n in 0..12 {
            prop_assert!(log_m(&b, n + 1) - log_m(&b, n) <= two_ln_r0 + 1e-18);
        }
    }

    #[test]
    fn norms_are_monotone_in_the_weight(x0 in -1.0..0.0f64, w in 0.5..1.5f64, inset in 0.05..0.2f64) {
        let outer = Weight::indicator(Region::rectangle(x0, x0 + w, 0.0, w).unwrap()).unwrap();
        let inner = Weight::indicator(Region::rectangle(x0 + inset, x0 + w - inset, inset, w - inset).unwrap()).unwrap();
        let (bo, bi) = (basis(&outer, 10, 128), basis(&inner, 10, 128));
        for n in 0..=10 {
            prop_assert!(log_m(&bi, n) <= log_m(&bo, n));
        }
    }

    #[test]
    fn scaling_covariance_of_norms(r in small_region(), alpha in 0.5..2.5f64) {
        let w = Weight::indicator(r).unwrap();
        let s = w.affine(alpha, Point::new(0.0, 0.0)).unwrap();
        let (b, bs) = (basis(&w, 12, 128), basis(&s, 12, 128));
        for n in 0..=12 {
            let expected = log_m(&b, n) + (2 * n + 2) as f64 * alpha.ln();
            prop_assert!((log_m(&bs, n) - expected).abs() <= 1e-12 * expected.abs().max(1.0));
        }
    }
}
