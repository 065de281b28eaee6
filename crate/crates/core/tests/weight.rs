use approx::assert_relative_eq;
use landaucap_core::mp::pi;
use landaucap_core::region::{Point, Region};
use landaucap_core::weight::{mixed_moments, reduce_3d, MomentKind, Potential3D, Profile, ReduceSpec, Weight};
use proptest::prelude::*;
use rug::Float;

fn true_moment(t: &landaucap_core::weight::MomentTable, a: usize, b: usize) -> (f64, f64) {
    let c = t.unscaled(a, b).to_c64();
    (c.re, c.im)
}

#[test]
fn centered_disc_moments_are_diagonal() {
    let w = Weight::indicator(Region::disc(Point::new(0.0, 0.0), 1.5).unwrap()).unwrap();
    let t = mixed_moments(&w, MomentKind::Plain, 6, 128).unwrap();
    for a in 0..=6 {
        for b in 0..=6 {
            let (re, im) = true_moment(&t, a, b);
            if a == b {
                let exact = std::f64::consts::PI * 1.5f64.powi(2 * a as i32 + 2) / (a + 1) as f64;
                assert_relative_eq!(re, exact, max_relative = 1e-14);
            } else {
                assert!(re.abs() < 1e-14 && im.abs() < 1e-14);
            }
        }
    }
}

#[test]
fn power_profile_moments() {
    // ∫_{|z|<1} |z|^2 |z|^{2a} dm = π/(a+2)
    let w = Weight::radial(Region::disc(Point::new(0.0, 0.0), 1.0).unwrap(), Point::new(0.0, 0.0), Profile::Power(2))
        .unwrap();
    let t = mixed_moments(&w, MomentKind::Plain, 5, 128).unwrap();
    for a in 0..=5 {
        assert_relative_eq!(true_moment(&t, a, a).0, std::f64::consts::PI / (a + 2) as f64, max_relative = 1e-14);
    }
}

#[test]
fn low_moments_of_the_unit_square() {
    // ∫_{[0,1]²} z dm = (1+i)/2 ; ∫ |z|² dm = 2/3
    let w = Weight::indicator(Region::unit_square()).unwrap();
    let t = mixed_moments(&w, MomentKind::Plain, 2, 128).unwrap();
    let (re, im) = true_moment(&t, 1, 0);
    assert_relative_eq!(re, 0.5, max_relative = 1e-15);
    assert_relative_eq!(im, 0.5, max_relative = 1e-15);
    assert_relative_eq!(true_moment(&t, 1, 1).0, 2.0 / 3.0, max_relative = 1e-15);
}

#[test]
fn gaussian_moments_of_a_large_disc_approach_full_plane() {
    // ∫_C |z|^{2a} e^{-|z|²} dm = π a!
    let w = Weight::indicator(Region::disc(Point::new(0.0, 0.0), 12.0).unwrap()).unwrap();
    let t = mixed_moments(&w, MomentKind::Gaussian { b0: 2.0 }, 4, 256).unwrap();
    let mut fact = 1.0;
    for a in 0..=4 {
        if a > 0 {
            fact *= a as f64;
        }
        assert_relative_eq!(true_moment(&t, a, a).0, std::f64::consts::PI * fact, max_relative = 1e-14);
    }
}

#[test]
fn ball_reduction_is_chord_length() {
    let w = reduce_3d(&Potential3D::ball(1.0), &ReduceSpec::default()).unwrap();
    for r in [0.0, 0.25, 0.5, 0.75, 0.99] {
        assert_relative_eq!(w.eval(Point::new(0.0, r)), 2.0 * (1.0 - r * r).sqrt(), max_relative = 1e-12);
    }
    assert_eq!(w.eval(Point::new(1.5, 0.0)), 0.0);
    assert_eq!(w.support().capacity_known(), Some(1.0));
}

#[test]
fn rejects_bad_weights() {
    let d = Region::disc(Point::new(0.0, 0.0), 1.0).unwrap();
    let w = Weight::indicator(d).unwrap();
    assert!(w.affine(0.0, Point::new(0.0, 0.0)).is_err());
    assert!(w.affine(-1.0, Point::new(0.0, 0.0)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Pure scaling multiplies the (a, b) moment by α^{a+b+2}.
    #[test]
    fn scaling_covariance_of_moments(alpha in 0.3..3.0f64, cx in -1.0..1.0f64, cy in -1.0..1.0f64) {
        let base = Weight::indicator(Region::disc(Point::new(cx, cy), 0.8).unwrap()).unwrap();
        let scaled = base.affine(alpha, Point::new(0.0, 0.0)).unwrap();
        let prec = 128;
        let t0 = mixed_moments(&base, MomentKind::Plain, 4, prec).unwrap();
        let t1 = mixed_moments(&scaled, MomentKind::Plain, 4, prec).unwrap();
        for a in 0..=4 {
            for b in 0..=4 {
                let f = alpha.powi((a + b + 2) as i32);
                let x = t0.unscaled(a, b).to_c64() * f;
                let y = t1.unscaled(a, b).to_c64();
                prop_assert!((x - y).norm() <= 1e-12 * x.norm().max(1e-300) + 1e-14, "{a},{b}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn total_mass_of_a_disc(r in 0.1..3.0f64) {
        let w = Weight::indicator(Region::disc(Point::new(0.3, -0.2), r).unwrap()).unwrap();
        let t = mixed_moments(&w, MomentKind::Plain, 0, 128).unwrap();
        let exact = Float::with_val(128, pi(128) * r * r).to_f64();
        prop_assert!((t.unscaled(0, 0).to_c64().re - exact).abs() <= 1e-13 * exact);
    }
}
