use landaucap_core::region::{Point, Region};
use proptest::prelude::*;

fn pt() -> impl Strategy<Value = Point> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(x, y)| Point::new(x, y))
}

fn shapes() -> impl Strategy<Value = Region> {
    prop_oneof![
        (pt(), 0.2..2.0f64).prop_map(|(c, r)| Region::disc(c, r).unwrap()),
        (pt(), 0.1..0.9f64, 1.0..2.0f64).prop_map(|(c, a, b)| Region::annulus(c, a, b).unwrap()),
        (-2.0..0.0f64, 0.1..2.0f64, -2.0..0.0f64, 0.1..2.0f64)
            .prop_map(|(x0, w, y0, h)| Region::rectangle(x0, x0 + w, y0, y0 + h).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn affine_image_preserves_membership(r in shapes(), z in pt(), alpha in 0.2..4.0f64, s in pt()) {
        let img = r.affine(alpha, s);
        // skip points on the boundary where rounding may flip membership
        prop_assume!(r.distance_to_boundary(z) > 1e-9);
        prop_assert_eq!(r.contains(z), img.contains(z * alpha + s));
    }

    #[test]
    fn dilation_contains_the_region_and_its_margin(r in shapes(), z in pt(), delta in 0.01..0.5f64) {
        let d = r.dilate(delta).unwrap();
        if r.contains(z) {
            prop_assert!(d.contains(z));
        } else if r.distance_to_boundary(z) < 0.99 * delta {
            prop_assert!(d.contains(z));
        }
    }

    #[test]
    fn hull_contains_region(r in shapes(), z in pt()) {
        if r.contains(z) {
            let h = r.convex_hull();
            prop_assert!(h.contains(z) || h.distance_to_boundary(z) < 1e-9);
        }
    }

    #[test]
    fn bounding_radius_bounds_boundary(r in shapes()) {
        let big = r.bounding_radius();
        for z in r.boundary_points(64) {
            prop_assert!(z.norm() <= big * (1.0 + 1e-12));
        }
    }
}

#[test]
fn disc_capacity_is_its_radius() {
    let d = Region::disc(Point::new(1.0, -2.0), 0.7).unwrap();
    assert_eq!(d.capacity_known(), Some(0.7));
    assert_eq!(Region::unit_square().capacity_known(), None);
}

#[test]
fn rejects_degenerate_shapes() {
    assert!(Region::disc(Point::new(0.0, 0.0), 0.0).is_err());
    assert!(Region::annulus(Point::new(0.0, 0.0), 1.0, 0.5).is_err());
    assert!(Region::polygon(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0)]).is_err());
}

#[test]
fn json_round_trip() {
    let r = Region::annulus(Point::new(0.5, 0.25), 0.5, 1.0).unwrap();
    let back: Region = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(back.to_json(), r.to_json());
}
