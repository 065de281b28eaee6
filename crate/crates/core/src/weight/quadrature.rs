//! Cubature rules on discs, annuli, polygons and disjoint unions.

use rug::Float;

use crate::error::{Error, Result};
use crate::mp::{pi, Cplx, Real};
use crate::region::{triangulate, Point, Region};
use crate::special::gauss_legendre;

#[derive(Clone, Debug)]
pub struct QuadNode {
    pub z: Cplx,
    pub w: Real,
}

/// Nodes and positive weights integrating every polynomial in (z, z̄) of
/// total degree ≤ `degree` over the region exactly (up to rounding at `prec`
/// bits).
///
/// Discs and annuli use a polar tensor rule: Gauss–Legendre in the radius
/// with ⌈(D+2)/2⌉ nodes, D+1 equispaced angles. Polygons are cut into
/// triangles by ear clipping and each triangle gets a collapsed
/// (Duffy) Gauss product rule. Union parts must have disjoint interiors.
pub fn quadrature(region: &Region, degree: usize, prec: u32) -> Result<Vec<QuadNode>> {
    let mut out = Vec::new();
    push_rule(region, degree, prec, &mut out)?;
    Ok(out)
}

pub fn quadrature_f64(region: &Region, degree: usize) -> Result<Vec<(Point, f64)>> {
    Ok(quadrature(region, degree, 64)?
        .into_iter()
        .map(|q| (q.z.to_c64(), q.w.to_f64()))
        .collect())
}

fn push_rule(region: &Region, degree: usize, prec: u32, out: &mut Vec<QuadNode>) -> Result<()> {
    match region {
        Region::Disc { center, radius } => {
            polar_rule(*center, 0.0, *radius, degree, prec, out);
            Ok(())
        }
        Region::Annulus {
            center,
            inner_radius,
            outer_radius,
        } => {
            polar_rule(*center, *inner_radius, *outer_radius, degree, prec, out);
            Ok(())
        }
        Region::Polygon { vertices } => {
            for tri in triangulate(vertices) {
                triangle_rule(&tri, degree, prec, out);
            }
            Ok(())
        }
        Region::Union { parts } => {
            for i in 0..parts.len() {
                for j in (i + 1)..parts.len() {
                    if parts[i].interiors_overlap(&parts[j]) {
                        return Err(Error::OverlappingUnion);
                    }
                }
            }
            for p in parts {
                push_rule(p, degree, prec, out)?;
            }
            Ok(())
        }
    }
}

fn polar_rule(center: Point, r0: f64, r1: f64, degree: usize, prec: u32, out: &mut Vec<QuadNode>) {
    let k = degree / 2 + 1;
    let m = degree + 1;
    let rule = gauss_legendre(k, prec);
    let c = Cplx::from_c64(prec, center);
    let lo = Float::with_val(prec, r0);
    let hi = Float::with_val(prec, r1);
    let half = Float::with_val(prec, &hi - &lo) / 2u32;
    let mid = Float::with_val(prec, &hi + &lo) / 2u32;
    let two_pi = pi(prec) * 2u32;
    let dtheta = Float::with_val(prec, &two_pi / m as u32);
    let dirs: Vec<Cplx> = (0..m)
        .map(|j| Cplx::cis(&Float::with_val(prec, &dtheta * j as u32)))
        .collect();
    for (x, w) in rule.0.iter().zip(&rule.1) {
        let rho = Float::with_val(prec, &mid + Float::with_val(prec, &half * x));
        // ρ dρ dθ
        let mut wr = Float::with_val(prec, w * &half);
        wr *= &rho;
        wr *= &dtheta;
        for d in &dirs {
            out.push(QuadNode {
                z: &c + &d.scale(&rho),
                w: wr.clone(),
            });
        }
    }
}

fn triangle_rule(tri: &[Point; 3], degree: usize, prec: u32, out: &mut Vec<QuadNode>) {
    // x = A + u(B − A) + uv(C − B), dx = u |det(B − A, C − B)| du dv
    let ku = degree / 2 + 1;
    let kv = (degree + 1) / 2 + 1;
    let ru = gauss_legendre(ku, prec);
    let rv = gauss_legendre(kv, prec);
    let a = Cplx::from_c64(prec, tri[0]);
    let b = Cplx::from_c64(prec, tri[1]);
    let c = Cplx::from_c64(prec, tri[2]);
    let ab = &b - &a;
    let bc = &c - &b;
    let mut det = Float::with_val(prec, &ab.re * &bc.im);
    det -= Float::with_val(prec, &ab.im * &bc.re);
    let det = det.abs();
    let to_unit = |x: &Real| Float::with_val(prec, x + 1u32) / 2u32;
    for (xu, wu) in ru.0.iter().zip(&ru.1) {
        let u = to_unit(xu);
        let base = &a + &ab.scale(&u);
        let mut wuu = Float::with_val(prec, wu * &u);
        wuu *= &det;
        wuu /= 4u32;
        for (xv, wv) in rv.0.iter().zip(&rv.1) {
            let v = to_unit(xv);
            let uv = Float::with_val(prec, &u * &v);
            out.push(QuadNode {
                z: &base + &bc.scale(&uv),
                w: Float::with_val(prec, &wuu * wv),
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;
    use std::f64::consts::PI;

    fn integrate(nodes: &[QuadNode], f: impl Fn(&Cplx) -> Cplx) -> Cplx {
        let prec = nodes[0].w.prec();
        let mut acc = Cplx::zero(prec);
        for q in nodes {
            acc.add_mul_real(&f(&q.z), &q.w);
        }
        acc
    }

    #[test]
    fn disc_area_to_twenty_digits() {
        let d = Region::disc(Point::new(0.0, 0.0), 1.0).unwrap();
        let nodes = quadrature(&d, 2, 128).unwrap();
        let area = integrate(&nodes, |_| Cplx::one(128));
        let err = Float::with_val(128, &area.re - pi(128)).abs() / pi(128);
        assert!(err < 1e-20);
        let second = integrate(&quadrature(&d, 4, 128).unwrap(), |z| {
            Cplx::from_real(z.norm_sqr())
        });
        let half_pi = pi(128) / 2u32;
        assert!(Float::with_val(128, &second.re - &half_pi).abs() < 1e-30);
    }

    #[test]
    fn square_area() {
        let nodes = quadrature(&Region::unit_square(), 3, 128).unwrap();
        let area = integrate(&nodes, |_| Cplx::one(128));
        assert!(Float::with_val(128, &area.re - 1u32).abs() < 1e-30);
    }

    #[test]
    fn polygon_rule_is_exact_for_monomials() {
        // ∫_{[0,1]^2} x^i y^j = 1/((i+1)(j+1)); check z^a z̄^b via real expansion
        let sq = Region::unit_square();
        let deg = 9;
        let nodes = quadrature(&sq, deg, 128).unwrap();
        for i in 0..=deg {
            for j in 0..=(deg - i) {
                let v = integrate(&nodes, |z| {
                    Cplx::from_real(
                        Float::with_val(128, z.re.clone().pow(i as u32))
                            * Float::with_val(128, z.im.clone().pow(j as u32)),
                    )
                });
                let exact = 1.0 / ((i + 1) * (j + 1)) as f64;
                assert!((v.re.to_f64() - exact).abs() < 1e-15, "{i} {j}");
            }
        }
    }

    #[test]
    fn nonconvex_polygon_area() {
        let l = Region::polygon(vec![
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(2.0, 1.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 2.0),
            Point::new(0.0, 2.0),
        ])
        .unwrap();
        let nodes = quadrature_f64(&l, 4).unwrap();
        let area: f64 = nodes.iter().map(|(_, w)| w).sum();
        assert!((area - 3.0).abs() < 1e-14);
        // ∫ x dA: 2 from [0,2]×[0,1] plus 0.5 from [0,1]×[1,2]
        let mx: f64 = nodes.iter().map(|(z, w)| w * z.re).sum();
        assert!((mx - 2.5).abs() < 1e-14);
    }

    #[test]
    fn annulus_and_union() {
        let a = Region::annulus(Point::new(1.0, 1.0), 0.5, 1.0).unwrap();
        let nodes = quadrature_f64(&a, 6).unwrap();
        let area: f64 = nodes.iter().map(|(_, w)| w).sum();
        assert!((area - 0.75 * PI).abs() < 1e-14);
        let u = Region::union(vec![
            Region::disc(Point::new(-2.0, 0.0), 1.0).unwrap(),
            Region::disc(Point::new(2.0, 0.0), 1.0).unwrap(),
        ])
        .unwrap();
        let area: f64 = quadrature_f64(&u, 2).unwrap().iter().map(|(_, w)| w).sum();
        assert!((area - 2.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn overlapping_union_is_rejected() {
        let u = Region::union(vec![
            Region::disc(Point::new(0.0, 0.0), 1.0).unwrap(),
            Region::disc(Point::new(1.0, 0.0), 1.0).unwrap(),
        ])
        .unwrap();
        let err = quadrature(&u, 2, 64).unwrap_err();
        assert_eq!(err, Error::OverlappingUnion);
        assert_eq!(
            err.to_string(),
            "union parts must be pairwise disjoint for quadrature"
        );
    }
}
