//! Compact planar regions: discs, annuli, simple polygons and finite unions.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Point = Complex64;

/// Number of vertices of the polygon circumscribing a disc in [`Region::convex_hull`].
/// Vertices sit at radius r/cos(π/4096) ≈ r(1 + 2.9e-7).
pub const DISC_HULL_VERTICES: usize = 4096;

/// Relative overshoot allowed when a corner arc is replaced by circumscribed chords.
pub const ARC_CHORD_SLACK: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Repr", into = "Repr")]
pub enum Region {
    Disc {
        center: Point,
        radius: f64,
    },
    Annulus {
        center: Point,
        inner_radius: f64,
        outer_radius: f64,
    },
    /// Simple polygon, vertices stored counterclockwise.
    Polygon { vertices: Vec<Point> },
    Union { parts: Vec<Region> },
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
enum Repr {
    Disc {
        #[serde(default)]
        center: [f64; 2],
        radius: f64,
    },
    Annulus {
        #[serde(default)]
        center: [f64; 2],
        #[serde(alias = "inner")]
        inner_radius: f64,
        #[serde(alias = "outer")]
        outer_radius: f64,
    },
    Polygon {
        vertices: Vec<[f64; 2]>,
    },
    Union {
        parts: Vec<Repr>,
    },
}

fn pt(p: [f64; 2]) -> Point {
    Point::new(p[0], p[1])
}

fn arr(p: Point) -> [f64; 2] {
    [p.re, p.im]
}

impl TryFrom<Repr> for Region {
    type Error = Error;
    fn try_from(r: Repr) -> Result<Region> {
        match r {
            Repr::Disc { center, radius } => Region::disc(pt(center), radius),
            Repr::Annulus {
                center,
                inner_radius,
                outer_radius,
            } => Region::annulus(pt(center), inner_radius, outer_radius),
            Repr::Polygon { vertices } => Region::polygon(vertices.into_iter().map(pt).collect()),
            Repr::Union { parts } => Region::union(
                parts
                    .into_iter()
                    .map(Region::try_from)
                    .collect::<Result<Vec<_>>>()?,
            ),
        }
    }
}

impl From<Region> for Repr {
    fn from(r: Region) -> Repr {
        match r {
            Region::Disc { center, radius } => Repr::Disc {
                center: arr(center),
                radius,
            },
            Region::Annulus {
                center,
                inner_radius,
                outer_radius,
            } => Repr::Annulus {
                center: arr(center),
                inner_radius,
                outer_radius,
            },
            Region::Polygon { vertices } => Repr::Polygon {
                vertices: vertices.into_iter().map(arr).collect(),
            },
            Region::Union { parts } => Repr::Union {
                parts: parts.into_iter().map(Repr::from).collect(),
            },
        }
    }
}

fn finite(z: Point) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

fn cross(a: Point, b: Point) -> f64 {
    a.re * b.im - a.im * b.re
}

fn dot(a: Point, b: Point) -> f64 {
    a.re * b.re + a.im * b.im
}

fn signed_area(v: &[Point]) -> f64 {
    let n = v.len();
    (0..n).map(|i| cross(v[i], v[(i + 1) % n])).sum::<f64>() / 2.0
}

fn segment_distance(z: Point, a: Point, b: Point) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    let t = if len2 == 0.0 {
        0.0
    } else {
        (dot(z - a, d) / len2).clamp(0.0, 1.0)
    };
    (z - (a + d * t)).norm()
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    cross(b - a, c - a)
}

fn segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on = |a: Point, b: Point, c: Point, o: f64| {
        o == 0.0
            && c.re >= a.re.min(b.re)
            && c.re <= a.re.max(b.re)
            && c.im >= a.im.min(b.im)
            && c.im <= a.im.max(b.im)
    };
    on(q1, q2, p1, d1) || on(q1, q2, p2, d2) || on(p1, p2, q1, d3) || on(p1, p2, q2, d4)
}

/// True when no two non-adjacent edges of the closed polygon meet.
pub fn is_simple(v: &[Point]) -> bool {
    let n = v.len();
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        for j in (i + 1)..n {
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            if segments_intersect(a, b, v[j], v[(j + 1) % n]) {
                return false;
            }
        }
    }
    true
}

/// Andrew's monotone chain; counterclockwise, starting from the lowest-x point,
/// collinear points dropped.
fn monotone_chain(mut pts: Vec<Point>) -> Vec<Point> {
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

fn circle_points(center: Point, radius: f64, m: usize) -> Vec<Point> {
    (0..m)
        .map(|k| center + Point::from_polar(radius, 2.0 * PI * k as f64 / m as f64))
        .collect()
}

impl Region {
    pub fn disc(center: Point, radius: f64) -> Result<Region> {
        if !(radius > 0.0 && radius.is_finite()) || !finite(center) {
            return Err(Error::InvalidRegion(format!(
                "disc radius must be positive and finite, got {radius}"
            )));
        }
        Ok(Region::Disc { center, radius })
    }

    pub fn annulus(center: Point, inner_radius: f64, outer_radius: f64) -> Result<Region> {
        if !(inner_radius > 0.0 && inner_radius < outer_radius && outer_radius.is_finite())
            || !finite(center)
        {
            return Err(Error::InvalidRegion(format!(
                "annulus needs 0 < inner < outer, got {inner_radius}, {outer_radius}"
            )));
        }
        Ok(Region::Annulus {
            center,
            inner_radius,
            outer_radius,
        })
    }

    /// Accepts either orientation and stores the vertices counterclockwise.
    pub fn polygon(mut vertices: Vec<Point>) -> Result<Region> {
        if vertices.len() >= 2 && vertices.first() == vertices.last() {
            vertices.pop();
        }
        if vertices.len() < 3 {
            return Err(Error::InvalidRegion("polygon needs at least 3 vertices".into()));
        }
        if !vertices.iter().all(|&z| finite(z)) {
            return Err(Error::InvalidRegion("polygon vertex is not finite".into()));
        }
        let n = vertices.len();
        if (0..n).any(|i| vertices[i] == vertices[(i + 1) % n]) {
            return Err(Error::InvalidRegion("polygon has repeated consecutive vertices".into()));
        }
        let area = signed_area(&vertices);
        if area == 0.0 {
            return Err(Error::InvalidRegion("polygon has zero area".into()));
        }
        if !is_simple(&vertices) {
            return Err(Error::InvalidRegion("polygon is self-intersecting".into()));
        }
        if area < 0.0 {
            vertices.reverse();
        }
        Ok(Region::Polygon { vertices })
    }

    pub fn union(parts: Vec<Region>) -> Result<Region> {
        if parts.is_empty() {
            return Err(Error::InvalidRegion("union needs at least one part".into()));
        }
        Ok(Region::Union { parts })
    }

    /// Axis-aligned rectangle [x0, x1] × [y0, y1].
    pub fn rectangle(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Region> {
        Region::polygon(vec![
            Point::new(x0, y0),
            Point::new(x1, y0),
            Point::new(x1, y1),
            Point::new(x0, y1),
        ])
    }

    /// Unit square [0, 1]².
    pub fn unit_square() -> Region {
        Region::rectangle(0.0, 1.0, 0.0, 1.0).unwrap()
    }

    /// Membership tolerance: 1e-12 relative to the region's size.
    fn tolerance(&self) -> f64 {
        1e-12 * self.bounding_radius().max(1.0)
    }

    pub fn contains(&self, z: Point) -> bool {
        let eps = self.tolerance();
        self.contains_tol(z, eps)
    }

    fn contains_tol(&self, z: Point, eps: f64) -> bool {
        match self {
            Region::Disc { center, radius } => (z - center).norm() <= radius + eps,
            Region::Annulus {
                center,
                inner_radius,
                outer_radius,
            } => {
                let d = (z - center).norm();
                d >= inner_radius - eps && d <= outer_radius + eps
            }
            Region::Polygon { vertices } => {
                point_in_polygon(vertices, z) || polygon_boundary_distance(vertices, z) <= eps
            }
            Region::Union { parts } => parts.iter().any(|p| p.contains_tol(z, eps)),
        }
    }

    /// Inside and farther than the membership tolerance from the boundary.
    pub fn strictly_contains(&self, z: Point) -> bool {
        let eps = self.tolerance();
        match self {
            Region::Union { parts } => parts.iter().any(|p| p.strictly_contains(z)),
            _ => self.contains_tol(z, 0.0) && self.distance_to_boundary(z) > eps,
        }
    }

    /// Distance to the nearest boundary curve (for unions: of any part).
    pub fn distance_to_boundary(&self, z: Point) -> f64 {
        match self {
            Region::Disc { center, radius } => ((z - center).norm() - radius).abs(),
            Region::Annulus {
                center,
                inner_radius,
                outer_radius,
            } => {
                let d = (z - center).norm();
                (d - inner_radius).abs().min((d - outer_radius).abs())
            }
            Region::Polygon { vertices } => polygon_boundary_distance(vertices, z),
            Region::Union { parts } => parts
                .iter()
                .map(|p| p.distance_to_boundary(z))
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// Length of the outer boundary of each part, summed over union parts.
    pub fn perimeter(&self) -> f64 {
        match self {
            Region::Disc { radius, .. } => 2.0 * PI * radius,
            Region::Annulus { outer_radius, .. } => 2.0 * PI * outer_radius,
            Region::Polygon { vertices } => {
                let n = vertices.len();
                (0..n).map(|i| (vertices[(i + 1) % n] - vertices[i]).norm()).sum()
            }
            Region::Union { parts } => parts.iter().map(Region::perimeter).sum(),
        }
    }

    /// `m` points along the outer boundary.
    ///
    /// Polygons distribute points over edges in proportion to length, starting
    /// each edge at its vertex so that corners are always sampled. Unions sample
    /// every part densely, drop points strictly inside another part and thin
    /// the survivors to `m`.
    pub fn boundary_points(&self, m: usize) -> Vec<Point> {
        if m == 0 {
            return Vec::new();
        }
        match self {
            Region::Disc { center, radius } => circle_points(*center, *radius, m),
            Region::Annulus {
                center,
                outer_radius,
                ..
            } => circle_points(*center, *outer_radius, m),
            Region::Polygon { vertices } => polygon_samples(vertices, m),
            Region::Union { parts } => {
                if parts.len() == 1 {
                    return parts[0].boundary_points(m);
                }
                let total: f64 = parts.iter().map(Region::perimeter).sum();
                let dense = 8 * m;
                let mut survivors = Vec::with_capacity(dense);
                for (i, part) in parts.iter().enumerate() {
                    let share = ((dense as f64 * part.perimeter() / total).round() as usize).max(8);
                    for z in part.boundary_points(share) {
                        let buried = parts
                            .iter()
                            .enumerate()
                            .any(|(j, other)| j != i && other.strictly_contains(z));
                        if !buried {
                            survivors.push(z);
                        }
                    }
                }
                if survivors.len() <= m {
                    return survivors;
                }
                let len = survivors.len();
                (0..m).map(|k| survivors[k * len / m]).collect()
            }
        }
    }

    /// Convex polygon containing the region. Circles are replaced by a
    /// circumscribed regular [`DISC_HULL_VERTICES`]-gon.
    pub fn convex_hull(&self) -> Region {
        let pts = self.hull_candidates();
        Region::Polygon {
            vertices: monotone_chain(pts),
        }
    }

    fn hull_candidates(&self) -> Vec<Point> {
        let circumscribed = |center: Point, r: f64| {
            let n = DISC_HULL_VERTICES;
            let big = r / (PI / n as f64).cos();
            circle_points(center, big, n)
        };
        match self {
            Region::Disc { center, radius } => circumscribed(*center, *radius),
            Region::Annulus {
                center,
                outer_radius,
                ..
            } => circumscribed(*center, *outer_radius),
            Region::Polygon { vertices } => vertices.clone(),
            Region::Union { parts } => parts.iter().flat_map(Region::hull_candidates).collect(),
        }
    }

    /// max |z| over the region.
    pub fn bounding_radius(&self) -> f64 {
        match self {
            Region::Disc { center, radius } => center.norm() + radius,
            Region::Annulus {
                center,
                outer_radius,
                ..
            } => center.norm() + outer_radius,
            Region::Polygon { vertices } => vertices.iter().map(|v| v.norm()).fold(0.0, f64::max),
            Region::Union { parts } => parts.iter().map(Region::bounding_radius).fold(0.0, f64::max),
        }
    }

    /// max |z - c| over the region.
    pub fn radius_about(&self, c: Point) -> f64 {
        self.affine(1.0, -c).bounding_radius()
    }

    /// Region containing {z : dist(z, Ω) ≤ δ} and contained in the
    /// δ(1 + 1e-6)-neighbourhood.
    pub fn dilate(&self, delta: f64) -> Result<Region> {
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "dilation radius must be nonnegative, got {delta}"
            )));
        }
        if delta == 0.0 {
            return Ok(self.clone());
        }
        Ok(match self {
            Region::Disc { center, radius } => Region::Disc {
                center: *center,
                radius: radius + delta,
            },
            Region::Annulus {
                center,
                inner_radius,
                outer_radius,
            } => {
                if *inner_radius > delta {
                    Region::Annulus {
                        center: *center,
                        inner_radius: inner_radius - delta,
                        outer_radius: outer_radius + delta,
                    }
                } else {
                    Region::Disc {
                        center: *center,
                        radius: outer_radius + delta,
                    }
                }
            }
            Region::Polygon { vertices } => dilate_polygon(vertices, delta),
            Region::Union { parts } => Region::Union {
                parts: parts
                    .iter()
                    .map(|p| p.dilate(delta))
                    .collect::<Result<Vec<_>>>()?,
            },
        })
    }

    /// Image under z ↦ αz + shift.
    pub fn affine(&self, alpha: f64, shift: Point) -> Region {
        assert!(alpha > 0.0, "affine scale must be positive");
        match self {
            Region::Disc { center, radius } => Region::Disc {
                center: center * alpha + shift,
                radius: radius * alpha,
            },
            Region::Annulus {
                center,
                inner_radius,
                outer_radius,
            } => Region::Annulus {
                center: center * alpha + shift,
                inner_radius: inner_radius * alpha,
                outer_radius: outer_radius * alpha,
            },
            Region::Polygon { vertices } => Region::Polygon {
                vertices: vertices.iter().map(|v| v * alpha + shift).collect(),
            },
            Region::Union { parts } => Region::Union {
                parts: parts.iter().map(|p| p.affine(alpha, shift)).collect(),
            },
        }
    }

    /// Closed-form logarithmic capacity, known here for discs only.
    pub fn capacity_known(&self) -> Option<f64> {
        match self {
            Region::Disc { radius, .. } => Some(*radius),
            Region::Union { parts } if parts.len() == 1 => parts[0].capacity_known(),
            _ => None,
        }
    }

    /// A point in the interior.
    pub fn interior_point(&self) -> Point {
        match self {
            Region::Disc { center, .. } => *center,
            Region::Annulus {
                center,
                inner_radius,
                outer_radius,
            } => center + 0.5 * (inner_radius + outer_radius),
            Region::Polygon { vertices } => {
                let t = triangulate(vertices)[0];
                (t[0] + t[1] + t[2]) / 3.0
            }
            Region::Union { parts } => parts[0].interior_point(),
        }
    }

    /// Heuristic test for interior overlap of two regions: a dense boundary
    /// sample or an interior point of one lies strictly inside the other.
    pub fn interiors_overlap(&self, other: &Region) -> bool {
        if let (
            Region::Disc {
                center: c1,
                radius: r1,
            },
            Region::Disc {
                center: c2,
                radius: r2,
            },
        ) = (self, other)
        {
            return (c1 - c2).norm() < r1 + r2 - 1e-12 * (r1 + r2);
        }
        if self.strictly_contains(other.interior_point())
            || other.strictly_contains(self.interior_point())
        {
            return true;
        }
        let probe = |a: &Region, b: &Region| {
            a.all_boundary_points(512).into_iter().any(|z| b.strictly_contains(z))
        };
        probe(self, other) || probe(other, self)
    }

    /// Samples of every boundary curve, holes included.
    fn all_boundary_points(&self, m: usize) -> Vec<Point> {
        match self {
            Region::Annulus {
                center,
                inner_radius,
                outer_radius,
            } => {
                let mut v = circle_points(*center, *outer_radius, m);
                v.extend(circle_points(*center, *inner_radius, m));
                v
            }
            Region::Union { parts } => parts.iter().flat_map(|p| p.all_boundary_points(m)).collect(),
            _ => self.boundary_points(m),
        }
    }

    /// Area of the region (union parts are summed).
    pub fn area(&self) -> f64 {
        match self {
            Region::Disc { radius, .. } => PI * radius * radius,
            Region::Annulus {
                inner_radius,
                outer_radius,
                ..
            } => PI * (outer_radius * outer_radius - inner_radius * inner_radius),
            Region::Polygon { vertices } => signed_area(vertices).abs(),
            Region::Union { parts } => parts.iter().map(Region::area).sum(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("regions always serialize")
    }
}

fn point_in_polygon(v: &[Point], z: Point) -> bool {
    let n = v.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (v[i], v[j]);
        if (a.im > z.im) != (b.im > z.im) {
            let x = a.re + (z.im - a.im) * (b.re - a.re) / (b.im - a.im);
            if z.re < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

fn polygon_boundary_distance(v: &[Point], z: Point) -> f64 {
    let n = v.len();
    (0..n)
        .map(|i| segment_distance(z, v[i], v[(i + 1) % n]))
        .fold(f64::INFINITY, f64::min)
}

fn polygon_samples(v: &[Point], m: usize) -> Vec<Point> {
    let n = v.len();
    let lens: Vec<f64> = (0..n).map(|i| (v[(i + 1) % n] - v[i]).norm()).collect();
    let total: f64 = lens.iter().sum();
    if m < n {
        // too few points to visit every corner: uniform arclength
        let mut out = Vec::with_capacity(m);
        let (mut edge, mut start) = (0usize, 0.0);
        for k in 0..m {
            let s = total * k as f64 / m as f64;
            while s > start + lens[edge] && edge + 1 < n {
                start += lens[edge];
                edge += 1;
            }
            let t = ((s - start) / lens[edge]).clamp(0.0, 1.0);
            out.push(v[edge] + (v[(edge + 1) % n] - v[edge]) * t);
        }
        return out;
    }
    // largest-remainder apportionment with at least one point per edge
    let extra = m - n;
    let quotas: Vec<f64> = lens.iter().map(|l| extra as f64 * l / total).collect();
    let mut counts: Vec<usize> = quotas.iter().map(|q| 1 + q.floor() as usize).collect();
    let mut assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        let ra = quotas[a] - quotas[a].floor();
        let rb = quotas[b] - quotas[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    for &i in order.iter().cycle() {
        if assigned >= m {
            break;
        }
        counts[i] += 1;
        assigned += 1;
    }
    let mut out = Vec::with_capacity(m);
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        for k in 0..counts[i] {
            out.push(a + (b - a) * (k as f64 / counts[i] as f64));
        }
    }
    out
}

fn dilate_polygon(v: &[Point], delta: f64) -> Region {
    let n = v.len();
    let max_step = 2.0 * (1.0 / (1.0 + ARC_CHORD_SLACK)).acos();
    let outward = |d: Point| {
        let u = d / d.norm();
        Point::new(u.im, -u.re)
    };
    let mut out = Vec::new();
    for i in 0..n {
        let prev = v[(i + n - 1) % n];
        let cur = v[i];
        let next = v[(i + 1) % n];
        let n_in = outward(cur - prev);
        let n_out = outward(next - cur);
        let turn = cross(cur - prev, next - cur);
        if turn > 0.0 {
            // convex corner: circumscribed polyline around the arc
            let a0 = n_in.arg();
            let mut sweep = n_out.arg() - a0;
            while sweep <= 0.0 {
                sweep += 2.0 * PI;
            }
            let k = (sweep / max_step).ceil().max(1.0) as usize;
            let step = sweep / k as f64;
            let reach = delta / (step / 2.0).cos();
            out.push(cur + n_in * delta);
            for j in 0..k {
                out.push(cur + Point::from_polar(reach, a0 + (j as f64 + 0.5) * step));
            }
            out.push(cur + n_out * delta);
        } else if turn < 0.0 {
            // reflex corner: offset edges meet at the mitre point
            let s = n_in + n_out;
            out.push(cur + s * (delta / (1.0 + dot(n_in, n_out))));
        } else {
            out.push(cur + n_in * delta);
        }
    }
    out.dedup_by(|a, b| (*a - *b).norm() <= 1e-15 * delta.max(1.0));
    if out.len() > 1 && (out[0] - out[out.len() - 1]).norm() <= 1e-15 * delta.max(1.0) {
        out.pop();
    }
    if out.len() >= 3 && is_simple(&out) && signed_area(&out) > 0.0 {
        return Region::Polygon { vertices: out };
    }
    // exact fallback: polygon ∪ edge slabs ∪ corner discs
    let mut parts = vec![Region::Polygon {
        vertices: v.to_vec(),
    }];
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        let nrm = outward(b - a) * delta;
        parts.push(Region::Polygon {
            vertices: vec![a - nrm, b - nrm, b + nrm, a + nrm],
        });
        parts.push(Region::Disc {
            center: a,
            radius: delta,
        });
    }
    Region::Union { parts }
}

/// Ear-clipping triangulation of a simple counterclockwise polygon.
pub fn triangulate(v: &[Point]) -> Vec<[Point; 3]> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    let mut tris = Vec::with_capacity(v.len().saturating_sub(2));
    let mut guard = 0usize;
    while idx.len() > 3 {
        let m = idx.len();
        let mut clipped = false;
        for k in 0..m {
            let (ia, ib, ic) = (idx[(k + m - 1) % m], idx[k], idx[(k + 1) % m]);
            let (a, b, c) = (v[ia], v[ib], v[ic]);
            if orient(a, b, c) <= 0.0 {
                continue;
            }
            let blocked = idx.iter().any(|&j| {
                if j == ia || j == ib || j == ic {
                    return false;
                }
                let p = v[j];
                orient(a, b, p) >= 0.0 && orient(b, c, p) >= 0.0 && orient(c, a, p) >= 0.0
            });
            if blocked {
                continue;
            }
            tris.push([a, b, c]);
            idx.remove(k);
            clipped = true;
            break;
        }
        if !clipped {
            // numerically collinear remainder: drop the flattest vertex
            let k = (0..m)
                .min_by(|&x, &y| {
                    let f = |k: usize| {
                        orient(v[idx[(k + m - 1) % m]], v[idx[k]], v[idx[(k + 1) % m]]).abs()
                    };
                    f(x).total_cmp(&f(y))
                })
                .unwrap();
            idx.remove(k);
        }
        guard += 1;
        if guard > 4 * v.len() * v.len() {
            break;
        }
    }
    if idx.len() == 3 {
        tris.push([v[idx[0]], v[idx[1]], v[idx[2]]]);
    }
    tris
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Point {
        Point::new(re, im)
    }

    #[test]
    fn membership_examples() {
        let d = Region::disc(c(0.0, 0.0), 1.0).unwrap();
        assert!(d.contains(c(0.0, 0.0)));
        assert!(d.contains(c(1.0, 0.0)));
        let a = Region::annulus(c(0.0, 0.0), 0.5, 1.0).unwrap();
        assert!(!a.contains(c(0.25, 0.0)));
        assert!(a.contains(c(0.75, 0.0)));
        let sq = Region::unit_square();
        assert!(sq.contains(c(1.0, 1.0)));
        assert!(!sq.contains(c(1.1, 0.5)));
    }

    #[test]
    fn constructor_validation() {
        assert!(Region::disc(c(0.0, 0.0), 0.0).is_err());
        assert!(Region::annulus(c(0.0, 0.0), 1.0, 0.5).is_err());
        assert!(Region::polygon(vec![c(0.0, 0.0), c(1.0, 0.0)]).is_err());
        let bowtie = vec![c(0.0, 0.0), c(1.0, 1.0), c(1.0, 0.0), c(0.0, 1.0)];
        assert!(Region::polygon(bowtie).is_err());
        assert!(Region::union(vec![]).is_err());
        let cw = Region::polygon(vec![c(0.0, 0.0), c(0.0, 1.0), c(1.0, 1.0), c(1.0, 0.0)]).unwrap();
        if let Region::Polygon { vertices } = cw {
            assert!(signed_area(&vertices) > 0.0);
        }
    }

    #[test]
    fn boundary_samples() {
        let d = Region::disc(c(0.0, 0.0), 1.0).unwrap();
        let pts = d.boundary_points(4);
        assert_eq!(pts.len(), 4);
        assert!(pts.iter().all(|z| (z.norm() - 1.0).abs() < 1e-15));

        let a = Region::annulus(c(0.0, 0.0), 0.5, 1.0).unwrap();
        let pts = a.boundary_points(8);
        assert_eq!(pts.len(), 8);
        assert!(pts.iter().all(|z| (z.norm() - 1.0).abs() < 1e-15));

        let sq = Region::unit_square();
        let pts = sq.boundary_points(8);
        assert_eq!(pts.len(), 8);
        assert!(pts.iter().all(|&z| sq.distance_to_boundary(z) < 1e-15));
        for corner in [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0)] {
            assert!(pts.iter().any(|z| (z - corner).norm() < 1e-15));
        }
    }

    #[test]
    fn union_outer_boundary_drops_buried_points() {
        let u = Region::union(vec![
            Region::disc(c(0.0, 0.0), 1.0).unwrap(),
            Region::disc(c(1.0, 0.0), 1.0).unwrap(),
        ])
        .unwrap();
        let pts = u.boundary_points(64);
        assert_eq!(pts.len(), 64);
        for z in pts {
            assert!(u.contains(z));
            assert!(!u.strictly_contains(z));
        }
    }

    #[test]
    fn hull_examples() {
        let sq = Region::unit_square();
        match sq.convex_hull() {
            Region::Polygon { vertices } => {
                assert_eq!(vertices.len(), 4);
                for v in [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0)] {
                    assert!(vertices.contains(&v));
                }
            }
            _ => unreachable!(),
        }
        let d = Region::disc(c(0.0, 0.0), 1.0).unwrap();
        match d.convex_hull() {
            Region::Polygon { vertices } => {
                assert_eq!(vertices.len(), DISC_HULL_VERTICES);
                assert!(vertices.iter().all(|z| z.norm() >= 1.0 && z.norm() <= 1.0 + 1e-6));
            }
            _ => unreachable!(),
        }
        let stadium = Region::union(vec![
            Region::disc(c(-2.0, 0.0), 1.0).unwrap(),
            Region::disc(c(2.0, 0.0), 1.0).unwrap(),
        ])
        .unwrap();
        let hull = stadium.convex_hull();
        for z in stadium.boundary_points(200) {
            assert!(hull.contains(z));
        }
        assert!(hull.contains(c(0.0, 0.99)));
        assert!(!hull.contains(c(0.0, 1.01)));
    }

    #[test]
    fn bounding_radius_examples() {
        let d = Region::disc(c(1.0, 0.5), 1.5).unwrap();
        assert!((d.bounding_radius() - 2.618034).abs() < 1e-6);
        assert!((Region::unit_square().bounding_radius() - 2f64.sqrt()).abs() < 1e-15);
        let u = Region::union(vec![
            Region::disc(c(0.0, 0.0), 1.0).unwrap(),
            Region::disc(c(3.0, 0.0), 0.5).unwrap(),
        ])
        .unwrap();
        assert_eq!(u.bounding_radius(), 3.5);
    }

    #[test]
    fn dilation_examples() {
        let d = Region::disc(c(0.0, 0.0), 1.0).unwrap();
        assert_eq!(d.dilate(0.5).unwrap(), Region::disc(c(0.0, 0.0), 1.5).unwrap());
        assert_eq!(d.dilate(0.0).unwrap(), d);
        let sq = Region::unit_square();
        let big = sq.dilate(0.1).unwrap();
        assert!(matches!(big, Region::Polygon { .. }));
        for z in sq.boundary_points(400) {
            assert!(big.contains(z));
            for k in 0..16 {
                let w = z + Point::from_polar(0.1, k as f64 * PI / 8.0);
                assert!(big.contains(w));
            }
        }
        for z in big.boundary_points(800) {
            let dist = if sq.contains(z) { 0.0 } else { sq.distance_to_boundary(z) };
            assert!(dist <= 0.1 * (1.0 + 1e-6) + 1e-12, "{dist}");
        }
    }

    #[test]
    fn reflex_polygon_dilation_is_sandwiched() {
        // L-shape
        let l = Region::polygon(vec![
            c(0.0, 0.0),
            c(2.0, 0.0),
            c(2.0, 1.0),
            c(1.0, 1.0),
            c(1.0, 2.0),
            c(0.0, 2.0),
        ])
        .unwrap();
        let big = l.dilate(0.2).unwrap();
        let dist = |z: Point| if l.contains(z) { 0.0 } else { l.distance_to_boundary(z) };
        for z in big.boundary_points(2000) {
            assert!(dist(z) <= 0.2 * (1.0 + 1e-6) + 1e-12);
        }
        for i in 0..60 {
            for j in 0..60 {
                let z = c(-0.5 + 3.5 * i as f64 / 59.0, -0.5 + 3.5 * j as f64 / 59.0);
                if dist(z) <= 0.2 {
                    assert!(big.contains(z), "{z}");
                }
            }
        }
    }

    #[test]
    fn affine_examples() {
        let d = Region::disc(c(0.0, 0.0), 1.0).unwrap();
        assert_eq!(d.affine(2.0, c(0.0, 0.0)), Region::disc(c(0.0, 0.0), 2.0).unwrap());
        assert_eq!(d.affine(1.0, c(0.0, 3.0)), Region::disc(c(0.0, 3.0), 1.0).unwrap());
        let half = Region::unit_square().affine(0.5, c(0.0, 0.0));
        assert_eq!(half, Region::rectangle(0.0, 0.5, 0.0, 0.5).unwrap());
    }

    #[test]
    fn known_capacities() {
        assert_eq!(Region::disc(c(0.0, 0.0), 1.5).unwrap().capacity_known(), Some(1.5));
        assert_eq!(Region::disc(c(7.0, -2.0), 0.25).unwrap().capacity_known(), Some(0.25));
        assert_eq!(Region::unit_square().capacity_known(), None);
    }

    #[test]
    fn json_round_trip() {
        let src = r#"{"shape":"union","parts":[{"shape":"disc","center":[1.0,0.5],"radius":1.5},
            {"shape":"annulus","center":[5,0],"inner_radius":0.5,"outer_radius":1},
            {"shape":"polygon","vertices":[[0,10],[1,10],[1,11]]}]}"#;
        let r: Region = serde_json::from_str(src).unwrap();
        let back: Region = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(r, back);
        let bad = r#"{"shape":"disc","center":[0,0],"radius":-1}"#;
        assert!(serde_json::from_str::<Region>(bad).is_err());
    }

    #[test]
    fn triangulation_covers_nonconvex_polygon() {
        let l = vec![
            c(0.0, 0.0),
            c(2.0, 0.0),
            c(2.0, 1.0),
            c(1.0, 1.0),
            c(1.0, 2.0),
            c(0.0, 2.0),
        ];
        let tris = triangulate(&l);
        assert_eq!(tris.len(), 4);
        let area: f64 = tris.iter().map(|t| orient(t[0], t[1], t[2]) / 2.0).sum();
        assert!((area - 3.0).abs() < 1e-14);
        assert!(tris.iter().all(|t| orient(t[0], t[1], t[2]) > 0.0));
    }

    #[test]
    fn overlap_detection() {
        let a = Region::disc(c(0.0, 0.0), 1.0).unwrap();
        let b = Region::disc(c(3.0, 0.0), 1.0).unwrap();
        let touching = Region::disc(c(2.0, 0.0), 1.0).unwrap();
        assert!(!a.interiors_overlap(&b));
        assert!(!a.interiors_overlap(&touching));
        assert!(a.interiors_overlap(&Region::disc(c(1.5, 0.0), 1.0).unwrap()));
        let sq = Region::unit_square();
        assert!(!sq.interiors_overlap(&Region::rectangle(1.0, 2.0, 0.0, 1.0).unwrap()));
        assert!(sq.interiors_overlap(&Region::rectangle(0.5, 2.0, 0.2, 0.4).unwrap()));
        let ring = Region::annulus(c(0.0, 0.0), 2.0, 3.0).unwrap();
        assert!(!ring.interiors_overlap(&a));
    }
}
