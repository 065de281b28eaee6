//! Mixed moments ∫ z^a z̄^b v g dm in extended precision.

use std::f64::consts::LN_2;

use rayon::prelude::*;
use rug::ops::Pow;
use rug::Float;
use serde_json::json;

use super::{quadrature, Density, Weight};
use crate::error::{Error, Result};
use crate::linalg::{cholesky, CMatrix};
use crate::mp::{pi, to_decimal, Cplx, Real};
use crate::region::{Point, Region};
use crate::special::{gauss_legendre, integrate_adaptive_rel};

const CHUNK: usize = 1024;
const GUARD_BITS: u32 = 32;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MomentKind {
    Plain,
    /// Extra factor e^{−b0|z|²/2}.
    Gaussian { b0: f64 },
}

/// Moments of the rescaled monomials (z/s)^a:
/// `entry(a, b) = ∫ (z/s)^a conj(z/s)^b v g dm`, so that the true moment is
/// `s^(a+b) · entry(a, b)`.
#[derive(Clone, Debug)]
pub struct MomentTable {
    kind: MomentKind,
    maxdeg: usize,
    prec: u32,
    scale: Real,
    entries: Vec<Cplx>,
    provenance: String,
    diagonal: bool,
}

impl MomentTable {
    pub fn kind(&self) -> MomentKind {
        self.kind
    }

    pub fn maxdeg(&self) -> usize {
        self.maxdeg
    }

    pub fn precision_bits(&self) -> u32 {
        self.prec
    }

    pub fn scale(&self) -> &Real {
        &self.scale
    }

    pub fn log_scale(&self) -> Real {
        Float::with_val(self.prec, self.scale.ln_ref())
    }

    /// Provenance string of the weight the table was computed from.
    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// True when the table came from the rotationally symmetric shortcut.
    pub fn used_radial_path(&self) -> bool {
        self.diagonal
    }

    /// Rescaled entry (see the type docs).
    pub fn get(&self, a: usize, b: usize) -> &Cplx {
        &self.entries[a * (self.maxdeg + 1) + b]
    }

    /// True moment ∫ z^a z̄^b v g dm.
    pub fn unscaled(&self, a: usize, b: usize) -> Cplx {
        let f = Float::with_val(self.prec, (&self.scale).pow((a + b) as u32));
        self.get(a, b).scale(&f)
    }

    /// Rescaled Gram matrix [entry(a, b)] of the leading `n` monomials.
    pub fn gram(&self, n: usize) -> CMatrix {
        assert!(n <= self.maxdeg + 1);
        CMatrix::from_fn(n, self.prec, |a, b| self.get(a, b).clone())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let n = self.maxdeg + 1;
        let rows: Vec<Vec<[String; 2]>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        let e = self.get(a, b);
                        [to_decimal(&e.re), to_decimal(&e.im)]
                    })
                    .collect()
            })
            .collect();
        let kind = match self.kind {
            MomentKind::Plain => json!("plain"),
            MomentKind::Gaussian { b0 } => json!({ "gaussian": { "b0": b0 } }),
        };
        json!({
            "kind": kind,
            "maxdeg": self.maxdeg,
            "precision_bits": self.prec,
            "scale": to_decimal(&self.scale),
            "entries": rows,
        })
    }
}

/// Bound on |b0(|z|² − |c|²)/2| over the region, c a representative center.
fn exponent_spread(region: &Region, b0: f64) -> f64 {
    let about = |c: Point, rho: f64| b0 * (c.norm() * rho + rho * rho / 2.0);
    match region {
        Region::Disc { center, radius } => about(*center, *radius),
        Region::Annulus {
            center,
            outer_radius,
            ..
        } => about(*center, *outer_radius),
        Region::Polygon { vertices } => {
            let c = vertices.iter().sum::<Point>() / vertices.len() as f64;
            about(c, region.radius_about(c))
        }
        Region::Union { parts } => parts
            .iter()
            .map(|p| exponent_spread(p, b0))
            .fold(0.0, f64::max),
    }
}

/// Extra design degree needed to integrate the Gaussian factor at `prec`
/// bits: twice the smallest k with X^k/k! < 2^(−prec), X the spread of the
/// exponent over the region, and never less than 30.
pub fn gaussian_excess(region: &Region, b0: f64, prec: u32) -> usize {
    let x = exponent_spread(region, b0).max(1e-300);
    let target = -(prec as f64) * LN_2;
    let mut log_term = 0.0;
    let mut k = 0usize;
    loop {
        k += 1;
        log_term += x.ln() - (k as f64).ln();
        if k as f64 > x && log_term < target {
            break;
        }
    }
    (2 * k).max(30)
}

/// Moment table of `v` up to degree `maxdeg`, monomials rescaled by the
/// bounding radius R₀ of the support.
pub fn mixed_moments(v: &Weight, kind: MomentKind, maxdeg: usize, prec: u32) -> Result<MomentTable> {
    let s = v.support().bounding_radius();
    mixed_moments_scaled(v, kind, maxdeg, prec, s)
}

pub fn mixed_moments_scaled(
    v: &Weight,
    kind: MomentKind,
    maxdeg: usize,
    prec: u32,
    scale: f64,
) -> Result<MomentTable> {
    if prec < 64 {
        return Err(Error::InvalidArgument(format!(
            "precision must be at least 64 bits, got {prec}"
        )));
    }
    if let MomentKind::Gaussian { b0 } = kind {
        if !(b0 > 0.0 && b0.is_finite()) {
            return Err(Error::InvalidArgument(format!("b0 must be positive, got {b0}")));
        }
    }
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::InvalidArgument(format!("moment scale must be positive, got {scale}")));
    }
    let n = maxdeg + 1;
    let wp = prec + GUARD_BITS;
    let s = Float::with_val(wp, scale);
    let diagonal = v.is_radial_about_origin();
    let mut entries = vec![Cplx::zero(prec); n * n];
    if diagonal {
        let diag = radial_moments(v, kind, maxdeg, wp, &s)?;
        for (a, d) in diag.into_iter().enumerate() {
            entries[a * n + a] = Cplx::from_real(Float::with_val(prec, d));
        }
    } else {
        let upper = dense_moments(v, kind, maxdeg, wp, &s)?;
        let mut k = 0;
        for a in 0..n {
            for b in a..n {
                let e = &upper[k];
                k += 1;
                let re = Float::with_val(prec, &e.re);
                if a == b {
                    entries[a * n + a] = Cplx::from_real(re);
                } else {
                    let im = Float::with_val(prec, &e.im);
                    entries[b * n + a] = Cplx {
                        re: re.clone(),
                        im: Float::with_val(prec, -&im),
                    };
                    entries[a * n + b] = Cplx { re, im };
                }
            }
        }
    }
    let table = MomentTable {
        kind,
        maxdeg,
        prec,
        scale: Float::with_val(prec, scale),
        entries,
        provenance: v.provenance(),
        diagonal,
    };
    for a in 0..n {
        if !(table.get(a, a).re > 0) {
            return Err(Error::DegenerateMoments { degree: a });
        }
    }
    cholesky(&table.gram(n)).map_err(|degree| Error::DegenerateMoments { degree })?;
    Ok(table)
}

fn gaussian_factor(kind: MomentKind, r2: &Real) -> Option<Real> {
    match kind {
        MomentKind::Plain => None,
        MomentKind::Gaussian { b0 } => {
            let mut e = Float::with_val(r2.prec(), r2 * b0);
            e /= -2i32;
            Some(e.exp())
        }
    }
}

/// Design degree for the dense path.
fn design_degree(v: &Weight, kind: MomentKind, maxdeg: usize, prec: u32) -> usize {
    let extra_density = match v.density() {
        Density::Constant { .. } => 0,
        Density::Radial { profile, .. } => profile.degree(),
        Density::Generic { .. } => 20,
    };
    let extra_gauss = match kind {
        MomentKind::Plain => 0,
        MomentKind::Gaussian { b0 } => gaussian_excess(v.support(), b0, prec),
    };
    2 * maxdeg + extra_density + extra_gauss
}

/// Upper triangle (a ≤ b, row-major) of the rescaled moments by cubature.
fn dense_moments(v: &Weight, kind: MomentKind, maxdeg: usize, wp: u32, s: &Real) -> Result<Vec<Cplx>> {
    let degree = design_degree(v, kind, maxdeg, wp - GUARD_BITS);
    let nodes = quadrature(v.support(), degree, wp)?;
    let n = maxdeg + 1;
    let len = n * (n + 1) / 2;
    let inv_s = Float::with_val(wp, s.recip_ref());
    let partials: Vec<Vec<Cplx>> = nodes
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc = vec![Cplx::zero(wp); len];
            let mut pw = vec![Cplx::zero(wp); n];
            let mut qw = vec![Cplx::zero(wp); n];
            for node in chunk {
                let mut weight = Float::with_val(wp, &node.w * v.eval_mp(&node.z));
                if let Some(g) = gaussian_factor(kind, &node.z.norm_sqr()) {
                    weight *= g;
                }
                if weight.is_zero() {
                    continue;
                }
                let u = node.z.scale(&inv_s);
                pw[0] = Cplx::one(wp);
                for a in 1..n {
                    pw[a] = &pw[a - 1] * &u;
                }
                for a in 0..n {
                    qw[a] = pw[a].scale(&weight);
                }
                let mut k = 0;
                for a in 0..n {
                    for b in a..n {
                        acc[k].add_mul_conj(&qw[a], &pw[b]);
                        k += 1;
                    }
                }
            }
            acc
        })
        .collect();
    let mut total = vec![Cplx::zero(wp); len];
    for part in &partials {
        for (t, p) in total.iter_mut().zip(part) {
            t.add_assign(p);
        }
    }
    Ok(total)
}

/// Diagonal of the rescaled moments of a weight that is rotationally
/// symmetric about the origin: 2π ∫ ρ^(2a+1) ṽ(ρ) g(ρ) dρ / s^(2a).
fn radial_moments(v: &Weight, kind: MomentKind, maxdeg: usize, wp: u32, s: &Real) -> Result<Vec<Real>> {
    let (r0, r1) = match v.support() {
        Region::Disc { radius, .. } => (0.0, *radius),
        Region::Annulus {
            inner_radius,
            outer_radius,
            ..
        } => (*inner_radius, *outer_radius),
        _ => unreachable!("radial path needs a disc or annulus"),
    };
    let two_pi = pi(wp) * 2u32;
    if let Density::Generic { .. } = v.density() {
        let sf = s.to_f64();
        let b0 = match kind {
            MomentKind::Plain => 0.0,
            MomentKind::Gaussian { b0 } => b0,
        };
        return Ok((0..=maxdeg)
            .into_par_iter()
            .map(|a| {
                let f = |rho: f64| {
                    (rho / sf).powi(2 * a as i32) * rho * v.radial_value(rho) * (-b0 * rho * rho / 2.0).exp()
                };
                Float::with_val(wp, integrate_adaptive_rel(&f, r0, r1, 1e-14)) * &two_pi
            })
            .collect());
    }
    let profile_degree = match v.density() {
        Density::Radial { profile, .. } => profile.degree(),
        _ => 0,
    };
    let mut k = maxdeg + 1 + profile_degree.div_ceil(2);
    if let MomentKind::Gaussian { b0 } = kind {
        let disc = Region::Disc {
            center: Point::new(0.0, 0.0),
            radius: r1,
        };
        k += gaussian_excess(&disc, b0, wp - GUARD_BITS) / 2;
    }
    let rule = gauss_legendre(k, wp);
    let lo = Float::with_val(wp, r0);
    let hi = Float::with_val(wp, r1);
    let half = Float::with_val(wp, &hi - &lo) / 2u32;
    let mid = Float::with_val(wp, &hi + &lo) / 2u32;
    let inv_s2 = Float::with_val(wp, s.square_ref()).recip();
    let mut out = vec![Float::new(wp); maxdeg + 1];
    for (x, w) in rule.0.iter().zip(&rule.1) {
        let rho = Float::with_val(wp, &mid + Float::with_val(wp, &half * x));
        let z = Cplx::from_real(rho.clone());
        let mut term = Float::with_val(wp, w * &half);
        term *= &rho;
        term *= v.eval_mp(&z);
        let r2 = Float::with_val(wp, rho.square_ref());
        if let Some(g) = gaussian_factor(kind, &r2) {
            term *= g;
        }
        let step = Float::with_val(wp, &r2 * &inv_s2);
        for slot in out.iter_mut() {
            *slot += &term;
            term *= &step;
        }
    }
    for slot in out.iter_mut() {
        *slot *= &two_pi;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::lower_gamma_int;

    #[test]
    fn excess_grows_with_precision_and_spread() {
        let d = Region::Disc {
            center: Point::new(0.0, 0.0),
            radius: 1.0,
        };
        assert_eq!(gaussian_excess(&d, 2.0, 16), 30);
        let off = Region::Disc {
            center: Point::new(0.7, 0.0),
            radius: 1.0,
        };
        let e = gaussian_excess(&off, 2.0, 256);
        assert!(e > 120 && e < 170, "{e}");
        assert!(gaussian_excess(&off, 2.0, 512) > e);
    }

    #[test]
    fn centered_disc_matches_closed_forms_on_both_paths() {
        let prec = 128;
        let disc = Region::disc(Point::new(0.0, 0.0), 1.0).unwrap();
        let w = Weight::indicator(disc.clone()).unwrap();
        let fast = mixed_moments(&w, MomentKind::Plain, 10, prec).unwrap();
        assert!(fast.used_radial_path());
        // same weight through the generic cubature: an opaque evaluator
        let opaque = Weight::new(
            disc,
            Density::Generic {
                evaluator: std::sync::Arc::new(|_| 1.0),
                class: super::super::GenericClass::Opaque,
                sup: Some(1.0),
            },
        )
        .unwrap();
        let dense = mixed_moments(&opaque, MomentKind::Plain, 10, prec).unwrap();
        assert!(!dense.used_radial_path());
        for a in 0..=10 {
            let exact = pi(prec) / (a as u32 + 1);
            for t in [&fast, &dense] {
                let m = t.unscaled(a, a);
                let rel = Float::with_val(prec, &m.re - &exact).abs() / &exact;
                assert!(rel < 1e-30, "a={a} rel={}", rel.to_f64());
            }
            for b in 0..=10 {
                if a != b {
                    assert!(dense.get(a, b).abs() < 1e-30);
                }
            }
        }
        let g = mixed_moments(&w, MomentKind::Gaussian { b0: 2.0 }, 6, prec).unwrap();
        for a in 0..=6u32 {
            let exact = lower_gamma_int(a + 1, &Float::with_val(prec, 1)) * pi(prec);
            let rel = Float::with_val(prec, &g.unscaled(a as usize, a as usize).re - &exact).abs() / &exact;
            assert!(rel < 1e-30);
        }
    }

    #[test]
    fn json_dump_has_full_precision_strings() {
        let w = Weight::indicator(Region::disc(Point::new(0.0, 0.0), 1.0).unwrap()).unwrap();
        let t = mixed_moments(&w, MomentKind::Plain, 2, 128).unwrap();
        let j = t.to_json();
        let s = j["entries"][0][0][0].as_str().unwrap();
        assert!(s.starts_with("3.14159265358979323846264338327950288"), "{s}");
        assert_eq!(j["maxdeg"], 2);
    }
}
