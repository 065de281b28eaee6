//! Weights v ≥ 0 with compact support, their mixed moments and the
//! reduction of a 3D potential to a planar weight.

mod moments;
mod quadrature;
mod reduce;

use std::fmt;
use std::sync::Arc;

use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mp::{Cplx, Real};
use crate::region::{Point, Region};

pub use moments::{gaussian_excess, mixed_moments, mixed_moments_scaled, MomentKind, MomentTable};
pub use quadrature::{quadrature, quadrature_f64, QuadNode};
pub use reduce::{reduce_3d, Potential3D, PotentialKind, ReduceSpec};

pub type Evaluator = Arc<dyn Fn(Point) -> f64 + Send + Sync>;

/// Radial profile ṽ(ρ).
#[derive(Clone, Debug, PartialEq)]
pub enum Profile {
    /// ṽ ≡ 1 (characteristic function of the support).
    Chi,
    /// ṽ(ρ) = ρ^k.
    Power(u32),
}

impl Profile {
    pub fn parse(s: &str) -> Result<Profile> {
        let s = s.trim();
        if s == "chi" {
            return Ok(Profile::Chi);
        }
        if let Some(k) = s.strip_prefix("power:") {
            return k
                .trim()
                .parse()
                .map(Profile::Power)
                .map_err(|_| Error::InvalidArgument(format!("bad power profile {s:?}")));
        }
        Err(Error::InvalidArgument(format!(
            "unknown radial profile {s:?} (expected \"chi\" or \"power:<k>\")"
        )))
    }

    pub fn name(&self) -> String {
        match self {
            Profile::Chi => "chi".into(),
            Profile::Power(k) => format!("power:{k}"),
        }
    }

    pub fn eval(&self, rho: f64) -> f64 {
        match self {
            Profile::Chi => 1.0,
            Profile::Power(k) => rho.powi(*k as i32),
        }
    }

    /// Polynomial degree in ρ.
    pub fn degree(&self) -> usize {
        match self {
            Profile::Chi => 0,
            Profile::Power(k) => *k as usize,
        }
    }
}

/// What is known about a generic density beyond its values.
#[derive(Clone, Debug, PartialEq)]
pub enum GenericClass {
    Opaque,
    /// Chord length of a ball of the given radius centered at the origin,
    /// possibly rescaled: radial about 0, positive on the open disc.
    Ball3d { radius: f64 },
}

#[derive(Clone)]
pub enum Density {
    Constant {
        c: f64,
    },
    /// ṽ(|z − center| / length).
    Radial {
        center: Point,
        profile: Profile,
        length: f64,
    },
    Generic {
        evaluator: Evaluator,
        class: GenericClass,
        sup: Option<f64>,
    },
}

impl fmt::Debug for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Density::Constant { c } => write!(f, "Constant({c})"),
            Density::Radial {
                center,
                profile,
                length,
            } => write!(f, "Radial({center}, {}, {length})", profile.name()),
            Density::Generic { class, .. } => write!(f, "Generic({class:?})"),
        }
    }
}

impl Density {
    fn eval_unmasked(&self, z: Point) -> f64 {
        match self {
            Density::Constant { c } => *c,
            Density::Radial {
                center,
                profile,
                length,
            } => profile.eval((z - center).norm() / length),
            Density::Generic { evaluator, .. } => evaluator(z),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Weight {
    support: Region,
    density: Density,
}

/// Config record for a weight.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeightSpec {
    #[serde(default)]
    pub support: Option<Region>,
    pub density: DensitySpec,
    #[serde(default)]
    pub transform: Option<TransformSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DensitySpec {
    Constant {
        #[serde(default = "one")]
        c: f64,
    },
    Radial {
        profile: String,
        #[serde(default)]
        center: Option<[f64; 2]>,
    },
    #[serde(rename = "ball3d_reduction")]
    Ball3dReduction {
        #[serde(rename = "R")]
        radius: f64,
    },
}

fn one() -> f64 {
    1.0
}

/// z ↦ alpha·z + shift applied to the weight: v'(z) = v((z − shift)/alpha).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TransformSpec {
    #[serde(default = "one")]
    pub alpha: f64,
    #[serde(default)]
    pub shift: [f64; 2],
}

fn region_center(r: &Region) -> Point {
    match r {
        Region::Disc { center, .. } | Region::Annulus { center, .. } => *center,
        _ => Point::new(0.0, 0.0),
    }
}

impl Weight {
    /// Checks nonnegativity on a quadrature sample and a positive total mass.
    pub fn new(support: Region, density: Density) -> Result<Weight> {
        match &density {
            Density::Constant { c } if !(*c > 0.0 && c.is_finite()) => {
                return Err(Error::DegenerateWeight(format!(
                    "constant density must be positive, got {c}"
                )))
            }
            Density::Radial { length, .. } if !(*length > 0.0) => {
                return Err(Error::DegenerateWeight("radial length scale must be positive".into()))
            }
            _ => {}
        }
        let w = Weight { support, density };
        let nodes = quadrature_f64(&w.support, 16)?;
        let mut mass = 0.0;
        for (z, q) in nodes {
            let v = w.density.eval_unmasked(z);
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::DegenerateWeight(format!("density value {v} at {z}")));
            }
            mass += q * v;
        }
        if !(mass > 0.0) {
            return Err(Error::DegenerateWeight("weight has zero mass".into()));
        }
        Ok(w)
    }

    /// Characteristic function of a region.
    pub fn indicator(support: Region) -> Result<Weight> {
        Weight::new(support, Density::Constant { c: 1.0 })
    }

    pub fn radial(support: Region, center: Point, profile: Profile) -> Result<Weight> {
        Weight::new(
            support,
            Density::Radial {
                center,
                profile,
                length: 1.0,
            },
        )
    }

    pub fn from_spec(spec: &WeightSpec) -> Result<Weight> {
        let base = match &spec.density {
            DensitySpec::Constant { c } => {
                let support = spec.support.clone().ok_or_else(|| {
                    Error::InvalidArgument("constant density needs a support region".into())
                })?;
                Weight::new(support, Density::Constant { c: *c })?
            }
            DensitySpec::Radial { profile, center } => {
                let support = spec.support.clone().ok_or_else(|| {
                    Error::InvalidArgument("radial density needs a support region".into())
                })?;
                let center = center
                    .map(|c| Point::new(c[0], c[1]))
                    .unwrap_or_else(|| region_center(&support));
                Weight::radial(support, center, Profile::parse(profile)?)?
            }
            DensitySpec::Ball3dReduction { radius } => {
                if !(*radius > 0.0) {
                    return Err(Error::InvalidArgument(format!(
                        "ball radius must be positive, got {radius}"
                    )));
                }
                let support = match &spec.support {
                    Some(s) => s.clone(),
                    None => Region::disc(Point::new(0.0, 0.0), *radius)?,
                };
                reduce_3d(
                    &Potential3D::ball(*radius),
                    &ReduceSpec {
                        support: Some(support),
                        ..ReduceSpec::default()
                    },
                )?
            }
        };
        Ok(match &spec.transform {
            Some(t) => base.affine(t.alpha, Point::new(t.shift[0], t.shift[1]))?,
            None => base,
        })
    }

    pub fn support(&self) -> &Region {
        &self.support
    }

    pub fn density(&self) -> &Density {
        &self.density
    }

    /// v(z), zero outside the support.
    pub fn eval(&self, z: Point) -> f64 {
        if self.support.contains(z) {
            self.density.eval_unmasked(z)
        } else {
            0.0
        }
    }

    /// v at an extended-precision point assumed to lie in the support.
    pub fn eval_mp(&self, z: &Cplx) -> Real {
        let prec = z.prec();
        match &self.density {
            Density::Constant { c } => Float::with_val(prec, *c),
            Density::Radial {
                center,
                profile,
                length,
            } => match profile {
                Profile::Chi => Float::with_val(prec, 1),
                Profile::Power(k) => {
                    let d = z - &Cplx::from_c64(prec, *center);
                    let rho = d.abs() / *length;
                    rho.pow(*k)
                }
            },
            Density::Generic { evaluator, .. } => Float::with_val(prec, evaluator(z.to_c64())),
        }
    }

    /// Essential supremum, when it is known.
    pub fn ess_sup(&self) -> Option<f64> {
        match &self.density {
            Density::Constant { c } => Some(*c),
            Density::Radial {
                center,
                profile,
                length,
            } => Some(profile.eval(self.support.radius_about(*center) / length)),
            Density::Generic { sup, .. } => *sup,
        }
    }

    /// ∫ v dm in double precision.
    pub fn mass(&self) -> f64 {
        let degree = match &self.density {
            Density::Radial { profile, .. } => profile.degree() + 2,
            _ => 40,
        };
        quadrature_f64(&self.support, degree)
            .map(|nodes| {
                nodes
                    .into_iter()
                    .map(|(z, q)| q * self.density.eval_unmasked(z))
                    .sum()
            })
            .unwrap_or(f64::NAN)
    }

    /// v'(z) = v((z − shift)/alpha), supported on alpha·Ω + shift.
    pub fn affine(&self, alpha: f64, shift: Point) -> Result<Weight> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "scale factor must be positive, got {alpha}"
            )));
        }
        let support = self.support.affine(alpha, shift);
        let density = match &self.density {
            Density::Constant { c } => Density::Constant { c: *c },
            Density::Radial {
                center,
                profile,
                length,
            } => Density::Radial {
                center: center * alpha + shift,
                profile: profile.clone(),
                length: length * alpha,
            },
            Density::Generic {
                evaluator,
                class,
                sup,
            } => {
                let inner = evaluator.clone();
                let class = match class {
                    GenericClass::Ball3d { radius } if shift == Point::new(0.0, 0.0) => {
                        GenericClass::Ball3d {
                            radius: radius * alpha,
                        }
                    }
                    _ => GenericClass::Opaque,
                };
                Density::Generic {
                    evaluator: Arc::new(move |z| inner((z - shift) / alpha)),
                    class,
                    sup: *sup,
                }
            }
        };
        Ok(Weight { support, density })
    }

    /// True when v is rotationally symmetric about the origin and its support
    /// is a disc or annulus centered there.
    pub fn is_radial_about_origin(&self) -> bool {
        let origin = Point::new(0.0, 0.0);
        let centered = match &self.support {
            Region::Disc { center, .. } | Region::Annulus { center, .. } => *center == origin,
            _ => false,
        };
        centered
            && match &self.density {
                Density::Constant { .. } => true,
                Density::Radial { center, .. } => *center == origin,
                Density::Generic { class, .. } => matches!(class, GenericClass::Ball3d { .. }),
            }
    }

    /// Radial profile ṽ(ρ) = v(ρ) for ρ ≥ 0 along the positive real axis.
    pub fn radial_value(&self, rho: f64) -> f64 {
        self.density.eval_unmasked(Point::new(rho, 0.0))
    }

    /// Stable description of support and density used to tie derived
    /// quantities back to the weight they came from.
    pub fn provenance(&self) -> String {
        let density = match &self.density {
            Density::Constant { c } => format!("constant:{c}"),
            Density::Radial {
                center,
                profile,
                length,
            } => format!("radial:{}:{}:{}:{length}", profile.name(), center.re, center.im),
            Density::Generic { class, .. } => match class {
                GenericClass::Opaque => "generic".into(),
                GenericClass::Ball3d { radius } => format!("ball3d:{radius}"),
            },
        };
        format!("{}|{}", self.support.to_json(), density)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_parsing() {
        assert_eq!(Profile::parse("chi").unwrap(), Profile::Chi);
        assert_eq!(Profile::parse("power:3").unwrap(), Profile::Power(3));
        assert!(Profile::parse("gauss").is_err());
    }

    #[test]
    fn masking_and_mass() {
        let w = Weight::indicator(Region::disc(Point::new(0.0, 0.0), 1.0).unwrap()).unwrap();
        assert_eq!(w.eval(Point::new(0.5, 0.0)), 1.0);
        assert_eq!(w.eval(Point::new(1.5, 0.0)), 0.0);
        assert!((w.mass() - std::f64::consts::PI).abs() < 1e-13);
        assert_eq!(w.ess_sup(), Some(1.0));
    }

    #[test]
    fn degenerate_weights_rejected() {
        let d = Region::disc(Point::new(0.0, 0.0), 1.0).unwrap();
        assert!(Weight::new(d.clone(), Density::Constant { c: 0.0 }).is_err());
        let neg: Evaluator = Arc::new(|_| -1.0);
        let g = Density::Generic {
            evaluator: neg,
            class: GenericClass::Opaque,
            sup: None,
        };
        assert!(Weight::new(d, g).is_err());
    }

    #[test]
    fn spec_parsing() {
        let src = r#"{"support":{"shape":"disc","center":[0.7,0],"radius":1},
                      "density":{"kind":"radial","profile":"power:2"}}"#;
        let spec: WeightSpec = serde_json::from_str(src).unwrap();
        let w = Weight::from_spec(&spec).unwrap();
        match w.density() {
            Density::Radial { center, .. } => assert_eq!(*center, Point::new(0.7, 0.0)),
            _ => panic!(),
        }
        assert!((w.eval(Point::new(1.2, 0.0)) - 0.25).abs() < 1e-15);

        let src = r#"{"density":{"kind":"ball3d_reduction","R":1.0},
                      "transform":{"alpha":2.0}}"#;
        let spec: WeightSpec = serde_json::from_str(src).unwrap();
        let w = Weight::from_spec(&spec).unwrap();
        assert!(w.is_radial_about_origin());
        assert_eq!(w.support().bounding_radius(), 2.0);
        // v'(z) = v(z/2): at z = 1, chord through the unit ball at |z|=0.5
        assert!((w.eval(Point::new(1.0, 0.0)) - 2.0 * 0.75f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn affine_weight_moves_radial_center() {
        let w = Weight::radial(
            Region::disc(Point::new(0.0, 0.0), 1.0).unwrap(),
            Point::new(0.0, 0.0),
            Profile::Power(2),
        )
        .unwrap();
        let moved = w.affine(2.0, Point::new(1.0, 0.0)).unwrap();
        let z = Point::new(0.3, 0.4);
        let image = z * 2.0 + Point::new(1.0, 0.0);
        assert!((moved.eval(image) - w.eval(z)).abs() < 1e-15);
        assert!(!moved.is_radial_about_origin());
    }
}
