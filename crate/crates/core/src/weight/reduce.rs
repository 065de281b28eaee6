//! Planar weight w(x₁, x₂) = ∫ V(x₁, x₂, x₃) dx₃ from a 3D potential.

use std::fmt;
use std::sync::Arc;

use super::{Density, GenericClass, Weight};
use crate::error::Result;
use crate::region::{Point, Region};
use crate::special::integrate_adaptive;

pub type Evaluator3 = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

#[derive(Clone, Debug, PartialEq)]
pub enum PotentialKind {
    Opaque,
    /// Characteristic function of the ball of this radius about the origin.
    Ball { radius: f64 },
}

#[derive(Clone)]
pub struct Potential3D {
    evaluator: Evaluator3,
    support_box: [[f64; 2]; 3],
    kind: PotentialKind,
}

impl fmt::Debug for Potential3D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Potential3D({:?}, {:?})", self.kind, self.support_box)
    }
}

impl Potential3D {
    /// `support_box[i] = [lo, hi]` along axis i; V is taken to vanish outside.
    pub fn new(evaluator: Evaluator3, support_box: [[f64; 2]; 3]) -> Potential3D {
        Potential3D {
            evaluator,
            support_box,
            kind: PotentialKind::Opaque,
        }
    }

    pub fn ball(radius: f64) -> Potential3D {
        let r2 = radius * radius;
        Potential3D {
            evaluator: Arc::new(move |x, y, z| if x * x + y * y + z * z <= r2 { 1.0 } else { 0.0 }),
            support_box: [[-radius, radius]; 3],
            kind: PotentialKind::Ball { radius },
        }
    }

    pub fn kind(&self) -> &PotentialKind {
        &self.kind
    }

    pub fn support_box(&self) -> [[f64; 2]; 3] {
        self.support_box
    }

    pub fn eval(&self, x: f64, y: f64, z: f64) -> f64 {
        let inside = [x, y, z]
            .iter()
            .zip(&self.support_box)
            .all(|(v, [lo, hi])| v >= lo && v <= hi);
        if inside {
            (self.evaluator)(x, y, z)
        } else {
            0.0
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReduceSpec {
    /// Absolute tolerance of the adaptive x₃ integration.
    pub tol: f64,
    /// Tighter support for the planar weight; defaults to the disc shadow of
    /// a ball and to the x₁x₂ shadow of the support box otherwise.
    pub support: Option<Region>,
}

impl Default for ReduceSpec {
    fn default() -> Self {
        ReduceSpec {
            tol: 1e-13,
            support: None,
        }
    }
}

/// Planar weight obtained by integrating V along x₃ with adaptive
/// Gauss–Legendre over the support interval.
pub fn reduce_3d(v: &Potential3D, spec: &ReduceSpec) -> Result<Weight> {
    let [bx, by, bz] = v.support_box;
    let support = match (&spec.support, &v.kind) {
        (Some(r), _) => r.clone(),
        (None, PotentialKind::Ball { radius }) => Region::disc(Point::new(0.0, 0.0), *radius)?,
        (None, PotentialKind::Opaque) => Region::rectangle(bx[0], bx[1], by[0], by[1])?,
    };
    let pot = v.clone();
    let tol = spec.tol;
    let evaluator = Arc::new(move |p: Point| {
        let f = |x3: f64| pot.eval(p.re, p.im, x3);
        // integrate over the chord so the jump of the indicator sits at the endpoints
        let (a, b) = match pot.kind {
            PotentialKind::Ball { radius } => {
                let h = (radius * radius - p.norm_sqr()).max(0.0).sqrt();
                (-h, h)
            }
            PotentialKind::Opaque => (bz[0], bz[1]),
        };
        if a >= b {
            return 0.0;
        }
        integrate_adaptive(&f, a, b, tol)
    });
    let (class, sup) = match v.kind {
        PotentialKind::Ball { radius } => (GenericClass::Ball3d { radius }, Some(2.0 * radius)),
        PotentialKind::Opaque => (GenericClass::Opaque, None),
    };
    Weight::new(
        support,
        Density::Generic {
            evaluator,
            class,
            sup,
        },
    )
}
