use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("union parts must be pairwise disjoint for quadrature")]
    OverlappingUnion,

    #[error("degenerate weight: {0}")]
    DegenerateWeight(String),

    #[error("moment table numerically degenerate (degenerate moment matrix at degree {degree}); increase precision")]
    DegenerateMoments { degree: usize },

    #[error("degenerate moment matrix at degree {degree}; raise precision or lower N")]
    DegenerateMomentMatrix { degree: usize },

    #[error("window too small: {points} points, need at least 4")]
    WindowTooSmall { points: usize },

    #[error("root finder did not converge for degree {degree}")]
    RootFinder { degree: usize },

    #[error("degenerate boundary sample: all points coincide")]
    DegenerateSample,

    #[error("only {converged} ladder degrees converged, need at least 3")]
    TooFewConverged { converged: usize },

    #[error("matrix is not Hermitian (relative defect {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("oracle requires centered radial weight")]
    OracleNotApplicable,

    #[error("bounds not derivable for this density class")]
    BoundsNotDerivable,

    #[error("only {trusted} trusted eigenvalues; raise precision to extend the trusted spectral tail")]
    TrustedTailTooShort { trusted: usize },

    #[error("provenance mismatch: {0}")]
    ProvenanceMismatch(String),

    #[error("coefficient overflow in symbolic creation-operator expansion")]
    CoefficientOverflow,
}
