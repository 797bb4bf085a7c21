use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {0} is not strictly inside the unit disc")]
    NotInDisc(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("point is outside the domain {0}")]
    OutsideDomain(String),
    #[error("no disc automorphism matches the given pairs (deviation {deviation:.3e})")]
    NoAutomorphism { deviation: f64 },
    #[error("square-root argument {re:.6e}{im:+.6e}i lies on the branch cut")]
    BranchFailure { re: f64, im: f64 },
    #[error("denominator {0:.3e} is too close to zero")]
    DenominatorUnderflow(f64),
    #[error("contour of radius {0} leaves the domain")]
    RadiusTooLarge(f64),
    #[error("pairing v(λ)·f'(λ) degenerates ({0:.3e})")]
    DegeneratePairing(f64),
    #[error("covector fields are attached to different geodesics")]
    MixedGeodesics,
    #[error("fiber function vanishes on the contour of radius {radius} (min modulus {min_modulus:.3e})")]
    ZeroOnContour { radius: f64, min_modulus: f64 },
    #[error("no root of the fiber equation inside the disc")]
    NoRootInDisc,
    #[error("fiber equation has {count} roots inside radius {radius}")]
    MultipleRoots { count: i64, radius: f64 },
    #[error("Newton iteration did not converge (last step {0:.3e})")]
    NewtonDivergence(f64),
    #[error("gradient is degenerate (norm {0:.3e})")]
    DegenerateGradient(f64),
    #[error("every sample was filtered out as degenerate")]
    AllSamplesDegenerate,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
}
