//! Complex geodesics, left inverses and invariant distances on four model
//! domains: the unit disc, the bidisc, the Euclidean ball in ℂ² and the
//! symmetrized bidisc 𝔾₂.
//!
//! Every formula is an evaluable object, and every claim about it is a
//! check that produces a [`verify::VerificationReport`] with explicit
//! residuals and tolerances.

pub mod domains;
pub mod error;
pub mod exec;
pub mod geodesics;
pub mod hyperbolic;
pub mod inverses;
pub mod lempertize;
pub mod metrics;
pub mod numerics;
pub mod suite;
pub mod verify;

pub use domains::{DomainKind, DomainPoint};
pub use error::{Error, Result};
pub use geodesics::{GeodesicSpec, MultiplierSpec};
pub use hyperbolic::{DiscPoint, MobiusMap};
pub use inverses::{HSpec, LeftInverseSpec};
pub use lempertize::{CovectorField, LempertCandidate, RootSolveConfig};
