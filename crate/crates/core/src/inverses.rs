//! Catalogue of left inverses `G: D → 𝔻` with closed-form gradients, and the
//! contour-integral gradient used when no closed form exists.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::domains::{boundary_distance_estimate, contains, DomainKind, DomainPoint};
use crate::error::{Error, Result};
use crate::lempertize::ConstructedInverse;
use crate::numerics::circle_point;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const DENOMINATOR_FLOOR: f64 = 1e-14;

pub const DEFAULT_GRADIENT_NODES: usize = 64;
pub const DEFAULT_GRADIENT_RADIUS_FACTOR: f64 = 0.5;

/// Holomorphic `h: 𝔻² → 𝔻̄` entering the bidisc left-inverse family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum HSpec {
    Constant { c: Complex64 },
    /// `z ↦ z_axis`, axis ∈ {1, 2}.
    Coordinate { axis: usize },
    /// `z ↦ z₁z₂`.
    Product,
}

impl HSpec {
    pub fn constant(c: Complex64) -> Result<Self> {
        if c.norm() > 1.0 {
            return Err(Error::InvalidParameter(format!("|h| = {} > 1", c.norm())));
        }
        Ok(Self::Constant { c })
    }

    pub fn coordinate(axis: usize) -> Result<Self> {
        match axis {
            1 | 2 => Ok(Self::Coordinate { axis }),
            _ => Err(Error::InvalidParameter(format!("axis {axis} not in {{1, 2}}"))),
        }
    }

    pub fn eval(&self, z: [Complex64; 2]) -> Complex64 {
        match *self {
            HSpec::Constant { c } => c,
            HSpec::Coordinate { axis } => z[axis - 1],
            HSpec::Product => z[0] * z[1],
        }
    }

    pub fn gradient(&self, z: [Complex64; 2]) -> [Complex64; 2] {
        match *self {
            HSpec::Constant { .. } => [ZERO, ZERO],
            HSpec::Coordinate { axis: 1 } => [ONE, ZERO],
            HSpec::Coordinate { .. } => [ZERO, ONE],
            HSpec::Product => [z[1], z[0]],
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LeftInverseSpec {
    /// `z ↦ z_axis` on the bidisc.
    BidiscProjection { axis: usize },
    /// `z ↦ t·z₁ + (1 − t)·z₂` on the bidisc.
    BidiscAffine { t: f64 },
    /// `(t z₁ + (1−t) z₂ − z₁z₂h) / (1 − ((1−t) z₁ + t z₂) h)` on the bidisc.
    BidiscFamily { t: f64, h: HSpec },
    /// `Ψ_ω(s, p) = (2p − ωs)/(2 − ω̄s)`, `|ω| ≤ 1`.
    PsiOmega { omega: Complex64 },
    /// `−ω̄·Ψ_ω`, `|ω| = 1`.
    RoyalMinusPsi { omega: Complex64 },
    /// `Φ(s, p) = s / (1 + p + √((1 + p)² − s²))`, principal root.
    RoyalPhi,
    /// `z₁ / √(1 − z₂²)` on the ball.
    BallSimple,
    /// `(2z₁(1 − z₁) − z₂²) / (2(1 − z₁) − z₂²)` on the ball.
    BallRefined,
    /// Solution map of a fiber equation, see [`crate::lempertize::build_inverse`].
    Constructed(Arc<ConstructedInverse>),
}

fn check_unit_interval(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("t = {t} not in [0, 1]")))
    }
}

fn checked_div(num: Complex64, den: Complex64) -> Result<Complex64> {
    if den.norm() < DENOMINATOR_FLOOR {
        return Err(Error::DenominatorUnderflow(den.norm()));
    }
    Ok(num / den)
}

/// Principal square root, refusing arguments on the closed negative real axis.
fn principal_sqrt(w: Complex64) -> Result<Complex64> {
    if w.re <= 0.0 && w.im.abs() <= 1e-15 * w.norm().max(1e-300) || w.norm() == 0.0 {
        return Err(Error::BranchFailure { re: w.re, im: w.im });
    }
    Ok(w.sqrt())
}

impl LeftInverseSpec {
    pub fn bidisc_projection(axis: usize) -> Result<Self> {
        match axis {
            1 | 2 => Ok(Self::BidiscProjection { axis }),
            _ => Err(Error::InvalidParameter(format!("axis {axis} not in {{1, 2}}"))),
        }
    }

    pub fn bidisc_affine(t: f64) -> Result<Self> {
        check_unit_interval(t)?;
        Ok(Self::BidiscAffine { t })
    }

    pub fn bidisc_family(t: f64, h: HSpec) -> Result<Self> {
        check_unit_interval(t)?;
        Ok(Self::BidiscFamily { t, h })
    }

    pub fn psi_omega(omega: Complex64) -> Result<Self> {
        if omega.norm() > 1.0 + 1e-14 {
            return Err(Error::InvalidParameter(format!("|ω| = {} > 1", omega.norm())));
        }
        Ok(Self::PsiOmega { omega })
    }

    pub fn royal_minus_psi(omega: Complex64) -> Result<Self> {
        if (omega.norm() - 1.0).abs() > 1e-14 {
            return Err(Error::InvalidParameter(format!("|ω| = {} ≠ 1", omega.norm())));
        }
        Ok(Self::RoyalMinusPsi { omega })
    }

    pub fn domain(&self) -> DomainKind {
        match self {
            LeftInverseSpec::BidiscProjection { .. }
            | LeftInverseSpec::BidiscAffine { .. }
            | LeftInverseSpec::BidiscFamily { .. } => DomainKind::Bidisc,
            LeftInverseSpec::PsiOmega { .. }
            | LeftInverseSpec::RoyalMinusPsi { .. }
            | LeftInverseSpec::RoyalPhi => DomainKind::SymBidisc,
            LeftInverseSpec::BallSimple | LeftInverseSpec::BallRefined => DomainKind::Ball2,
            LeftInverseSpec::Constructed(c) => c.domain(),
        }
    }

    pub fn name(&self) -> String {
        match self {
            LeftInverseSpec::BidiscProjection { axis } => format!("projection:{axis}"),
            LeftInverseSpec::BidiscAffine { t } => format!("affine:t={t}"),
            LeftInverseSpec::BidiscFamily { t, h } => format!("family:t={t},h={h:?}"),
            LeftInverseSpec::PsiOmega { omega } => format!("psi:omega={omega}"),
            LeftInverseSpec::RoyalMinusPsi { omega } => format!("royal-psi:omega={omega}"),
            LeftInverseSpec::RoyalPhi => "phi".into(),
            LeftInverseSpec::BallSimple => "ball-simple".into(),
            LeftInverseSpec::BallRefined => "ball-refined".into(),
            LeftInverseSpec::Constructed(_) => "constructed".into(),
        }
    }

    fn check_dim(&self, z: &DomainPoint) -> Result<()> {
        let expected = self.domain().dim();
        if z.dim() != expected {
            return Err(Error::DimensionMismatch { expected, got: z.dim() });
        }
        Ok(())
    }

    /// Evaluates `G(z)`. Membership of `z` is the caller's responsibility;
    /// formula breakdowns surface as `BranchFailure` or `DenominatorUnderflow`.
    pub fn eval(&self, z: &DomainPoint) -> Result<Complex64> {
        self.check_dim(z)?;
        let [z1, z2] = z.pair();
        match self {
            LeftInverseSpec::BidiscProjection { axis } => Ok(z.pair()[axis - 1]),
            LeftInverseSpec::BidiscAffine { t } => Ok(*t * z1 + (1.0 - t) * z2),
            LeftInverseSpec::BidiscFamily { t, h } => {
                let hv = h.eval([z1, z2]);
                let num = *t * z1 + (1.0 - t) * z2 - z1 * z2 * hv;
                let den = ONE - ((1.0 - t) * z1 + *t * z2) * hv;
                checked_div(num, den)
            }
            LeftInverseSpec::PsiOmega { omega } => psi(*omega, z1, z2),
            LeftInverseSpec::RoyalMinusPsi { omega } => Ok(-omega.conj() * psi(*omega, z1, z2)?),
            LeftInverseSpec::RoyalPhi => {
                let q = ONE + z2;
                let root = principal_sqrt(q * q - z1 * z1)?;
                checked_div(z1, q + root)
            }
            LeftInverseSpec::BallSimple => {
                let root = principal_sqrt(ONE - z2 * z2)?;
                checked_div(z1, root)
            }
            LeftInverseSpec::BallRefined => {
                let num = 2.0 * z1 * (ONE - z1) - z2 * z2;
                let den = 2.0 * (ONE - z1) - z2 * z2;
                checked_div(num, den)
            }
            LeftInverseSpec::Constructed(c) => c.eval(z),
        }
    }

    /// Holomorphic gradient `(∂G/∂z₁, ∂G/∂z₂)`; closed form for every
    /// catalogue variant, contour differentiation for constructed inverses.
    pub fn gradient(&self, z: &DomainPoint) -> Result<[Complex64; 2]> {
        self.check_dim(z)?;
        let [z1, z2] = z.pair();
        match self {
            LeftInverseSpec::BidiscProjection { axis: 1 } => Ok([ONE, ZERO]),
            LeftInverseSpec::BidiscProjection { .. } => Ok([ZERO, ONE]),
            LeftInverseSpec::BidiscAffine { t } => Ok([(*t).into(), (1.0 - t).into()]),
            LeftInverseSpec::BidiscFamily { t, h } => {
                let t = *t;
                let hv = h.eval([z1, z2]);
                let [h1, h2] = h.gradient([z1, z2]);
                let lin = (1.0 - t) * z1 + t * z2;
                let num = t * z1 + (1.0 - t) * z2 - z1 * z2 * hv;
                let den = ONE - lin * hv;
                if den.norm() < DENOMINATOR_FLOOR {
                    return Err(Error::DenominatorUnderflow(den.norm()));
                }
                let n1 = t - z2 * hv - z1 * z2 * h1;
                let n2 = (1.0 - t) - z1 * hv - z1 * z2 * h2;
                let d1 = -(1.0 - t) * hv - lin * h1;
                let d2 = -t * hv - lin * h2;
                let den2 = den * den;
                Ok([(n1 * den - num * d1) / den2, (n2 * den - num * d2) / den2])
            }
            LeftInverseSpec::PsiOmega { omega } => psi_gradient(*omega, z1, z2),
            LeftInverseSpec::RoyalMinusPsi { omega } => {
                let [a, b] = psi_gradient(*omega, z1, z2)?;
                let k = -omega.conj();
                Ok([k * a, k * b])
            }
            LeftInverseSpec::RoyalPhi => {
                let q = ONE + z2;
                let root = principal_sqrt(q * q - z1 * z1)?;
                let den = q + root;
                if den.norm() < DENOMINATOR_FLOOR {
                    return Err(Error::DenominatorUnderflow(den.norm()));
                }
                let den2 = den * den;
                Ok([(den + z1 * z1 / root) / den2, -z1 * (ONE + q / root) / den2])
            }
            LeftInverseSpec::BallSimple => {
                let root = principal_sqrt(ONE - z2 * z2)?;
                Ok([ONE / root, z1 * z2 / (root * root * root)])
            }
            LeftInverseSpec::BallRefined => {
                let num = 2.0 * z1 * (ONE - z1) - z2 * z2;
                let den = 2.0 * (ONE - z1) - z2 * z2;
                if den.norm() < DENOMINATOR_FLOOR {
                    return Err(Error::DenominatorUnderflow(den.norm()));
                }
                let den2 = den * den;
                Ok([
                    ((2.0 - 4.0 * z1) * den + 2.0 * num) / den2,
                    2.0 * z2 * (num - den) / den2,
                ])
            }
            LeftInverseSpec::Constructed(_) => self.default_numeric_gradient(z),
        }
    }

    /// Contour-integral gradient with radius `0.5 ×` the boundary-distance
    /// estimate and 64 nodes.
    pub fn default_numeric_gradient(&self, z: &DomainPoint) -> Result<[Complex64; 2]> {
        let domain = self.domain();
        let radius = DEFAULT_GRADIENT_RADIUS_FACTOR * boundary_distance_estimate(domain, z)?;
        numeric_gradient(&|w: &DomainPoint| self.eval(w), domain, z, radius, DEFAULT_GRADIENT_NODES)
    }
}

fn psi(omega: Complex64, s: Complex64, p: Complex64) -> Result<Complex64> {
    checked_div(2.0 * p - omega * s, 2.0 - omega.conj() * s)
}

fn psi_gradient(omega: Complex64, s: Complex64, p: Complex64) -> Result<[Complex64; 2]> {
    let den = 2.0 - omega.conj() * s;
    if den.norm() < DENOMINATOR_FLOOR {
        return Err(Error::DenominatorUnderflow(den.norm()));
    }
    Ok([2.0 * (omega.conj() * p - omega) / (den * den), 2.0 / den])
}

/// Gradient of a holomorphic scalar map by the trapezoid rule on the circles
/// `z + ρe^{iθ}eⱼ`: `∂ⱼF(z) ≈ (1/N) Σₖ (F(z + ρζₖeⱼ) − F(z)) / (ρζₖ)`.
///
/// `nodes` must be a power of two ≥ 16; every node must lie in `domain`.
pub fn numeric_gradient(
    evaluator: &(dyn Fn(&DomainPoint) -> Result<Complex64> + Sync),
    domain: DomainKind,
    z: &DomainPoint,
    radius: f64,
    nodes: usize,
) -> Result<[Complex64; 2]> {
    if nodes < 16 || !nodes.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "node count {nodes} must be a power of two ≥ 16"
        )));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidParameter(format!("radius {radius} must be positive")));
    }
    let f0 = evaluator(z)?;
    let mut out = [ZERO; 2];
    for (j, slot) in out.iter_mut().enumerate().take(z.dim()) {
        let mut acc = ZERO;
        for k in 0..nodes {
            let offset = circle_point(ZERO, radius, k, nodes);
            let w = z.with_coord(j, z.pair()[j] + offset);
            if !contains(domain, &w)?.inside {
                return Err(Error::RadiusTooLarge(radius));
            }
            acc += (evaluator(&w)? - f0) / offset;
        }
        *slot = acc / nodes as f64;
    }
    Ok(out)
}
