//! Catalogue of complex geodesics `𝔻 → D` with closed-form derivatives.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domains::{DomainKind, DomainPoint};
use crate::error::{Error, Result};
use crate::hyperbolic::DiscPoint;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Holomorphic self-maps `ψ` of the (closed) disc used by [`GeodesicSpec::BidiscGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MultiplierSpec {
    Constant { c: Complex64 },
    Identity,
    /// `λ ↦ (λ − a)/(1 − āλ)`.
    BlaschkeFactor { center: DiscPoint },
}

impl MultiplierSpec {
    pub fn constant(c: Complex64) -> Result<Self> {
        if c.norm() > 1.0 {
            return Err(Error::InvalidParameter(format!("|c| = {} > 1", c.norm())));
        }
        Ok(Self::Constant { c })
    }

    pub fn eval(&self, l: Complex64) -> Complex64 {
        match *self {
            MultiplierSpec::Constant { c } => c,
            MultiplierSpec::Identity => l,
            MultiplierSpec::BlaschkeFactor { center } => {
                let a = center.value();
                (l - a) / (ONE - a.conj() * l)
            }
        }
    }

    pub fn derivative(&self, l: Complex64) -> Complex64 {
        match *self {
            MultiplierSpec::Constant { .. } => Complex64::new(0.0, 0.0),
            MultiplierSpec::Identity => ONE,
            MultiplierSpec::BlaschkeFactor { center } => {
                let a = center.value();
                let den = ONE - a.conj() * l;
                (1.0 - a.norm_sqr()) / (den * den)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GeodesicSpec {
    /// `λ ↦ (λ, λ)` in the bidisc.
    Diagonal,
    /// `λ ↦ (λ, λψ(λ))` in the bidisc.
    BidiscGraph { psi: MultiplierSpec },
    /// `λ ↦ (2λ, λ²)` in the symmetrized bidisc.
    Royal,
    /// `λ ↦ (β + β̄λ, λ)` in the symmetrized bidisc.
    Flat { beta: DiscPoint },
    /// `λ ↦ ((t² + λ)/(1 + t²), t(λ − 1)/(1 + t²))` in the ball.
    BallFamily { t: f64 },
    /// `λ ↦ (λ, 0)` in the ball.
    BallAxis,
}

impl GeodesicSpec {
    pub fn ball_family(t: f64) -> Result<Self> {
        if !t.is_finite() || t.abs() > 10.0 {
            return Err(Error::InvalidParameter(format!("ball family parameter {t} outside [-10, 10]")));
        }
        Ok(Self::BallFamily { t })
    }

    pub fn codomain(&self) -> DomainKind {
        match self {
            GeodesicSpec::Diagonal | GeodesicSpec::BidiscGraph { .. } => DomainKind::Bidisc,
            GeodesicSpec::Royal | GeodesicSpec::Flat { .. } => DomainKind::SymBidisc,
            GeodesicSpec::BallFamily { .. } | GeodesicSpec::BallAxis => DomainKind::Ball2,
        }
    }

    /// Evaluates on any complex scalar; the image is in the codomain for `|λ| < 1`.
    pub fn eval_raw(&self, l: Complex64) -> [Complex64; 2] {
        match *self {
            GeodesicSpec::Diagonal => [l, l],
            GeodesicSpec::BidiscGraph { psi } => [l, l * psi.eval(l)],
            GeodesicSpec::Royal => [2.0 * l, l * l],
            GeodesicSpec::Flat { beta } => {
                let b = beta.value();
                [b + b.conj() * l, l]
            }
            GeodesicSpec::BallFamily { t } => {
                let n = 1.0 + t * t;
                [(t * t + l) / n, t * (l - 1.0) / n]
            }
            GeodesicSpec::BallAxis => [l, Complex64::new(0.0, 0.0)],
        }
    }

    pub fn derivative_raw(&self, l: Complex64) -> [Complex64; 2] {
        match *self {
            GeodesicSpec::Diagonal => [ONE, ONE],
            GeodesicSpec::BidiscGraph { psi } => [ONE, psi.eval(l) + l * psi.derivative(l)],
            GeodesicSpec::Royal => [Complex64::new(2.0, 0.0), 2.0 * l],
            GeodesicSpec::Flat { beta } => [beta.value().conj(), ONE],
            GeodesicSpec::BallFamily { t } => {
                let n = 1.0 + t * t;
                [ONE / n, Complex64::new(t / n, 0.0)]
            }
            GeodesicSpec::BallAxis => [ONE, Complex64::new(0.0, 0.0)],
        }
    }

    pub fn eval(&self, l: DiscPoint) -> DomainPoint {
        let [a, b] = self.eval_raw(l.value());
        DomainPoint::two(a, b)
    }

    pub fn derivative(&self, l: DiscPoint) -> [Complex64; 2] {
        self.derivative_raw(l.value())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::is_inside;
    use crate::numerics::{cauchy_derivative, radial_angular_grid};
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn catalogue() -> Vec<GeodesicSpec> {
        vec![
            GeodesicSpec::Diagonal,
            GeodesicSpec::BidiscGraph { psi: MultiplierSpec::constant(c(0.3, 0.4)).unwrap() },
            GeodesicSpec::BidiscGraph { psi: MultiplierSpec::Identity },
            GeodesicSpec::BidiscGraph {
                psi: MultiplierSpec::BlaschkeFactor { center: DiscPoint::new(c(0.5, -0.2)).unwrap() },
            },
            GeodesicSpec::Royal,
            GeodesicSpec::Flat { beta: DiscPoint::origin() },
            GeodesicSpec::Flat { beta: DiscPoint::new(c(0.3, 0.6)).unwrap() },
            GeodesicSpec::ball_family(0.5).unwrap(),
            GeodesicSpec::ball_family(1.0).unwrap(),
            GeodesicSpec::ball_family(-2.0).unwrap(),
            GeodesicSpec::BallAxis,
        ]
    }

    #[test]
    fn eval_examples() {
        let half = DiscPoint::from_re(0.5).unwrap();
        assert_eq!(GeodesicSpec::Royal.eval(half).pair(), [c(1.0, 0.0), c(0.25, 0.0)]);
        let flat = GeodesicSpec::Flat { beta: DiscPoint::origin() };
        assert_eq!(flat.eval(DiscPoint::from_re(0.3).unwrap()).pair(), [c(0.0, 0.0), c(0.3, 0.0)]);
        let ball = GeodesicSpec::ball_family(1.0).unwrap();
        assert_eq!(ball.eval(DiscPoint::origin()).pair(), [c(0.5, 0.0), c(-0.5, 0.0)]);
    }

    #[test]
    fn derivative_examples() {
        let l = DiscPoint::new(c(0.1, -0.7)).unwrap();
        assert_eq!(GeodesicSpec::Diagonal.derivative(l), [c(1.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(
            GeodesicSpec::Royal.derivative(DiscPoint::from_re(0.5).unwrap()),
            [c(2.0, 0.0), c(1.0, 0.0)]
        );
        let beta = DiscPoint::new(c(0.2, 0.3)).unwrap();
        assert_eq!(GeodesicSpec::Flat { beta }.derivative(l), [c(0.2, -0.3), c(1.0, 0.0)]);
    }

    #[test]
    fn codomains() {
        assert_eq!(GeodesicSpec::Royal.codomain(), DomainKind::SymBidisc);
        assert_eq!(GeodesicSpec::Diagonal.codomain(), DomainKind::Bidisc);
        assert_eq!(GeodesicSpec::ball_family(3.0).unwrap().codomain(), DomainKind::Ball2);
        assert!(GeodesicSpec::ball_family(11.0).is_err());
    }

    #[test]
    fn images_stay_in_codomain() {
        let grid = radial_angular_grid(256);
        for g in catalogue() {
            for &l in &grid {
                assert!(is_inside(g.codomain(), &g.eval(l)), "{g:?} at {l:?}");
            }
        }
    }

    #[test]
    fn derivative_matches_contour_differentiation() {
        let grid = radial_angular_grid(64);
        for g in catalogue() {
            for &l in &grid {
                let lv = l.value();
                let radius = 0.5 * (1.0 - lv.norm());
                let exact = g.derivative(l);
                for (j, e) in exact.iter().enumerate() {
                    let d = cauchy_derivative(|z| Ok(g.eval_raw(z)[j]), lv, radius, 64).unwrap();
                    assert_abs_diff_eq!((d - e).norm(), 0.0, epsilon = 1e-10);
                }
            }
        }
    }

    #[test]
    fn multipliers_stay_in_closed_disc() {
        let psis = [
            MultiplierSpec::constant(c(0.0, 1.0)).unwrap(),
            MultiplierSpec::Identity,
            MultiplierSpec::BlaschkeFactor { center: DiscPoint::new(c(-0.9, 0.1)).unwrap() },
        ];
        for psi in psis {
            for l in radial_angular_grid(128) {
                assert!(psi.eval(l.value()).norm() <= 1.0);
            }
        }
        assert!(MultiplierSpec::constant(c(1.0, 0.1)).is_err());
    }
}
