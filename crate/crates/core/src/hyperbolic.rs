//! Geometry of the unit disc: pseudohyperbolic and Poincaré distances and the
//! disc automorphisms `λ ↦ e^{iθ}(λ − a)/(1 − āλ)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Points closer than this to the unit circle are rejected.
pub const DISC_MARGIN: f64 = 1e-15;

const FIT_TOLERANCE: f64 = 1e-10;

/// A point strictly inside the unit disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Complex64", into = "Complex64")]
pub struct DiscPoint(Complex64);

impl DiscPoint {
    pub fn new(value: Complex64) -> Result<Self> {
        if value.re.is_finite() && value.im.is_finite() && value.norm() < 1.0 - DISC_MARGIN {
            Ok(Self(value))
        } else {
            Err(Error::NotInDisc(format!("{value}")))
        }
    }

    pub fn from_re(re: f64) -> Result<Self> {
        Self::new(Complex64::new(re, 0.0))
    }

    pub fn origin() -> Self {
        Self(Complex64::new(0.0, 0.0))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }
}

impl TryFrom<Complex64> for DiscPoint {
    type Error = Error;

    fn try_from(value: Complex64) -> Result<Self> {
        Self::new(value)
    }
}

impl From<DiscPoint> for Complex64 {
    fn from(p: DiscPoint) -> Self {
        p.0
    }
}

/// `|(w − z)/(1 − w̄z)|` for complex scalars in the closed disc.
pub fn pseudo_distance_raw(w: Complex64, z: Complex64) -> f64 {
    let den = (Complex64::new(1.0, 0.0) - w.conj() * z).norm();
    if den == 0.0 {
        return 1.0;
    }
    ((w - z).norm() / den).min(1.0)
}

pub fn pseudo_distance(w: DiscPoint, z: DiscPoint) -> f64 {
    pseudo_distance_raw(w.0, z.0)
}

pub fn poincare_distance(w: DiscPoint, z: DiscPoint) -> f64 {
    pseudo_distance(w, z).atanh()
}

/// The automorphism `λ ↦ rotation·(λ − center)/(1 − conj(center)·λ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MobiusMap {
    rotation: Complex64,
    center: DiscPoint,
}

impl MobiusMap {
    pub fn new(rotation: Complex64, center: DiscPoint) -> Result<Self> {
        if (rotation.norm() - 1.0).abs() > 1e-14 {
            return Err(Error::InvalidParameter(format!(
                "rotation {rotation} is not unimodular"
            )));
        }
        Ok(Self { rotation, center })
    }

    pub fn identity() -> Self {
        Self {
            rotation: Complex64::new(1.0, 0.0),
            center: DiscPoint::origin(),
        }
    }

    /// Automorphism sending `center` to the origin with unit rotation.
    pub fn to_origin(center: DiscPoint) -> Self {
        Self {
            rotation: Complex64::new(1.0, 0.0),
            center,
        }
    }

    pub fn rotation(&self) -> Complex64 {
        self.rotation
    }

    pub fn center(&self) -> DiscPoint {
        self.center
    }

    /// Evaluates the map on any complex scalar where it is defined
    /// (in particular on the closed disc).
    pub fn apply(&self, lambda: Complex64) -> Complex64 {
        let c = self.center.0;
        self.rotation * (lambda - c) / (Complex64::new(1.0, 0.0) - c.conj() * lambda)
    }

    pub fn apply_point(&self, lambda: DiscPoint) -> Result<DiscPoint> {
        DiscPoint::new(self.apply(lambda.0))
    }

    pub fn inverse(&self) -> Self {
        let r = self.rotation;
        Self {
            rotation: r.conj(),
            center: DiscPoint(-r * self.center.0),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MobiusMap) -> Result<Self> {
        let [a1, b1, c1, d1] = self.matrix();
        let [a2, b2, c2, d2] = other.matrix();
        Self::from_matrix([
            a1 * a2 + b1 * c2,
            a1 * b2 + b1 * d2,
            c1 * a2 + d1 * c2,
            c1 * b2 + d1 * d2,
        ])
    }

    fn matrix(&self) -> [Complex64; 4] {
        let r = self.rotation;
        let c = self.center.0;
        [r, -r * c, -c.conj(), Complex64::new(1.0, 0.0)]
    }

    fn from_matrix([a, b, _c, d]: [Complex64; 4]) -> Result<Self> {
        if a.norm() == 0.0 || d.norm() == 0.0 {
            return Err(Error::InvalidParameter("singular Möbius matrix".into()));
        }
        let rotation = a / d;
        let center = -b / a;
        Ok(Self {
            rotation: rotation / rotation.norm(),
            center: DiscPoint::new(center)?,
        })
    }
}

/// Fits the disc automorphism sending each `pairs[i].0` to `pairs[i].1`.
///
/// Inputs and outputs may lie on the closed disc; the anchor pair (sent
/// through the origin) must be interior on both sides. One pair fixes the
/// rotation, the remaining pair is verified to `1e-10`.
pub fn mobius_fit(pairs: &[(Complex64, Complex64); 3]) -> Result<MobiusMap> {
    for (i, (x, y)) in pairs.iter().enumerate() {
        if x.norm() > 1.0 + 1e-12 || y.norm() > 1.0 + 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "pair {i} lies outside the closed disc"
            )));
        }
    }
    for i in 0..3 {
        for j in (i + 1)..3 {
            if (pairs[i].0 - pairs[j].0).norm() < 1e-12 {
                return Err(Error::InvalidParameter("fit inputs must be distinct".into()));
            }
        }
    }

    let slack = |(x, y): &(Complex64, Complex64)| (1.0 - x.norm()).min(1.0 - y.norm());
    let anchor = (0..3)
        .max_by(|&a, &b| slack(&pairs[a]).total_cmp(&slack(&pairs[b])))
        .unwrap_or(0);
    let (x0, y0) = pairs[anchor];
    let from = MobiusMap::to_origin(DiscPoint::new(x0)?);
    let to = MobiusMap::to_origin(DiscPoint::new(y0)?);

    // Rotation from the remaining pair whose image is farthest from the origin.
    let (u, w) = (0..3)
        .filter(|&i| i != anchor)
        .map(|i| (from.apply(pairs[i].0), to.apply(pairs[i].1)))
        .max_by(|a, b| a.0.norm().total_cmp(&b.0.norm()))
        .ok_or(Error::NoAutomorphism {
            deviation: f64::INFINITY,
        })?;
    if u.norm() < 1e-14 || w.norm() < 1e-14 {
        return Err(Error::NoAutomorphism {
            deviation: (u.norm() - w.norm()).abs(),
        });
    }
    let phase = w / u;
    let rotation = MobiusMap::new(phase / phase.norm(), DiscPoint::origin())?;
    let fitted = to.inverse().compose(&rotation.compose(&from)?)?;

    let deviation = pairs
        .iter()
        .map(|(x, y)| (fitted.apply(*x) - y).norm())
        .fold(0.0, f64::max);
    if deviation.is_finite() && deviation <= FIT_TOLERANCE {
        Ok(fitted)
    } else {
        Err(Error::NoAutomorphism { deviation })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn dp(re: f64, im: f64) -> DiscPoint {
        DiscPoint::new(c(re, im)).unwrap()
    }

    #[test]
    fn disc_point_rejects_boundary() {
        assert!(DiscPoint::new(c(1.0, 0.0)).is_err());
        assert!(DiscPoint::new(c(0.0, 1.0 - 1e-16)).is_err());
        assert!(DiscPoint::new(c(f64::NAN, 0.0)).is_err());
        assert!(DiscPoint::new(c(0.6, 0.79)).is_ok());
    }

    #[test]
    fn pseudo_distance_examples() {
        assert_abs_diff_eq!(pseudo_distance(dp(0.0, 0.0), dp(0.5, 0.0)), 0.5, epsilon = 1e-15);
        assert_eq!(pseudo_distance(dp(0.5, 0.0), dp(0.5, 0.0)), 0.0);
        assert_abs_diff_eq!(pseudo_distance(dp(0.5, 0.0), dp(-0.5, 0.0)), 0.8, epsilon = 1e-15);
    }

    #[test]
    fn poincare_distance_examples() {
        assert_eq!(poincare_distance(dp(0.0, 0.0), dp(0.0, 0.0)), 0.0);
        assert_abs_diff_eq!(
            poincare_distance(dp(0.0, 0.0), dp(1f64.tanh(), 0.0)),
            1.0,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            poincare_distance(dp(0.5, 0.0), dp(-0.5, 0.0)),
            0.8f64.atanh(),
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(0.8f64.atanh(), 1.0986, epsilon = 1e-4);
    }

    #[test]
    fn mobius_apply_examples() {
        let id = MobiusMap::identity();
        assert_eq!(id.apply(c(0.3, 0.0)), c(0.3, 0.0));
        let m = MobiusMap::new(c(1.0, 0.0), dp(0.5, 0.0)).unwrap();
        assert_abs_diff_eq!(m.apply(c(0.5, 0.0)).norm(), 0.0, epsilon = 1e-16);
        let back = m.inverse().apply(c(0.0, 0.0));
        assert_abs_diff_eq!((back - c(0.5, 0.0)).norm(), 0.0, epsilon = 1e-16);
    }

    #[test]
    fn rotation_must_be_unimodular() {
        assert!(MobiusMap::new(c(1.1, 0.0), DiscPoint::origin()).is_err());
    }

    #[test]
    fn mobius_maps_circle_to_circle() {
        let m = MobiusMap::new(c(0.6, 0.8), dp(-0.3, 0.45)).unwrap();
        for k in 0..64 {
            let z = Complex64::from_polar(1.0, k as f64 * 0.1);
            assert_abs_diff_eq!(m.apply(z).norm(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn compose_with_inverse_is_identity() {
        let m = MobiusMap::new(c(0.0, 1.0), dp(0.2, -0.7)).unwrap();
        let id = m.compose(&m.inverse()).unwrap();
        assert_abs_diff_eq!(id.center().value().norm(), 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!((id.rotation() - c(1.0, 0.0)).norm(), 0.0, epsilon = 1e-13);
    }

    #[test]
    fn fit_identity() {
        let pairs = [
            (c(0.0, 0.0), c(0.0, 0.0)),
            (c(0.5, 0.0), c(0.5, 0.0)),
            (c(-0.5, 0.0), c(-0.5, 0.0)),
        ];
        let m = mobius_fit(&pairs).unwrap();
        assert_abs_diff_eq!(m.center().value().norm(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!((m.rotation() - c(1.0, 0.0)).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn fit_boundary_extended_pairs() {
        // λ ↦ (λ + 1/3)/(1 + λ/3) fixes ±1 and sends 0 to 1/3.
        let target = |l: Complex64| (l + 1.0 / 3.0) / (1.0 + l / 3.0);
        let pairs = [
            (c(0.0, 0.0), c(1.0 / 3.0, 0.0)),
            (c(1.0, 0.0), c(1.0, 0.0)),
            (c(-1.0, 0.0), c(-1.0, 0.0)),
        ];
        let m = mobius_fit(&pairs).unwrap();
        for k in 0..16 {
            let l = Complex64::from_polar(0.9, k as f64 * 0.4);
            assert_abs_diff_eq!((m.apply(l) - target(l)).norm(), 0.0, epsilon = 1e-12);
        }
        assert_abs_diff_eq!((m.center().value() - c(-1.0 / 3.0, 0.0)).norm(), 0.0, epsilon = 1e-14);

        // Every automorphism of this form fixes −1, so −1 ↦ −1/2 is incompatible.
        let bad = [
            (c(0.0, 0.0), c(1.0 / 3.0, 0.0)),
            (c(1.0, 0.0), c(1.0, 0.0)),
            (c(-1.0, 0.0), c(-0.5, 0.0)),
        ];
        assert!(matches!(mobius_fit(&bad), Err(Error::NoAutomorphism { .. })));
    }

    #[test]
    fn fit_rejects_distance_violation() {
        let pairs = [
            (c(0.0, 0.0), c(0.0, 0.0)),
            (c(0.5, 0.0), c(0.5, 0.0)),
            (c(-0.5, 0.0), c(0.4, 0.0)),
        ];
        assert!(matches!(mobius_fit(&pairs), Err(Error::NoAutomorphism { .. })));
    }

    #[test]
    fn fit_rejects_repeated_inputs() {
        let pairs = [
            (c(0.1, 0.0), c(0.0, 0.0)),
            (c(0.1, 0.0), c(0.5, 0.0)),
            (c(-0.5, 0.0), c(0.4, 0.0)),
        ];
        assert!(matches!(mobius_fit(&pairs), Err(Error::InvalidParameter(_))));
    }
}
