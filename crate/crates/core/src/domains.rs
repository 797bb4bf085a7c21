//! The four model domains, seeded samplers and the slit plane
//! `A = ℂ ∖ ((−∞, −1] ∪ [1, ∞))`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::par_map_range;
use crate::hyperbolic::DiscPoint;

/// Samplers keep points at least this far inside the boundary.
pub const SAMPLE_MARGIN: f64 = 1e-9;

/// Points per independent ChaCha stream. Fixed so that sample sets do not
/// depend on the thread count.
const SAMPLE_CHUNK: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainKind {
    UnitDisc,
    Bidisc,
    Ball2,
    SymBidisc,
}

impl DomainKind {
    pub fn dim(self) -> usize {
        match self {
            DomainKind::UnitDisc => 1,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DomainKind::UnitDisc => "unit-disc",
            DomainKind::Bidisc => "bidisc",
            DomainKind::Ball2 => "ball2",
            DomainKind::SymBidisc => "symbidisc",
        }
    }
}

impl fmt::Display for DomainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DomainKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "unit-disc" | "disc" => Ok(DomainKind::UnitDisc),
            "bidisc" => Ok(DomainKind::Bidisc),
            "ball2" | "ball" => Ok(DomainKind::Ball2),
            "symbidisc" | "g2" | "symmetrized-bidisc" => Ok(DomainKind::SymBidisc),
            other => Err(Error::InvalidParameter(format!("unknown domain `{other}`"))),
        }
    }
}

/// A point of ℂ¹ or ℂ². For the symmetrized bidisc the coordinates are `(s, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "Vec<Complex64>", try_from = "Vec<Complex64>")]
pub struct DomainPoint {
    coords: [Complex64; 2],
    dim: usize,
}

impl DomainPoint {
    pub fn one(z: Complex64) -> Self {
        Self {
            coords: [z, Complex64::new(0.0, 0.0)],
            dim: 1,
        }
    }

    pub fn two(z1: Complex64, z2: Complex64) -> Self {
        Self {
            coords: [z1, z2],
            dim: 2,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords[..self.dim]
    }

    pub fn z1(&self) -> Complex64 {
        self.coords[0]
    }

    pub fn z2(&self) -> Complex64 {
        self.coords[1]
    }

    pub fn pair(&self) -> [Complex64; 2] {
        self.coords
    }

    /// `self + t·direction` (direction padded with zeros).
    pub fn offset(&self, direction: &[Complex64], t: Complex64) -> Self {
        let mut out = *self;
        for (c, d) in out.coords.iter_mut().zip(direction).take(self.dim) {
            *c += t * d;
        }
        out
    }

    pub fn with_coord(&self, j: usize, value: Complex64) -> Self {
        let mut out = *self;
        out.coords[j] = value;
        out
    }

    pub fn max_abs_diff(&self, other: &DomainPoint) -> f64 {
        self.coords()
            .iter()
            .zip(other.coords())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl From<DomainPoint> for Vec<Complex64> {
    fn from(p: DomainPoint) -> Self {
        p.coords().to_vec()
    }
}

impl TryFrom<Vec<Complex64>> for DomainPoint {
    type Error = Error;

    fn try_from(v: Vec<Complex64>) -> Result<Self> {
        match v.as_slice() {
            [z] => Ok(Self::one(*z)),
            [z1, z2] => Ok(Self::two(*z1, *z2)),
            _ => Err(Error::DimensionMismatch {
                expected: 2,
                got: v.len(),
            }),
        }
    }
}

impl From<[Complex64; 2]> for DomainPoint {
    fn from(z: [Complex64; 2]) -> Self {
        DomainPoint::two(z[0], z[1])
    }
}

/// Result of a membership test. `margin` is positive exactly for interior
/// points: `1 − |z|`, `1 − max|zⱼ|`, `1 − ‖z‖`, or `1 − max|λᵢ|` over the
/// roots of `λ² − sλ + p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Membership {
    pub inside: bool,
    pub margin: f64,
}

fn check_dim(kind: DomainKind, z: &DomainPoint) -> Result<()> {
    if z.dim() != kind.dim() {
        return Err(Error::DimensionMismatch {
            expected: kind.dim(),
            got: z.dim(),
        });
    }
    Ok(())
}

pub fn contains(kind: DomainKind, z: &DomainPoint) -> Result<Membership> {
    check_dim(kind, z)?;
    let margin = match kind {
        DomainKind::UnitDisc => 1.0 - z.z1().norm(),
        DomainKind::Bidisc => 1.0 - z.z1().norm().max(z.z2().norm()),
        DomainKind::Ball2 => 1.0 - z.z1().norm().hypot(z.z2().norm()),
        DomainKind::SymBidisc => {
            let (a, b) = quadratic_roots(z.z1(), z.z2());
            1.0 - a.norm().max(b.norm())
        }
    };
    Ok(Membership {
        inside: margin > 0.0,
        margin,
    })
}

pub fn is_inside(kind: DomainKind, z: &DomainPoint) -> bool {
    contains(kind, z).map(|m| m.inside).unwrap_or(false)
}

/// Roots of `λ² − sλ + p`, computed without cancellation.
pub fn quadratic_roots(s: Complex64, p: Complex64) -> (Complex64, Complex64) {
    let disc = (s * s - 4.0 * p).sqrt();
    // Pick the sign that adds s and √Δ constructively.
    let q = if (s.conj() * disc).re >= 0.0 {
        0.5 * (s + disc)
    } else {
        0.5 * (s - disc)
    };
    if q.norm() == 0.0 {
        (q, q)
    } else {
        (q, p / q)
    }
}

pub fn symmetrize(l1: DiscPoint, l2: DiscPoint) -> DomainPoint {
    let (a, b) = (l1.value(), l2.value());
    DomainPoint::two(a + b, a * b)
}

pub fn pair_from_point(z: &DomainPoint) -> Result<(DiscPoint, DiscPoint)> {
    check_dim(DomainKind::SymBidisc, z)?;
    let (a, b) = quadratic_roots(z.z1(), z.z2());
    let outside = || Error::OutsideDomain(format!("symbidisc: {:?}", z.coords()));
    Ok((
        DiscPoint::new(a).map_err(|_| outside())?,
        DiscPoint::new(b).map_err(|_| outside())?,
    ))
}

fn sample_disc(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    loop {
        let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        if z.norm() < 1.0 {
            return z * radius;
        }
    }
}

fn sample_one(kind: DomainKind, rng: &mut ChaCha8Rng) -> DomainPoint {
    let r = 1.0 - SAMPLE_MARGIN;
    match kind {
        DomainKind::UnitDisc => DomainPoint::one(sample_disc(rng, r)),
        DomainKind::Bidisc => DomainPoint::two(sample_disc(rng, r), sample_disc(rng, r)),
        DomainKind::Ball2 => loop {
            let x: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm < r {
                break DomainPoint::two(Complex64::new(x[0], x[1]), Complex64::new(x[2], x[3]));
            }
        },
        DomainKind::SymBidisc => {
            let a = sample_disc(rng, r);
            let b = sample_disc(rng, r);
            DomainPoint::two(a + b, a * b)
        }
    }
}

/// Runs `draw` over `n` items split into fixed-size chunks, each driven by its
/// own ChaCha stream derived from `seed`.
pub fn seeded_batch<T, F>(n: usize, seed: u64, draw: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> T + Sync + Send,
{
    let chunks = n.div_ceil(SAMPLE_CHUNK);
    par_map_range(chunks, |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(c as u64);
        let len = SAMPLE_CHUNK.min(n - c * SAMPLE_CHUNK);
        (0..len).map(|_| draw(&mut rng)).collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect()
}

/// `n` points strictly inside `kind`, deterministic in `(n, seed)`.
pub fn sample(kind: DomainKind, n: usize, seed: u64) -> Vec<DomainPoint> {
    seeded_batch(n, seed, |rng| sample_one(kind, rng))
}

/// Uniform samples of the open disc of the given radius.
pub fn sample_disc_points(n: usize, radius: f64, seed: u64) -> Vec<Complex64> {
    seeded_batch(n, seed, |rng| sample_disc(rng, radius))
}

/// Radius `r` such that the open polydisc of radius `r` about `z` lies in the
/// domain.
///
/// For the symmetrized bidisc this is the Rouché bound: perturbing `(s, p)` by
/// less than `r` in each coordinate changes `λ² − sλ + p` by less than `2r` on
/// the unit circle, where the polynomial has modulus at least
/// `(1 − |λ₁|)(1 − |λ₂|)`.
pub fn boundary_distance_estimate(kind: DomainKind, z: &DomainPoint) -> Result<f64> {
    let m = contains(kind, z)?;
    if !m.inside {
        return Err(Error::OutsideDomain(format!("{kind}: {:?}", z.coords())));
    }
    Ok(match kind {
        DomainKind::UnitDisc | DomainKind::Bidisc => m.margin,
        DomainKind::Ball2 => m.margin / std::f64::consts::SQRT_2,
        DomainKind::SymBidisc => {
            let (a, b) = quadratic_roots(z.z1(), z.z2());
            0.5 * (1.0 - a.norm()) * (1.0 - b.norm())
        }
    })
}

/// Membership in `A` with the two rays thickened by `margin`.
pub fn region_a_contains(w: Complex64, margin: f64) -> bool {
    !(w.im.abs() <= margin && w.re.abs() >= 1.0 - margin)
}

/// Euclidean distance from `w` to `(−∞, −1] ∪ [1, ∞)`.
pub fn ray_distance(w: Complex64) -> f64 {
    if w.re.abs() >= 1.0 {
        w.im.abs()
    } else {
        (w - 1.0).norm().min((w + 1.0).norm())
    }
}

/// The involutive ball automorphism exchanging `a` and the origin.
pub fn ball_automorphism(a: [Complex64; 2], z: [Complex64; 2]) -> [Complex64; 2] {
    let aa = a[0].norm_sqr() + a[1].norm_sqr();
    let za = z[0] * a[0].conj() + z[1] * a[1].conj();
    let den = Complex64::new(1.0, 0.0) - za;
    if aa == 0.0 {
        return [-z[0], -z[1]];
    }
    let sa = (1.0 - aa).sqrt();
    let mut out = [Complex64::new(0.0, 0.0); 2];
    for j in 0..2 {
        let proj = za / aa * a[j];
        let orth = z[j] - proj;
        out[j] = (a[j] - proj - sa * orth) / den;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sym(s: f64, p: f64) -> DomainPoint {
        DomainPoint::two(c(s, 0.0), c(p, 0.0))
    }

    #[test]
    fn symbidisc_membership_examples() {
        assert!(contains(DomainKind::SymBidisc, &sym(0.0, 0.0)).unwrap().inside);
        let m = contains(DomainKind::SymBidisc, &sym(1.0, 0.25)).unwrap();
        assert!(m.inside);
        assert_abs_diff_eq!(m.margin, 0.5, epsilon = 1e-7);
        assert!(!contains(DomainKind::SymBidisc, &sym(2.0, 1.0)).unwrap().inside);
    }

    #[test]
    fn dimension_mismatch() {
        let e = contains(DomainKind::Bidisc, &DomainPoint::one(c(0.0, 0.0)));
        assert!(matches!(e, Err(Error::DimensionMismatch { expected: 2, got: 1 })));
    }

    #[test]
    fn symmetrize_examples() {
        let z = symmetrize(DiscPoint::origin(), DiscPoint::origin());
        assert_eq!(z.pair(), [c(0.0, 0.0), c(0.0, 0.0)]);
        let z = symmetrize(DiscPoint::from_re(0.5).unwrap(), DiscPoint::from_re(0.5).unwrap());
        assert_eq!(z.pair(), [c(1.0, 0.0), c(0.25, 0.0)]);
        let z = symmetrize(
            DiscPoint::from_re(0.5).unwrap(),
            DiscPoint::new(c(0.0, 0.6)).unwrap(),
        );
        assert_abs_diff_eq!((z.z1() - c(0.5, 0.6)).norm(), 0.0, epsilon = 1e-16);
        assert_abs_diff_eq!((z.z2() - c(0.0, 0.3)).norm(), 0.0, epsilon = 1e-16);
    }

    #[test]
    fn pair_from_point_examples() {
        let (a, b) = pair_from_point(&sym(0.0, 0.0)).unwrap();
        assert_eq!((a.value(), b.value()), (c(0.0, 0.0), c(0.0, 0.0)));
        let (a, b) = pair_from_point(&sym(1.0, 0.25)).unwrap();
        assert_abs_diff_eq!((a.value() - 0.5).norm(), 0.0, epsilon = 1e-7);
        assert_abs_diff_eq!((b.value() - 0.5).norm(), 0.0, epsilon = 1e-7);
        let (a, b) = pair_from_point(&sym(0.5, 0.3)).unwrap();
        assert_abs_diff_eq!((a.value() - b.value().conj()).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(a.value().norm_sqr(), 0.3, epsilon = 1e-15);
        assert!(matches!(pair_from_point(&sym(2.0, 1.0)), Err(Error::OutsideDomain(_))));
    }

    #[test]
    fn sampler_examples() {
        let one = sample(DomainKind::UnitDisc, 1, 42);
        assert_eq!(one.len(), 1);
        assert!(one[0].z1().norm() < 1.0);
        let g2 = sample(DomainKind::SymBidisc, 1000, 42);
        assert!(g2.iter().all(|z| is_inside(DomainKind::SymBidisc, z)));
        let ball = sample(DomainKind::Ball2, 1000, 7);
        assert_eq!(ball.len(), 1000);
        assert!(ball.iter().all(|z| z.z1().norm_sqr() + z.z2().norm_sqr() < 1.0));
    }

    #[test]
    fn sampler_is_deterministic() {
        assert_eq!(sample(DomainKind::Bidisc, 700, 3), sample(DomainKind::Bidisc, 700, 3));
        assert_ne!(sample(DomainKind::Bidisc, 10, 3), sample(DomainKind::Bidisc, 10, 4));
    }

    #[test]
    fn boundary_distance_examples() {
        let r = boundary_distance_estimate(DomainKind::Bidisc, &sym(0.0, 0.0)).unwrap();
        assert_eq!(r, 1.0);
        let r = boundary_distance_estimate(DomainKind::Bidisc, &sym(0.2, 0.6)).unwrap();
        assert_abs_diff_eq!(r, 0.4, epsilon = 1e-15);
        let r = boundary_distance_estimate(DomainKind::Ball2, &sym(0.5, -0.5)).unwrap();
        assert_abs_diff_eq!(r, (1.0 - 0.5f64.sqrt()) / 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(r, 0.207, epsilon = 1e-3);
        // At the origin of 𝔾₂ the bound is sharp: (r, r) is interior iff r < 1/2.
        let r = boundary_distance_estimate(DomainKind::SymBidisc, &sym(0.0, 0.0)).unwrap();
        assert_eq!(r, 0.5);
        assert!(boundary_distance_estimate(DomainKind::Ball2, &sym(0.9, 0.9)).is_err());
    }

    #[test]
    fn region_a_examples() {
        assert!(region_a_contains(c(0.0, 0.0), 1e-9));
        assert!(!region_a_contains(c(1.5, 0.0), 1e-9));
        assert!(!region_a_contains(c(-3.0, 0.0), 1e-9));
        assert!(region_a_contains(c(0.99, 0.1), 1e-9));
        assert_eq!(ray_distance(c(0.0, 0.0)), 1.0);
        assert_abs_diff_eq!(ray_distance(c(2.0, -0.25)), 0.25);
    }

    #[test]
    fn ball_automorphism_swaps_point_and_origin() {
        let a = [c(0.3, -0.2), c(0.1, 0.5)];
        let at_a = ball_automorphism(a, a);
        assert_abs_diff_eq!(at_a[0].norm() + at_a[1].norm(), 0.0, epsilon = 1e-15);
        let z = [c(-0.4, 0.1), c(0.2, 0.2)];
        let back = ball_automorphism(a, ball_automorphism(a, z));
        assert_abs_diff_eq!((back[0] - z[0]).norm() + (back[1] - z[1]).norm(), 0.0, epsilon = 1e-14);
    }
}
