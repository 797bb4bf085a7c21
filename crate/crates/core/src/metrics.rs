//! Carathéodory and Lempert distances (tanh-normalized) on the model domains.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::domains::{ball_automorphism, contains, sample, sample_disc_points, DomainKind, DomainPoint};
use crate::error::{Error, Result};
use crate::exec::par_map;
use crate::geodesics::GeodesicSpec;
use crate::hyperbolic::{pseudo_distance_raw, DiscPoint};
use crate::numerics::golden_section_max;
use crate::verify::{Comparison, VerificationReport};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Circle grid for the `Ψ_ω` optimization on 𝔾₂.
pub const OMEGA_GRID: usize = 256;
const OMEGA_ANGLE_TOLERANCE: f64 = 1e-10;
/// Tolerance for detecting that a pair lies on a catalogue geodesic.
pub const GEODESIC_DETECTION_TOLERANCE: f64 = 1e-10;

/// Explicit analytic discs used as Lempert witnesses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AnalyticDisc {
    /// `λ ↦ λ`.
    Identity,
    /// `λ ↦ (φ_{−w₁}(c₁λ), φ_{−w₂}(c₂λ))` with `φ_{−a}(ζ) = (ζ + a)/(1 + āζ)`.
    Bidisc { w: [Complex64; 2], c: [Complex64; 2] },
    /// `λ ↦ Φ_w(λu)` for the involutive ball automorphism `Φ_w` and a unit vector `u`.
    Ball { w: [Complex64; 2], u: [Complex64; 2] },
    Geodesic { geodesic: GeodesicSpec },
}

impl AnalyticDisc {
    pub fn eval(&self, l: Complex64) -> Vec<Complex64> {
        match *self {
            AnalyticDisc::Identity => vec![l],
            AnalyticDisc::Bidisc { w, c } => (0..2)
                .map(|j| {
                    let zeta = c[j] * l;
                    (zeta + w[j]) / (ONE + w[j].conj() * zeta)
                })
                .collect(),
            AnalyticDisc::Ball { w, u } => ball_automorphism(w, [l * u[0], l * u[1]]).to_vec(),
            AnalyticDisc::Geodesic { geodesic } => geodesic.eval_raw(l).to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// The distance is the pseudo-distance itself.
    Direct,
    /// 1-based coordinate attaining the maximum.
    Coordinate { index: usize },
    /// The automorphism of the ball moving `w` to the origin.
    BallAutomorphism,
    /// `ω` maximizing `m(Ψ_ω(w), Ψ_ω(z))`.
    Omega { omega: Complex64 },
    /// A disc with `f(λ_w) = w`, `f(λ_z) = z`.
    Disc {
        disc: AnalyticDisc,
        lambda_w: Complex64,
        lambda_z: Complex64,
    },
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceResult {
    pub value_star: f64,
    pub witness: Witness,
    pub method: &'static str,
}

/// `Ψ_ω(s, p) = (2p − ωs)/(2 − ω̄s)`.
pub fn psi(omega: Complex64, z: &DomainPoint) -> Complex64 {
    (2.0 * z.z2() - omega * z.z1()) / (2.0 - omega.conj() * z.z1())
}

fn require_inside(d: DomainKind, z: &DomainPoint) -> Result<()> {
    if !contains(d, z)?.inside {
        return Err(Error::OutsideDomain(format!("{d}: {:?}", z.coords())));
    }
    Ok(())
}

/// `‖Φ_w(z)‖`, invariant distance on the ball.
fn ball_star(w: &DomainPoint, z: &DomainPoint) -> f64 {
    let v = ball_automorphism(w.pair(), z.pair());
    (v[0].norm_sqr() + v[1].norm_sqr()).sqrt()
}

/// `√(1 − (1 − ‖w‖²)(1 − ‖z‖²)/|1 − ⟨z, w⟩|²)`.
pub fn ball_star_classical(w: &DomainPoint, z: &DomainPoint) -> f64 {
    let nw = w.z1().norm_sqr() + w.z2().norm_sqr();
    let nz = z.z1().norm_sqr() + z.z2().norm_sqr();
    let inner = z.z1() * w.z1().conj() + z.z2() * w.z2().conj();
    (1.0 - (1.0 - nw) * (1.0 - nz) / (ONE - inner).norm_sqr()).max(0.0).sqrt()
}

fn g2_objective(w: &DomainPoint, z: &DomainPoint, theta: f64) -> f64 {
    let omega = Complex64::from_polar(1.0, theta);
    pseudo_distance_raw(psi(omega, w), psi(omega, z))
}

/// `max_{|ω|=1} m(Ψ_ω(w), Ψ_ω(z))` by a grid scan and golden-section
/// refinement of the two best local maxima. Returns `(value, ω)`.
pub fn symbidisc_caratheodory(w: &DomainPoint, z: &DomainPoint, grid: usize) -> (f64, Complex64) {
    let grid = grid.max(8);
    let h = TAU / grid as f64;
    let values: Vec<f64> = (0..grid).map(|k| g2_objective(w, z, h * k as f64)).collect();
    let mut peaks: Vec<usize> = (0..grid)
        .filter(|&k| {
            let prev = values[(k + grid - 1) % grid];
            let next = values[(k + 1) % grid];
            values[k] >= prev && values[k] >= next
        })
        .collect();
    peaks.sort_by(|a, b| values[*b].total_cmp(&values[*a]).then(a.cmp(b)));
    peaks.truncate(2);
    let mut best = (values[0], 0.0);
    for (k, v) in values.iter().enumerate() {
        if *v > best.0 {
            best = (*v, h * k as f64);
        }
    }
    for k in peaks {
        let center = h * k as f64;
        let (theta, value) =
            golden_section_max(|t| g2_objective(w, z, t), center - h, center + h, OMEGA_ANGLE_TOLERANCE);
        if value > best.0 {
            best = (value, theta);
        }
    }
    (best.0, Complex64::from_polar(1.0, best.1))
}

pub fn caratheodory_star(d: DomainKind, w: &DomainPoint, z: &DomainPoint) -> Result<DistanceResult> {
    caratheodory_star_with_grid(d, w, z, OMEGA_GRID)
}

pub fn caratheodory_star_with_grid(
    d: DomainKind,
    w: &DomainPoint,
    z: &DomainPoint,
    omega_grid: usize,
) -> Result<DistanceResult> {
    require_inside(d, w)?;
    require_inside(d, z)?;
    Ok(match d {
        DomainKind::UnitDisc => DistanceResult {
            value_star: pseudo_distance_raw(w.z1(), z.z1()),
            witness: Witness::Direct,
            method: "pseudo-distance",
        },
        DomainKind::Bidisc => {
            let a = pseudo_distance_raw(w.z1(), z.z1());
            let b = pseudo_distance_raw(w.z2(), z.z2());
            let (value_star, index) = if b > a { (b, 2) } else { (a, 1) };
            DistanceResult {
                value_star,
                witness: Witness::Coordinate { index },
                method: "coordinate-projections",
            }
        }
        DomainKind::Ball2 => DistanceResult {
            value_star: ball_star(w, z),
            witness: Witness::BallAutomorphism,
            method: "ball-automorphism",
        },
        DomainKind::SymBidisc => {
            let (value_star, omega) = symbidisc_caratheodory(w, z, omega_grid);
            DistanceResult {
                value_star,
                witness: Witness::Omega { omega },
                method: "psi-omega-optimization",
            }
        }
    })
}

/// Royal or flat geodesic through both points, with parameters.
pub fn detect_symbidisc_geodesic(w: &DomainPoint, z: &DomainPoint) -> Option<Witness> {
    let tol = GEODESIC_DETECTION_TOLERANCE;
    let royal = |q: &DomainPoint| (q.z1() * q.z1() - 4.0 * q.z2()).norm() <= tol;
    if royal(w) && royal(z) {
        return Some(Witness::Disc {
            disc: AnalyticDisc::Geodesic { geodesic: GeodesicSpec::Royal },
            lambda_w: w.z1() / 2.0,
            lambda_z: z.z1() / 2.0,
        });
    }
    let dp = w.z2() - z.z2();
    if dp.norm() <= tol {
        return None;
    }
    let beta = ((w.z1() - z.z1()) / dp).conj();
    let on_flat = |q: &DomainPoint| (beta + beta.conj() * q.z2() - q.z1()).norm() <= tol;
    if beta.norm() < 1.0 && on_flat(w) && on_flat(z) {
        return Some(Witness::Disc {
            disc: AnalyticDisc::Geodesic {
                geodesic: GeodesicSpec::Flat { beta: DiscPoint::new(beta).ok()? },
            },
            lambda_w: w.z2(),
            lambda_z: z.z2(),
        });
    }
    None
}

pub fn lempert_star(d: DomainKind, w: &DomainPoint, z: &DomainPoint) -> Result<DistanceResult> {
    require_inside(d, w)?;
    require_inside(d, z)?;
    let disc = |disc, lambda_w: Complex64, lambda_z: Complex64, method| DistanceResult {
        value_star: pseudo_distance_raw(lambda_w, lambda_z),
        witness: Witness::Disc { disc, lambda_w, lambda_z },
        method,
    };
    Ok(match d {
        DomainKind::UnitDisc => disc(AnalyticDisc::Identity, w.z1(), z.z1(), "identity-disc"),
        DomainKind::Bidisc => {
            let u = [0, 1].map(|j| {
                let (a, b) = (w.pair()[j], z.pair()[j]);
                (b - a) / (ONE - a.conj() * b)
            });
            let m = u[0].norm().max(u[1].norm());
            if m == 0.0 {
                disc(AnalyticDisc::Bidisc { w: w.pair(), c: [ZERO, ZERO] }, ZERO, ZERO, "bidisc-disc")
            } else {
                let c = [u[0] / m, u[1] / m];
                disc(AnalyticDisc::Bidisc { w: w.pair(), c }, ZERO, Complex64::new(m, 0.0), "bidisc-disc")
            }
        }
        DomainKind::Ball2 => {
            let v = ball_automorphism(w.pair(), z.pair());
            let m = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
            let u = if m == 0.0 { [ONE, ZERO] } else { [v[0] / m, v[1] / m] };
            disc(AnalyticDisc::Ball { w: w.pair(), u }, ZERO, Complex64::new(m, 0.0), "ball-disc")
        }
        DomainKind::SymBidisc => match detect_symbidisc_geodesic(w, z) {
            Some(Witness::Disc { disc: dsc, lambda_w, lambda_z }) => {
                let method = match dsc {
                    AnalyticDisc::Geodesic { geodesic: GeodesicSpec::Royal } => "royal-geodesic",
                    _ => "flat-geodesic",
                };
                disc(dsc, lambda_w, lambda_z, method)
            }
            _ => DistanceResult {
                value_star: caratheodory_star(d, w, z)?.value_star,
                witness: Witness::None,
                method: "lempert-equality",
            },
        },
    })
}

/// Recomputes a distance from its witness. For discs, also returns how far
/// `f(λ_w)`, `f(λ_z)` miss `w`, `z`.
pub fn reevaluate_witness(d: DomainKind, w: &DomainPoint, z: &DomainPoint, r: &DistanceResult) -> Result<(f64, f64)> {
    Ok(match r.witness {
        Witness::Direct => (pseudo_distance_raw(w.z1(), z.z1()), 0.0),
        Witness::Coordinate { index } => {
            let j = index - 1;
            (pseudo_distance_raw(w.pair()[j], z.pair()[j]), 0.0)
        }
        Witness::BallAutomorphism => (ball_star(w, z), 0.0),
        Witness::Omega { omega } => (pseudo_distance_raw(psi(omega, w), psi(omega, z)), 0.0),
        Witness::Disc { disc, lambda_w, lambda_z } => {
            let miss = |l: Complex64, q: &DomainPoint| {
                disc.eval(l)
                    .iter()
                    .zip(q.coords())
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max)
            };
            let residual = miss(lambda_w, w).max(miss(lambda_z, z));
            (pseudo_distance_raw(lambda_w, lambda_z), residual)
        }
        Witness::None => (caratheodory_star(d, w, z)?.value_star, 0.0),
    })
}

fn sample_pairs(d: DomainKind, n: usize, seed: u64) -> Vec<(DomainPoint, DomainPoint)> {
    let pts = sample(d, 2 * n, seed);
    pts.chunks(2).map(|c| (c[0], c[1])).collect()
}

/// Pairs on royal and flat geodesics of 𝔾₂.
fn symbidisc_geodesic_pairs(n: usize, seed: u64) -> Vec<(DomainPoint, DomainPoint)> {
    let params = sample_disc_points(4 * n, 1.0 - 1e-3, seed);
    let betas = sample_disc_points(n, 0.9, seed ^ 0xF1A7);
    let mut out = Vec::with_capacity(2 * n);
    for k in 0..n {
        let royal = GeodesicSpec::Royal;
        out.push((royal.eval_raw(params[4 * k]).into(), royal.eval_raw(params[4 * k + 1]).into()));
        let flat = GeodesicSpec::Flat { beta: DiscPoint::new(betas[k]).expect("sampled inside") };
        out.push((flat.eval_raw(params[4 * k + 2]).into(), flat.eval_raw(params[4 * k + 3]).into()));
    }
    out
}

/// `c* ≤ l*` on sampled pairs, with equality wherever `l*` has an explicit witness.
pub fn distance_consistency(d: DomainKind, n_pairs: usize, seed: u64) -> Result<VerificationReport> {
    let mut pairs = sample_pairs(d, n_pairs, seed);
    if d == DomainKind::SymBidisc {
        pairs.extend(symbidisc_geodesic_pairs(n_pairs, seed));
    }
    let outcomes = par_map(&pairs, |(w, z)| -> Result<(f64, Option<f64>, f64)> {
        let c = caratheodory_star(d, w, z)?;
        let l = lempert_star(d, w, z)?;
        let (lw, miss) = reevaluate_witness(d, w, z, &l)?;
        let explicit = matches!(l.witness, Witness::Disc { .. }).then_some((c.value_star - lw).abs());
        Ok((c.value_star - l.value_star, explicit, miss))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let excess = outcomes.iter().map(|o| o.0).fold(f64::NEG_INFINITY, f64::max);
    let witnessed: Vec<f64> = outcomes.iter().filter_map(|o| o.1).collect();
    let deviation = witnessed.iter().copied().fold(0.0, f64::max);
    let miss = outcomes.iter().map(|o| o.2).fold(0.0, f64::max);
    let tolerance = if d == DomainKind::SymBidisc { 1e-6 } else { 1e-8 };
    let mut report = VerificationReport::new(
        "distance_consistency",
        json!({ "domain": d.name(), "pairs": pairs.len() }),
        tolerance,
    )
    .with_seed(seed)
    .with_grid(pairs.len());
    report
        .metric("max_c_minus_l", excess)
        .metric("max_witness_deviation", deviation)
        .metric("witnessed_pairs", witnessed.len() as f64)
        .metric("max_witness_miss", miss)
        .require("max_c_minus_l", Comparison::Le, 1e-9)
        .require("max_witness_deviation", Comparison::Lt, tolerance)
        .require("max_witness_miss", Comparison::Lt, 1e-9);
    Ok(report)
}
