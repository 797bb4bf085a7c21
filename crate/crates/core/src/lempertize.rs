//! Lempert left inverses from covector fields along a geodesic.
//!
//! Given a geodesic `f` and a field `v(λ)` (typically `G'(f(λ))` for some
//! left inverse `G`), the map `H(z)` is the unique `λ ∈ 𝔻` with
//! `(z − f(λ))·v(λ) = 0`. Roots are counted with the argument principle on a
//! schedule of circles before Newton polishes them, so non-existence and
//! non-uniqueness are reported instead of silently resolved.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::domains::{boundary_distance_estimate, contains, DomainKind, DomainPoint};
use crate::error::{Error, Result};
use crate::geodesics::GeodesicSpec;
use crate::hyperbolic::DiscPoint;
use crate::inverses::{numeric_gradient, LeftInverseSpec, DEFAULT_GRADIENT_RADIUS_FACTOR};
use crate::numerics::{cauchy_derivative, radial_angular_grid, richardson};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Grid used to certify normalization `v(λ)·f'(λ) = 1`.
pub const NORMALIZATION_GRID: usize = 64;
pub const NORMALIZATION_TOLERANCE: f64 = 1e-10;
const DEGENERATE_PAIRING: f64 = 1e-8;
const ZERO_ON_CONTOUR: f64 = 1e-12;
const MAX_CONTOUR_EVALUATIONS: usize = 1 << 20;
const MIN_ARC: f64 = 1e-13;

/// Closed-form fields.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AnalyticField {
    Constant { v: [Complex64; 2] },
    /// `(λω̄ − ω, 2)`, the fiber covector of `Ψ_ω` along the flat geodesic `β = 0`
    /// (twice its gradient).
    FlatPsi { omega: Complex64 },
    /// `2/(2 − 2ω̄λ)² · (1 − ω̄²λ², −ω̄(2 − 2ω̄λ))`, the gradient of `−ω̄Ψ_ω`
    /// along the royal geodesic.
    RoyalMinusPsi { omega: Complex64 },
}

impl AnalyticField {
    fn eval(&self, l: Complex64) -> [Complex64; 2] {
        match *self {
            AnalyticField::Constant { v } => v,
            AnalyticField::FlatPsi { omega } => [l * omega.conj() - omega, Complex64::new(2.0, 0.0)],
            AnalyticField::RoyalMinusPsi { omega } => {
                let w = omega.conj();
                let d = 2.0 - 2.0 * w * l;
                let k = 2.0 / (d * d);
                [k * (ONE - w * w * l * l), -k * w * d]
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GradientMode {
    ClosedForm,
    Contour { nodes: usize },
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum FieldKind {
    Analytic(AnalyticField),
    PulledBack {
        inverse: LeftInverseSpec,
        mode: GradientMode,
    },
    Combination {
        v0: Box<CovectorField>,
        v1: Box<CovectorField>,
        t: f64,
    },
    Scaled {
        inner: Box<CovectorField>,
        factor: Complex64,
    },
    /// Pointwise division by the pairing `v(λ)·f'(λ)`.
    Rescaled { inner: Box<CovectorField> },
}

/// A field `λ ↦ v(λ) ∈ ℂ²` attached to a geodesic.
#[derive(Debug, Clone, Serialize)]
pub struct CovectorField {
    kind: FieldKind,
    geodesic: GeodesicSpec,
    normalized: bool,
}

impl CovectorField {
    pub fn analytic(field: AnalyticField, geodesic: GeodesicSpec) -> Self {
        Self::certified(FieldKind::Analytic(field), geodesic)
    }

    fn certified(kind: FieldKind, geodesic: GeodesicSpec) -> Self {
        let mut field = Self {
            kind,
            geodesic,
            normalized: false,
        };
        field.normalized = field
            .pairing_defect()
            .map(|d| d <= NORMALIZATION_TOLERANCE)
            .unwrap_or(false);
        field
    }

    pub fn geodesic(&self) -> GeodesicSpec {
        self.geodesic
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn eval(&self, l: Complex64) -> Result<[Complex64; 2]> {
        match &self.kind {
            FieldKind::Analytic(a) => Ok(a.eval(l)),
            FieldKind::PulledBack { inverse, mode } => {
                let [a, b] = self.geodesic.eval_raw(l);
                let z = DomainPoint::two(a, b);
                match mode {
                    GradientMode::ClosedForm => inverse.gradient(&z),
                    GradientMode::Contour { nodes } => {
                        let domain = inverse.domain();
                        let radius =
                            DEFAULT_GRADIENT_RADIUS_FACTOR * boundary_distance_estimate(domain, &z)?;
                        numeric_gradient(&|w: &DomainPoint| inverse.eval(w), domain, &z, radius, *nodes)
                    }
                }
            }
            FieldKind::Combination { v0, v1, t } => {
                let a = v0.eval(l)?;
                let b = v1.eval(l)?;
                Ok([(1.0 - t) * a[0] + t * b[0], (1.0 - t) * a[1] + t * b[1]])
            }
            FieldKind::Scaled { inner, factor } => {
                let v = inner.eval(l)?;
                Ok([v[0] * factor, v[1] * factor])
            }
            FieldKind::Rescaled { inner } => {
                let v = inner.eval(l)?;
                let pairing = pair(v, self.geodesic.derivative_raw(l));
                if pairing.norm() < DEGENERATE_PAIRING {
                    return Err(Error::DegeneratePairing(pairing.norm()));
                }
                Ok([v[0] / pairing, v[1] / pairing])
            }
        }
    }

    /// `v(λ)·f'(λ)`.
    pub fn pairing(&self, l: Complex64) -> Result<Complex64> {
        Ok(pair(self.eval(l)?, self.geodesic.derivative_raw(l)))
    }

    /// `max |v(λ)·f'(λ) − 1|` over the normalization grid.
    pub fn pairing_defect(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for l in radial_angular_grid(NORMALIZATION_GRID) {
            worst = worst.max((self.pairing(l.value())? - ONE).norm());
        }
        Ok(worst)
    }
}

/// The bilinear pairing `Σ aⱼbⱼ`.
pub fn pair(a: [Complex64; 2], b: [Complex64; 2]) -> Complex64 {
    a[0] * b[0] + a[1] * b[1]
}

/// `λ ↦ ∇G(f(λ))`.
pub fn field_from_inverse(inverse: &LeftInverseSpec, geodesic: GeodesicSpec) -> Result<CovectorField> {
    field_from_inverse_with(inverse, geodesic, GradientMode::ClosedForm)
}

pub fn field_from_inverse_with(
    inverse: &LeftInverseSpec,
    geodesic: GeodesicSpec,
    mode: GradientMode,
) -> Result<CovectorField> {
    if inverse.domain() != geodesic.codomain() {
        return Err(Error::PreconditionFailed(format!(
            "inverse lives on {}, geodesic maps into {}",
            inverse.domain(),
            geodesic.codomain()
        )));
    }
    let mode = match (inverse, mode) {
        (LeftInverseSpec::Constructed(_), GradientMode::ClosedForm) => GradientMode::Contour {
            nodes: crate::inverses::DEFAULT_GRADIENT_NODES,
        },
        (_, m) => m,
    };
    let field = CovectorField::certified(
        FieldKind::PulledBack {
            inverse: inverse.clone(),
            mode,
        },
        geodesic,
    );
    // Surface evaluation failures here rather than at first use.
    field.eval(ZERO)?;
    Ok(field)
}

/// Divides out the pairing with `f'`: by a constant when the pairing is
/// constant on the grid, pointwise otherwise.
pub fn normalize_field(v: &CovectorField, geodesic: GeodesicSpec) -> Result<CovectorField> {
    if v.geodesic != geodesic {
        return Err(Error::MixedGeodesics);
    }
    if v.normalized {
        return Ok(v.clone());
    }
    let grid = radial_angular_grid(NORMALIZATION_GRID);
    let pairings = grid
        .iter()
        .map(|l| v.pairing(l.value()))
        .collect::<Result<Vec<_>>>()?;
    let smallest = pairings.iter().map(|p| p.norm()).fold(f64::INFINITY, f64::min);
    if smallest < DEGENERATE_PAIRING {
        return Err(Error::DegeneratePairing(smallest));
    }
    let first = pairings[0];
    let constant = pairings
        .iter()
        .all(|p| (p - first).norm() <= NORMALIZATION_TOLERANCE * first.norm());
    let kind = if constant {
        FieldKind::Scaled {
            inner: Box::new(v.clone()),
            factor: ONE / first,
        }
    } else {
        FieldKind::Rescaled {
            inner: Box::new(v.clone()),
        }
    };
    let out = CovectorField::certified(kind, geodesic);
    if !out.normalized {
        return Err(Error::DegeneratePairing(out.pairing_defect()?));
    }
    Ok(out)
}

/// `(1 − t)·v₀ + t·v₁`; both fields must be normalized against the same geodesic.
pub fn combine(v0: &CovectorField, v1: &CovectorField, t: f64) -> Result<CovectorField> {
    if v0.geodesic != v1.geodesic {
        return Err(Error::MixedGeodesics);
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParameter(format!("t = {t} not in [0, 1]")));
    }
    if !v0.normalized || !v1.normalized {
        return Err(Error::PreconditionFailed("combine needs normalized fields".into()));
    }
    Ok(CovectorField {
        kind: FieldKind::Combination {
            v0: Box::new(v0.clone()),
            v1: Box::new(v1.clone()),
            t,
        },
        geodesic: v0.geodesic,
        normalized: true,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct LempertCandidate {
    geodesic: GeodesicSpec,
    field: CovectorField,
    domain: DomainKind,
}

impl LempertCandidate {
    pub fn new(field: CovectorField) -> Self {
        Self {
            geodesic: field.geodesic,
            domain: field.geodesic.codomain(),
            field,
        }
    }

    pub fn geodesic(&self) -> GeodesicSpec {
        self.geodesic
    }

    pub fn field(&self) -> &CovectorField {
        &self.field
    }

    pub fn domain(&self) -> DomainKind {
        self.domain
    }

    /// `(z − f(λ))·v(λ)`.
    pub fn fiber_value(&self, z: &DomainPoint, l: Complex64) -> Result<Complex64> {
        let f = self.geodesic.eval_raw(l);
        let v = self.field.eval(l)?;
        Ok((z.z1() - f[0]) * v[0] + (z.z2() - f[1]) * v[1])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootSolveConfig {
    pub contour_nodes: usize,
    pub contour_radii: Vec<f64>,
    pub newton_tolerance: f64,
    pub newton_max_iterations: usize,
    /// Nodes of the circle used to differentiate `λ ↦ (z − f(λ))·v(λ)`.
    pub derivative_nodes: usize,
}

impl Default for RootSolveConfig {
    fn default() -> Self {
        Self {
            contour_nodes: 256,
            contour_radii: (1..=10).map(|k| 1.0 - 10f64.powi(-k)).collect(),
            newton_tolerance: 1e-14,
            newton_max_iterations: 60,
            derivative_nodes: 32,
        }
    }
}

impl RootSolveConfig {
    pub fn validate(&self) -> Result<()> {
        if self.contour_radii.is_empty()
            || self.contour_radii.windows(2).any(|w| w[0] >= w[1])
            || self.contour_radii.iter().any(|&r| !(r > 0.0 && r < 1.0))
        {
            return Err(Error::InvalidParameter(
                "contour radii must be strictly increasing in (0, 1)".into(),
            ));
        }
        if self.contour_nodes < 8 || self.derivative_nodes < 8 {
            return Err(Error::InvalidParameter("too few contour nodes".into()));
        }
        if !(self.newton_tolerance > 0.0) || self.newton_max_iterations == 0 {
            return Err(Error::InvalidParameter("invalid Newton settings".into()));
        }
        Ok(())
    }
}

struct ContourScan {
    count: i64,
    centroid: Complex64,
}

/// Winding of `λ ↦ Φ(z, λ)` on `|λ| = radius`, summed over arcs that are
/// bisected until each carries an argument change of at most `π/4`; roots
/// close to the circle only refine the arcs near them.
fn scan_contour(c: &LempertCandidate, z: &DomainPoint, radius: f64, nodes: usize) -> Result<ContourScan> {
    let n = nodes.max(8);
    let at = |theta: f64| c.fiber_value(z, Complex64::from_polar(radius, theta));
    let mut min_modulus = f64::INFINITY;
    let mut evaluations = 0usize;
    let note = |v: Complex64, min_modulus: &mut f64, evaluations: &mut usize| {
        *min_modulus = min_modulus.min(v.norm());
        *evaluations += 1;
        v
    };
    let first = note(at(0.0)?, &mut min_modulus, &mut evaluations);
    let mut arcs = Vec::with_capacity(n);
    let mut prev = (0.0, first);
    for k in 1..=n {
        let theta = TAU * k as f64 / n as f64;
        let v = if k == n { first } else { note(at(theta)?, &mut min_modulus, &mut evaluations) };
        arcs.push((prev.0, theta, prev.1, v));
        prev = (theta, v);
    }
    if !(min_modulus >= ZERO_ON_CONTOUR) {
        return Err(Error::ZeroOnContour { radius, min_modulus });
    }
    arcs.reverse();
    let mut total = 0.0;
    let mut moment = ZERO;
    while let Some((a, b, fa, fb)) = arcs.pop() {
        let step = fb / fa;
        let jump = step.arg();
        if jump.abs() <= PI / 4.0 {
            total += jump;
            moment += Complex64::from_polar(radius, 0.5 * (a + b)) * step.ln();
            continue;
        }
        if b - a < MIN_ARC || evaluations >= MAX_CONTOUR_EVALUATIONS {
            return Err(Error::ZeroOnContour { radius, min_modulus });
        }
        let m = 0.5 * (a + b);
        let fm = note(at(m)?, &mut min_modulus, &mut evaluations);
        if !(min_modulus >= ZERO_ON_CONTOUR) {
            return Err(Error::ZeroOnContour { radius, min_modulus });
        }
        arcs.push((m, b, fm, fb));
        arcs.push((a, m, fa, fm));
    }
    Ok(ContourScan {
        count: (total / TAU).round() as i64,
        centroid: moment / Complex64::new(0.0, TAU),
    })
}

/// Number of zeros of `λ ↦ (z − f(λ))·v(λ)` inside `|λ| < radius`
/// (zeros minus poles, by the argument principle).
pub fn zero_count(c: &LempertCandidate, z: &DomainPoint, radius: f64, nodes: usize) -> Result<i64> {
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::InvalidParameter(format!("radius {radius} not in (0, 1)")));
    }
    Ok(scan_contour(c, z, radius, nodes)?.count)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SolveOutcome {
    pub lambda: Complex64,
    /// Smallest schedule radius whose circle encloses exactly one root.
    pub located_at_radius: f64,
    /// Largest schedule radius at which uniqueness was confirmed.
    pub unique_at_radius: f64,
    pub newton_iterations: usize,
    pub residual: f64,
}

fn newton(c: &LempertCandidate, z: &DomainPoint, start: Complex64, cfg: &RootSolveConfig) -> Result<(Complex64, usize)> {
    let mut l = start;
    let mut prev_step = f64::INFINITY;
    for it in 1..=cfg.newton_max_iterations {
        let value = c.fiber_value(z, l)?;
        if value.norm() == 0.0 {
            return Ok((l, it));
        }
        let radius = 0.5 * (1.0 - l.norm());
        let slope = cauchy_derivative(|w| c.fiber_value(z, w), l, radius, cfg.derivative_nodes)?;
        if slope.norm() == 0.0 || !slope.re.is_finite() {
            return Err(Error::NewtonDivergence(f64::INFINITY));
        }
        let step = value / slope;
        let size = step.norm();
        let next = l - step;
        if !(next.norm() < 1.0) {
            return Err(Error::NewtonDivergence(size));
        }
        // Converged, or stalled at the rounding floor after converging.
        if size <= cfg.newton_tolerance || (prev_step < 1e-9 && size >= 0.5 * prev_step) {
            return Ok((next, it));
        }
        l = next;
        prev_step = size;
    }
    Err(Error::NewtonDivergence(prev_step))
}

/// Circles on which the fiber function vanishes or cannot be evaluated
/// (closed forms lose all precision very close to the boundary).
fn unusable_circle(e: &Error) -> bool {
    matches!(
        e,
        Error::ZeroOnContour { .. } | Error::BranchFailure { .. } | Error::DenominatorUnderflow(_)
    )
}

pub fn solve_point_detailed(c: &LempertCandidate, z: &DomainPoint, cfg: &RootSolveConfig) -> Result<SolveOutcome> {
    if !contains(c.domain, z)?.inside {
        return Err(Error::OutsideDomain(format!("{}: {:?}", c.domain, z.coords())));
    }
    let mut located = None;
    for &radius in &cfg.contour_radii {
        let scan = match scan_contour(c, z, radius, cfg.contour_nodes) {
            Ok(scan) => scan,
            // A root sitting on this circle is picked up by the next one.
            Err(e) if unusable_circle(&e) => continue,
            Err(e) => return Err(e),
        };
        match scan.count {
            0 => continue,
            1 => {
                located = Some((radius, scan.centroid));
                break;
            }
            n if n >= 2 => return Err(Error::MultipleRoots { count: n, radius }),
            // Net negative: poles inside the contour; the count is meaningless.
            _ => return Err(Error::NoRootInDisc),
        }
    }
    let (located_at_radius, centroid) = located.ok_or(Error::NoRootInDisc)?;
    let start = if centroid.norm() < located_at_radius {
        centroid
    } else {
        centroid * (0.5 * located_at_radius / centroid.norm())
    };
    let (lambda, newton_iterations) = newton(c, z, start, cfg)?;
    if lambda.norm() >= located_at_radius {
        return Err(Error::NewtonDivergence(lambda.norm()));
    }

    let mut unique_at_radius = located_at_radius;
    for &radius in cfg.contour_radii.iter().rev().filter(|&&r| r > located_at_radius) {
        match scan_contour(c, z, radius, cfg.contour_nodes) {
            Ok(scan) if scan.count == 1 => {
                unique_at_radius = radius;
                break;
            }
            Ok(scan) if scan.count >= 2 => {
                return Err(Error::MultipleRoots { count: scan.count, radius })
            }
            Ok(_) => return Err(Error::NoRootInDisc),
            Err(e) if unusable_circle(&e) => continue,
            Err(e) => return Err(e),
        }
    }
    let residual = c.fiber_value(z, lambda)?.norm();
    Ok(SolveOutcome {
        lambda,
        located_at_radius,
        unique_at_radius,
        newton_iterations,
        residual,
    })
}

/// The unique `λ ∈ 𝔻` with `(z − f(λ))·v(λ) = 0`.
pub fn solve_point(c: &LempertCandidate, z: &DomainPoint, cfg: &RootSolveConfig) -> Result<DiscPoint> {
    DiscPoint::new(solve_point_detailed(c, z, cfg)?.lambda)
}

/// Solution map of a candidate, usable wherever a [`LeftInverseSpec`] is.
#[derive(Debug, Clone, Serialize)]
pub struct ConstructedInverse {
    candidate: LempertCandidate,
    config: RootSolveConfig,
}

impl ConstructedInverse {
    pub fn domain(&self) -> DomainKind {
        self.candidate.domain
    }

    pub fn candidate(&self) -> &LempertCandidate {
        &self.candidate
    }

    pub fn config(&self) -> &RootSolveConfig {
        &self.config
    }

    pub fn eval(&self, z: &DomainPoint) -> Result<Complex64> {
        Ok(solve_point(&self.candidate, z, &self.config)?.value())
    }
}

pub fn build_inverse(c: &LempertCandidate, cfg: &RootSolveConfig) -> Result<LeftInverseSpec> {
    cfg.validate()?;
    if !c.field.normalized {
        return Err(Error::PreconditionFailed("candidate field is not normalized".into()));
    }
    Ok(LeftInverseSpec::Constructed(Arc::new(ConstructedInverse {
        candidate: c.clone(),
        config: cfg.clone(),
    })))
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtensionCertificate {
    pub lambda0: Complex64,
    pub f_extends: bool,
    pub v_finite: bool,
    pub field_limit: [Complex64; 2],
    pub field_error_estimate: f64,
    pub pairing_bound: f64,
    pub extends: bool,
}

/// Radial evidence for holomorphic extension through `f(λ₀)`, `|λ₀| = 1`.
///
/// The field is sampled at `(1 − 2⁻ᵏ)λ₀` and extrapolated; a finite limit
/// together with a pairing bounded away from zero is what the implicit
/// function argument needs.
pub fn extension_certificate(c: &LempertCandidate, lambda0: Complex64) -> Result<ExtensionCertificate> {
    const STEPS: i32 = 20;
    if (lambda0.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!("|λ₀| = {} ≠ 1", lambda0.norm())));
    }
    let mut comps = [Vec::new(), Vec::new()];
    let mut pairings = Vec::new();
    for k in 1..=STEPS {
        let l = lambda0 * (1.0 - 0.5f64.powi(k));
        let v = c.field.eval(l)?;
        comps[0].push(v[0]);
        comps[1].push(v[1]);
        pairings.push(pair(v, c.geodesic.derivative_raw(l)));
    }
    let e0 = richardson(&comps[0], 3)?;
    let e1 = richardson(&comps[1], 3)?;
    let ep = richardson(&pairings, 3)?;
    let field_limit = [e0.limit, e1.limit];
    let scale = e0.limit.norm().max(e1.limit.norm()).max(1.0);
    let field_error_estimate = e0.error_estimate.max(e1.error_estimate);
    let v_finite = field_error_estimate.is_finite() && field_error_estimate <= 1e-6 * scale;
    let pairing_bound = ep.limit.norm();
    Ok(ExtensionCertificate {
        lambda0,
        // Every catalogue geodesic is rational with poles off the closed disc.
        f_extends: true,
        v_finite,
        field_limit,
        field_error_estimate,
        pairing_bound,
        extends: v_finite && pairing_bound > 1e-6,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inverses::HSpec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pt(a: f64, b: f64) -> DomainPoint {
        DomainPoint::two(c(a, 0.0), c(b, 0.0))
    }

    fn close(a: Complex64, b: Complex64, tol: f64) {
        assert!((a - b).norm() <= tol, "{a} vs {b}");
    }

    fn royal_combined() -> CovectorField {
        let plus = CovectorField::analytic(AnalyticField::RoyalMinusPsi { omega: c(1.0, 0.0) }, GeodesicSpec::Royal);
        let minus = CovectorField::analytic(AnalyticField::RoyalMinusPsi { omega: c(-1.0, 0.0) }, GeodesicSpec::Royal);
        combine(&plus, &minus, 0.5).unwrap()
    }

    fn constant(v: [Complex64; 2]) -> CovectorField {
        CovectorField::analytic(AnalyticField::Constant { v }, GeodesicSpec::Diagonal)
    }

    #[test]
    fn field_from_inverse_examples() {
        let f = field_from_inverse(&LeftInverseSpec::bidisc_projection(1).unwrap(), GeodesicSpec::Diagonal).unwrap();
        assert_eq!(f.eval(c(0.3, 0.2)).unwrap(), [ONE, ZERO]);
        assert!(f.is_normalized());

        let h = HSpec::constant(c(0.3, -0.1)).unwrap();
        let fam = LeftInverseSpec::bidisc_family(0.5, h).unwrap();
        let f = field_from_inverse(&fam, GeodesicSpec::Diagonal).unwrap();
        for l in radial_angular_grid(32) {
            let v = f.eval(l.value()).unwrap();
            close(v[0], c(0.5, 0.0), 1e-14);
            close(v[1], c(0.5, 0.0), 1e-14);
        }

        let rm = LeftInverseSpec::royal_minus_psi(ONE).unwrap();
        let f = field_from_inverse(&rm, GeodesicSpec::Royal).unwrap();
        let analytic = AnalyticField::RoyalMinusPsi { omega: ONE };
        for l in radial_angular_grid(32) {
            let lv = l.value();
            let v = f.eval(lv).unwrap();
            let k = 2.0 / ((2.0 - 2.0 * lv) * (2.0 - 2.0 * lv));
            close(v[0], k * (ONE - lv * lv), 1e-10);
            close(v[1], -k * (2.0 - 2.0 * lv), 1e-10);
            let a = analytic.eval(lv);
            close(v[0], a[0], 1e-10);
            close(v[1], a[1], 1e-10);
        }
        assert!(f.is_normalized());
    }

    #[test]
    fn field_from_inverse_checks_domains() {
        let e = field_from_inverse(&LeftInverseSpec::RoyalPhi, GeodesicSpec::Diagonal);
        assert!(matches!(e, Err(Error::PreconditionFailed(_))));
    }

    #[test]
    fn normalize_examples() {
        let already = field_from_inverse(&LeftInverseSpec::RoyalPhi, GeodesicSpec::Royal).unwrap();
        assert!(already.is_normalized());
        let same = normalize_field(&already, GeodesicSpec::Royal).unwrap();
        close(same.eval(c(0.2, 0.1)).unwrap()[0], already.eval(c(0.2, 0.1)).unwrap()[0], 0.0);

        let doubled = constant([c(2.0, 0.0), ZERO]);
        assert!(!doubled.is_normalized());
        let n = normalize_field(&doubled, GeodesicSpec::Diagonal).unwrap();
        assert_eq!(n.eval(c(0.4, 0.0)).unwrap(), [ONE, ZERO]);

        let degenerate = constant([c(1.0, 0.0), c(-1.0, 0.0)]);
        assert!(matches!(
            normalize_field(&degenerate, GeodesicSpec::Diagonal),
            Err(Error::DegeneratePairing(_))
        ));
        assert!(matches!(normalize_field(&doubled, GeodesicSpec::Royal), Err(Error::MixedGeodesics)));
    }

    #[test]
    fn normalize_varying_pairing_pointwise() {
        // Pairing (2 + λ) against (1, 1) varies with λ.
        let ball = field_from_inverse(&LeftInverseSpec::BallRefined, GeodesicSpec::ball_family(1.0).unwrap()).unwrap();
        assert!(!ball.is_normalized());
        let n = normalize_field(&ball, ball.geodesic()).unwrap();
        assert!(n.is_normalized());
        assert!(n.pairing_defect().unwrap() < 1e-12);
    }

    #[test]
    fn combine_examples() {
        let v0 = constant([ONE, ZERO]);
        let v1 = constant([ZERO, ONE]);
        let l = c(0.1, 0.5);
        assert_eq!(combine(&v0, &v1, 0.0).unwrap().eval(l).unwrap(), v0.eval(l).unwrap());
        assert_eq!(combine(&v0, &v1, 1.0).unwrap().eval(l).unwrap(), v1.eval(l).unwrap());
        let m = combine(&v0, &v1, 0.3).unwrap().eval(l).unwrap();
        close(m[0], c(0.7, 0.0), 1e-16);
        close(m[1], c(0.3, 0.0), 1e-16);
        let royal = royal_combined();
        assert!(matches!(combine(&v0, &royal, 0.5), Err(Error::MixedGeodesics)));
        assert!(combine(&v0, &v1, 1.5).is_err());
        assert!(combine(&constant([c(2.0, 0.0), ZERO]), &v1, 0.5).is_err());
    }

    #[test]
    fn combined_royal_field_is_phi_gradient() {
        let f = royal_combined();
        assert!(f.pairing_defect().unwrap() < 1e-12);
        for l in radial_angular_grid(32) {
            let lv = l.value();
            let v = f.eval(lv).unwrap();
            let g = LeftInverseSpec::RoyalPhi
                .gradient(&GeodesicSpec::Royal.eval(l))
                .unwrap();
            close(v[0], g[0], 1e-10 * g[0].norm().max(1.0));
            close(v[1], g[1], 1e-10 * g[1].norm().max(1.0));
        }
    }

    #[test]
    fn zero_count_examples() {
        let diag = LempertCandidate::new(constant([c(0.5, 0.0), c(0.5, 0.0)]));
        assert_eq!(zero_count(&diag, &pt(0.2, 0.6), 0.9, 256).unwrap(), 1);
        let royal = LempertCandidate::new(royal_combined());
        assert_eq!(zero_count(&royal, &pt(1.0, 0.25), 0.9, 256).unwrap(), 1);
        assert_eq!(zero_count(&royal, &pt(1.0, 0.25), 0.4, 256).unwrap(), 0);
        assert!(matches!(
            zero_count(&royal, &pt(1.0, 0.25), 0.5, 256),
            Err(Error::ZeroOnContour { .. })
        ));
    }

    #[test]
    fn solve_point_examples() {
        let cfg = RootSolveConfig::default();
        let diag = LempertCandidate::new(constant([c(0.5, 0.0), c(0.5, 0.0)]));
        close(solve_point(&diag, &pt(0.2, 0.6), &cfg).unwrap().value(), c(0.4, 0.0), 1e-14);

        let royal = LempertCandidate::new(royal_combined());
        close(solve_point(&royal, &pt(1.0, 0.25), &cfg).unwrap().value(), c(0.5, 0.0), 1e-13);

        let flat = GeodesicSpec::Flat { beta: DiscPoint::origin() };
        let field = CovectorField::analytic(AnalyticField::FlatPsi { omega: ONE }, flat);
        assert!(!field.is_normalized());
        let cand = LempertCandidate::new(normalize_field(&field, flat).unwrap());
        let out = solve_point(&cand, &pt(0.5, 0.3), &cfg).unwrap().value();
        close(out, c(0.1 / 1.5, 0.0), 1e-14);
        assert!((out.re - 0.0667).abs() < 1e-4);
    }

    #[test]
    fn solve_point_rejects_outside_points() {
        let diag = LempertCandidate::new(constant([c(0.5, 0.0), c(0.5, 0.0)]));
        let e = solve_point(&diag, &pt(1.2, 0.0), &RootSolveConfig::default());
        assert!(matches!(e, Err(Error::OutsideDomain(_))));
    }

    #[test]
    fn solve_point_reports_multiple_roots() {
        let field = CovectorField::analytic(
            AnalyticField::Constant { v: [c(1.0, 0.0), c(0.0, 0.0)] },
            GeodesicSpec::BidiscGraph { psi: crate::geodesics::MultiplierSpec::Identity },
        );
        // Along (λ, λ²), v = (0, 1) gives the fiber function z₂ − λ².
        let quad = CovectorField::analytic(
            AnalyticField::Constant { v: [ZERO, ONE] },
            GeodesicSpec::BidiscGraph { psi: crate::geodesics::MultiplierSpec::Identity },
        );
        let cfg = RootSolveConfig::default();
        let cand = LempertCandidate::new(quad);
        let e = solve_point_detailed(&cand, &pt(0.1, 0.25), &cfg);
        assert!(matches!(e, Err(Error::MultipleRoots { count: 2, .. })), "{e:?}");
        let cand = LempertCandidate::new(field);
        close(solve_point(&cand, &pt(0.1, 0.25), &cfg).unwrap().value(), c(0.1, 0.0), 1e-14);
    }

    #[test]
    fn solve_point_reports_missing_root() {
        // (z₁ − λ) − (z₂ − λ) = z₁ − z₂ never vanishes.
        let cand = LempertCandidate::new(constant([ONE, -ONE]));
        let e = solve_point_detailed(&cand, &pt(0.1, 0.3), &RootSolveConfig::default());
        assert!(matches!(e, Err(Error::NoRootInDisc)), "{e:?}");
    }

    #[test]
    fn build_inverse_behaves_like_affine() {
        let cand = LempertCandidate::new(constant([c(0.5, 0.0), c(0.5, 0.0)]));
        let h = build_inverse(&cand, &RootSolveConfig::default()).unwrap();
        let affine = LeftInverseSpec::bidisc_affine(0.5).unwrap();
        for z in crate::domains::sample(DomainKind::Bidisc, 200, 3) {
            close(h.eval(&z).unwrap(), affine.eval(&z).unwrap(), 1e-10);
        }
        let g = h.gradient(&pt(0.1, -0.2)).unwrap();
        close(g[0], c(0.5, 0.0), 1e-10);
        close(g[1], c(0.5, 0.0), 1e-10);
    }

    #[test]
    fn config_validation() {
        let mut cfg = RootSolveConfig {
            contour_radii: vec![0.9, 0.5],
            ..RootSolveConfig::default()
        };
        assert!(cfg.validate().is_err());
        cfg.contour_radii = vec![0.9, 1.0];
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn extension_certificate_examples() {
        let flat = GeodesicSpec::Flat { beta: DiscPoint::origin() };
        let psi0 = field_from_inverse(&LeftInverseSpec::psi_omega(ZERO).unwrap(), flat).unwrap();
        let cert = extension_certificate(&LempertCandidate::new(psi0), ONE).unwrap();
        assert!(cert.extends && cert.v_finite);
        assert!((cert.pairing_bound - 1.0).abs() < 1e-9);

        let phi = field_from_inverse(&LeftInverseSpec::RoyalPhi, GeodesicSpec::Royal).unwrap();
        let cert = extension_certificate(&LempertCandidate::new(phi), ONE).unwrap();
        assert!(!cert.v_finite);
        assert!(!cert.extends);
        assert!((cert.pairing_bound - 1.0).abs() < 1e-6);

        let diag = LempertCandidate::new(constant([c(0.5, 0.0), c(0.5, 0.0)]));
        let cert = extension_certificate(&diag, c(0.0, 1.0)).unwrap();
        assert!(cert.extends);
        assert!(extension_certificate(&diag, c(0.5, 0.0)).is_err());
    }
}
