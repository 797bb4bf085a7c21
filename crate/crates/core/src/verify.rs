//! Quantified checks with structured, reproducible reports.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::domains::{
    contains, ray_distance, region_a_contains, sample, seeded_batch, DomainKind, DomainPoint,
};
use crate::error::{Error, Result};
use crate::exec::par_map;
use crate::geodesics::GeodesicSpec;
use crate::hyperbolic::{mobius_fit, pseudo_distance_raw, DiscPoint, MobiusMap};
use crate::inverses::LeftInverseSpec;
use crate::lempertize::{pair, solve_point, zero_count, CovectorField, LempertCandidate, RootSolveConfig};
use crate::numerics::{radial_angular_grid, richardson};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Default tolerances.
pub const RESIDUAL_TOLERANCE: f64 = 1e-12;
pub const FITTED_RESIDUAL_TOLERANCE: f64 = 1e-10;
pub const KERNEL_TOLERANCE: f64 = 1e-9;
pub const OFF_KERNEL_FLOOR: f64 = 1e-6;
pub const DUALITY_TOLERANCE: f64 = 1e-10;
pub const PROBE_TOLERANCE: f64 = 1e-6;
pub const ROYAL_FILTER: f64 = 1e-6;
pub const BALL_MARGIN_FILTER: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Comparison {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
}

impl Comparison {
    fn holds(self, value: f64, threshold: f64) -> bool {
        match self {
            Comparison::Lt => value < threshold,
            Comparison::Le => value <= threshold,
            Comparison::Gt => value > threshold,
            Comparison::Ge => value >= threshold,
            Comparison::Eq => value == threshold,
        }
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Comparison::Lt => "<",
            Comparison::Le => "<=",
            Comparison::Gt => ">",
            Comparison::Ge => ">=",
            Comparison::Eq => "==",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Criterion {
    pub metric: String,
    pub comparison: Comparison,
    pub threshold: f64,
    pub holds: bool,
}

/// One sample of a per-point series (grid residuals, probe values).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub x: f64,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_name: String,
    pub inputs: Value,
    pub metrics: BTreeMap<String, f64>,
    pub criteria: Vec<Criterion>,
    pub tolerance: f64,
    pub pass: bool,
    pub seed: Option<u64>,
    pub grid_size: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub series: Vec<SeriesPoint>,
}

impl VerificationReport {
    pub fn new(check_name: impl Into<String>, inputs: Value, tolerance: f64) -> Self {
        Self {
            check_name: check_name.into(),
            inputs,
            metrics: BTreeMap::new(),
            criteria: Vec::new(),
            tolerance,
            pass: true,
            seed: None,
            grid_size: 0,
            series: Vec::new(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_grid(mut self, grid_size: usize) -> Self {
        self.grid_size = grid_size;
        self
    }

    pub fn metric(&mut self, name: &str, value: f64) -> &mut Self {
        self.metrics.insert(name.to_string(), value);
        self
    }

    /// Declares `metric <cmp> threshold`; the report passes iff all declared
    /// comparisons hold. Missing or NaN metrics never hold.
    pub fn require(&mut self, metric: &str, comparison: Comparison, threshold: f64) -> &mut Self {
        let holds = self
            .metrics
            .get(metric)
            .is_some_and(|&v| comparison.holds(v, threshold));
        self.criteria.push(Criterion {
            metric: metric.to_string(),
            comparison,
            threshold,
            holds,
        });
        self.pass = self.criteria.iter().all(|c| c.holds);
        self
    }

    /// Replaces the report tolerance in every upper-bound criterion that
    /// uses it and re-evaluates them.
    pub fn override_tolerance(&mut self, tolerance: f64) {
        for c in &mut self.criteria {
            if matches!(c.comparison, Comparison::Lt | Comparison::Le) && c.threshold == self.tolerance {
                c.threshold = tolerance;
                c.holds = self.metrics.get(&c.metric).is_some_and(|&v| c.comparison.holds(v, tolerance));
            }
        }
        self.tolerance = tolerance;
        self.pass = self.criteria.iter().all(|c| c.holds);
    }

    pub fn get(&self, metric: &str) -> f64 {
        self.metrics.get(metric).copied().unwrap_or(f64::NAN)
    }
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

fn cplx(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn check_codomain(f: &GeodesicSpec, g: &LeftInverseSpec) -> Result<()> {
    if f.codomain() != g.domain() {
        return Err(Error::PreconditionFailed(format!(
            "geodesic maps into {}, inverse lives on {}",
            f.codomain(),
            g.domain()
        )));
    }
    Ok(())
}

/// Picks three well-conditioned grid points (smallest moduli, spread in angle).
fn fit_points(grid: &[DiscPoint]) -> [DiscPoint; 3] {
    let r0 = grid.iter().map(|l| l.value().norm()).fold(f64::INFINITY, f64::min);
    let ring: Vec<DiscPoint> = grid
        .iter()
        .copied()
        .filter(|l| l.value().norm() <= r0 + 1e-12)
        .collect();
    if ring.len() >= 3 {
        let k = ring.len();
        [ring[0], ring[k / 3], ring[2 * k / 3]]
    } else {
        [grid[0], grid[grid.len() / 3], grid[2 * grid.len() / 3]]
    }
}

/// `max |a(G(f(λ))) − λ|` on the radial-angular grid, with `a` the identity
/// or an automorphism fitted on three grid points.
pub fn left_inverse_residual(
    f: &GeodesicSpec,
    g: &LeftInverseSpec,
    grid: usize,
    fit_automorphism: bool,
) -> Result<VerificationReport> {
    check_codomain(f, g)?;
    if grid < 3 {
        return Err(Error::InvalidParameter("grid must have at least 3 points".into()));
    }
    let lambdas = radial_angular_grid(grid);
    let images = par_map(&lambdas, |l| g.eval(&f.eval(*l)))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let a = if fit_automorphism {
        let pts = fit_points(&lambdas);
        let idx = |p: DiscPoint| lambdas.iter().position(|l| *l == p).unwrap();
        let pairs = pts.map(|p| (images[idx(p)], p.value()));
        mobius_fit(&pairs)?
    } else {
        MobiusMap::identity()
    };
    let tolerance = if fit_automorphism { FITTED_RESIDUAL_TOLERANCE } else { RESIDUAL_TOLERANCE };
    let mut report = VerificationReport::new(
        "left_inverse_residual",
        json!({ "geodesic": f, "inverse": g.name(), "fit_automorphism": fit_automorphism }),
        tolerance,
    )
    .with_grid(grid);
    let mut residual: f64 = 0.0;
    for (l, w) in lambdas.iter().zip(&images) {
        let r = (a.apply(*w) - l.value()).norm();
        residual = residual.max(r);
        report.series.push(SeriesPoint { x: l.value().norm(), re: r, im: 0.0 });
    }
    report.metric("residual", residual);
    if fit_automorphism {
        let c = a.center().value();
        report
            .metric("fitted_center_re", c.re)
            .metric("fitted_center_im", c.im)
            .metric("fitted_center_abs", c.norm())
            .metric("fitted_rotation_arg", a.rotation().arg());
    }
    report.require("residual", Comparison::Lt, tolerance);
    Ok(report)
}

/// `sup |G|` over seeded samples of `d`; passes iff `< 1` with no evaluation errors.
pub fn range_supremum(g: &LeftInverseSpec, d: DomainKind, n: usize, seed: u64) -> Result<VerificationReport> {
    if g.domain() != d {
        return Err(Error::PreconditionFailed(format!("{} is not defined on {d}", g.name())));
    }
    let points = sample(d, n, seed);
    let values = par_map(&points, |z| g.eval(z).map(|w| w.norm()));
    let errors = values.iter().filter(|v| v.is_err()).count();
    let sup = max_of(values.into_iter().flatten());
    let mut report = VerificationReport::new(
        "range_supremum",
        json!({ "inverse": g.name(), "domain": d.name(), "samples": n }),
        1.0,
    )
    .with_seed(seed)
    .with_grid(n);
    report
        .metric("sup_abs", sup)
        .metric("margin", 1.0 - sup)
        .metric("evaluation_errors", errors as f64)
        .require("sup_abs", Comparison::Lt, 1.0)
        .require("evaluation_errors", Comparison::Eq, 0.0);
    Ok(report)
}

/// Affine-fiber test: `G` is constant along the kernel line of `G'(f(λ₀))`
/// through `f(λ₀)` and moves off it.
pub fn fiber_affinity(
    f: &GeodesicSpec,
    g: &LeftInverseSpec,
    lambda_grid: usize,
    steps: &[f64],
) -> Result<VerificationReport> {
    check_codomain(f, g)?;
    if steps.is_empty() || steps.iter().any(|&s| !(s > 0.0)) {
        return Err(Error::InvalidParameter("steps must be positive".into()));
    }
    let domain = f.codomain();
    let largest = steps.iter().copied().fold(0.0, f64::max);
    let lambdas = radial_angular_grid(lambda_grid);
    // Fibers of Φ satisfy −sλ² + 2λ(1 + p) − s = 0.
    let phi_on_royal = *f == GeodesicSpec::Royal && matches!(g, LeftInverseSpec::RoyalPhi);

    struct Local {
        kernel: f64,
        kernel_at_largest: Option<f64>,
        off_kernel: Option<f64>,
        royal_relation: f64,
        skipped: usize,
    }

    let locals = par_map(&lambdas, |l0| -> Result<Local> {
        let z0 = f.eval(*l0);
        let g0 = g.eval(&z0)?;
        let v = g.gradient(&z0)?;
        let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        if norm < 1e-12 {
            return Err(Error::DegenerateGradient(norm));
        }
        let kernel_dir = [-v[1] / norm, v[0] / norm];
        let off_dir = [v[0].conj() / norm, v[1].conj() / norm];
        let mut out = Local {
            kernel: 0.0,
            kernel_at_largest: None,
            off_kernel: None,
            royal_relation: 0.0,
            skipped: 0,
        };
        for &tau in steps {
            let z = z0.offset(&kernel_dir, Complex64::new(tau, 0.0));
            if !contains(domain, &z)?.inside {
                out.skipped += 1;
                continue;
            }
            let dev = (g.eval(&z)? - g0).norm();
            out.kernel = out.kernel.max(dev);
            if tau == largest {
                out.kernel_at_largest = Some(dev);
            }
            if phi_on_royal {
                let (s, p, l) = (z.z1(), z.z2(), l0.value());
                let rel = -s * l * l + 2.0 * l * (1.0 + p) - s;
                out.royal_relation = out.royal_relation.max(rel.norm());
            }
        }
        // Largest step along the conjugate-gradient direction that stays inside.
        let mut sorted: Vec<f64> = steps.to_vec();
        sorted.sort_by(|a, b| b.total_cmp(a));
        for tau in sorted {
            let z = z0.offset(&off_dir, Complex64::new(tau, 0.0));
            if contains(domain, &z)?.inside {
                out.off_kernel = Some((g.eval(&z)? - g0).norm());
                break;
            }
        }
        Ok(out)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let kernel = max_of(locals.iter().map(|l| l.kernel));
    let at_largest = max_of(locals.iter().filter_map(|l| l.kernel_at_largest));
    let off = locals
        .iter()
        .filter_map(|l| l.off_kernel)
        .fold(f64::INFINITY, f64::min);
    let skipped: usize = locals.iter().map(|l| l.skipped).sum();

    let mut report = VerificationReport::new(
        "fiber_affinity",
        json!({ "geodesic": f, "inverse": g.name(), "steps": steps }),
        KERNEL_TOLERANCE,
    )
    .with_grid(lambda_grid);
    report
        .metric("kernel_deviation", kernel)
        .metric("kernel_deviation_at_largest_step", at_largest)
        .metric("off_kernel_growth", off)
        .metric("skipped_outside", skipped as f64)
        .require("kernel_deviation", Comparison::Lt, KERNEL_TOLERANCE)
        .require("off_kernel_growth", Comparison::Gt, OFF_KERNEL_FLOOR);
    if phi_on_royal {
        let rel = max_of(locals.iter().map(|l| l.royal_relation));
        report
            .metric("royal_fiber_relation", rel)
            .require("royal_fiber_relation", Comparison::Lt, 1e-10);
    }
    Ok(report)
}

/// `|a₁b₂ − a₂b₁| / (‖a‖‖b‖)`: sine of the angle between the complex lines.
pub fn projective_distance(a: [Complex64; 2], b: [Complex64; 2]) -> f64 {
    let na = (a[0].norm_sqr() + a[1].norm_sqr()).sqrt();
    let nb = (b[0].norm_sqr() + b[1].norm_sqr()).sqrt();
    (a[0] * b[1] - a[1] * b[0]).norm() / (na * nb)
}

/// Largest projective distance between field values on the grid.
pub fn kernel_constancy(v: &CovectorField, lambda_grid: usize) -> Result<VerificationReport> {
    if !v.is_normalized() {
        return Err(Error::PreconditionFailed("kernel_constancy needs a normalized field".into()));
    }
    let lambdas = radial_angular_grid(lambda_grid);
    let values = par_map(&lambdas, |l| v.eval(l.value()))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    for w in &values {
        let norm = (w[0].norm_sqr() + w[1].norm_sqr()).sqrt();
        if norm < 1e-12 {
            return Err(Error::DegenerateGradient(norm));
        }
    }
    let mut deviation: f64 = 0.0;
    for (i, a) in values.iter().enumerate() {
        for b in &values[i + 1..] {
            deviation = deviation.max(projective_distance(*a, *b));
        }
    }
    let mut report = VerificationReport::new(
        "kernel_constancy",
        json!({ "field": v }),
        KERNEL_TOLERANCE,
    )
    .with_grid(lambda_grid);
    report
        .metric("projective_deviation", deviation)
        .require("projective_deviation", Comparison::Lt, KERNEL_TOLERANCE);
    Ok(report)
}

/// `max |(z − f(G(z)))·v(G(z))|` over seeded samples.
pub fn duality_residual(
    f: &GeodesicSpec,
    v: &CovectorField,
    g: &LeftInverseSpec,
    n: usize,
    seed: u64,
) -> Result<VerificationReport> {
    check_codomain(f, g)?;
    if v.geodesic() != *f {
        return Err(Error::MixedGeodesics);
    }
    let points = sample(f.codomain(), n, seed);
    let residuals = par_map(&points, |z| -> Result<f64> {
        let l = g.eval(z)?;
        let fl = f.eval_raw(l);
        let diff = [z.z1() - fl[0], z.z2() - fl[1]];
        Ok(pair(diff, v.eval(l)?).norm())
    });
    let errors = residuals.iter().filter(|r| r.is_err()).count();
    let residual = max_of(residuals.into_iter().flatten());
    let mut report = VerificationReport::new(
        "duality_residual",
        json!({ "geodesic": f, "field": v, "inverse": g.name(), "samples": n }),
        DUALITY_TOLERANCE,
    )
    .with_seed(seed)
    .with_grid(n);
    report
        .metric("residual", residual)
        .metric("evaluation_errors", errors as f64)
        .require("residual", Comparison::Lt, DUALITY_TOLERANCE)
        .require("evaluation_errors", Comparison::Eq, 0.0);
    Ok(report)
}

/// Paths running into the boundary, parametrized by `δ ↓ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PathSpec {
    /// `f_r((1 − δ)λ₀)`, `|λ₀| = 1`.
    RoyalApproach { lambda0: Complex64 },
    /// `(2 − δ, 1 − cδ)` in 𝔾₂, `c ∈ (0, 1)`.
    LinearG2 { c: f64 },
    /// `(a√(1 − r²), r)` in the ball, `r = 1 − δ`.
    BallVertical { a: Complex64 },
}

impl PathSpec {
    pub fn linear_g2(c: f64) -> Result<Self> {
        if !(c > 0.0 && c < 1.0) {
            return Err(Error::InvalidParameter(format!("c = {c} not in (0, 1)")));
        }
        Ok(Self::LinearG2 { c })
    }

    pub fn ball_vertical(a: Complex64) -> Result<Self> {
        if !(a.norm() < 1.0) {
            return Err(Error::InvalidParameter(format!("|a| = {} not < 1", a.norm())));
        }
        Ok(Self::BallVertical { a })
    }

    pub fn royal_approach(lambda0: Complex64) -> Result<Self> {
        if (lambda0.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("|λ₀| = {} ≠ 1", lambda0.norm())));
        }
        Ok(Self::RoyalApproach { lambda0 })
    }

    pub fn domain(&self) -> DomainKind {
        match self {
            PathSpec::RoyalApproach { .. } | PathSpec::LinearG2 { .. } => DomainKind::SymBidisc,
            PathSpec::BallVertical { .. } => DomainKind::Ball2,
        }
    }

    pub fn point(&self, delta: f64) -> DomainPoint {
        match *self {
            PathSpec::RoyalApproach { lambda0 } => GeodesicSpec::Royal
                .eval_raw(lambda0 * (1.0 - delta))
                .into(),
            PathSpec::LinearG2 { c } => {
                DomainPoint::two(Complex64::new(2.0 - delta, 0.0), Complex64::new(1.0 - c * delta, 0.0))
            }
            PathSpec::BallVertical { a } => {
                let r = 1.0 - delta;
                DomainPoint::two(a * (1.0 - r * r).sqrt(), Complex64::new(r, 0.0))
            }
        }
    }

    /// Closed-disc endpoint of the path.
    pub fn endpoint(&self) -> DomainPoint {
        match *self {
            PathSpec::RoyalApproach { lambda0 } => GeodesicSpec::Royal.eval_raw(lambda0).into(),
            PathSpec::LinearG2 { .. } => DomainPoint::two(Complex64::new(2.0, 0.0), ONE),
            PathSpec::BallVertical { .. } => DomainPoint::two(Complex64::new(0.0, 0.0), ONE),
        }
    }
}

/// Values of `G` along `δₖ = 2⁻ᵏ`, `k = 1..=len`, with a Richardson limit.
/// Passes iff the extrapolated limit is stable to [`PROBE_TOLERANCE`].
pub fn boundary_probe(g: &LeftInverseSpec, path: &PathSpec, schedule_len: usize) -> Result<VerificationReport> {
    if g.domain() != path.domain() {
        return Err(Error::PreconditionFailed(format!(
            "{} is not defined on {}",
            g.name(),
            path.domain()
        )));
    }
    if schedule_len == 0 {
        return Err(Error::InvalidParameter("empty schedule".into()));
    }
    let mut deltas = Vec::new();
    let mut values = Vec::new();
    let mut truncated = 0usize;
    for k in 1..=schedule_len {
        let delta = 0.5f64.powi(k as i32);
        let z = path.point(delta);
        if !contains(path.domain(), &z)?.inside {
            truncated = schedule_len - k + 1;
            break;
        }
        deltas.push(delta);
        values.push(g.eval(&z)?);
    }
    if values.is_empty() {
        return Err(Error::OutsideDomain("path leaves the domain immediately".into()));
    }
    let ex = richardson(&values, 3)?;
    let mut report = VerificationReport::new(
        "boundary_probe",
        json!({ "inverse": g.name(), "path": path, "endpoint": path.endpoint().coords().iter().map(|z| cplx(*z)).collect::<Vec<_>>() }),
        PROBE_TOLERANCE,
    )
    .with_grid(schedule_len);
    report.series = deltas
        .iter()
        .zip(&values)
        .map(|(d, v)| SeriesPoint { x: *d, re: v.re, im: v.im })
        .collect();
    report
        .metric("limit_re", ex.limit.re)
        .metric("limit_im", ex.limit.im)
        .metric("limit_abs", ex.limit.norm())
        .metric("error_estimate", ex.error_estimate)
        .metric("points_used", values.len() as f64)
        .metric("truncated", truncated as f64)
        .require("error_estimate", Comparison::Lt, PROBE_TOLERANCE);
    Ok(report)
}

/// `β(s, p) = s/(1 + p)`.
pub fn beta(s: Complex64, p: Complex64) -> Complex64 {
    s / (1.0 + p)
}

/// `α(λ) = λ/(1 + √(1 − λ²))`, principal root.
pub fn alpha(l: Complex64) -> Complex64 {
    l / (1.0 + (1.0 - l * l).sqrt())
}

/// Half-width of the rectangle from which region-A samples are drawn.
pub const REGION_A_BOX: f64 = 4.0;

/// `β` maps 𝔾₂ off the two real rays; `α` maps the slit plane into the disc.
pub fn beta_alpha_checks(n: usize, seed: u64) -> Result<VerificationReport> {
    let g2 = sample(DomainKind::SymBidisc, n, seed);
    let margins = par_map(&g2, |z| ray_distance(beta(z.z1(), z.z2())));
    let min_margin = margins.iter().copied().fold(f64::INFINITY, f64::min);

    let raw = seeded_batch(n, seed ^ 0xA11A, |rng| {
        Complex64::new(
            rng.random_range(-REGION_A_BOX..REGION_A_BOX),
            rng.random_range(-REGION_A_BOX..REGION_A_BOX),
        )
    });
    let region: Vec<Complex64> = raw.into_iter().filter(|w| region_a_contains(*w, 1e-9)).collect();
    let sup_alpha = max_of(par_map(&region, |w| alpha(*w).norm()));

    let mut report = VerificationReport::new(
        "beta_alpha_checks",
        json!({ "samples": n, "region_a_box": REGION_A_BOX }),
        0.0,
    )
    .with_seed(seed)
    .with_grid(n);
    report
        .metric("beta_min_ray_margin", min_margin)
        .metric("alpha_sup_abs", sup_alpha)
        .metric("region_a_samples", region.len() as f64)
        .require("beta_min_ray_margin", Comparison::Gt, 0.0)
        .require("alpha_sup_abs", Comparison::Lt, 1.0);
    Ok(report)
}

/// `h(s, p) = (s − 2Ψ)/(2p − sΨ)` from the royal classification; `None` on
/// the filtered neighbourhood of the royal variety.
pub fn royal_h_value(psi: &LeftInverseSpec, z: &DomainPoint) -> Result<Option<Complex64>> {
    let w = psi.eval(z)?;
    let den = 2.0 * z.z2() - z.z1() * w;
    if den.norm() <= ROYAL_FILTER {
        return Ok(None);
    }
    Ok(Some((z.z1() - 2.0 * w) / den))
}

pub fn royal_h_extract(psi: &LeftInverseSpec, n: usize, seed: u64) -> Result<VerificationReport> {
    let pre = left_inverse_residual(&GeodesicSpec::Royal, psi, 64, false)?;
    if !pre.pass {
        return Err(Error::PreconditionFailed(format!(
            "{} is not a left inverse to the royal geodesic (residual {:.3e})",
            psi.name(),
            pre.get("residual")
        )));
    }
    let points = sample(DomainKind::SymBidisc, n, seed);
    let hs = par_map(&points, |z| royal_h_value(psi, z))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let kept: Vec<f64> = hs.iter().flatten().map(|h| h.norm()).collect();
    if kept.is_empty() {
        return Err(Error::AllSamplesDegenerate);
    }
    let mut report = VerificationReport::new(
        "royal_h_extract",
        json!({ "inverse": psi.name(), "samples": n, "filter": ROYAL_FILTER }),
        1.0 + 1e-8,
    )
    .with_seed(seed)
    .with_grid(n);
    report
        .metric("sup_abs_h", max_of(kept.iter().copied()))
        .metric("kept", kept.len() as f64)
        .metric("filtered", (n - kept.len()) as f64)
        .require("sup_abs_h", Comparison::Le, 1.0 + 1e-8);
    Ok(report)
}

/// `k*(p, z) = max_j m(p_j, z_j)` on the bidisc.
pub fn bidisc_kobayashi_star(p: &DomainPoint, z: &DomainPoint) -> f64 {
    pseudo_distance_raw(p.z1(), z.z1()).max(pseudo_distance_raw(p.z2(), z.z2()))
}

/// Compares `{k*(p, ·) < ρR}` with the `ρ`-ball about `p` of the Kobayashi
/// ball `B(p, R)`, the latter computed in the coordinates that map it onto
/// the bidisc.
pub fn kobayashi_ball_identity(p: &DomainPoint, r: f64, rho: f64, n: usize, seed: u64) -> Result<VerificationReport> {
    if !(r > 0.0 && r < 1.0 && rho > 0.0 && rho < 1.0) {
        return Err(Error::PreconditionFailed(format!("need 0 < ρ, R < 1, got ρ = {rho}, R = {r}")));
    }
    if !contains(DomainKind::Bidisc, p)?.inside {
        return Err(Error::OutsideDomain(format!("center {:?}", p.coords())));
    }
    let charts = [
        MobiusMap::to_origin(DiscPoint::new(p.z1())?),
        MobiusMap::to_origin(DiscPoint::new(p.z2())?),
    ];
    // Half the samples fill the bidisc, half concentrate near the inner ball.
    let uniform = sample(DomainKind::Bidisc, n / 2, seed);
    let local = seeded_batch(n - n / 2, seed ^ 0xB0B, |rng| {
        let scale = (1.5 * rho * r).min(1.0 - 1e-9);
        let mut coord = |chart: &MobiusMap| loop {
            let u = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            if u.norm() < 1.0 {
                break chart.inverse().apply(u * scale);
            }
        };
        let a = coord(&charts[0]);
        let b = coord(&charts[1]);
        DomainPoint::two(a, b)
    });
    let points: Vec<DomainPoint> = uniform.into_iter().chain(local).collect();

    let target = rho * r;
    let outcomes = par_map(&points, |z| {
        let k = bidisc_kobayashi_star(p, z);
        if (k - target).abs() < BALL_MARGIN_FILTER {
            return None;
        }
        let left = k < target;
        let w = [charts[0].apply(z.z1()) / r, charts[1].apply(z.z2()) / r];
        let in_outer = w[0].norm() < 1.0 && w[1].norm() < 1.0;
        let right = in_outer && w[0].norm().max(w[1].norm()) < rho;
        Some((left, right))
    });
    let considered = outcomes.iter().flatten().count();
    let agree = outcomes.iter().flatten().filter(|(a, b)| a == b).count();
    let inside = outcomes.iter().flatten().filter(|(a, _)| *a).count();
    let rate = if considered == 0 { f64::NAN } else { agree as f64 / considered as f64 };
    let mut report = VerificationReport::new(
        "kobayashi_ball_identity",
        json!({ "center": p, "R": r, "rho": rho, "samples": n, "margin_filter": BALL_MARGIN_FILTER }),
        0.0,
    )
    .with_seed(seed)
    .with_grid(n);
    report
        .metric("agreement_rate", rate)
        .metric("considered", considered as f64)
        .metric("inside_left", inside as f64)
        .metric("filtered", (points.len() - considered) as f64)
        .require("agreement_rate", Comparison::Eq, 1.0);
    Ok(report)
}

/// `max |H(z) − G(z)|` over seeded samples of the common domain.
pub fn inverse_agreement(
    h: &LeftInverseSpec,
    g: &LeftInverseSpec,
    n: usize,
    seed: u64,
    tolerance: f64,
) -> Result<VerificationReport> {
    if h.domain() != g.domain() {
        return Err(Error::PreconditionFailed(format!(
            "{} and {} live on different domains",
            h.name(),
            g.name()
        )));
    }
    let points = sample(g.domain(), n, seed);
    let diffs = par_map(&points, |z| Ok::<_, Error>((h.eval(z)? - g.eval(z)?).norm()));
    let first_error = diffs.iter().find_map(|d| d.as_ref().err().map(|e| e.to_string()));
    let errors = diffs.iter().filter(|d| d.is_err()).count();
    let mut report = VerificationReport::new(
        "inverse_agreement",
        json!({ "candidate": h, "reference": g.name(), "samples": n, "first_error": first_error }),
        tolerance,
    )
    .with_seed(seed)
    .with_grid(n);
    report
        .metric("max_difference", max_of(diffs.into_iter().flatten()))
        .metric("evaluation_errors", errors as f64)
        .require("max_difference", Comparison::Lt, tolerance)
        .require("evaluation_errors", Comparison::Eq, 0.0);
    Ok(report)
}

/// Audit radius for a root `λ`: `max(|λ| + 0.05, 0.9)`, pulled back to
/// `(1 + |λ|)/2` when that would reach the unit circle.
pub fn audit_radius(lambda: Complex64) -> f64 {
    let r = (lambda.norm() + 0.05).max(0.9);
    if r < 1.0 {
        r
    } else {
        0.5 * (1.0 + lambda.norm())
    }
}

/// Solves the fiber equation on seeded samples and recounts roots around
/// each solution; every count must be exactly one.
pub fn uniqueness_audit(
    candidate: &LempertCandidate,
    cfg: &RootSolveConfig,
    n: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let points = sample(candidate.domain(), n, seed);
    let outcomes = par_map(&points, |z| -> Result<i64> {
        let l = solve_point(candidate, z, cfg)?.value();
        zero_count(candidate, z, audit_radius(l), cfg.contour_nodes)
    });
    let multiple = outcomes
        .iter()
        .filter(|o| matches!(o, Err(Error::MultipleRoots { .. })))
        .count();
    let errors = outcomes.iter().filter(|o| o.is_err()).count() - multiple;
    let not_one = outcomes.iter().filter(|o| matches!(o, Ok(k) if *k != 1)).count();
    let first_error = outcomes.iter().find_map(|o| o.as_ref().err().map(|e| e.to_string()));
    let mut report = VerificationReport::new(
        "uniqueness_audit",
        json!({ "candidate": candidate, "config": cfg, "samples": n, "first_error": first_error }),
        0.0,
    )
    .with_seed(seed)
    .with_grid(n);
    report
        .metric("counts_not_one", not_one as f64)
        .metric("multiple_roots", multiple as f64)
        .metric("other_errors", errors as f64)
        .require("counts_not_one", Comparison::Eq, 0.0)
        .require("multiple_roots", Comparison::Eq, 0.0)
        .require("other_errors", Comparison::Eq, 0.0);
    Ok(report)
}
