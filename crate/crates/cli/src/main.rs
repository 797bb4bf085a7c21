//! `lempert`: runs verification checks, builds Lempert left inverses, probes
//! boundary limits, compares distances and draws samples.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 usage error,
//! 3 numerical failure (solver divergence, branch failure).

mod output;
mod selectors;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lempert_core::exec::{set_execution, Execution};
use lempert_core::lempertize::{
    build_inverse, combine, field_from_inverse, normalize_field, CovectorField, LempertCandidate, RootSolveConfig,
};
use lempert_core::metrics::{caratheodory_star, distance_consistency, lempert_star, reevaluate_witness};
use lempert_core::suite::{run_suite, DEFAULT_SEED};
use lempert_core::verify::{self, Comparison, VerificationReport};
use lempert_core::{domains, Error, GeodesicSpec, LeftInverseSpec};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use output::{Document, SampleRow};
use selectors::SelectorError;

#[derive(Debug, Parser, Serialize)]
#[command(name = "lempert", version, about = "Complex geodesics, left inverses and invariant distances")]
struct Cli {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Output format; `sample` defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Run batches on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    /// Replaces the tolerance of every report (not for `suite`).
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Check {
    Residual,
    Range,
    Fiber,
    Duality,
    Kernel,
    RoyalH,
    BetaAlpha,
    Kobayashi,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Run checks on a geodesic and a left inverse.
    Verify {
        #[arg(long)]
        geodesic: Option<String>,
        #[arg(long)]
        inverse: Option<String>,
        /// Checks to run, comma separated.
        #[arg(long, value_enum, value_delimiter = ',', default_value = "residual")]
        check: Vec<Check>,
        /// Radial and angular grid size.
        #[arg(long, default_value_t = 64)]
        grid: usize,
        /// Fit a disc automorphism before measuring the residual.
        #[arg(long)]
        fit: bool,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Step lengths along kernel lines for the fiber check.
        #[arg(long, value_delimiter = ',', default_value = "0.1")]
        steps: Vec<f64>,
        /// Center of the Kobayashi ball.
        #[arg(long, default_value = "0,0")]
        center: String,
        #[arg(long, default_value_t = 0.5)]
        radius: f64,
        #[arg(long, default_value_t = 0.3)]
        rho: f64,
    },
    /// Build a left inverse from covector fields and check it.
    Lempertize {
        #[arg(long)]
        geodesic: String,
        /// Source inverse whose gradient along the geodesic gives a field.
        #[arg(long)]
        from_inverse: Vec<String>,
        /// Analytic field source: flat-psi:omega=.., royal-psi:omega=.., const:v1=..,v2=..
        #[arg(long)]
        field: Vec<String>,
        /// With two sources, the weight of the second.
        #[arg(long)]
        t: Option<f64>,
        /// Inverse the construction should agree with.
        #[arg(long)]
        reference: Option<String>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 64)]
        grid: usize,
        #[arg(long)]
        audit: Option<usize>,
        #[arg(long, default_value_t = 256)]
        contour_nodes: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Radial limit of an inverse along a path to the boundary.
    Probe {
        #[arg(long)]
        inverse: String,
        #[arg(long)]
        path: String,
        /// Number of halvings of the distance to the endpoint.
        #[arg(long, default_value_t = 12)]
        len: usize,
    },
    /// Carathéodory and Lempert distances for one pair, or a seeded batch.
    Distance {
        #[arg(long)]
        domain: String,
        #[arg(long, allow_hyphen_values = true)]
        w: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        #[arg(long, default_value_t = 100)]
        pairs: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Seeded uniform samples of a domain.
    Sample {
        #[arg(long)]
        domain: String,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// The acceptance criteria.
    Suite {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Criterion id or title fragment.
        #[arg(long)]
        only: Option<String>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Verify { .. } => "verify",
            Command::Lempertize { .. } => "lempertize",
            Command::Probe { .. } => "probe",
            Command::Distance { .. } => "distance",
            Command::Sample { .. } => "sample",
            Command::Suite { .. } => "suite",
        }
    }
}

enum Failure {
    Usage(String),
    Numeric(String),
    Io(std::io::Error),
}

impl From<SelectorError> for Failure {
    fn from(e: SelectorError) -> Self {
        Failure::Usage(e.0)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotInDisc(_)
            | Error::InvalidParameter(_)
            | Error::DimensionMismatch { .. }
            | Error::OutsideDomain(_)
            | Error::RadiusTooLarge(_)
            | Error::MixedGeodesics
            | Error::PreconditionFailed(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.into())
    }
}

enum Outcome {
    Document(Document),
    Samples(String, Vec<lempert_core::DomainPoint>),
}

fn need<'a>(value: &'a Option<String>, flag: &str, check: Check) -> Result<&'a str, Failure> {
    value
        .as_deref()
        .ok_or_else(|| Failure::Usage(format!("--{flag} is required for the {check:?} check")))
}

#[allow(clippy::too_many_arguments)]
fn run_verify(
    geodesic: &Option<String>,
    inverse: &Option<String>,
    checks: &[Check],
    grid: usize,
    fit: bool,
    samples: usize,
    seed: u64,
    steps: &[f64],
    center: &str,
    radius: f64,
    rho: f64,
) -> Result<Vec<VerificationReport>, Failure> {
    let mut reports = Vec::new();
    for &check in checks {
        let pair = || -> Result<(GeodesicSpec, LeftInverseSpec), Failure> {
            Ok((
                selectors::parse_geodesic(need(geodesic, "geodesic", check)?)?,
                selectors::parse_inverse(need(inverse, "inverse", check)?)?,
            ))
        };
        let report = match check {
            Check::Residual => {
                let (f, g) = pair()?;
                verify::left_inverse_residual(&f, &g, grid, fit)?
            }
            Check::Range => {
                let g = selectors::parse_inverse(need(inverse, "inverse", check)?)?;
                verify::range_supremum(&g, g.domain(), samples, seed)?
            }
            Check::Fiber => {
                let (f, g) = pair()?;
                verify::fiber_affinity(&f, &g, grid, steps)?
            }
            Check::Duality => {
                let (f, g) = pair()?;
                let v = field_from_inverse(&g, f)?;
                verify::duality_residual(&f, &v, &g, samples, seed)?
            }
            Check::Kernel => {
                let (f, g) = pair()?;
                let v = normalize_field(&field_from_inverse(&g, f)?, f)?;
                verify::kernel_constancy(&v, grid)?
            }
            Check::RoyalH => {
                let g = selectors::parse_inverse(need(inverse, "inverse", check)?)?;
                verify::royal_h_extract(&g, samples, seed)?
            }
            Check::BetaAlpha => verify::beta_alpha_checks(samples, seed)?,
            Check::Kobayashi => {
                let p = selectors::parse_point(center)?;
                verify::kobayashi_ball_identity(&p, radius, rho, samples, seed)?
            }
        };
        reports.push(report);
    }
    Ok(reports)
}

fn source_field(text: &str, geodesic: &GeodesicSpec, analytic: bool) -> Result<CovectorField, Failure> {
    let raw = if analytic {
        CovectorField::analytic(selectors::parse_field(text)?, *geodesic)
    } else {
        field_from_inverse(&selectors::parse_inverse(text)?, *geodesic)?
    };
    Ok(normalize_field(&raw, *geodesic)?)
}

#[allow(clippy::too_many_arguments)]
fn run_lempertize(
    geodesic: &str,
    from_inverse: &[String],
    fields: &[String],
    t: Option<f64>,
    reference: &Option<String>,
    samples: usize,
    grid: usize,
    audit: Option<usize>,
    contour_nodes: usize,
    seed: u64,
) -> Result<(Vec<VerificationReport>, Value), Failure> {
    let f = selectors::parse_geodesic(geodesic)?;
    let mut sources = Vec::new();
    for s in from_inverse {
        sources.push(source_field(s, &f, false)?);
    }
    for s in fields {
        sources.push(source_field(s, &f, true)?);
    }
    let v = match (sources.as_slice(), t) {
        ([v], None) => v.clone(),
        ([v0, v1], Some(t)) => combine(v0, v1, t)?,
        ([_, _], None) => return Err(Failure::Usage("two sources need --t".into())),
        ([_], Some(_)) => return Err(Failure::Usage("--t needs two sources".into())),
        _ => return Err(Failure::Usage("give one or two of --from-inverse/--field".into())),
    };
    let cfg = RootSolveConfig {
        contour_nodes,
        ..RootSolveConfig::default()
    };
    cfg.validate()?;
    let candidate = LempertCandidate::new(v.clone());
    let h = build_inverse(&candidate, &cfg)?;

    let mut reports = vec![
        verify::left_inverse_residual(&f, &h, grid, false)?,
        verify::duality_residual(&f, &v, &h, samples, seed)?,
        verify::uniqueness_audit(&candidate, &cfg, audit.unwrap_or(samples.min(200)), seed)?,
    ];
    // On the diagonal the Lempert inverse is the affine one read off at 0.
    let reference = match reference {
        Some(r) => Some(selectors::parse_inverse(r)?),
        None if f == GeodesicSpec::Diagonal => {
            let t = v.eval(Complex64::new(0.0, 0.0))?[0].re;
            Some(LeftInverseSpec::bidisc_affine(t)?)
        }
        None => None,
    };
    let mut extra = json!({ "root_solve": cfg });
    if let Some(g) = reference {
        extra["reference"] = json!(g.name());
        reports.push(verify::inverse_agreement(&h, &g, samples, seed, 1e-8)?);
    }
    Ok((reports, extra))
}

fn run_distance(domain: &str, w: &Option<String>, z: &Option<String>, pairs: usize, seed: u64) -> Result<VerificationReport, Failure> {
    let d = selectors::parse_domain(domain)?;
    let (w, z) = match (w, z) {
        (Some(w), Some(z)) => (selectors::parse_point(w)?, selectors::parse_point(z)?),
        (None, None) => return Ok(distance_consistency(d, pairs, seed)?),
        _ => return Err(Failure::Usage("give both --w and --z, or neither".into())),
    };
    for p in [&w, &z] {
        let m = domains::contains(d, p)?;
        if !m.inside {
            return Err(Failure::Usage(format!("{:?} is not in {}", p.coords(), d.name())));
        }
    }
    let c = caratheodory_star(d, &w, &z)?;
    let l = lempert_star(d, &w, &z)?;
    let (_, miss) = reevaluate_witness(d, &w, &z, &l)?;
    let tolerance = if d == domains::DomainKind::SymBidisc { 1e-6 } else { 1e-8 };
    let mut report = VerificationReport::new(
        "distance",
        json!({
            "domain": d.name(),
            "w": w.coords(),
            "z": z.coords(),
            "caratheodory": c,
            "lempert": l,
        }),
        tolerance,
    );
    report
        .metric("c_star", c.value_star)
        .metric("l_star", l.value_star)
        .metric("c_minus_l", (c.value_star - l.value_star).abs())
        .metric("witness_miss", miss)
        .require("c_minus_l", Comparison::Le, tolerance)
        .require("witness_miss", Comparison::Le, tolerance);
    Ok(report)
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let mut config = serde_json::to_value(&cli.command).expect("arguments serialize");
    if let Some(inner) = config.as_object().and_then(|m| m.values().next().cloned()) {
        config = inner;
    }
    if let Some(t) = cli.tolerance {
        if matches!(cli.command, Command::Suite { .. }) {
            return Err(Failure::Usage("suite criteria have fixed tolerances".into()));
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(Failure::Usage(format!("tolerance {t} must be positive")));
        }
        config["tolerance"] = json!(t);
    }
    let command = cli.command.name();
    let doc = match &cli.command {
        Command::Verify {
            geodesic,
            inverse,
            check,
            grid,
            fit,
            samples,
            seed,
            steps,
            center,
            radius,
            rho,
        } => {
            let reports = run_verify(geodesic, inverse, check, *grid, *fit, *samples, *seed, steps, center, *radius, *rho)?;
            Document::new(command, config, reports)
        }
        Command::Lempertize {
            geodesic,
            from_inverse,
            field,
            t,
            reference,
            samples,
            grid,
            audit,
            contour_nodes,
            seed,
        } => {
            let (reports, extra) = run_lempertize(
                geodesic,
                from_inverse,
                field,
                *t,
                reference,
                *samples,
                *grid,
                *audit,
                *contour_nodes,
                *seed,
            )?;
            let mut doc = Document::new(command, config, reports);
            doc.details = Some(extra);
            doc
        }
        Command::Probe { inverse, path, len } => {
            let g = selectors::parse_inverse(inverse)?;
            let path = selectors::parse_path(path)?;
            Document::new(command, config, vec![verify::boundary_probe(&g, &path, *len)?])
        }
        Command::Distance { domain, w, z, pairs, seed } => {
            Document::new(command, config, vec![run_distance(domain, w, z, *pairs, *seed)?])
        }
        Command::Sample { domain, n, seed } => {
            let d = selectors::parse_domain(domain)?;
            return Ok(Outcome::Samples(d.name().to_string(), domains::sample(d, *n, *seed)));
        }
        Command::Suite { seed, only } => {
            let suite = run_suite(*seed, only.as_deref());
            for o in &suite.outcomes {
                eprintln!("{:<4} {:<28} {}  {}", o.id, o.title, if o.pass { "PASS" } else { "FAIL" }, o.summary());
            }
            let criteria: Vec<Value> = suite
                .outcomes
                .iter()
                .map(|o| json!({ "id": o.id, "title": o.title, "pass": o.pass, "summary": o.summary(), "conditions": o.conditions }))
                .collect();
            let mut doc = Document::new(command, config, suite.outcomes.into_iter().flat_map(|o| o.reports).collect());
            doc.details = Some(json!({ "criteria": criteria }));
            doc.pass = suite.pass;
            doc
        }
    };
    let mut doc = doc;
    if let Some(t) = cli.tolerance {
        for r in &mut doc.reports {
            r.override_tolerance(t);
        }
        doc.pass = !doc.reports.is_empty() && doc.reports.iter().all(|r| r.pass);
    }
    Ok(Outcome::Document(doc))
}

fn emit(cli: &Cli, outcome: &Outcome) -> Result<bool, Failure> {
    let path = output::resolve_output(cli.output.as_deref());
    let mut out = output::open(path.as_deref())?;
    match outcome {
        Outcome::Document(doc) => {
            match cli.format.unwrap_or(Format::Json) {
                Format::Json => output::write_json(&mut *out, doc)?,
                Format::Csv => output::write_series_csv(&mut *out, &doc.reports)?,
            }
            Ok(doc.pass)
        }
        Outcome::Samples(name, points) => {
            let rows: Vec<SampleRow> = points.iter().map(|z| SampleRow::new(name, z)).collect();
            match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => output::write_samples_csv(&mut *out, &rows)?,
                Format::Json => {
                    let config = serde_json::to_value(&cli.command).expect("arguments serialize");
                    let mut doc = Document::new("sample", config["sample"].clone(), Vec::new());
                    doc.details = Some(json!({ "samples": rows }));
                    doc.pass = true;
                    output::write_json(&mut *out, &doc)?;
                }
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.sequential {
        set_execution(Execution::Sequential);
    }
    let result = run(&cli).and_then(|outcome| emit(&cli, &outcome));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Io(e)) => {
            eprintln!("i/o error: {e}");
            ExitCode::from(2)
        }
    }
}
