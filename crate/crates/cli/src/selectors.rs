//! Text selectors for catalogue entries, e.g. `family:t=0.5,h=const:0.3`,
//! `psi:omega=0.5` or `linear-g2:c=0.25`.
//!
//! Unimodular parameters are given as angles in turns (`omega=0.5` is −1).
//! Other complex parameters accept literals such as `0.3`, `0.2-0.1i`.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::str::FromStr;

use lempert_core::geodesics::MultiplierSpec;
use lempert_core::lempertize::AnalyticField;
use lempert_core::verify::PathSpec;
use lempert_core::{DiscPoint, DomainKind, DomainPoint, GeodesicSpec, HSpec, LeftInverseSpec};
use num_complex::Complex64;

#[derive(Debug)]
pub struct SelectorError(pub String);

impl std::fmt::Display for SelectorError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for SelectorError {}

impl From<lempert_core::Error> for SelectorError {
    fn from(e: lempert_core::Error) -> Self {
        SelectorError(e.to_string())
    }
}

type Result<T> = std::result::Result<T, SelectorError>;

fn err<T>(msg: impl Into<String>) -> Result<T> {
    Err(SelectorError(msg.into()))
}

struct Parsed {
    name: String,
    params: BTreeMap<String, String>,
}

impl Parsed {
    fn new(text: &str) -> Result<Self> {
        let (name, rest) = match text.split_once(':') {
            Some((n, r)) => (n, r),
            None => (text, ""),
        };
        let mut params = BTreeMap::new();
        for item in rest.split(',').filter(|s| !s.is_empty()) {
            let Some((k, v)) = item.split_once('=') else {
                return err(format!("expected key=value in `{text}`, got `{item}`"));
            };
            if params.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                return err(format!("duplicate key `{k}` in `{text}`"));
            }
        }
        Ok(Self {
            name: name.trim().to_lowercase(),
            params,
        })
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.params.remove(key)
    }

    fn real(&mut self, key: &str, default: Option<f64>) -> Result<f64> {
        match self.take(key) {
            Some(v) => v.parse().or_else(|_| err(format!("`{key}`: `{v}` is not a number"))),
            None => default.map_or_else(|| err(format!("missing parameter `{key}` for `{}`", self.name)), Ok),
        }
    }

    fn complex(&mut self, key: &str, default: Option<Complex64>) -> Result<Complex64> {
        match self.take(key) {
            Some(v) => parse_complex(&v),
            None => default.map_or_else(|| err(format!("missing parameter `{key}` for `{}`", self.name)), Ok),
        }
    }

    /// `e^{2πi·turns}`, optionally scaled by `radius`.
    fn angle(&mut self, key: &str) -> Result<Complex64> {
        let turns = self.real(key, None)?;
        let radius = self.real("radius", Some(1.0))?;
        Ok(unimodular(turns) * radius)
    }

    fn finish<T>(self, value: T) -> Result<T> {
        if let Some(k) = self.params.keys().next() {
            return err(format!("unknown parameter `{k}` for `{}`", self.name));
        }
        Ok(value)
    }
}

pub fn unimodular(turns: f64) -> Complex64 {
    // Exact values at quarter turns keep ω = ±1, ±i free of rounding.
    let quarter = turns * 4.0;
    if quarter == quarter.round() {
        return match (quarter.round() as i64).rem_euclid(4) {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, TAU * turns)
}

pub fn parse_complex(text: &str) -> Result<Complex64> {
    Complex64::from_str(text.trim()).or_else(|_| err(format!("`{text}` is not a complex number")))
}

/// Comma-separated complex coordinates, e.g. `0.5,0.3` or `0.1+0.2i,-0.3i`.
pub fn parse_point(text: &str) -> Result<DomainPoint> {
    let coords = text.split(',').map(parse_complex).collect::<Result<Vec<_>>>()?;
    match coords.as_slice() {
        [a] => Ok(DomainPoint::one(*a)),
        [a, b] => Ok(DomainPoint::two(*a, *b)),
        _ => err(format!("expected one or two coordinates, got `{text}`")),
    }
}

pub fn parse_domain(text: &str) -> Result<DomainKind> {
    DomainKind::from_str(text).map_err(|e| SelectorError(e.to_string()))
}

pub fn parse_geodesic(text: &str) -> Result<GeodesicSpec> {
    let mut p = Parsed::new(text)?;
    let g = match p.name.as_str() {
        "diagonal" => GeodesicSpec::Diagonal,
        "royal" => GeodesicSpec::Royal,
        "flat" => GeodesicSpec::Flat {
            beta: DiscPoint::new(p.complex("beta", Some(Complex64::new(0.0, 0.0)))?)?,
        },
        "ball-family" => GeodesicSpec::ball_family(p.real("t", None)?)?,
        "ball-axis" => GeodesicSpec::BallAxis,
        "graph" => {
            let psi = match p.take("psi").as_deref() {
                Some("identity") | None => MultiplierSpec::Identity,
                Some("const") => MultiplierSpec::constant(p.complex("c", None)?)?,
                Some("blaschke") => MultiplierSpec::BlaschkeFactor {
                    center: DiscPoint::new(p.complex("a", None)?)?,
                },
                Some(other) => return err(format!("unknown multiplier `{other}`")),
            };
            GeodesicSpec::BidiscGraph { psi }
        }
        other => return err(format!("unknown geodesic `{other}`")),
    };
    p.finish(g)
}

fn parse_h(text: &str) -> Result<HSpec> {
    let lower = text.to_lowercase();
    if let Some(c) = lower.strip_prefix("const:") {
        return Ok(HSpec::constant(parse_complex(c)?)?);
    }
    Ok(match lower.as_str() {
        "z1" | "coord:1" => HSpec::coordinate(1)?,
        "z2" | "coord:2" => HSpec::coordinate(2)?,
        "product" => HSpec::Product,
        _ => return err(format!("unknown h `{text}` (const:<c>, z1, z2, product)")),
    })
}

pub fn parse_inverse(text: &str) -> Result<LeftInverseSpec> {
    let mut p = Parsed::new(text)?;
    let g = match p.name.as_str() {
        "projection" => LeftInverseSpec::bidisc_projection(p.real("axis", Some(1.0))? as usize)?,
        "affine" => LeftInverseSpec::bidisc_affine(p.real("t", None)?)?,
        "family" => {
            let t = p.real("t", None)?;
            let h = parse_h(&p.take("h").unwrap_or_else(|| "const:0".into()))?;
            LeftInverseSpec::bidisc_family(t, h)?
        }
        "psi" => LeftInverseSpec::psi_omega(p.angle("omega")?)?,
        "royal-psi" => LeftInverseSpec::royal_minus_psi(p.angle("omega")?)?,
        "phi" => LeftInverseSpec::RoyalPhi,
        "ball-simple" => LeftInverseSpec::BallSimple,
        "ball-refined" => LeftInverseSpec::BallRefined,
        other => return err(format!("unknown inverse `{other}`")),
    };
    p.finish(g)
}

pub fn parse_field(text: &str) -> Result<AnalyticField> {
    let mut p = Parsed::new(text)?;
    let f = match p.name.as_str() {
        "flat-psi" => AnalyticField::FlatPsi { omega: p.angle("omega")? },
        "royal-psi" => AnalyticField::RoyalMinusPsi { omega: p.angle("omega")? },
        "const" => AnalyticField::Constant {
            v: [p.complex("v1", None)?, p.complex("v2", None)?],
        },
        other => return err(format!("unknown field `{other}`")),
    };
    p.finish(f)
}

pub fn parse_path(text: &str) -> Result<PathSpec> {
    let mut p = Parsed::new(text)?;
    let path = match p.name.as_str() {
        "linear-g2" => PathSpec::linear_g2(p.real("c", None)?)?,
        "ball-vertical" => PathSpec::ball_vertical(p.complex("a", None)?)?,
        "royal" => PathSpec::royal_approach(unimodular(p.real("lambda", Some(0.0))?))?,
        other => return err(format!("unknown path `{other}`")),
    };
    p.finish(path)
}
