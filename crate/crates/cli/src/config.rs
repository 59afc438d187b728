//! Run configuration: a JSON document, overridden field by field by flags.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use regluing::engine::{Convention, EngineConfig};
use regluing::rays::build_alpha0;
use regluing::{ExtComplex, PolyParam, SampledCurve};
use serde::{Deserialize, Serialize};

/// A complex number written as a bare real or as `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Real(f64),
    Pair([f64; 2]),
}

impl Num {
    pub fn to_complex(self) -> Complex64 {
        match self {
            Num::Real(x) => Complex64::new(x, 0.0),
            Num::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

/// Parses `re` or `re,im`.
pub fn parse_num(s: &str) -> Result<Num, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().map_err(|e| format!("bad number {p:?}: {e}"));
    match parts.as_slice() {
        [re] => Ok(Num::Real(num(re)?)),
        [re, im] => Ok(Num::Pair([num(re)?, num(im)?])),
        _ => Err(format!("expected `re` or `re,im`, got {s:?}")),
    }
}

/// Where the regluing path comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Alpha0Source {
    /// A curve in the text format.
    File { path: PathBuf },
    /// The straight segment `[-endpoint, endpoint]`.
    Segment { endpoint: Num, samples: usize },
    /// Two external rays landing together at the critical point.
    Rays { angles: [f64; 2], rho: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum RenderKind {
    Julia,
    Phi,
    Cuts,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha0: Option<Alpha0Source>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_stages: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orbit_len: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cut_stages: Option<usize>,
    /// Number of probes on the circle `|z| = 5` for the `Φ_n` estimate.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probes: Option<usize>,
    /// Read from files but not echoed: it locates results, not the run.
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub render: Option<RenderKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub half_width: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub width: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub height: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    /// Stage shown by `phi` and `cuts` renders.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stage: Option<usize>,
    /// Julia samples pushed through `Φ_n` by `phi` renders.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convention: Option<String>,
}

macro_rules! overlay {
    ($base:expr, $top:expr, $($field:ident),*) => {
        $(if $top.$field.is_some() { $base.$field = $top.$field.clone(); })*
    };
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    /// Fields set in `top` replace those of `self`.
    pub fn overridden_by(mut self, top: &RunConfig) -> RunConfig {
        overlay!(
            self, top, c, a, b, alpha0, tol, max_stages, orbit_len, horizon, cut_stages, probes, out, render,
            center, half_width, width, height, max_iter, stage, samples, convention
        );
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [("tol", self.tol), ("half_width", self.half_width)] {
            if let Some(v) = v {
                if !(v.is_finite() && v > 0.0) {
                    return Err(format!("{name} must be positive, got {v}"));
                }
            }
        }
        Ok(())
    }

    pub fn convention(&self) -> Result<Convention, String> {
        match self.convention.as_deref() {
            None | Some("standard") => Ok(Convention::Standard),
            Some("misprint") => Ok(Convention::Misprint),
            Some(other) => Err(format!("unknown convention {other:?}")),
        }
    }

    pub fn engine(&self) -> Result<EngineConfig, String> {
        self.validate()?;
        let d = EngineConfig::default();
        let probes = self.probes.unwrap_or(0);
        Ok(EngineConfig {
            tol: self.tol.unwrap_or(d.tol),
            max_stages: self.max_stages.unwrap_or(d.max_stages),
            orbit_len: self.orbit_len.unwrap_or(d.orbit_len),
            horizon: self.horizon.unwrap_or(d.horizon),
            cut_stages: self.cut_stages.unwrap_or(d.cut_stages),
            probes: (0..probes)
                .map(|k| {
                    let t = std::f64::consts::TAU * k as f64 / probes as f64;
                    ExtComplex::Finite(Complex64::from_polar(5.0, t))
                })
                .collect(),
            convention: self.convention()?,
            exec: d.exec,
        })
    }

    pub fn poly_param(&self) -> Result<PolyParam, String> {
        self.c
            .map(|c| PolyParam::from_complex(c.to_complex()))
            .ok_or_else(|| "missing polynomial parameter c".to_string())
    }

    /// The regluing path; ray-built paths need the polynomial parameter.
    pub fn alpha0(&self) -> Result<SampledCurve, String> {
        match self.alpha0.as_ref().ok_or("missing alpha0 source")? {
            Alpha0Source::File { path } => SampledCurve::read_from(path).map_err(|e| e.to_string()),
            Alpha0Source::Segment { endpoint, samples } => {
                let e = endpoint.to_complex();
                if e == Complex64::new(0.0, 0.0) {
                    Ok(SampledCurve::point(e))
                } else {
                    Ok(SampledCurve::symmetric_segment(e, (*samples).max(1)))
                }
            }
            Alpha0Source::Rays { angles, rho } => {
                build_alpha0(self.poly_param()?, (angles[0], angles[1]), *rho).map_err(|e| e.to_string())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file_values() {
        let file: RunConfig = serde_json::from_str(
            r#"{"c": -6, "tol": 1e-8, "alpha0": {"kind": "segment", "endpoint": [1.7, 0], "samples": 8}}"#,
        )
        .unwrap();
        let flags = RunConfig {
            tol: Some(1e-3),
            ..Default::default()
        };
        let merged = file.overridden_by(&flags);
        assert_eq!(merged.tol, Some(1e-3));
        assert_eq!(merged.c, Some(Num::Real(-6.0)));
        let back: RunConfig = serde_json::from_str(&merged.to_json()).unwrap();
        assert_eq!(back, merged);
    }

    #[test]
    fn numbers_parse_from_flags() {
        assert_eq!(parse_num("-6").unwrap(), Num::Real(-6.0));
        assert_eq!(parse_num("0.5, -1").unwrap(), Num::Pair([0.5, -1.0]));
        assert!(parse_num("1,2,3").is_err());
        assert!(serde_json::from_str::<RunConfig>(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn nonpositive_tolerance_is_rejected() {
        let cfg = RunConfig {
            tol: Some(0.0),
            ..Default::default()
        };
        assert!(cfg.engine().is_err());
    }
}
