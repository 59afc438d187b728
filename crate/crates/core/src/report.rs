//! Run reports and their JSON rendering.

use std::fmt::Write as _;

use crate::curve::fmt17;
use crate::engine::Convention;
use crate::sphere::ExtComplex;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Converged,
    Diverged,
    Ambiguous,
    BudgetExhausted,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Converged => "converged",
            Status::Diverged => "diverged",
            Status::Ambiguous => "ambiguous",
            Status::BudgetExhausted => "budget-exhausted",
        }
    }
}

/// Stage parameter: `c_n`, or `(a_n, b_n)` for rational runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Param {
    Poly(ExtComplex),
    Rat(ExtComplex, ExtComplex),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StageRecord {
    pub n: usize,
    pub param: Param,
    /// Parameter increment from the previous stage.
    pub delta: Option<f64>,
    pub orbit_drift: Option<f64>,
    pub orbit_len: usize,
    /// Orbit entries whose sign came from full continuation.
    pub continued: usize,
    pub extended: bool,
    pub cut_count: Option<usize>,
    pub max_cut_diameter: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegluingReport {
    pub status: Status,
    pub convention: Convention,
    /// Final parameter of a converged run.
    pub limit: Option<Param>,
    /// Stages `0..=n`.
    pub stages: Vec<StageRecord>,
    /// Stage and message of the error that stopped an ambiguous run.
    pub failure: Option<(usize, String)>,
    /// Sup-distance between consecutive `Φ_n` over the probes.
    pub phi_convergence: Vec<f64>,
    /// Probe pairs mapped to the same point by the deepest `Φ_n`.
    pub phi_collisions: Option<usize>,
    pub phi_error: Option<String>,
}

impl RegluingReport {
    /// Parameter of the last stage reached.
    pub fn last_param(&self) -> Param {
        self.stages.last().expect("reports hold stage 0").param
    }

    /// `c_n` for every stage of a polynomial run.
    pub fn poly_params(&self) -> Vec<ExtComplex> {
        self.stages
            .iter()
            .filter_map(|s| match s.param {
                Param::Poly(c) => Some(c),
                Param::Rat(..) => None,
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        self.to_json_with(&[])
    }

    /// JSON document with extra top-level entries whose values are
    /// already rendered JSON.
    pub fn to_json_with(&self, extra: &[(&str, String)]) -> String {
        let mut s = String::from("{\n");
        let _ = writeln!(s, "  \"status\": {},", json_str(self.status.as_str()));
        let _ = writeln!(s, "  \"convention\": {},", json_str(self.convention.as_str()));
        let limit = match self.limit {
            None => "null".to_string(),
            Some(Param::Poly(c)) => json_point(c),
            Some(Param::Rat(a, b)) => format!("{{\"a\": {}, \"b\": {}}}", json_point(a), json_point(b)),
        };
        let _ = writeln!(s, "  \"limit\": {limit},");
        s.push_str("  \"stages\": [");
        for (i, st) in self.stages.iter().enumerate() {
            s.push_str(if i == 0 { "\n" } else { ",\n" });
            s.push_str("    {");
            let _ = write!(s, "\"n\": {}, ", st.n);
            match st.param {
                Param::Poly(c) => {
                    let _ = write!(s, "\"c\": {}, ", json_point(c));
                }
                Param::Rat(a, b) => {
                    let _ = write!(s, "\"a\": {}, \"b\": {}, ", json_point(a), json_point(b));
                }
            }
            let _ = write!(
                s,
                "\"delta\": {}, \"orbit_drift\": {}, \"orbit_len\": {}, \"continued\": {}, \"extended\": {}, \"cut_count\": {}, \"max_cut_diameter\": {}}}",
                json_opt(st.delta),
                json_opt(st.orbit_drift),
                st.orbit_len,
                st.continued,
                st.extended,
                st.cut_count.map_or("null".to_string(), |c| c.to_string()),
                json_opt(st.max_cut_diameter),
            );
        }
        s.push_str(if self.stages.is_empty() { "],\n" } else { "\n  ],\n" });
        let failure = match &self.failure {
            None => "null".to_string(),
            Some((stage, msg)) => format!("{{\"stage\": {stage}, \"message\": {}}}", json_str(msg)),
        };
        let _ = writeln!(s, "  \"failure\": {failure},");
        let phi: Vec<String> = self.phi_convergence.iter().map(|&x| json_num(x)).collect();
        let _ = writeln!(s, "  \"phi_convergence\": [{}],", phi.join(", "));
        let _ = writeln!(
            s,
            "  \"phi_collisions\": {},",
            self.phi_collisions.map_or("null".to_string(), |c| c.to_string())
        );
        let _ = write!(
            s,
            "  \"phi_error\": {}",
            self.phi_error.as_deref().map_or("null".to_string(), json_str)
        );
        for (k, v) in extra {
            let _ = write!(s, ",\n  {}: {v}", json_str(k));
        }
        s.push_str("\n}\n");
        s
    }
}

/// A finite double at 17 significant digits; non-finite values as strings.
pub fn json_num(x: f64) -> String {
    if x.is_finite() {
        fmt17(x)
    } else if x.is_nan() {
        "\"nan\"".to_string()
    } else if x > 0.0 {
        "\"inf\"".to_string()
    } else {
        "\"-inf\"".to_string()
    }
}

fn json_opt(x: Option<f64>) -> String {
    x.map_or("null".to_string(), json_num)
}

/// `[re, im]`, or `"inf"` at infinity.
pub fn json_point(p: ExtComplex) -> String {
    match p {
        ExtComplex::Finite(z) => format!("[{}, {}]", json_num(z.re), json_num(z.im)),
        ExtComplex::Infinity => "\"inf\"".to_string(),
    }
}

pub fn json_str(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}
