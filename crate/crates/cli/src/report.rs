//! Report assembly and rendering.

use polyvol::polytope::{FaceLattice, Fingerprint};
use polyvol::{Polytope, Rational};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::Options;

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Header {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub input: String,
    pub seed: u64,
    pub sample_count: usize,
    pub max_orderings: usize,
    pub holdout: usize,
    pub holdout_seed: Option<u64>,
    pub calibrate: Option<Vec<String>>,
    pub degree: Option<usize>,
    pub expr: Option<String>,
}

impl Header {
    pub fn new(command: &str, o: &Options) -> Self {
        let input = match (&o.builtin, &o.path) {
            (Some(b), _) => format!("builtin:{b}"),
            (None, Some(p)) => p.display().to_string(),
            (None, None) => String::new(),
        };
        Header {
            tool: "polyvol",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            input,
            seed: o.seed,
            sample_count: o.sample_count,
            max_orderings: o.max_orderings,
            holdout: o.holdout,
            holdout_seed: o.holdout_seed,
            calibrate: o.calibrate.clone(),
            degree: o.degree,
            expr: o.expr.clone(),
        }
    }

    fn line(&self) -> String {
        let mut s = format!(
            "# {} {} {} {} seed={} sample_count={} max_orderings={} holdout={}",
            self.tool, self.version, self.command, self.input, self.seed, self.sample_count, self.max_orderings, self.holdout
        );
        if let Some(h) = self.holdout_seed {
            s += &format!(" holdout_seed={h}");
        }
        if let Some(c) = &self.calibrate {
            s += &format!(" calibrate={}", c.join(","));
        }
        if let Some(d) = self.degree {
            s += &format!(" degree={d}");
        }
        if let Some(e) = &self.expr {
            s += &format!(" expr={e:?}");
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolytopeSummary {
    pub dim: usize,
    pub facets: Vec<String>,
    pub f_vector: Vec<usize>,
    pub simple: bool,
}

impl PolytopeSummary {
    pub fn new(p: &Polytope) -> Self {
        PolytopeSummary { dim: p.dim(), facets: p.names(), f_vector: FaceLattice::new(p).f_vector(), simple: p.is_simple() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub header: Header,
    pub polytope: PolytopeSummary,
    pub result: serde_json::Value,
    /// Disagreements with the combinatorial prediction.
    pub findings: Vec<String>,
    #[serde(skip)]
    pub text: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let p = &self.polytope;
        let mut out = vec![
            self.header.line(),
            format!(
                "polytope: dim {}, {} facets ({}), f-vector {}, {}",
                p.dim,
                p.facets.len(),
                p.facets.join(","),
                join(&p.f_vector),
                if p.simple { "simple" } else { "not simple" }
            ),
        ];
        out.extend(self.text.iter().cloned());
        out.extend(self.findings.iter().map(|f| format!("FINDING: {f}")));
        let mut s = out.join("\n");
        s.push('\n');
        s
    }
}

pub fn q(x: &Rational) -> String {
    x.to_string()
}

pub fn qs(xs: &[Rational]) -> Vec<String> {
    xs.iter().map(q).collect()
}

pub fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

/// First 16 hex digits of SHA-256 over the canonical fingerprint text.
pub fn digest(fp: &Fingerprint) -> String {
    let canon: Vec<String> = fp.sets().iter().map(|s| s.iter().map(usize::to_string).collect::<Vec<_>>().join(",")).collect();
    let hash = Sha256::digest(canon.join(";").as_bytes());
    hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// A base vertex named by its facets, e.g. `{N,S,E,W}`.
pub fn vertex_name(p: &Polytope, v: usize) -> String {
    let names = p.names();
    format!("{{{}}}", p.vertices()[v].incident.iter().map(|&i| names[i].as_str()).collect::<Vec<_>>().join(","))
}

/// A face of the base given by its vertices.
pub fn face_name(p: &Polytope, face: &[usize]) -> String {
    if let [v] = face {
        return format!("vertex {}", vertex_name(p, *v));
    }
    let names = p.names();
    let common: Vec<&str> = (0..p.facet_count())
        .filter(|i| face.iter().all(|&v| p.vertices()[v].incident.contains(i)))
        .map(|i| names[i].as_str())
        .collect();
    format!("face {{{}}} ({} vertices)", common.join(","), face.len())
}
