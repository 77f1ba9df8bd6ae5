//! Versioned JSON documents for sets, probes, manifests and audit reports.
//!
//! Numbers are written in shortest round-trip decimal form and parsed back
//! exactly, so `read(write(s)) == s` bit for bit for every finite double.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::audit::{AuditReport, CapacityEstimate, CapacityMethod, DirectionCheck, Verdict, VerdictCounts};
use crate::error::{Error, Result};
use crate::geometry::{AxisBox, CompactSet, PointList, TestSet};
use crate::mechanism::{Mode, NoiseModel};
use crate::sampler::SeededStream;

pub const SET_SCHEMA: &str = "setdp/set/v1";
pub const MANIFEST_SCHEMA: &str = "setdp/manifest/v1";
pub const REPORT_SCHEMA: &str = "setdp/audit-report/v1";
pub const CAPACITY_SCHEMA: &str = "setdp/capacity/v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case")]
pub enum Payload {
    Points { points: Vec<Vec<f64>> },
    Polytope { vertices: Vec<Vec<f64>> },
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Point { point: Vec<f64> },
}

/// On-disk form of a [`CompactSet`] or [`TestSet`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetDocument {
    pub schema: String,
    pub dimension: usize,
    #[serde(flatten)]
    pub payload: Payload,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub label: Option<String>,
}

fn box_payload(b: &AxisBox) -> Payload {
    Payload::Box {
        lo: b.lo().to_vec(),
        hi: b.hi().to_vec(),
    }
}

impl SetDocument {
    pub fn from_set(set: &CompactSet, label: Option<String>) -> Self {
        let payload = match set {
            CompactSet::Points(p) => Payload::Points { points: p.to_vecs() },
            CompactSet::Polytope(p) => Payload::Polytope { vertices: p.to_vecs() },
            CompactSet::Box(b) => box_payload(b),
        };
        Self {
            schema: SET_SCHEMA.to_owned(),
            dimension: set.dim(),
            payload,
            label,
        }
    }

    pub fn from_probe(probe: &TestSet, label: Option<String>) -> Self {
        let payload = match probe {
            TestSet::Point(p) => Payload::Point { point: p.clone() },
            TestSet::Box(b) => box_payload(b),
        };
        Self {
            schema: SET_SCHEMA.to_owned(),
            dimension: probe.dim(),
            payload,
            label,
        }
    }

    fn check_header(&self) -> Result<()> {
        if self.schema != SET_SCHEMA {
            return Err(Error::Document(format!(
                "unsupported schema {:?} (expected {SET_SCHEMA:?})",
                self.schema
            )));
        }
        Ok(())
    }

    fn check_dimension(&self, found: usize) -> Result<()> {
        if found != self.dimension {
            return Err(Error::Document(format!(
                "declared dimension {} but coordinates have dimension {found}",
                self.dimension
            )));
        }
        Ok(())
    }

    /// The document as a sensitive set. A `point` document becomes a
    /// one-point set.
    pub fn to_set(&self) -> Result<CompactSet> {
        self.check_header()?;
        let set = match &self.payload {
            Payload::Points { points } => CompactSet::Points(PointList::new(points.clone())?),
            Payload::Polytope { vertices } => CompactSet::Polytope(PointList::new(vertices.clone())?),
            Payload::Box { lo, hi } => CompactSet::axis_box(lo.clone(), hi.clone())?,
            Payload::Point { point } => CompactSet::points(vec![point.clone()])?,
        };
        self.check_dimension(set.dim())?;
        Ok(set)
    }

    /// The document as a probe. Only `box` and `point` documents qualify.
    pub fn to_probe(&self) -> Result<TestSet> {
        self.check_header()?;
        let probe = match &self.payload {
            Payload::Box { lo, hi } => TestSet::axis_box(lo.clone(), hi.clone())?,
            Payload::Point { point } => TestSet::point(point.clone())?,
            other => {
                return Err(Error::Document(format!(
                    "a probe must be a box or a point, got {}",
                    variant_of(other)
                )))
            }
        };
        self.check_dimension(probe.dim())?;
        Ok(probe)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Document(msg) => Error::Document(format!("{}: {msg}", path.display())),
            other => other,
        })
    }
}

fn variant_of(p: &Payload) -> &'static str {
    match p {
        Payload::Points { .. } => "points",
        Payload::Polytope { .. } => "polytope",
        Payload::Box { .. } => "box",
        Payload::Point { .. } => "point",
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, to_json(value)?)?;
    Ok(())
}

/// One released set in a perturbation batch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub run: u64,
    pub stream: u64,
    pub file: String,
    /// Only present for audit-mode runs.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub noise: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema: String,
    pub input: String,
    pub epsilon: f64,
    pub seed: u64,
    pub runs: u64,
    pub mode: Mode,
    /// Sum of the per-release epsilons. Reported for the caller's own
    /// accounting; no composition theorem is applied.
    pub cumulative_epsilon: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub created_unix: Option<u64>,
    pub outputs: Vec<ManifestEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityRecord {
    pub schema: String,
    pub epsilon: f64,
    pub seed: u64,
    pub method: CapacityMethod,
    pub estimate: CapacityEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeRecord {
    pub index: usize,
    pub probe: SetDocument,
    pub diameter: f64,
    pub bound: f64,
    pub t_x: CapacityEstimate,
    pub t_y: CapacityEstimate,
    pub x_over_y: DirectionCheck,
    pub y_over_x: DirectionCheck,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema: String,
    pub epsilon: f64,
    pub hausdorff: f64,
    pub diam_x: f64,
    pub diam_y: f64,
    pub method: CapacityMethod,
    pub noise_model: NoiseModel,
    pub trials: u64,
    pub confidence: f64,
    pub seed: SeededStream,
    pub counts: VerdictCounts,
    pub verdict: Verdict,
    pub probes: Vec<ProbeRecord>,
}

impl From<&AuditReport> for ReportDocument {
    fn from(r: &AuditReport) -> Self {
        let probes: Vec<ProbeRecord> = r
            .probes
            .iter()
            .enumerate()
            .map(|(index, p)| ProbeRecord {
                index,
                probe: SetDocument::from_probe(&p.probe, None),
                diameter: p.diameter,
                bound: p.bound,
                t_x: p.t_x.clone(),
                t_y: p.t_y.clone(),
                x_over_y: p.x_over_y.clone(),
                y_over_x: p.y_over_x.clone(),
                verdict: p.verdict(),
            })
            .collect();
        Self {
            schema: REPORT_SCHEMA.to_owned(),
            epsilon: r.epsilon,
            hausdorff: r.hausdorff,
            diam_x: r.diam_x,
            diam_y: r.diam_y,
            method: r.method,
            noise_model: r.model,
            trials: r.trials,
            confidence: r.confidence,
            seed: r.stream,
            counts: r.counts(),
            verdict: probes.iter().map(|p| p.verdict).max().unwrap_or(Verdict::Pass),
            probes,
        }
    }
}

/// Formats like C's `%.{digits}g`: fixed or exponent notation, whichever is
/// shorter for the magnitude, with trailing zeros removed.
pub fn format_sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_owned();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_owned()
        } else {
            s.to_owned()
        }
    };
    if exp < -4 || exp >= digits as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mantissa), exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim(&format!("{:.*}", decimals, x))
    }
}
