//! The two demonstration experiments: a unit square of four points in R^2
//! and an eight-vertex polytope in R^3, each released several times.
//!
//! The inputs are built-in public data, so every run records its realized
//! noise norm next to the measured Hausdorff displacement.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{hausdorff_distance, CompactSet};
use crate::io::SetDocument;
use crate::mechanism::{expected_displacement, perturb, Mode, PrivacyParams};
use crate::sampler::SeededStream;

pub const RESULT_SCHEMA: &str = "setdp/experiment/v1";
pub const DEFAULT_RUNS: u64 = 4;

/// The four corners of the unit square.
pub fn unit_square() -> CompactSet {
    CompactSet::points(vec![
        vec![0.0, 0.0],
        vec![0.0, 1.0],
        vec![1.0, 0.0],
        vec![1.0, 1.0],
    ])
    .expect("valid literal")
}

/// A convex polytope in `[0, 1]^3` with eight vertices: a diamond on the
/// floor under a full square on the ceiling.
pub fn stand_in_polytope() -> CompactSet {
    CompactSet::polytope(vec![
        vec![0.5, 0.0, 0.0],
        vec![1.0, 0.5, 0.0],
        vec![0.5, 1.0, 0.0],
        vec![0.0, 0.5, 0.0],
        vec![0.0, 0.0, 1.0],
        vec![1.0, 0.0, 1.0],
        vec![1.0, 1.0, 1.0],
        vec![0.0, 1.0, 1.0],
    ])
    .expect("valid literal")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    R2,
    R3,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::R2 => "experiment-r2",
            Experiment::R3 => "experiment-r3",
        }
    }

    pub fn input(&self) -> CompactSet {
        match self {
            Experiment::R2 => unit_square(),
            Experiment::R3 => stand_in_polytope(),
        }
    }

    pub fn provenance(&self) -> &'static str {
        match self {
            Experiment::R2 => "four-point unit square",
            Experiment::R3 => {
                "setup-faithful, data-substituted: the original polytope's coordinates are \
                 unpublished, this eight-vertex polytope in [0,1]^3 stands in for it"
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run: u64,
    pub noise_norm1: f64,
    pub hausdorff: f64,
    /// Every released coordinate equals the input coordinate plus the shared
    /// noise component, bit for bit.
    pub shape_preserved: bool,
    pub set: SetDocument,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub runs: u64,
    pub mean_hausdorff: f64,
    pub std_hausdorff: f64,
    pub min_hausdorff: f64,
    pub max_hausdorff: f64,
    pub mean_noise_norm1: f64,
    /// `n / epsilon`.
    pub expected_displacement: f64,
    pub all_shapes_preserved: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub schema: String,
    pub experiment: Experiment,
    pub provenance: String,
    pub epsilon: f64,
    pub seed: u64,
    pub original: SetDocument,
    pub runs: Vec<RunRecord>,
    pub summary: Summary,
}

/// Whether each coordinate of `released` is exactly `fl(x + w)` for the
/// matching coordinate `x` of `original`.
pub fn is_exact_translate(original: &CompactSet, released: &CompactSet, w: &[f64]) -> bool {
    if std::mem::discriminant(original) != std::mem::discriminant(released) {
        return false;
    }
    let a = original.extreme_points();
    let b = released.extreme_points();
    a.len() == b.len()
        && a.iter().zip(&b).all(|(p, q)| {
            p.len() == w.len()
                && p.iter()
                    .zip(q)
                    .zip(w)
                    .all(|((x, y), w)| (x + w).to_bits() == y.to_bits())
        })
}

/// Releases `input` `runs` times; run `i` uses stream `(seed, i)`.
pub fn run_experiment(
    which: Experiment,
    input: &CompactSet,
    epsilon: f64,
    runs: u64,
    seed: u64,
) -> Result<ExperimentResult> {
    let params = PrivacyParams::new(epsilon, input.dim())?;
    let mut records = Vec::with_capacity(runs as usize);
    for run in 0..runs {
        let out = perturb(input, &params, &SeededStream::new(seed, run), Mode::Audit)?;
        let noise = out.noise().expect("audit mode records noise");
        records.push(RunRecord {
            run,
            noise_norm1: noise.norm1(),
            hausdorff: hausdorff_distance(input, out.set())?,
            shape_preserved: is_exact_translate(input, out.set(), &noise.w),
            set: SetDocument::from_set(out.set(), Some(format!("{} run {run}", which.name()))),
        });
    }
    let summary = summarize(&records, expected_displacement(&params));
    Ok(ExperimentResult {
        schema: RESULT_SCHEMA.to_owned(),
        experiment: which,
        provenance: which.provenance().to_owned(),
        epsilon,
        seed,
        original: SetDocument::from_set(input, Some(format!("{} input", which.name()))),
        runs: records,
        summary,
    })
}

fn summarize(records: &[RunRecord], expected: f64) -> Summary {
    let n = records.len() as f64;
    let d: Vec<f64> = records.iter().map(|r| r.hausdorff).collect();
    let mean = d.iter().sum::<f64>() / n;
    let var = if d.len() > 1 {
        d.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Summary {
        runs: records.len() as u64,
        mean_hausdorff: mean,
        std_hausdorff: var.sqrt(),
        min_hausdorff: d.iter().copied().fold(f64::INFINITY, f64::min),
        max_hausdorff: d.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        mean_noise_norm1: records.iter().map(|r| r.noise_norm1).sum::<f64>() / n,
        expected_displacement: expected,
        all_shapes_preserved: records.iter().all(|r| r.shape_preserved),
    }
}

/// `run,noise_norm1,hausdorff,shape_preserved`, one row per run.
pub fn runs_csv(result: &ExperimentResult) -> String {
    let mut out = String::from("run,noise_norm1,hausdorff,shape_preserved\n");
    for r in &result.runs {
        let _ = writeln!(out, "{},{},{},{}", r.run, r.noise_norm1, r.hausdorff, r.shape_preserved);
    }
    out
}

/// `run,vertex,x1,...,xn`; the input set is listed with run `original`.
pub fn points_csv(result: &ExperimentResult) -> Result<String> {
    let dim = result.original.dimension;
    let mut out = String::from("run,vertex");
    for i in 1..=dim {
        let _ = write!(out, ",x{i}");
    }
    out.push('\n');
    let mut rows = |run: &str, doc: &SetDocument| -> Result<()> {
        for (v, p) in doc.to_set()?.extreme_points().iter().enumerate() {
            let _ = write!(out, "{run},{v}");
            for c in p {
                let _ = write!(out, ",{c}");
            }
            out.push('\n');
        }
        Ok(())
    };
    rows("original", &result.original)?;
    for r in &result.runs {
        rows(&r.run.to_string(), &r.set)?;
    }
    Ok(out)
}
