//! Capacity functionals of released sets and the privacy audit built on them.
//!
//! The capacity functional of a random set `M(X)` at a compact probe `K` is
//! `T(K) = P[M(X) ∩ K ≠ ∅]`. For the translation mechanism the event is
//! `w ∈ ∪_{x ∈ X} (K - x)`, a union of boxes when `X` is a point set and `K`
//! a box, so the probability has a closed form by inclusion–exclusion.
//! Everything else falls back to Monte Carlo with an exact binomial interval.
//!
//! The audit checks, for each probe `K` and both orderings of `(X, Y)`,
//!
//! ```text
//! T_{M(X)}(K) <= exp(eps * (diam K + d_H(X, Y))) * T_{M(Y)}(K)
//! ```

pub mod grid;
pub mod stats;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, check_epsilon, Error, Result};
use crate::geometry::{
    diameter, hausdorff_distance, intersects, translate, AxisBox, CompactSet, TestSet,
    Translation,
};
use crate::mechanism::NoiseModel;
use crate::sampler::{laplace_interval_mass, LaplaceParams, SeededStream};

pub use grid::ProbeGrid;
pub use stats::clopper_pearson;

/// Inclusion–exclusion over `2^m` subsets is allowed up to this many points.
pub const MAX_EXACT_POINTS: usize = 20;

/// Relative slack applied when comparing a ratio against the bound.
pub const BOUND_REL_TOL: f64 = 1e-9;

pub const DEFAULT_TRIALS: u64 = 100_000;
pub const DEFAULT_CONFIDENCE: f64 = 0.99;

/// Trials per independently seeded Monte-Carlo chunk. Fixed so that the
/// estimate does not depend on how chunks are spread over workers.
const MC_CHUNK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimateKind {
    Exact,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityEstimate {
    pub value: f64,
    pub kind: EstimateKind,
    pub trials: u64,
    pub hits: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ci_low: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ci_high: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub confidence: Option<f64>,
}

impl CapacityEstimate {
    pub fn exact(value: f64) -> Self {
        Self {
            value: value.clamp(0.0, 1.0),
            kind: EstimateKind::Exact,
            trials: 0,
            hits: 0,
            ci_low: None,
            ci_high: None,
            confidence: None,
        }
    }

    pub fn monte_carlo(hits: u64, trials: u64, confidence: f64) -> Self {
        let (lo, hi) = clopper_pearson(hits, trials, confidence);
        Self {
            value: hits as f64 / trials as f64,
            kind: EstimateKind::MonteCarlo,
            trials,
            hits,
            ci_low: Some(lo),
            ci_high: Some(hi),
            confidence: Some(confidence),
        }
    }

    /// Lower confidence bound, or the value itself when exact.
    pub fn lower(&self) -> f64 {
        self.ci_low.unwrap_or(self.value)
    }

    /// Upper confidence bound, or the value itself when exact.
    pub fn upper(&self) -> f64 {
        self.ci_high.unwrap_or(self.value)
    }

    pub fn covers(&self, p: f64) -> bool {
        self.lower() <= p && p <= self.upper()
    }
}

/// `P[c + w ∈ box]` for `w ~ Laplace(0, b)^n`.
pub fn box_probability(probe: &AxisBox, center: &[f64], b: f64) -> Result<f64> {
    check_dim(probe.dim(), center.len())?;
    if !(b.is_finite() && b > 0.0) {
        return Err(Error::InvalidScale(b));
    }
    Ok(probe
        .lo()
        .iter()
        .zip(probe.hi())
        .zip(center)
        .map(|((lo, hi), c)| laplace_interval_mass(lo - c, hi - c, b))
        .product())
}

/// Whether [`exact_capacity`] can handle this set.
pub fn exact_supported(set: &CompactSet) -> bool {
    match set {
        CompactSet::Points(p) => p.len() <= MAX_EXACT_POINTS,
        CompactSet::Box(_) => true,
        CompactSet::Polytope(_) => false,
    }
}

/// Sum of `(-1)^{k+1} P[w ∈ B_{i1} ∩ ... ∩ B_ik]` over nonempty subsets,
/// pruning branches whose intersection is empty or has zero mass.
fn union_probability(boxes: &[AxisBox], b: f64) -> f64 {
    fn visit(boxes: &[AxisBox], next: usize, current: &AxisBox, k: usize, b: f64, total: &mut f64) {
        let zero = vec![0.0; current.dim()];
        let p = box_probability(current, &zero, b).expect("dimensions checked by caller");
        if p == 0.0 {
            return;
        }
        if k % 2 == 1 {
            *total += p;
        } else {
            *total -= p;
        }
        for j in next..boxes.len() {
            if let Some(inter) = current.intersection(&boxes[j]) {
                visit(boxes, j + 1, &inter, k + 1, b, total);
            }
        }
    }
    let mut total = 0.0;
    for (i, bx) in boxes.iter().enumerate() {
        visit(boxes, i + 1, bx, 1, b, &mut total);
    }
    total
}

/// Exact `P[(X + w) ∩ K ≠ ∅]` under `w ~ Laplace(0, 1/epsilon)^n`.
///
/// Supports point sets (via inclusion–exclusion over the shifted probes
/// `K - x`) and boxes (where `K - X` is itself a box). Point probes are
/// treated as degenerate boxes and give probability zero.
pub fn exact_capacity(x: &CompactSet, probe: &TestSet, epsilon: f64) -> Result<CapacityEstimate> {
    check_dim(x.dim(), probe.dim())?;
    let b = LaplaceParams::for_epsilon(epsilon)?.scale();
    let k = probe.as_box();
    let shifted = |lo: &[f64], hi: &[f64]| -> AxisBox {
        AxisBox::new(
            k.lo().iter().zip(hi).map(|(a, x)| a - x).collect(),
            k.hi().iter().zip(lo).map(|(a, x)| a - x).collect(),
        )
        .expect("lo <= hi is preserved by the shift")
    };
    let value = match x {
        CompactSet::Points(pts) => {
            if pts.len() > MAX_EXACT_POINTS {
                return Err(Error::TooManyPoints {
                    points: pts.len(),
                    limit: MAX_EXACT_POINTS,
                });
            }
            let boxes: Vec<AxisBox> = pts.iter().map(|p| shifted(p, p)).collect();
            union_probability(&boxes, b)
        }
        CompactSet::Box(xb) => {
            let zero = vec![0.0; xb.dim()];
            box_probability(&shifted(xb.lo(), xb.hi()), &zero, b)?
        }
        CompactSet::Polytope(_) => return Err(Error::ExactUnsupported("polytope sets")),
    };
    Ok(CapacityEstimate::exact(value))
}

/// Monte-Carlo settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarlo {
    pub trials: u64,
    pub confidence: f64,
    /// Worker threads; `None` uses the global pool. Results do not depend
    /// on this value.
    pub workers: Option<usize>,
    pub model: NoiseModel,
}

impl Default for MonteCarlo {
    fn default() -> Self {
        Self {
            trials: DEFAULT_TRIALS,
            confidence: DEFAULT_CONFIDENCE,
            workers: None,
            model: NoiseModel::Laplace,
        }
    }
}

fn count_chunk(
    x: &CompactSet,
    probe: &TestSet,
    lap: &LaplaceParams,
    model: NoiseModel,
    stream: SeededStream,
    trials: u64,
) -> Result<u64> {
    let mut rng = stream.rng();
    let mut w = vec![0.0; x.dim()];
    let k = probe.as_box();
    let mut hits = 0;
    for _ in 0..trials {
        model.draw(lap, &mut rng, &mut w);
        if translate_hits(x, &w, probe, &k)? {
            hits += 1;
        }
    }
    Ok(hits)
}

/// `intersects(translate(x, w), probe)` without building the translate where
/// the shifted coordinates can be tested in place. The sums `p_i + w_i` are
/// the same floating-point operations `translate` performs.
fn translate_hits(x: &CompactSet, w: &[f64], probe: &TestSet, k: &AxisBox) -> Result<bool> {
    let inside = |p: &[f64]| {
        p.iter()
            .zip(w)
            .zip(k.lo().iter().zip(k.hi()))
            .all(|((p, w), (lo, hi))| {
                let v = p + w;
                *lo <= v && v <= *hi
            })
    };
    match (x, probe) {
        (CompactSet::Points(pts), TestSet::Box(_)) => Ok(pts.iter().any(inside)),
        (CompactSet::Box(b), _) => Ok(b
            .lo()
            .iter()
            .zip(b.hi())
            .zip(w)
            .zip(k.lo().iter().zip(k.hi()))
            .all(|(((lo, hi), w), (klo, khi))| lo + w <= *khi && *klo <= hi + w)),
        _ => intersects(&translate(x, &Translation::new(w.to_vec())?)?, probe),
    }
}

#[cfg(feature = "parallel")]
fn run_chunks<F>(chunks: u64, workers: Option<usize>, f: F) -> Result<u64>
where
    F: Fn(u64) -> Result<u64> + Sync + Send,
{
    use rayon::prelude::*;
    let sum = || (0..chunks).into_par_iter().map(&f).try_reduce(|| 0, |a, b| Ok(a + b));
    match workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Io(std::io::Error::other(e)))?
            .install(sum),
        None => sum(),
    }
}

#[cfg(not(feature = "parallel"))]
fn run_chunks<F>(chunks: u64, _workers: Option<usize>, f: F) -> Result<u64>
where
    F: Fn(u64) -> Result<u64>,
{
    (0..chunks).map(f).sum()
}

/// Monte-Carlo estimate of `P[(X + w) ∩ K ≠ ∅]` with a Clopper–Pearson
/// interval. Trials are split into fixed-size chunks, chunk `c` drawing from
/// `stream.substream(c)`, so the result is identical for any worker count.
pub fn mc_capacity(
    x: &CompactSet,
    probe: &TestSet,
    epsilon: f64,
    mc: &MonteCarlo,
    stream: &SeededStream,
) -> Result<CapacityEstimate> {
    check_dim(x.dim(), probe.dim())?;
    if mc.trials == 0 {
        return Err(Error::ZeroTrials);
    }
    if !(mc.confidence > 0.0 && mc.confidence < 1.0) {
        return Err(Error::InvalidConfidence(mc.confidence));
    }
    let lap = LaplaceParams::for_epsilon(epsilon)?;
    let chunks = mc.trials.div_ceil(MC_CHUNK);
    let hits = run_chunks(chunks, mc.workers, |c| {
        let len = MC_CHUNK.min(mc.trials - c * MC_CHUNK);
        count_chunk(x, probe, &lap, mc.model, stream.substream(c), len)
    })?;
    Ok(CapacityEstimate::monte_carlo(hits, mc.trials, mc.confidence))
}

/// `exp(eps * (diam K + d_H(X, Y)))`. `epsilon = 0` is accepted and gives 1.
pub fn privacy_bound(x: &CompactSet, y: &CompactSet, probe: &TestSet, epsilon: f64) -> Result<f64> {
    check_dim(x.dim(), probe.dim())?;
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(Error::InvalidEpsilon(epsilon));
    }
    let d = hausdorff_distance(x, y)?;
    Ok(bound_from_parts(epsilon, probe.diameter(), d))
}

fn bound_from_parts(epsilon: f64, diam: f64, hausdorff: f64) -> f64 {
    (epsilon * (diam + hausdorff)).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CapacityMethod {
    /// Exact where supported, Monte Carlo otherwise.
    #[default]
    Auto,
    Exact,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Inconclusive,
    Fail,
}

/// Outcome of checking one ordering `T_num <= bound * T_den`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionCheck {
    pub verdict: Verdict,
    /// Ratio of point estimates, absent when the denominator estimate is 0.
    pub ratio: Option<f64>,
    /// `lower(num) / upper(den)`.
    pub ratio_low: Option<f64>,
    /// `upper(num) / lower(den)`.
    pub ratio_high: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub diagnostic: Option<String>,
}

fn safe_div(a: f64, b: f64) -> Option<f64> {
    (b > 0.0).then(|| a / b)
}

/// Decision rule: pass when even the largest ratio compatible with the
/// estimates is within the bound, fail when even the smallest one exceeds
/// it, inconclusive otherwise. Exact zero over exact zero is inconclusive.
pub fn check_direction(num: &CapacityEstimate, den: &CapacityEstimate, bound: f64) -> DirectionCheck {
    let (num_lo, num_hi) = (num.lower(), num.upper());
    let (den_lo, den_hi) = (den.lower(), den.upper());
    let slack = 1.0 + BOUND_REL_TOL;
    let (verdict, diagnostic) = if num_hi == 0.0 && den_hi == 0.0 {
        (
            Verdict::Inconclusive,
            Some("both capacities are exactly zero (zero-measure probe); ratio 0/0 undefined".to_owned()),
        )
    } else if num_hi <= bound * den_lo * slack {
        (Verdict::Pass, None)
    } else if num_lo > bound * den_hi * slack {
        (Verdict::Fail, None)
    } else if num.hits == 0 && den.hits == 0 && num.kind == EstimateKind::MonteCarlo {
        (
            Verdict::Inconclusive,
            Some("no Monte-Carlo hits for either set; probe may have zero measure".to_owned()),
        )
    } else {
        (
            Verdict::Inconclusive,
            Some("confidence intervals straddle the bound".to_owned()),
        )
    };
    DirectionCheck {
        verdict,
        ratio: safe_div(num.value, den.value),
        ratio_low: safe_div(num_lo, den_hi),
        ratio_high: safe_div(num_hi, den_lo),
        diagnostic,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditOptions {
    pub epsilon: f64,
    pub method: CapacityMethod,
    pub mc: MonteCarlo,
}

impl AuditOptions {
    pub fn new(epsilon: f64) -> Self {
        Self {
            epsilon,
            method: CapacityMethod::Auto,
            mc: MonteCarlo::default(),
        }
    }
}

/// Capacity of the released version of `set` at `probe`, by the requested
/// method. Exact formulas only describe the real Laplace mechanism.
pub fn capacity(
    set: &CompactSet,
    probe: &TestSet,
    opts: &AuditOptions,
    stream: &SeededStream,
) -> Result<CapacityEstimate> {
    let laplace = opts.mc.model == NoiseModel::Laplace;
    match opts.method {
        CapacityMethod::Exact if !laplace => Err(Error::ExactUnsupported("non-Laplace noise models")),
        CapacityMethod::Exact => exact_capacity(set, probe, opts.epsilon),
        CapacityMethod::Auto if laplace && exact_supported(set) => {
            exact_capacity(set, probe, opts.epsilon)
        }
        _ => mc_capacity(set, probe, opts.epsilon, &opts.mc, stream),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeResult {
    pub probe: TestSet,
    pub diameter: f64,
    pub bound: f64,
    pub t_x: CapacityEstimate,
    pub t_y: CapacityEstimate,
    pub x_over_y: DirectionCheck,
    pub y_over_x: DirectionCheck,
}

impl ProbeResult {
    /// Worse of the two directions.
    pub fn verdict(&self) -> Verdict {
        self.x_over_y.verdict.max(self.y_over_x.verdict)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub epsilon: f64,
    pub hausdorff: f64,
    pub diam_x: f64,
    pub diam_y: f64,
    pub method: CapacityMethod,
    pub model: NoiseModel,
    pub trials: u64,
    pub confidence: f64,
    pub stream: SeededStream,
    pub probes: Vec<ProbeResult>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct VerdictCounts {
    pub pass: usize,
    pub inconclusive: usize,
    pub fail: usize,
}

impl AuditReport {
    pub fn counts(&self) -> VerdictCounts {
        let mut c = VerdictCounts::default();
        for p in &self.probes {
            match p.verdict() {
                Verdict::Pass => c.pass += 1,
                Verdict::Inconclusive => c.inconclusive += 1,
                Verdict::Fail => c.fail += 1,
            }
        }
        c
    }

    pub fn has_failure(&self) -> bool {
        self.counts().fail > 0
    }
}

/// Audits `T_{M(X)}(K) <= e^{eps diam K} e^{eps d_H(X,Y)} T_{M(Y)}(K)` in
/// both directions over `probes`. Probe `i` draws `X` trials from
/// `stream.substream(2i)` and `Y` trials from `stream.substream(2i + 1)`.
pub fn verify_privacy(
    x: &CompactSet,
    y: &CompactSet,
    probes: &[TestSet],
    opts: &AuditOptions,
    stream: &SeededStream,
) -> Result<AuditReport> {
    check_dim(x.dim(), y.dim())?;
    check_epsilon(opts.epsilon)?;
    if probes.is_empty() {
        return Err(Error::EmptyProbeGrid);
    }
    let d = hausdorff_distance(x, y)?;
    let mut results = Vec::with_capacity(probes.len());
    for (i, probe) in probes.iter().enumerate() {
        check_dim(x.dim(), probe.dim())?;
        let i = i as u64;
        let t_x = capacity(x, probe, opts, &stream.substream(2 * i))?;
        let t_y = capacity(y, probe, opts, &stream.substream(2 * i + 1))?;
        let diam = probe.diameter();
        let bound = bound_from_parts(opts.epsilon, diam, d);
        results.push(ProbeResult {
            probe: probe.clone(),
            diameter: diam,
            bound,
            x_over_y: check_direction(&t_x, &t_y, bound),
            y_over_x: check_direction(&t_y, &t_x, bound),
            t_x,
            t_y,
        });
    }
    Ok(AuditReport {
        epsilon: opts.epsilon,
        hausdorff: d,
        diam_x: diameter(x),
        diam_y: diameter(y),
        method: opts.method,
        model: opts.mc.model,
        trials: opts.mc.trials,
        confidence: opts.mc.confidence,
        stream: *stream,
        probes: results,
    })
}
