//! Compact sets in R^n and their 1-norm geometry.
//!
//! Three representations of the sensitive set are supported: finite point
//! sets, convex polytopes given by their vertices, and axis-aligned boxes.
//! Probes (the compact sets a released set is tested against) are single
//! points or axis-aligned boxes. Every quantity below is computed exactly up
//! to floating-point rounding; polytope queries go through a small linear
//! program.

pub mod lp;

use crate::error::{check_dim, Error, Result};
use lp::{LinearProgram, Relation};

/// Two points closer than this on every axis are treated as equal when a
/// point set is intersected with a point probe.
pub const POINT_EQ_TOL: f64 = 1e-12;

/// Polytope/probe distances at or below `CONTACT_TOL * (1 + scale)` count as
/// contact, where `scale` is the largest coordinate magnitude involved.
pub const CONTACT_TOL: f64 = 1e-9;

/// `||a - b||_1`.
pub fn norm1_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

pub fn norm1(a: &[f64]) -> f64 {
    a.iter().map(|x| x.abs()).sum()
}

fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().find(|v| !v.is_finite()) {
        Some(&value) => Err(Error::NonFinite { value }),
        None => Ok(()),
    }
}

/// A nonempty list of points sharing one dimension, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointList {
    dim: usize,
    coords: Vec<f64>,
}

impl PointList {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = points.first().ok_or(Error::EmptySet)?.len();
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let mut coords = Vec::with_capacity(dim * points.len());
        for p in &points {
            check_dim(dim, p.len())?;
            check_finite(p)?;
            coords.extend_from_slice(p);
        }
        Ok(Self { dim, coords })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'_, f64> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn get(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn to_vecs(&self) -> Vec<Vec<f64>> {
        self.iter().map(<[f64]>::to_vec).collect()
    }

    fn shifted(&self, offset: &[f64]) -> Self {
        let coords = self
            .coords
            .iter()
            .zip(offset.iter().cycle())
            .map(|(c, a)| c + a)
            .collect();
        Self {
            dim: self.dim,
            coords,
        }
    }

    fn max_pairwise(&self) -> f64 {
        let mut best: f64 = 0.0;
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                best = best.max(norm1_dist(self.get(i), self.get(j)));
            }
        }
        best
    }

    fn bounding_box(&self) -> AxisBox {
        let mut lo = self.get(0).to_vec();
        let mut hi = lo.clone();
        for p in self.iter() {
            for i in 0..self.dim {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        AxisBox { lo, hi }
    }
}

/// A closed axis-aligned box `[lo_1, hi_1] x ... x [lo_n, hi_n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisBox {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl AxisBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() {
            return Err(Error::ZeroDimension);
        }
        check_dim(lo.len(), hi.len())?;
        check_finite(&lo)?;
        check_finite(&hi)?;
        if let Some(axis) = (0..lo.len()).find(|&i| lo[i] > hi[i]) {
            return Err(Error::InvalidBounds {
                axis,
                lo: lo[axis],
                hi: hi[axis],
            });
        }
        Ok(Self { lo, hi })
    }

    /// The degenerate box `{p}`.
    pub fn point(p: Vec<f64>) -> Result<Self> {
        Self::new(p.clone(), p)
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn center(&self) -> Vec<f64> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| 0.5 * (l + h))
            .collect()
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(x, (l, h))| l <= x && x <= h)
    }

    pub fn overlaps(&self, other: &AxisBox) -> bool {
        (0..self.dim()).all(|i| self.lo[i] <= other.hi[i] && other.lo[i] <= self.hi[i])
    }

    /// Intersection of two boxes, or `None` when they are disjoint.
    pub fn intersection(&self, other: &AxisBox) -> Option<AxisBox> {
        let lo: Vec<f64> = self.lo.iter().zip(&other.lo).map(|(a, b)| a.max(*b)).collect();
        let hi: Vec<f64> = self.hi.iter().zip(&other.hi).map(|(a, b)| a.min(*b)).collect();
        lo.iter()
            .zip(&hi)
            .all(|(l, h)| l <= h)
            .then_some(AxisBox { lo, hi })
    }

    /// 1-norm distance from `p` to the box (per-axis clamp).
    pub fn distance_to(&self, p: &[f64]) -> f64 {
        p.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .map(|(x, (l, h))| (l - x).max(x - h).max(0.0))
            .sum()
    }

    pub fn diameter(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(l, h)| h - l).sum()
    }

    pub fn shifted(&self, offset: &[f64]) -> AxisBox {
        AxisBox {
            lo: self.lo.iter().zip(offset).map(|(l, a)| l + a).collect(),
            hi: self.hi.iter().zip(offset).map(|(h, a)| h + a).collect(),
        }
    }

    /// The `2^n` corners, lowest axis varying fastest.
    pub fn corners(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        let n = self.dim();
        (0..1u64 << n).map(move |mask| {
            (0..n)
                .map(|i| if mask >> i & 1 == 1 { self.hi[i] } else { self.lo[i] })
                .collect()
        })
    }

    fn max_abs(&self) -> f64 {
        self.lo
            .iter()
            .chain(&self.hi)
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    fn hull(&self, other: &AxisBox) -> AxisBox {
        AxisBox {
            lo: self.lo.iter().zip(&other.lo).map(|(a, b)| a.min(*b)).collect(),
            hi: self.hi.iter().zip(&other.hi).map(|(a, b)| a.max(*b)).collect(),
        }
    }
}

/// The sensitive datum: a compact subset of R^n.
#[derive(Debug, Clone, PartialEq)]
pub enum CompactSet {
    /// A finite set of points.
    Points(PointList),
    /// The convex hull of the listed vertices.
    Polytope(PointList),
    Box(AxisBox),
}

impl CompactSet {
    pub fn points(points: Vec<Vec<f64>>) -> Result<Self> {
        PointList::new(points).map(Self::Points)
    }

    pub fn polytope(vertices: Vec<Vec<f64>>) -> Result<Self> {
        PointList::new(vertices).map(Self::Polytope)
    }

    pub fn axis_box(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        AxisBox::new(lo, hi).map(Self::Box)
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Points(p) | Self::Polytope(p) => p.dim(),
            Self::Box(b) => b.dim(),
        }
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            Self::Points(_) => "points",
            Self::Polytope(_) => "polytope",
            Self::Box(_) => "box",
        }
    }

    /// Points, vertices, or box corners. The set is contained in the convex
    /// hull of these, and for `Points` they are the set itself.
    pub fn extreme_points(&self) -> Vec<Vec<f64>> {
        match self {
            Self::Points(p) | Self::Polytope(p) => p.to_vecs(),
            Self::Box(b) => b.corners().collect(),
        }
    }

    pub fn bounding_box(&self) -> AxisBox {
        match self {
            Self::Points(p) | Self::Polytope(p) => p.bounding_box(),
            Self::Box(b) => b.clone(),
        }
    }

    fn max_abs(&self) -> f64 {
        self.bounding_box().max_abs()
    }
}

/// A compact probe `K`.
#[derive(Debug, Clone, PartialEq)]
pub enum TestSet {
    Point(Vec<f64>),
    Box(AxisBox),
}

impl TestSet {
    pub fn point(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::ZeroDimension);
        }
        check_finite(&p)?;
        Ok(Self::Point(p))
    }

    pub fn axis_box(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        AxisBox::new(lo, hi).map(Self::Box)
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Point(p) => p.len(),
            Self::Box(b) => b.dim(),
        }
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            Self::Point(_) => "point",
            Self::Box(_) => "box",
        }
    }

    /// The probe as a (possibly degenerate) box.
    pub fn as_box(&self) -> AxisBox {
        match self {
            Self::Point(p) => AxisBox {
                lo: p.clone(),
                hi: p.clone(),
            },
            Self::Box(b) => b.clone(),
        }
    }

    pub fn diameter(&self) -> f64 {
        match self {
            Self::Point(_) => 0.0,
            Self::Box(b) => b.diameter(),
        }
    }
}

/// A rigid shift `x -> x + a`.
#[derive(Debug, Clone, PartialEq)]
pub struct Translation(Vec<f64>);

impl Translation {
    pub fn new(offset: Vec<f64>) -> Result<Self> {
        if offset.is_empty() {
            return Err(Error::ZeroDimension);
        }
        check_finite(&offset)?;
        Ok(Self(offset))
    }

    pub fn offset(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// `S + a`: every point, vertex, or bound shifted by the same offset.
pub fn translate(set: &CompactSet, a: &Translation) -> Result<CompactSet> {
    check_dim(set.dim(), a.dim())?;
    Ok(match set {
        CompactSet::Points(p) => CompactSet::Points(p.shifted(a.offset())),
        CompactSet::Polytope(p) => CompactSet::Polytope(p.shifted(a.offset())),
        CompactSet::Box(b) => CompactSet::Box(b.shifted(a.offset())),
    })
}

/// Minimum 1-norm distance from the convex hull of `vertices` to `target`.
///
/// Solved as `min sum t` over `(lambda, t) >= 0` with `sum lambda = 1` and
/// `lo - t <= V lambda <= hi + t` (coordinates recentred on the target).
pub fn polytope_box_distance(vertices: &PointList, target: &AxisBox) -> Result<f64> {
    let n = vertices.dim();
    check_dim(n, target.dim())?;
    let m = vertices.len();
    let center = target.center();

    let mut objective = vec![0.0; m + n];
    objective[m..].fill(1.0);
    let mut lp = LinearProgram::minimize(objective);
    for axis in 0..n {
        let row: Vec<f64> = vertices.iter().map(|v| v[axis] - center[axis]).collect();
        let upper = target.hi()[axis] - center[axis];
        let lower = target.lo()[axis] - center[axis];

        let mut le = row.clone();
        le.resize(m + n, 0.0);
        le[m + axis] = -1.0;
        lp.constrain(le, Relation::LessEq, upper);

        let mut ge = row;
        ge.resize(m + n, 0.0);
        ge[m + axis] = 1.0;
        lp.constrain(ge, Relation::GreaterEq, lower);
    }
    let mut simplex_row = vec![1.0; m];
    simplex_row.resize(m + n, 0.0);
    lp.constrain(simplex_row, Relation::Equal, 1.0);

    Ok(lp.solve_optimal()?.objective.max(0.0))
}

/// `inf_{s in S} ||p - s||_1`.
pub fn point_to_set_distance(p: &[f64], set: &CompactSet) -> Result<f64> {
    check_dim(set.dim(), p.len())?;
    match set {
        CompactSet::Points(pts) => Ok(pts
            .iter()
            .map(|s| norm1_dist(p, s))
            .fold(f64::INFINITY, f64::min)),
        CompactSet::Box(b) => Ok(b.distance_to(p)),
        CompactSet::Polytope(v) => polytope_box_distance(v, &AxisBox::point(p.to_vec())?),
    }
}

/// `sup_{a in A} inf_{b in B} ||a - b||_1`.
///
/// When `B` is convex only the extreme points of `A` are visited: the
/// distance to a convex set is a convex function, so its maximum over a
/// polytope sits at a vertex. Distance to a finite point set is not convex,
/// so a polytope or box `A` against a point set `B` goes through
/// [`hull_to_points_directed`].
pub fn directed_hausdorff(a: &CompactSet, b: &CompactSet) -> Result<f64> {
    check_dim(a.dim(), b.dim())?;
    if let (CompactSet::Polytope(_) | CompactSet::Box(_), CompactSet::Points(targets)) = (a, b) {
        return hull_to_points_directed(a, targets);
    }
    let mut worst: f64 = 0.0;
    for p in a.extreme_points() {
        worst = worst.max(point_to_set_distance(&p, b)?);
    }
    Ok(worst)
}

/// `max_{a in A} min_{b in targets} ||a - b||_1` for a polytope or box `A`.
///
/// The hyperplanes `x_i = b_i` cut space into grid cells inside which every
/// `||a - b||_1` is affine in `a`, so the inner minimum is concave there and
/// one linear program per cell (restricted to `A`) finds the cell maximum.
fn hull_to_points_directed(a: &CompactSet, targets: &PointList) -> Result<f64> {
    let n = a.dim();
    let bbox = a.bounding_box();

    // Per-axis cell boundaries, clipped to A's bounding box.
    let axis_cuts: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let (lo, hi) = (bbox.lo()[i], bbox.hi()[i]);
            let mut cuts = vec![lo, hi];
            cuts.extend(targets.iter().map(|b| b[i]).filter(|&c| lo < c && c < hi));
            cuts.sort_by(f64::total_cmp);
            cuts.dedup();
            cuts
        })
        .collect();
    let counts: Vec<usize> = axis_cuts.iter().map(|c| (c.len() - 1).max(1)).collect();

    let vertices = match a {
        CompactSet::Polytope(v) => Some(v),
        _ => None,
    };
    let m = vertices.map_or(0, PointList::len);
    // Variables: z (offset inside the cell, n), lambda (m), s (1).
    let s_idx = n + m;

    let mut best: f64 = 0.0;
    let mut index = vec![0usize; n];
    loop {
        let cell_lo: Vec<f64> = (0..n).map(|i| axis_cuts[i][index[i]]).collect();
        let cell_hi: Vec<f64> = (0..n)
            .map(|i| axis_cuts[i][(index[i] + 1).min(axis_cuts[i].len() - 1)])
            .collect();
        let mid: Vec<f64> = cell_lo.iter().zip(&cell_hi).map(|(l, h)| 0.5 * (l + h)).collect();

        let mut objective = vec![0.0; s_idx + 1];
        objective[s_idx] = -1.0;
        let mut lp = LinearProgram::minimize(objective);
        for i in 0..n {
            let mut row = vec![0.0; s_idx + 1];
            row[i] = 1.0;
            lp.constrain(row, Relation::LessEq, cell_hi[i] - cell_lo[i]);
        }
        if let Some(v) = vertices {
            for i in 0..n {
                let mut row = vec![0.0; s_idx + 1];
                row[i] = -1.0;
                for (j, p) in v.iter().enumerate() {
                    row[n + j] = p[i];
                }
                lp.constrain(row, Relation::Equal, cell_lo[i]);
            }
            let mut row = vec![0.0; s_idx + 1];
            row[n..n + m].fill(1.0);
            lp.constrain(row, Relation::Equal, 1.0);
        }
        for b in targets.iter() {
            // s <= sum_i sign_i (cell_lo_i + z_i - b_i)
            let mut row = vec![0.0; s_idx + 1];
            row[s_idx] = 1.0;
            let mut rhs = 0.0;
            for i in 0..n {
                let sign = if mid[i] >= b[i] { 1.0 } else { -1.0 };
                row[i] = -sign;
                rhs += sign * (cell_lo[i] - b[i]);
            }
            lp.constrain(row, Relation::LessEq, rhs);
        }
        if let lp::LpOutcome::Optimal(sol) = lp.solve()? {
            best = best.max(-sol.objective);
        }

        // Odometer over cells.
        let mut axis = 0;
        loop {
            if axis == n {
                return Ok(best);
            }
            index[axis] += 1;
            if index[axis] < counts[axis] {
                break;
            }
            index[axis] = 0;
            axis += 1;
        }
    }
}

/// Hausdorff distance under the 1-norm.
pub fn hausdorff_distance(a: &CompactSet, b: &CompactSet) -> Result<f64> {
    Ok(directed_hausdorff(a, b)?.max(directed_hausdorff(b, a)?))
}

/// `sup_{s1, s2 in S} ||s1 - s2||_1`.
pub fn diameter(set: &CompactSet) -> f64 {
    match set {
        CompactSet::Points(p) | CompactSet::Polytope(p) => p.max_pairwise(),
        CompactSet::Box(b) => b.diameter(),
    }
}

/// Whether `S ∩ K` is nonempty. Closed sets touching on a boundary intersect.
pub fn intersects(set: &CompactSet, probe: &TestSet) -> Result<bool> {
    check_dim(set.dim(), probe.dim())?;
    Ok(match (set, probe) {
        (CompactSet::Points(pts), TestSet::Point(k)) => pts.iter().any(|p| {
            p.iter()
                .zip(k)
                .all(|(x, y)| (x - y).abs() <= POINT_EQ_TOL)
        }),
        (CompactSet::Points(pts), TestSet::Box(k)) => pts.iter().any(|p| k.contains(p)),
        (CompactSet::Box(b), probe) => b.overlaps(&probe.as_box()),
        (CompactSet::Polytope(v), probe) => {
            let k = probe.as_box();
            if !v.bounding_box().overlaps(&k) {
                false
            } else if v.iter().any(|p| k.contains(p)) {
                true
            } else {
                let scale = 1.0 + set.max_abs().max(k.max_abs());
                polytope_box_distance(v, &k)? <= CONTACT_TOL * scale
            }
        }
    })
}

/// Smallest box containing both sets.
pub fn joint_bounding_box(a: &CompactSet, b: &CompactSet) -> Result<AxisBox> {
    check_dim(a.dim(), b.dim())?;
    Ok(a.bounding_box().hull(&b.bounding_box()))
}
