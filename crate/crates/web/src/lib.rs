//! Browser bindings for the demo page in `www/`.
//!
//! Sets cross the boundary as flat coordinate arrays plus a dimension, so a
//! two-dimensional set of three points is `[x0, y0, x1, y1, x2, y2]`.

use setdp::{
    exact_capacity, hausdorff_distance, perturb, privacy_bound, CompactSet, Mode, PrivacyParams, SeededStream,
    TestSet,
};
use wasm_bindgen::prelude::*;

fn points(flat: &[f64], dim: usize) -> Result<CompactSet, String> {
    if dim == 0 || flat.is_empty() || !flat.len().is_multiple_of(dim) {
        return Err(format!("{} coordinates do not form points of dimension {dim}", flat.len()));
    }
    CompactSet::points(flat.chunks(dim).map(<[f64]>::to_vec).collect()).map_err(|e| e.to_string())
}

fn flatten(set: &CompactSet) -> Vec<f64> {
    set.extreme_points().concat()
}

/// Releases one private copy of a point set.
///
/// Returns the noise vector followed by the released coordinates. The page
/// shows the noise only to explain the picture; a real release never
/// publishes it.
#[wasm_bindgen]
pub fn release(flat: &[f64], dim: usize, epsilon: f64, seed: u64, run: u64) -> Result<Vec<f64>, String> {
    let set = points(flat, dim)?;
    let params = PrivacyParams::new(epsilon, dim).map_err(|e| e.to_string())?;
    let out = perturb(&set, &params, &SeededStream::new(seed, run), Mode::Audit).map_err(|e| e.to_string())?;
    let mut result = out.noise().map(|n| n.w.clone()).unwrap_or_default();
    result.extend(flatten(out.set()));
    Ok(result)
}

/// 1-norm Hausdorff distance between two point sets.
#[wasm_bindgen]
pub fn hausdorff(a: &[f64], b: &[f64], dim: usize) -> Result<f64, String> {
    hausdorff_distance(&points(a, dim)?, &points(b, dim)?).map_err(|e| e.to_string())
}

/// Exact capacities of the released `X` and `Y` at the box `[lo, hi]`,
/// returned as `[T_X, T_Y, bound]`.
#[wasm_bindgen]
pub fn capacities(x: &[f64], y: &[f64], lo: &[f64], hi: &[f64], epsilon: f64) -> Result<Vec<f64>, String> {
    let dim = lo.len();
    let (x, y) = (points(x, dim)?, points(y, dim)?);
    let k = TestSet::axis_box(lo.to_vec(), hi.to_vec()).map_err(|e| e.to_string())?;
    let tx = exact_capacity(&x, &k, epsilon).map_err(|e| e.to_string())?.value;
    let ty = exact_capacity(&y, &k, epsilon).map_err(|e| e.to_string())?.value;
    let bound = privacy_bound(&x, &y, &k, epsilon).map_err(|e| e.to_string())?;
    Ok(vec![tx, ty, bound])
}
