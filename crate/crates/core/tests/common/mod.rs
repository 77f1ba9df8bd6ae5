//! Independent oracles and generators shared by the integration tests.
//!
//! Nothing here calls the library's linear programming or distance code.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use setdp::{AxisBox, CompactSet, TestSet};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn l1(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

pub fn box_dist(p: &[f64], lo: &[f64], hi: &[f64]) -> f64 {
    p.iter()
        .zip(lo.iter().zip(hi))
        .map(|(x, (l, h))| (l - x).max(0.0) + (x - h).max(0.0))
        .sum()
}

/// Brute-force directed Hausdorff distance between finite point lists.
pub fn brute_directed(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .map(|p| b.iter().map(|q| l1(p, q)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}

pub fn brute_hausdorff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    brute_directed(a, b).max(brute_directed(b, a))
}

pub fn brute_diameter(a: &[Vec<f64>]) -> f64 {
    let mut d: f64 = 0.0;
    for p in a {
        for q in a {
            d = d.max(l1(p, q));
        }
    }
    d
}

pub fn random_points(r: &mut ChaCha8Rng, count: usize, dim: usize, lo: f64, hi: f64) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| (0..dim).map(|_| r.random_range(lo..hi)).collect())
        .collect()
}

pub fn random_box(r: &mut ChaCha8Rng, dim: usize, center: (f64, f64), half: (f64, f64)) -> AxisBox {
    let c: Vec<f64> = (0..dim).map(|_| r.random_range(center.0..center.1)).collect();
    let h: Vec<f64> = (0..dim).map(|_| r.random_range(half.0..half.1)).collect();
    AxisBox::new(
        c.iter().zip(&h).map(|(c, h)| c - h).collect(),
        c.iter().zip(&h).map(|(c, h)| c + h).collect(),
    )
    .unwrap()
}

pub fn box_probe(b: &AxisBox) -> TestSet {
    TestSet::Box(b.clone())
}

pub fn points_set(p: &[Vec<f64>]) -> CompactSet {
    CompactSet::points(p.to_vec()).unwrap()
}

fn combine(vertices: &[Vec<f64>], lambda: &[f64], out: &mut [f64]) {
    out.fill(0.0);
    for (v, l) in vertices.iter().zip(lambda) {
        for (o, x) in out.iter_mut().zip(v) {
            *o += l * x;
        }
    }
}

/// Result of minimizing two convex objectives over the convex hull of a
/// vertex list by sampling.
#[derive(Debug, Clone, Copy)]
pub struct HullSearch {
    /// Smallest 1-norm distance to the query point found.
    pub point_dist: f64,
    /// Smallest 1-norm distance to the query box found.
    pub box_dist: f64,
}

/// Dense-sampling search over `hull(vertices)` for the closest approach to
/// `p` and to the box `[lo, hi]`.
///
/// At least `samples` barycentric combinations are evaluated (vertices, a
/// fine grid along every edge, then random combinations with both spread
/// and sparse weights), after which the best combination of each objective
/// is refined by mass transfers between vertices at shrinking step sizes.
/// Every value returned is attained by a point of the hull, so it is an
/// upper bound on the true minimum.
pub fn hull_search(
    vertices: &[Vec<f64>],
    p: &[f64],
    lo: &[f64],
    hi: &[f64],
    samples: usize,
    seed: u64,
) -> HullSearch {
    let m = vertices.len();
    let n = p.len();
    let mut r = rng(seed);
    let mut x = vec![0.0; n];
    let mut lambda = vec![0.0; m];

    let mut best_p = (f64::INFINITY, vec![0.0; m]);
    let mut best_b = (f64::INFINITY, vec![0.0; m]);
    let mut consider = |lambda: &[f64], x: &mut [f64]| {
        combine(vertices, lambda, x);
        let dp = l1(x, p);
        let db = box_dist(x, lo, hi);
        if dp < best_p.0 {
            best_p = (dp, lambda.to_vec());
        }
        if db < best_b.0 {
            best_b = (db, lambda.to_vec());
        }
    };

    let mut count = 0usize;
    for i in 0..m {
        lambda.fill(0.0);
        lambda[i] = 1.0;
        consider(&lambda, &mut x);
        count += 1;
    }
    const EDGE_STEPS: usize = 256;
    for i in 0..m {
        for j in i + 1..m {
            for s in 1..EDGE_STEPS {
                lambda.fill(0.0);
                let t = s as f64 / EDGE_STEPS as f64;
                lambda[i] = 1.0 - t;
                lambda[j] = t;
                consider(&lambda, &mut x);
                count += 1;
            }
        }
    }
    let mut order: Vec<usize> = (0..m).collect();
    while count < samples {
        // Exponential weights give a uniform point on the simplex; a power
        // concentrates mass on few vertices to reach faces and edges, and a
        // random support of at most n + 1 vertices samples a face directly.
        let kind = count % 4;
        lambda.fill(0.0);
        if kind == 3 {
            let support = r.random_range(2..=(n + 1).min(m));
            for i in 0..support {
                let j = r.random_range(i..m);
                order.swap(i, j);
                lambda[order[i]] = -(1.0 - r.random::<f64>()).ln();
            }
        } else {
            for l in lambda.iter_mut() {
                let e = -(1.0 - r.random::<f64>()).ln();
                *l = match kind {
                    0 => e,
                    1 => e * e * e,
                    _ => (e * e) * (e * e) * (e * e) * (e * e),
                };
            }
        }
        let total: f64 = lambda.iter().sum();
        for l in lambda.iter_mut() {
            *l /= total;
        }
        consider(&lambda, &mut x);
        count += 1;
    }

    let refine = |start: (f64, Vec<f64>), f: &dyn Fn(&[f64]) -> f64, r: &mut ChaCha8Rng| -> f64 {
        let (mut best, mut lam) = start;
        let mut x = vec![0.0; n];
        let mut eval = |l: &[f64]| {
            combine(vertices, l, &mut x);
            f(&x)
        };
        let mut step: f64 = 0.25;
        while step > 1e-13 && best > 0.0 {
            let mut improved = true;
            while improved {
                improved = false;
                for i in 0..m {
                    for j in 0..m {
                        if i == j || lam[i] <= 0.0 {
                            continue;
                        }
                        let d = step.min(lam[i]);
                        let mut cand = lam.clone();
                        cand[i] -= d;
                        cand[j] += d;
                        let v = eval(&cand);
                        if v < best {
                            best = v;
                            lam = cand;
                            improved = true;
                        }
                    }
                }
                for trial in 0..8 * m {
                    let mut cand = lam.clone();
                    // Half the directions stay on the current support plus one
                    // extra vertex, so kinks inside a face can still be crossed.
                    let extra = r.random_range(0..m);
                    let mut delta: Vec<f64> = (0..m)
                        .map(|i| {
                            if trial % 2 == 0 || lam[i] > 0.0 || i == extra {
                                r.random_range(-1.0..1.0)
                            } else {
                                0.0
                            }
                        })
                        .collect();
                    let active = delta.iter().filter(|d| **d != 0.0).count().max(1);
                    let mean = delta.iter().sum::<f64>() / active as f64;
                    delta.iter_mut().filter(|d| **d != 0.0).for_each(|d| *d -= mean);
                    for (c, d) in cand.iter_mut().zip(&delta) {
                        *c = (*c + step * d).max(0.0);
                    }
                    let s: f64 = cand.iter().sum();
                    cand.iter_mut().for_each(|c| *c /= s);
                    let v = eval(&cand);
                    if v < best {
                        best = v;
                        lam = cand;
                        improved = true;
                    }
                }
            }
            step *= 0.5;
        }
        best
    };
    let point_dist = refine(best_p, &|x| l1(x, p), &mut r);
    let box_dist = refine(best_b, &|x| box_dist(x, lo, hi), &mut r);
    HullSearch { point_dist, box_dist }
}
