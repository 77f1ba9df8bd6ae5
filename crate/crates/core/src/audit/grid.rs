//! The finite family of probes an audit samples.
//!
//! Boxes at geometrically shrinking scales are placed at Halton points of a
//! region covering both sets plus one noise scale of padding, so the grid
//! reaches from probes as large as the region down to near-degenerate ones.
//! Point probes are appended at further Halton points.

use crate::error::{check_epsilon, Error, Result};
use crate::geometry::{joint_bounding_box, AxisBox, CompactSet, TestSet};

fn nth_prime(n: usize) -> u64 {
    (2u64..)
        .filter(|&c| (2..).take_while(|d| d * d <= c).all(|d| c % d != 0))
        .nth(n)
        .expect("infinitely many primes")
}

fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let (mut out, mut f) = (0.0, inv);
    while index > 0 {
        out += (index % base) as f64 * f;
        index /= base;
        f *= inv;
    }
    out
}

/// `index`-th point of the Halton sequence in `[0, 1)^dim`.
pub fn halton(index: u64, dim: usize) -> Vec<f64> {
    (0..dim).map(|i| radical_inverse(index, nth_prime(i))).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProbeGrid {
    /// Number of box scales; scale `j` has side `2^-j` times the region extent.
    pub scales: usize,
    /// Box placements per scale.
    pub placements: usize,
    pub point_probes: usize,
}

impl Default for ProbeGrid {
    fn default() -> Self {
        Self {
            scales: 5,
            placements: 10,
            point_probes: 5,
        }
    }
}

impl ProbeGrid {
    pub fn len(&self) -> usize {
        self.scales * self.placements + self.point_probes
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The region probes are placed in: the joint bounding box padded by
    /// `1/epsilon` on every side.
    pub fn region(x: &CompactSet, y: &CompactSet, epsilon: f64) -> Result<AxisBox> {
        check_epsilon(epsilon)?;
        let bbox = joint_bounding_box(x, y)?;
        let pad = 1.0 / epsilon;
        AxisBox::new(
            bbox.lo().iter().map(|v| v - pad).collect(),
            bbox.hi().iter().map(|v| v + pad).collect(),
        )
    }

    pub fn build(&self, x: &CompactSet, y: &CompactSet, epsilon: f64) -> Result<Vec<TestSet>> {
        if self.is_empty() {
            return Err(Error::EmptyProbeGrid);
        }
        let region = Self::region(x, y, epsilon)?;
        let n = region.dim();
        let extent: Vec<f64> = region
            .lo()
            .iter()
            .zip(region.hi())
            .map(|(l, h)| h - l)
            .collect();
        let at = |index: u64| -> Vec<f64> {
            halton(index, n)
                .iter()
                .enumerate()
                .map(|(i, h)| region.lo()[i] + h * extent[i])
                .collect()
        };

        let mut probes = Vec::with_capacity(self.len());
        let mut index = 1u64;
        for j in 0..self.scales {
            let frac = 0.5f64.powi(j as i32);
            for _ in 0..self.placements {
                let c = at(index);
                index += 1;
                let half: Vec<f64> = extent.iter().map(|e| 0.5 * frac * e).collect();
                probes.push(TestSet::axis_box(
                    c.iter().zip(&half).map(|(c, h)| c - h).collect(),
                    c.iter().zip(&half).map(|(c, h)| c + h).collect(),
                )?);
            }
        }
        for _ in 0..self.point_probes {
            probes.push(TestSet::point(at(index))?);
            index += 1;
        }
        Ok(probes)
    }
}
