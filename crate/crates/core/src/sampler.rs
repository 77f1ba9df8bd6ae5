//! Seeded Laplace sampling.
//!
//! Randomness comes from ChaCha8 keyed by a 64-bit seed with a 64-bit stream
//! selector, so `(seed, stream)` fully determines a sequence and independent
//! sub-streams can be handed to parallel workers without coordination.
//!
//! Samples are drawn by inverse CDF: for `u ~ Uniform(-1/2, 1/2)`,
//! `mu - b * sign(u) * ln(1 - 2|u|)` is `Laplace(mu, b)`.
//!
//! Floating-point Laplace samplers are known to leak through the fine
//! structure of the doubles they can produce; nothing here attempts to hide
//! that.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceParams {
    mu: f64,
    b: f64,
}

impl LaplaceParams {
    pub fn new(mu: f64, b: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::NonFinite { value: mu });
        }
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::InvalidScale(b));
        }
        Ok(Self { mu, b })
    }

    /// `Laplace(0, 1/epsilon)`.
    pub fn for_epsilon(epsilon: f64) -> Result<Self> {
        crate::error::check_epsilon(epsilon)?;
        Self::new(0.0, 1.0 / epsilon)
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn scale(&self) -> f64 {
        self.b
    }

    /// Maps `u` in `(-1/2, 1/2)` to the corresponding Laplace quantile.
    pub fn quantile_centered(&self, u: f64) -> f64 {
        self.mu - self.b * u.signum() * (-2.0 * u.abs()).ln_1p()
    }

    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> f64 {
        let u = loop {
            // [0, 1) on a 2^-53 grid, shifted to [-1/2, 1/2); the closed end
            // would hit ln(0), so it is redrawn.
            let u = rng.random::<f64>() - 0.5;
            if u != -0.5 {
                break u;
            }
        };
        if u == 0.0 {
            return self.mu;
        }
        self.quantile_centered(u)
    }
}

/// `P[X <= x]` for `X ~ Laplace(mu, b)`.
pub fn laplace_cdf(x: f64, p: &LaplaceParams) -> f64 {
    let z = (x - p.mu) / p.b;
    if z < 0.0 {
        0.5 * z.exp()
    } else {
        1.0 - 0.5 * (-z).exp()
    }
}

/// `P[lo <= X <= hi]` for `X ~ Laplace(0, b)`, written to avoid cancellation
/// when both ends sit in the same tail. Infinite ends are allowed.
pub fn laplace_interval_mass(lo: f64, hi: f64, b: f64) -> f64 {
    // Also catches NaN ends.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(lo < hi) {
        return 0.0;
    }
    if lo >= 0.0 {
        0.5 * ((-lo / b).exp() - (-hi / b).exp())
    } else if hi <= 0.0 {
        0.5 * ((hi / b).exp() - (lo / b).exp())
    } else {
        1.0 - 0.5 * (lo / b).exp() - 0.5 * (-hi / b).exp()
    }
}

/// A `(seed, stream)` pair naming one deterministic random sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeededStream {
    pub seed: u64,
    pub stream: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SeededStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    /// A fresh generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }

    /// Deterministically derived child stream under the same seed.
    pub fn substream(&self, child: u64) -> Self {
        let mixed = splitmix64(splitmix64(self.stream) ^ child.wrapping_mul(0xD1B5_4A32_D192_ED03));
        Self {
            seed: self.seed,
            stream: mixed,
        }
    }
}

/// An n-vector of i.i.d. Laplace draws together with where it came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaplaceNoise {
    pub w: Vec<f64>,
    pub epsilon: f64,
    pub source: SeededStream,
}

impl LaplaceNoise {
    pub fn dim(&self) -> usize {
        self.w.len()
    }

    pub fn norm1(&self) -> f64 {
        crate::geometry::norm1(&self.w)
    }
}

/// One draw from a fresh generator at `stream`.
pub fn sample_scalar(p: &LaplaceParams, stream: &SeededStream) -> f64 {
    p.sample(&mut stream.rng())
}

/// `n` i.i.d. draws filling `out`.
pub fn fill_laplace<R: RngCore + ?Sized>(p: &LaplaceParams, rng: &mut R, out: &mut [f64]) {
    for w in out {
        *w = p.sample(rng);
    }
}

/// `w ~ Laplace(0, 1/epsilon)^n` from a fresh generator at `stream`.
pub fn sample_vector(n: usize, epsilon: f64, stream: &SeededStream) -> Result<LaplaceNoise> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    let p = LaplaceParams::for_epsilon(epsilon)?;
    let mut rng = stream.rng();
    let mut w = vec![0.0; n];
    fill_laplace(&p, &mut rng, &mut w);
    Ok(LaplaceNoise {
        w,
        epsilon,
        source: *stream,
    })
}
