//! The Laplace translation mechanism for sets.
//!
//! `M(X) = X + w` with `w ~ Laplace(0, 1/epsilon)^n`. One noise vector is
//! drawn per release and applied to every point of `X`, so the released set
//! is a rigid translate of the input: its shape and orientation are kept and
//! only its position is randomized.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, check_epsilon, Error, Result};
use crate::geometry::{translate, CompactSet, Translation};
use crate::sampler::{fill_laplace, LaplaceNoise, LaplaceParams, SeededStream};

/// Commonly recommended range for epsilon, `[0.1, ln 3]`. Values outside it are allowed but
/// produce a warning.
pub const EPSILON_GUIDANCE: (f64, f64) = (0.1, 1.098_612_288_668_109_8);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrivacyParams {
    epsilon: f64,
    dim: usize,
}

impl PrivacyParams {
    pub fn new(epsilon: f64, dim: usize) -> Result<Self> {
        check_epsilon(epsilon)?;
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(Self { epsilon, dim })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Laplace scale `1/epsilon`.
    pub fn scale(&self) -> f64 {
        1.0 / self.epsilon
    }

    /// A human-readable warning when epsilon is outside [`EPSILON_GUIDANCE`].
    pub fn guidance_warning(&self) -> Option<String> {
        let (lo, hi) = EPSILON_GUIDANCE;
        if self.epsilon < lo || self.epsilon > hi {
            Some(format!(
                "epsilon = {} is outside the commonly used range [{lo}, {hi:.4}]",
                self.epsilon
            ))
        } else {
            None
        }
    }
}

/// Whether the realized noise is handed back to the caller.
///
/// `Audit` exists for testing and verification only: anyone holding `w` can
/// subtract it and recover the sensitive set exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Release,
    Audit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MechanismOutput {
    set: CompactSet,
    noise: Option<LaplaceNoise>,
}

impl MechanismOutput {
    pub fn set(&self) -> &CompactSet {
        &self.set
    }

    pub fn into_set(self) -> CompactSet {
        self.set
    }

    pub fn mode(&self) -> Mode {
        if self.noise.is_some() {
            Mode::Audit
        } else {
            Mode::Release
        }
    }

    /// The realized noise; `None` in release mode.
    pub fn noise(&self) -> Option<&LaplaceNoise> {
        self.noise.as_ref()
    }
}

/// Noise generators the auditor can run. Only [`NoiseModel::Laplace`] is the
/// real mechanism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseModel {
    #[default]
    Laplace,
    /// Deliberately broken: Laplace noise on the first coordinate only, every
    /// other coordinate released as-is. Used to show the auditor can catch a
    /// mechanism that is not private.
    SingleAxisStub,
}

impl NoiseModel {
    /// Fills `out` with one noise vector.
    pub fn draw<R: rand::RngCore + ?Sized>(&self, p: &LaplaceParams, rng: &mut R, out: &mut [f64]) {
        match self {
            NoiseModel::Laplace => fill_laplace(p, rng, out),
            NoiseModel::SingleAxisStub => {
                out.fill(0.0);
                if let Some(first) = out.first_mut() {
                    *first = p.sample(rng);
                }
            }
        }
    }
}

/// Privatizes `x` by one shared Laplace translation.
pub fn perturb(
    x: &CompactSet,
    params: &PrivacyParams,
    stream: &SeededStream,
    mode: Mode,
) -> Result<MechanismOutput> {
    perturb_with(x, params, stream, mode, NoiseModel::Laplace)
}

/// [`perturb`] with an explicit noise model.
pub fn perturb_with(
    x: &CompactSet,
    params: &PrivacyParams,
    stream: &SeededStream,
    mode: Mode,
    model: NoiseModel,
) -> Result<MechanismOutput> {
    check_dim(params.dim(), x.dim())?;
    let lap = LaplaceParams::for_epsilon(params.epsilon())?;
    let mut w = vec![0.0; params.dim()];
    model.draw(&lap, &mut stream.rng(), &mut w);
    let set = translate(x, &Translation::new(w.clone())?)?;
    let noise = match mode {
        Mode::Release => None,
        Mode::Audit => Some(LaplaceNoise {
            w,
            epsilon: params.epsilon(),
            source: *stream,
        }),
    };
    Ok(MechanismOutput { set, noise })
}

/// `E ||w||_1 = n / epsilon`, which bounds `E d_H(X, M(X))` from above.
pub fn expected_displacement(params: &PrivacyParams) -> f64 {
    params.dim() as f64 / params.epsilon()
}
