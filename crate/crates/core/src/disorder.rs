//! Reproducible disordered qubit parameters.
//!
//! Raw values are drawn from a ChaCha8 stream seeded with the 64-bit seed
//! (`rand_chacha::ChaCha8Rng::seed_from_u64`), then affinely rescaled so the
//! *empirical* mean frequency is exactly ω̄ and the *empirical* population
//! spread is exactly σ·ω̄.
//!
//! * `target = delta`: `Δ_i = ω_i`, `ε_i = 0`.
//! * `target = epsilon`: uniform `Δ = min_i ω_i`, `ε_i = √(ω_i² − Δ²)`, so
//!   `√(Δ² + ε_i²) = ω_i` for every qubit.
//!
//! If a draw would produce a non-positive frequency (possible for large
//! `N` and σ close to 0.5), the whole set is redrawn from the same stream.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};
use serde::{Deserialize, Serialize};

use crate::hamiltonians::{qubit_frequencies, QubitParams};
use crate::{Result, SqaError};

const MAX_REDRAWS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DisorderTarget {
    #[default]
    Delta,
    Epsilon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DisorderDistribution {
    #[default]
    Gaussian,
    Uniform,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisorderSpec {
    pub sigma: f64,
    #[serde(default)]
    pub target: DisorderTarget,
    #[serde(default = "unit")]
    pub mean_frequency: f64,
    pub seed: u64,
    #[serde(default)]
    pub distribution: DisorderDistribution,
}

fn unit() -> f64 {
    1.0
}

impl DisorderSpec {
    pub fn new(sigma: f64, target: DisorderTarget, seed: u64) -> Self {
        Self {
            sigma,
            target,
            mean_frequency: 1.0,
            seed,
            distribution: DisorderDistribution::Gaussian,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma.is_finite() && (0.0..0.5).contains(&self.sigma)) {
            return Err(SqaError::config(
                "disorder.sigma",
                format!("must satisfy 0 <= sigma < 0.5, got {}", self.sigma),
            ));
        }
        if !(self.mean_frequency.is_finite() && self.mean_frequency > 0.0) {
            return Err(SqaError::config(
                "disorder.mean_frequency",
                "must be positive",
            ));
        }
        Ok(())
    }
}

fn draw(rng: &mut ChaCha8Rng, dist: DisorderDistribution, n: usize) -> Vec<f64> {
    match dist {
        DisorderDistribution::Gaussian => (0..n).map(|_| StandardNormal.sample(rng)).collect(),
        DisorderDistribution::Uniform => {
            let u = Uniform::new(-1.0f64, 1.0).expect("valid range");
            (0..n).map(|_| u.sample(rng)).collect()
        }
    }
}

/// Standardize to zero mean and unit population variance.
fn standardize(raw: &[f64]) -> Option<Vec<f64>> {
    let n = raw.len() as f64;
    let mean = raw.iter().sum::<f64>() / n;
    let std = (raw.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt();
    (std > 0.0 && std.is_finite()).then(|| raw.iter().map(|x| (x - mean) / std).collect())
}

/// Draw `n_qubits` qubit parameter sets with exactly the requested spread.
pub fn sample(spec: &DisorderSpec, n_qubits: usize) -> Result<QubitParams> {
    spec.validate()?;
    if n_qubits == 0 {
        return Err(SqaError::config("n_qubits", "must be at least 1"));
    }
    if n_qubits == 1 && spec.sigma > 0.0 {
        return Err(SqaError::config(
            "disorder.sigma",
            "a frequency spread is undefined for a single qubit",
        ));
    }
    let w_bar = spec.mean_frequency;
    let freqs = if spec.sigma == 0.0 {
        vec![w_bar; n_qubits]
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let mut accepted = None;
        for _ in 0..MAX_REDRAWS {
            let Some(z) = standardize(&draw(&mut rng, spec.distribution, n_qubits)) else {
                continue;
            };
            let w: Vec<f64> = z.iter().map(|zi| w_bar * (1.0 + spec.sigma * zi)).collect();
            if w.iter().all(|&wi| wi > 0.0) {
                accepted = Some(w);
                break;
            }
        }
        accepted.ok_or_else(|| {
            SqaError::config(
                "disorder.sigma",
                "could not draw strictly positive frequencies at this spread",
            )
        })?
    };
    let params = match spec.target {
        DisorderTarget::Delta => QubitParams {
            epsilon: vec![0.0; n_qubits],
            delta: freqs,
        },
        DisorderTarget::Epsilon => {
            let delta = freqs.iter().copied().fold(f64::INFINITY, f64::min);
            QubitParams {
                epsilon: freqs
                    .iter()
                    .map(|w| (w * w - delta * delta).max(0.0).sqrt())
                    .collect(),
                delta: vec![delta; n_qubits],
            }
        }
    };
    params.validate()?;
    Ok(params)
}

/// `(ω̄, σ)` of a parameter set.
pub fn measure(params: &QubitParams) -> (f64, f64) {
    let st = qubit_frequencies(params);
    (st.mean, st.sigma)
}
