//! Parameter scans: levels and line weights against the coupling, dominant
//! amplitude against disorder and array size, and Stark tracks against the
//! cavity coupling.
//!
//! Seed policy. Along `g` and `gamma` axes every point uses the same
//! disorder realization (`disorder.seed`), so level tracks are continuous.
//! Along `sigma` and `n_qubits` axes point `i` uses `seeds[i]` when explicit
//! per-point seeds are given and `disorder.seed + i` otherwise. Ensemble
//! member `j` of a point uses `point_seed + (j << 32)`; member 0 is the
//! point itself. Levels are tracked by sorted order.
//!
//! Points are evaluated on the rayon pool and collected in axis order, so
//! the result does not depend on scheduling.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::disorder::{sample, DisorderSpec, DisorderTarget};
use crate::eigensolve::{diagonalize, DEGENERACY_TOL};
use crate::hamiltonians::{assemble, Interaction, ModelSpec, QubitParams};
use crate::operators::total_polarization;
use crate::response::{
    cavity_point, dominant_resonance, susceptibility_lines, CavityPoint, DominantResonance,
    StarkTrack, Susceptibility,
};
use crate::{Result, SqaError};

pub const DEFAULT_MAX_QUBITS: usize = 8;
const ENSEMBLE_STRIDE_SHIFT: u32 = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    G,
    Gamma,
    Sigma,
    NQubits,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::G => "g",
            SweepAxis::Gamma => "gamma",
            SweepAxis::Sigma => "sigma",
            SweepAxis::NQubits => "n_qubits",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    Levels,
    Lines,
    Dominant,
    Stark,
}

fn default_observables() -> Vec<Observable> {
    vec![Observable::Levels, Observable::Lines, Observable::Dominant]
}

fn default_ensemble() -> usize {
    1
}

fn default_max_qubits() -> usize {
    DEFAULT_MAX_QUBITS
}

fn default_fock_values() -> Vec<usize> {
    vec![0, 1, 2]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub n_qubits: usize,
    /// Template interaction; its coupling is replaced along `g`/`gamma` axes.
    pub interaction: Interaction,
    #[serde(default)]
    pub temperature: f64,
    #[serde(default)]
    pub keep_parameters: bool,
    pub disorder: DisorderSpec,
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    #[serde(default = "default_observables")]
    pub observables: Vec<Observable>,
    /// Explicit per-point seeds (`sigma` and `n_qubits` axes only).
    #[serde(default)]
    pub seeds: Option<Vec<u64>>,
    /// Realizations per point (`sigma` and `n_qubits` axes only).
    #[serde(default = "default_ensemble")]
    pub ensemble: usize,
    #[serde(default = "default_fock_values")]
    pub fock_values: Vec<usize>,
    #[serde(default = "default_max_qubits")]
    pub max_qubits: usize,
    /// Report levels relative to the ground state.
    #[serde(default)]
    pub relative_levels: bool,
}

impl SweepConfig {
    pub fn new(
        n_qubits: usize,
        interaction: Interaction,
        disorder: DisorderSpec,
        axis: SweepAxis,
        values: Vec<f64>,
    ) -> Self {
        Self {
            n_qubits,
            interaction,
            temperature: 0.0,
            keep_parameters: false,
            disorder,
            axis,
            values,
            observables: default_observables(),
            seeds: None,
            ensemble: 1,
            fock_values: default_fock_values(),
            max_qubits: DEFAULT_MAX_QUBITS,
            relative_levels: false,
        }
    }

    fn wants(&self, o: Observable) -> bool {
        self.observables.contains(&o)
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(SqaError::config("sweep.values", "must not be empty"));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(SqaError::config("sweep.values", "must be finite"));
        }
        let up = self.values.windows(2).all(|w| w[1] > w[0]);
        let down = self.values.windows(2).all(|w| w[1] < w[0]);
        if !(up || down) {
            return Err(SqaError::config(
                "sweep.values",
                "must be strictly monotone",
            ));
        }
        if self.ensemble == 0 {
            return Err(SqaError::config("sweep.ensemble", "must be at least 1"));
        }
        if let Some(seeds) = &self.seeds {
            if seeds.len() != self.values.len() {
                return Err(SqaError::config(
                    "sweep.seeds",
                    format!("expected {} seeds, got {}", self.values.len(), seeds.len()),
                ));
            }
        }
        let fixed_axis = matches!(self.axis, SweepAxis::G | SweepAxis::Gamma);
        if fixed_axis && (self.seeds.is_some() || self.ensemble > 1) {
            return Err(SqaError::config(
                "sweep.seeds",
                "g and gamma sweeps use one fixed realization; per-point seeds and \
                 ensembles apply to sigma and n_qubits sweeps",
            ));
        }
        match self.axis {
            SweepAxis::G => {
                if !matches!(
                    self.interaction,
                    Interaction::ShortRangeIsing { .. } | Interaction::GlobalExchange { .. }
                ) {
                    return Err(SqaError::config(
                        "model.interaction.kind",
                        "a g sweep needs short_range_ising or global_exchange",
                    ));
                }
            }
            SweepAxis::Gamma => {
                if !matches!(self.interaction, Interaction::CavityCoupled { .. }) {
                    return Err(SqaError::config(
                        "model.interaction.kind",
                        "a gamma sweep needs cavity_coupled",
                    ));
                }
            }
            SweepAxis::Sigma => {
                if self.values.iter().any(|&s| !(0.0..0.5).contains(&s)) {
                    return Err(SqaError::config(
                        "sweep.values",
                        "sigma values must lie in [0, 0.5)",
                    ));
                }
            }
            SweepAxis::NQubits => {
                for &v in &self.values {
                    if v.fract() != 0.0 || v < 1.0 {
                        return Err(SqaError::config(
                            "sweep.values",
                            "n_qubits values must be positive integers",
                        ));
                    }
                }
            }
        }
        if matches!(self.interaction, Interaction::CavityCoupled { .. }) {
            let pd = self.interaction.photon_dim();
            if self.fock_values.is_empty()
                || self.fock_values.iter().enumerate().any(|(i, &n)| n != i)
            {
                return Err(SqaError::config(
                    "sweep.fock_values",
                    "must be contiguous from 0",
                ));
            }
            if self.fock_values.last().is_some_and(|&top| top + 1 >= pd) {
                return Err(SqaError::config(
                    "sweep.fock_values",
                    format!(
                        "highest Fock state must stay below photon_dim - 1 = {}",
                        pd.saturating_sub(1)
                    ),
                ));
            }
        }
        for n in self.sizes() {
            if n > self.max_qubits {
                return Err(SqaError::config(
                    "sweep.max_qubits",
                    format!(
                        "N = {n} exceeds the resource guard of {} qubits",
                        self.max_qubits
                    ),
                ));
            }
        }
        Ok(())
    }

    fn sizes(&self) -> Vec<usize> {
        match self.axis {
            SweepAxis::NQubits => self.values.iter().map(|&v| v as usize).collect(),
            _ => vec![self.n_qubits],
        }
    }

    /// Disorder seed of point `i`.
    pub fn point_seed(&self, i: usize) -> u64 {
        match self.axis {
            SweepAxis::G | SweepAxis::Gamma => self.disorder.seed,
            SweepAxis::Sigma | SweepAxis::NQubits => match &self.seeds {
                Some(s) => s[i],
                None => self.disorder.seed.wrapping_add(i as u64),
            },
        }
    }

    /// Model for point `i` with an explicit disorder seed.
    pub fn model_at(&self, i: usize, seed: u64) -> Result<ModelSpec> {
        let value = self.values[i];
        let mut disorder = self.disorder.clone();
        disorder.seed = seed;
        let mut n = self.n_qubits;
        let mut interaction = self.interaction.clone();
        match self.axis {
            SweepAxis::G | SweepAxis::Gamma => interaction = interaction.with_coupling(value),
            SweepAxis::Sigma => disorder.sigma = value,
            SweepAxis::NQubits => n = value as usize,
        }
        let qubits = sample(&disorder, n)?;
        Ok(ModelSpec {
            qubits,
            interaction,
            temperature: self.temperature,
            keep_parameters: self.keep_parameters,
        })
    }

    pub fn policy(&self) -> String {
        match self.axis {
            SweepAxis::G | SweepAxis::Gamma => format!(
                "fixed realization: seed {} at every point; levels tracked by sorted order",
                self.disorder.seed
            ),
            SweepAxis::Sigma | SweepAxis::NQubits => {
                let base = if self.seeds.is_some() {
                    "explicit per-point seeds".to_string()
                } else {
                    format!(
                        "fresh realization per point: seed {} + point index",
                        self.disorder.seed
                    )
                };
                if self.ensemble > 1 {
                    format!(
                        "{base}; ensemble of {} with member j at seed + (j << 32)",
                        self.ensemble
                    )
                } else {
                    base
                }
            }
        }
    }

    /// Warnings about settings that silently discard part of the disorder.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.keep_parameters || self.disorder.sigma == 0.0 && self.axis != SweepAxis::Sigma {
            return out;
        }
        match (&self.interaction, self.disorder.target) {
            (Interaction::ShortRangeIsing { .. }, DisorderTarget::Epsilon) => out.push(
                "short_range_ising drops the biases, so epsilon-targeted disorder is removed"
                    .into(),
            ),
            (Interaction::GlobalExchange { .. }, DisorderTarget::Delta) => out.push(
                "global_exchange uses a uniform gap, so delta-targeted disorder is averaged away"
                    .into(),
            ),
            _ => {}
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleMember {
    pub seed: u64,
    pub frequency: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleStats {
    pub members: Vec<EnsembleMember>,
    pub weight_mean: f64,
    pub weight_std: f64,
    pub frequency_mean: f64,
    pub frequency_std: f64,
}

impl EnsembleStats {
    fn from_members(members: Vec<EnsembleMember>) -> Self {
        let (wm, ws) = mean_std(members.iter().map(|m| m.weight));
        let (fm, fs) = mean_std(members.iter().map(|m| m.frequency));
        Self {
            members,
            weight_mean: wm,
            weight_std: ws,
            frequency_mean: fm,
            frequency_std: fs,
        }
    }
}

fn mean_std(xs: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = xs.clone().count() as f64;
    let mean = xs.clone().sum::<f64>() / n;
    let var = xs.map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub value: f64,
    pub seed: u64,
    pub qubits: QubitParams,
    pub levels: Option<Vec<f64>>,
    /// Equilibrium lines, or the `n = 0` non-equilibrium lines for cavity
    /// sweeps.
    pub susceptibility: Option<Susceptibility>,
    pub dominant: Option<DominantResonance>,
    /// Non-equilibrium lines per Fock state (cavity sweeps with `lines`).
    pub per_fock: BTreeMap<usize, Susceptibility>,
    pub stark: Option<StarkTrack>,
    pub ensemble: Option<EnsembleStats>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least squares `y ≈ slope·x + intercept`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(SqaError::Validation(
            "a linear fit needs at least two (x, y) pairs of equal length".into(),
        ));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(SqaError::Validation("x values are all equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - slope * a - intercept).powi(2))
        .sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
    })
}

/// Observables recomputed at `photon_dim + 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FockConvergence {
    pub coupling: f64,
    pub photon_dim: usize,
    pub at_dim: Vec<f64>,
    pub at_dim_plus_2: Vec<f64>,
    /// `max_k |b_k − a_k| / |a_k|` (absolute where `a_k = 0`).
    pub max_relative_delta: f64,
}

/// Default extractor: `ω_d(n)` and `A_d(n)` for each computed Fock state.
pub fn dominant_observables(p: &CavityPoint) -> Vec<f64> {
    p.track
        .per_fock
        .values()
        .flat_map(|d| [d.frequency, d.weight])
        .collect()
}

/// Stark shifts `ω_d(n) − ω_d(0)` for `n ≥ 1`.
pub fn shift_observables(p: &CavityPoint) -> Vec<f64> {
    p.track
        .shifts
        .iter()
        .filter(|(&n, _)| n > 0)
        .map(|(_, &s)| s)
        .collect()
}

pub fn fock_convergence_check<F>(
    spec: &ModelSpec,
    fock_values: &[usize],
    extract: F,
) -> Result<FockConvergence>
where
    F: Fn(&CavityPoint) -> Vec<f64>,
{
    let Interaction::CavityCoupled {
        gamma,
        omega0,
        photon_dim,
    } = spec.interaction
    else {
        return Err(SqaError::config(
            "model.interaction.kind",
            "the Fock convergence check needs cavity_coupled",
        ));
    };
    let mut wider = spec.clone();
    wider.interaction = Interaction::CavityCoupled {
        gamma,
        omega0,
        photon_dim: photon_dim + 2,
    };
    let a = extract(&cavity_point(spec, fock_values)?);
    let b = extract(&cavity_point(&wider, fock_values)?);
    let max_relative_delta = a
        .iter()
        .zip(&b)
        .map(|(x, y)| {
            let d = (y - x).abs();
            if *x == 0.0 {
                d
            } else {
                d / x.abs()
            }
        })
        .fold(0.0, f64::max);
    Ok(FockConvergence {
        coupling: gamma,
        photon_dim,
        at_dim: a,
        at_dim_plus_2: b,
        max_relative_delta,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepMetadata {
    pub config: SweepConfig,
    pub code_version: String,
    pub policy: String,
    /// Seconds since the Unix epoch; the only non-reproducible field.
    pub generated_at: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub points: Vec<SweepPoint>,
    pub fit: Option<LinearFit>,
    pub convergence: Option<FockConvergence>,
    pub metadata: SweepMetadata,
    pub warnings: Vec<String>,
}

impl SweepResult {
    /// Dominant `(ω_d, A_d)` per point, in axis order.
    pub fn dominant(&self) -> Vec<Option<DominantResonance>> {
        self.points.iter().map(|p| p.dominant).collect()
    }

    pub fn stark_tracks(&self) -> Vec<StarkTrack> {
        self.points.iter().filter_map(|p| p.stark.clone()).collect()
    }
}

/// Diagonalize one equilibrium spec and return levels, lines and dominant.
fn equilibrium_point(
    spec: &ModelSpec,
) -> Result<(Vec<f64>, Susceptibility, Option<DominantResonance>)> {
    let (space, h) = assemble(spec)?;
    let s = diagonalize(&h)?;
    let m = total_polarization(space)?;
    let mut sus = susceptibility_lines(&s, &m, 0, spec.temperature)?;
    let e = s.eigenvalues();
    if spec.temperature == 0.0 && e.len() > 1 && e[1] - e[0] <= DEGENERACY_TOL {
        sus.warnings.push(
            "ground level is degenerate; lines are taken out of the first ground vector".into(),
        );
    }
    let dom = dominant_resonance(&sus).ok();
    Ok((e.to_vec(), sus, dom))
}

fn evaluate(cfg: &SweepConfig, i: usize) -> Result<SweepPoint> {
    let seed = cfg.point_seed(i);
    let spec = cfg.model_at(i, seed)?;
    spec.validate()?;
    let mut warnings = spec.regime_warnings();
    let mut point = SweepPoint {
        value: cfg.values[i],
        seed,
        qubits: spec.qubits.clone(),
        levels: None,
        susceptibility: None,
        dominant: None,
        per_fock: BTreeMap::new(),
        stark: None,
        ensemble: None,
        warnings: Vec::new(),
    };
    if matches!(spec.interaction, Interaction::CavityCoupled { .. }) {
        let cp = cavity_point(&spec, &cfg.fock_values)?;
        warnings.extend(cp.track.warnings.iter().cloned());
        if cfg.wants(Observable::Levels) {
            point.levels = Some(cp.spectrum.eigenvalues().to_vec());
        }
        if cfg.wants(Observable::Dominant) {
            point.dominant = cp.track.per_fock.get(&0).copied();
        }
        if cfg.wants(Observable::Lines) {
            point.susceptibility = cp.per_fock.get(&0).cloned();
            point.per_fock = cp.per_fock.clone();
        }
        if cfg.wants(Observable::Stark) {
            point.stark = Some(cp.track);
        }
    } else {
        let (levels, sus, dom) = equilibrium_point(&spec)?;
        warnings.extend(sus.warnings.iter().cloned());
        if cfg.wants(Observable::Levels) {
            point.levels = Some(levels);
        }
        if cfg.wants(Observable::Lines) {
            point.susceptibility = Some(sus);
        }
        if cfg.wants(Observable::Dominant) {
            point.dominant = dom;
        }
    }
    if cfg.relative_levels {
        if let Some(levels) = &mut point.levels {
            let e0 = levels[0];
            levels.iter_mut().for_each(|e| *e -= e0);
        }
    }
    if cfg.ensemble > 1 {
        let members: Result<Vec<EnsembleMember>> = (0..cfg.ensemble)
            .into_par_iter()
            .map(|j| {
                let s = seed.wrapping_add((j as u64) << ENSEMBLE_STRIDE_SHIFT);
                let spec = cfg.model_at(i, s)?;
                let dom = if matches!(spec.interaction, Interaction::CavityCoupled { .. }) {
                    cavity_point(&spec, &cfg.fock_values)?.track.per_fock[&0]
                } else {
                    equilibrium_point(&spec)?.2.ok_or_else(|| {
                        SqaError::Numerical("ensemble member has no positive-frequency line".into())
                    })?
                };
                Ok(EnsembleMember {
                    seed: s,
                    frequency: dom.frequency,
                    weight: dom.weight,
                })
            })
            .collect();
        point.ensemble = Some(EnsembleStats::from_members(members?));
    }
    point.warnings = warnings;
    Ok(point)
}

fn run_points(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let points = (0..cfg.values.len())
        .into_par_iter()
        .map(|i| evaluate(cfg, i))
        .collect::<Result<Vec<_>>>()?;
    let generated_at = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    Ok(SweepResult {
        axis: cfg.axis,
        values: cfg.values.clone(),
        points,
        fit: None,
        convergence: None,
        metadata: SweepMetadata {
            config: cfg.clone(),
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            policy: cfg.policy(),
            generated_at,
        },
        warnings: cfg.warnings(),
    })
}

fn require_axis(cfg: &SweepConfig, axis: SweepAxis) -> Result<()> {
    if cfg.axis != axis {
        return Err(SqaError::config(
            "sweep.axis",
            format!("expected {}, got {}", axis.name(), cfg.axis.name()),
        ));
    }
    Ok(())
}

/// Levels, lines and dominant resonance along `g` with one fixed
/// realization.
pub fn sweep_interaction(cfg: &SweepConfig) -> Result<SweepResult> {
    require_axis(cfg, SweepAxis::G)?;
    run_points(cfg)
}

/// Dominant amplitude along `σ`, optionally ensemble-averaged.
pub fn sweep_disorder(cfg: &SweepConfig) -> Result<SweepResult> {
    require_axis(cfg, SweepAxis::Sigma)?;
    run_points(cfg)
}

/// Dominant amplitude along `N` plus a least-squares line through
/// `A_d(N)` (ensemble means when an ensemble is requested).
pub fn sweep_size(cfg: &SweepConfig) -> Result<SweepResult> {
    require_axis(cfg, SweepAxis::NQubits)?;
    let mut cfg = cfg.clone();
    if !cfg.wants(Observable::Dominant) {
        cfg.observables.push(Observable::Dominant);
    }
    let mut result = run_points(&cfg)?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for p in &result.points {
        let y = match (&p.ensemble, &p.dominant) {
            (Some(e), _) => Some(e.weight_mean),
            (None, Some(d)) => Some(d.weight),
            _ => None,
        };
        if let Some(y) = y {
            xs.push(p.value);
            ys.push(y);
        }
    }
    if xs.len() >= 2 {
        result.fit = Some(linear_fit(&xs, &ys)?);
    }
    Ok(result)
}

/// Stark tracks along `γ` plus the Fock-truncation check at the largest
/// `|γ|` of the grid.
pub fn sweep_coupling(cfg: &SweepConfig) -> Result<SweepResult> {
    require_axis(cfg, SweepAxis::Gamma)?;
    let mut cfg = cfg.clone();
    if !cfg.wants(Observable::Stark) {
        cfg.observables.push(Observable::Stark);
    }
    let mut result = run_points(&cfg)?;
    let extreme = (0..cfg.values.len())
        .max_by(|&a, &b| cfg.values[a].abs().total_cmp(&cfg.values[b].abs()))
        .expect("validated non-empty");
    let spec = cfg.model_at(extreme, cfg.point_seed(extreme))?;
    result.convergence = Some(fock_convergence_check(
        &spec,
        &cfg.fock_values,
        dominant_observables,
    )?);
    Ok(result)
}

/// Dispatch on the configured axis.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    match cfg.axis {
        SweepAxis::G => sweep_interaction(cfg),
        SweepAxis::Gamma => sweep_coupling(cfg),
        SweepAxis::Sigma => sweep_disorder(cfg),
        SweepAxis::NQubits => sweep_size(cfg),
    }
}

/// `n` evenly spaced values from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}
