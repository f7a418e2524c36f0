//! Hamiltonian assembly.
//!
//! ```text
//! H_qb  = Σ_i [Δ_i/2 σ^x_i + ε_i/2 σ^z_i]
//! H_SR  = g Σ_i σ^z_i σ^z_{i+1}                 (open chain by default)
//! H_LR  = g Σ_{i≠j} [σ^x_i σ^x_j + σ^y_i σ^y_j]   (ordered pairs)
//! H_cav = ω0 a†a + γ Σ_i σ^z_i (a† + a)
//! ```
//!
//! The exchange sum runs over *ordered* pairs, so each unordered pair enters
//! twice. Reading it as unordered pairs would halve the effective `g`.

use serde::{Deserialize, Serialize};

use crate::operators::{
    number_operator, pauli_site, pauli_string, quadrature, total_polarization, Axis, HilbertSpace,
    Operator, QubitState,
};
use crate::{Result, SqaError, C64};

/// Per-qubit tunnelling `Δ_i` and bias `ε_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QubitParams {
    pub delta: Vec<f64>,
    pub epsilon: Vec<f64>,
}

impl QubitParams {
    pub fn new(delta: Vec<f64>, epsilon: Vec<f64>) -> Result<Self> {
        let params = Self { delta, epsilon };
        params.validate()?;
        Ok(params)
    }

    /// `n` identical qubits with gap `delta` and zero bias.
    pub fn uniform(n: usize, delta: f64) -> Result<Self> {
        Self::new(vec![delta; n], vec![0.0; n])
    }

    pub fn n_qubits(&self) -> usize {
        self.delta.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.delta.is_empty() {
            return Err(SqaError::config(
                "qubits.delta",
                "at least one qubit is required",
            ));
        }
        if self.delta.len() != self.epsilon.len() {
            return Err(SqaError::config(
                "qubits.epsilon",
                format!(
                    "length {} does not match delta length {}",
                    self.epsilon.len(),
                    self.delta.len()
                ),
            ));
        }
        for (i, (&d, &e)) in self.delta.iter().zip(&self.epsilon).enumerate() {
            if !d.is_finite() || !e.is_finite() {
                return Err(SqaError::config(
                    format!("qubits[{i}]"),
                    "parameters must be finite",
                ));
            }
            if d.hypot(e) <= 0.0 {
                return Err(SqaError::config(
                    format!("qubits[{i}]"),
                    "qubit frequency sqrt(delta^2 + epsilon^2) must be positive",
                ));
            }
        }
        Ok(())
    }

    /// `ω_i = √(Δ_i² + ε_i²)`.
    pub fn frequencies(&self) -> Vec<f64> {
        self.delta
            .iter()
            .zip(&self.epsilon)
            .map(|(d, e)| d.hypot(*e))
            .collect()
    }

    /// Lower eigenvector of `Δ/2 σ^x + ε/2 σ^z` for qubit `site`. For
    /// `ε = 0, Δ > 0` this is `(|0⟩ − |1⟩)/√2`.
    pub fn single_qubit_ground(&self, site: usize) -> QubitState {
        let theta = self.delta[site].atan2(self.epsilon[site]);
        let half = 0.5 * theta;
        [C64::new(half.sin(), 0.0), C64::new(-half.cos(), 0.0)]
    }
}

/// Frequencies with their mean and relative population spread.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyStats {
    pub frequencies: Vec<f64>,
    pub mean: f64,
    /// Population standard deviation divided by the mean.
    pub sigma: f64,
}

pub fn qubit_frequencies(params: &QubitParams) -> FrequencyStats {
    let frequencies = params.frequencies();
    let n = frequencies.len() as f64;
    let mean = frequencies.iter().sum::<f64>() / n;
    let var = frequencies.iter().map(|w| (w - mean).powi(2)).sum::<f64>() / n;
    FrequencyStats {
        sigma: var.sqrt() / mean,
        mean,
        frequencies,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    #[default]
    Open,
    Periodic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Interaction {
    None,
    ShortRangeIsing {
        g: f64,
        #[serde(default)]
        boundary: Boundary,
    },
    GlobalExchange {
        g: f64,
    },
    CavityCoupled {
        gamma: f64,
        omega0: f64,
        photon_dim: usize,
    },
}

impl Interaction {
    /// The swept coupling constant (`g` or `γ`), if any.
    pub fn coupling(&self) -> Option<f64> {
        match *self {
            Interaction::None => None,
            Interaction::ShortRangeIsing { g, .. } | Interaction::GlobalExchange { g } => Some(g),
            Interaction::CavityCoupled { gamma, .. } => Some(gamma),
        }
    }

    /// Copy with the coupling constant replaced. `None` is returned unchanged.
    pub fn with_coupling(&self, value: f64) -> Interaction {
        let mut out = self.clone();
        match &mut out {
            Interaction::None => {}
            Interaction::ShortRangeIsing { g, .. } | Interaction::GlobalExchange { g } => {
                *g = value
            }
            Interaction::CavityCoupled { gamma, .. } => *gamma = value,
        }
        out
    }

    pub fn photon_dim(&self) -> usize {
        match *self {
            Interaction::CavityCoupled { photon_dim, .. } => photon_dim,
            _ => 0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Interaction::None => "none",
            Interaction::ShortRangeIsing { .. } => "short_range_ising",
            Interaction::GlobalExchange { .. } => "global_exchange",
            Interaction::CavityCoupled { .. } => "cavity_coupled",
        }
    }
}

/// Complete physical parameter set for one Hamiltonian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub qubits: QubitParams,
    pub interaction: Interaction,
    /// `k_B T` in units of ω̄; 0 selects the ground-state limit.
    #[serde(default)]
    pub temperature: f64,
    /// Use `qubits` verbatim. When false, Ising models get `ε_i = 0` and
    /// exchange models get a uniform `Δ` (the mean of the given values).
    #[serde(default)]
    pub keep_parameters: bool,
}

impl ModelSpec {
    pub fn new(qubits: QubitParams, interaction: Interaction) -> Self {
        Self {
            qubits,
            interaction,
            temperature: 0.0,
            keep_parameters: false,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.qubits.n_qubits()
    }

    pub fn validate(&self) -> Result<()> {
        self.qubits.validate()?;
        if !(self.temperature.is_finite() && self.temperature >= 0.0) {
            return Err(SqaError::config(
                "temperature",
                "must be finite and non-negative",
            ));
        }
        let n = self.n_qubits();
        match self.interaction {
            Interaction::None => {}
            Interaction::ShortRangeIsing { g, .. } | Interaction::GlobalExchange { g } => {
                if n < 2 {
                    return Err(SqaError::config(
                        "n_qubits",
                        format!("{} needs at least 2 qubits", self.interaction.name()),
                    ));
                }
                if !g.is_finite() {
                    return Err(SqaError::config("interaction.g", "must be finite"));
                }
            }
            Interaction::CavityCoupled {
                gamma,
                omega0,
                photon_dim,
            } => {
                if photon_dim < 2 {
                    return Err(SqaError::config(
                        "interaction.photon_dim",
                        format!("must be at least 2, got {photon_dim}"),
                    ));
                }
                if !gamma.is_finite() {
                    return Err(SqaError::config("interaction.gamma", "must be finite"));
                }
                if !(omega0.is_finite() && omega0 > 0.0) {
                    return Err(SqaError::config("interaction.omega0", "must be positive"));
                }
            }
        }
        Ok(())
    }

    /// Advisory messages for couplings outside the `ω̄ > |g|` regime.
    pub fn regime_warnings(&self) -> Vec<String> {
        let mean = qubit_frequencies(&self.qubits).mean;
        match self.interaction.coupling() {
            Some(c) if c.abs() >= mean => vec![format!(
                "coupling |{c}| is not below the mean qubit frequency {mean}; \
                 results lie outside the weak-coupling regime"
            )],
            _ => Vec::new(),
        }
    }

    pub fn space(&self) -> Result<HilbertSpace> {
        HilbertSpace::new(self.n_qubits(), self.interaction.photon_dim())
    }

    /// Qubit parameters after the per-interaction conventions are applied.
    pub fn effective_qubits(&self) -> QubitParams {
        let mut q = self.qubits.clone();
        if self.keep_parameters {
            return q;
        }
        match self.interaction {
            Interaction::ShortRangeIsing { .. } => q.epsilon.iter_mut().for_each(|e| *e = 0.0),
            Interaction::GlobalExchange { .. } => {
                let mean = q.delta.iter().sum::<f64>() / q.delta.len() as f64;
                q.delta.iter_mut().for_each(|d| *d = mean);
            }
            _ => {}
        }
        q
    }

    pub fn with_coupling(&self, value: f64) -> ModelSpec {
        ModelSpec {
            interaction: self.interaction.with_coupling(value),
            ..self.clone()
        }
    }
}

fn check_space(qubits: &QubitParams, space: HilbertSpace) -> Result<()> {
    if qubits.n_qubits() != space.n_qubits() {
        return Err(SqaError::config(
            "qubits",
            format!(
                "{} qubit parameter sets for a space of {} qubits",
                qubits.n_qubits(),
                space.n_qubits()
            ),
        ));
    }
    Ok(())
}

/// `Σ_i [Δ_i/2 σ^x_i + ε_i/2 σ^z_i]`.
pub fn build_qubit_term(qubits: &QubitParams, space: HilbertSpace) -> Result<Operator> {
    qubits.validate()?;
    check_space(qubits, space)?;
    let mut h = Operator::zeros(space);
    for i in 0..space.n_qubits() {
        h = &h + &(&pauli_site(space, Axis::X, i)? * (0.5 * qubits.delta[i]));
        if qubits.epsilon[i] != 0.0 {
            h = &h + &(&pauli_site(space, Axis::Z, i)? * (0.5 * qubits.epsilon[i]));
        }
    }
    Ok(h)
}

fn require_pairs(space: HilbertSpace, what: &str) -> Result<()> {
    if space.n_qubits() < 2 {
        return Err(SqaError::config(
            "n_qubits",
            format!("{what} needs at least 2 qubits"),
        ));
    }
    Ok(())
}

/// Nearest-neighbour `g Σ σ^z_i σ^z_{i+1}`. The periodic variant adds the
/// `(N−1, 0)` bond for `N ≥ 3`.
pub fn build_ising(g: f64, space: HilbertSpace, boundary: Boundary) -> Result<Operator> {
    require_pairs(space, "the Ising term")?;
    let n = space.n_qubits();
    let mut bonds: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    if boundary == Boundary::Periodic && n >= 3 {
        bonds.push((n - 1, 0));
    }
    let mut h = Operator::zeros(space);
    for (i, j) in bonds {
        h = &h + &pauli_string(space, &[(Axis::Z, i), (Axis::Z, j)])?;
    }
    Ok(&h * g)
}

/// All-to-all `g Σ_{i≠j} [σ^x_i σ^x_j + σ^y_i σ^y_j]` over ordered pairs.
pub fn build_exchange(g: f64, space: HilbertSpace) -> Result<Operator> {
    require_pairs(space, "the exchange term")?;
    let n = space.n_qubits();
    let mut h = Operator::zeros(space);
    for i in 0..n {
        for j in (i + 1)..n {
            h = &h + &pauli_string(space, &[(Axis::X, i), (Axis::X, j)])?;
            h = &h + &pauli_string(space, &[(Axis::Y, i), (Axis::Y, j)])?;
        }
    }
    // factor 2: (i, j) and (j, i)
    Ok(&h * (2.0 * g))
}

/// `H_qb + ω0 a†a + γ Σ_i σ^z_i (a† + a)` for a cavity-coupled spec.
pub fn build_cavity(spec: &ModelSpec, space: HilbertSpace) -> Result<Operator> {
    let Interaction::CavityCoupled {
        gamma,
        omega0,
        photon_dim,
    } = spec.interaction
    else {
        return Err(SqaError::config(
            "interaction",
            "cavity parameters are missing (kind must be cavity_coupled)",
        ));
    };
    if space.photon_dim() != photon_dim {
        return Err(SqaError::config(
            "interaction.photon_dim",
            format!(
                "space has {} Fock states, spec has {photon_dim}",
                space.photon_dim()
            ),
        ));
    }
    let qb = build_qubit_term(&spec.effective_qubits(), space)?;
    let photons = &number_operator(space)? * omega0;
    // M is diagonal, so M·(a† + a) only rescales rows of the quadrature.
    let m = total_polarization(space)?;
    let mut coupling = quadrature(space)?.into_matrix();
    for (r, mut row) in coupling.row_iter_mut().enumerate() {
        row *= m.matrix()[(r, r)] * gamma;
    }
    let coupling = Operator::hermitian(space, coupling)?;
    Ok(&(&qb + &photons) + &coupling)
}

/// Validate `spec` and build its Hilbert space and total Hamiltonian.
pub fn assemble(spec: &ModelSpec) -> Result<(HilbertSpace, Operator)> {
    spec.validate()?;
    let space = spec.space()?;
    let h = match spec.interaction {
        Interaction::None => build_qubit_term(&spec.effective_qubits(), space)?,
        Interaction::ShortRangeIsing { g, boundary } => {
            &build_qubit_term(&spec.effective_qubits(), space)? + &build_ising(g, space, boundary)?
        }
        Interaction::GlobalExchange { g } => {
            &build_qubit_term(&spec.effective_qubits(), space)? + &build_exchange(g, space)?
        }
        Interaction::CavityCoupled { .. } => build_cavity(spec, space)?,
    };
    let h = Operator::hermitian(space, h.into_matrix())?;
    Ok((space, h))
}
