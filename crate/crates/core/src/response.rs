//! Polarization response: correlation functions, spectral lines, dominant
//! resonances, the photon-number-dependent Stark shift, photon mixtures and
//! the transmission-suppression proxy.
//!
//! For a discrete spectrum the long-time average that defines `C(ω)` is a
//! sum of delta spikes, so the susceptibility is reported as a list of
//! [`SpectralLine`]s: frequency `E_m − E_n` and weight `p_n |⟨m|M|n⟩|²`,
//! where `M = Σ_i σ^z_i` and `p_n` is the thermal population (or 1 for the
//! reference level at zero temperature).
//!
//! The literal finite-window average `(1/t0) ∫_0^t0 e^{iωt} Im C(t) dt`
//! evaluated at a line frequency tends to `−(i/2)·w` with the
//! `C(t) = Σ w e^{−i(E_m−E_n)t}` sign convention; the reported amplitude is
//! `w`. [`time_domain_check`] computes that integral numerically as a
//! cross-check and is not used on the production path.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigensolve::{diagonalize, max_overlap_state, Spectrum, DEGENERACY_TOL};
use crate::hamiltonians::{assemble, Interaction, ModelSpec, QubitParams};
use crate::operators::{product_state, total_polarization, Operator};
use crate::{Result, SqaError, C64};

/// Lines closer than this in frequency are merged.
pub const MERGE_TOL: f64 = 1e-9;
/// Weights within this of each other tie in [`dominant_resonance`].
pub const WEIGHT_TIE_TOL: f64 = 1e-12;
/// Lines lighter than this fraction of the sum rule are not reported.
pub const WEIGHT_FLOOR: f64 = 1e-12;
/// Below this squared overlap the maximal-overlap identification is flagged.
pub const OVERLAP_GATE: f64 = 0.25;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralLine {
    pub frequency: f64,
    pub weight: f64,
    pub from_level: usize,
    pub to_level: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResponseKind {
    #[default]
    Susceptibility,
    TransmissionSuppression,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Susceptibility {
    pub kind: ResponseKind,
    /// Merged lines sorted by frequency.
    pub lines: Vec<SpectralLine>,
    pub broadening: Option<f64>,
    pub curve: Option<Vec<(f64, f64)>>,
    pub reference_level: Option<usize>,
    /// Squared overlap of the reference eigenstate with its target product
    /// state, for non-equilibrium susceptibilities.
    pub reference_overlap: Option<f64>,
    /// `⟨M²⟩` in the reference state (thermal average at `T > 0`).
    pub sum_rule: f64,
    /// Weight not listed in `lines`: the diagonal term, zero-frequency and
    /// (unless requested) negative-frequency transitions, and lines below
    /// [`WEIGHT_FLOOR`].
    pub unreported_weight: f64,
    pub warnings: Vec<String>,
}

impl Susceptibility {
    pub fn total_weight(&self) -> f64 {
        self.lines.iter().map(|l| l.weight).sum()
    }

    /// `|Σ lines + unreported − ⟨M²⟩|`.
    pub fn sum_rule_residual(&self) -> f64 {
        (self.total_weight() + self.unreported_weight - self.sum_rule).abs()
    }

    pub fn positive_lines(&self) -> impl Iterator<Item = &SpectralLine> {
        self.lines.iter().filter(|l| l.frequency > 0.0)
    }
}

fn check_level(s: &Spectrum, level: usize) -> Result<()> {
    if level >= s.len() {
        return Err(SqaError::Index {
            what: "eigenstate",
            index: level,
            limit: s.len(),
        });
    }
    Ok(())
}

/// Populations `p_n` over the levels that contribute: the Boltzmann
/// distribution for `T > 0`, otherwise `reference` alone.
fn populations(s: &Spectrum, temperature: f64, reference: usize) -> Vec<(usize, f64)> {
    if temperature > 0.0 {
        let e0 = s.eigenvalues()[0];
        let boltz: Vec<f64> = s
            .eigenvalues()
            .iter()
            .map(|e| (-(e - e0) / temperature).exp())
            .collect();
        let z: f64 = boltz.iter().sum();
        boltz
            .into_iter()
            .enumerate()
            .filter(|&(_, b)| b > 0.0)
            .map(|(n, b)| (n, b / z))
            .collect()
    } else {
        vec![(reference, 1.0)]
    }
}

/// Sort and merge lines whose frequencies differ by less than
/// [`MERGE_TOL`]. A merged line keeps the frequency and level labels of its
/// heaviest component.
fn merge_lines(mut raw: Vec<SpectralLine>) -> Vec<SpectralLine> {
    raw.sort_by(|a, b| {
        a.frequency
            .total_cmp(&b.frequency)
            .then(a.from_level.cmp(&b.from_level))
            .then(a.to_level.cmp(&b.to_level))
    });
    let mut out: Vec<SpectralLine> = Vec::new();
    let mut heaviest = 0.0f64;
    let mut last_freq = f64::NEG_INFINITY;
    for line in raw {
        match out.last_mut() {
            Some(cur) if line.frequency - last_freq < MERGE_TOL => {
                if line.weight > heaviest {
                    heaviest = line.weight;
                    cur.frequency = line.frequency;
                    cur.from_level = line.from_level;
                    cur.to_level = line.to_level;
                }
                cur.weight += line.weight;
            }
            _ => {
                heaviest = line.weight;
                out.push(line.clone());
            }
        }
        last_freq = line.frequency;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LineOptions {
    /// Also report negative-frequency (emission) lines.
    pub include_negative: bool,
}

/// Spectral lines of `M` out of `reference_level` (`T = 0`) or out of the
/// thermal ensemble (`T > 0`).
pub fn susceptibility_lines(
    s: &Spectrum,
    m: &Operator,
    reference_level: usize,
    temperature: f64,
) -> Result<Susceptibility> {
    susceptibility_lines_with(s, m, reference_level, temperature, LineOptions::default())
}

pub fn susceptibility_lines_with(
    s: &Spectrum,
    m: &Operator,
    reference_level: usize,
    temperature: f64,
    options: LineOptions,
) -> Result<Susceptibility> {
    check_level(s, reference_level)?;
    if !(temperature.is_finite() && temperature >= 0.0) {
        return Err(SqaError::Validation(format!(
            "temperature must be finite and non-negative, got {temperature}"
        )));
    }
    let mt = s.in_eigenbasis(m);
    let e = s.eigenvalues();
    let pops = populations(s, temperature, reference_level);

    let mut sum_rule = 0.0;
    let mut unreported = 0.0;
    let mut raw = Vec::new();
    for &(n, p) in &pops {
        for (k, &ek) in e.iter().enumerate() {
            let w = p * mt[(k, n)].norm_sqr();
            sum_rule += w;
            let freq = ek - e[n];
            let reportable =
                k != n && freq.abs() >= MERGE_TOL && (freq > 0.0 || options.include_negative);
            if reportable {
                raw.push(SpectralLine {
                    frequency: freq,
                    weight: w,
                    from_level: n,
                    to_level: k,
                });
            } else {
                unreported += w;
            }
        }
    }
    let floor = WEIGHT_FLOOR * sum_rule.max(f64::MIN_POSITIVE);
    let mut lines = Vec::new();
    for line in merge_lines(raw) {
        if line.weight > floor {
            lines.push(line);
        } else {
            unreported += line.weight;
        }
    }
    Ok(Susceptibility {
        kind: ResponseKind::Susceptibility,
        lines,
        broadening: None,
        curve: None,
        reference_level: (temperature == 0.0).then_some(reference_level),
        reference_overlap: None,
        sum_rule,
        unreported_weight: unreported,
        warnings: Vec::new(),
    })
}

/// `(frequency, weight)` for every transition out of the contributing
/// levels, including the diagonal term.
fn transition_terms(s: &Spectrum, m: &Operator, temperature: f64) -> Vec<(f64, f64)> {
    let mt = s.in_eigenbasis(m);
    let e = s.eigenvalues();
    let ground: Vec<usize> = (0..s.len())
        .filter(|&k| e[k] - e[0] <= DEGENERACY_TOL)
        .collect();
    let pops: Vec<(usize, f64)> = if temperature > 0.0 {
        populations(s, temperature, 0)
    } else {
        let p = 1.0 / ground.len() as f64;
        ground.iter().map(|&n| (n, p)).collect()
    };
    let mut terms = Vec::with_capacity(pops.len() * e.len());
    for &(n, p) in &pops {
        for (k, &ek) in e.iter().enumerate() {
            terms.push((ek - e[n], p * mt[(k, n)].norm_sqr()));
        }
    }
    terms
}

/// `C(t) = (1/Z) Σ_{m,n} e^{−i(E_m−E_n)t} e^{−E_n/T} |M_mn|²` at each time.
/// At `T = 0` the average runs over the (possibly degenerate) ground level.
pub fn correlation_time(
    s: &Spectrum,
    m: &Operator,
    temperature: f64,
    times: &[f64],
) -> Result<Vec<C64>> {
    if !(temperature.is_finite() && temperature >= 0.0) {
        return Err(SqaError::Validation(format!(
            "temperature must be finite and non-negative, got {temperature}"
        )));
    }
    if let Some(t) = times.iter().find(|t| !t.is_finite()) {
        return Err(SqaError::Validation(format!("non-finite time {t}")));
    }
    let terms = transition_terms(s, m, temperature);
    Ok(times
        .iter()
        .map(|&t| {
            terms
                .iter()
                .filter(|(_, w)| *w != 0.0)
                .map(|&(f, w)| C64::from_polar(w, -f * t))
                .sum()
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeDomainCheck {
    pub frequency: f64,
    /// `(1/t0) ∫_0^t0 e^{iωt} Im C(t) dt` by trapezoidal quadrature.
    pub numeric: C64,
    /// `−(i/2)·w` for the line's weight `w`.
    pub expected: C64,
    pub residual: f64,
    /// `t0` is shorter than ten periods of the smallest frequency gap.
    pub short_window: bool,
}

/// Finite-window average `(1/t0) ∫_0^t0 e^{iωt} Im C(t) dt` for the
/// correlator out of `reference_level`, with a flag for windows too short to
/// resolve neighbouring lines.
pub fn time_average(
    s: &Spectrum,
    m: &Operator,
    reference_level: usize,
    omega: f64,
    t0: f64,
) -> Result<(C64, bool)> {
    check_level(s, reference_level)?;
    if !(t0.is_finite() && t0 > 0.0) {
        return Err(SqaError::Validation(format!(
            "window must be positive, got {t0}"
        )));
    }
    let mt = s.in_eigenbasis(m);
    let e = s.eigenvalues();
    let terms: Vec<(f64, f64)> = e
        .iter()
        .enumerate()
        .map(|(k, ek)| (ek - e[reference_level], mt[(k, reference_level)].norm_sqr()))
        .filter(|&(f, w)| f.abs() >= MERGE_TOL && w > 0.0)
        .collect();

    let mut freqs: Vec<f64> = terms.iter().map(|t| t.0.abs()).collect();
    freqs.push(omega.abs());
    freqs.sort_by(f64::total_cmp);
    let min_gap = freqs
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|&g| g >= MERGE_TOL)
        .fold(f64::INFINITY, f64::min);
    let short_window = min_gap.is_finite() && t0 < 10.0 * std::f64::consts::TAU / min_gap;

    let fastest = terms.iter().map(|t| t.0.abs()).fold(0.0, f64::max) + omega.abs();
    let steps = if fastest > 0.0 {
        ((t0 * fastest / std::f64::consts::TAU) * 32.0).ceil() as usize
    } else {
        1
    }
    .max(1);
    let dt = t0 / steps as f64;
    let im_c = |t: f64| -> f64 { terms.iter().map(|&(f, w)| -w * (f * t).sin()).sum() };
    let integrand = |t: f64| C64::from_polar(1.0, omega * t) * im_c(t);
    let mut acc = (integrand(0.0) + integrand(t0)) * 0.5;
    for k in 1..steps {
        acc += integrand(k as f64 * dt);
    }
    Ok((acc * dt / t0, short_window))
}

/// Cross-check a reported line against the literal time-averaged integral.
pub fn time_domain_check(
    s: &Spectrum,
    m: &Operator,
    line: &SpectralLine,
    reference_level: usize,
    t0: f64,
) -> Result<TimeDomainCheck> {
    let (numeric, short_window) = time_average(s, m, reference_level, line.frequency, t0)?;
    let expected = C64::new(0.0, -0.5 * line.weight);
    Ok(TimeDomainCheck {
        frequency: line.frequency,
        numeric,
        expected,
        residual: (numeric - expected).norm(),
        short_window,
    })
}

/// Non-equilibrium susceptibility `C_n(ω)` of a cavity-coupled spectrum:
/// lines out of the eigenstate that best overlaps
/// `|↓↓…↓⟩ ⊗ |fock⟩`, where `|↓⟩` is each qubit's own ground state.
pub fn susceptibility_nonequilibrium(
    s: &Spectrum,
    m: &Operator,
    qubits: &QubitParams,
    fock: usize,
) -> Result<Susceptibility> {
    let space = s.space();
    if !space.has_mode() {
        return Err(SqaError::config(
            "interaction",
            "non-equilibrium susceptibility needs a cavity-coupled spectrum",
        ));
    }
    let downs: Vec<_> = (0..qubits.n_qubits())
        .map(|i| qubits.single_qubit_ground(i))
        .collect();
    let reference = product_state(space, &downs, Some(fock))?;
    let best = max_overlap_state(s, &reference)?;
    let mut sus = susceptibility_lines(s, m, best.index, 0.0)?;
    sus.reference_overlap = Some(best.overlap);
    if best.overlap < OVERLAP_GATE {
        sus.warnings.push(format!(
            "weak identification for Fock state {fock}: squared overlap {:.3} < {OVERLAP_GATE}",
            best.overlap
        ));
    }
    Ok(sus)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DominantResonance {
    pub frequency: f64,
    pub weight: f64,
    /// Weight of the runner-up positive-frequency line (0 if none).
    pub second_weight: f64,
    pub from_level: usize,
    pub to_level: usize,
}

impl DominantResonance {
    /// `A_d / second-largest weight`; infinite for a single line.
    pub fn ratio(&self) -> f64 {
        if self.second_weight > 0.0 {
            self.weight / self.second_weight
        } else {
            f64::INFINITY
        }
    }
}

/// The heaviest positive-frequency line. Weights within [`WEIGHT_TIE_TOL`]
/// tie and the lower frequency wins.
pub fn dominant_resonance(sus: &Susceptibility) -> Result<DominantResonance> {
    let mut best: Option<&SpectralLine> = None;
    for line in sus.positive_lines() {
        match best {
            Some(b) if line.weight <= b.weight + WEIGHT_TIE_TOL => {}
            _ => best = Some(line),
        }
    }
    let best = best.ok_or_else(|| {
        SqaError::Validation("susceptibility has no positive-frequency lines".into())
    })?;
    let second_weight = sus
        .positive_lines()
        .filter(|l| !std::ptr::eq(*l, best))
        .map(|l| l.weight)
        .fold(0.0, f64::max);
    Ok(DominantResonance {
        frequency: best.frequency,
        weight: best.weight,
        second_weight,
        from_level: best.from_level,
        to_level: best.to_level,
    })
}

/// Lorentzian broadening `Σ w (η/π) / ((ω − ω_line)² + η²)` sampled on
/// `grid`.
pub fn broaden(sus: &Susceptibility, eta: f64, grid: &[f64]) -> Result<Susceptibility> {
    if !(eta.is_finite() && eta > 0.0) {
        return Err(SqaError::Validation(format!(
            "broadening half-width must be positive, got {eta}"
        )));
    }
    let mut out = sus.clone();
    let (lo, hi) = grid
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &w| {
            (a.min(w), b.max(w))
        });
    let uncovered = sus
        .lines
        .iter()
        .filter(|l| l.frequency - 5.0 * eta < lo || l.frequency + 5.0 * eta > hi)
        .count();
    if uncovered > 0 {
        out.warnings.push(format!(
            "{uncovered} line(s) lie within 5 half-widths of the grid edge or outside it"
        ));
    }
    let norm = eta / std::f64::consts::PI;
    out.curve = Some(
        grid.iter()
            .map(|&w| {
                let v = sus
                    .lines
                    .iter()
                    .map(|l| l.weight * norm / ((w - l.frequency).powi(2) + eta * eta))
                    .sum();
                (w, v)
            })
            .collect(),
    );
    out.broadening = Some(eta);
    Ok(out)
}

/// Dominant resonance per Fock state at one cavity coupling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarkTrack {
    pub gamma: f64,
    pub per_fock: BTreeMap<usize, DominantResonance>,
    /// `ω_d(n) − ω_d(0)`.
    pub shifts: BTreeMap<usize, f64>,
    pub overlaps: BTreeMap<usize, f64>,
    pub warnings: Vec<String>,
}

/// Everything computed for one cavity-coupled point.
#[derive(Debug, Clone)]
pub struct CavityPoint {
    pub spectrum: Spectrum,
    pub per_fock: BTreeMap<usize, Susceptibility>,
    pub track: StarkTrack,
}

fn check_stark_inputs(spec: &ModelSpec, fock_values: &[usize]) -> Result<usize> {
    let Interaction::CavityCoupled { photon_dim, .. } = spec.interaction else {
        return Err(SqaError::config(
            "interaction",
            "Stark tracks need a cavity_coupled interaction",
        ));
    };
    if fock_values.is_empty() || fock_values.iter().enumerate().any(|(i, &n)| n != i) {
        return Err(SqaError::config(
            "fock_values",
            "must be contiguous from 0 (0, 1, 2, ...)",
        ));
    }
    let top = *fock_values.last().expect("non-empty");
    if top + 1 >= photon_dim {
        return Err(SqaError::config(
            "fock_values",
            format!(
                "Fock state {top} is at or above the truncation-affected top level {} \
                 for photon_dim = {photon_dim}",
                photon_dim.saturating_sub(1)
            ),
        ));
    }
    Ok(photon_dim)
}

/// Diagonalize one cavity-coupled spec and extract `C_n` and the dominant
/// resonance for each requested Fock state.
pub fn cavity_point(spec: &ModelSpec, fock_values: &[usize]) -> Result<CavityPoint> {
    check_stark_inputs(spec, fock_values)?;
    let (space, h) = assemble(spec)?;
    let spectrum = diagonalize(&h)?;
    let m = total_polarization(space)?;
    let qubits = spec.effective_qubits();
    let mut per_fock = BTreeMap::new();
    let mut track = StarkTrack {
        gamma: spec.interaction.coupling().unwrap_or(0.0),
        per_fock: BTreeMap::new(),
        shifts: BTreeMap::new(),
        overlaps: BTreeMap::new(),
        warnings: Vec::new(),
    };
    for &n in fock_values {
        let sus = susceptibility_nonequilibrium(&spectrum, &m, &qubits, n)?;
        let dom = dominant_resonance(&sus)?;
        track.per_fock.insert(n, dom);
        track
            .overlaps
            .insert(n, sus.reference_overlap.unwrap_or(1.0));
        track.warnings.extend(sus.warnings.iter().cloned());
        per_fock.insert(n, sus);
    }
    let base = track.per_fock[&0].frequency;
    track.shifts = track
        .per_fock
        .iter()
        .map(|(&n, d)| (n, d.frequency - base))
        .collect();
    Ok(CavityPoint {
        spectrum,
        per_fock,
        track,
    })
}

/// Stark tracks `ω_d(n, γ)` over a list of couplings. Points are evaluated
/// in parallel and returned in input order.
pub fn stark_track(
    base: &ModelSpec,
    gammas: &[f64],
    fock_values: &[usize],
) -> Result<Vec<StarkTrack>> {
    check_stark_inputs(base, fock_values)?;
    gammas
        .par_iter()
        .map(|&g| cavity_point(&base.with_coupling(g), fock_values).map(|p| p.track))
        .collect()
}

/// Closed-form estimate `ω_d0 + γ²(n + ½)A_d / (ω_d0 − ω_probe)`.
///
/// The meaning of the probe frequency in the denominator is left to the
/// caller; see the comparison report produced by the sweeps.
pub fn perturbative_stark_estimate(
    omega_d0: f64,
    a_d: f64,
    gamma: f64,
    n: usize,
    probe_omega: f64,
) -> Result<f64> {
    let detuning = omega_d0 - probe_omega;
    if detuning.abs() < 1e-9 {
        return Err(SqaError::Numerical(format!(
            "probe frequency {probe_omega} coincides with the resonance {omega_d0}"
        )));
    }
    Ok(omega_d0 + gamma * gamma * (n as f64 + 0.5) * a_d / detuning)
}

/// `C_ph(ω) = Σ_n P(n) C_n(ω)`.
pub fn photon_mixture(
    susceptibilities: &BTreeMap<usize, Susceptibility>,
    probabilities: &BTreeMap<usize, f64>,
) -> Result<Susceptibility> {
    if probabilities
        .values()
        .any(|&p| !(p.is_finite() && p >= 0.0))
    {
        return Err(SqaError::Validation(
            "probabilities must be non-negative".into(),
        ));
    }
    let total: f64 = probabilities.values().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(SqaError::Validation(format!(
            "probabilities sum to {total}, expected 1"
        )));
    }
    let mut raw = Vec::new();
    let mut sum_rule = 0.0;
    let mut unreported = 0.0;
    let mut warnings = Vec::new();
    let mut kind = None;
    for (&n, &p) in probabilities {
        if p == 0.0 {
            continue;
        }
        let sus = susceptibilities
            .get(&n)
            .ok_or_else(|| SqaError::Validation(format!("no susceptibility for Fock state {n}")))?;
        kind.get_or_insert(sus.kind);
        sum_rule += p * sus.sum_rule;
        unreported += p * sus.unreported_weight;
        warnings.extend(sus.warnings.iter().cloned());
        raw.extend(sus.lines.iter().map(|l| SpectralLine {
            weight: p * l.weight,
            ..l.clone()
        }));
    }
    Ok(Susceptibility {
        kind: kind.unwrap_or_default(),
        lines: merge_lines(raw),
        broadening: None,
        curve: None,
        reference_level: None,
        reference_overlap: None,
        sum_rule,
        unreported_weight: unreported,
        warnings,
    })
}

/// Poisson weights `e^{−n̄} n̄^n / n!` over `ns`, renormalized to sum to 1.
pub fn poisson_probabilities(mean: f64, ns: &[usize]) -> Result<BTreeMap<usize, f64>> {
    if !(mean.is_finite() && mean >= 0.0) || ns.is_empty() {
        return Err(SqaError::Validation(
            "Poisson mean must be non-negative and the Fock list non-empty".into(),
        ));
    }
    let raw: Vec<(usize, f64)> = ns
        .iter()
        .map(|&n| {
            let log_p =
                -mean + n as f64 * mean.ln() - (1..=n).map(|k| (k as f64).ln()).sum::<f64>();
            let p = if mean == 0.0 {
                if n == 0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                log_p.exp()
            };
            (n, p)
        })
        .collect();
    let z: f64 = raw.iter().map(|r| r.1).sum();
    if z <= 0.0 {
        return Err(SqaError::Numerical(
            "Poisson weights vanish on the given Fock list".into(),
        ));
    }
    Ok(raw.into_iter().map(|(n, p)| (n, p / z)).collect())
}

/// `ΔS21(ω) = scale · C(ω)`. `scale` absorbs the line coupling and
/// impedance factors and must be non-negative.
pub fn transmission_suppression(sus: &Susceptibility, scale: f64) -> Result<Susceptibility> {
    if !(scale.is_finite() && scale >= 0.0) {
        return Err(SqaError::Validation(format!(
            "transmission scale must be finite and non-negative, got {scale}"
        )));
    }
    let mut out = sus.clone();
    out.kind = ResponseKind::TransmissionSuppression;
    out.lines.iter_mut().for_each(|l| l.weight *= scale);
    if let Some(curve) = &mut out.curve {
        curve.iter_mut().for_each(|p| p.1 *= scale);
    }
    out.sum_rule *= scale;
    out.unreported_weight *= scale;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SumRule {
    /// `Σ_m |⟨m|M|ref⟩|²` in the eigenbasis.
    pub lhs: f64,
    /// `⟨ref|M²|ref⟩` in the product basis.
    pub rhs: f64,
    pub residual: f64,
}

/// Completeness check for the transition weights out of `reference_level`.
pub fn sum_rule_check(s: &Spectrum, m: &Operator, reference_level: usize) -> Result<SumRule> {
    check_level(s, reference_level)?;
    let mt = s.in_eigenbasis(m);
    let lhs: f64 = mt
        .column(reference_level)
        .iter()
        .map(|z| z.norm_sqr())
        .sum();
    let psi = s.eigenvector(reference_level);
    let m_psi = m.apply(&psi);
    let rhs = psi.amplitudes().dotc(&(m.matrix() * m_psi)).re;
    Ok(SumRule {
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
    })
}

/// `⟨v_k|A|v_k⟩` for eigenstate `level`.
pub fn level_expectation(s: &Spectrum, op: &Operator, level: usize) -> Result<f64> {
    check_level(s, level)?;
    Ok(op.expectation(&s.eigenvector(level)).re)
}
