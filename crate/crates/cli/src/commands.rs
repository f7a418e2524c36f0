//! Single-point commands and sweeps. Each builder renders its files in
//! memory; nothing touches the disk here.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;
use sqa_core::eigensolve::{diagonalize, ground_state, Spectrum};
use sqa_core::hamiltonians::{assemble, Interaction, ModelSpec};
use sqa_core::operators::total_polarization;
use sqa_core::response::{
    broaden, cavity_point, correlation_time, dominant_resonance, perturbative_stark_estimate,
    photon_mixture, poisson_probabilities, susceptibility_lines, transmission_suppression,
    DominantResonance, StarkTrack, Susceptibility,
};
use sqa_core::sweeps::{linspace, run_sweep, Observable, SweepResult};

use crate::config::{Command, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{json_file, timestamp, Document, OutputFile, Preamble};
use crate::tables;

/// Files of one resolved run, CSV and/or structured per the output formats.
pub fn execute(rc: &RunConfig, prefix: &str) -> CliResult<Vec<OutputFile>> {
    match rc.command {
        Command::Spectrum => spectrum(rc, prefix),
        Command::Susceptibility => susceptibility(rc, prefix),
        Command::Sweep => sweep(rc, prefix),
        Command::Stark => stark(rc, prefix),
        Command::Transmission => transmission(rc, prefix),
        Command::ReproduceFigure => Err(CliError::config(
            "command",
            "reproduce-figure is dispatched through the figure presets",
        )),
    }
}

fn echo(rc: &RunConfig) -> Value {
    serde_json::to_value(&rc.echo).expect("config echo serializes")
}

fn preamble(rc: &RunConfig, title: impl Into<String>) -> Preamble {
    rc.notes.iter().fold(
        Preamble::new(title, Some(rc.disorder.seed), echo(rc)),
        |p, n| p.note(n.clone()),
    )
}

fn model(rc: &RunConfig) -> CliResult<&ModelSpec> {
    rc.model
        .as_ref()
        .ok_or_else(|| CliError::config("model", "this command needs a single-point model"))
}

/// Keep CSV files if requested and append the structured document.
fn finish<T: Serialize>(
    rc: &RunConfig,
    prefix: &str,
    stem: &str,
    csv: Vec<OutputFile>,
    result: T,
) -> CliResult<Vec<OutputFile>> {
    let mut out = if rc.output.csv { csv } else { Vec::new() };
    if rc.output.structured {
        let config = echo(rc);
        let doc = Document {
            sqa_version: crate::output::VERSION,
            units: crate::output::UNITS,
            command: rc.command.name(),
            figure: rc.figure.map(|f| f.name()),
            generated_at: timestamp(),
            config: &config,
            warnings: &rc.warnings,
            result,
        };
        out.push(json_file(format!("{prefix}{stem}.json"), &doc)?);
    }
    Ok(out)
}

struct Solved {
    spectrum: Spectrum,
    m: sqa_core::operators::Operator,
}

fn solve(spec: &ModelSpec) -> CliResult<Solved> {
    let (space, h) = assemble(spec)?;
    let spectrum = diagonalize(&h)?;
    let m = total_polarization(space)?;
    Ok(Solved { spectrum, m })
}

fn is_cavity(spec: &ModelSpec) -> bool {
    matches!(spec.interaction, Interaction::CavityCoupled { .. })
}

/// Default frequency grid: 0 to twice the highest line (at least 2), 2001
/// points.
fn frequency_grid(rc: &RunConfig, sus: &Susceptibility) -> Vec<f64> {
    match rc.output.grid {
        Some(g) => g.values(),
        None => {
            let top = sus.lines.iter().map(|l| l.frequency).fold(1.0, f64::max);
            linspace(0.0, 2.0 * top, 2001)
        }
    }
}

fn maybe_broaden(rc: &RunConfig, sus: Susceptibility) -> CliResult<Susceptibility> {
    match rc.output.broadening {
        Some(eta) => {
            let grid = frequency_grid(rc, &sus);
            Ok(broaden(&sus, eta, &grid)?)
        }
        None => Ok(sus),
    }
}

#[derive(Serialize)]
struct SpectrumResult<'a> {
    levels: &'a [f64],
    ground_energy: f64,
    ground_degenerate: bool,
    max_residual: f64,
}

fn spectrum(rc: &RunConfig, prefix: &str) -> CliResult<Vec<OutputFile>> {
    let spec = model(rc)?;
    let (_, h) = assemble(spec)?;
    let s = diagonalize(&h)?;
    let gs = ground_state(&s);
    let files = vec![tables::levels(
        &format!("{prefix}levels.csv"),
        &preamble(rc, "eigenvalues in ascending order"),
        s.eigenvalues(),
    )?];
    finish(
        rc,
        prefix,
        "spectrum",
        files,
        SpectrumResult {
            levels: s.eigenvalues(),
            ground_energy: gs.energy,
            ground_degenerate: gs.degenerate,
            max_residual: s.max_residual(&h),
        },
    )
}

#[derive(Serialize)]
struct SusceptibilityResult<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    fock: Option<usize>,
    dominant: Option<DominantResonance>,
    susceptibility: &'a Susceptibility,
}

fn susceptibility(rc: &RunConfig, prefix: &str) -> CliResult<Vec<OutputFile>> {
    let spec = model(rc)?;
    let mut files = Vec::new();
    let mut results = Vec::new();
    if is_cavity(spec) {
        let cp = cavity_point(spec, &rc.output.fock_values)?;
        for (&n, sus) in &cp.per_fock {
            let sus = maybe_broaden(rc, sus.clone())?;
            let pre = preamble(rc, format!("non-equilibrium lines C_{n}"));
            files.push(tables::lines(
                &format!("{prefix}lines_n{n}.csv"),
                &pre,
                &sus,
            )?);
            if let Some(curve) = &sus.curve {
                files.push(tables::curve(
                    &format!("{prefix}curve_n{n}.csv"),
                    &pre,
                    curve,
                )?);
            }
            results.push((Some(n), sus));
        }
    } else {
        let sol = solve(spec)?;
        let sus = susceptibility_lines(&sol.spectrum, &sol.m, 0, spec.temperature)?;
        let sus = maybe_broaden(rc, sus)?;
        let pre = preamble(rc, "polarization susceptibility lines");
        files.push(tables::lines(&format!("{prefix}lines.csv"), &pre, &sus)?);
        if let Some(curve) = &sus.curve {
            let pre = preamble(
                rc,
                format!(
                    "Lorentzian-broadened susceptibility, eta = {:?}",
                    sus.broadening.unwrap_or(0.0)
                ),
            );
            files.push(tables::curve(&format!("{prefix}curve.csv"), &pre, curve)?);
        }
        if let Some(times) = rc.output.times {
            let t = times.values();
            let c = correlation_time(&sol.spectrum, &sol.m, spec.temperature, &t)?;
            let pre = preamble(rc, "polarization autocorrelation C(t)");
            files.push(tables::correlation(
                &format!("{prefix}correlation.csv"),
                &pre,
                &t,
                &c,
            )?);
        }
        results.push((None, sus));
    }
    let result: Vec<SusceptibilityResult> = results
        .iter()
        .map(|(fock, sus)| SusceptibilityResult {
            fock: *fock,
            dominant: dominant_resonance(sus).ok(),
            susceptibility: sus,
        })
        .collect();
    finish(rc, prefix, "susceptibility", files, result)
}

/// Closed-form Stark estimate from the `γ = 0` track, when the grid has one.
fn estimator(
    tracks: &[StarkTrack],
    probe: f64,
) -> Option<impl Fn(&StarkTrack, usize) -> Option<f64>> {
    let base = tracks.iter().find(|t| t.gamma == 0.0)?.per_fock.clone();
    Some(move |t: &StarkTrack, n: usize| {
        let d0 = base.get(&0)?;
        perturbative_stark_estimate(d0.frequency, d0.weight, t.gamma, n, probe).ok()
    })
}

fn probe(rc: &RunConfig, interaction: &Interaction) -> f64 {
    match (rc.output.probe_frequency, interaction) {
        (Some(p), _) => p,
        (None, Interaction::CavityCoupled { omega0, .. }) => *omega0,
        _ => 0.0,
    }
}

fn sweep(rc: &RunConfig, prefix: &str) -> CliResult<Vec<OutputFile>> {
    let cfg = rc
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::config("sweep", "required for the sweep command"))?;
    let mut result: SweepResult = run_sweep(cfg)?;
    result.metadata.generated_at = timestamp();
    let axis = cfg.axis.name();
    let note = format!("policy: {}", result.metadata.policy);
    let pre = |title: String| preamble(rc, title).note(note.clone());
    let mut files = Vec::new();
    let wants = |o| cfg.observables.contains(&o);
    if wants(Observable::Levels) {
        files.push(tables::sweep_levels(
            &format!("{prefix}levels.csv"),
            &pre(format!("eigenvalues vs {axis} (sorted order)")),
            &result,
        )?);
    }
    if wants(Observable::Lines) {
        files.push(tables::sweep_lines(
            &format!("{prefix}lines.csv"),
            &pre(format!("susceptibility lines vs {axis}")),
            &result,
        )?);
    }
    if wants(Observable::Dominant) || result.fit.is_some() {
        let mut p = pre(format!("dominant resonance vs {axis}"));
        if let Some(fit) = &result.fit {
            p = p.note(tables::fit_note(fit));
        }
        files.push(tables::sweep_dominant(
            &format!("{prefix}dominant.csv"),
            &p,
            &result,
        )?);
    }
    let tracks = result.stark_tracks();
    if !tracks.is_empty() {
        let mut p = pre(format!("Stark tracks: dominant resonance of C_n vs {axis}"));
        if let Some(c) = &result.convergence {
            p = p.note(tables::convergence_note(c));
        }
        let probe = probe(rc, &cfg.interaction);
        let est = estimator(&tracks, probe);
        if est.is_some() {
            p = p.note(format!(
                "perturbative_frequency: w_d0 + gamma^2 (n + 1/2) A_d0 / (w_d0 - probe), probe = {probe:?}"
            ));
        }
        let est_ref = est
            .as_ref()
            .map(|f| f as &dyn Fn(&StarkTrack, usize) -> Option<f64>);
        files.push(tables::stark(
            &format!("{prefix}stark.csv"),
            &p,
            &tracks,
            est_ref,
        )?);
    }
    finish(rc, prefix, "sweep", files, &result)
}

#[derive(Serialize)]
struct StarkResult<'a> {
    track: &'a StarkTrack,
    reference: &'a StarkTrack,
    probe_frequency: f64,
    perturbative_frequency: BTreeMap<usize, f64>,
}

fn stark(rc: &RunConfig, prefix: &str) -> CliResult<Vec<OutputFile>> {
    let spec = model(rc)?;
    let point = cavity_point(spec, &rc.output.fock_values)?;
    let reference = cavity_point(&spec.with_coupling(0.0), &rc.output.fock_values)?.track;
    let probe = probe(rc, &spec.interaction);
    let tracks = [reference.clone(), point.track.clone()];
    let est = estimator(&tracks, probe).expect("reference track at zero coupling");
    let perturbative: BTreeMap<usize, f64> = point
        .track
        .per_fock
        .keys()
        .filter_map(|&n| est(&point.track, n).map(|v| (n, v)))
        .collect();
    let pre = preamble(rc, "Stark shift of the dominant resonance per Fock state")
        .note("rows at gamma = 0 are the uncoupled reference")
        .note(format!(
            "probe frequency in the closed-form estimate: {probe:?}"
        ));
    let files = vec![tables::stark(
        &format!("{prefix}stark.csv"),
        &pre,
        &tracks,
        Some(&est),
    )?];
    finish(
        rc,
        prefix,
        "stark",
        files,
        StarkResult {
            track: &point.track,
            reference: &reference,
            probe_frequency: probe,
            perturbative_frequency: perturbative,
        },
    )
}

#[derive(Serialize)]
struct TransmissionResult<'a> {
    photon_probabilities: Option<BTreeMap<usize, f64>>,
    susceptibility_dominant: Option<DominantResonance>,
    transmission_dominant: Option<DominantResonance>,
    transmission: &'a Susceptibility,
}

fn transmission(rc: &RunConfig, prefix: &str) -> CliResult<Vec<OutputFile>> {
    let spec = model(rc)?;
    let (sus, probs) = if is_cavity(spec) {
        let cp = cavity_point(spec, &rc.output.fock_values)?;
        let p = poisson_probabilities(rc.output.photon_mean, &rc.output.fock_values)?;
        (photon_mixture(&cp.per_fock, &p)?, Some(p))
    } else {
        let sol = solve(spec)?;
        (
            susceptibility_lines(&sol.spectrum, &sol.m, 0, spec.temperature)?,
            None,
        )
    };
    let sus = maybe_broaden(rc, sus)?;
    let ds21 = transmission_suppression(&sus, rc.output.transmission_scale)?;
    let pre = preamble(rc, "transmission suppression Delta S21 lines")
        .note(format!("scale: {:?}", rc.output.transmission_scale));
    let mut files = vec![tables::lines(
        &format!("{prefix}transmission.csv"),
        &pre,
        &ds21,
    )?];
    if let Some(curve) = &ds21.curve {
        files.push(tables::curve(
            &format!("{prefix}transmission_curve.csv"),
            &pre,
            curve,
        )?);
    }
    finish(
        rc,
        prefix,
        "transmission",
        files,
        TransmissionResult {
            photon_probabilities: probs,
            susceptibility_dominant: dominant_resonance(&sus).ok(),
            transmission_dominant: dominant_resonance(&ds21).ok(),
            transmission: &ds21,
        },
    )
}
