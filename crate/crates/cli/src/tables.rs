//! Plot-ready tables, one row per sample.

use sqa_core::response::{StarkTrack, Susceptibility};
use sqa_core::sweeps::{FockConvergence, LinearFit, SweepResult};
use sqa_core::C64;

use crate::error::CliResult;
use crate::output::{csv_file, num, OutputFile, Preamble};

pub fn levels(name: &str, pre: &Preamble, levels: &[f64]) -> CliResult<OutputFile> {
    let e0 = levels.first().copied().unwrap_or(0.0);
    csv_file(
        name,
        pre,
        &["level", "energy", "energy_above_ground"],
        levels
            .iter()
            .enumerate()
            .map(|(k, &e)| vec![k.to_string(), num(e), num(e - e0)]),
    )
}

pub fn lines(name: &str, pre: &Preamble, sus: &Susceptibility) -> CliResult<OutputFile> {
    csv_file(
        name,
        pre,
        &["frequency", "weight", "from_level", "to_level"],
        sus.lines.iter().map(|l| {
            vec![
                num(l.frequency),
                num(l.weight),
                l.from_level.to_string(),
                l.to_level.to_string(),
            ]
        }),
    )
}

pub fn curve(name: &str, pre: &Preamble, curve: &[(f64, f64)]) -> CliResult<OutputFile> {
    csv_file(
        name,
        pre,
        &["frequency", "value"],
        curve.iter().map(|&(w, v)| vec![num(w), num(v)]),
    )
}

pub fn correlation(name: &str, pre: &Preamble, times: &[f64], c: &[C64]) -> CliResult<OutputFile> {
    csv_file(
        name,
        pre,
        &["t", "re_c", "im_c"],
        times
            .iter()
            .zip(c)
            .map(|(&t, z)| vec![num(t), num(z.re), num(z.im)]),
    )
}

pub fn fit_note(fit: &LinearFit) -> String {
    format!(
        "linear fit of A_d: slope {}, intercept {}, r_squared {}",
        num(fit.slope),
        num(fit.intercept),
        num(fit.r_squared)
    )
}

pub fn convergence_note(c: &FockConvergence) -> String {
    format!(
        "fock convergence at coupling {}: photon_dim {} -> {}, max relative change {}",
        num(c.coupling),
        c.photon_dim,
        c.photon_dim + 2,
        num(c.max_relative_delta)
    )
}

pub fn sweep_levels(name: &str, pre: &Preamble, r: &SweepResult) -> CliResult<OutputFile> {
    let rows = r.points.iter().flat_map(|p| {
        p.levels
            .iter()
            .flatten()
            .enumerate()
            .map(move |(k, &e)| vec![num(p.value), p.seed.to_string(), k.to_string(), num(e)])
    });
    csv_file(name, pre, &[r.axis.name(), "seed", "level", "energy"], rows)
}

pub fn sweep_lines(name: &str, pre: &Preamble, r: &SweepResult) -> CliResult<OutputFile> {
    let mut rows = Vec::new();
    for p in &r.points {
        let sets: Vec<(String, &Susceptibility)> = if p.per_fock.is_empty() {
            p.susceptibility
                .iter()
                .map(|s| (String::new(), s))
                .collect()
        } else {
            p.per_fock.iter().map(|(n, s)| (n.to_string(), s)).collect()
        };
        for (fock, sus) in sets {
            for l in &sus.lines {
                rows.push(vec![
                    num(p.value),
                    p.seed.to_string(),
                    fock.clone(),
                    num(l.frequency),
                    num(l.weight),
                    l.from_level.to_string(),
                    l.to_level.to_string(),
                ]);
            }
        }
    }
    csv_file(
        name,
        pre,
        &[
            r.axis.name(),
            "seed",
            "fock",
            "frequency",
            "weight",
            "from_level",
            "to_level",
        ],
        rows,
    )
}

pub fn sweep_dominant(name: &str, pre: &Preamble, r: &SweepResult) -> CliResult<OutputFile> {
    let ensemble = r.points.iter().any(|p| p.ensemble.is_some());
    let mut header = vec![
        r.axis.name(),
        "seed",
        "frequency",
        "weight",
        "second_weight",
        "ratio",
    ];
    if ensemble {
        header.extend([
            "ensemble_size",
            "weight_mean",
            "weight_std",
            "frequency_mean",
            "frequency_std",
        ]);
    }
    let rows = r.points.iter().filter_map(|p| {
        let d = p.dominant?;
        let mut row = vec![
            num(p.value),
            p.seed.to_string(),
            num(d.frequency),
            num(d.weight),
            num(d.second_weight),
            num(d.ratio()),
        ];
        if let Some(e) = &p.ensemble {
            row.extend([
                e.members.len().to_string(),
                num(e.weight_mean),
                num(e.weight_std),
                num(e.frequency_mean),
                num(e.frequency_std),
            ]);
        } else if ensemble {
            row.extend(std::iter::repeat_n(String::new(), 5));
        }
        Some(row)
    });
    csv_file(name, pre, &header, rows)
}

/// Closed-form frequency for a track and Fock state, when defined.
pub type Estimate<'a> = &'a dyn Fn(&StarkTrack, usize) -> Option<f64>;

/// `ω_d(n, γ)` with shifts, overlaps and an optional closed-form estimate
/// column.
pub fn stark(
    name: &str,
    pre: &Preamble,
    tracks: &[StarkTrack],
    estimate: Option<Estimate>,
) -> CliResult<OutputFile> {
    let mut header = vec![
        "gamma",
        "n",
        "frequency",
        "weight",
        "ratio",
        "shift",
        "overlap",
    ];
    if estimate.is_some() {
        header.push("perturbative_frequency");
    }
    let mut rows = Vec::new();
    for t in tracks {
        for (&n, d) in &t.per_fock {
            let mut row = vec![
                num(t.gamma),
                n.to_string(),
                num(d.frequency),
                num(d.weight),
                num(d.ratio()),
                num(t.shifts[&n]),
                num(t.overlaps[&n]),
            ];
            if let Some(f) = estimate {
                row.push(f(t, n).map(num).unwrap_or_default());
            }
            rows.push(row);
        }
    }
    csv_file(name, pre, &header, rows)
}
