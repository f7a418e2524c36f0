//! Run configuration: the on-disk schema, its validation into a resolved
//! form, and the echo written back into every output.
//!
//! ```toml
//! command = "susceptibility"   # spectrum | susceptibility | sweep | stark
//!                              # | transmission | reproduce-figure
//! figure = "pic3"              # reproduce-figure only
//!
//! [model]
//! n_qubits = 6
//! temperature = 0.0            # k_B T in units of the mean frequency
//! # delta = [...]              # explicit qubits; bypass disorder sampling
//! # epsilon = [...]
//! [model.interaction]
//! kind = "short_range_ising"   # none | short_range_ising | global_exchange
//!                              # | cavity_coupled
//! g = -0.2
//! boundary = "open"
//!
//! [disorder]
//! sigma = 0.2
//! target = "delta"             # delta | epsilon
//! seed = 4
//!
//! [sweep]
//! axis = "g"                   # g | gamma | sigma | n_qubits
//! start = -0.3
//! stop = 0.3
//! points = 61                  # or: values = [...]
//!
//! [output]
//! directory = "out"
//! formats = ["csv", "structured"]
//! broadening = 0.005
//! ```
//!
//! All physical quantities are in units of the mean qubit frequency.
//! Configs may also be JSON (by file extension), which is the form of the
//! echoed resolved config.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sqa_core::disorder::{sample, DisorderDistribution, DisorderSpec, DisorderTarget};
use sqa_core::hamiltonians::{Boundary, Interaction, ModelSpec, QubitParams};
use sqa_core::sweeps::{linspace, Observable, SweepAxis, SweepConfig, DEFAULT_MAX_QUBITS};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub figure: Option<String>,
    #[serde(default)]
    pub model: RawModel,
    #[serde(default)]
    pub disorder: RawDisorder,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<RawSweep>,
    #[serde(default)]
    pub output: RawOutput,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawModel {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_qubits: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub temperature: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub keep_parameters: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<Vec<f64>>,
    #[serde(default)]
    pub interaction: RawInteraction,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawInteraction {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub photon_dim: Option<i64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDisorder {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distribution: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_frequency: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSweep {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stop: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observables: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seeds: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ensemble: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fock_values: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_qubits: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relative_levels: Option<bool>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGrid {
    pub start: f64,
    pub stop: f64,
    pub points: i64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawOutput {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub directory: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formats: Option<Vec<String>>,
    /// Lorentzian half-width; enables broadened curves.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub broadening: Option<f64>,
    /// Frequency grid for broadened curves.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<RawGrid>,
    /// Time grid for `C(t)` series.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub times: Option<RawGrid>,
    /// Fock states for `stark`, `susceptibility` and `transmission` on a
    /// cavity-coupled model.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fock_values: Option<Vec<i64>>,
    /// Mean photon number of the Poisson mixture used by `transmission`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub photon_mean: Option<f64>,
    /// Probe frequency in the closed-form Stark estimate (default ω0).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe_frequency: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transmission_scale: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Spectrum,
    Susceptibility,
    Sweep,
    Stark,
    Transmission,
    ReproduceFigure,
}

impl Command {
    pub const ALL: [(&'static str, Command); 6] = [
        ("spectrum", Command::Spectrum),
        ("susceptibility", Command::Susceptibility),
        ("sweep", Command::Sweep),
        ("stark", Command::Stark),
        ("transmission", Command::Transmission),
        ("reproduce-figure", Command::ReproduceFigure),
    ];

    pub fn parse(s: &str) -> CliResult<Self> {
        lookup(&Self::ALL, s, "command")
    }

    pub fn name(self) -> &'static str {
        Self::ALL
            .iter()
            .find(|(_, c)| *c == self)
            .expect("listed")
            .0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Figure {
    Pic3,
    Pic5,
    Pic8,
    Pic10,
    Pic11,
    Pic6,
}

impl Figure {
    pub const ALL: [(&'static str, Figure); 6] = [
        ("pic3", Figure::Pic3),
        ("pic5", Figure::Pic5),
        ("pic8", Figure::Pic8),
        ("pic10", Figure::Pic10),
        ("pic11", Figure::Pic11),
        ("pic6", Figure::Pic6),
    ];

    pub fn parse(s: &str) -> CliResult<Self> {
        lookup(&Self::ALL, s, "figure")
    }

    pub fn name(self) -> &'static str {
        Self::ALL
            .iter()
            .find(|(_, f)| *f == self)
            .expect("listed")
            .0
    }
}

fn lookup<T: Copy>(table: &[(&str, T)], s: &str, field: &str) -> CliResult<T> {
    table
        .iter()
        .find(|(k, _)| *k == s)
        .map(|(_, v)| *v)
        .ok_or_else(|| {
            let names: Vec<&str> = table.iter().map(|(k, _)| *k).collect();
            CliError::config(
                field,
                format!("unknown value `{s}`; expected one of {}", names.join(", ")),
            )
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        linspace(self.start, self.stop, self.points)
    }

    fn raw(&self) -> RawGrid {
        RawGrid {
            start: self.start,
            stop: self.stop,
            points: self.points as i64,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSpec {
    pub directory: PathBuf,
    pub csv: bool,
    pub structured: bool,
    pub broadening: Option<f64>,
    pub grid: Option<Grid>,
    pub times: Option<Grid>,
    pub fock_values: Vec<usize>,
    pub photon_mean: f64,
    pub probe_frequency: Option<f64>,
    pub transmission_scale: f64,
}

/// A validated run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub figure: Option<Figure>,
    /// Single-point model with its realized qubit parameters.
    pub model: Option<ModelSpec>,
    pub disorder: DisorderSpec,
    pub sweep: Option<SweepConfig>,
    pub output: OutputSpec,
    /// Fully resolved config in input form; feeding it back reproduces the
    /// run.
    pub echo: RawConfig,
    pub warnings: Vec<String>,
    /// Extra preamble lines (figure presets document their assumptions).
    pub notes: Vec<String>,
}

/// Read a TOML (or, by extension, JSON) config. Type errors carry the
/// offending field path.
pub fn load(path: &Path) -> CliResult<RawConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::config("--config", format!("cannot read {}: {e}", path.display()))
    })?;
    let is_json = path.extension().is_some_and(|e| e == "json");
    if is_json {
        let de = &mut serde_json::Deserializer::from_str(&text);
        serde_path_to_error::deserialize(de)
            .map_err(|e| CliError::config(e.path().to_string(), e.inner().to_string()))
    } else {
        parse_toml(&text)
    }
}

pub fn parse_toml(text: &str) -> CliResult<RawConfig> {
    let de =
        toml::Deserializer::parse(text).map_err(|e| CliError::config("<file>", e.to_string()))?;
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let msg = e.inner().message().to_string();
        CliError::config(if path == "." { "<file>".into() } else { path }, msg)
    })
}

fn parse_enum<T: for<'de> Deserialize<'de>>(
    value: &str,
    field: &str,
    allowed: &str,
) -> CliResult<T> {
    serde_json::from_value(serde_json::Value::String(value.to_string())).map_err(|_| {
        CliError::config(
            field,
            format!("unknown value `{value}`; expected one of {allowed}"),
        )
    })
}

fn non_negative_int(v: i64, field: &str) -> CliResult<usize> {
    usize::try_from(v)
        .map_err(|_| CliError::config(field, format!("must be non-negative, got {v}")))
}

fn grid(raw: Option<RawGrid>, field: &str) -> CliResult<Option<Grid>> {
    let Some(g) = raw else { return Ok(None) };
    let points = non_negative_int(g.points, &format!("{field}.points"))?;
    if points < 2 {
        return Err(CliError::config(
            format!("{field}.points"),
            "must be at least 2",
        ));
    }
    if !(g.start.is_finite() && g.stop.is_finite() && g.stop > g.start) {
        return Err(CliError::config(field, "needs finite start < stop"));
    }
    Ok(Some(Grid {
        start: g.start,
        stop: g.stop,
        points,
    }))
}

fn fock_list(raw: &Option<Vec<i64>>, field: &str) -> CliResult<Vec<usize>> {
    match raw {
        None => Ok(vec![0, 1, 2]),
        Some(v) => v.iter().map(|&n| non_negative_int(n, field)).collect(),
    }
}

fn interaction(raw: &RawInteraction) -> CliResult<Interaction> {
    let kind = raw.kind.as_deref().unwrap_or("none");
    let need = |v: Option<f64>, name: &str| {
        v.ok_or_else(|| {
            CliError::config(
                format!("model.interaction.{name}"),
                format!("required for kind `{kind}`"),
            )
        })
    };
    let stray = |ok: &[&str]| -> CliResult<()> {
        let present = [
            ("g", raw.g.is_some()),
            ("boundary", raw.boundary.is_some()),
            ("gamma", raw.gamma.is_some()),
            ("omega0", raw.omega0.is_some()),
            ("photon_dim", raw.photon_dim.is_some()),
        ];
        for (name, set) in present {
            if set && !ok.contains(&name) {
                return Err(CliError::config(
                    format!("model.interaction.{name}"),
                    format!("not a parameter of kind `{kind}`"),
                ));
            }
        }
        Ok(())
    };
    Ok(match kind {
        "none" => {
            stray(&[])?;
            Interaction::None
        }
        "short_range_ising" => {
            stray(&["g", "boundary"])?;
            let boundary = match raw.boundary.as_deref() {
                None => Boundary::Open,
                Some(b) => parse_enum(b, "model.interaction.boundary", "open, periodic")?,
            };
            Interaction::ShortRangeIsing {
                g: need(raw.g, "g")?,
                boundary,
            }
        }
        "global_exchange" => {
            stray(&["g"])?;
            Interaction::GlobalExchange {
                g: need(raw.g, "g")?,
            }
        }
        "cavity_coupled" => {
            stray(&["gamma", "omega0", "photon_dim"])?;
            let pd = raw.photon_dim.ok_or_else(|| {
                CliError::config(
                    "model.interaction.photon_dim",
                    "required for kind `cavity_coupled`",
                )
            })?;
            if pd < 2 {
                return Err(CliError::config(
                    "model.interaction.photon_dim",
                    format!("must be at least 2, got {pd}"),
                ));
            }
            Interaction::CavityCoupled {
                gamma: need(raw.gamma, "gamma")?,
                omega0: need(raw.omega0, "omega0")?,
                photon_dim: pd as usize,
            }
        }
        other => {
            return Err(CliError::config(
                "model.interaction.kind",
                format!(
                    "unknown value `{other}`; expected one of none, short_range_ising, \
                     global_exchange, cavity_coupled"
                ),
            ))
        }
    })
}

fn raw_interaction(i: &Interaction) -> RawInteraction {
    match *i {
        Interaction::None => RawInteraction {
            kind: Some("none".into()),
            ..Default::default()
        },
        Interaction::ShortRangeIsing { g, boundary } => RawInteraction {
            kind: Some("short_range_ising".into()),
            g: Some(g),
            boundary: Some(variant_name(&boundary)),
            ..Default::default()
        },
        Interaction::GlobalExchange { g } => RawInteraction {
            kind: Some("global_exchange".into()),
            g: Some(g),
            ..Default::default()
        },
        Interaction::CavityCoupled {
            gamma,
            omega0,
            photon_dim,
        } => RawInteraction {
            kind: Some("cavity_coupled".into()),
            gamma: Some(gamma),
            omega0: Some(omega0),
            photon_dim: Some(photon_dim as i64),
            ..Default::default()
        },
    }
}

fn disorder(raw: &RawDisorder) -> CliResult<DisorderSpec> {
    let target = match raw.target.as_deref() {
        None => DisorderTarget::Delta,
        Some(t) => parse_enum(t, "disorder.target", "delta, epsilon")?,
    };
    let distribution = match raw.distribution.as_deref() {
        None => DisorderDistribution::Gaussian,
        Some(d) => parse_enum(d, "disorder.distribution", "gaussian, uniform")?,
    };
    let spec = DisorderSpec {
        sigma: raw.sigma.unwrap_or(0.0),
        target,
        mean_frequency: raw.mean_frequency.unwrap_or(1.0),
        seed: raw.seed.unwrap_or(0),
        distribution,
    };
    spec.validate()?;
    Ok(spec)
}

/// The serialized name of a unit enum variant.
fn variant_name<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        _ => unreachable!("unit variants serialize as strings"),
    }
}

fn raw_disorder(d: &DisorderSpec) -> RawDisorder {
    RawDisorder {
        sigma: Some(d.sigma),
        target: Some(variant_name(&d.target)),
        seed: Some(d.seed),
        distribution: Some(variant_name(&d.distribution)),
        mean_frequency: Some(d.mean_frequency),
    }
}

fn default_sweep_values(axis: SweepAxis, interaction: &Interaction) -> Vec<f64> {
    match axis {
        SweepAxis::G => match interaction {
            Interaction::GlobalExchange { .. } => linspace(-0.2, 0.2, 41),
            _ => linspace(-0.3, 0.3, 61),
        },
        SweepAxis::Gamma => linspace(-0.3, 0.3, 61),
        SweepAxis::Sigma => linspace(0.0, 0.3, 7),
        SweepAxis::NQubits => (2..=8).map(f64::from).collect(),
    }
}

fn sweep(
    raw: &RawSweep,
    n_qubits: usize,
    interaction: &Interaction,
    model: &RawModel,
    disorder: &DisorderSpec,
) -> CliResult<SweepConfig> {
    let axis_name = raw
        .axis
        .as_deref()
        .ok_or_else(|| CliError::config("sweep.axis", "required"))?;
    let axis: SweepAxis = parse_enum(axis_name, "sweep.axis", "g, gamma, sigma, n_qubits")?;
    let values = match (&raw.values, raw.start, raw.stop, raw.points) {
        (Some(v), None, None, None) => v.clone(),
        (None, Some(a), Some(b), Some(p)) => {
            let p = non_negative_int(p, "sweep.points")?;
            if p == 0 {
                return Err(CliError::config("sweep.points", "must be positive"));
            }
            linspace(a, b, p)
        }
        (None, None, None, None) => default_sweep_values(axis, interaction),
        _ => {
            return Err(CliError::config(
                "sweep.values",
                "give either `values` or all of `start`, `stop`, `points`",
            ))
        }
    };
    let observables = match &raw.observables {
        None => vec![Observable::Levels, Observable::Lines, Observable::Dominant],
        Some(list) => list
            .iter()
            .map(|o| parse_enum(o, "sweep.observables", "levels, lines, dominant, stark"))
            .collect::<CliResult<_>>()?,
    };
    let mut cfg = SweepConfig::new(
        n_qubits,
        interaction.clone(),
        disorder.clone(),
        axis,
        values,
    );
    cfg.temperature = model.temperature.unwrap_or(0.0);
    cfg.keep_parameters = model.keep_parameters.unwrap_or(false);
    cfg.observables = observables;
    cfg.seeds = raw.seeds.clone();
    cfg.ensemble = match raw.ensemble {
        Some(e) => non_negative_int(e, "sweep.ensemble")?,
        None => 1,
    };
    cfg.fock_values = fock_list(&raw.fock_values, "sweep.fock_values")?;
    cfg.max_qubits = match raw.max_qubits {
        Some(m) => non_negative_int(m, "sweep.max_qubits")?,
        None => DEFAULT_MAX_QUBITS,
    };
    cfg.relative_levels = raw.relative_levels.unwrap_or(false);
    cfg.validate()?;
    Ok(cfg)
}

fn raw_sweep(c: &SweepConfig) -> RawSweep {
    RawSweep {
        axis: Some(c.axis.name().into()),
        values: Some(c.values.clone()),
        observables: Some(c.observables.iter().map(variant_name).collect()),
        seeds: c.seeds.clone(),
        ensemble: Some(c.ensemble as i64),
        fock_values: Some(c.fock_values.iter().map(|&n| n as i64).collect()),
        max_qubits: Some(c.max_qubits as i64),
        relative_levels: Some(c.relative_levels),
        ..Default::default()
    }
}

fn output(raw: &RawOutput) -> CliResult<OutputSpec> {
    let (mut csv, mut structured) = (true, true);
    if let Some(formats) = &raw.formats {
        csv = false;
        structured = false;
        for f in formats {
            match f.as_str() {
                "csv" => csv = true,
                "structured" => structured = true,
                other => {
                    return Err(CliError::config(
                        "output.formats",
                        format!("unknown format `{other}`; expected csv or structured"),
                    ))
                }
            }
        }
        if !(csv || structured) {
            return Err(CliError::config(
                "output.formats",
                "must name at least one format",
            ));
        }
    }
    if let Some(eta) = raw.broadening {
        if !(eta.is_finite() && eta > 0.0) {
            return Err(CliError::config("output.broadening", "must be positive"));
        }
    }
    let photon_mean = raw.photon_mean.unwrap_or(0.0);
    if !(photon_mean.is_finite() && photon_mean >= 0.0) {
        return Err(CliError::config(
            "output.photon_mean",
            "must be non-negative",
        ));
    }
    let transmission_scale = raw.transmission_scale.unwrap_or(1.0);
    if !(transmission_scale.is_finite() && transmission_scale >= 0.0) {
        return Err(CliError::config(
            "output.transmission_scale",
            "must be non-negative",
        ));
    }
    if let Some(p) = raw.probe_frequency {
        if !p.is_finite() {
            return Err(CliError::config("output.probe_frequency", "must be finite"));
        }
    }
    Ok(OutputSpec {
        directory: PathBuf::from(raw.directory.as_deref().unwrap_or("sqa-out")),
        csv,
        structured,
        broadening: raw.broadening,
        grid: grid(raw.grid, "output.grid")?,
        times: grid(raw.times, "output.times")?,
        fock_values: fock_list(&raw.fock_values, "output.fock_values")?,
        photon_mean,
        probe_frequency: raw.probe_frequency,
        transmission_scale,
    })
}

fn raw_output(o: &OutputSpec) -> RawOutput {
    let mut formats = Vec::new();
    if o.csv {
        formats.push("csv".to_string());
    }
    if o.structured {
        formats.push("structured".to_string());
    }
    RawOutput {
        directory: Some(o.directory.display().to_string()),
        formats: Some(formats),
        broadening: o.broadening,
        grid: o.grid.map(|g| g.raw()),
        times: o.times.map(|g| g.raw()),
        fock_values: Some(o.fock_values.iter().map(|&n| n as i64).collect()),
        photon_mean: Some(o.photon_mean),
        probe_frequency: o.probe_frequency,
        transmission_scale: Some(o.transmission_scale),
    }
}

/// Resolve the qubit parameters of a single-point run: explicit values if
/// given, otherwise a disorder draw.
fn qubits(raw: &RawModel, disorder: &DisorderSpec) -> CliResult<QubitParams> {
    let declared = raw
        .n_qubits
        .map(|n| non_negative_int(n, "model.n_qubits"))
        .transpose()?;
    match (&raw.delta, &raw.epsilon) {
        (Some(d), e) => {
            let e = e.clone().unwrap_or_else(|| vec![0.0; d.len()]);
            if let Some(n) = declared {
                if n != d.len() {
                    return Err(CliError::config(
                        "model.n_qubits",
                        format!("{n} does not match the {} explicit delta values", d.len()),
                    ));
                }
            }
            if e.len() != d.len() {
                return Err(CliError::config(
                    "model.epsilon",
                    format!("has {} entries, delta has {}", e.len(), d.len()),
                ));
            }
            Ok(QubitParams::new(d.clone(), e)?)
        }
        (None, Some(_)) => Err(CliError::config(
            "model.delta",
            "required when epsilon is given",
        )),
        (None, None) => {
            let n = declared.ok_or_else(|| CliError::config("model.n_qubits", "required"))?;
            if n == 0 {
                return Err(CliError::config("model.n_qubits", "must be at least 1"));
            }
            Ok(sample(disorder, n)?)
        }
    }
}

/// Overrides taken from command-line flags.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub command: Option<String>,
    pub figure: Option<String>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub formats: Option<Vec<String>>,
}

impl Overrides {
    pub fn apply(&self, raw: &mut RawConfig) {
        if let Some(c) = &self.command {
            raw.command = Some(c.clone());
        }
        if let Some(f) = &self.figure {
            raw.figure = Some(f.clone());
        }
        if let Some(s) = self.seed {
            raw.disorder.seed = Some(s);
        }
        if let Some(o) = &self.out {
            raw.output.directory = Some(o.display().to_string());
        }
        if let Some(f) = &self.formats {
            raw.output.formats = Some(f.clone());
        }
    }
}

/// Validate a raw config into a runnable one.
pub fn resolve(raw: &RawConfig) -> CliResult<RunConfig> {
    let command = Command::parse(
        raw.command
            .as_deref()
            .ok_or_else(|| CliError::config("command", "required"))?,
    )?;
    let figure = match (&raw.figure, command) {
        (Some(f), Command::ReproduceFigure) => Some(Figure::parse(f)?),
        (None, Command::ReproduceFigure) => {
            return Err(CliError::config("figure", "required for reproduce-figure"))
        }
        (Some(_), _) => return Err(CliError::config("figure", "only used by reproduce-figure")),
        (None, _) => None,
    };
    let disorder = disorder(&raw.disorder)?;
    let output = output(&raw.output)?;
    let mut warnings = Vec::new();
    let mut echo = RawConfig {
        command: Some(command.name().into()),
        figure: figure.map(|f| f.name().into()),
        model: RawModel::default(),
        disorder: raw_disorder(&disorder),
        sweep: None,
        output: raw_output(&output),
    };
    let mut model = None;
    let mut sweep_cfg = None;
    match command {
        Command::ReproduceFigure => {}
        Command::Sweep => {
            let raw_sweep_section = raw
                .sweep
                .as_ref()
                .ok_or_else(|| CliError::config("sweep", "required for the sweep command"))?;
            if raw.model.delta.is_some() || raw.model.epsilon.is_some() {
                return Err(CliError::config(
                    "model.delta",
                    "sweeps draw qubits from the disorder section; explicit values are not supported",
                ));
            }
            let n = raw
                .model
                .n_qubits
                .map(|n| non_negative_int(n, "model.n_qubits"))
                .transpose()?
                .unwrap_or(2);
            // The swept coupling is replaced at every point, so it may be omitted.
            let mut template = raw.model.interaction.clone();
            match (raw_sweep_section.axis.as_deref(), template.kind.as_deref()) {
                (Some("g"), Some("short_range_ising" | "global_exchange")) => {
                    template.g = template.g.or(Some(0.0))
                }
                (Some("gamma"), Some("cavity_coupled")) => {
                    template.gamma = template.gamma.or(Some(0.0))
                }
                _ => {}
            }
            let inter = interaction(&template)?;
            let cfg = sweep(raw_sweep_section, n, &inter, &raw.model, &disorder)?;
            warnings.extend(cfg.warnings());
            echo.model = RawModel {
                n_qubits: Some(n as i64),
                temperature: Some(cfg.temperature),
                keep_parameters: Some(cfg.keep_parameters),
                interaction: raw_interaction(&inter),
                ..Default::default()
            };
            echo.sweep = Some(raw_sweep(&cfg));
            sweep_cfg = Some(cfg);
        }
        _ => {
            let q = qubits(&raw.model, &disorder)?;
            let spec = ModelSpec {
                qubits: q,
                interaction: interaction(&raw.model.interaction)?,
                temperature: raw.model.temperature.unwrap_or(0.0),
                keep_parameters: raw.model.keep_parameters.unwrap_or(false),
            };
            spec.validate()?;
            spec.space()?;
            warnings.extend(spec.regime_warnings());
            if matches!(command, Command::Stark)
                && !matches!(spec.interaction, Interaction::CavityCoupled { .. })
            {
                return Err(CliError::config(
                    "model.interaction.kind",
                    "the stark command needs cavity_coupled",
                ));
            }
            echo.model = RawModel {
                n_qubits: Some(spec.n_qubits() as i64),
                temperature: Some(spec.temperature),
                keep_parameters: Some(spec.keep_parameters),
                delta: Some(spec.qubits.delta.clone()),
                epsilon: Some(spec.qubits.epsilon.clone()),
                interaction: raw_interaction(&spec.interaction),
            };
            model = Some(spec);
        }
    }
    Ok(RunConfig {
        command,
        figure,
        model,
        disorder,
        sweep: sweep_cfg,
        output,
        echo,
        warnings,
        notes: Vec::new(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Issue {
    pub field: String,
    pub message: String,
}

/// Dry-run report: hard errors and advisory warnings, no computation.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub errors: Vec<Issue>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn from_error(e: CliError) -> Self {
        let (field, message) = match e {
            CliError::Config { field, message } => (field, message),
            other => (String::new(), other.to_string()),
        };
        ValidationReport {
            valid: false,
            errors: vec![Issue { field, message }],
            warnings: Vec::new(),
        }
    }
}

pub fn validate(raw: &RawConfig) -> ValidationReport {
    match resolve(raw) {
        Ok(rc) => ValidationReport {
            valid: true,
            errors: Vec::new(),
            warnings: rc.warnings,
        },
        Err(e) => ValidationReport::from_error(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> &'static str {
        r#"
command = "susceptibility"
[model]
n_qubits = 3
[model.interaction]
kind = "short_range_ising"
g = -0.2
[disorder]
sigma = 0.1
seed = 7
"#
    }

    #[test]
    fn resolves_and_echoes_sampled_qubits() {
        let rc = resolve(&parse_toml(base()).unwrap()).unwrap();
        let spec = rc.model.unwrap();
        assert_eq!(spec.n_qubits(), 3);
        assert_eq!(rc.echo.model.delta.as_ref().unwrap(), &spec.qubits.delta);
        assert_eq!(rc.echo.disorder.seed, Some(7));
    }

    #[test]
    fn echo_round_trips() {
        let rc = resolve(&parse_toml(base()).unwrap()).unwrap();
        let text = serde_json::to_string(&rc.echo).unwrap();
        let back: RawConfig = serde_json::from_str(&text).unwrap();
        let rc2 = resolve(&back).unwrap();
        assert_eq!(rc.model, rc2.model);
        assert_eq!(rc.echo, rc2.echo);
    }

    #[test]
    fn field_paths_in_errors() {
        let bad = base().replace("g = -0.2", "g = \"x\"");
        match parse_toml(&bad).unwrap_err() {
            CliError::Config { field, .. } => assert_eq!(field, "model.interaction.g"),
            e => panic!("{e}"),
        }
        let bad = base().replace("n_qubits = 3", "n_qubits = 3\nbogus = 1");
        assert!(matches!(parse_toml(&bad), Err(CliError::Config { .. })));
        let bad = base().replace("sigma = 0.1", "sigma = 0.6");
        match resolve(&parse_toml(&bad).unwrap()).unwrap_err() {
            CliError::Config { field, .. } => assert_eq!(field, "disorder.sigma"),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn negative_photon_dim_names_the_field() {
        let text = r#"
command = "spectrum"
[model]
n_qubits = 2
[model.interaction]
kind = "cavity_coupled"
gamma = 0.1
omega0 = 1.3
photon_dim = -4
"#;
        match resolve(&parse_toml(text).unwrap()).unwrap_err() {
            CliError::Config { field, .. } => assert_eq!(field, "model.interaction.photon_dim"),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn strong_coupling_is_a_warning() {
        let text = base().replace("g = -0.2", "g = 2.0");
        let report = validate(&parse_toml(&text).unwrap());
        assert!(report.valid);
        assert_eq!(report.warnings.len(), 1);
        assert!(validate(&parse_toml(base()).unwrap()).warnings.is_empty());
    }

    #[test]
    fn sweep_defaults() {
        let text = base().replace("command = \"susceptibility\"", "command = \"sweep\"")
            + "[sweep]\naxis = \"g\"\n";
        let rc = resolve(&parse_toml(&text).unwrap()).unwrap();
        let s = rc.sweep.unwrap();
        assert_eq!(s.values.len(), 61);
        assert_eq!(rc.echo.sweep.unwrap().values.unwrap().len(), 61);
    }

    #[test]
    fn unknown_names_rejected() {
        for (from, to, field) in [
            (
                "command = \"susceptibility\"",
                "command = \"plot\"",
                "command",
            ),
            (
                "kind = \"short_range_ising\"",
                "kind = \"heisenberg\"",
                "model.interaction.kind",
            ),
            ("seed = 7", "seed = 7\ntarget = \"both\"", "disorder.target"),
        ] {
            let text = base().replace(from, to);
            match resolve(&parse_toml(&text).unwrap()).unwrap_err() {
                CliError::Config { field: f, .. } => assert_eq!(f, field),
                e => panic!("{e}"),
            }
        }
    }
}
