//! Resolution of a config file into a typed experiment.

use std::fmt;
use std::path::PathBuf;

use hyperam_core::activations::{ActivationFn, ActivationKind};
use hyperam_core::algebra::{AlgebraSpec, BilinearForm, HVector, Involution};
use hyperam_core::imaging::Codec;
use hyperam_core::presets::{EnergyPreset, Example, Reading};
use hyperam_core::rcnn::{
    AsyncOrder, ExcitationFn, ExcitationKind, MemorySet, NetworkConfig, UpdateMode,
};

use crate::config::ConfigFile;
use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Dynamics,
    EnergyTrace,
    ImageRecall,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Dynamics => "dynamics",
            Command::EnergyTrace => "energy-trace",
            Command::ImageRecall => "image-recall",
            Command::Verify => "verify",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.replace('_', "-").as_str() {
            "dynamics" => Some(Command::Dynamics),
            "energy-trace" => Some(Command::EnergyTrace),
            "image-recall" => Some(Command::ImageRecall),
            "verify" => Some(Command::Verify),
            _ => None,
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

const EXPERIMENT_KEYS: &[&str] = &["kind", "name", "seed", "seeds", "preset", "reading"];
const ALGEBRA_KEYS: &[&str] = &["name", "dim", "table", "involution"];
const ACTIVATION_KEYS: &[&str] = &["kind", "k"];
const EXCITATION_KEYS: &[&str] = &[
    "kind",
    "alpha",
    "beta",
    "a",
    "order",
    "exponent",
    "normalize",
];
const NETWORK_KEYS: &[&str] = &[
    "n",
    "p",
    "a",
    "max_sweeps",
    "change_tol",
    "modes",
    "async_order",
];
const IMAGE_KEYS: &[&str] = &[
    "codecs",
    "noise",
    "trials",
    "a",
    "max_sweeps",
    "modes",
    "source",
    "count",
    "width",
    "height",
    "dir",
];
const VERIFY_KEYS: &[&str] = &["checks", "samples"];

#[derive(Clone, Debug)]
pub enum DynamicsSource {
    Preset {
        example: Example,
        readings: Vec<Reading>,
    },
    Custom {
        config: NetworkConfig<f64>,
        memories: MemorySet<f64>,
    },
}

#[derive(Clone, Debug)]
pub struct DynamicsSpec {
    pub source: DynamicsSource,
}

#[derive(Clone, Debug)]
pub enum EnergySource {
    Preset(EnergyPreset),
    /// Network blocks from the file; the excitation may depend on `n`.
    Custom(NetworkConfig<f64>),
}

#[derive(Clone, Debug)]
pub struct EnergySpec {
    pub source: EnergySource,
    pub n: usize,
    pub p: usize,
    pub a: f64,
    pub seeds: Vec<u64>,
    pub modes: Vec<UpdateMode>,
    pub max_sweeps: usize,
    pub change_tol: Option<f64>,
}

impl EnergySpec {
    pub fn expected_convergent(&self) -> Option<bool> {
        match self.source {
            EnergySource::Preset(p) => Some(p.expected_convergent()),
            EnergySource::Custom(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ImageSource {
    Synthetic {
        count: usize,
        width: usize,
        height: usize,
    },
    Directory(PathBuf),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecallSpec {
    pub codecs: Vec<Codec>,
    pub noise: Vec<f64>,
    pub trials: usize,
    pub a: f64,
    pub max_sweeps: usize,
    pub modes: Vec<UpdateMode>,
    pub source: ImageSource,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifySpec {
    /// Empty means every check.
    pub checks: Vec<String>,
    pub samples: usize,
}

#[derive(Clone, Debug)]
pub enum Body {
    Dynamics(DynamicsSpec),
    EnergyTrace(EnergySpec),
    ImageRecall(RecallSpec),
    Verify(VerifySpec),
}

#[derive(Clone, Debug)]
pub struct Experiment {
    pub command: Command,
    /// Prefix of every output file.
    pub name: String,
    pub seed: u64,
    pub body: Body,
    pub source: String,
}

impl Experiment {
    /// Resolves `file` for `command`; `seed` overrides the file's seed.
    pub fn resolve(command: Command, file: &ConfigFile, seed: Option<u64>) -> Result<Self> {
        let allowed: Vec<(&str, &[&str])> = match command {
            Command::Dynamics => vec![
                ("experiment", EXPERIMENT_KEYS),
                ("algebra", ALGEBRA_KEYS),
                ("activation", ACTIVATION_KEYS),
                ("excitation", EXCITATION_KEYS),
                ("network", NETWORK_KEYS),
                ("memories", &["memory"]),
            ],
            Command::EnergyTrace => vec![
                ("experiment", EXPERIMENT_KEYS),
                ("algebra", ALGEBRA_KEYS),
                ("activation", ACTIVATION_KEYS),
                ("excitation", EXCITATION_KEYS),
                ("network", NETWORK_KEYS),
            ],
            Command::ImageRecall => vec![("experiment", EXPERIMENT_KEYS), ("image", IMAGE_KEYS)],
            Command::Verify => vec![("experiment", EXPERIMENT_KEYS), ("verify", VERIFY_KEYS)],
        };
        file.check_keys(&allowed)?;

        if let Some(e) = file.get("experiment", "kind")? {
            match Command::parse(&e.value) {
                Some(c) if c == command => {}
                Some(c) => {
                    return Err(CliError::at(
                        e.line,
                        format!("config is for `{c}`, not `{command}`"),
                    ))
                }
                None => return Err(CliError::at(e.line, format!("unknown kind `{}`", e.value))),
            }
        }
        let seed = match seed {
            Some(s) => s,
            None => file.value_or("experiment", "seed", 0u64)?,
        };
        let preset = file.get("experiment", "preset")?;
        let body = match command {
            Command::Dynamics => Body::Dynamics(dynamics(file)?),
            Command::EnergyTrace => Body::EnergyTrace(energy(file, seed)?),
            Command::ImageRecall => Body::ImageRecall(recall(file)?),
            Command::Verify => Body::Verify(verify(file)?),
        };
        let default_name =
            preset.map_or_else(|| command.name().replace('-', "_"), |e| e.value.clone());
        let name = file
            .get("experiment", "name")?
            .map_or(default_name, |e| e.value.clone());
        if name.is_empty() || name.contains(['/', '\\']) {
            return Err(CliError::Config(format!("bad experiment name `{name}`")));
        }
        Ok(Experiment {
            command,
            name,
            seed,
            body,
            source: file.source.clone(),
        })
    }
}

fn parse_modes(file: &ConfigFile, section: &str) -> Result<Vec<UpdateMode>> {
    Ok(file
        .list(section, "modes", UpdateMode::parse)?
        .unwrap_or_else(|| vec![UpdateMode::Synchronous, UpdateMode::Asynchronous]))
}

fn algebra(file: &ConfigFile) -> Result<(AlgebraSpec<f64>, Involution)> {
    let (name, line) = file.require::<String>("algebra", "name")?;
    let spec = match file.get("algebra", "table")? {
        None => AlgebraSpec::by_name(&name)
            .ok_or_else(|| CliError::at(line, format!("unknown algebra `{name}`")))?,
        Some(table) => {
            let (dim, _) = file.require::<usize>("algebra", "dim")?;
            let block = format!("name = {name}\ndim = {dim}\ntable = {}\n", table.value);
            AlgebraSpec::from_config_block(&block)
                .map_err(|e| CliError::at(table.line, e.to_string()))?
        }
    };
    let involution = match file.get("algebra", "involution")? {
        None => Involution::Natural,
        Some(e) => Involution::from_name(&e.value)
            .ok_or_else(|| CliError::at(e.line, format!("unknown involution `{}`", e.value)))?,
    };
    Ok((spec, involution))
}

fn activation(file: &ConfigFile, dim: usize) -> Result<ActivationFn<f64>> {
    let (name, line) = file.require::<String>("activation", "kind")?;
    let k = file.parsed::<usize>("activation", "k")?.map(|(k, _)| k);
    let kind = ActivationKind::parse(&name, k).map_err(|e| CliError::at(line, e.to_string()))?;
    let act = ActivationFn::new(kind).map_err(|e| CliError::at(line, e.to_string()))?;
    act.check_dim(dim)
        .map_err(|e| CliError::at(line, e.to_string()))?;
    Ok(act)
}

/// Excitation from `[excitation]`; the exponential kind falls back to
/// `alpha = a / scale`, `beta = e^{-a}` when `alpha` is absent.
fn excitation(file: &ConfigFile, scale: Option<f64>, default_a: f64) -> Result<ExcitationFn<f64>> {
    let kind = file
        .get("excitation", "kind")?
        .map_or(("exponential".to_string(), 0), |e| {
            (e.value.clone(), e.line)
        });
    let normalize = file.value_or("excitation", "normalize", false)?;
    let at = |line: usize| move |e: hyperam_core::Error| CliError::at(line, e.to_string());
    let f = match kind.0.as_str() {
        "identity" => ExcitationFn::identity(),
        "high_order" => {
            let (order, line) = file.require::<f64>("excitation", "order")?;
            ExcitationFn::new(ExcitationKind::HighOrder { order }, false).map_err(at(line))?
        }
        "potential" => {
            let (exponent, line) = file.require::<u32>("excitation", "exponent")?;
            ExcitationFn::new(ExcitationKind::Potential { exponent }, false).map_err(at(line))?
        }
        "exponential" => match file.parsed::<f64>("excitation", "alpha")? {
            Some((alpha, line)) => {
                let beta = file.value_or("excitation", "beta", 1.0)?;
                ExcitationFn::exponential(alpha, beta).map_err(at(line))?
            }
            None => {
                let a = file.value_or("excitation", "a", default_a)?;
                let scale = scale.ok_or_else(|| {
                    CliError::Config("[excitation] needs `alpha` when N is not set".into())
                })?;
                ExcitationFn::exponential_scaled(a, scale).map_err(at(kind.1))?
            }
        },
        other => {
            return Err(CliError::at(
                kind.1,
                format!("unknown excitation `{other}`"),
            ))
        }
    };
    Ok(f.with_normalization(normalize))
}

/// Network blocks shared by the custom dynamics and energy experiments.
fn custom_network(
    file: &ConfigFile,
    n: Option<usize>,
    default_a: f64,
) -> Result<NetworkConfig<f64>> {
    let (spec, inv) = algebra(file)?;
    let act = activation(file, spec.dim())?;
    let scale = match n {
        Some(n) => {
            let m = act.max_self_form(&BilinearForm::new(&spec, inv))?;
            Some(n as f64 * m)
        }
        None => None,
    };
    let exc = excitation(file, scale, default_a)?;
    let mut cfg = NetworkConfig::new(spec, inv, act, exc);
    if let Some(t) = file.parsed::<f64>("network", "change_tol")? {
        cfg = cfg.with_change_tol(t.0);
    }
    if let Some(e) = file.get("network", "async_order")? {
        let order = match e.value.as_str() {
            "cyclic" => AsyncOrder::Cyclic,
            "random" => AsyncOrder::Random {
                seed: file.value_or("experiment", "seed", 0)?,
            },
            other => {
                return Err(CliError::at(
                    e.line,
                    format!("unknown async order `{other}`"),
                ))
            }
        };
        cfg = cfg.with_async_order(order);
    }
    if let Some((s, _)) = file.parsed::<usize>("network", "max_sweeps")? {
        cfg = cfg.with_max_sweeps(s);
    }
    Ok(cfg)
}

/// One memory per `memory = ...` line: components separated by commas,
/// coefficients by whitespace.
fn memories(file: &ConfigFile, cfg: &NetworkConfig<f64>) -> Result<MemorySet<f64>> {
    let dim = cfg.algebra.dim();
    let entries = file.all("memories", "memory");
    if entries.is_empty() {
        return Err(CliError::Config(
            "custom dynamics needs a [memories] section".into(),
        ));
    }
    let mut rows = Vec::new();
    for e in &entries {
        let mut data = Vec::new();
        for comp in e.value.split(',') {
            let coeffs = comp
                .split_whitespace()
                .map(|t| t.parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| CliError::at(e.line, format!("bad number in `{}`", comp.trim())))?;
            if coeffs.len() != dim {
                return Err(CliError::at(
                    e.line,
                    format!(
                        "component `{}` has {} coefficients, expected {dim}",
                        comp.trim(),
                        coeffs.len()
                    ),
                ));
            }
            data.extend(coeffs);
        }
        rows.push((e.line, HVector::new(dim, data)?));
    }
    let n = rows[0].1.len();
    if let Some((line, _)) = rows.iter().find(|(_, r)| r.len() != n) {
        return Err(CliError::at(
            *line,
            format!("memory length differs from {n}"),
        ));
    }
    let line = entries[0].line;
    MemorySet::new(rows.into_iter().map(|(_, r)| r).collect(), &cfg.activation)
        .map_err(|e| CliError::at(line, e.to_string()))
}

fn dynamics(file: &ConfigFile) -> Result<DynamicsSpec> {
    let source = match file.get("experiment", "preset")? {
        Some(e) => {
            let example = Example::parse(&e.value)
                .ok_or_else(|| CliError::at(e.line, format!("unknown preset `{}`", e.value)))?;
            let readings = match file.get("experiment", "reading")? {
                None => vec![Reading::Text, Reading::Caption],
                Some(r) if r.value == "both" => vec![Reading::Text, Reading::Caption],
                Some(r) => vec![Reading::parse(&r.value).ok_or_else(|| {
                    CliError::at(r.line, format!("unknown reading `{}`", r.value))
                })?],
            };
            DynamicsSource::Preset { example, readings }
        }
        None => {
            let config = custom_network(file, None, 10.0)?;
            let memories = memories(file, &config)?;
            DynamicsSource::Custom { config, memories }
        }
    };
    Ok(DynamicsSpec { source })
}

fn energy(file: &ConfigFile, seed: u64) -> Result<EnergySpec> {
    let n = file.value_or("network", "n", 100usize)?;
    let p = file.value_or("network", "p", 160usize)?;
    let a = file.value_or("network", "a", 10.0f64)?;
    if n == 0 || p == 0 {
        return Err(CliError::Config("N and P must be positive".into()));
    }
    let source = match file.get("experiment", "preset")? {
        Some(e) => EnergySource::Preset(
            EnergyPreset::parse(&e.value)
                .ok_or_else(|| CliError::at(e.line, format!("unknown preset `{}`", e.value)))?,
        ),
        None => EnergySource::Custom(custom_network(file, Some(n), a)?),
    };
    let count = file.value_or("experiment", "seeds", 1u64)?;
    Ok(EnergySpec {
        source,
        n,
        p,
        a,
        seeds: (0..count).map(|k| seed.wrapping_add(k)).collect(),
        modes: parse_modes(file, "network")?,
        max_sweeps: file.value_or("network", "max_sweeps", 1000usize)?,
        change_tol: file.parsed::<f64>("network", "change_tol")?.map(|t| t.0),
    })
}

fn recall(file: &ConfigFile) -> Result<RecallSpec> {
    let codecs = match file.get("image", "codecs")? {
        Some(e) if e.value == "all" => Codec::ALL.to_vec(),
        _ => file
            .list("image", "codecs", Codec::parse)?
            .unwrap_or_else(|| vec![Codec::QuaternionTwin]),
    };
    let noise = file
        .list("image", "noise", |s| {
            s.parse::<f64>().ok().filter(|v| *v >= 0.0)
        })?
        .unwrap_or_else(|| vec![0.0, 25.0, 50.0, 75.0, 100.0]);
    let source = match file
        .get("image", "source")?
        .map(|e| (e.value.as_str(), e.line))
    {
        None | Some(("synthetic", _)) => ImageSource::Synthetic {
            count: file.value_or("image", "count", 20usize)?,
            width: file.value_or("image", "width", 32usize)?,
            height: file.value_or("image", "height", 32usize)?,
        },
        Some(("directory", _)) => {
            ImageSource::Directory(file.require::<PathBuf>("image", "dir")?.0)
        }
        Some((other, line)) => {
            return Err(CliError::at(
                line,
                format!("unknown image source `{other}`"),
            ))
        }
    };
    Ok(RecallSpec {
        codecs,
        noise,
        trials: file.value_or("image", "trials", 30usize)?,
        a: file.value_or("image", "a", 20.0f64)?,
        max_sweeps: file.value_or("image", "max_sweeps", 100usize)?,
        modes: parse_modes(file, "image")?,
        source,
    })
}

fn verify(file: &ConfigFile) -> Result<VerifySpec> {
    let checks = match file.get("verify", "checks")? {
        Some(e) if e.value == "all" => Vec::new(),
        _ => file
            .list("verify", "checks", |s| Some(s.to_string()))?
            .unwrap_or_default(),
    };
    Ok(VerifySpec {
        checks,
        samples: file.value_or("verify", "samples", 1000usize)?,
    })
}
