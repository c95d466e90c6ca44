//! Configuration resolution: built-in defaults, then the optional JSON
//! config file, then command-line flags, strongest last.

use crate::commands::Failure;
use crate::records::OutputFormat;
use crate::Cli;
use evostab::dynamics::FamilyFile;
use evostab::evolution_operators::ProbeConfig;
use evostab::linalg::VectorNorm;
use serde::Deserialize;
use std::fs;
use std::path::{Path, PathBuf};

pub const DEFAULT_HORIZON: usize = 512;
pub const DEFAULT_PROBES: usize = 256;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_DELTA: f64 = 0.5;
pub const DEFAULT_K_MAX: usize = 12;

/// On-disk configuration. Every field is optional so files stay minimal;
/// unknown keys are rejected to catch typos.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    /// inline family definition
    pub family: Option<FamilyFile>,
    /// or a path to a family definition file (inline wins if both appear)
    pub family_path: Option<PathBuf>,
    pub horizon: Option<usize>,
    pub vector_norm: Option<VectorNorm>,
    pub alpha_grid: Option<Vec<f64>>,
    pub probes: Option<usize>,
    pub seed: Option<u64>,
    pub delta: Option<f64>,
    pub k_max: Option<usize>,
    pub output_path: Option<PathBuf>,
    pub output_format: Option<OutputFormat>,
}

/// Fully resolved settings a command runs with.
#[derive(Debug)]
pub struct Resolved {
    pub family: Option<FamilyFile>,
    /// `None` when neither the config file nor a flag pinned the window
    /// length; commands with a natural default substitute their own
    pub horizon: Option<usize>,
    pub vector_norm: VectorNorm,
    pub alpha_grid: Vec<f64>,
    pub probes: usize,
    pub seed: u64,
    pub delta: f64,
    pub k_max: usize,
    pub output_path: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Resolved {
    pub fn horizon(&self) -> usize {
        self.horizon.unwrap_or(DEFAULT_HORIZON)
    }

    pub fn probe_config(&self) -> ProbeConfig {
        ProbeConfig { random: self.probes, seed: self.seed }
    }

    pub fn require_family(&self) -> Result<&FamilyFile, Failure> {
        self.family.as_ref().ok_or_else(|| {
            Failure::Config(
                "no family given; pass --family FILE or set `family`/`family_path` in the config"
                    .to_string(),
            )
        })
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|source| Failure::Io { path: path.to_path_buf(), source })
}

fn read_family(path: &Path) -> Result<FamilyFile, Failure> {
    let text = read_text(path)?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::Config(format!("family file {}: {e}", path.display())))
}

pub fn resolve(cli: &Cli) -> Result<Resolved, Failure> {
    let file: FileConfig = match &cli.config {
        Some(path) => {
            let text = read_text(path)?;
            serde_json::from_str(&text)
                .map_err(|e| Failure::Config(format!("config file {}: {e}", path.display())))?
        }
        None => FileConfig::default(),
    };

    let family = if let Some(path) = &cli.family {
        Some(read_family(path)?)
    } else if let Some(inline) = file.family {
        Some(inline)
    } else if let Some(path) = &file.family_path {
        Some(read_family(path)?)
    } else {
        None
    };

    let horizon = cli.horizon.or(file.horizon);
    if horizon == Some(0) {
        return Err(Failure::Config("horizon must be >= 1".to_string()));
    }

    let vector_norm = match cli.norm.as_deref() {
        Some("sup") => VectorNorm::Sup,
        Some("euclidean") => VectorNorm::Euclidean,
        Some(other) => return Err(Failure::Config(format!("unknown norm `{other}`"))),
        None => file.vector_norm.unwrap_or_default(),
    };

    let alpha_grid = cli.alpha_grid.clone().or(file.alpha_grid).unwrap_or_default();
    if alpha_grid.iter().any(|a| !a.is_finite()) {
        return Err(Failure::Config("alpha grid entries must be finite".to_string()));
    }

    let probes = cli.probes.or(file.probes).unwrap_or(DEFAULT_PROBES);
    if probes == 0 {
        return Err(Failure::Config("probes must be >= 1".to_string()));
    }

    let seed = cli.seed.or(file.seed).unwrap_or(DEFAULT_SEED);

    let delta = cli.delta.or(file.delta).unwrap_or(DEFAULT_DELTA);
    if !(delta.is_finite() && delta > 0.0 && delta < 1.0) {
        return Err(Failure::Config("delta must lie strictly between 0 and 1".to_string()));
    }

    let k_max = cli.k_max.or(file.k_max).unwrap_or(DEFAULT_K_MAX);
    if k_max == 0 {
        return Err(Failure::Config("k-max must be >= 1".to_string()));
    }

    let output_path = cli.output.clone().or(file.output_path);

    let format = match cli.format.as_deref() {
        Some("records") => OutputFormat::Records,
        Some("table") => OutputFormat::Table,
        Some(other) => return Err(Failure::Config(format!("unknown format `{other}`"))),
        None => file.output_format.unwrap_or_default(),
    };

    Ok(Resolved {
        family,
        horizon,
        vector_norm,
        alpha_grid,
        probes,
        seed,
        delta,
        k_max,
        output_path,
        format,
    })
}
