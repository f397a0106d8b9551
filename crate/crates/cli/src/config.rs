use std::path::PathBuf;

use anyhow::{bail, ensure, Context, Result};
use boson_encode::encodings::EncodingKind;
use boson_encode::fixtures;
use boson_encode::hamiltonian::QuarticForceField;
use boson_encode::modal::SystemSpec;
use boson_encode::sim::{NoiseParams, Shots};
use boson_encode::vqe::{OptimizerConfig, VqeConfig};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Shots used for noisy runs when none are requested.
pub const DEFAULT_NOISY_SHOTS: u64 = 8192;

/// Final trust radius for runs with finite shots.
pub const SHOT_NOISE_RHO_END: f64 = 1e-3;

pub const DEFAULT_BINS: usize = 35;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Gate counts and Hamming distances across encodings.
    Compare,
    /// Seeded VQE ground-state samples.
    Vqe,
    /// VQE followed by QEOM excited states, per sample.
    Qeom,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Compare => "compare",
            Command::Vqe => "vqe",
            Command::Qeom => "qeom",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "source")]
pub enum SystemSource {
    Fixture { name: String },
    Qff { path: PathBuf },
    /// Uncoupled modes, only used for the combinatorial comparison.
    Shape { modes: usize },
}

/// Everything that determines a run's output. `out` only says where the
/// files go and is left out of the hash.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub encodings: Vec<EncodingKind>,
    pub gsep: bool,
    pub system: SystemSource,
    pub modal_dims: Vec<usize>,
    pub noise: NoiseParams,
    pub samples: usize,
    pub shots: Shots,
    pub seed: u64,
    pub bins: usize,
    pub optimizer: OptimizerConfig,
    pub excited_states: usize,
    #[serde(skip)]
    pub out: PathBuf,
}

impl RunConfig {
    /// Defaults for `command` on the bundled 4-mode fixture.
    pub fn new(command: Command) -> Self {
        let fixture = fixtures::CO2_LIKE;
        let (encodings, system, modal_dims) = match command {
            Command::Compare => (
                vec![
                    EncodingKind::Direct,
                    EncodingKind::StandardBinary,
                    EncodingKind::GrayCode,
                    EncodingKind::cea(),
                ],
                SystemSource::Shape { modes: 2 },
                (2..=16).collect(),
            ),
            _ => (
                vec![EncodingKind::cea()],
                SystemSource::Fixture {
                    name: fixture.name.into(),
                },
                vec![fixture.modal_dim],
            ),
        };
        Self {
            command,
            encodings,
            gsep: true,
            system,
            modal_dims,
            noise: NoiseParams::noiseless(),
            samples: 1,
            shots: Shots::Exact,
            seed: 0,
            bins: DEFAULT_BINS,
            optimizer: OptimizerConfig::default(),
            excited_states: 3,
            out: PathBuf::from("out"),
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(self.samples >= 1, "samples must be at least 1");
        ensure!(self.bins >= 1, "bins must be at least 1");
        ensure!(!self.encodings.is_empty(), "no encodings selected");
        ensure!(!self.modal_dims.is_empty(), "no modal dimensions selected");
        ensure!(self.modal_dims.iter().all(|&n| n >= 1), "modal dimensions must be positive");
        match &self.system {
            SystemSource::Qff { path } => {
                ensure!(path.exists(), "force field {} does not exist", path.display())
            }
            SystemSource::Fixture { name } => {
                fixtures::by_name(name)?;
            }
            SystemSource::Shape { modes } => {
                ensure!(*modes >= 1, "modes must be at least 1");
                if self.command != Command::Compare {
                    bail!("{} needs a force field (--qff or --fixture)", self.command.name());
                }
            }
        }
        if self.command != Command::Compare {
            ensure!(self.modal_dims.len() == 1, "{} takes a single modal dimension", self.command.name());
        }
        Ok(())
    }

    /// First 16 hex digits of the SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        hex::encode(&Sha256::digest(json.as_bytes())[..8])
    }

    /// Comment line leading every output file.
    pub fn header_line(&self) -> String {
        format!(
            "# boson-encode schema=v1 command={} config={} seed={}",
            self.command.name(),
            self.hash(),
            self.seed
        )
    }

    pub fn force_field(&self) -> Result<QuarticForceField> {
        match &self.system {
            SystemSource::Fixture { name } => Ok(fixtures::by_name(name)?.qff()),
            SystemSource::Qff { path } => QuarticForceField::from_file(path)
                .with_context(|| format!("reading {}", path.display())),
            SystemSource::Shape { .. } => bail!("no force field for a bare system shape"),
        }
    }

    pub fn modes(&self) -> Result<usize> {
        match &self.system {
            SystemSource::Shape { modes } => Ok(*modes),
            _ => Ok(self.force_field()?.modes()),
        }
    }

    /// Uniform system for one entry of `modal_dims`.
    pub fn system(&self, modal_dim: usize) -> Result<SystemSpec> {
        Ok(SystemSpec::uniform(self.modes()?, modal_dim)?)
    }

    pub fn vqe_config(&self) -> VqeConfig {
        VqeConfig {
            noise: self.noise,
            shots: self.shots,
            optimizer: self.optimizer,
        }
    }
}
