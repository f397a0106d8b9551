use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use boson_encode::encodings::EncodingKind;
use boson_encode::sim::{NoiseParams, Shots};
use clap::Parser;

use crate::config::{Command, RunConfig, SystemSource, DEFAULT_BINS, DEFAULT_NOISY_SHOTS, SHOT_NOISE_RHO_END};

#[derive(Debug, Parser)]
#[command(name = "boson-encode", version, about = "Bosonic qubit encodings, UCC circuits and noisy VQE/QEOM studies")]
pub struct Args {
    pub command: Command,

    /// Encodings to run, comma separated.
    #[arg(long, value_delimiter = ',', value_parser = ["dm", "sb", "gc", "cea"])]
    pub encoding: Vec<String>,

    /// Hamming-weight cap for `cea`.
    #[arg(long, default_value_t = 2)]
    pub cea_threshold: usize,

    /// Put each mode's reference modal on the all-zero codeword (default).
    #[arg(long, overrides_with = "no_gsep")]
    pub gsep: bool,

    #[arg(long, overrides_with = "gsep")]
    pub no_gsep: bool,

    /// Bundled force field to use.
    #[arg(long, conflicts_with = "qff")]
    pub fixture: Option<String>,

    /// Force field JSON file.
    #[arg(long, value_name = "FILE")]
    pub qff: Option<PathBuf>,

    /// Number of modes for `compare`.
    #[arg(long)]
    pub modes: Option<usize>,

    /// Modals per mode. For `compare` this replaces the sweep.
    #[arg(long)]
    pub modal_dim: Option<usize>,

    /// Modal sweep for `compare`, as `A..B` (inclusive).
    #[arg(long, default_value = "2..16")]
    pub modal_range: String,

    #[arg(long, default_value_t = 0.0)]
    pub p1: f64,

    #[arg(long, default_value_t = 0.0)]
    pub p2: f64,

    #[arg(long, default_value_t = 1)]
    pub samples: usize,

    /// `exact` or a shot count; noisy runs default to 8192.
    #[arg(long)]
    pub shots: Option<Shots>,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Histogram bins.
    #[arg(long, default_value_t = DEFAULT_BINS)]
    pub bins: usize,

    /// Final optimizer trust radius; 1e-6 for exact expectations, 1e-3 with shots.
    #[arg(long)]
    pub rho_end: Option<f64>,

    #[arg(long)]
    pub max_evaluations: Option<usize>,

    /// Excited states reported by `qeom`.
    #[arg(long, default_value_t = 3)]
    pub states: usize,

    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

fn parse_range(s: &str) -> Result<Vec<usize>> {
    let (a, b) = s
        .split_once("..")
        .with_context(|| format!("modal range `{s}` is not of the form A..B"))?;
    let (a, b): (usize, usize) = (a.trim().parse()?, b.trim().parse()?);
    if a > b {
        bail!("modal range `{s}` is empty");
    }
    Ok((a..=b).collect())
}

impl Args {
    pub fn into_config(self) -> Result<RunConfig> {
        let mut config = RunConfig::new(self.command);
        if !self.encoding.is_empty() {
            config.encodings = self
                .encoding
                .iter()
                .map(|name| match name.as_str() {
                    "cea" => Ok(EncodingKind::Cea {
                        threshold: self.cea_threshold,
                    }),
                    other => other.parse().map_err(anyhow::Error::from),
                })
                .collect::<Result<_>>()?;
        } else if let Some(t) = config.encodings.iter_mut().find_map(|k| match k {
            EncodingKind::Cea { threshold } => Some(threshold),
            _ => None,
        }) {
            *t = self.cea_threshold;
        }
        config.gsep = !self.no_gsep;

        if let Some(path) = self.qff {
            config.system = SystemSource::Qff { path };
        } else if let Some(name) = self.fixture {
            let f = boson_encode::fixtures::by_name(&name)?;
            config.system = SystemSource::Fixture { name };
            config.modal_dims = vec![f.modal_dim];
        } else if self.command == Command::Compare {
            config.system = SystemSource::Shape {
                modes: self.modes.unwrap_or(2),
            };
        }
        if self.command == Command::Compare {
            config.modal_dims = match self.modal_dim {
                Some(n) => vec![n],
                None => parse_range(&self.modal_range)?,
            };
        } else if let Some(n) = self.modal_dim {
            config.modal_dims = vec![n];
        } else if matches!(config.system, SystemSource::Qff { .. }) {
            bail!("--modal-dim is required with --qff");
        }
        if let (Some(m), false) = (self.modes, matches!(config.system, SystemSource::Shape { .. })) {
            let found = config.modes()?;
            if m != found {
                bail!("--modes {m} does not match the force field's {found} modes");
            }
        }

        config.noise = NoiseParams::new(self.p1, self.p2)?;
        config.shots = match self.shots {
            Some(s) => s,
            None if config.noise.is_noiseless() => Shots::Exact,
            None => Shots::Count(DEFAULT_NOISY_SHOTS),
        };
        config.optimizer.rho_end = match (self.rho_end, config.shots) {
            (Some(r), _) => r,
            (None, Shots::Count(_)) => SHOT_NOISE_RHO_END,
            (None, Shots::Exact) => config.optimizer.rho_end,
        };
        if let Some(n) = self.max_evaluations {
            config.optimizer.max_evaluations = n;
        }
        config.samples = self.samples;
        config.seed = self.seed;
        config.bins = self.bins;
        config.excited_states = self.states;
        config.out = self.out;
        config.validate()?;
        Ok(config)
    }
}
