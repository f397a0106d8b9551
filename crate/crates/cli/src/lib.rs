//! Batch studies on top of `boson-encode`: encoding comparisons, seeded
//! VQE samples and QEOM excited states, written as CSV, JSON and SVG.

pub mod args;
pub mod compare;
pub mod config;
pub mod report;
pub mod sampling;
pub mod study;

pub use args::Args;
pub use compare::{cmd_compare, compare_rows, CompareRow};
pub use config::{Command, RunConfig, SystemSource};
pub use sampling::{cmd_qeom, cmd_vqe, run_qeom, run_vqe, sample_seed, QeomRun, QeomSample, VqeRun, VqeSample};
pub use study::{worker_pool, Study};

/// Run the configured command and write its outputs.
pub fn run(config: &RunConfig) -> anyhow::Result<()> {
    config.validate()?;
    match config.command {
        Command::Compare => cmd_compare(config).map(|_| ()),
        Command::Vqe => cmd_vqe(config).map(|_| ()),
        Command::Qeom => cmd_qeom(config).map(|_| ()),
    }
}
