//! Variational ground states and equation-of-motion excitations.

mod ground;
mod optimizer;
mod qeom;

pub use ground::{derive_seed, vqe_minimize, Ansatz, UccAnsatz, VqeConfig, VqeResult};
pub use optimizer::{minimize, OptimizeResult, OptimizerConfig};
pub use qeom::{qeom_excitations, QeomResult, METRIC_FLOOR};
