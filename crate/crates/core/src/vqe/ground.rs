use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::optimizer::{minimize, OptimizerConfig};
use crate::encodings::Codebook;
use crate::error::{Error, Result};
use crate::modal::Bitstring;
use crate::pauli::PauliSum;
use crate::sim::{default_backend, Backend, NoiseParams, QuantumState, Shots};
use crate::ucc::{cluster_to_pauli, peephole_optimize, trotterize, Circuit, ClusterOperator};

/// Parametrized state preparation.
pub trait Ansatz: Send + Sync {
    fn num_parameters(&self) -> usize;
    fn width(&self) -> usize;
    fn initial_state(&self) -> Bitstring;
    /// Bound circuit for the given amplitudes.
    fn circuit(&self, amplitudes: &[f64]) -> Result<Circuit>;
}

/// Single-step Trotterized UCC on an encoded reference.
#[derive(Debug, Clone)]
pub struct UccAnsatz {
    cluster: ClusterOperator,
    initial: Bitstring,
    template: Circuit,
    preserving: bool,
}

impl UccAnsatz {
    pub fn new(cluster: &ClusterOperator, codebook: &Codebook) -> Result<Self> {
        let generator = cluster_to_pauli(cluster, codebook)?;
        let template = peephole_optimize(&trotterize(&generator)?);
        Ok(Self {
            cluster: cluster.clone(),
            initial: codebook.encode(cluster.reference())?,
            template,
            preserving: generator.preserves_subspace(&codebook.encoded_basis()),
        })
    }

    pub fn cluster(&self) -> &ClusterOperator {
        &self.cluster
    }

    /// The circuit keeps every amplitude on encoded codewords. Product-form
    /// ladders on partially filled compact registers can leak.
    pub fn is_subspace_preserving(&self) -> bool {
        self.preserving
    }

    /// Parametric circuit before binding.
    pub fn template(&self) -> &Circuit {
        &self.template
    }
}

impl Ansatz for UccAnsatz {
    fn num_parameters(&self) -> usize {
        self.cluster.len()
    }

    fn width(&self) -> usize {
        self.template.width()
    }

    fn initial_state(&self) -> Bitstring {
        self.initial
    }

    fn circuit(&self, amplitudes: &[f64]) -> Result<Circuit> {
        if amplitudes.len() != self.num_parameters() {
            return Err(Error::LengthMismatch {
                left: amplitudes.len(),
                right: self.num_parameters(),
            });
        }
        self.template.bind(amplitudes)
    }
}

/// Independent sub-seed `stream` of `seed`.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.next_u64()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VqeConfig {
    pub noise: NoiseParams,
    pub shots: Shots,
    pub optimizer: OptimizerConfig,
}

impl Default for VqeConfig {
    fn default() -> Self {
        Self {
            noise: NoiseParams::noiseless(),
            shots: Shots::Exact,
            optimizer: OptimizerConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VqeResult {
    /// Energy at the returned amplitudes (cm⁻¹). With finite shots this is
    /// a fresh measurement, not the optimizer's best sample.
    pub energy: f64,
    pub best_evaluated: f64,
    pub amplitudes: Vec<f64>,
    pub evaluations: usize,
    pub converged: bool,
    pub seed: u64,
    pub noise: NoiseParams,
    pub shots: Shots,
    #[serde(skip)]
    pub history: Vec<f64>,
}

pub(crate) struct Evaluator<'a> {
    pub ansatz: &'a dyn Ansatz,
    pub backend: Box<dyn Backend>,
    pub noise: NoiseParams,
}

impl Evaluator<'_> {
    pub fn state(&self, amplitudes: &[f64], seed: u64) -> Result<Box<dyn QuantumState>> {
        let c = self.ansatz.circuit(amplitudes)?;
        self.backend.prepare(&c, &self.ansatz.initial_state(), &self.noise, seed)
    }
}

/// Minimize `⟨H⟩` over the ansatz from zero amplitudes.
pub fn vqe_minimize(h: &PauliSum, ansatz: &dyn Ansatz, config: &VqeConfig, seed: u64) -> Result<VqeResult> {
    if h.width() != ansatz.width() {
        return Err(Error::LengthMismatch {
            left: h.width(),
            right: ansatz.width(),
        });
    }
    let scale = h.terms().map(|(_, c)| c.norm()).fold(1.0, f64::max);
    if !h.is_hermitian(1e-10 * scale) {
        return Err(Error::NotHermitian);
    }
    let eval = Evaluator {
        ansatz,
        backend: default_backend(ansatz.width(), &config.noise),
        noise: config.noise,
    };
    let mut history = Vec::new();
    let mut failure = None;
    let objective = |x: &[f64]| {
        let k = history.len() as u64;
        let sub = derive_seed(seed, k);
        let e = eval
            .state(x, sub)
            .and_then(|s| config.shots.measure(s.as_ref(), h, sub));
        match e {
            Ok(v) => {
                history.push(v);
                v
            }
            Err(err) => {
                failure.get_or_insert(err);
                history.push(f64::INFINITY);
                f64::INFINITY
            }
        }
    };
    let x0 = vec![0.0; ansatz.num_parameters()];
    let r = minimize(objective, &x0, &config.optimizer);
    if let Some(err) = failure {
        return Err(err);
    }
    let energy = match config.shots {
        Shots::Exact => r.fx,
        Shots::Count(_) => {
            let sub = derive_seed(seed, u64::MAX);
            let state = eval.state(&r.x, sub)?;
            config.shots.measure(state.as_ref(), h, sub)?
        }
    };
    Ok(VqeResult {
        energy,
        best_evaluated: r.fx,
        amplitudes: r.x,
        evaluations: r.evaluations,
        converged: r.converged,
        seed,
        noise: config.noise,
        shots: config.shots,
        history,
    })
}
