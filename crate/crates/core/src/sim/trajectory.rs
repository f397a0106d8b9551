use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::statevector::{Statevector, MAX_STATEVECTOR_WIDTH};
use super::{NoiseParams, QuantumState};
use crate::error::{Error, Result};
use crate::modal::Bitstring;
use crate::pauli::{Pauli, PauliString};
use crate::ucc::{Circuit, Gate};

const PAULIS: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

/// Equal-weight mixture of sampled pure states.
#[derive(Debug, Clone)]
pub struct TrajectoryEnsemble {
    width: usize,
    states: Vec<Statevector>,
}

impl TrajectoryEnsemble {
    pub fn states(&self) -> &[Statevector] {
        &self.states
    }
}

impl QuantumState for TrajectoryEnsemble {
    fn width(&self) -> usize {
        self.width
    }

    fn pauli_expectation(&self, p: &PauliString) -> Complex64 {
        let sum: Complex64 = self.states.iter().map(|s| s.pauli_expectation(p)).sum();
        sum / self.states.len() as f64
    }

    fn trace(&self) -> f64 {
        self.states.iter().map(|s| s.trace()).sum::<f64>() / self.states.len() as f64
    }
}

fn random_error(rng: &mut ChaCha8Rng, width: usize, qubits: &[usize]) -> Result<Option<PauliString>> {
    let mut p = PauliString::identity(width);
    for &q in qubits {
        p.set(q, PAULIS[rng.random_range(0..4)])?;
    }
    Ok((!p.is_identity()).then_some(p))
}

/// Depolarizing channels unravelled as random Pauli insertions: with
/// probability `λ` a uniformly drawn Pauli (identity included) hits the
/// gate's qubits. Trajectory `k` draws from stream `k` of `seed`.
pub fn run_trajectories(
    c: &Circuit,
    initial: &Bitstring,
    noise: &NoiseParams,
    trajectories: usize,
    seed: u64,
) -> Result<TrajectoryEnsemble> {
    if initial.width() != c.width() {
        return Err(Error::LengthMismatch {
            left: initial.width(),
            right: c.width(),
        });
    }
    if c.width() > MAX_STATEVECTOR_WIDTH {
        return Err(Error::WidthCap {
            width: c.width(),
            cap: MAX_STATEVECTOR_WIDTH,
        });
    }
    let trajectories = trajectories.max(1);
    let mut states = Vec::with_capacity(trajectories);
    for k in 0..trajectories {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        let mut psi = Statevector::basis(initial)?;
        for g in c.gates() {
            psi.apply_gate(g)?;
            let (p, qubits) = match g {
                Gate::Cnot { control, target } => (noise.p2(), vec![*control, *target]),
                _ => (noise.p1(), vec![g.qubits().0]),
            };
            if p > 0.0 && rng.random::<f64>() < p {
                if let Some(e) = random_error(&mut rng, c.width(), &qubits)? {
                    psi.apply_pauli(&e);
                }
            }
        }
        states.push(psi);
    }
    Ok(TrajectoryEnsemble {
        width: c.width(),
        states,
    })
}
