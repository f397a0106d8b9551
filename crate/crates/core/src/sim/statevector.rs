use num_complex::Complex64;

use super::{gate_matrix, Mat2, QuantumState};
use crate::error::{Error, Result};
use crate::modal::Bitstring;
use crate::pauli::PauliString;
use crate::ucc::{Circuit, Gate};

pub const MAX_STATEVECTOR_WIDTH: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    width: usize,
    amplitudes: Vec<Complex64>,
}

impl Statevector {
    pub fn basis(state: &Bitstring) -> Result<Self> {
        let width = state.width();
        if width > MAX_STATEVECTOR_WIDTH {
            return Err(Error::WidthCap {
                width,
                cap: MAX_STATEVECTOR_WIDTH,
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << width];
        amplitudes[state.as_u64() as usize] = Complex64::new(1.0, 0.0);
        Ok(Self { width, amplitudes })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &Statevector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Largest componentwise difference.
    pub fn distance(&self, other: &Statevector) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn probability(&self, basis: u64) -> f64 {
        self.amplitudes[basis as usize].norm_sqr()
    }

    pub(crate) fn apply_single(&mut self, q: usize, u: &Mat2) {
        let bit = 1usize << q;
        for i in 0..self.amplitudes.len() {
            if i & bit == 0 {
                let (a, b) = (self.amplitudes[i], self.amplitudes[i | bit]);
                self.amplitudes[i] = u[0][0] * a + u[0][1] * b;
                self.amplitudes[i | bit] = u[1][0] * a + u[1][1] * b;
            }
        }
    }

    pub(crate) fn apply_cnot(&mut self, control: usize, target: usize) {
        let (c, t) = (1usize << control, 1usize << target);
        for i in 0..self.amplitudes.len() {
            if i & c != 0 && i & t == 0 {
                self.amplitudes.swap(i, i | t);
            }
        }
    }

    pub(crate) fn apply_pauli(&mut self, p: &PauliString) {
        let mut out = vec![Complex64::new(0.0, 0.0); self.amplitudes.len()];
        for (b, a) in self.amplitudes.iter().enumerate() {
            let (phase, to) = p.apply(b as u64);
            out[to as usize] = phase * a;
        }
        self.amplitudes = out;
    }

    pub(crate) fn apply_gate(&mut self, g: &Gate) -> Result<()> {
        match g {
            Gate::Cnot { control, target } => self.apply_cnot(*control, *target),
            _ => self.apply_single(g.qubits().0, &gate_matrix(g)?),
        }
        Ok(())
    }
}

impl QuantumState for Statevector {
    fn width(&self) -> usize {
        self.width
    }

    fn pauli_expectation(&self, p: &PauliString) -> Complex64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(b, a)| {
                let (phase, to) = p.apply(b as u64);
                self.amplitudes[to as usize].conj() * phase * a
            })
            .sum()
    }

    fn trace(&self) -> f64 {
        self.norm().powi(2)
    }
}

/// Exact gate-by-gate evolution of a bound circuit.
pub fn run_statevector(c: &Circuit, initial: &Bitstring) -> Result<Statevector> {
    if initial.width() != c.width() {
        return Err(Error::LengthMismatch {
            left: initial.width(),
            right: c.width(),
        });
    }
    let mut psi = Statevector::basis(initial)?;
    for g in c.gates() {
        psi.apply_gate(g)?;
    }
    Ok(psi)
}
