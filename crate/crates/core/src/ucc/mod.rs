//! Bosonic UCCSD cluster operators, their Pauli generators and circuits.

mod circuit;
mod peephole;
mod trotter;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use circuit::{count_gates, Angle, Circuit, Gate, GateCounts};
pub use peephole::peephole_optimize;
pub use trotter::{trotterize, trotterize_steps};

use crate::encodings::Codebook;
use crate::error::{Error, Result};
use crate::modal::{Configuration, SystemSpec};
use crate::pauli::{ladder_to_pauli_with, LadderForm, PauliString, PauliSum};

/// One excitation out of the reference configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Excitation {
    Single { mode: usize, target: usize },
    Double { modes: (usize, usize), targets: (usize, usize) },
}

impl Excitation {
    pub fn is_single(&self) -> bool {
        matches!(self, Excitation::Single { .. })
    }
}

impl fmt::Display for Excitation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Excitation::Single { mode, target } => write!(f, "t[{mode}:{target}]"),
            Excitation::Double { modes, targets } => {
                write!(f, "t[{},{}:{},{}]", modes.0, modes.1, targets.0, targets.1)
            }
        }
    }
}

/// UCCSD excitation set; amplitude `k` belongs to `excitations()[k]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterOperator {
    system: SystemSpec,
    reference: Configuration,
    excitations: Vec<Excitation>,
}

/// All singles then all doubles out of `reference`, modes ascending.
pub fn build_uccsd(system: &SystemSpec, reference: &Configuration) -> ClusterOperator {
    let dims = system.modal_dims();
    let mut excitations = Vec::new();
    for (l, &n) in dims.iter().enumerate() {
        for r in (0..n).filter(|&r| r != reference.modal(l)) {
            excitations.push(Excitation::Single { mode: l, target: r });
        }
    }
    for l in 0..dims.len() {
        for m in l + 1..dims.len() {
            for r in (0..dims[l]).filter(|&r| r != reference.modal(l)) {
                for p in (0..dims[m]).filter(|&p| p != reference.modal(m)) {
                    excitations.push(Excitation::Double {
                        modes: (l, m),
                        targets: (r, p),
                    });
                }
            }
        }
    }
    ClusterOperator {
        system: system.clone(),
        reference: reference.clone(),
        excitations,
    }
}

impl ClusterOperator {
    pub fn system(&self) -> &SystemSpec {
        &self.system
    }

    pub fn reference(&self) -> &Configuration {
        &self.reference
    }

    pub fn excitations(&self) -> &[Excitation] {
        &self.excitations
    }

    pub fn len(&self) -> usize {
        self.excitations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.excitations.is_empty()
    }

    pub fn singles(&self) -> usize {
        self.excitations.iter().filter(|e| e.is_single()).count()
    }

    pub fn doubles(&self) -> usize {
        self.len() - self.singles()
    }

    pub fn labels(&self) -> Vec<String> {
        self.excitations.iter().map(|e| e.to_string()).collect()
    }

    /// Excitation operator `E` (without its adjoint) on the full register.
    pub fn excitation_operator(&self, index: usize, codebook: &Codebook, form: LadderForm) -> Result<PauliSum> {
        let ex = self.excitations.get(index).ok_or(Error::IndexOutOfRange {
            index,
            width: self.len(),
        })?;
        excitation_operator(ex, &self.reference, codebook, form)
    }
}

pub(crate) fn excitation_operator(
    ex: &Excitation,
    reference: &Configuration,
    codebook: &Codebook,
    form: LadderForm,
) -> Result<PauliSum> {
    match *ex {
        Excitation::Single { mode, target } => {
            ladder_to_pauli_with(codebook, mode, target, reference.modal(mode), form)
        }
        Excitation::Double { modes, targets } => {
            let a = ladder_to_pauli_with(codebook, modes.0, targets.0, reference.modal(modes.0), form)?;
            let b = ladder_to_pauli_with(codebook, modes.1, targets.1, reference.modal(modes.1), form)?;
            a.multiply(&b)
        }
    }
}

/// Anti-hermitian generator term `i · coeff · P`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorTerm {
    pub pauli: PauliString,
    pub coeff: f64,
}

/// Terms scaled by a single amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorBlock {
    pub param: usize,
    pub terms: Vec<GeneratorTerm>,
}

/// `Σ_k θ_k G_k` with every `G_k` anti-hermitian, kept per amplitude so
/// that circuits stay parametric.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    width: usize,
    blocks: Vec<GeneratorBlock>,
    parameters: Vec<String>,
}

impl Generator {
    /// Split an anti-hermitian sum into `i·a·P` terms under one parameter.
    pub fn from_pauli_sum(sum: &PauliSum) -> Result<Self> {
        let block = anti_hermitian_block(0, sum)?;
        Ok(Generator {
            width: sum.width(),
            blocks: vec![block],
            parameters: vec!["t0".into()],
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn blocks(&self) -> &[GeneratorBlock] {
        &self.blocks
    }

    pub fn parameters(&self) -> &[String] {
        &self.parameters
    }

    pub fn term_count(&self) -> usize {
        self.blocks.iter().map(|b| b.terms.len()).sum()
    }

    pub fn terms(&self) -> impl Iterator<Item = &GeneratorTerm> {
        self.blocks.iter().flat_map(|b| b.terms.iter())
    }

    /// Every block maps the span of `basis` into itself, so the circuit
    /// never leaves the encoded subspace.
    pub fn preserves_subspace(&self, basis: &[u64]) -> bool {
        let inside: std::collections::BTreeSet<u64> = basis.iter().copied().collect();
        self.blocks.iter().all(|b| {
            basis.iter().all(|&c| {
                let mut image: std::collections::BTreeMap<u64, num_complex::Complex64> = Default::default();
                for t in &b.terms {
                    let (phase, to) = t.pauli.apply(c);
                    *image.entry(to).or_default() += phase * t.coeff;
                }
                image.iter().all(|(to, a)| inside.contains(to) || a.norm() < 1e-12)
            })
        })
    }

    /// Concrete generator for the given amplitudes.
    pub fn to_pauli_sum(&self, amplitudes: &[f64]) -> Result<PauliSum> {
        if amplitudes.len() != self.parameters.len() {
            return Err(Error::LengthMismatch {
                left: amplitudes.len(),
                right: self.parameters.len(),
            });
        }
        let mut out = PauliSum::zero(self.width);
        for b in &self.blocks {
            for t in &b.terms {
                out.add_term(
                    t.pauli,
                    num_complex::Complex64::new(0.0, t.coeff * amplitudes[b.param]),
                );
            }
        }
        out.simplify();
        Ok(out)
    }
}

fn anti_hermitian_block(param: usize, sum: &PauliSum) -> Result<GeneratorBlock> {
    let scale = sum.terms().map(|(_, c)| c.norm()).fold(1.0, f64::max);
    let mut terms = Vec::with_capacity(sum.len());
    for (p, c) in sum.terms() {
        if c.re.abs() > 1e-10 * scale {
            return Err(Error::NotAntiHermitian);
        }
        if c.im != 0.0 {
            terms.push(GeneratorTerm {
                pauli: *p,
                coeff: c.im,
            });
        }
    }
    Ok(GeneratorBlock { param, terms })
}

/// `Σ_k t_k (E_k − E_k†)` with product-form ladders.
pub fn cluster_to_pauli(t: &ClusterOperator, codebook: &Codebook) -> Result<Generator> {
    cluster_to_pauli_with(t, codebook, LadderForm::Product)
}

pub fn cluster_to_pauli_with(t: &ClusterOperator, codebook: &Codebook, form: LadderForm) -> Result<Generator> {
    if codebook.system() != t.system() {
        return Err(Error::LengthMismatch {
            left: codebook.modes(),
            right: t.system().modes(),
        });
    }
    let mut blocks = Vec::with_capacity(t.len());
    for (k, ex) in t.excitations().iter().enumerate() {
        let e = excitation_operator(ex, t.reference(), codebook, form)?;
        let g = e.sub(&e.adjoint())?;
        blocks.push(anti_hermitian_block(k, &g)?);
    }
    Ok(Generator {
        width: codebook.total_width(),
        blocks,
        parameters: t.labels(),
    })
}
