use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rotation angle as an affine form in the circuit parameters,
/// `constant + Σ scale_k · θ_{index_k}`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Angle {
    constant: f64,
    terms: Vec<(usize, f64)>,
}

impl Angle {
    pub fn constant(v: f64) -> Self {
        Self {
            constant: v,
            terms: Vec::new(),
        }
    }

    pub fn param(index: usize, scale: f64) -> Self {
        Self {
            constant: 0.0,
            terms: vec![(index, scale)],
        }
    }

    pub fn is_bound(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_part(&self) -> f64 {
        self.constant
    }

    pub fn terms(&self) -> &[(usize, f64)] {
        &self.terms
    }

    /// Identically zero for every parameter value.
    pub fn is_zero(&self) -> bool {
        self.constant.abs() < 1e-15 && self.terms.is_empty()
    }

    pub fn neg(&self) -> Angle {
        Angle {
            constant: -self.constant,
            terms: self.terms.iter().map(|&(i, s)| (i, -s)).collect(),
        }
    }

    pub fn add(&self, other: &Angle) -> Angle {
        let mut terms = self.terms.clone();
        for &(i, s) in &other.terms {
            match terms.iter_mut().find(|(j, _)| *j == i) {
                Some(t) => t.1 += s,
                None => terms.push((i, s)),
            }
        }
        terms.retain(|(_, s)| s.abs() > 1e-15);
        terms.sort_by_key(|t| t.0);
        Angle {
            constant: self.constant + other.constant,
            terms,
        }
    }

    pub fn evaluate(&self, params: &[f64]) -> Result<f64> {
        let mut v = self.constant;
        for &(i, s) in &self.terms {
            let p = params.get(i).ok_or(Error::IndexOutOfRange {
                index: i,
                width: params.len(),
            })?;
            v += s * p;
        }
        Ok(v)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "{:?}", self.constant);
        }
        let mut first = true;
        if self.constant != 0.0 {
            write!(f, "{:?}", self.constant)?;
            first = false;
        }
        for &(i, s) in &self.terms {
            if !first && s >= 0.0 {
                f.write_str("+")?;
            }
            write!(f, "{s:?}*t{i}")?;
            first = false;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    H(usize),
    S(usize),
    Sdg(usize),
    /// `exp(-i θ Z / 2)`
    Rz(usize, Angle),
    /// `exp(-i θ X / 2)`
    Rx(usize, Angle),
    Cnot { control: usize, target: usize },
}

impl Gate {
    pub fn cnot(control: usize, target: usize) -> Self {
        Gate::Cnot { control, target }
    }

    pub fn qubits(&self) -> (usize, Option<usize>) {
        match self {
            Gate::H(q) | Gate::S(q) | Gate::Sdg(q) | Gate::Rz(q, _) | Gate::Rx(q, _) => (*q, None),
            Gate::Cnot { control, target } => (*control, Some(*target)),
        }
    }

    pub fn touches(&self, q: usize) -> bool {
        let (a, b) = self.qubits();
        a == q || b == Some(q)
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cnot { .. })
    }

    /// Diagonal in the computational basis.
    pub(crate) fn is_z_type(&self) -> bool {
        matches!(self, Gate::S(_) | Gate::Sdg(_) | Gate::Rz(..))
    }

    fn mnemonic(&self) -> &'static str {
        match self {
            Gate::H(_) => "H",
            Gate::S(_) => "S",
            Gate::Sdg(_) => "SDG",
            Gate::Rz(..) => "RZ",
            Gate::Rx(..) => "RX",
            Gate::Cnot { .. } => "CNOT",
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::H(q) | Gate::S(q) | Gate::Sdg(q) => write!(f, "{} {q}", self.mnemonic()),
            Gate::Rz(q, a) | Gate::Rx(q, a) => write!(f, "{} {q},{a}", self.mnemonic()),
            Gate::Cnot { control, target } => write!(f, "CNOT {control},{target}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GateCounts {
    pub cnot: usize,
    pub one_qubit: usize,
}

/// Ordered gate list over `width` qubits plus a table naming its parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
    parameters: Vec<String>,
}

impl Circuit {
    pub fn new(width: usize) -> Self {
        Self {
            width,
            gates: Vec::new(),
            parameters: Vec::new(),
        }
    }

    pub fn with_parameters(width: usize, parameters: Vec<String>) -> Self {
        Self {
            width,
            gates: Vec::new(),
            parameters,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Parameter names, indexed like [`Angle`] terms.
    pub fn parameters(&self) -> &[String] {
        &self.parameters
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let (a, b) = gate.qubits();
        for q in std::iter::once(a).chain(b) {
            if q >= self.width {
                return Err(Error::IndexOutOfRange {
                    index: q,
                    width: self.width,
                });
            }
        }
        if b == Some(a) {
            return Err(Error::InvalidSystem("CNOT control equals target".into()));
        }
        self.gates.push(gate);
        Ok(())
    }

    pub(crate) fn from_gates(width: usize, gates: Vec<Gate>, parameters: Vec<String>) -> Self {
        Self {
            width,
            gates,
            parameters,
        }
    }

    pub fn is_bound(&self) -> bool {
        self.gates.iter().all(|g| match g {
            Gate::Rz(_, a) | Gate::Rx(_, a) => a.is_bound(),
            _ => true,
        })
    }

    /// Substitute parameter values, leaving only constant angles.
    pub fn bind(&self, params: &[f64]) -> Result<Circuit> {
        let gates = self
            .gates
            .iter()
            .map(|g| {
                Ok(match g {
                    Gate::Rz(q, a) => Gate::Rz(*q, Angle::constant(a.evaluate(params)?)),
                    Gate::Rx(q, a) => Gate::Rx(*q, Angle::constant(a.evaluate(params)?)),
                    other => other.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Circuit::from_gates(self.width, gates, Vec::new()))
    }

    /// One `GATE q[,q2][,angle]` line per gate.
    pub fn to_text(&self) -> String {
        self.gates.iter().map(|g| format!("{g}\n")).collect()
    }
}

pub fn count_gates(c: &Circuit) -> GateCounts {
    let cnot = c.gates().iter().filter(|g| g.is_two_qubit()).count();
    GateCounts {
        cnot,
        one_qubit: c.len() - cnot,
    }
}
