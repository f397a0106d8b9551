use std::f64::consts::FRAC_PI_2;

use super::circuit::{Angle, Circuit, Gate};
use super::{Generator, GeneratorTerm};
use crate::error::Result;
use crate::pauli::Pauli;

/// Single-step Trotter circuit of `exp(Σ θ_k G_k)`.
pub fn trotterize(g: &Generator) -> Result<Circuit> {
    trotterize_steps(g, 1)
}

/// `(Π_P exp(θ a P i / n))^n` over generator terms in block order.
pub fn trotterize_steps(g: &Generator, steps: usize) -> Result<Circuit> {
    let steps = steps.max(1);
    let mut c = Circuit::with_parameters(g.width(), g.parameters().to_vec());
    for _ in 0..steps {
        for b in g.blocks() {
            for t in &b.terms {
                pauli_exponential(&mut c, t, b.param, 1.0 / steps as f64)?;
            }
        }
    }
    Ok(c)
}

/// `exp(i a θ P)` as basis change, CNOT ladder, `Rz(−2aθ)`, mirror.
fn pauli_exponential(c: &mut Circuit, term: &GeneratorTerm, param: usize, scale: f64) -> Result<()> {
    let support: Vec<usize> = (0..term.pauli.width())
        .filter(|&q| term.pauli.get(q) != Pauli::I)
        .collect();
    let Some(&last) = support.last() else {
        // global phase
        return Ok(());
    };
    for &q in &support {
        match term.pauli.get(q) {
            Pauli::X => c.push(Gate::H(q))?,
            Pauli::Y => c.push(Gate::Rx(q, Angle::constant(FRAC_PI_2)))?,
            _ => {}
        }
    }
    for w in support.windows(2) {
        c.push(Gate::cnot(w[0], w[1]))?;
    }
    c.push(Gate::Rz(last, Angle::param(param, -2.0 * term.coeff * scale)))?;
    for w in support.windows(2).rev() {
        c.push(Gate::cnot(w[0], w[1]))?;
    }
    for &q in &support {
        match term.pauli.get(q) {
            Pauli::X => c.push(Gate::H(q))?,
            Pauli::Y => c.push(Gate::Rx(q, Angle::constant(-FRAC_PI_2)))?,
            _ => {}
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{PauliString, PauliSum};
    use crate::ucc::count_gates;
    use num_complex::Complex64;

    fn generator(letters: &str, coeff: f64) -> Generator {
        let p: PauliString = letters.parse().unwrap();
        Generator::from_pauli_sum(&PauliSum::from_term(p, Complex64::new(0.0, coeff))).unwrap()
    }

    #[test]
    fn weight_one_y() {
        let c = trotterize(&generator("Y", -1.0)).unwrap();
        assert_eq!(count_gates(&c).cnot, 0);
        assert!(matches!(c.gates()[0], Gate::Rx(0, _)));
        assert!(matches!(c.gates()[1], Gate::Rz(0, _)));
        assert!(matches!(c.gates()[2], Gate::Rx(0, _)));
    }

    #[test]
    fn staircase_count() {
        for letters in ["XIYZ", "ZZZZZ", "IIXI", "XYXY"] {
            let c = trotterize(&generator(letters, 0.5)).unwrap();
            let w = letters.chars().filter(|&l| l != 'I').count();
            assert_eq!(count_gates(&c).cnot, 2 * (w - 1), "{letters}");
        }
    }

    #[test]
    fn zero_generator_is_empty() {
        let g = Generator::from_pauli_sum(&PauliSum::zero(3)).unwrap();
        assert!(trotterize(&g).unwrap().is_empty());
    }

    #[test]
    fn steps_repeat_blocks() {
        let g = generator("XX", 1.0);
        assert_eq!(trotterize_steps(&g, 3).unwrap().len(), 3 * trotterize(&g).unwrap().len());
    }
}
