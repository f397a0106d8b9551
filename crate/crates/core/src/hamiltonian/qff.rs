use std::collections::BTreeMap;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::ho::{ho_matrix_element, q_power_element, HoOperator};
use super::{TwoModeTensor, VibrationalHamiltonian};
use crate::error::{Error, Result};
use crate::modal::SystemSpec;

/// One anharmonic term `coeff · Π q_{modes[i]}` (cm⁻¹). Each listed term is
/// taken literally, without permutation multiplicity factors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForceTerm {
    pub modes: Vec<usize>,
    pub coeff: f64,
}

impl ForceTerm {
    pub fn new(modes: Vec<usize>, coeff: f64) -> Self {
        Self { modes, coeff }
    }
}

/// Harmonic wavenumbers plus cubic and quartic force constants, all in cm⁻¹.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuarticForceField {
    #[serde(default)]
    pub v0: f64,
    pub omega: Vec<f64>,
    #[serde(default)]
    pub cubic: Vec<ForceTerm>,
    #[serde(default)]
    pub quartic: Vec<ForceTerm>,
}

impl QuarticForceField {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn modes(&self) -> usize {
        self.omega.len()
    }

    fn terms(&self) -> impl Iterator<Item = (usize, &ForceTerm)> {
        self.cubic
            .iter()
            .map(|t| (3, t))
            .chain(self.quartic.iter().map(|t| (4, t)))
    }
}

/// Build one- and two-mode blocks in a harmonic-oscillator modal basis.
pub fn assemble_from_qff(qff: &QuarticForceField, system: &SystemSpec) -> Result<VibrationalHamiltonian> {
    if qff.modes() != system.modes() {
        return Err(Error::LengthMismatch {
            left: qff.modes(),
            right: system.modes(),
        });
    }
    let dims = system.modal_dims();
    let mut one_mode: Vec<DMatrix<f64>> = dims
        .iter()
        .zip(&qff.omega)
        .map(|(&n, &w)| {
            DMatrix::from_fn(n, n, |r, s| {
                0.5 * w * (ho_matrix_element(HoOperator::Q2, r, s) - ho_matrix_element(HoOperator::D2, r, s))
            })
        })
        .collect();
    let mut two_mode: BTreeMap<(usize, usize), TwoModeTensor> = BTreeMap::new();

    for (order, term) in qff.terms() {
        if term.modes.len() != order {
            return Err(Error::Parse(format!(
                "order-{order} term lists {} modes",
                term.modes.len()
            )));
        }
        let mut powers: BTreeMap<usize, usize> = BTreeMap::new();
        for &m in &term.modes {
            if m >= system.modes() {
                return Err(Error::ModeOutOfRange {
                    mode: m,
                    modes: system.modes(),
                });
            }
            *powers.entry(m).or_insert(0) += 1;
        }
        let powers: Vec<(usize, usize)> = powers.into_iter().collect();
        match powers[..] {
            [(l, k)] => {
                let n = dims[l];
                let block = DMatrix::from_fn(n, n, |r, s| term.coeff * q_power_element(k, r, s));
                one_mode[l] += block;
            }
            [(l, kl), (m, km)] => {
                let (nl, nm) = (dims[l], dims[m]);
                let t = two_mode
                    .entry((l, m))
                    .or_insert_with(|| TwoModeTensor::zeros(nl, nm));
                for r in 0..nl {
                    for s in 0..nl {
                        let a = q_power_element(kl, r, s);
                        if a == 0.0 {
                            continue;
                        }
                        for p in 0..nm {
                            for q in 0..nm {
                                let b = q_power_element(km, p, q);
                                if b != 0.0 {
                                    t.add(r, p, s, q, term.coeff * a * b);
                                }
                            }
                        }
                    }
                }
            }
            _ => return Err(Error::TooManyModes(powers.len())),
        }
    }
    VibrationalHamiltonian::new(system.clone(), qff.v0, one_mode, two_mode)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_mode_terms_rejected() {
        let qff = QuarticForceField {
            v0: 0.0,
            omega: vec![1.0, 2.0, 3.0],
            cubic: vec![ForceTerm::new(vec![0, 1, 2], 1.0)],
            quartic: vec![],
        };
        let sys = SystemSpec::uniform(3, 2).unwrap();
        assert_eq!(assemble_from_qff(&qff, &sys), Err(Error::TooManyModes(3)));
    }

    #[test]
    fn malformed_terms_rejected() {
        let sys = SystemSpec::uniform(2, 2).unwrap();
        let mut qff = QuarticForceField {
            v0: 0.0,
            omega: vec![1.0, 2.0],
            cubic: vec![ForceTerm::new(vec![0, 1], 1.0)],
            quartic: vec![],
        };
        assert!(assemble_from_qff(&qff, &sys).is_err());
        qff.cubic = vec![ForceTerm::new(vec![0, 0, 5], 1.0)];
        assert!(assemble_from_qff(&qff, &sys).is_err());
        qff.cubic.clear();
        assert!(assemble_from_qff(&qff, &SystemSpec::uniform(3, 2).unwrap()).is_err());
    }

    #[test]
    fn parses_file_format() {
        let text = r#"{"omega": [700, 1200],
            "cubic": [{"modes": [0, 0, 1], "coeff": -20.5}],
            "quartic": [{"modes": [1, 1, 1, 1], "coeff": 3}]}"#;
        let qff = QuarticForceField::from_json(text).unwrap();
        assert_eq!(qff.v0, 0.0);
        assert_eq!(qff.cubic[0].modes, vec![0, 0, 1]);
        let h = assemble_from_qff(&qff, &SystemSpec::uniform(2, 3).unwrap()).unwrap();
        assert!(h.two_mode().contains_key(&(0, 1)));
    }

    /// Perturbative check against a much larger basis.
    #[test]
    fn small_quartic_converges_with_basis() {
        let qff = QuarticForceField {
            v0: 0.0,
            omega: vec![1000.0],
            cubic: vec![],
            quartic: vec![ForceTerm::new(vec![0, 0, 0, 0], 2.0)],
        };
        let e = |n| {
            assemble_from_qff(&qff, &SystemSpec::uniform(1, n).unwrap())
                .unwrap()
                .exact_diagonalize()
                .unwrap()[0]
        };
        let reference = e(40);
        // first order: ω/2 + k <0|q⁴|0> = 500 + 2 * 3/4
        assert!((reference - 501.5).abs() < 0.05, "{reference}");
        assert!((e(12) - reference).abs() < 1e-6);
    }
}
