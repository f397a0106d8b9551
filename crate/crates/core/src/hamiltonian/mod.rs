//! Vibrational Hamiltonians in a modal basis, truncated at two-mode couplings.
//!
//! Energies are in cm⁻¹. Coordinates are dimensionless normal coordinates, so
//! a harmonic mode of wavenumber `ω` contributes `ω (p² + q²)/2`.

mod ho;
mod qff;

use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::encodings::Codebook;
use crate::error::{Error, Result};
use crate::modal::{Configuration, SystemSpec};
use crate::pauli::{local_ladder, LadderForm, PauliSum};

pub use ho::{ho_matrix_element, q_power_element, HoOperator};
pub use qff::{assemble_from_qff, ForceTerm, QuarticForceField};

/// Default cap on the configuration-space dimension for dense diagonalization.
pub const DEFAULT_DIAG_CAP: usize = 1 << 12;

/// Two-mode coupling `h^{lm}_{rp,sq}` stored as `[r][p][s][q]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeTensor {
    dims: (usize, usize),
    data: Vec<f64>,
}

impl TwoModeTensor {
    pub fn zeros(nl: usize, nm: usize) -> Self {
        Self {
            dims: (nl, nm),
            data: vec![0.0; nl * nm * nl * nm],
        }
    }

    fn index(&self, r: usize, p: usize, s: usize, q: usize) -> usize {
        let (nl, nm) = self.dims;
        ((r * nm + p) * nl + s) * nm + q
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn get(&self, r: usize, p: usize, s: usize, q: usize) -> f64 {
        self.data[self.index(r, p, s, q)]
    }

    pub fn add(&mut self, r: usize, p: usize, s: usize, q: usize, v: f64) {
        let i = self.index(r, p, s, q);
        self.data[i] += v;
    }

    /// Nonzero elements as `((r, p, s, q), value)`.
    pub fn nonzero(&self) -> impl Iterator<Item = ((usize, usize, usize, usize), f64)> + '_ {
        let (nl, nm) = self.dims;
        (0..nl).flat_map(move |r| {
            (0..nm).flat_map(move |p| {
                (0..nl).flat_map(move |s| {
                    (0..nm).filter_map(move |q| {
                        let v = self.get(r, p, s, q);
                        (v != 0.0).then_some(((r, p, s, q), v))
                    })
                })
            })
        })
    }
}

/// `H = v0 + Σ_l h^l + Σ_{l<m} h^{lm}` in second quantization over modals.
#[derive(Debug, Clone, PartialEq)]
pub struct VibrationalHamiltonian {
    system: SystemSpec,
    v0: f64,
    one_mode: Vec<DMatrix<f64>>,
    two_mode: BTreeMap<(usize, usize), TwoModeTensor>,
}

impl VibrationalHamiltonian {
    pub fn new(
        system: SystemSpec,
        v0: f64,
        one_mode: Vec<DMatrix<f64>>,
        two_mode: BTreeMap<(usize, usize), TwoModeTensor>,
    ) -> Result<Self> {
        if one_mode.len() != system.modes() {
            return Err(Error::LengthMismatch {
                left: one_mode.len(),
                right: system.modes(),
            });
        }
        for (l, h) in one_mode.iter().enumerate() {
            let n = system.modal_dims()[l];
            if h.nrows() != n || h.ncols() != n {
                return Err(Error::InvalidSystem(format!(
                    "one-mode block {l} is {}x{}, expected {n}x{n}",
                    h.nrows(),
                    h.ncols()
                )));
            }
            if (h - h.transpose()).amax() > 1e-9 * (1.0 + h.amax()) {
                return Err(Error::NotHermitian);
            }
        }
        for (&(l, m), t) in &two_mode {
            if l >= m || m >= system.modes() {
                return Err(Error::InvalidSystem(format!("bad coupling pair ({l}, {m})")));
            }
            if t.dims() != (system.modal_dims()[l], system.modal_dims()[m]) {
                return Err(Error::InvalidSystem(format!("coupling ({l}, {m}) has wrong shape")));
            }
            for ((r, p, s, q), v) in t.nonzero() {
                if (v - t.get(s, q, r, p)).abs() > 1e-9 * (1.0 + v.abs()) {
                    return Err(Error::NotHermitian);
                }
            }
        }
        Ok(Self {
            system,
            v0,
            one_mode,
            two_mode,
        })
    }

    pub fn system(&self) -> &SystemSpec {
        &self.system
    }

    pub fn v0(&self) -> f64 {
        self.v0
    }

    pub fn one_mode(&self, mode: usize) -> &DMatrix<f64> {
        &self.one_mode[mode]
    }

    pub fn two_mode(&self) -> &BTreeMap<(usize, usize), TwoModeTensor> {
        &self.two_mode
    }

    /// `<a|H|b>` between two configurations.
    pub fn element(&self, a: &Configuration, b: &Configuration) -> f64 {
        let (a, b) = (a.occupied(), b.occupied());
        let differing: Vec<usize> = (0..a.len()).filter(|&k| a[k] != b[k]).collect();
        match differing[..] {
            [] => {
                let mut v = self.v0;
                for (l, h) in self.one_mode.iter().enumerate() {
                    v += h[(a[l], b[l])];
                }
                for (&(l, m), t) in &self.two_mode {
                    v += t.get(a[l], a[m], b[l], b[m]);
                }
                v
            }
            [k] => {
                let mut v = self.one_mode[k][(a[k], b[k])];
                for (&(l, m), t) in &self.two_mode {
                    if l == k || m == k {
                        v += t.get(a[l], a[m], b[l], b[m]);
                    }
                }
                v
            }
            [l, m] => self
                .two_mode
                .get(&(l, m))
                .map_or(0.0, |t| t.get(a[l], a[m], b[l], b[m])),
            _ => 0.0,
        }
    }

    /// Dense matrix over configurations in [`SystemSpec::configurations`] order.
    pub fn configuration_matrix(&self, cap: usize) -> Result<DMatrix<f64>> {
        let dim = self.system.configuration_count();
        if dim > cap {
            return Err(Error::DimensionCap { dim, cap });
        }
        let configs: Vec<Configuration> = self.system.configurations().collect();
        Ok(DMatrix::from_fn(dim, dim, |i, j| self.element(&configs[i], &configs[j])))
    }

    /// `<Φ_r|H|Φ_r>` for a Hartree product.
    pub fn reference_energy(&self, reference: &Configuration) -> f64 {
        self.element(reference, reference)
    }

    pub fn exact_diagonalize(&self) -> Result<Vec<f64>> {
        self.exact_diagonalize_capped(DEFAULT_DIAG_CAP)
    }

    /// Ascending eigenvalues of the configuration-space matrix.
    pub fn exact_diagonalize_capped(&self, cap: usize) -> Result<Vec<f64>> {
        Ok(sorted_eigenvalues(self.configuration_matrix(cap)?))
    }

    /// Qubit image under `codebook`: every transition operator in its exact form.
    pub fn to_pauli(&self, codebook: &Codebook) -> Result<PauliSum> {
        if codebook.system() != &self.system {
            return Err(Error::InvalidSystem(
                "codebook and Hamiltonian describe different systems".into(),
            ));
        }
        let width = codebook.total_width();
        let dims = self.system.modal_dims();
        // embedded transition operators per mode, indexed [r][s]
        let ladders: Vec<Vec<Vec<PauliSum>>> = (0..self.system.modes())
            .map(|l| {
                (0..dims[l])
                    .map(|r| {
                        (0..dims[l])
                            .map(|s| {
                                local_ladder(codebook, l, r, s, LadderForm::Exact)?
                                    .embed(width, codebook.offset(l))
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;

        let mut out = PauliSum::identity(width, self.v0);
        for (l, h) in self.one_mode.iter().enumerate() {
            for r in 0..dims[l] {
                for s in 0..dims[l] {
                    let v = h[(r, s)];
                    if v != 0.0 {
                        out.add_scaled(&ladders[l][r][s], Complex64::new(v, 0.0))?;
                    }
                }
            }
        }
        for (&(l, m), t) in &self.two_mode {
            for ((r, p, s, q), v) in t.nonzero() {
                let product = ladders[l][r][s].multiply(&ladders[m][p][q])?;
                out.add_scaled(&product, Complex64::new(v, 0.0))?;
            }
        }
        // hermitian pairs cancel imaginary parts up to rounding
        let cleaned = out
            .terms()
            .map(|(p, c)| (*p, Complex64::new(c.re, 0.0)))
            .collect::<Vec<_>>();
        if !out.is_hermitian(1e-9) {
            return Err(Error::NotHermitian);
        }
        PauliSum::from_terms(width, cleaned)
    }
}

pub(crate) fn sorted_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    let mut values: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

/// Block of `pauli` on the encoded basis states of `codebook`, in configuration order.
pub fn encoded_block(pauli: &PauliSum, codebook: &Codebook) -> DMatrix<Complex64> {
    let basis = codebook.encoded_basis();
    let n = basis.len();
    DMatrix::from_fn(n, n, |i, j| pauli.matrix_element(basis[i], basis[j]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encodings::{build_codebook, EncodingKind};

    fn harmonic(omegas: &[f64], n: usize) -> VibrationalHamiltonian {
        let qff = QuarticForceField {
            v0: 0.0,
            omega: omegas.to_vec(),
            cubic: vec![],
            quartic: vec![],
        };
        assemble_from_qff(&qff, &SystemSpec::uniform(omegas.len(), n).unwrap()).unwrap()
    }

    #[test]
    fn harmonic_blocks_are_diagonal() {
        let h = harmonic(&[1000.0], 2);
        let m = h.one_mode(0);
        assert!((m[(0, 0)] - 500.0).abs() < 1e-9 && (m[(1, 1)] - 1500.0).abs() < 1e-9);
        assert!(m[(0, 1)].abs() < 1e-12);
    }

    #[test]
    fn uncoupled_spectrum_is_ladder() {
        let h = harmonic(&[700.0, 1300.0], 3);
        let e = h.exact_diagonalize().unwrap();
        let mut expected = vec![];
        for a in 0..3 {
            for b in 0..3 {
                expected.push(700.0 * (a as f64 + 0.5) + 1300.0 * (b as f64 + 0.5));
            }
        }
        expected.sort_by(f64::total_cmp);
        for (x, y) in e.iter().zip(&expected) {
            assert!((x - y).abs() < 1e-8);
        }
    }

    #[test]
    fn diagonal_hamiltonian_maps_to_z_strings() {
        let h = harmonic(&[700.0, 1300.0], 4);
        for kind in [EncodingKind::Direct, EncodingKind::GrayCode, EncodingKind::cea()] {
            let cb = build_codebook(h.system(), kind, true).unwrap();
            let p = h.to_pauli(&cb).unwrap();
            assert!(p.terms().all(|(s, _)| s.is_diagonal()));
        }
    }

    #[test]
    fn dm_and_sb_agree_on_one_mode() {
        let qff = QuarticForceField {
            v0: 0.0,
            omega: vec![900.0],
            cubic: vec![ForceTerm::new(vec![0, 0, 0], 40.0)],
            quartic: vec![ForceTerm::new(vec![0, 0, 0, 0], 5.0)],
        };
        let h = assemble_from_qff(&qff, &SystemSpec::uniform(1, 2).unwrap()).unwrap();
        let spectrum = |kind| {
            let cb = build_codebook(h.system(), kind, true).unwrap();
            let block = encoded_block(&h.to_pauli(&cb).unwrap(), &cb);
            sorted_eigenvalues(block.map(|c| c.re))
        };
        let dm = spectrum(EncodingKind::Direct);
        let sb = spectrum(EncodingKind::StandardBinary);
        let exact = h.exact_diagonalize().unwrap();
        for i in 0..2 {
            assert!((dm[i] - sb[i]).abs() < 1e-9 && (dm[i] - exact[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn variational_bound_on_references() {
        let qff = QuarticForceField {
            v0: 0.0,
            omega: vec![700.0, 1100.0],
            cubic: vec![ForceTerm::new(vec![0, 0, 1], -35.0)],
            quartic: vec![ForceTerm::new(vec![0, 0, 1, 1], 6.0)],
        };
        let h = assemble_from_qff(&qff, &SystemSpec::uniform(2, 3).unwrap()).unwrap();
        let e0 = h.exact_diagonalize().unwrap()[0];
        for c in h.system().configurations() {
            assert!(e0 <= h.reference_energy(&c) + 1e-12);
        }
    }

    #[test]
    fn caps_and_mismatches() {
        let h = harmonic(&[700.0, 1300.0], 3);
        assert!(matches!(
            h.exact_diagonalize_capped(8),
            Err(Error::DimensionCap { dim: 9, cap: 8 })
        ));
        let other = build_codebook(&SystemSpec::uniform(2, 2).unwrap(), EncodingKind::Direct, false).unwrap();
        assert!(h.to_pauli(&other).is_err());
    }
}
