use num_complex::Complex64;

use super::{gate_matrix, mat_mul, Mat2, NoiseParams, QuantumState, IDENTITY2, ZERO};
use crate::error::{Error, Result};
use crate::modal::Bitstring;
use crate::pauli::PauliString;
use crate::ucc::{Circuit, Gate};

use super::statevector::Statevector;

pub const MAX_DENSITY_WIDTH: usize = 10;

/// Row-major `2^n × 2^n` density matrix; entry `(r, c)` lives at `r << n | c`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    width: usize,
    data: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn basis(state: &Bitstring) -> Result<Self> {
        let width = state.width();
        check_width(width)?;
        let dim = 1usize << width;
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        let b = state.as_u64() as usize;
        data[(b << width) | b] = Complex64::new(1.0, 0.0);
        Ok(Self { width, data })
    }

    pub fn from_statevector(psi: &Statevector) -> Result<Self> {
        let width = psi.width();
        check_width(width)?;
        let a = psi.amplitudes();
        let mut data = Vec::with_capacity(a.len() * a.len());
        for r in a {
            for c in a {
                data.push(r * c.conj());
            }
        }
        Ok(Self { width, data })
    }

    pub fn maximally_mixed(width: usize) -> Result<Self> {
        check_width(width)?;
        let dim = 1usize << width;
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[(i << width) | i] = Complex64::new(1.0 / dim as f64, 0.0);
        }
        Ok(Self { width, data })
    }

    pub fn dim(&self) -> usize {
        1 << self.width
    }

    pub fn element(&self, row: usize, col: usize) -> Complex64 {
        self.data[(row << self.width) | col]
    }

    pub fn purity(&self) -> f64 {
        // Tr ρ² = Σ |ρ_rc|² for hermitian ρ
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn max_difference(&self, other: &DensityMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn to_matrix(&self) -> nalgebra::DMatrix<Complex64> {
        let dim = self.dim();
        nalgebra::DMatrix::from_fn(dim, dim, |r, c| self.element(r, c))
    }

    fn rows_mut(&mut self, r0: usize, r1: usize) -> (&mut [Complex64], &mut [Complex64]) {
        let dim = self.dim();
        let (lo, hi) = self.data.split_at_mut(r1 * dim);
        (&mut lo[r0 * dim..(r0 + 1) * dim], &mut hi[..dim])
    }

    /// `U ρ U†` on qubit `q`, then depolarize it with strength `lambda`.
    pub(crate) fn apply_single(&mut self, q: usize, u: &Mat2, lambda: f64) {
        let dim = self.dim();
        let bit = 1usize << q;
        let keep = 1.0 - lambda;
        let half = lambda * 0.5;
        let diagonal = u[0][1] == ZERO && u[1][0] == ZERO;
        let uc = [[u[0][0].conj(), u[0][1].conj()], [u[1][0].conj(), u[1][1].conj()]];
        for r0 in (0..dim).filter(|r| r & bit == 0) {
            let (a, b) = self.rows_mut(r0, r0 | bit);
            if diagonal {
                // entry (r, c) picks up u[r_q] · conj(u[c_q])
                let f = [
                    [u[0][0] * uc[0][0], u[0][0] * uc[1][1]],
                    [u[1][1] * uc[0][0], u[1][1] * uc[1][1]],
                ];
                for (ca, cb) in a.chunks_exact_mut(2 * bit).zip(b.chunks_exact_mut(2 * bit)) {
                    let (a_lo, a_hi) = ca.split_at_mut(bit);
                    let (b_lo, b_hi) = cb.split_at_mut(bit);
                    for (((a0, a1), b0), b1) in a_lo.iter_mut().zip(a_hi).zip(b_lo).zip(b_hi) {
                        *a0 *= f[0][0];
                        *a1 *= f[0][1];
                        *b0 *= f[1][0];
                        *b1 *= f[1][1];
                        if lambda != 0.0 {
                            let mixed = (*a0 + *b1) * half;
                            *a0 = *a0 * keep + mixed;
                            *b1 = *b1 * keep + mixed;
                            *a1 *= keep;
                            *b0 *= keep;
                        }
                    }
                }
                continue;
            }
            // U from the left on the row pair
            for (x, y) in a.iter_mut().zip(b.iter_mut()) {
                let (p, r) = (*x, *y);
                *x = u[0][0] * p + u[0][1] * r;
                *y = u[1][0] * p + u[1][1] * r;
            }
            // U† from the right on column pairs, then the channel
            for (ca, cb) in a.chunks_exact_mut(2 * bit).zip(b.chunks_exact_mut(2 * bit)) {
                let (a_lo, a_hi) = ca.split_at_mut(bit);
                let (b_lo, b_hi) = cb.split_at_mut(bit);
                for (((a0, a1), b0), b1) in a_lo.iter_mut().zip(a_hi).zip(b_lo).zip(b_hi) {
                    let (x0, x1) = (*a0 * uc[0][0] + *a1 * uc[0][1], *a0 * uc[1][0] + *a1 * uc[1][1]);
                    let (y0, y1) = (*b0 * uc[0][0] + *b1 * uc[0][1], *b0 * uc[1][0] + *b1 * uc[1][1]);
                    if lambda != 0.0 {
                        let mixed = (x0 + y1) * half;
                        *a0 = x0 * keep + mixed;
                        *b1 = y1 * keep + mixed;
                        *a1 = x1 * keep;
                        *b0 = y0 * keep;
                    } else {
                        (*a0, *a1, *b0, *b1) = (x0, x1, y0, y1);
                    }
                }
            }
        }
    }

    /// CNOT followed by two-qubit depolarizing of strength `lambda` on the pair.
    pub(crate) fn apply_cnot(&mut self, control: usize, target: usize, lambda: f64) {
        let (n, dim) = (self.width, self.dim());
        let (cb, tb) = (1usize << control, 1usize << target);
        let mask = cb | tb;
        let keep = 1.0 - lambda;
        let quarter = 0.25 * lambda;
        // pair offsets; the CNOT swaps slots 1 and 3
        let offsets = [0, cb, tb, mask];
        const PERM: [usize; 4] = [0, 3, 2, 1];
        let bases: Vec<usize> = (0..dim).filter(|i| i & mask == 0).collect();
        let mut block = [[ZERO; 4]; 4];
        for &r in &bases {
            let rows = offsets.map(|o| (r | o) << n);
            for &c in &bases {
                let cols = offsets.map(|o| c | o);
                for i in 0..4 {
                    for j in 0..4 {
                        block[i][j] = self.data[rows[PERM[i]] | cols[PERM[j]]];
                    }
                }
                if lambda != 0.0 {
                    // (1 − λ)ρ + λ Tr_pair(ρ) ⊗ I/4
                    let t = (block[0][0] + block[1][1] + block[2][2] + block[3][3]) * quarter;
                    for (i, row) in block.iter_mut().enumerate() {
                        for x in row.iter_mut() {
                            *x *= keep;
                        }
                        row[i] += t;
                    }
                }
                for i in 0..4 {
                    for j in 0..4 {
                        self.data[rows[i] | cols[j]] = block[i][j];
                    }
                }
            }
        }
    }

    /// Depolarize one qubit with no gate.
    pub fn depolarize(&mut self, q: usize, lambda: f64) {
        self.apply_single(q, &IDENTITY2, lambda);
    }
}

fn check_width(width: usize) -> Result<()> {
    if width > MAX_DENSITY_WIDTH {
        return Err(Error::WidthCap {
            width,
            cap: MAX_DENSITY_WIDTH,
        });
    }
    Ok(())
}

impl QuantumState for DensityMatrix {
    fn width(&self) -> usize {
        self.width
    }

    fn pauli_expectation(&self, p: &PauliString) -> Complex64 {
        // Tr(Pρ) = Σ_b phase(b) ρ[b, b ⊕ x]
        (0..self.dim())
            .map(|b| {
                let (phase, to) = p.apply(b as u64);
                phase * self.element(b, to as usize)
            })
            .sum()
    }

    fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.element(i, i).re).sum()
    }
}

/// Depolarizing evolution: after every one-qubit gate its qubit is
/// depolarized with `p1`, after every CNOT the pair with `p2`.
///
/// Runs of one-qubit gates on a qubit are fused into one unitary and one
/// channel; the depolarizing channel commutes with unitaries on its qubit.
pub fn run_noisy(c: &Circuit, initial: &Bitstring, noise: &NoiseParams) -> Result<DensityMatrix> {
    if initial.width() != c.width() {
        return Err(Error::LengthMismatch {
            left: initial.width(),
            right: c.width(),
        });
    }
    let mut rho = DensityMatrix::basis(initial)?;
    let mut pending: Vec<Option<(Mat2, f64)>> = vec![None; c.width()];
    let flush = |rho: &mut DensityMatrix, slot: &mut Option<(Mat2, f64)>, q: usize| {
        if let Some((u, survive)) = slot.take() {
            rho.apply_single(q, &u, 1.0 - survive);
        }
    };
    for g in c.gates() {
        match g {
            Gate::Cnot { control, target } => {
                flush(&mut rho, &mut pending[*control], *control);
                flush(&mut rho, &mut pending[*target], *target);
                rho.apply_cnot(*control, *target, noise.p2());
            }
            _ => {
                let q = g.qubits().0;
                let u = gate_matrix(g)?;
                let (prev, survive) = pending[q].unwrap_or((IDENTITY2, 1.0));
                pending[q] = Some((mat_mul(&u, &prev), survive * (1.0 - noise.p1())));
            }
        }
    }
    for (q, slot) in pending.iter_mut().enumerate() {
        flush(&mut rho, slot, q);
    }
    Ok(rho)
}
