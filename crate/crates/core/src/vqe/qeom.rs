use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ground::{derive_seed, Ansatz, Evaluator, VqeConfig, VqeResult};
use crate::encodings::Codebook;
use crate::error::{Error, Result};
use crate::pauli::{LadderForm, PauliSum};
use crate::sim::{default_backend, QuantumState, Shots};
use crate::ucc::ClusterOperator;

/// Metric eigenvalues below this magnitude are dropped.
pub const METRIC_FLOOR: f64 = 1e-10;

/// Seed stream reserved for the QEOM state preparation.
const QEOM_STREAM: u64 = u64::MAX - 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QeomResult {
    /// Positive excitation energies, ascending (cm⁻¹).
    pub excitation_energies: Vec<f64>,
    /// `ground + excitation` for each entry above.
    pub total_energies: Vec<f64>,
    /// Largest imaginary part among the kept roots.
    pub max_imaginary: f64,
    /// The metric had eigenvalues under [`METRIC_FLOOR`].
    pub singular_metric: bool,
    pub m: Vec<Vec<[f64; 2]>>,
    pub q: Vec<Vec<[f64; 2]>>,
    pub v: Vec<Vec<[f64; 2]>>,
    pub w: Vec<Vec<[f64; 2]>>,
}

fn double_commutator(a: &PauliSum, b: &PauliSum, c: &PauliSum) -> Result<PauliSum> {
    let left = a.commutator(b)?.commutator(c)?;
    let right = a.commutator(&b.commutator(c)?)?;
    Ok(left.add(&right)?.scale(0.5))
}

/// `⟨C⟩` for a possibly non-hermitian `C`.
fn measure(state: &dyn QuantumState, c: &PauliSum, shots: Shots, seed: u64) -> Result<Complex64> {
    match shots {
        Shots::Exact => Ok(c.terms().map(|(p, k)| k * state.pauli_expectation(p).re).sum()),
        Shots::Count(_) => {
            let adj = c.adjoint();
            let re = c.add(&adj)?.scale(0.5);
            let im = c.sub(&adj)?.scale(Complex64::new(0.0, -0.5));
            let a = if re.is_empty() { 0.0 } else { shots.measure(state, &re, derive_seed(seed, 0))? };
            let b = if im.is_empty() { 0.0 } else { shots.measure(state, &im, derive_seed(seed, 1))? };
            Ok(Complex64::new(a, b))
        }
    }
}

fn to_rows(m: &DMatrix<Complex64>) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

/// Excitation energies on top of a VQE ground state.
///
/// Basis operators are the cluster excitations `E_μ`; with the symmetrized
/// double commutator `[A,B,C]`
/// `M = ⟨[E_μ†,H,E_ν]⟩`, `Q = −⟨[E_μ†,H,E_ν†]⟩`, `V = ⟨[E_μ†,E_ν]⟩`,
/// `W = −⟨[E_μ†,E_ν†]⟩`, and
/// `[[M,Q],[Q*,M*]] x = ω [[V,W],[−W*,−V*]] x`.
pub fn qeom_excitations(
    ground: &VqeResult,
    h: &PauliSum,
    cluster: &ClusterOperator,
    codebook: &Codebook,
    ansatz: &dyn Ansatz,
    config: &VqeConfig,
) -> Result<QeomResult> {
    let k = cluster.len();
    let ops: Vec<PauliSum> = (0..k)
        .map(|i| cluster.excitation_operator(i, codebook, LadderForm::Exact))
        .collect::<Result<_>>()?;
    let adj: Vec<PauliSum> = ops.iter().map(PauliSum::adjoint).collect();

    let eval = Evaluator {
        ansatz,
        backend: default_backend(ansatz.width(), &config.noise),
        noise: config.noise,
    };
    let seed = derive_seed(ground.seed, QEOM_STREAM);
    let state = eval.state(&ground.amplitudes, seed)?;
    let state = state.as_ref();

    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).collect();
    let entries: Vec<[Complex64; 4]> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let s = derive_seed(seed, (i * k + j) as u64);
            let sub = |n: u64| derive_seed(s, n);
            let m = measure(state, &double_commutator(&adj[i], h, &ops[j])?, config.shots, sub(0))?;
            let q = -measure(state, &double_commutator(&adj[i], h, &adj[j])?, config.shots, sub(1))?;
            let v = measure(state, &adj[i].commutator(&ops[j])?, config.shots, sub(2))?;
            let w = -measure(state, &adj[i].commutator(&adj[j])?, config.shots, sub(3))?;
            Ok([m, q, v, w])
        })
        .collect::<Result<_>>()?;
    let block = |n: usize| DMatrix::from_fn(k, k, |i, j| entries[i * k + j][n]);
    let (m, q, v, w) = (block(0), block(1), block(2), block(3));

    let mut lhs = DMatrix::zeros(2 * k, 2 * k);
    let mut metric = DMatrix::zeros(2 * k, 2 * k);
    lhs.view_mut((0, 0), (k, k)).copy_from(&m);
    lhs.view_mut((0, k), (k, k)).copy_from(&q);
    lhs.view_mut((k, 0), (k, k)).copy_from(&q.conjugate());
    lhs.view_mut((k, k), (k, k)).copy_from(&m.conjugate());
    metric.view_mut((0, 0), (k, k)).copy_from(&v);
    metric.view_mut((0, k), (k, k)).copy_from(&w);
    metric.view_mut((k, 0), (k, k)).copy_from(&(-w.conjugate()));
    metric.view_mut((k, k), (k, k)).copy_from(&(-v.conjugate()));

    // the metric is hermitian; shot noise can break that slightly
    let metric = (&metric + metric.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(metric);
    let mut singular = false;
    let inv_diag = eig.eigenvalues.map(|s| {
        if s.abs() < METRIC_FLOOR {
            singular = true;
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(1.0 / s, 0.0)
        }
    });
    let u = &eig.eigenvectors;
    let inverse = u * DMatrix::from_diagonal(&inv_diag) * u.adjoint();
    let a = inverse * lhs;

    let schur = nalgebra::Schur::try_new(a, 1e-14, 10_000)
        .ok_or_else(|| Error::InvalidSystem("QEOM eigenproblem did not converge".into()))?;
    let t = schur.unpack().1;
    let mut roots: Vec<Complex64> = (0..2 * k).map(|i| t[(i, i)]).filter(|z| z.re > 0.0).collect();
    roots.sort_by(|a, b| a.re.total_cmp(&b.re));
    roots.truncate(k);
    let excitation_energies: Vec<f64> = roots.iter().map(|z| z.re).collect();
    Ok(QeomResult {
        total_energies: excitation_energies.iter().map(|e| ground.energy + e).collect(),
        max_imaginary: roots.iter().map(|z| z.im.abs()).fold(0.0, f64::max),
        excitation_energies,
        singular_metric: singular,
        m: to_rows(&m),
        q: to_rows(&q),
        v: to_rows(&v),
        w: to_rows(&w),
    })
}
