use boson_encode::encodings::{build_codebook, Codebook, EncodingKind};
use boson_encode::fixtures::{self, Fixture};
use boson_encode::hamiltonian::{assemble_from_qff, QuarticForceField, VibrationalHamiltonian};
use boson_encode::modal::{Configuration, SystemSpec};
use boson_encode::pauli::PauliSum;
use boson_encode::sim::{NoiseParams, Shots};
use boson_encode::ucc::{build_uccsd, cluster_to_pauli, ClusterOperator};
use boson_encode::vqe::{qeom_excitations, vqe_minimize, UccAnsatz, VqeConfig};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

const KINDS: [EncodingKind; 4] = [
    EncodingKind::Direct,
    EncodingKind::StandardBinary,
    EncodingKind::GrayCode,
    EncodingKind::Cea { threshold: 2 },
];

struct Problem {
    h: VibrationalHamiltonian,
    pauli: PauliSum,
    cluster: ClusterOperator,
    codebook: Codebook,
    ansatz: UccAnsatz,
}

fn problem(qff: &QuarticForceField, system: &SystemSpec, kind: EncodingKind) -> Problem {
    let h = assemble_from_qff(qff, system).unwrap();
    let codebook = build_codebook(system, kind, true).unwrap();
    let pauli = h.to_pauli(&codebook).unwrap();
    let cluster = build_uccsd(system, &Configuration::ground(system));
    let ansatz = UccAnsatz::new(&cluster, &codebook).unwrap();
    Problem {
        h,
        pauli,
        cluster,
        codebook,
        ansatz,
    }
}

fn fixture_problem(f: &Fixture, kind: EncodingKind) -> Problem {
    problem(&f.qff(), &f.system(), kind)
}

fn harmonic(omega: &[f64]) -> QuarticForceField {
    QuarticForceField {
        v0: 0.0,
        omega: omega.to_vec(),
        cubic: vec![],
        quartic: vec![],
    }
}

#[test]
fn single_harmonic_mode_is_exact() {
    let p = problem(&harmonic(&[1000.0]), &SystemSpec::uniform(1, 2).unwrap(), EncodingKind::Direct);
    let r = vqe_minimize(&p.pauli, &p.ansatz, &VqeConfig::default(), 0).unwrap();
    assert!((r.energy - 500.0).abs() < 1e-8, "{}", r.energy);
}

#[test]
fn zero_hamiltonian() {
    let f = fixtures::ANHARMONIC_PAIR;
    let p = fixture_problem(&f, EncodingKind::cea());
    let zero = PauliSum::zero(p.pauli.width());
    let r = vqe_minimize(&zero, &p.ansatz, &VqeConfig::default(), 3).unwrap();
    assert_eq!(r.energy, 0.0);
    assert!(r.history.iter().all(|&e| e == 0.0));
}

#[test]
fn evaluated_energies_respect_variational_bound() {
    for f in fixtures::ALL {
        for kind in KINDS {
            let p = fixture_problem(&f, kind);
            let exact = p.h.exact_diagonalize().unwrap()[0];
            let r = vqe_minimize(&p.pauli, &p.ansatz, &VqeConfig::default(), 0).unwrap();
            assert!(r.converged);
            let lowest = r.history.iter().copied().fold(f64::INFINITY, f64::min);
            assert!(lowest >= exact - 1e-8, "{} {kind}: {lowest} < {exact}", f.name);
        }
    }
}

#[test]
fn minima_agree_across_encodings() {
    for f in fixtures::ALL {
        let runs: Vec<(EncodingKind, f64, bool)> = KINDS
            .into_iter()
            .map(|kind| {
                let p = fixture_problem(&f, kind);
                let e = vqe_minimize(&p.pauli, &p.ansatz, &VqeConfig::default(), 0).unwrap().energy;
                (kind, e, p.ansatz.is_subspace_preserving())
            })
            .collect();
        let exact = fixture_problem(&f, EncodingKind::Direct).h.exact_diagonalize().unwrap()[0];
        for (kind, e, preserving) in &runs {
            if *preserving {
                assert!((e - runs[0].1).abs() < 1e-4, "{} {kind}: {runs:?}", f.name);
            } else {
                assert!(*e >= exact - 1e-8, "{} {kind}: {e} below {exact}", f.name);
            }
        }
    }
}

/// `Π_k exp(θ_k G_k) |ref⟩` with dense exponentials, blocks applied in order.
fn dense_energy(p: &Problem, h: &DMatrix<Complex64>, amps: &[f64]) -> f64 {
    let g = cluster_to_pauli(&p.cluster, &p.codebook).unwrap();
    let dim = 1usize << g.width();
    let mut psi = DVector::from_element(dim, Complex64::new(0.0, 0.0));
    psi[p.codebook.reference_state().as_u64() as usize] = Complex64::new(1.0, 0.0);
    for (k, &a) in amps.iter().enumerate() {
        let mut one_hot = vec![0.0; amps.len()];
        one_hot[k] = a;
        let gk = g.to_pauli_sum(&one_hot).unwrap().to_matrix(dim).unwrap();
        psi = gk.exp() * psi;
    }
    (psi.adjoint() * h * &psi)[(0, 0)].re
}

/// Grid scan followed by compass search with halving steps.
fn brute_force_minimum(f: impl Fn(&[f64]) -> f64, n: usize) -> f64 {
    let points: usize = 13;
    let axis = |i: usize| -0.6 + 1.2 * i as f64 / (points - 1) as f64;
    let mut best = (vec![0.0; n], f64::INFINITY);
    for flat in 0..points.pow(n as u32) {
        let x: Vec<f64> = (0..n).map(|d| axis(flat / points.pow(d as u32) % points)).collect();
        let v = f(&x);
        if v < best.1 {
            best = (x, v);
        }
    }
    let mut step = 0.1;
    while step > 1e-9 {
        let mut moved = false;
        for d in 0..n {
            for sign in [1.0, -1.0] {
                let mut x = best.0.clone();
                x[d] += sign * step;
                let v = f(&x);
                if v < best.1 {
                    best = (x, v);
                    moved = true;
                }
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    best.1
}

#[test]
fn matches_brute_force_on_ansatz_surface() {
    let f = fixtures::ANHARMONIC_PAIR;
    let system = SystemSpec::uniform(2, 2).unwrap();
    for kind in [EncodingKind::Direct, EncodingKind::cea()] {
        let p = problem(&f.qff(), &system, kind);
        let dim = 1usize << p.pauli.width();
        let h = p.pauli.to_matrix(dim).unwrap();
        let oracle = brute_force_minimum(|x| dense_energy(&p, &h, x), p.cluster.len());
        let r = vqe_minimize(&p.pauli, &p.ansatz, &VqeConfig::default(), 0).unwrap();
        assert!((r.energy - oracle).abs() < 1e-6, "{kind}: {} vs {oracle}", r.energy);
    }
}

#[test]
fn qeom_on_uncoupled_modes_gives_harmonic_ladder() {
    let omega = [1100.0, 700.0];
    let p = problem(&harmonic(&omega), &SystemSpec::uniform(2, 3).unwrap(), EncodingKind::cea());
    let config = VqeConfig::default();
    let ground = vqe_minimize(&p.pauli, &p.ansatz, &config, 0).unwrap();
    assert!((ground.energy - 900.0).abs() < 1e-8);
    let q = qeom_excitations(&ground, &p.pauli, &p.cluster, &p.codebook, &p.ansatz, &config).unwrap();
    let mut expected = vec![];
    for a in 0..3 {
        for b in 0..3 {
            if a + b > 0 {
                expected.push(a as f64 * omega[0] + b as f64 * omega[1]);
            }
        }
    }
    expected.sort_by(f64::total_cmp);
    assert_eq!(q.excitation_energies.len(), expected.len());
    for (got, want) in q.excitation_energies.iter().zip(&expected) {
        assert!((got - want).abs() < 1e-6, "{:?}", q.excitation_energies);
    }
    assert!(q.max_imaginary < 1e-8);
}

#[test]
fn qeom_matches_exact_gaps() {
    let f = fixtures::ANHARMONIC_PAIR;
    for kind in [EncodingKind::Direct, EncodingKind::cea()] {
        let p = fixture_problem(&f, kind);
        let exact = p.h.exact_diagonalize().unwrap();
        let config = VqeConfig::default();
        let ground = vqe_minimize(&p.pauli, &p.ansatz, &config, 0).unwrap();
        let q = qeom_excitations(&ground, &p.pauli, &p.cluster, &p.codebook, &p.ansatz, &config).unwrap();
        for i in 0..3 {
            let gap = exact[i + 1] - exact[0];
            assert!((q.excitation_energies[i] - gap).abs() < 1.0, "{kind} {i}: {:?}", q.excitation_energies);
            assert!((q.total_energies[i] - ground.energy - q.excitation_energies[i]).abs() < 1e-9);
        }
        assert!(q.max_imaginary < 1e-8);
    }
}

#[test]
fn noisy_runs_repeat_with_seed() {
    let p = fixture_problem(&fixtures::ANHARMONIC_PAIR, EncodingKind::cea());
    let mut config = VqeConfig {
        noise: NoiseParams::new(1e-3, 1e-2).unwrap(),
        shots: Shots::Count(1000),
        ..VqeConfig::default()
    };
    config.optimizer.rho_end = 1e-3;
    let a = vqe_minimize(&p.pauli, &p.ansatz, &config, 11).unwrap();
    let b = vqe_minimize(&p.pauli, &p.ansatz, &config, 11).unwrap();
    let c = vqe_minimize(&p.pauli, &p.ansatz, &config, 12).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.energy, c.energy);
}
