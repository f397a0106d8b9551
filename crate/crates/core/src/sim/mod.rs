//! Statevector, density-matrix and trajectory simulation with depolarizing noise.

mod density;
mod statevector;
mod trajectory;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

pub use density::{run_noisy, DensityMatrix, MAX_DENSITY_WIDTH};
pub use statevector::{run_statevector, Statevector, MAX_STATEVECTOR_WIDTH};
pub use trajectory::{run_trajectories, TrajectoryEnsemble};

use crate::error::{Error, Result};
use crate::modal::Bitstring;
use crate::pauli::{PauliString, PauliSum};
use crate::ucc::{Circuit, Gate};

pub(crate) type Mat2 = [[Complex64; 2]; 2];

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const IDENTITY2: Mat2 = [[ONE, ZERO], [ZERO, ONE]];

pub(crate) fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, v) in row.iter_mut().enumerate() {
            *v = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

pub(crate) fn gate_matrix(g: &Gate) -> Result<Mat2> {
    let i = Complex64::new(0.0, 1.0);
    Ok(match g {
        Gate::H(_) => {
            let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            [[h, h], [h, -h]]
        }
        Gate::S(_) => [[ONE, ZERO], [ZERO, i]],
        Gate::Sdg(_) => [[ONE, ZERO], [ZERO, -i]],
        Gate::Rz(_, a) => {
            let theta = bound(a)?;
            [[(-i * theta / 2.0).exp(), ZERO], [ZERO, (i * theta / 2.0).exp()]]
        }
        Gate::Rx(_, a) => {
            let theta = bound(a)?;
            let (s, c) = (theta / 2.0).sin_cos();
            [[c.into(), -i * s], [-i * s, c.into()]]
        }
        Gate::Cnot { .. } => return Err(Error::InvalidSystem("CNOT has no 2x2 matrix".into())),
    })
}

fn bound(a: &crate::ucc::Angle) -> Result<f64> {
    if !a.is_bound() {
        return Err(Error::UnboundCircuit);
    }
    Ok(a.constant_part())
}

/// Depolarizing probabilities per one-qubit gate and per CNOT.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NoiseParams {
    p1: f64,
    p2: f64,
}

impl NoiseParams {
    pub fn new(p1: f64, p2: f64) -> Result<Self> {
        for (name, p) in [("p1", p1), ("p2", p2)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidNoise(format!("{name} = {p} outside [0, 1]")));
            }
        }
        Ok(Self { p1, p2 })
    }

    pub fn noiseless() -> Self {
        Self::default()
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    pub fn is_noiseless(&self) -> bool {
        self.p1 == 0.0 && self.p2 == 0.0
    }
}

/// Anything that yields Pauli expectation values.
pub trait QuantumState: fmt::Debug + Send + Sync {
    fn width(&self) -> usize;
    fn pauli_expectation(&self, p: &PauliString) -> Complex64;
    fn trace(&self) -> f64;
}

fn check_observable(state: &dyn QuantumState, obs: &PauliSum) -> Result<()> {
    if obs.width() != state.width() {
        return Err(Error::LengthMismatch {
            left: obs.width(),
            right: state.width(),
        });
    }
    let scale = obs.terms().map(|(_, c)| c.norm()).fold(1.0, f64::max);
    if !obs.is_hermitian(1e-10 * scale) {
        return Err(Error::NotHermitian);
    }
    Ok(())
}

/// `⟨ψ|O|ψ⟩` or `Tr(ρO)`.
pub fn expval(state: &dyn QuantumState, obs: &PauliSum) -> Result<f64> {
    check_observable(state, obs)?;
    Ok(obs
        .terms()
        .map(|(p, c)| (c * state.pauli_expectation(p)).re)
        .sum())
}

/// Shot-noise estimate: each non-identity term is measured `shots` times in
/// its eigenbasis and the ±1 outcomes averaged.
pub fn sample_energy(state: &dyn QuantumState, obs: &PauliSum, shots: u64, seed: u64) -> Result<f64> {
    check_observable(state, obs)?;
    if shots == 0 {
        return Err(Error::InvalidSystem("shots must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut total = 0.0;
    for (p, c) in obs.terms() {
        if p.is_identity() {
            total += c.re * state.trace();
            continue;
        }
        let mean = state.pauli_expectation(p).re.clamp(-1.0, 1.0);
        let up = Binomial::new(shots, 0.5 * (1.0 + mean))
            .map_err(|e| Error::InvalidSystem(e.to_string()))?
            .sample(&mut rng);
        total += c.re * (2.0 * up as f64 / shots as f64 - 1.0);
    }
    Ok(total)
}

/// Exact expectation values or a finite shot budget per term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Shots {
    #[default]
    Exact,
    Count(u64),
}

impl Shots {
    pub fn measure(&self, state: &dyn QuantumState, obs: &PauliSum, seed: u64) -> Result<f64> {
        match *self {
            Shots::Exact => expval(state, obs),
            Shots::Count(n) => sample_energy(state, obs, n, seed),
        }
    }
}

impl fmt::Display for Shots {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shots::Exact => f.write_str("exact"),
            Shots::Count(n) => write!(f, "{n}"),
        }
    }
}

impl FromStr for Shots {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "exact" => Ok(Shots::Exact),
            other => match other.parse::<u64>() {
                Ok(n) if n >= 1 => Ok(Shots::Count(n)),
                _ => Err(Error::Parse(format!("shots must be `exact` or a positive count, got `{s}`"))),
            },
        }
    }
}

impl Serialize for Shots {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Shots {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A way of turning a bound circuit into a state.
pub trait Backend: fmt::Debug + Send + Sync {
    fn name(&self) -> &str;
    fn max_width(&self) -> usize;
    fn prepare(
        &self,
        c: &Circuit,
        initial: &Bitstring,
        noise: &NoiseParams,
        seed: u64,
    ) -> Result<Box<dyn QuantumState>>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BackendParams {
    pub trajectories: usize,
}

impl Default for BackendParams {
    fn default() -> Self {
        Self { trajectories: 200 }
    }
}

#[derive(Debug)]
struct StatevectorBackend;

impl Backend for StatevectorBackend {
    fn name(&self) -> &str {
        "statevector"
    }

    fn max_width(&self) -> usize {
        MAX_STATEVECTOR_WIDTH
    }

    fn prepare(&self, c: &Circuit, initial: &Bitstring, noise: &NoiseParams, _seed: u64) -> Result<Box<dyn QuantumState>> {
        if !noise.is_noiseless() {
            return Err(Error::InvalidNoise("statevector backend is noiseless".into()));
        }
        Ok(Box::new(run_statevector(c, initial)?))
    }
}

#[derive(Debug)]
struct DensityBackend;

impl Backend for DensityBackend {
    fn name(&self) -> &str {
        "density"
    }

    fn max_width(&self) -> usize {
        MAX_DENSITY_WIDTH
    }

    fn prepare(&self, c: &Circuit, initial: &Bitstring, noise: &NoiseParams, _seed: u64) -> Result<Box<dyn QuantumState>> {
        Ok(Box::new(run_noisy(c, initial, noise)?))
    }
}

#[derive(Debug)]
struct TrajectoryBackend {
    trajectories: usize,
}

impl Backend for TrajectoryBackend {
    fn name(&self) -> &str {
        "trajectory"
    }

    fn max_width(&self) -> usize {
        MAX_STATEVECTOR_WIDTH
    }

    fn prepare(&self, c: &Circuit, initial: &Bitstring, noise: &NoiseParams, seed: u64) -> Result<Box<dyn QuantumState>> {
        Ok(Box::new(run_trajectories(c, initial, noise, self.trajectories, seed)?))
    }
}

pub type BackendFactory = fn(&BackendParams) -> Box<dyn Backend>;

#[derive(Debug, Clone)]
pub struct BackendRegistry {
    factories: BTreeMap<String, BackendFactory>,
}

impl BackendRegistry {
    pub fn empty() -> Self {
        Self {
            factories: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, name: &str, factory: BackendFactory) {
        self.factories.insert(name.to_string(), factory);
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.factories.keys().map(String::as_str)
    }

    pub fn create(&self, name: &str, params: &BackendParams) -> Result<Box<dyn Backend>> {
        self.factories
            .get(name)
            .map(|f| f(params))
            .ok_or_else(|| Error::UnknownBackend(name.to_string()))
    }

    pub fn builtin() -> &'static BackendRegistry {
        static REGISTRY: OnceLock<BackendRegistry> = OnceLock::new();
        REGISTRY.get_or_init(|| {
            let mut r = BackendRegistry::empty();
            r.register("statevector", |_| Box::new(StatevectorBackend));
            r.register("density", |_| Box::new(DensityBackend));
            r.register("trajectory", |p| {
                Box::new(TrajectoryBackend {
                    trajectories: p.trajectories,
                })
            });
            r
        })
    }
}

/// Statevector when noiseless, density matrix up to its cap, trajectories beyond.
pub fn default_backend(width: usize, noise: &NoiseParams) -> Box<dyn Backend> {
    let name = if noise.is_noiseless() {
        "statevector"
    } else if width <= MAX_DENSITY_WIDTH {
        "density"
    } else {
        "trajectory"
    };
    BackendRegistry::builtin()
        .create(name, &BackendParams::default())
        .expect("builtin backend")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Pauli;
    use crate::ucc::Angle;

    fn bits(s: &str) -> Bitstring {
        s.parse().unwrap()
    }

    fn circuit(width: usize, gates: Vec<Gate>) -> Circuit {
        let mut c = Circuit::new(width);
        for g in gates {
            c.push(g).unwrap();
        }
        c
    }

    fn obs(letters: &str) -> PauliSum {
        PauliSum::from_term(letters.parse().unwrap(), 1.0)
    }

    #[test]
    fn empty_circuit_keeps_basis_state() {
        let psi = run_statevector(&Circuit::new(4), &bits("0000")).unwrap();
        assert_eq!(psi.probability(0), 1.0);
    }

    #[test]
    fn cnot_flips_target() {
        let psi = run_statevector(&circuit(2, vec![Gate::cnot(0, 1)]), &bits("10")).unwrap();
        assert_eq!(psi.probability(0b11), 1.0);
    }

    #[test]
    fn single_qubit_expectations() {
        let zero = run_statevector(&Circuit::new(1), &bits("0")).unwrap();
        assert_eq!(expval(&zero, &obs("Z")).unwrap(), 1.0);
        assert_eq!(expval(&zero, &PauliSum::identity(1, 1.0)).unwrap(), 1.0);
        let plus = run_statevector(&circuit(1, vec![Gate::H(0)]), &bits("0")).unwrap();
        assert!((expval(&plus, &obs("X")).unwrap() - 1.0).abs() < 1e-14);
        // Rx(π/2)|0⟩ has ⟨Y⟩ = −1
        let y = run_statevector(&circuit(1, vec![Gate::Rx(0, Angle::constant(std::f64::consts::FRAC_PI_2))]), &bits("0"))
            .unwrap();
        assert!((expval(&y, &obs("Y")).unwrap() + 1.0).abs() < 1e-14);
    }

    #[test]
    fn non_hermitian_observable_rejected() {
        let psi = run_statevector(&Circuit::new(1), &bits("0")).unwrap();
        let o = PauliSum::from_term("X".parse().unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(expval(&psi, &o), Err(Error::NotHermitian));
    }

    #[test]
    fn unbound_circuit_rejected() {
        let c = circuit(1, vec![Gate::Rz(0, Angle::param(0, 1.0))]);
        assert_eq!(run_statevector(&c, &bits("0")), Err(Error::UnboundCircuit));
    }

    fn mixed_circuit() -> Circuit {
        circuit(
            3,
            vec![
                Gate::H(0),
                Gate::Rx(1, Angle::constant(0.4)),
                Gate::cnot(0, 1),
                Gate::S(2),
                Gate::Rz(1, Angle::constant(-1.1)),
                Gate::cnot(1, 2),
                Gate::H(2),
                Gate::Sdg(0),
                Gate::cnot(2, 0),
            ],
        )
    }

    #[test]
    fn noiseless_density_matches_projector() {
        let c = mixed_circuit();
        let psi = run_statevector(&c, &bits("010")).unwrap();
        let rho = run_noisy(&c, &bits("010"), &NoiseParams::noiseless()).unwrap();
        assert!(rho.max_difference(&DensityMatrix::from_statevector(&psi).unwrap()) < 1e-12);
    }

    #[test]
    fn full_two_qubit_depolarizing_mixes_pair() {
        let c = circuit(3, vec![Gate::H(0), Gate::cnot(0, 1), Gate::Rx(2, Angle::constant(0.7))]);
        let noise = NoiseParams::new(0.0, 1.0).unwrap();
        let rho = run_noisy(&c, &bits("000"), &noise).unwrap();
        for a in [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z] {
            for b in [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z] {
                let p = PauliString::from_letters(&[a, b, Pauli::I]).unwrap();
                let e = rho.pauli_expectation(&p);
                let expect = if p.is_identity() { 1.0 } else { 0.0 };
                assert!((e - expect).norm() < 1e-12, "{p}");
            }
        }
        // the untouched qubit keeps its state
        let z2 = PauliString::from_letters(&[Pauli::I, Pauli::I, Pauli::Z]).unwrap();
        assert!((rho.pauli_expectation(&z2).re - 0.7f64.cos()).abs() < 1e-12);
    }

    #[test]
    fn maximally_mixed_is_fixed_point() {
        let mut rho = DensityMatrix::maximally_mixed(3).unwrap();
        let before = rho.clone();
        rho.depolarize(1, 0.3);
        assert!(rho.max_difference(&before) < 1e-15);
        let noise = NoiseParams::new(0.2, 0.4).unwrap();
        let mut evolved = before.clone();
        evolved.apply_cnot(0, 2, noise.p2());
        evolved.apply_single(1, &gate_matrix(&Gate::H(1)).unwrap(), noise.p1());
        assert!(evolved.max_difference(&before) < 1e-15);
    }

    #[test]
    fn fused_channels_match_gate_by_gate() {
        let c = mixed_circuit();
        let noise = NoiseParams::new(0.05, 0.1).unwrap();
        let fused = run_noisy(&c, &bits("101"), &noise).unwrap();
        let mut rho = DensityMatrix::basis(&bits("101")).unwrap();
        for g in c.gates() {
            match g {
                Gate::Cnot { control, target } => rho.apply_cnot(*control, *target, noise.p2()),
                _ => rho.apply_single(g.qubits().0, &gate_matrix(g).unwrap(), noise.p1()),
            }
        }
        assert!(fused.max_difference(&rho) < 1e-13);
        assert!((fused.trace() - 1.0).abs() < 1e-12);
        assert!(fused.purity() < 1.0);
    }

    #[test]
    fn density_stays_positive() {
        let c = mixed_circuit();
        let noise = NoiseParams::new(0.1, 0.3).unwrap();
        let rho = run_noisy(&c, &bits("011"), &noise).unwrap();
        let m = rho.to_matrix();
        assert!((&m - m.adjoint()).norm() < 1e-12);
        // hermitian ρ as a real symmetric 2d×2d matrix [[A, −B], [B, A]]
        let d = rho.dim();
        let real = nalgebra::DMatrix::from_fn(2 * d, 2 * d, |r, c| {
            let z = m[(r % d, c % d)];
            match (r < d, c < d) {
                (true, true) | (false, false) => z.re,
                (true, false) => -z.im,
                (false, true) => z.im,
            }
        });
        let min = nalgebra::SymmetricEigen::new(real).eigenvalues.min();
        assert!(min > -1e-9, "{min}");
    }

    #[test]
    fn trajectories_converge_to_density() {
        let c = mixed_circuit();
        let noise = NoiseParams::new(0.1, 0.2).unwrap();
        let rho = run_noisy(&c, &bits("000"), &noise).unwrap();
        let ens = run_trajectories(&c, &bits("000"), &noise, 4000, 11).unwrap();
        for letters in ["ZII", "IZI", "XXI", "IYZ"] {
            let p: PauliString = letters.parse().unwrap();
            let (a, b) = (rho.pauli_expectation(&p).re, ens.pauli_expectation(&p).re);
            assert!((a - b).abs() < 0.05, "{letters}: {a} vs {b}");
        }
        let again = run_trajectories(&c, &bits("000"), &noise, 50, 11).unwrap();
        assert_eq!(again.states(), &ens.states()[..50]);
    }

    #[test]
    fn sampling_is_seeded_and_unbiased() {
        let c = circuit(2, vec![Gate::Rx(0, Angle::constant(1.0)), Gate::cnot(0, 1)]);
        let psi = run_statevector(&c, &bits("00")).unwrap();
        let h = PauliSum::from_text(2, "0.5 0.0 ZZ\n-1.5 0.0 ZI\n0.25 0.0 XX\n2.0 0.0 II\n").unwrap();
        let exact = expval(&psi, &h).unwrap();
        let shots = 100_000;
        let s1 = sample_energy(&psi, &h, shots, 5).unwrap();
        assert_eq!(s1, sample_energy(&psi, &h, shots, 5).unwrap());
        let sigma: f64 = h
            .terms()
            .filter(|(p, _)| !p.is_identity())
            .map(|(p, c)| {
                let e = psi.pauli_expectation(p).re;
                c.norm_sqr() * (1.0 - e * e) / shots as f64
            })
            .sum::<f64>()
            .sqrt();
        assert!((s1 - exact).abs() < 5.0 * sigma, "{s1} {exact} {sigma}");
    }

    #[test]
    fn diagonal_sampling_on_basis_state_is_exact() {
        let psi = run_statevector(&Circuit::new(2), &bits("10")).unwrap();
        let h = PauliSum::from_text(2, "3.0 0.0 ZI\n1.0 0.0 IZ\n0.5 0.0 II\n").unwrap();
        assert_eq!(sample_energy(&psi, &h, 1, 0).unwrap(), -3.0 + 1.0 + 0.5);
        assert_eq!(sample_energy(&psi, &PauliSum::identity(2, 1.0), 7, 3).unwrap(), 1.0);
    }

    #[test]
    fn noise_validation_and_shots_parse() {
        assert!(NoiseParams::new(-0.1, 0.0).is_err());
        assert!(NoiseParams::new(0.0, 1.5).is_err());
        assert_eq!("exact".parse::<Shots>().unwrap(), Shots::Exact);
        assert_eq!("8192".parse::<Shots>().unwrap(), Shots::Count(8192));
        assert!("0".parse::<Shots>().is_err());
    }

    #[test]
    fn registry_names() {
        let names: Vec<_> = BackendRegistry::builtin().names().collect();
        assert_eq!(names, ["density", "statevector", "trajectory"]);
        assert!(BackendRegistry::builtin().create("gpu", &BackendParams::default()).is_err());
        assert_eq!(default_backend(8, &NoiseParams::new(0.01, 0.0).unwrap()).name(), "density");
        assert_eq!(default_backend(12, &NoiseParams::new(0.01, 0.0).unwrap()).name(), "trajectory");
    }
}
