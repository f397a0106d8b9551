use anyhow::Result;
use boson_encode::encodings::{build_codebook, Codebook, EncodingKind};
use boson_encode::hamiltonian::{assemble_from_qff, QuarticForceField, VibrationalHamiltonian};
use boson_encode::modal::{Configuration, SystemSpec};
use boson_encode::pauli::PauliSum;
use boson_encode::ucc::{build_uccsd, ClusterOperator};
use boson_encode::vqe::UccAnsatz;

/// A force field encoded one way, with its ansatz.
pub struct Study {
    pub kind: EncodingKind,
    pub hamiltonian: VibrationalHamiltonian,
    pub pauli: PauliSum,
    pub cluster: ClusterOperator,
    pub codebook: Codebook,
    pub ansatz: UccAnsatz,
}

impl Study {
    pub fn new(qff: &QuarticForceField, system: &SystemSpec, kind: EncodingKind, gsep: bool) -> Result<Self> {
        let hamiltonian = assemble_from_qff(qff, system)?;
        let codebook = build_codebook(system, kind, gsep)?;
        let pauli = hamiltonian.to_pauli(&codebook)?;
        let cluster = build_uccsd(system, &Configuration::ground(system));
        let ansatz = UccAnsatz::new(&cluster, &codebook)?;
        Ok(Self {
            kind,
            hamiltonian,
            pauli,
            cluster,
            codebook,
            ansatz,
        })
    }

    /// Ascending eigenvalues in the configuration basis.
    pub fn exact_spectrum(&self) -> Result<Vec<f64>> {
        Ok(self.hamiltonian.exact_diagonalize()?)
    }
}

/// Worker pool sized by `BOSON_ENCODE_THREADS`, or rayon's default.
pub fn worker_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = std::env::var("BOSON_ENCODE_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        builder = builder.num_threads(n);
    }
    Ok(builder.build()?)
}
