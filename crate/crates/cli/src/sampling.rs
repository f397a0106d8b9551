use anyhow::{ensure, Result};
use boson_encode::encodings::EncodingKind;
use boson_encode::vqe::{derive_seed, qeom_excitations, vqe_minimize, QeomResult, VqeResult};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::report::{cumulative, histogram_svg, write_csv, write_json, write_svg, Histogram};
use crate::study::{worker_pool, Study};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VqeSample {
    pub sample: usize,
    /// Ground energy minus the exact ground eigenvalue (cm⁻¹).
    pub error: f64,
    pub result: VqeResult,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QeomSample {
    pub sample: usize,
    pub ground: VqeResult,
    pub excited: QeomResult,
    /// Errors of the ground and each reported excited total energy.
    pub errors: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VqeRun {
    pub encoding: EncodingKind,
    pub qubits: usize,
    pub exact_ground: f64,
    pub samples: Vec<VqeSample>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QeomRun {
    pub encoding: EncodingKind,
    pub qubits: usize,
    /// Exact ground and excited energies, same length as each sample's `errors`.
    pub exact: Vec<f64>,
    pub samples: Vec<QeomSample>,
}

/// Seed handed to sample `index`.
pub fn sample_seed(seed: u64, index: usize) -> u64 {
    derive_seed(seed, index as u64)
}

fn studies(config: &RunConfig) -> Result<Vec<Study>> {
    let qff = config.force_field()?;
    let system = config.system(config.modal_dims[0])?;
    config
        .encodings
        .iter()
        .map(|&k| Study::new(&qff, &system, k, config.gsep))
        .collect()
}

fn file_stem(command: &str, kind: EncodingKind) -> String {
    match kind.threshold() {
        Some(t) if t != boson_encode::encodings::DEFAULT_CEA_THRESHOLD => format!("{command}_{}{t}", kind.name()),
        _ => format!("{command}_{}", kind.name()),
    }
}

pub fn run_vqe(config: &RunConfig, study: &Study, exact_ground: f64) -> Result<VqeRun> {
    let vqe = config.vqe_config();
    let samples = worker_pool()?.install(|| {
        (0..config.samples)
            .into_par_iter()
            .map(|i| {
                let result = vqe_minimize(&study.pauli, &study.ansatz, &vqe, sample_seed(config.seed, i))?;
                Ok(VqeSample {
                    sample: i,
                    error: result.energy - exact_ground,
                    result,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(VqeRun {
        encoding: study.kind,
        qubits: study.codebook.total_width(),
        exact_ground,
        samples,
    })
}

pub fn run_qeom(config: &RunConfig, study: &Study, exact: &[f64]) -> Result<QeomRun> {
    let states = config.excited_states.min(study.cluster.len());
    ensure!(exact.len() > states, "spectrum has fewer than {} states", states + 1);
    let exact = exact[..=states].to_vec();
    let vqe = config.vqe_config();
    let samples = worker_pool()?.install(|| {
        (0..config.samples)
            .into_par_iter()
            .map(|i| {
                let ground = vqe_minimize(&study.pauli, &study.ansatz, &vqe, sample_seed(config.seed, i))?;
                let excited = qeom_excitations(&ground, &study.pauli, &study.cluster, &study.codebook, &study.ansatz, &vqe)?;
                let mut errors = vec![ground.energy - exact[0]];
                for (s, e) in exact.iter().enumerate().skip(1) {
                    errors.push(excited.total_energies.get(s - 1).copied().unwrap_or(f64::NAN) - e);
                }
                Ok(QeomSample {
                    sample: i,
                    ground,
                    excited,
                    errors,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(QeomRun {
        encoding: study.kind,
        qubits: study.codebook.total_width(),
        exact,
        samples,
    })
}

fn histogram_or_warn(values: &[f64], bins: usize, what: &str) -> Option<Histogram> {
    let h = Histogram::new(values, bins);
    if h.is_none() {
        eprintln!(
            "warning: {what}: {} samples are fewer than {bins} bins, no histogram written",
            values.len()
        );
    }
    h
}

fn histogram_rows(state: usize, h: &Histogram) -> Vec<Vec<String>> {
    h.counts
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let (lo, hi) = h.edges(i);
            vec![state.to_string(), i.to_string(), lo.to_string(), hi.to_string(), c.to_string()]
        })
        .collect()
}

fn cumulative_rows(state: usize, errors: &[f64]) -> Vec<Vec<String>> {
    cumulative(errors)
        .into_iter()
        .enumerate()
        .map(|(i, (e, f))| vec![state.to_string(), (i + 1).to_string(), e.to_string(), f.to_string()])
        .collect()
}

const HISTOGRAM_COLUMNS: [&str; 5] = ["state", "bin", "lower", "upper", "count"];
const CUMULATIVE_COLUMNS: [&str; 4] = ["state", "rank", "abs_error", "fraction"];

pub fn cmd_vqe(config: &RunConfig) -> Result<Vec<VqeRun>> {
    let header = config.header_line();
    std::fs::create_dir_all(&config.out)?;
    let mut runs = Vec::new();
    let studies = studies(config)?;
    let exact = studies[0].exact_spectrum()?[0];
    for study in &studies {
        let run = run_vqe(config, study, exact)?;
        let stem = file_stem("vqe", study.kind);
        let dir = &config.out;
        let rows: Vec<Vec<String>> = run
            .samples
            .iter()
            .map(|s| {
                vec![
                    s.sample.to_string(),
                    s.result.seed.to_string(),
                    s.result.energy.to_string(),
                    s.error.to_string(),
                    s.result.best_evaluated.to_string(),
                    s.result.evaluations.to_string(),
                    s.result.converged.to_string(),
                ]
            })
            .collect();
        write_csv(
            &dir.join(format!("{stem}.csv")),
            &header,
            &["sample", "seed", "energy", "error", "best_evaluated", "evaluations", "converged"],
            &rows,
        )?;
        let energies: Vec<f64> = run.samples.iter().map(|s| s.result.energy).collect();
        let errors: Vec<f64> = run.samples.iter().map(|s| s.error).collect();
        if let Some(h) = histogram_or_warn(&energies, config.bins, &stem) {
            write_csv(
                &dir.join(format!("{stem}_histogram.csv")),
                &header,
                &HISTOGRAM_COLUMNS,
                &histogram_rows(0, &h),
            )?;
            let title = format!("{} ground-state energies (cm⁻¹)", study.kind);
            write_svg(&dir.join(format!("{stem}_histogram.svg")), &header, &histogram_svg(&title, &h))?;
        }
        write_csv(
            &dir.join(format!("{stem}_cumulative.csv")),
            &header,
            &CUMULATIVE_COLUMNS,
            &cumulative_rows(0, &errors),
        )?;
        #[derive(Serialize)]
        struct Body<'a> {
            config: &'a RunConfig,
            run: &'a VqeRun,
        }
        write_json(&dir.join(format!("{stem}.json")), &header, &Body { config, run: &run })?;
        runs.push(run);
    }
    Ok(runs)
}

pub fn cmd_qeom(config: &RunConfig) -> Result<Vec<QeomRun>> {
    let header = config.header_line();
    std::fs::create_dir_all(&config.out)?;
    let mut runs = Vec::new();
    let studies = studies(config)?;
    let exact = studies[0].exact_spectrum()?;
    for study in &studies {
        let run = run_qeom(config, study, &exact)?;
        let stem = file_stem("qeom", study.kind);
        let dir = &config.out;
        let mut rows = Vec::new();
        for s in &run.samples {
            for (state, err) in s.errors.iter().enumerate() {
                let (total, excitation) = match state {
                    0 => (s.ground.energy, 0.0),
                    k => (
                        s.excited.total_energies.get(k - 1).copied().unwrap_or(f64::NAN),
                        s.excited.excitation_energies.get(k - 1).copied().unwrap_or(f64::NAN),
                    ),
                };
                rows.push(vec![
                    s.sample.to_string(),
                    s.ground.seed.to_string(),
                    state.to_string(),
                    total.to_string(),
                    excitation.to_string(),
                    err.to_string(),
                    s.excited.max_imaginary.to_string(),
                    s.excited.singular_metric.to_string(),
                    s.ground.converged.to_string(),
                ]);
            }
        }
        write_csv(
            &dir.join(format!("{stem}.csv")),
            &header,
            &[
                "sample",
                "seed",
                "state",
                "total_energy",
                "excitation_energy",
                "error",
                "max_imaginary",
                "singular_metric",
                "converged",
            ],
            &rows,
        )?;
        let mut hist_rows = Vec::new();
        let mut cum_rows = Vec::new();
        for state in 0..run.exact.len() {
            let errors: Vec<f64> = run.samples.iter().map(|s| s.errors[state]).collect();
            let totals: Vec<f64> = errors.iter().map(|e| e + run.exact[state]).collect();
            if let Some(h) = histogram_or_warn(&totals, config.bins, &format!("{stem} state {state}")) {
                hist_rows.extend(histogram_rows(state, &h));
            }
            cum_rows.extend(cumulative_rows(state, &errors));
        }
        if !hist_rows.is_empty() {
            write_csv(
                &dir.join(format!("{stem}_histogram.csv")),
                &header,
                &HISTOGRAM_COLUMNS,
                &hist_rows,
            )?;
        }
        write_csv(
            &dir.join(format!("{stem}_cumulative.csv")),
            &header,
            &CUMULATIVE_COLUMNS,
            &cum_rows,
        )?;
        #[derive(Serialize)]
        struct Body<'a> {
            config: &'a RunConfig,
            run: &'a QeomRun,
        }
        write_json(&dir.join(format!("{stem}.json")), &header, &Body { config, run: &run })?;
        runs.push(run);
    }
    Ok(runs)
}
