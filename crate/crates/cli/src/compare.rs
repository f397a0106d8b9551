use anyhow::Result;
use boson_encode::encodings::{build_codebook, rhd_report, EncodingKind};
use boson_encode::modal::{Configuration, SystemSpec};
use boson_encode::ucc::{build_uccsd, cluster_to_pauli, count_gates, peephole_optimize, trotterize};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::report::{panel_grid, write_csv, write_json, write_svg, Series};
use crate::study::worker_pool;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRow {
    pub encoding: EncodingKind,
    pub modal_dim: usize,
    pub qubits_per_mode: usize,
    pub cnot_raw: usize,
    pub cnot_opt: usize,
    pub one_qubit_raw: usize,
    pub one_qubit_opt: usize,
    pub hamming_total: usize,
    pub hamming_relative: f64,
    pub max_single_dh: usize,
    pub max_double_dh: usize,
}

fn compare_one(system: &SystemSpec, kind: EncodingKind, gsep: bool) -> boson_encode::Result<CompareRow> {
    let cb = build_codebook(system, kind, gsep)?;
    let rhd = rhd_report(system, &[kind], gsep)?.remove(0);
    let t = build_uccsd(system, &Configuration::ground(system));
    let raw = trotterize(&cluster_to_pauli(&t, &cb)?)?;
    let (before, after) = (count_gates(&raw), count_gates(&peephole_optimize(&raw)));
    Ok(CompareRow {
        encoding: kind,
        modal_dim: system.modal_dims()[0],
        qubits_per_mode: cb.qubits_per_mode(0)?,
        cnot_raw: before.cnot,
        cnot_opt: after.cnot,
        one_qubit_raw: before.one_qubit,
        one_qubit_opt: after.one_qubit,
        hamming_total: rhd.total,
        hamming_relative: rhd.relative,
        max_single_dh: rhd.max_single,
        max_double_dh: rhd.max_double,
    })
}

/// One row per (modal dimension, encoding); cases that exceed a width cap
/// are skipped with a warning.
pub fn compare_rows(config: &RunConfig) -> Result<Vec<CompareRow>> {
    let cases: Vec<(usize, EncodingKind)> = config
        .modal_dims
        .iter()
        .flat_map(|&n| config.encodings.iter().map(move |&k| (n, k)))
        .collect();
    let systems: Vec<SystemSpec> = cases.iter().map(|&(n, _)| config.system(n)).collect::<Result<_>>()?;
    let rows: Vec<_> = worker_pool()?.install(|| {
        cases
            .par_iter()
            .zip(&systems)
            .map(|(&(_, kind), system)| compare_one(system, kind, config.gsep))
            .collect()
    });
    let mut out = Vec::with_capacity(rows.len());
    for ((n, kind), row) in cases.into_iter().zip(rows) {
        match row {
            Ok(r) => out.push(r),
            Err(e) => eprintln!("warning: skipping {kind} at N_l = {n}: {e}"),
        }
    }
    Ok(out)
}

fn series(rows: &[CompareRow], kinds: &[EncodingKind], y: impl Fn(&CompareRow) -> f64) -> Vec<Series> {
    kinds
        .iter()
        .map(|k| Series {
            name: k.to_string(),
            points: rows
                .iter()
                .filter(|r| r.encoding == *k)
                .map(|r| (r.modal_dim as f64, y(r)))
                .collect(),
        })
        .collect()
}

pub fn cmd_compare(config: &RunConfig) -> Result<Vec<CompareRow>> {
    let rows = compare_rows(config)?;
    let header = config.header_line();
    let dir = &config.out;
    std::fs::create_dir_all(dir)?;
    let gate_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.encoding.to_string(),
                r.modal_dim.to_string(),
                r.cnot_raw.to_string(),
                r.cnot_opt.to_string(),
                r.one_qubit_raw.to_string(),
                r.one_qubit_opt.to_string(),
            ]
        })
        .collect();
    write_csv(
        &dir.join("gate_counts.csv"),
        &header,
        &["encoding", "N_l", "cnot_raw", "cnot_opt", "one_qubit_raw", "one_qubit_opt"],
        &gate_rows,
    )?;
    let hamming_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.encoding.to_string(),
                r.modal_dim.to_string(),
                r.qubits_per_mode.to_string(),
                r.hamming_total.to_string(),
                r.hamming_relative.to_string(),
                r.max_single_dh.to_string(),
                r.max_double_dh.to_string(),
            ]
        })
        .collect();
    write_csv(
        &dir.join("hamming.csv"),
        &header,
        &[
            "encoding",
            "N_l",
            "qubits_per_mode",
            "hamming_total",
            "hamming_relative",
            "max_single_dh",
            "max_double_dh",
        ],
        &hamming_rows,
    )?;
    #[derive(Serialize)]
    struct Body<'a> {
        config: &'a RunConfig,
        rows: &'a [CompareRow],
    }
    write_json(&dir.join("compare.json"), &header, &Body { config, rows: &rows })?;
    let kinds = &config.encodings;
    let panels = vec![
        ("(a) CNOT gates, optimized".to_string(), series(&rows, kinds, |r| r.cnot_opt as f64)),
        ("(b) total Hamming distance".to_string(), series(&rows, kinds, |r| r.hamming_total as f64)),
        ("(c) relative Hamming distance".to_string(), series(&rows, kinds, |r| r.hamming_relative)),
        ("(d) qubits per mode".to_string(), series(&rows, kinds, |r| r.qubits_per_mode as f64)),
    ];
    write_svg(&dir.join("compare.svg"), &header, &panel_grid(&panels, 2))?;
    Ok(rows)
}
