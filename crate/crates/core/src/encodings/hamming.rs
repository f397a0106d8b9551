use serde::{Deserialize, Serialize};

use super::{build_codebook, Codebook, EncodingKind};
use crate::error::Result;
use crate::modal::{hamming_distance, SystemSpec};

/// Hamming distance between the codewords of target modal `r` and source modal `s`.
pub fn excitation_hamming(codebook: &Codebook, mode: usize, r: usize, s: usize) -> Result<usize> {
    hamming_distance(&codebook.codeword(mode, r)?, &codebook.codeword(mode, s)?)
}

/// Total Hamming distance of all single and double cluster excitations out of
/// the ground reference for one encoding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhdRow {
    pub encoding: EncodingKind,
    pub modal_dims: Vec<usize>,
    pub singles: usize,
    pub doubles: usize,
    pub total: usize,
    /// Direct-mapping total, `2 * singles + 4 * doubles`.
    pub total_dm: usize,
    pub relative: f64,
    pub max_single: usize,
    pub max_double: usize,
}

pub fn rhd_report(system: &SystemSpec, kinds: &[EncodingKind], gsep: bool) -> Result<Vec<RhdRow>> {
    kinds
        .iter()
        .map(|&kind| {
            let cb = build_codebook(system, kind, gsep)?;
            rhd_row(&cb)
        })
        .collect()
}

fn rhd_row(cb: &Codebook) -> Result<RhdRow> {
    let system = cb.system();
    let reference = cb.reference();
    // per-mode excitation distances out of the reference modal
    let per_mode: Vec<Vec<usize>> = (0..system.modes())
        .map(|l| {
            let s = reference.modal(l);
            (0..system.modal_dims()[l])
                .filter(|&r| r != s)
                .map(|r| excitation_hamming(cb, l, r, s))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let singles: usize = per_mode.iter().map(Vec::len).sum();
    let total_singles: usize = per_mode.iter().flatten().sum();
    let max_single = per_mode.iter().flatten().copied().max().unwrap_or(0);

    let mut doubles = 0;
    let mut total_doubles = 0;
    let mut max_double = 0;
    for l in 0..per_mode.len() {
        for m in l + 1..per_mode.len() {
            for &a in &per_mode[l] {
                for &b in &per_mode[m] {
                    doubles += 1;
                    total_doubles += a + b;
                    max_double = max_double.max(a + b);
                }
            }
        }
    }
    let total = total_singles + total_doubles;
    let total_dm = 2 * singles + 4 * doubles;
    Ok(RhdRow {
        encoding: cb.kind(),
        modal_dims: system.modal_dims().to_vec(),
        singles,
        doubles,
        total,
        total_dm,
        relative: if total_dm == 0 { 0.0 } else { total as f64 / total_dm as f64 },
        max_single,
        max_double,
    })
}
