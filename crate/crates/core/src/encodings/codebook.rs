use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::EncodingKind;
use crate::error::{Error, Result};
use crate::modal::{Bitstring, Configuration, SystemSpec};

/// Frozen per-mode codewords for one system.
///
/// Mode registers are laid out in mode order: qubit `i` of mode `l` sits at
/// global position `offset(l) + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    system: SystemSpec,
    kind: EncodingKind,
    gsep: bool,
    reference: Configuration,
    codewords: Vec<Vec<Bitstring>>,
    offsets: Vec<usize>,
}

/// Codebook with the reference at the all-ground configuration.
pub fn build_codebook(system: &SystemSpec, kind: EncodingKind, gsep: bool) -> Result<Codebook> {
    build_codebook_with_reference(system, kind, gsep, &Configuration::ground(system))
}

/// Codebook for a given reference configuration.
///
/// With `gsep` set, each mode's reference modal is given the all-zero
/// codeword by exchanging it with whichever modal held it. Encodings whose
/// codewords cannot include the all-zero string (the one-hot direct mapping)
/// ignore the request and report `gsep() == false`.
pub fn build_codebook_with_reference(
    system: &SystemSpec,
    kind: EncodingKind,
    gsep: bool,
    reference: &Configuration,
) -> Result<Codebook> {
    if reference.occupied().len() != system.modes() {
        return Err(Error::LengthMismatch {
            left: reference.occupied().len(),
            right: system.modes(),
        });
    }
    let strategy = kind.strategy()?;
    let gsep = gsep && strategy.supports_ground_state_relabel();
    let mut codewords = Vec::with_capacity(system.modes());
    for (mode, &dim) in system.modal_dims().iter().enumerate() {
        system.check_modal(mode, reference.modal(mode))?;
        let mut words = strategy.codewords(dim);
        if gsep {
            let zero = words
                .iter()
                .position(|w| w.as_u64() == 0)
                .ok_or_else(|| Error::InvalidEncoding(format!("{kind} has no all-zero codeword")))?;
            words.swap(zero, reference.modal(mode));
        }
        codewords.push(words);
    }
    Codebook::from_parts(system.clone(), kind, gsep, reference.clone(), codewords)
}

impl Codebook {
    fn from_parts(
        system: SystemSpec,
        kind: EncodingKind,
        gsep: bool,
        reference: Configuration,
        codewords: Vec<Vec<Bitstring>>,
    ) -> Result<Self> {
        let mut offsets = Vec::with_capacity(codewords.len());
        let mut total = 0;
        for (mode, words) in codewords.iter().enumerate() {
            let dim = system.modal_dim(mode)?;
            if words.len() != dim {
                return Err(Error::InvalidEncoding(format!(
                    "mode {mode} has {} codewords for {dim} modals",
                    words.len()
                )));
            }
            let width = words[0].width();
            if words.iter().any(|w| w.width() != width) {
                return Err(Error::InvalidEncoding(format!("mode {mode} mixes register widths")));
            }
            let distinct: HashSet<u64> = words.iter().map(|w| w.as_u64()).collect();
            if distinct.len() != words.len() {
                return Err(Error::InvalidEncoding(format!("mode {mode} repeats a codeword")));
            }
            offsets.push(total);
            total += width;
        }
        if codewords.len() != system.modes() {
            return Err(Error::LengthMismatch {
                left: codewords.len(),
                right: system.modes(),
            });
        }
        Ok(Self {
            system,
            kind,
            gsep,
            reference,
            codewords,
            offsets,
        })
    }

    pub fn system(&self) -> &SystemSpec {
        &self.system
    }

    pub fn kind(&self) -> EncodingKind {
        self.kind
    }

    pub fn gsep(&self) -> bool {
        self.gsep
    }

    pub fn reference(&self) -> &Configuration {
        &self.reference
    }

    pub fn modes(&self) -> usize {
        self.system.modes()
    }

    pub fn qubits_per_mode(&self, mode: usize) -> Result<usize> {
        self.codewords
            .get(mode)
            .map(|w| w[0].width())
            .ok_or(Error::ModeOutOfRange {
                mode,
                modes: self.modes(),
            })
    }

    pub fn widths(&self) -> Vec<usize> {
        self.codewords.iter().map(|w| w[0].width()).collect()
    }

    /// Global position of qubit 0 of `mode`'s register.
    pub fn offset(&self, mode: usize) -> usize {
        self.offsets[mode]
    }

    pub fn total_width(&self) -> usize {
        self.widths().iter().sum()
    }

    pub fn codewords(&self, mode: usize) -> Result<&[Bitstring]> {
        self.codewords
            .get(mode)
            .map(Vec::as_slice)
            .ok_or(Error::ModeOutOfRange {
                mode,
                modes: self.modes(),
            })
    }

    pub fn codeword(&self, mode: usize, modal: usize) -> Result<Bitstring> {
        self.system.check_modal(mode, modal)?;
        Ok(self.codewords[mode][modal])
    }

    /// Global register state of a configuration.
    pub fn encode(&self, config: &Configuration) -> Result<Bitstring> {
        if config.occupied().len() != self.modes() {
            return Err(Error::LengthMismatch {
                left: config.occupied().len(),
                right: self.modes(),
            });
        }
        let mut state = Bitstring::zeros(0)?;
        for (mode, &modal) in config.occupied().iter().enumerate() {
            state = state.concat(&self.codeword(mode, modal)?)?;
        }
        Ok(state)
    }

    /// Register state of the reference Hartree product.
    pub fn reference_state(&self) -> Bitstring {
        self.encode(&self.reference).expect("reference validated at construction")
    }

    /// Encoded basis states, indexed like [`SystemSpec::configurations`].
    pub fn encoded_basis(&self) -> Vec<u64> {
        self.system
            .configurations()
            .map(|c| self.encode(&c).expect("valid configuration").as_u64())
            .collect()
    }

    pub fn to_document(&self) -> CodebookDocument {
        CodebookDocument {
            encoding: self.kind,
            gsep: self.gsep,
            modal_dims: self.system.modal_dims().to_vec(),
            reference: self.reference.occupied().to_vec(),
            modes: self
                .codewords
                .iter()
                .map(|words| words.iter().map(|w| w.to_string()).collect())
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("codebook serializes")
    }

    pub fn from_document(doc: &CodebookDocument) -> Result<Self> {
        let system = SystemSpec::new(doc.modal_dims.clone())?;
        let reference = Configuration::new(&system, doc.reference.clone())?;
        let codewords = doc
            .modes
            .iter()
            .map(|words| words.iter().map(|w| w.parse()).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts(system, doc.encoding, doc.gsep, reference, codewords)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: CodebookDocument =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_document(&doc)
    }
}

/// JSON form of a codebook. Codewords are written bit 0 first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodebookDocument {
    pub encoding: EncodingKind,
    pub gsep: bool,
    pub modal_dims: Vec<usize>,
    pub reference: Vec<usize>,
    pub modes: Vec<Vec<String>>,
}
