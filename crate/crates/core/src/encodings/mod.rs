//! Bosonic-to-qubit encodings.
//!
//! Each encoding is a strategy behind the [`Encoding`] trait that, given a
//! modal dimension, yields the register width and the natural codeword
//! order. Strategies are registered by name in an [`EncodingRegistry`] and
//! resolved at runtime from an [`EncodingKind`] (typically parsed from the
//! command line). A [`Codebook`] freezes the per-mode codewords for one
//! system, applying the ground state relabeling when requested.

mod binary;
mod codebook;
mod compact;
mod direct;
mod gray;
mod hamming;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modal::Bitstring;

pub use binary::StandardBinary;
pub use codebook::{build_codebook, build_codebook_with_reference, Codebook, CodebookDocument};
pub use compact::{compact_width, Compact};
pub use direct::Direct;
pub use gray::{gray_word, GrayCode};
pub use hamming::{excitation_hamming, rhd_report, RhdRow};

/// Default Hamming-weight cap for the compact encoding.
pub const DEFAULT_CEA_THRESHOLD: usize = 2;

/// A per-mode codeword assignment strategy.
pub trait Encoding: fmt::Debug + Send + Sync {
    /// Registry name (`dm`, `sb`, `gc`, `cea`).
    fn name(&self) -> &'static str;

    fn kind(&self) -> EncodingKind;

    /// Qubits needed for a mode with `modal_dim` modals.
    fn width(&self, modal_dim: usize) -> usize;

    /// Codewords for modal indices `0..modal_dim` in the encoding's natural order.
    fn codewords(&self, modal_dim: usize) -> Vec<Bitstring>;

    /// Whether the all-zero register can hold the reference modal.
    fn supports_ground_state_relabel(&self) -> bool {
        true
    }
}

/// Which encoding to use, as chosen in configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EncodingKind {
    Direct,
    StandardBinary,
    GrayCode,
    /// Compact encoding restricted to codewords of Hamming weight `<= threshold`.
    Cea { threshold: usize },
}

impl EncodingKind {
    pub fn cea() -> Self {
        EncodingKind::Cea {
            threshold: DEFAULT_CEA_THRESHOLD,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            EncodingKind::Direct => "dm",
            EncodingKind::StandardBinary => "sb",
            EncodingKind::GrayCode => "gc",
            EncodingKind::Cea { .. } => "cea",
        }
    }

    pub fn threshold(&self) -> Option<usize> {
        match self {
            EncodingKind::Cea { threshold } => Some(*threshold),
            _ => None,
        }
    }

    /// Resolve the strategy through the built-in registry.
    pub fn strategy(&self) -> Result<Box<dyn Encoding>> {
        EncodingRegistry::builtin().create(
            self.name(),
            &EncodingParams {
                threshold: self.threshold(),
            },
        )
    }
}

impl fmt::Display for EncodingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EncodingKind::Cea { threshold } => write!(f, "cea({threshold})"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for EncodingKind {
    type Err = Error;

    /// Accepts `dm`, `sb`, `gc`, `cea` and `cea(T)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let (name, threshold) = match s.strip_suffix(')').and_then(|r| r.split_once('(')) {
            Some((name, t)) => {
                let t = t
                    .trim()
                    .parse::<usize>()
                    .map_err(|e| Error::Parse(format!("threshold `{t}`: {e}")))?;
                (name.to_string(), Some(t))
            }
            None => (s, None),
        };
        EncodingRegistry::builtin()
            .create(&name, &EncodingParams { threshold })
            .map(|e| e.kind())
    }
}

impl Serialize for EncodingKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EncodingKind {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// Construction parameters handed to an encoding factory.
#[derive(Debug, Clone, Default)]
pub struct EncodingParams {
    pub threshold: Option<usize>,
}

pub type EncodingFactory = fn(&EncodingParams) -> Result<Box<dyn Encoding>>;

/// Name-indexed table of encoding factories.
pub struct EncodingRegistry {
    factories: BTreeMap<&'static str, EncodingFactory>,
}

impl EncodingRegistry {
    pub fn empty() -> Self {
        Self {
            factories: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, name: &'static str, factory: EncodingFactory) {
        self.factories.insert(name, factory);
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.factories.keys().copied()
    }

    pub fn create(&self, name: &str, params: &EncodingParams) -> Result<Box<dyn Encoding>> {
        let factory = self
            .factories
            .get(name)
            .ok_or_else(|| Error::UnknownEncoding(name.to_string()))?;
        factory(params)
    }

    /// Registry holding `dm`, `sb`, `gc` and `cea`.
    pub fn builtin() -> &'static EncodingRegistry {
        static BUILTIN: OnceLock<EncodingRegistry> = OnceLock::new();
        BUILTIN.get_or_init(|| {
            let mut reg = EncodingRegistry::empty();
            reg.register("dm", |_| Ok(Box::new(Direct)));
            reg.register("sb", |_| Ok(Box::new(StandardBinary)));
            reg.register("gc", |_| Ok(Box::new(GrayCode)));
            reg.register("cea", |p| {
                Ok(Box::new(Compact::new(
                    p.threshold.unwrap_or(DEFAULT_CEA_THRESHOLD),
                )?))
            });
            reg
        })
    }
}

/// `ceil(log2 n)`, at least one qubit.
pub(crate) fn log2_width(n: usize) -> usize {
    let mut q = 1;
    while (1usize << q) < n {
        q += 1;
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_resolves_all_builtins() {
        let reg = EncodingRegistry::builtin();
        assert_eq!(reg.names().collect::<Vec<_>>(), ["cea", "dm", "gc", "sb"]);
        for name in ["dm", "sb", "gc", "cea"] {
            let e = reg.create(name, &EncodingParams::default()).unwrap();
            assert_eq!(e.name(), name);
        }
        assert!(matches!(
            reg.create("unary", &EncodingParams::default()),
            Err(Error::UnknownEncoding(_))
        ));
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("dm".parse::<EncodingKind>().unwrap(), EncodingKind::Direct);
        assert_eq!("cea".parse::<EncodingKind>().unwrap(), EncodingKind::cea());
        assert_eq!(
            "CEA(3)".parse::<EncodingKind>().unwrap(),
            EncodingKind::Cea { threshold: 3 }
        );
        assert!("cea(0)".parse::<EncodingKind>().is_err());
        assert!("xyz".parse::<EncodingKind>().is_err());
        let k = EncodingKind::Cea { threshold: 2 };
        assert_eq!(k.to_string().parse::<EncodingKind>().unwrap(), k);
    }

    #[test]
    fn log2_widths() {
        assert_eq!(log2_width(2), 1);
        assert_eq!(log2_width(4), 2);
        assert_eq!(log2_width(5), 3);
        assert_eq!(log2_width(16), 4);
        assert_eq!(log2_width(17), 5);
    }
}
