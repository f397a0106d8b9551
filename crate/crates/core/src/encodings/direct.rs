use super::{Encoding, EncodingKind};
use crate::modal::Bitstring;

/// One-hot encoding: one qubit per modal, codeword `k` has only bit `k` set.
#[derive(Debug, Clone, Copy, Default)]
pub struct Direct;

impl Encoding for Direct {
    fn name(&self) -> &'static str {
        "dm"
    }

    fn kind(&self) -> EncodingKind {
        EncodingKind::Direct
    }

    fn width(&self, modal_dim: usize) -> usize {
        modal_dim
    }

    fn codewords(&self, modal_dim: usize) -> Vec<Bitstring> {
        (0..modal_dim)
            .map(|k| Bitstring::from_bits(1 << k, modal_dim).expect("one-hot width within cap"))
            .collect()
    }

    // No one-hot word is all zeros.
    fn supports_ground_state_relabel(&self) -> bool {
        false
    }
}
