use super::{log2_width, Encoding, EncodingKind};
use crate::modal::Bitstring;

/// Binary-reflected Gray word of `k`.
pub fn gray_word(k: u64) -> u64 {
    k ^ (k >> 1)
}

/// Gray code: same register as standard binary, neighbouring modals one bit apart.
#[derive(Debug, Clone, Copy, Default)]
pub struct GrayCode;

impl Encoding for GrayCode {
    fn name(&self) -> &'static str {
        "gc"
    }

    fn kind(&self) -> EncodingKind {
        EncodingKind::GrayCode
    }

    fn width(&self, modal_dim: usize) -> usize {
        log2_width(modal_dim)
    }

    fn codewords(&self, modal_dim: usize) -> Vec<Bitstring> {
        let q = self.width(modal_dim);
        (0..modal_dim as u64)
            .map(|k| Bitstring::from_bits(gray_word(k), q).expect("gray word fits register"))
            .collect()
    }
}
