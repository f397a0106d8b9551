use super::{log2_width, Encoding, EncodingKind};
use crate::modal::{binary_decompose, Bitstring};

/// Standard binary: modal `k` is the little-endian binary word of `k`.
#[derive(Debug, Clone, Copy, Default)]
pub struct StandardBinary;

impl Encoding for StandardBinary {
    fn name(&self) -> &'static str {
        "sb"
    }

    fn kind(&self) -> EncodingKind {
        EncodingKind::StandardBinary
    }

    fn width(&self, modal_dim: usize) -> usize {
        log2_width(modal_dim)
    }

    fn codewords(&self, modal_dim: usize) -> Vec<Bitstring> {
        let q = self.width(modal_dim);
        (0..modal_dim)
            .map(|k| binary_decompose(k, q).expect("k < 2^q by construction"))
            .collect()
    }
}
