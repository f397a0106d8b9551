use super::{Encoding, EncodingKind};
use crate::error::{Error, Result};
use crate::modal::{Bitstring, MAX_BITS};

/// Number of `width`-bit strings with Hamming weight at most `threshold`.
fn truncated_count(width: usize, threshold: usize) -> u128 {
    let mut total = 0u128;
    let mut binom = 1u128; // C(width, 0)
    for w in 0..=threshold.min(width) {
        total += binom;
        binom = binom * (width - w) as u128 / (w + 1) as u128;
    }
    total
}

/// Smallest register width whose weight-`<= threshold` strings can hold `modal_dim` modals.
pub fn compact_width(modal_dim: usize, threshold: usize) -> usize {
    let mut q = 1;
    while truncated_count(q, threshold) < modal_dim as u128 {
        q += 1;
    }
    q
}

/// Compact encoding with selective Hamming truncation.
///
/// Codewords are the register strings of weight at most `threshold`, taken in
/// ascending weight and ascending integer value within a weight class. The
/// all-zero string is therefore always codeword 0.
#[derive(Debug, Clone, Copy)]
pub struct Compact {
    threshold: usize,
}

impl Compact {
    pub fn new(threshold: usize) -> Result<Self> {
        if threshold == 0 {
            return Err(Error::InvalidEncoding(
                "compact encoding threshold must be at least 1".into(),
            ));
        }
        Ok(Self { threshold })
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }
}

/// Next larger integer with the same popcount (Gosper's hack).
fn next_same_weight(v: u64) -> Option<u64> {
    let c = v & v.wrapping_neg();
    let r = v.checked_add(c)?;
    Some((((r ^ v) >> 2) / c) | r)
}

impl Encoding for Compact {
    fn name(&self) -> &'static str {
        "cea"
    }

    fn kind(&self) -> EncodingKind {
        EncodingKind::Cea {
            threshold: self.threshold,
        }
    }

    fn width(&self, modal_dim: usize) -> usize {
        compact_width(modal_dim, self.threshold)
    }

    fn codewords(&self, modal_dim: usize) -> Vec<Bitstring> {
        let q = self.width(modal_dim);
        assert!(q <= MAX_BITS, "compact register of {q} qubits exceeds cap");
        let limit = if q == MAX_BITS { u64::MAX } else { (1u64 << q) - 1 };
        let mut out = Vec::with_capacity(modal_dim);
        'weights: for w in 0..=self.threshold.min(q) {
            let mut v = if w == 0 { 0 } else { (1u64 << w) - 1 };
            loop {
                if out.len() == modal_dim {
                    break 'weights;
                }
                out.push(Bitstring::from_bits(v, q).expect("within register"));
                if w == 0 {
                    break;
                }
                match next_same_weight(v) {
                    Some(n) if n <= limit => v = n,
                    _ => break,
                }
            }
        }
        out
    }
}
