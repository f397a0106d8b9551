//! Mode/modal structure of a vibrational system and the bitstring helpers
//! shared by every encoding.
//!
//! Bit order is little-endian throughout: bit `i` of a register carries the
//! coefficient of `2^i`. The textual form of a [`Bitstring`] lists bit 0
//! first (MSB-last), so index 1 on three qubits prints as `100`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Widest register a [`Bitstring`] can describe.
pub const MAX_BITS: usize = 64;

/// Mode count and per-mode modal dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SystemSpec {
    modal_dims: Vec<usize>,
}

impl SystemSpec {
    pub fn new(modal_dims: Vec<usize>) -> Result<Self> {
        if modal_dims.is_empty() {
            return Err(Error::InvalidSystem("at least one mode is required".into()));
        }
        if let Some((l, &n)) = modal_dims.iter().enumerate().find(|(_, &n)| n < 2) {
            return Err(Error::InvalidSystem(format!(
                "mode {l} has {n} modals, need at least 2"
            )));
        }
        Ok(Self { modal_dims })
    }

    /// `modes` modes with the same modal dimension.
    pub fn uniform(modes: usize, modal_dim: usize) -> Result<Self> {
        Self::new(vec![modal_dim; modes])
    }

    pub fn modes(&self) -> usize {
        self.modal_dims.len()
    }

    pub fn modal_dims(&self) -> &[usize] {
        &self.modal_dims
    }

    pub fn modal_dim(&self, mode: usize) -> Result<usize> {
        self.modal_dims.get(mode).copied().ok_or(Error::ModeOutOfRange {
            mode,
            modes: self.modes(),
        })
    }

    /// Dimension of the configuration space, `prod N_l`.
    pub fn configuration_count(&self) -> usize {
        self.modal_dims.iter().product()
    }

    /// All configurations in row-major order (last mode fastest).
    pub fn configurations(&self) -> impl Iterator<Item = Configuration> + '_ {
        (0..self.configuration_count()).map(move |flat| self.unflatten(flat))
    }

    /// Row-major index of a configuration.
    pub fn flatten(&self, config: &Configuration) -> usize {
        config
            .occupied()
            .iter()
            .zip(&self.modal_dims)
            .fold(0, |acc, (&r, &n)| acc * n + r)
    }

    pub fn unflatten(&self, mut flat: usize) -> Configuration {
        let mut occupied = vec![0; self.modes()];
        for (slot, &n) in occupied.iter_mut().zip(&self.modal_dims).rev() {
            *slot = flat % n;
            flat /= n;
        }
        Configuration { occupied }
    }

    pub(crate) fn check_modal(&self, mode: usize, modal: usize) -> Result<()> {
        let dim = self.modal_dim(mode)?;
        if modal >= dim {
            return Err(Error::ModalOutOfRange { mode, modal, dim });
        }
        Ok(())
    }
}

/// One occupied modal per mode (a Hartree product label).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Configuration {
    occupied: Vec<usize>,
}

impl Configuration {
    pub fn new(system: &SystemSpec, occupied: Vec<usize>) -> Result<Self> {
        if occupied.len() != system.modes() {
            return Err(Error::LengthMismatch {
                left: occupied.len(),
                right: system.modes(),
            });
        }
        for (mode, &modal) in occupied.iter().enumerate() {
            system.check_modal(mode, modal)?;
        }
        Ok(Self { occupied })
    }

    /// The all-ground reference `[0, ..., 0]`.
    pub fn ground(system: &SystemSpec) -> Self {
        Self {
            occupied: vec![0; system.modes()],
        }
    }

    pub fn occupied(&self) -> &[usize] {
        &self.occupied
    }

    pub fn modal(&self, mode: usize) -> usize {
        self.occupied[mode]
    }
}

/// Fixed-width string of bits, bit 0 least significant.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bitstring {
    bits: u64,
    width: usize,
}

impl Bitstring {
    pub fn zeros(width: usize) -> Result<Self> {
        Self::from_bits(0, width)
    }

    pub fn from_bits(bits: u64, width: usize) -> Result<Self> {
        if width > MAX_BITS {
            return Err(Error::WidthCap {
                width,
                cap: MAX_BITS,
            });
        }
        if width < MAX_BITS && bits >> width != 0 {
            return Err(Error::IndexOutOfRange {
                index: bits as usize,
                width,
            });
        }
        Ok(Self { bits, width })
    }

    pub fn from_slice(bits: &[u8]) -> Result<Self> {
        let mut packed = 0u64;
        for (i, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => packed |= 1 << i,
                _ => return Err(Error::Parse(format!("bit value {b} at position {i}"))),
            }
        }
        Self::from_bits(packed, bits.len())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn as_u64(&self) -> u64 {
        self.bits
    }

    pub fn bit(&self, i: usize) -> bool {
        i < self.width && (self.bits >> i) & 1 == 1
    }

    pub fn to_vec(&self) -> Vec<u8> {
        (0..self.width).map(|i| self.bit(i) as u8).collect()
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Concatenate `other` above `self` (its bit 0 lands at `self.width()`).
    pub fn concat(&self, other: &Bitstring) -> Result<Bitstring> {
        let width = self.width + other.width;
        if width > MAX_BITS {
            return Err(Error::WidthCap {
                width,
                cap: MAX_BITS,
            });
        }
        Ok(Bitstring {
            bits: self.bits | other.bits.checked_shl(self.width as u32).unwrap_or(0),
            width,
        })
    }
}

impl fmt::Display for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.width {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bitstring({self})")
    }
}

impl FromStr for Bitstring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::Parse(format!("invalid bit character `{other}`"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::from_slice(&bits)
    }
}

impl Serialize for Bitstring {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Bitstring {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Little-endian bits of `index`, zero-padded to `width`.
pub fn binary_decompose(index: usize, width: usize) -> Result<Bitstring> {
    if width < MAX_BITS && (index as u64) >> width != 0 {
        return Err(Error::IndexOutOfRange { index, width });
    }
    Bitstring::from_bits(index as u64, width)
}

pub fn hamming_distance(a: &Bitstring, b: &Bitstring) -> Result<usize> {
    if a.width != b.width {
        return Err(Error::LengthMismatch {
            left: a.width,
            right: b.width,
        });
    }
    Ok((a.bits ^ b.bits).count_ones() as usize)
}

pub fn hamming_weight(a: &Bitstring) -> usize {
    a.weight()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bs(s: &str) -> Bitstring {
        s.parse().unwrap()
    }

    #[test]
    fn decompose_examples() {
        assert_eq!(binary_decompose(0, 3).unwrap().to_vec(), vec![0, 0, 0]);
        assert_eq!(binary_decompose(5, 3).unwrap().to_vec(), vec![1, 0, 1]);
        assert_eq!(binary_decompose(7, 3).unwrap().to_vec(), vec![1, 1, 1]);
        assert!(matches!(
            binary_decompose(8, 3),
            Err(Error::IndexOutOfRange { index: 8, width: 3 })
        ));
    }

    #[test]
    fn distance_examples() {
        // written MSB-first in the usual notation: 001 vs 101
        let a = Bitstring::from_slice(&[1, 0, 0]).unwrap();
        let b = Bitstring::from_slice(&[1, 0, 1]).unwrap();
        assert_eq!(hamming_distance(&a, &b).unwrap(), 1);
        assert_eq!(hamming_distance(&a, &a).unwrap(), 0);
        assert_eq!(hamming_distance(&bs("000"), &bs("111")).unwrap(), 3);
        assert!(hamming_distance(&bs("00"), &bs("000")).is_err());
    }

    #[test]
    fn weight_examples() {
        assert_eq!(hamming_weight(&bs("000")), 0);
        assert_eq!(hamming_weight(&bs("101")), 2);
        assert_eq!(hamming_weight(&bs("111")), 3);
    }

    #[test]
    fn system_validation() {
        assert!(SystemSpec::new(vec![]).is_err());
        assert!(SystemSpec::new(vec![2, 1]).is_err());
        let sys = SystemSpec::new(vec![2, 3]).unwrap();
        assert_eq!(sys.configuration_count(), 6);
        assert!(Configuration::new(&sys, vec![1, 3]).is_err());
        assert!(Configuration::new(&sys, vec![1]).is_err());
        let c = Configuration::new(&sys, vec![1, 2]).unwrap();
        assert_eq!(sys.flatten(&c), 5);
        assert_eq!(sys.unflatten(5), c);
    }

    #[test]
    fn text_form_is_bit_zero_first() {
        assert_eq!(binary_decompose(1, 3).unwrap().to_string(), "100");
        assert_eq!(bs("011").as_u64(), 6);
    }

    proptest! {
        #[test]
        fn triangle_and_xor(a in 0u64..256, b in 0u64..256, c in 0u64..256) {
            let (a, b, c) = (
                Bitstring::from_bits(a, 8).unwrap(),
                Bitstring::from_bits(b, 8).unwrap(),
                Bitstring::from_bits(c, 8).unwrap(),
            );
            let ab = hamming_distance(&a, &b).unwrap();
            prop_assert!(ab <= hamming_distance(&a, &c).unwrap() + hamming_distance(&c, &b).unwrap());
            let xor = Bitstring::from_bits(a.as_u64() ^ b.as_u64(), 8).unwrap();
            prop_assert_eq!(ab, hamming_weight(&xor));
            prop_assert_eq!(ab, hamming_distance(&b, &a).unwrap());
        }

        #[test]
        fn decompose_round_trip(width in 1usize..12, seed in any::<u64>()) {
            let index = (seed % (1u64 << width)) as usize;
            let b = binary_decompose(index, width).unwrap();
            let back = b.to_vec().iter().enumerate().map(|(i, &v)| (v as usize) << i).sum::<usize>();
            prop_assert_eq!(back, index);
            prop_assert_eq!(b.to_string().parse::<Bitstring>().unwrap(), b);
        }
    }
}
