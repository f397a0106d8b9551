//! Pauli strings, weighted Pauli sums, and the qubit images of bosonic
//! transition operators.
//!
//! State convention: `|0>` is the +1 eigenstate of `Z`,
//! `σ+ = |1><0| = (X - iY)/2` and `σ- = |0><1| = (X + iY)/2`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::encodings::Codebook;
use crate::error::{Error, Result};
use crate::modal::MAX_BITS;

/// Coefficients below this magnitude are dropped by [`PauliSum::simplify`].
pub const DROP_TOLERANCE: f64 = 1e-12;

/// Default width cap for dense matrices.
pub const DEFAULT_MATRIX_CAP: usize = 14;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// `self * other = i^k * result`.
    fn mul(self, other: Pauli) -> (Pauli, u8) {
        use Pauli::*;
        match (self, other) {
            (I, p) | (p, I) => (p, 0),
            (X, X) | (Y, Y) | (Z, Z) => (I, 0),
            (X, Y) => (Z, 1),
            (Y, X) => (Z, 3),
            (Y, Z) => (X, 1),
            (Z, Y) => (X, 3),
            (Z, X) => (Y, 1),
            (X, Z) => (Y, 3),
        }
    }
}

/// Tensor product of single-qubit Paulis over a register of `width` qubits.
///
/// Stored as X and Z bit masks (Y sets both); qubit 0 is bit 0.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    x: u64,
    z: u64,
    width: usize,
}

impl PauliString {
    pub fn identity(width: usize) -> Self {
        assert!(width <= MAX_BITS, "Pauli width {width} exceeds {MAX_BITS}");
        Self { x: 0, z: 0, width }
    }

    pub fn single(width: usize, qubit: usize, p: Pauli) -> Result<Self> {
        let mut s = Self::identity(width);
        s.set(qubit, p)?;
        Ok(s)
    }

    pub fn from_letters(letters: &[Pauli]) -> Result<Self> {
        if letters.len() > MAX_BITS {
            return Err(Error::WidthCap {
                width: letters.len(),
                cap: MAX_BITS,
            });
        }
        let mut s = Self::identity(letters.len());
        for (q, &p) in letters.iter().enumerate() {
            s.set(q, p)?;
        }
        Ok(s)
    }

    pub fn set(&mut self, qubit: usize, p: Pauli) -> Result<()> {
        if qubit >= self.width {
            return Err(Error::IndexOutOfRange {
                index: qubit,
                width: self.width,
            });
        }
        let (x, z) = p.bits();
        let bit = 1u64 << qubit;
        self.x = if x { self.x | bit } else { self.x & !bit };
        self.z = if z { self.z | bit } else { self.z & !bit };
        Ok(())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn get(&self, qubit: usize) -> Pauli {
        Pauli::from_bits((self.x >> qubit) & 1 == 1, (self.z >> qubit) & 1 == 1)
    }

    pub fn letters(&self) -> Vec<Pauli> {
        (0..self.width).map(|q| self.get(q)).collect()
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    /// Mask of qubits carrying a non-identity letter.
    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    pub fn weight(&self) -> usize {
        self.support().count_ones() as usize
    }

    pub fn is_identity(&self) -> bool {
        self.support() == 0
    }

    /// Diagonal in the computational basis (only I and Z letters).
    pub fn is_diagonal(&self) -> bool {
        self.x == 0
    }

    /// Action on a computational basis state: `P|b> = phase * |b'>`.
    pub fn apply(&self, basis: u64) -> (Complex64, u64) {
        let ny = (self.x & self.z).count_ones();
        let sign = if (basis & self.z).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
        (i_pow(ny as u8) * sign, basis ^ self.x)
    }

    /// `self * other = phase * product`.
    pub fn mul(&self, other: &PauliString) -> (Complex64, PauliString) {
        debug_assert_eq!(self.width, other.width);
        let mut power = 0u8;
        let mut both = self.support() & other.support();
        while both != 0 {
            let q = both.trailing_zeros() as usize;
            power += self.get(q).mul(other.get(q)).1;
            both &= both - 1;
        }
        (
            i_pow(power),
            PauliString {
                x: self.x ^ other.x,
                z: self.z ^ other.z,
                width: self.width,
            },
        )
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let anti = (self.x & other.z).count_ones() + (self.z & other.x).count_ones();
        anti.is_multiple_of(2)
    }

    /// Place this string on `width` qubits starting at `offset`.
    pub fn embed(&self, width: usize, offset: usize) -> Result<PauliString> {
        if offset + self.width > width || width > MAX_BITS {
            return Err(Error::WidthCap {
                width: offset + self.width,
                cap: width.min(MAX_BITS),
            });
        }
        Ok(PauliString {
            x: self.x << offset,
            z: self.z << offset,
            width,
        })
    }
}

fn i_pow(k: u8) -> Complex64 {
    match k % 4 {
        0 => ONE,
        1 => I,
        2 => -ONE,
        _ => -I,
    }
}

impl Ord for PauliString {
    /// Letter-by-letter from qubit 0 with `I < X < Y < Z`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.width.cmp(&other.width).then_with(|| {
            let diff = (self.x ^ other.x) | (self.z ^ other.z);
            if diff == 0 {
                return Ordering::Equal;
            }
            let q = diff.trailing_zeros() as usize;
            self.get(q).cmp(&other.get(q))
        })
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.width {
            write!(f, "{}", self.get(q).letter())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(|c| match c {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::Parse(format!("invalid Pauli letter `{other}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_letters(&letters)
    }
}

/// Weighted sum of Pauli strings over one register.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    width: usize,
    terms: BTreeMap<PauliString, Complex64>,
}

impl PauliSum {
    pub fn zero(width: usize) -> Self {
        assert!(width <= MAX_BITS, "Pauli width {width} exceeds {MAX_BITS}");
        Self {
            width,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(width: usize, coeff: impl Into<Complex64>) -> Self {
        Self::from_term(PauliString::identity(width), coeff)
    }

    pub fn from_term(p: PauliString, coeff: impl Into<Complex64>) -> Self {
        let mut s = Self::zero(p.width());
        s.add_term(p, coeff.into());
        s.simplify();
        s
    }

    pub fn from_terms<I>(width: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (PauliString, Complex64)>,
    {
        let mut s = Self::zero(width);
        for (p, c) in terms {
            if p.width() != width {
                return Err(Error::LengthMismatch {
                    left: p.width(),
                    right: width,
                });
            }
            s.add_term(p, c);
        }
        s.simplify();
        Ok(s)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PauliString, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, p: &PauliString) -> Complex64 {
        self.terms.get(p).copied().unwrap_or(ZERO)
    }

    /// Accumulate without simplifying.
    pub fn add_term(&mut self, p: PauliString, coeff: Complex64) {
        debug_assert_eq!(p.width(), self.width);
        *self.terms.entry(p).or_insert(ZERO) += coeff;
    }

    pub fn simplify(&mut self) {
        self.terms.retain(|_, c| c.norm() >= DROP_TOLERANCE);
    }

    pub fn add(&self, other: &PauliSum) -> Result<PauliSum> {
        self.check_width(other)?;
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(*p, *c);
        }
        out.simplify();
        Ok(out)
    }

    pub fn add_scaled(&mut self, other: &PauliSum, scale: Complex64) -> Result<()> {
        self.check_width(other)?;
        for (p, c) in &other.terms {
            self.add_term(*p, c * scale);
        }
        Ok(())
    }

    pub fn sub(&self, other: &PauliSum) -> Result<PauliSum> {
        let mut out = self.clone();
        out.add_scaled(other, -ONE)?;
        out.simplify();
        Ok(out)
    }

    pub fn scale(&self, factor: impl Into<Complex64>) -> PauliSum {
        let f = factor.into();
        let mut out = self.clone();
        out.terms.values_mut().for_each(|c| *c *= f);
        out.simplify();
        out
    }

    pub fn multiply(&self, other: &PauliSum) -> Result<PauliSum> {
        self.check_width(other)?;
        let mut out = PauliSum::zero(self.width);
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                let (phase, pq) = p.mul(q);
                out.add_term(pq, a * b * phase);
            }
        }
        out.simplify();
        Ok(out)
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &PauliSum) -> Result<PauliSum> {
        self.multiply(other)?.sub(&other.multiply(self)?)
    }

    pub fn adjoint(&self) -> PauliSum {
        PauliSum {
            width: self.width,
            terms: self.terms.iter().map(|(p, c)| (*p, c.conj())).collect(),
        }
    }

    /// `t − t†`; every remaining coefficient is purely imaginary.
    pub fn anti_hermitian_part(&self) -> PauliSum {
        self.sub(&self.adjoint()).expect("same width")
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.im.abs() <= tol)
    }

    pub fn is_anti_hermitian(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.re.abs() <= tol)
    }

    /// Tensor product with `other` placed on the qubits above `self`.
    pub fn kron(&self, other: &PauliSum) -> Result<PauliSum> {
        let width = self.width + other.width;
        let mut out = PauliSum::zero(width);
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                let lo = p.embed(width, 0)?;
                let hi = q.embed(width, self.width)?;
                out.add_term(lo.mul(&hi).1, a * b);
            }
        }
        out.simplify();
        Ok(out)
    }

    /// Place this sum on `width` qubits starting at `offset`.
    pub fn embed(&self, width: usize, offset: usize) -> Result<PauliSum> {
        let mut out = PauliSum::zero(width);
        for (p, c) in &self.terms {
            out.add_term(p.embed(width, offset)?, *c);
        }
        Ok(out)
    }

    pub fn max_weight(&self) -> usize {
        self.terms.keys().map(PauliString::weight).max().unwrap_or(0)
    }

    /// Dense `2^width` matrix; `cap` bounds the width.
    pub fn to_matrix(&self, cap: usize) -> Result<DMatrix<Complex64>> {
        if self.width > cap {
            return Err(Error::WidthCap {
                width: self.width,
                cap,
            });
        }
        let dim = 1usize << self.width;
        let mut m = DMatrix::from_element(dim, dim, ZERO);
        for (p, c) in &self.terms {
            for col in 0..dim as u64 {
                let (phase, row) = p.apply(col);
                m[(row as usize, col as usize)] += c * phase;
            }
        }
        Ok(m)
    }

    /// `<row|self|col>` for computational basis states.
    pub fn matrix_element(&self, row: u64, col: u64) -> Complex64 {
        self.terms
            .iter()
            .filter(|(p, _)| col ^ p.x_mask() == row)
            .map(|(p, c)| c * p.apply(col).0)
            .sum()
    }

    /// Text form: one `<re> <im> <letters>` line per term, qubit 0 first.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (p, c) in &self.terms {
            out.push_str(&format!("{:?} {:?} {}\n", c.re, c.im, p));
        }
        out
    }

    pub fn from_text(width: usize, text: &str) -> Result<PauliSum> {
        let mut terms = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [re, im, letters] = fields[..] else {
                return Err(Error::Parse(format!("line {}: expected 3 fields", n + 1)));
            };
            let parse = |v: &str| {
                v.parse::<f64>()
                    .map_err(|e| Error::Parse(format!("line {}: {e}", n + 1)))
            };
            terms.push((letters.parse()?, Complex64::new(parse(re)?, parse(im)?)));
        }
        PauliSum::from_terms(width, terms)
    }

    fn check_width(&self, other: &PauliSum) -> Result<()> {
        if self.width != other.width {
            return Err(Error::LengthMismatch {
                left: self.width,
                right: other.width,
            });
        }
        Ok(())
    }
}

/// How a bosonic transition `a†_r a_s` is written on a mode register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LadderForm {
    /// Raising/lowering factors on differing bits plus the fewest `(I±Z)/2`
    /// projectors on agreeing bits needed to single out `code(s)` (and
    /// `code(r)` for the adjoint) among the mode's codewords. Exact on the
    /// encoded subspace for every encoding.
    Exact,
    /// Plain bitwise product `∏ (σ+)^{r_i} (σ−)^{s_i}`, identity elsewhere.
    /// Exact for the direct mapping; cheaper but leaky for compact codes.
    Product,
}

/// Single-qubit factor `|a><b|` as a Pauli sum on one qubit.
fn outer(a: bool, b: bool) -> [(Pauli, Complex64); 2] {
    let h = Complex64::new(0.5, 0.0);
    let ih = Complex64::new(0.0, 0.5);
    match (a, b) {
        (false, false) => [(Pauli::I, h), (Pauli::Z, h)],
        (true, true) => [(Pauli::I, h), (Pauli::Z, -h)],
        (true, false) => [(Pauli::X, h), (Pauli::Y, -ih)],
        (false, true) => [(Pauli::X, h), (Pauli::Y, ih)],
    }
}

/// Expand `⊗_q |a_q><b_q|` over the listed qubits into a Pauli sum.
fn product_of_outers(width: usize, factors: &[(usize, bool, bool)]) -> PauliSum {
    let mut terms: Vec<(PauliString, Complex64)> = vec![(PauliString::identity(width), ONE)];
    for &(q, a, b) in factors {
        let mut next = Vec::with_capacity(terms.len() * 2);
        for (p, c) in &terms {
            for (letter, f) in outer(a, b) {
                let mut np = *p;
                np.set(q, letter).expect("qubit within register");
                next.push((np, c * f));
            }
        }
        terms = next;
    }
    PauliSum::from_terms(width, terms).expect("uniform width")
}

/// Agreeing bits chosen as projectors for the exact form.
fn exact_projector_bits(words: &[u64], code_r: u64, code_s: u64, register: u64) -> u64 {
    let diff = code_r ^ code_s;
    let agree = register & !diff;
    // codewords that the raising/lowering factors alone would not reject
    let mut pending: Vec<u64> = words
        .iter()
        .copied()
        .filter(|&c| {
            (c != code_s && c & diff == code_s & diff) || (c != code_r && c & diff == code_r & diff)
        })
        .collect();
    let mut chosen = 0u64;
    while !pending.is_empty() {
        let mut best = (0usize, 0usize);
        let mut bits = agree & !chosen;
        while bits != 0 {
            let q = bits.trailing_zeros() as usize;
            let hits = pending
                .iter()
                .filter(|&&c| (c ^ code_s) >> q & 1 == 1)
                .count();
            if hits > best.1 {
                best = (q, hits);
            }
            bits &= bits - 1;
        }
        debug_assert!(best.1 > 0, "distinct codewords always separable");
        chosen |= 1 << best.0;
        pending.retain(|&c| (c ^ code_s) >> best.0 & 1 == 0);
    }
    chosen
}

/// Qubit image of `a†_r a_s` on mode `mode`, exact on the encoded subspace.
///
/// `r == s` yields the projector onto the modal's codeword.
pub fn ladder_to_pauli(codebook: &Codebook, mode: usize, r: usize, s: usize) -> Result<PauliSum> {
    ladder_to_pauli_with(codebook, mode, r, s, LadderForm::Exact)
}

pub fn ladder_to_pauli_with(
    codebook: &Codebook,
    mode: usize,
    r: usize,
    s: usize,
    form: LadderForm,
) -> Result<PauliSum> {
    let local = local_ladder(codebook, mode, r, s, form)?;
    local.embed(codebook.total_width(), codebook.offset(mode))
}

/// Same as [`ladder_to_pauli_with`] but on the mode register alone.
pub fn local_ladder(
    codebook: &Codebook,
    mode: usize,
    r: usize,
    s: usize,
    form: LadderForm,
) -> Result<PauliSum> {
    let width = codebook.qubits_per_mode(mode)?;
    let code_r = codebook.codeword(mode, r)?.as_u64();
    let code_s = codebook.codeword(mode, s)?.as_u64();
    let register = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
    let diff = code_r ^ code_s;
    let extra = match form {
        LadderForm::Exact => {
            let words: Vec<u64> = codebook.codewords(mode)?.iter().map(|w| w.as_u64()).collect();
            exact_projector_bits(&words, code_r, code_s, register)
        }
        // shared 1-bits give σ+σ− = |1><1|; shared 0-bits stay identity
        LadderForm::Product => code_r & code_s,
    };
    let mut factors = Vec::new();
    for q in 0..width {
        let bit = 1u64 << q;
        if (diff | extra) & bit != 0 {
            factors.push((q, code_r & bit != 0, code_s & bit != 0));
        }
    }
    Ok(product_of_outers(width, &factors))
}
