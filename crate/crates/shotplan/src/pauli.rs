//! Pauli strings and the two compatibility relations used for grouping.
//!
//! Strings are stored as two bit-planes (an x-bit and a z-bit per qubit,
//! `I = 00`, `X = 10`, `Z = 01`, `Y = 11`) so that compatibility checks run
//! word-at-a-time. Large multiset instances perform millions of pairwise
//! checks, which rules out per-letter loops.
//!
//! Qubit indices are 1-based in all text forms (matching the usual `Z_1`
//! convention) and 0-based in the API.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Single-qubit Pauli letter. `I` is the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    /// (x-bit, z-bit) of the symplectic encoding.
    pub fn bits(self) -> (bool, bool) {
        match self {
            PauliLetter::I => (false, false),
            PauliLetter::X => (true, false),
            PauliLetter::Z => (false, true),
            PauliLetter::Y => (true, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => PauliLetter::I,
            (true, false) => PauliLetter::X,
            (false, true) => PauliLetter::Z,
            (true, true) => PauliLetter::Y,
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'I' => Some(PauliLetter::I),
            'X' => Some(PauliLetter::X),
            'Y' => Some(PauliLetter::Y),
            'Z' => Some(PauliLetter::Z),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }
}

impl fmt::Display for PauliLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

pub(crate) const WORD_BITS: usize = 64;

pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(WORD_BITS)
}

/// An n-qubit Pauli string (no phase), the unit of observation.
///
/// Immutable after construction; cheap to clone and safe to share.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
}

impl PauliString {
    /// The all-identity string on `n` qubits (`n >= 1`).
    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("qubit count must be >= 1".into()));
        }
        let w = words_for(n);
        Ok(PauliString {
            n,
            x: vec![0; w],
            z: vec![0; w],
        })
    }

    pub fn from_letters(letters: &[PauliLetter]) -> Result<Self> {
        let mut s = PauliString::identity(letters.len())?;
        for (i, &l) in letters.iter().enumerate() {
            s.set(i, l);
        }
        Ok(s)
    }

    /// Number of qubits.
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// Letter at 0-based qubit `i`.
    pub fn letter(&self, i: usize) -> PauliLetter {
        assert!(i < self.n, "qubit index out of range");
        let (w, b) = (i / WORD_BITS, i % WORD_BITS);
        PauliLetter::from_bits((self.x[w] >> b) & 1 == 1, (self.z[w] >> b) & 1 == 1)
    }

    pub fn letters(&self) -> impl Iterator<Item = PauliLetter> + '_ {
        (0..self.n).map(move |i| self.letter(i))
    }

    pub(crate) fn set(&mut self, i: usize, l: PauliLetter) {
        let (w, b) = (i / WORD_BITS, i % WORD_BITS);
        let (xb, zb) = l.bits();
        self.x[w] = (self.x[w] & !(1 << b)) | ((xb as u64) << b);
        self.z[w] = (self.z[w] & !(1 << b)) | ((zb as u64) << b);
    }

    pub(crate) fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub(crate) fn z_words(&self) -> &[u64] {
        &self.z
    }

    /// Build from raw bit-planes; bits beyond `n` are cleared.
    pub(crate) fn from_planes(n: usize, mut x: Vec<u64>, mut z: Vec<u64>) -> Self {
        debug_assert_eq!(x.len(), words_for(n));
        debug_assert_eq!(z.len(), words_for(n));
        let tail = n % WORD_BITS;
        if tail != 0 {
            let mask = (1u64 << tail) - 1;
            *x.last_mut().unwrap() &= mask;
            *z.last_mut().unwrap() &= mask;
        }
        PauliString { n, x, z }
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(&x, &z)| (x | z).count_ones() as usize)
            .sum()
    }

    /// True when every qubit carries a non-identity letter (a full basis
    /// assignment, i.e. one shot's measurement setting).
    pub fn is_full_basis(&self) -> bool {
        self.weight() == self.n
    }

    /// Canonical dense text form (uppercase, one letter per qubit).
    pub fn dense(&self) -> String {
        self.letters().map(|l| l.to_char()).collect()
    }

    fn check_len(&self, other: &PauliString) -> Result<()> {
        if self.n != other.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        Ok(())
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dense())
    }
}

impl Ord for PauliString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters().cmp(other.letters())
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_pauli(s)
    }
}

/// Parse a Pauli string.
///
/// Accepted forms:
/// - dense: `"XIZY"` (case-insensitive),
/// - sparse: `"X1 Z3"` with 1-based qubit indices, identities elsewhere,
///   optionally suffixed with `"@ n=4"` to fix the qubit count. Without the
///   suffix the qubit count is the largest index mentioned.
///
/// The canonical output form ([`PauliString::dense`]) is dense uppercase;
/// `format(parse(t))` round-trips any accepted input to that form.
pub fn parse_pauli(text: &str) -> Result<PauliString> {
    let (body, explicit_n) = match text.split_once('@') {
        Some((left, right)) => {
            let right = right.trim();
            let n_str = right
                .strip_prefix("n")
                .map(|r| r.trim_start().strip_prefix('=').unwrap_or(r).trim())
                .ok_or_else(|| Error::Parse(format!("expected `n=<count>` after '@': {right:?}")))?;
            let n: usize = n_str
                .parse()
                .map_err(|_| Error::Parse(format!("bad qubit count {n_str:?}")))?;
            if n == 0 {
                return Err(Error::Parse("qubit count must be >= 1".into()));
            }
            (left, Some(n))
        }
        None => (text, None),
    };

    let tokens: Vec<&str> = body.split_whitespace().collect();
    if tokens.is_empty() {
        return Err(Error::Parse("empty Pauli string".into()));
    }

    let is_dense =
        tokens.len() == 1 && tokens[0].chars().all(|c| PauliLetter::from_char(c).is_some());
    if is_dense {
        let letters: Vec<PauliLetter> = tokens[0]
            .chars()
            .map(|c| PauliLetter::from_char(c).unwrap())
            .collect();
        if let Some(n) = explicit_n {
            if n != letters.len() {
                return Err(Error::Parse(format!(
                    "dense string has {} letters but n={n} was given",
                    letters.len()
                )));
            }
        }
        return PauliString::from_letters(&letters);
    }

    // Sparse form: tokens like "X1", "Z13".
    let mut entries: Vec<(usize, PauliLetter)> = Vec::with_capacity(tokens.len());
    for tok in &tokens {
        let mut chars = tok.chars();
        let letter = chars
            .next()
            .and_then(PauliLetter::from_char)
            .filter(|l| *l != PauliLetter::I)
            .ok_or_else(|| Error::Parse(format!("invalid sparse term {tok:?}")))?;
        let idx_str = chars.as_str();
        let idx: usize = idx_str
            .parse()
            .map_err(|_| Error::Parse(format!("invalid qubit index in {tok:?}")))?;
        if idx == 0 {
            return Err(Error::Parse(format!(
                "qubit indices are 1-based, got 0 in {tok:?}"
            )));
        }
        entries.push((idx, letter));
    }

    let max_idx = entries.iter().map(|&(i, _)| i).max().unwrap();
    let n = explicit_n.unwrap_or(max_idx);
    if max_idx > n {
        return Err(Error::Parse(format!(
            "qubit index {max_idx} out of range for n={n}"
        )));
    }
    let mut s = PauliString::identity(n)?;
    for &(idx, letter) in &entries {
        if s.letter(idx - 1) != PauliLetter::I {
            return Err(Error::Parse(format!("duplicate qubit index {idx}")));
        }
        s.set(idx - 1, letter);
    }
    Ok(s)
}

/// True iff at every qubit the two letters are equal or at least one is `I`.
///
/// Strings related this way can be measured in parallel with single-qubit
/// (product) measurements.
pub fn qubitwise_compatible(a: &PauliString, b: &PauliString) -> Result<bool> {
    a.check_len(b)?;
    Ok(qubitwise_compatible_unchecked(a, b))
}

pub(crate) fn qubitwise_compatible_unchecked(a: &PauliString, b: &PauliString) -> bool {
    for w in 0..a.x.len() {
        let support_a = a.x[w] | a.z[w];
        let support_b = b.x[w] | b.z[w];
        let differ = (a.x[w] ^ b.x[w]) | (a.z[w] ^ b.z[w]);
        if support_a & support_b & differ != 0 {
            return false;
        }
    }
    true
}

/// True iff the two strings commute as operators: the number of qubits where
/// both letters are non-identity and different is even.
pub fn fully_commutes(a: &PauliString, b: &PauliString) -> Result<bool> {
    a.check_len(b)?;
    Ok(fully_commutes_unchecked(a, b))
}

pub(crate) fn fully_commutes_unchecked(a: &PauliString, b: &PauliString) -> bool {
    let mut parity = 0u32;
    for w in 0..a.x.len() {
        parity ^= ((a.x[w] & b.z[w]) ^ (a.z[w] & b.x[w])).count_ones() & 1;
    }
    parity == 0
}

/// Which pairs of observables may share a shot.
///
/// The relation is symmetric. It may hold between equal strings; the
/// scheduler separately forbids two copies of the same observable instance
/// from sharing a shot. Further relations can be added as variants, with the
/// shot-state fast path falling back to pairwise checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    /// Letters agree or are identity at every qubit ("qubit-wise commute").
    #[serde(rename = "qwc")]
    QubitWise,
    /// Full operator commutation.
    #[serde(rename = "commute")]
    FullCommute,
}

impl Relation {
    pub fn compatible(self, a: &PauliString, b: &PauliString) -> Result<bool> {
        match self {
            Relation::QubitWise => qubitwise_compatible(a, b),
            Relation::FullCommute => fully_commutes(a, b),
        }
    }

    pub(crate) fn compatible_unchecked(self, a: &PauliString, b: &PauliString) -> bool {
        match self {
            Relation::QubitWise => qubitwise_compatible_unchecked(a, b),
            Relation::FullCommute => fully_commutes_unchecked(a, b),
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::QubitWise => f.write_str("qwc"),
            Relation::FullCommute => f.write_str("commute"),
        }
    }
}

impl FromStr for Relation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "qwc" => Ok(Relation::QubitWise),
            "commute" => Ok(Relation::FullCommute),
            other => Err(Error::InvalidArgument(format!(
                "unknown relation {other:?} (expected qwc or commute)"
            ))),
        }
    }
}

/// Whether weight-k enumeration includes lower weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightMode {
    Exactly,
    UpTo,
}

impl FromStr for WeightMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exactly" => Ok(WeightMode::Exactly),
            "up_to" => Ok(WeightMode::UpTo),
            other => Err(Error::InvalidArgument(format!(
                "unknown weight mode {other:?} (expected exactly or up_to)"
            ))),
        }
    }
}

/// Enumerate the Pauli strings of weight `k` (or weight 1..=k with
/// [`WeightMode::UpTo`]) on `n` qubits, sorted lexicographically in dense
/// form with letter order I < X < Y < Z.
///
/// Counts are C(n,k)·3^k for `Exactly` and the sum over 1..=k for `UpTo`.
pub fn enumerate_weight_k(n: usize, k: usize, mode: WeightMode) -> Result<Vec<PauliString>> {
    if n == 0 {
        return Err(Error::InvalidArgument("qubit count must be >= 1".into()));
    }
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "weight k={k} out of range 1..={n}"
        )));
    }
    let weights: Vec<usize> = match mode {
        WeightMode::Exactly => vec![k],
        WeightMode::UpTo => (1..=k).collect(),
    };
    let mut out = Vec::new();
    let non_identity = [PauliLetter::X, PauliLetter::Y, PauliLetter::Z];
    for &j in &weights {
        let mut positions: Vec<usize> = (0..j).collect();
        loop {
            // All 3^j letter assignments for this position set.
            let mut assign = vec![0usize; j];
            loop {
                let mut s = PauliString::identity(n)?;
                for (slot, &pos) in positions.iter().enumerate() {
                    s.set(pos, non_identity[assign[slot]]);
                }
                out.push(s);
                // Increment base-3 counter.
                let mut carry = true;
                for digit in assign.iter_mut().rev() {
                    if *digit < 2 {
                        *digit += 1;
                        carry = false;
                        break;
                    }
                    *digit = 0;
                }
                if carry {
                    break;
                }
            }
            // Next position combination in lexicographic order.
            let mut idx = j;
            while idx > 0 {
                idx -= 1;
                if positions[idx] < n - (j - idx) {
                    positions[idx] += 1;
                    for later in idx + 1..j {
                        positions[later] = positions[later - 1] + 1;
                    }
                    break;
                }
                if idx == 0 {
                    idx = usize::MAX;
                    break;
                }
            }
            if idx == usize::MAX {
                break;
            }
        }
    }
    out.sort();
    Ok(out)
}
