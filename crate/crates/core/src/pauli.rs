//! Packed n-qubit Pauli operators.
//!
//! A [`PauliString`] stores one X bit and one Z bit per qubit in 64-bit words.
//! Internally the operator is `i^phase * P_0 ⊗ ... ⊗ P_{n-1}` with each factor in
//! `{I, X, Y, Z}`; products of anticommuting strings carry an odd phase, which is
//! never returned as a [`Sign`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// Overall ±1 factor of a Hermitian Pauli string.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }

    pub fn from_minus(minus: bool) -> Self {
        if minus {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

/// Single-qubit Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// The three non-identity letters in `X, Y, Z` order.
    pub const NONTRIVIAL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];
}

/// The fifteen non-identity two-qubit Paulis, in lexicographic `(first, second)`
/// order over `I, X, Y, Z`.
pub fn two_qubit_paulis() -> [(Pauli, Pauli); 15] {
    const L: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    let mut out = [(Pauli::I, Pauli::I); 15];
    let mut k = 0;
    for a in L {
        for b in L {
            if a == Pauli::I && b == Pauli::I {
                continue;
            }
            out[k] = (a, b);
            k += 1;
        }
    }
    out
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    /// Power of `i` in front of the letter form, modulo 4.
    phase: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        let w = words_for(n);
        Self {
            n,
            x: vec![0; w],
            z: vec![0; w],
            phase: 0,
        }
    }

    /// Builds `±P` from raw masks. Bits above `n` must be clear.
    pub fn from_masks(n: usize, x: Vec<u64>, z: Vec<u64>, sign: Sign) -> Result<Self> {
        let w = words_for(n);
        if x.len() != w || z.len() != w {
            return Err(Error::SizeMismatch {
                expected: w,
                found: x.len().max(z.len()),
            });
        }
        let mut p = Self { n, x, z, phase: 0 };
        if p.has_stray_bits() {
            return Err(Error::InvalidArgument(format!(
                "mask bits set beyond qubit count {n}"
            )));
        }
        p.phase = if sign.is_minus() { 2 } else { 0 };
        Ok(p)
    }

    /// Single-qubit Pauli `letter` on qubit `q` of an `n`-qubit register.
    pub fn single(n: usize, q: usize, letter: Pauli) -> Self {
        let mut p = Self::identity(n);
        p.set(q, letter);
        p
    }

    pub fn x(n: usize, q: usize) -> Self {
        Self::single(n, q, Pauli::X)
    }

    pub fn y(n: usize, q: usize) -> Self {
        Self::single(n, q, Pauli::Y)
    }

    pub fn z(n: usize, q: usize) -> Self {
        Self::single(n, q, Pauli::Z)
    }

    /// Product of `letter` over every qubit in `support`.
    pub fn on_support(n: usize, support: &[usize], letter: Pauli) -> Self {
        let mut p = Self::identity(n);
        for &q in support {
            p.set(q, letter);
        }
        p
    }

    fn has_stray_bits(&self) -> bool {
        let rem = self.n % 64;
        if rem == 0 || self.x.is_empty() {
            return false;
        }
        let mask = !((1u64 << rem) - 1);
        let last = self.x.len() - 1;
        (self.x[last] | self.z[last]) & mask != 0
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    pub fn x_bit(&self, q: usize) -> bool {
        self.x[q >> 6] >> (q & 63) & 1 == 1
    }

    pub fn z_bit(&self, q: usize) -> bool {
        self.z[q >> 6] >> (q & 63) & 1 == 1
    }

    pub fn get(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x_bit(q), self.z_bit(q))
    }

    /// Replaces the letter on qubit `q`, keeping the overall sign of the letter form.
    pub fn set(&mut self, q: usize, letter: Pauli) {
        assert!(q < self.n, "qubit {q} out of range for {} qubits", self.n);
        let (w, b) = (q >> 6, 1u64 << (q & 63));
        let (x, z) = letter.bits();
        self.x[w] = if x { self.x[w] | b } else { self.x[w] & !b };
        self.z[w] = if z { self.z[w] | b } else { self.z[w] & !b };
    }

    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&q| self.get(q) != Pauli::I).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.weight() == 0 && self.phase == 0
    }

    /// True when both masks are zero, whatever the sign.
    pub fn is_trivial(&self) -> bool {
        self.weight() == 0
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase % 2 == 0
    }

    /// Sign of a Hermitian string; `None` for the `±i` products of anticommuting
    /// factors.
    pub fn sign(&self) -> Option<Sign> {
        match self.phase {
            0 => Some(Sign::Plus),
            2 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn set_sign(&mut self, sign: Sign) {
        self.phase = if sign.is_minus() { 2 } else { 0 };
    }

    pub fn negate(&mut self) {
        self.phase = (self.phase + 2) % 4;
    }

    /// Same masks with a `+` sign.
    pub fn unsigned(&self) -> Self {
        let mut p = self.clone();
        p.phase = 0;
        p
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        debug_assert_eq!(self.n, other.n);
        let mut acc = 0u32;
        for w in 0..self.x.len() {
            acc ^= ((self.x[w] & other.z[w]) ^ (self.z[w] & other.x[w])).count_ones();
        }
        acc % 2 == 0
    }

    /// `self <- self * rhs`, tracking the phase exactly.
    pub fn mul_assign(&mut self, rhs: &PauliString) {
        assert_eq!(self.n, rhs.n, "Pauli size mismatch");
        let mut plus = 0u32;
        let mut minus = 0u32;
        for w in 0..self.x.len() {
            let (x1, z1, x2, z2) = (self.x[w], self.z[w], rhs.x[w], rhs.z[w]);
            // X*Y, Y*Z, Z*X give +i; X*Z, Y*X, Z*Y give -i.
            let p = (x1 & !z1 & x2 & z2) | (x1 & z1 & !x2 & z2) | (!x1 & z1 & x2 & !z2);
            let m = (x1 & !z1 & !x2 & z2) | (x1 & z1 & x2 & !z2) | (!x1 & z1 & x2 & z2);
            plus += p.count_ones();
            minus += m.count_ones();
            self.x[w] = x1 ^ x2;
            self.z[w] = z1 ^ z2;
        }
        let k = (self.phase as u32 + rhs.phase as u32 + plus + 3 * minus) % 4;
        self.phase = k as u8;
    }

    pub fn compose(&self, rhs: &PauliString) -> PauliString {
        let mut out = self.clone();
        out.mul_assign(rhs);
        out
    }

    /// Group product ignoring phase; used by Pauli frames.
    pub fn xor_assign(&mut self, rhs: &PauliString) {
        assert_eq!(self.n, rhs.n, "Pauli size mismatch");
        for w in 0..self.x.len() {
            self.x[w] ^= rhs.x[w];
            self.z[w] ^= rhs.z[w];
        }
    }

    /// Keeps only the X component (Z bits cleared, sign dropped).
    pub fn x_part(&self) -> PauliString {
        Self {
            n: self.n,
            x: self.x.clone(),
            z: vec![0; self.z.len()],
            phase: 0,
        }
    }

    /// Keeps only the Z component (X bits cleared, sign dropped).
    pub fn z_part(&self) -> PauliString {
        Self {
            n: self.n,
            x: vec![0; self.x.len()],
            z: self.z.clone(),
            phase: 0,
        }
    }

    /// Restriction to `qubits`, re-indexed in the given order.
    pub fn restrict(&self, qubits: &[usize]) -> PauliString {
        let mut out = PauliString::identity(qubits.len());
        for (i, &q) in qubits.iter().enumerate() {
            out.set(i, self.get(q));
        }
        out
    }

    /// Places `self` onto `qubits` of a larger register of `n` qubits.
    pub fn embed(&self, n: usize, qubits: &[usize]) -> PauliString {
        assert_eq!(qubits.len(), self.n);
        let mut out = PauliString::identity(n);
        for (i, &q) in qubits.iter().enumerate() {
            out.set(q, self.get(i));
        }
        out.phase = self.phase;
        out
    }

    /// Compact listing such as `X3Z8`, with qubit labels shifted by `offset`.
    /// The identity renders as `I`.
    pub fn sparse_label(&self, offset: usize) -> String {
        let mut s = String::new();
        if self.sign() == Some(Sign::Minus) {
            s.push('-');
        }
        for q in self.support() {
            s.push(self.get(q).letter());
            s.push_str(&(q + offset).to_string());
        }
        if self.is_trivial() {
            s.push('I');
        }
        s
    }

    /// Parses the output of [`sparse_label`](Self::sparse_label).
    pub fn parse_sparse(n: usize, text: &str, offset: usize) -> Result<PauliString> {
        let mut p = PauliString::identity(n);
        let t = text.trim();
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        if body == "I" || body.is_empty() {
            if neg {
                p.negate();
            }
            return Ok(p);
        }
        let bad = || Error::Parse(format!("malformed sparse Pauli `{text}`"));
        let mut chars = body.chars().peekable();
        while let Some(c) = chars.next() {
            let letter = match c {
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                _ => return Err(bad()),
            };
            let mut digits = String::new();
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(*d);
                chars.next();
            }
            let label: usize = digits.parse().map_err(|_| bad())?;
            let q = label
                .checked_sub(offset)
                .filter(|&q| q < n)
                .ok_or_else(bad)?;
            if p.get(q) != Pauli::I {
                return Err(bad());
            }
            p.set(q, letter);
        }
        if neg {
            p.negate();
        }
        Ok(p)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        f.write_str(prefix)?;
        for q in 0..self.n {
            write!(f, "{}", self.get(q).letter())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Dense letter form with optional sign, e.g. `-XIZY`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        let n = body.chars().count();
        if n == 0 {
            return Err(Error::Parse("empty Pauli string".into()));
        }
        let mut p = PauliString::identity(n);
        for (q, c) in body.chars().enumerate() {
            let letter = match c {
                'I' | '_' => Pauli::I,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                other => return Err(Error::Parse(format!("unexpected Pauli letter `{other}`"))),
            };
            p.set(q, letter);
        }
        if neg {
            p.negate();
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn single_qubit_products() {
        let x = p("X");
        let y = p("Y");
        let z = p("Z");
        // XY = iZ, so XY is not Hermitian.
        let xy = x.compose(&y);
        assert_eq!(xy.sign(), None);
        assert_eq!(xy.get(0), Pauli::Z);
        // XYZ = iZ * Z = i I
        let xyz = xy.compose(&z);
        assert!(xyz.is_trivial());
        assert_eq!(xyz.sign(), None);
        // (XY)(YX) = I
        let yx = y.compose(&x);
        assert!(xy.compose(&yx).is_identity());
    }

    #[test]
    fn commuting_product_keeps_sign() {
        // (XX)(ZZ) = (XZ)(XZ) = (-iY)(-iY) = -YY
        let r = p("XX").compose(&p("ZZ"));
        assert_eq!(r.sign(), Some(Sign::Minus));
        assert_eq!(r.to_string(), "-YY");
    }

    #[test]
    fn weight_and_identity() {
        assert_eq!(p("IXYZ").weight(), 3);
        assert!(PauliString::identity(5).is_identity());
        assert!(!p("-II").is_identity());
        assert!(p("-II").is_trivial());
    }

    #[test]
    fn sparse_labels() {
        let e = PauliString::parse_sparse(9, "Z8Z9", 1).unwrap();
        assert_eq!(e.support(), vec![7, 8]);
        assert_eq!(e.sparse_label(1), "Z8Z9");
        assert_eq!(PauliString::identity(4).sparse_label(0), "I");
        assert!(PauliString::parse_sparse(9, "X10", 1).is_err());
        assert!(PauliString::parse_sparse(9, "X1X1", 1).is_err());
    }

    #[test]
    fn fifteen_two_qubit_paulis() {
        let all = two_qubit_paulis();
        let mut seen = std::collections::HashSet::new();
        for pair in all {
            assert_ne!(pair, (Pauli::I, Pauli::I));
            assert!(seen.insert(pair));
        }
    }

    #[test]
    fn wide_strings_span_words() {
        let n = 130;
        let a = PauliString::x(n, 129);
        let b = PauliString::z(n, 129);
        assert!(!a.commutes_with(&b));
        let c = PauliString::z(n, 3);
        assert!(a.commutes_with(&c));
        assert_eq!(a.compose(&c).weight(), 2);
    }

    fn arb_pauli(n: usize) -> impl Strategy<Value = PauliString> {
        (proptest::collection::vec(0u8..4, n), any::<bool>()).prop_map(move |(letters, neg)| {
            let mut p = PauliString::identity(n);
            for (q, l) in letters.into_iter().enumerate() {
                p.set(q, [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][l as usize]);
            }
            if neg {
                p.negate();
            }
            p
        })
    }

    proptest! {
        #[test]
        fn product_is_associative(a in arb_pauli(7), b in arb_pauli(7), c in arb_pauli(7)) {
            prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        }

        #[test]
        fn square_is_plus_minus_identity(a in arb_pauli(70)) {
            let sq = a.compose(&a);
            prop_assert!(sq.is_trivial());
            prop_assert!(sq.sign().is_some());
        }

        #[test]
        fn commutation_matches_product_order(a in arb_pauli(9), b in arb_pauli(9)) {
            let ab = a.compose(&b);
            let ba = b.compose(&a);
            if a.commutes_with(&b) {
                prop_assert_eq!(ab, ba);
            } else {
                let mut neg = ba.clone();
                neg.negate();
                prop_assert_eq!(ab, neg);
            }
        }

        #[test]
        fn display_round_trip(a in arb_pauli(11)) {
            let text = a.to_string();
            prop_assert_eq!(text.parse::<PauliString>().unwrap(), a);
        }
    }
}
