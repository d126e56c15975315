//! Aaronson–Gottesman stabilizer tableau.
//!
//! Rows `0..n` are destabilizers and rows `n..2n` stabilizers. Each row is a
//! Hermitian Pauli string stored as packed X and Z words plus a sign bit.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{Basis, Circuit, GateKind, GateOp};
use crate::error::{Error, Result};
use crate::pauli::{words_for, PauliString, Sign};

/// Outcome of a computational-basis measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub qubit: usize,
    pub outcome: bool,
    /// True when the state fixed the outcome; false for a coin flip.
    pub deterministic: bool,
}

/// Conjugates one packed Pauli row `(x, z, sign)` by a unitary gate.
///
/// The row is in letter form with a ±1 sign, so `Y` is represented by both
/// bits set.
pub(crate) fn conjugate_row(op: &GateOp, x: &mut [u64], z: &mut [u64], sign: &mut bool) {
    let q = op.qubits();
    let (wa, ma) = (q[0] >> 6, q[0] & 63);
    let bit = |v: &[u64], w: usize, m: usize| (v[w] >> m) & 1 == 1;
    let set = |v: &mut [u64], w: usize, m: usize, b: bool| {
        if b {
            v[w] |= 1 << m;
        } else {
            v[w] &= !(1 << m);
        }
    };
    match op.kind() {
        GateKind::H => h_row(x, z, sign, wa, ma),
        GateKind::S => s_row(x, z, sign, wa, ma),
        GateKind::X => *sign ^= bit(z, wa, ma),
        GateKind::Z => *sign ^= bit(x, wa, ma),
        GateKind::Y => *sign ^= bit(x, wa, ma) ^ bit(z, wa, ma),
        GateKind::Cnot | GateKind::Swap | GateKind::CnotSwap | GateKind::ISwap => {
            let (wb, mb) = (q[1] >> 6, q[1] & 63);
            let mut xa = bit(x, wa, ma);
            let mut za = bit(z, wa, ma);
            let mut xb = bit(x, wb, mb);
            let mut zb = bit(z, wb, mb);
            let cnot = |xa: bool, za: &mut bool, xb: &mut bool, zb: bool, s: &mut bool| {
                *s ^= xa & zb & !(*xb ^ *za);
                *xb ^= xa;
                *za ^= zb;
            };
            match op.kind() {
                GateKind::Cnot => cnot(xa, &mut za, &mut xb, zb, sign),
                GateKind::Swap => {
                    std::mem::swap(&mut xa, &mut xb);
                    std::mem::swap(&mut za, &mut zb);
                }
                GateKind::CnotSwap => {
                    cnot(xa, &mut za, &mut xb, zb, sign);
                    std::mem::swap(&mut xa, &mut xb);
                    std::mem::swap(&mut za, &mut zb);
                }
                _ => {
                    // ISWAP = (S ⊗ S) · CZ · SWAP
                    std::mem::swap(&mut xa, &mut xb);
                    std::mem::swap(&mut za, &mut zb);
                    *sign ^= xa & xb & (za ^ zb);
                    za ^= xb;
                    zb ^= xa;
                    *sign ^= xa & za;
                    za ^= xa;
                    *sign ^= xb & zb;
                    zb ^= xb;
                }
            }
            set(x, wa, ma, xa);
            set(z, wa, ma, za);
            set(x, wb, mb, xb);
            set(z, wb, mb, zb);
        }
        GateKind::MeasZ | GateKind::ResetZ | GateKind::ResetX => {
            unreachable!("non-unitary gate {op:?} has no conjugation action")
        }
    }
}

fn h_row(x: &mut [u64], z: &mut [u64], sign: &mut bool, w: usize, m: usize) {
    let xa = (x[w] >> m) & 1;
    let za = (z[w] >> m) & 1;
    *sign ^= xa & za == 1;
    x[w] = (x[w] & !(1 << m)) | (za << m);
    z[w] = (z[w] & !(1 << m)) | (xa << m);
}

fn s_row(x: &mut [u64], z: &mut [u64], sign: &mut bool, w: usize, m: usize) {
    let xa = (x[w] >> m) & 1;
    let za = (z[w] >> m) & 1;
    *sign ^= xa & za == 1;
    z[w] ^= xa << m;
}

impl PauliString {
    /// `U P U†` for a unitary gate `U`. Panics on non-Hermitian strings.
    pub fn conjugate_by(&self, op: &GateOp) -> PauliString {
        let mut minus = self
            .sign()
            .expect("conjugation is defined on Hermitian strings")
            .is_minus();
        let mut x = self.x_words().to_vec();
        let mut z = self.z_words().to_vec();
        conjugate_row(op, &mut x, &mut z, &mut minus);
        PauliString::from_masks(self.num_qubits(), x, z, Sign::from_minus(minus))
            .expect("same shape")
    }
}

/// Phase exponent (power of `i`) picked up by the letter-form product of two
/// rows, ignoring their signs.
fn product_phase(x1: &[u64], z1: &[u64], x2: &[u64], z2: &[u64]) -> u32 {
    let mut plus = 0u32;
    let mut minus = 0u32;
    for w in 0..x1.len() {
        let (a, b, c, d) = (x1[w], z1[w], x2[w], z2[w]);
        plus += ((a & !b & c & d) | (a & b & !c & d) | (!a & b & c & !d)).count_ones();
        minus += ((a & !b & !c & d) | (a & b & c & !d) | (!a & b & c & d)).count_ones();
    }
    (plus + 3 * minus) % 4
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerTableau {
    n: usize,
    words: usize,
    xs: Vec<u64>,
    zs: Vec<u64>,
    signs: Vec<bool>,
}

impl StabilizerTableau {
    /// The all-zero state `|0...0⟩`.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "tableau needs at least one qubit".into(),
            ));
        }
        let words = words_for(n);
        let mut t = Self {
            n,
            words,
            xs: vec![0; 2 * n * words],
            zs: vec![0; 2 * n * words],
            signs: vec![false; 2 * n],
        };
        for q in 0..n {
            t.xs[q * words + (q >> 6)] |= 1 << (q & 63);
            t.zs[(n + q) * words + (q >> 6)] |= 1 << (q & 63);
        }
        Ok(t)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    fn row(&self, r: usize) -> (&[u64], &[u64]) {
        let s = r * self.words;
        (&self.xs[s..s + self.words], &self.zs[s..s + self.words])
    }

    fn row_pauli(&self, r: usize) -> PauliString {
        let (x, z) = self.row(r);
        PauliString::from_masks(
            self.n,
            x.to_vec(),
            z.to_vec(),
            Sign::from_minus(self.signs[r]),
        )
        .expect("row shape")
    }

    fn row_x(&self, r: usize, q: usize) -> bool {
        (self.xs[r * self.words + (q >> 6)] >> (q & 63)) & 1 == 1
    }

    pub fn stabilizers(&self) -> Vec<PauliString> {
        (self.n..2 * self.n).map(|r| self.row_pauli(r)).collect()
    }

    pub fn destabilizers(&self) -> Vec<PauliString> {
        (0..self.n).map(|r| self.row_pauli(r)).collect()
    }

    pub fn apply_gate(&mut self, op: &GateOp) -> Result<()> {
        op.check_bounds(self.n)?;
        match op.kind() {
            GateKind::MeasZ | GateKind::ResetZ | GateKind::ResetX => {
                return Err(Error::InvalidArgument(format!(
                    "{op:?} needs an rng; use apply_op"
                )))
            }
            _ => {}
        }
        let w = self.words;
        for r in 0..2 * self.n {
            let s = r * w;
            conjugate_row(
                op,
                &mut self.xs[s..s + w],
                &mut self.zs[s..s + w],
                &mut self.signs[r],
            );
        }
        Ok(())
    }

    /// Applies any operation; measurements return their record.
    pub fn apply_op(
        &mut self,
        op: &GateOp,
        rng: &mut impl Rng,
    ) -> Result<Option<MeasurementRecord>> {
        let q = op.qubits()[0];
        match op.kind() {
            GateKind::MeasZ => self.measure_z(q, rng).map(Some),
            GateKind::ResetZ => self.reset(q, Basis::Z, rng).map(|_| None),
            GateKind::ResetX => self.reset(q, Basis::X, rng).map(|_| None),
            _ => self.apply_gate(op).map(|_| None),
        }
    }

    /// Runs every moment of `c`, returning measurement records in order.
    pub fn run(&mut self, c: &Circuit, rng: &mut impl Rng) -> Result<Vec<MeasurementRecord>> {
        if c.num_qubits() != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                found: c.num_qubits(),
            });
        }
        let mut out = Vec::new();
        for op in c.ops() {
            if let Some(rec) = self.apply_op(op, rng)? {
                out.push(rec);
            }
        }
        Ok(out)
    }

    /// `h <- h * i` on rows, keeping the sign of the Hermitian product.
    fn rowsum(&mut self, h: usize, i: usize) {
        let w = self.words;
        let (hs, is) = (h * w, i * w);
        let k = product_phase(
            &self.xs[hs..hs + w],
            &self.zs[hs..hs + w],
            &self.xs[is..is + w],
            &self.zs[is..is + w],
        );
        let total = k + 2 * self.signs[h] as u32 + 2 * self.signs[i] as u32;
        self.signs[h] = total % 4 == 2;
        for j in 0..w {
            self.xs[hs + j] ^= self.xs[is + j];
            self.zs[hs + j] ^= self.zs[is + j];
        }
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n {
            return Err(Error::QubitOutOfRange {
                index: q,
                n: self.n,
            });
        }
        Ok(())
    }

    fn random_pivot(&self, q: usize) -> Option<usize> {
        (self.n..2 * self.n).find(|&r| self.row_x(r, q))
    }

    /// Value of `Z_q` if it is fixed by the state, without touching it.
    pub fn peek_z(&self, q: usize) -> Result<Option<bool>> {
        self.check_qubit(q)?;
        if self.random_pivot(q).is_some() {
            return Ok(None);
        }
        Ok(Some(self.deterministic_z(q)))
    }

    fn deterministic_z(&self, q: usize) -> bool {
        let mut acc = PauliString::identity(self.n);
        for i in 0..self.n {
            if self.row_x(i, q) {
                acc.mul_assign(&self.row_pauli(i + self.n));
            }
        }
        acc.sign() == Some(Sign::Minus)
    }

    pub fn measure_z(&mut self, q: usize, rng: &mut impl Rng) -> Result<MeasurementRecord> {
        self.measure_with(q, |_| rng.gen::<bool>())
    }

    /// Measurement whose random branch takes `outcome`; fails if the state
    /// fixes the opposite value.
    pub fn measure_z_forced(&mut self, q: usize, outcome: bool) -> Result<MeasurementRecord> {
        let rec = self.measure_with(q, |_| outcome)?;
        if rec.outcome != outcome {
            return Err(Error::ImpossibleOutcome(q));
        }
        Ok(rec)
    }

    fn measure_with(
        &mut self,
        q: usize,
        coin: impl FnOnce(usize) -> bool,
    ) -> Result<MeasurementRecord> {
        self.check_qubit(q)?;
        let n = self.n;
        let w = self.words;
        let Some(p) = self.random_pivot(q) else {
            return Ok(MeasurementRecord {
                qubit: q,
                outcome: self.deterministic_z(q),
                deterministic: true,
            });
        };
        for r in 0..2 * n {
            if r != p && self.row_x(r, q) {
                self.rowsum(r, p);
            }
        }
        let (d, ps) = ((p - n) * w, p * w);
        self.xs.copy_within(ps..ps + w, d);
        self.zs.copy_within(ps..ps + w, d);
        self.signs[p - n] = self.signs[p];
        for j in 0..w {
            self.xs[ps + j] = 0;
            self.zs[ps + j] = 0;
        }
        self.zs[ps + (q >> 6)] |= 1 << (q & 63);
        let outcome = coin(q);
        self.signs[p] = outcome;
        Ok(MeasurementRecord {
            qubit: q,
            outcome,
            deterministic: false,
        })
    }

    /// Projects qubit `q` onto `|0⟩` (`Basis::Z`) or `|+⟩` (`Basis::X`).
    pub fn reset(&mut self, q: usize, basis: Basis, rng: &mut impl Rng) -> Result<()> {
        self.check_qubit(q)?;
        if basis == Basis::X {
            self.apply_gate(&GateOp::h(q))?;
        }
        if self.measure_z(q, rng)?.outcome {
            self.apply_gate(&GateOp::single(GateKind::X, q))?;
        }
        if basis == Basis::X {
            self.apply_gate(&GateOp::h(q))?;
        }
        Ok(())
    }

    /// Flips the sign of every row anticommuting with `p`.
    pub fn apply_pauli(&mut self, p: &PauliString) -> Result<()> {
        if p.num_qubits() != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                found: p.num_qubits(),
            });
        }
        let (px, pz) = (p.x_words(), p.z_words());
        for r in 0..2 * self.n {
            let (x, z) = self.row(r);
            let mut acc = 0u32;
            for j in 0..self.words {
                acc ^= ((x[j] & pz[j]) ^ (z[j] & px[j])).count_ones();
            }
            if acc % 2 == 1 {
                self.signs[r] ^= true;
            }
        }
        Ok(())
    }

    /// `Some(sign)` when `±p` belongs to the stabilizer group, `None` when a
    /// measurement of `p` would be random.
    pub fn expectation(&self, p: &PauliString) -> Result<Option<Sign>> {
        if p.num_qubits() != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                found: p.num_qubits(),
            });
        }
        let p = p.unsigned();
        for r in self.n..2 * self.n {
            if !self.row_pauli(r).commutes_with(&p) {
                return Ok(None);
            }
        }
        let mut acc = PauliString::identity(self.n);
        for i in 0..self.n {
            if !self.row_pauli(i).commutes_with(&p) {
                acc.mul_assign(&self.row_pauli(i + self.n));
            }
        }
        debug_assert_eq!(acc.unsigned(), p);
        Ok(acc.sign())
    }

    /// Checks the commutation structure and full rank of the stabilizer block.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.n;
        let rows: Vec<PauliString> = (0..2 * n).map(|r| self.row_pauli(r)).collect();
        for i in 0..n {
            for j in 0..n {
                if !rows[n + i].commutes_with(&rows[n + j]) {
                    return Err(Error::InvalidArgument(format!(
                        "stabilizers {i} and {j} anticommute"
                    )));
                }
                let anti = !rows[i].commutes_with(&rows[n + j]);
                if anti != (i == j) {
                    return Err(Error::InvalidArgument(format!(
                        "destabilizer {i} / stabilizer {j} commutation is wrong"
                    )));
                }
            }
        }
        if canonical_generators(&rows[n..]).len() != n {
            return Err(Error::InvalidArgument(
                "stabilizer block is rank deficient".into(),
            ));
        }
        Ok(())
    }

    /// Relabels qubits: the content of qubit `q` moves to `perm[q]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<StabilizerTableau> {
        check_permutation(perm, self.n)?;
        let mut out = self.clone();
        for r in 0..2 * self.n {
            let s = r * self.words;
            for j in 0..self.words {
                out.xs[s + j] = 0;
                out.zs[s + j] = 0;
            }
            for q in 0..self.n {
                let (w, m) = (q >> 6, q & 63);
                let (tw, tm) = (perm[q] >> 6, perm[q] & 63);
                out.xs[s + tw] |= ((self.xs[s + w] >> m) & 1) << tm;
                out.zs[s + tw] |= ((self.zs[s + w] >> m) & 1) << tm;
            }
        }
        Ok(out)
    }

    /// Reduced row-echelon stabilizer generators; equal groups give equal lists.
    pub fn canonical_stabilizers(&self) -> Vec<PauliString> {
        canonical_generators(&self.stabilizers())
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::InvalidPermutation(format!(
            "length {} for {n} qubits",
            perm.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidPermutation(format!(
                "entry {p} repeated or out of range"
            )));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Gauss–Jordan elimination over GF(2) with exact sign tracking. Columns are
/// ordered `x_0, z_0, x_1, z_1, ...`; zero rows are dropped.
pub fn canonical_generators(rows: &[PauliString]) -> Vec<PauliString> {
    let mut rows: Vec<PauliString> = rows.to_vec();
    let Some(n) = rows.first().map(|r| r.num_qubits()) else {
        return rows;
    };
    let mut pivot_row = 0;
    for col in 0..2 * n {
        let (q, is_z) = (col / 2, col % 2 == 1);
        let has = |p: &PauliString| if is_z { p.z_bit(q) } else { p.x_bit(q) };
        let Some(found) = (pivot_row..rows.len()).find(|&r| has(&rows[r])) else {
            continue;
        };
        rows.swap(pivot_row, found);
        let pivot = rows[pivot_row].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != pivot_row && has(row) {
                row.mul_assign(&pivot);
            }
        }
        pivot_row += 1;
    }
    rows.truncate(pivot_row);
    rows
}

/// True iff the signed stabilizer groups coincide once `b` is relabelled by
/// `relabel` (qubit `q` of `b` is compared with qubit `relabel[q]` of `a`).
pub fn stabilizer_groups_equal(
    a: &StabilizerTableau,
    b: &StabilizerTableau,
    relabel: &[usize],
) -> Result<bool> {
    if a.n != b.n {
        return Err(Error::SizeMismatch {
            expected: a.n,
            found: b.n,
        });
    }
    let b = b.permuted(relabel)?;
    Ok(a.canonical_stabilizers() == b.canonical_stabilizers())
}

pub fn identity_permutation(n: usize) -> Vec<usize> {
    (0..n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(11)
    }

    #[test]
    fn zero_state() {
        assert!(StabilizerTableau::new(0).is_err());
        let t = StabilizerTableau::new(4).unwrap();
        let s: Vec<String> = t.stabilizers().iter().map(|p| p.to_string()).collect();
        assert_eq!(s, ["+ZIII", "+IZII", "+IIZI", "+IIIZ"]);
        let mut t = StabilizerTableau::new(1).unwrap();
        let rec = t.measure_z(0, &mut rng()).unwrap();
        assert!(!rec.outcome && rec.deterministic);
    }

    #[test]
    fn bell_pair_measurements_agree() {
        let mut r = rng();
        for _ in 0..50 {
            let mut t = StabilizerTableau::new(2).unwrap();
            t.apply_gate(&GateOp::h(0)).unwrap();
            t.apply_gate(&GateOp::cnot(0, 1)).unwrap();
            let a = t.measure_z(0, &mut r).unwrap();
            let b = t.measure_z(1, &mut r).unwrap();
            assert!(!a.deterministic && b.deterministic);
            assert_eq!(a.outcome, b.outcome);
            let again = t.measure_z(0, &mut r).unwrap();
            assert_eq!(again.outcome, a.outcome);
            t.check_invariants().unwrap();
        }
    }

    #[test]
    fn pauli_injection_flips_outcome() {
        let mut t = StabilizerTableau::new(5).unwrap();
        t.apply_pauli(&PauliString::x(5, 3)).unwrap();
        assert!(t.measure_z(3, &mut rng()).unwrap().outcome);
        t.apply_pauli(&PauliString::x(5, 3)).unwrap();
        t.apply_pauli(&PauliString::x(5, 3)).unwrap();
        assert_eq!(t.peek_z(3).unwrap(), Some(true));
        assert!(t.apply_pauli(&PauliString::x(4, 3)).is_err());
    }

    #[test]
    fn resets() {
        let mut r = rng();
        let mut t = StabilizerTableau::new(2).unwrap();
        t.apply_gate(&GateOp::h(0)).unwrap();
        t.apply_gate(&GateOp::cnot(0, 1)).unwrap();
        t.reset(0, Basis::Z, &mut r).unwrap();
        assert_eq!(t.peek_z(0).unwrap(), Some(false));
        t.reset(1, Basis::X, &mut r).unwrap();
        t.apply_gate(&GateOp::h(1)).unwrap();
        let rec = t.measure_z(1, &mut r).unwrap();
        assert!(rec.deterministic && !rec.outcome);
    }

    #[test]
    fn group_comparison() {
        let a = StabilizerTableau::new(2).unwrap();
        assert!(stabilizer_groups_equal(&a, &a, &[0, 1]).unwrap());
        let mut b = a.clone();
        b.apply_gate(&GateOp::h(1)).unwrap();
        assert!(!stabilizer_groups_equal(&a, &b, &[0, 1]).unwrap());
        let mut c = a.clone();
        c.apply_gate(&GateOp::h(0)).unwrap();
        assert!(stabilizer_groups_equal(&b, &c, &[1, 0]).unwrap());
        assert!(stabilizer_groups_equal(&a, &b, &[0, 0]).is_err());
    }

    #[test]
    fn rejects_bad_indices() {
        let mut t = StabilizerTableau::new(3).unwrap();
        assert!(t.apply_gate(&GateOp::cnot(0, 3)).is_err());
        assert!(t.measure_z(3, &mut rng()).is_err());
    }

    #[test]
    fn expectation_values() {
        let mut t = StabilizerTableau::new(3).unwrap();
        t.apply_gate(&GateOp::h(0)).unwrap();
        t.apply_gate(&GateOp::cnot(0, 1)).unwrap();
        t.apply_gate(&GateOp::cnot(1, 2)).unwrap();
        let e = |s: &str| t.expectation(&s.parse().unwrap()).unwrap();
        assert_eq!(e("XXX"), Some(Sign::Plus));
        assert_eq!(e("ZZI"), Some(Sign::Plus));
        assert_eq!(e("YYX"), Some(Sign::Minus));
        assert_eq!(e("ZII"), None);
    }

    #[test]
    fn wide_register() {
        let n = 150;
        let mut t = StabilizerTableau::new(n).unwrap();
        t.apply_gate(&GateOp::h(3)).unwrap();
        for q in 3..n - 1 {
            t.apply_gate(&GateOp::cnot(q, q + 1)).unwrap();
        }
        let mut r = rng();
        let first = t.measure_z(140, &mut r).unwrap();
        for q in 3..n {
            assert_eq!(t.peek_z(q).unwrap(), Some(first.outcome));
        }
        t.check_invariants().unwrap();
    }
}
