//! Lookup-table decoding of two consecutive syndrome rounds.
//!
//! A table maps `(s1, s2)` (penultimate and last round syndrome values) to a
//! recovery on the data qubits. Keys that are absent decode to the identity.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::circuit::Basis;
use crate::codes::RoundParity;
use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::memory::{
    mask_to_pauli, parity_index, same_class, CheckMasks, RotatedRounds, DATA_QUBITS,
};
use crate::pauli::{Pauli, PauliString};

/// Table labels name data qubit `k` as `k + 1`.
pub const TABLE_LABEL_OFFSET: usize = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LookupTable {
    pub check: Basis,
    pub parity: RoundParity,
    pub rows: BTreeMap<(u8, u8), PauliString>,
}

#[derive(Serialize, Deserialize)]
struct CsvRow {
    s1: u8,
    s2: u8,
    recovery: String,
}

impl LookupTable {
    pub fn new(check: Basis, parity: RoundParity) -> Self {
        LookupTable {
            check,
            parity,
            rows: BTreeMap::new(),
        }
    }

    /// Inserts a row; the recovery must be a Pauli on the 9 data qubits of
    /// the type this table corrects (X for Z-checks, Z for X-checks).
    pub fn insert(&mut self, s1: u8, s2: u8, recovery: PauliString) -> Result<()> {
        if s1 > 15 || s2 > 15 {
            return Err(Error::InvalidArgument(format!(
                "syndrome ({s1}, {s2}) out of range"
            )));
        }
        if recovery.num_qubits() != DATA_QUBITS {
            return Err(Error::SizeMismatch {
                expected: DATA_QUBITS,
                found: recovery.num_qubits(),
            });
        }
        let wrong = match self.check {
            Basis::Z => recovery.z_words().iter().any(|&w| w != 0),
            Basis::X => recovery.x_words().iter().any(|&w| w != 0),
        };
        if wrong {
            return Err(Error::InvalidArgument(format!(
                "{:?}-check table cannot hold recovery {recovery}",
                self.check
            )));
        }
        if self.rows.insert((s1, s2), recovery.unsigned()).is_some() {
            return Err(Error::InvalidArgument(format!(
                "duplicate key ({s1}, {s2})"
            )));
        }
        Ok(())
    }

    pub fn decode(&self, s1: u8, s2: u8) -> PauliString {
        self.rows
            .get(&(s1, s2))
            .cloned()
            .unwrap_or_else(|| PauliString::identity(DATA_QUBITS))
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn letter(&self) -> Pauli {
        match self.check {
            Basis::Z => Pauli::X,
            Basis::X => Pauli::Z,
        }
    }

    /// Recovery as a data mask.
    pub fn mask(&self, s1: u8, s2: u8) -> u16 {
        self.rows
            .get(&(s1, s2))
            .map_or(0, |p| pauli_mask(p, self.check))
    }

    /// CSV with header `s1,s2,recovery`; recoveries are written like `X3X8`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for (&(s1, s2), p) in &self.rows {
            out.serialize(CsvRow {
                s1,
                s2,
                recovery: p.sparse_label(TABLE_LABEL_OFFSET),
            })?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(check: Basis, parity: RoundParity, r: R) -> Result<Self> {
        let mut t = LookupTable::new(check, parity);
        for row in csv::Reader::from_reader(r).deserialize() {
            let row: CsvRow = row?;
            let p = PauliString::parse_sparse(DATA_QUBITS, &row.recovery, TABLE_LABEL_OFFSET)?;
            t.insert(row.s1, row.s2, p)?;
        }
        Ok(t)
    }
}

fn pauli_mask(p: &PauliString, check: Basis) -> u16 {
    let words = match check {
        Basis::Z => p.x_words(),
        Basis::X => p.z_words(),
    };
    words.first().copied().unwrap_or(0) as u16
}

/// The four tables: Z-check odd, Z-check even, X-check odd, X-check even.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableSet {
    pub tables: Vec<LookupTable>,
}

impl TableSet {
    pub fn get(&self, check: Basis, parity: RoundParity) -> &LookupTable {
        self.tables
            .iter()
            .find(|t| t.check == check && t.parity == parity)
            .expect("all four tables present")
    }

    fn from_parts(parts: Vec<LookupTable>) -> Result<Self> {
        for check in [Basis::Z, Basis::X] {
            for parity in [RoundParity::Odd, RoundParity::Even] {
                let k = parts
                    .iter()
                    .filter(|t| t.check == check && t.parity == parity)
                    .count();
                if k != 1 {
                    return Err(Error::InvalidArgument(format!(
                        "expected one {check:?}/{parity:?} table, found {k}"
                    )));
                }
            }
        }
        Ok(TableSet { tables: parts })
    }
}

const BUILTIN: [(Basis, RoundParity, &[(u8, u8, &str)]); 4] = [
    (
        Basis::Z,
        RoundParity::Odd,
        &[
            (1, 1, "X3"),
            (2, 2, "X1"),
            (0, 3, "X2"),
            (1, 3, "X2"),
            (3, 3, "X2"),
            (4, 4, "X6"),
            (1, 5, "X3X6"),
            (0, 6, "X5"),
            (2, 6, "X5"),
            (6, 6, "X5"),
            (8, 8, "X7"),
            (2, 10, "X5X8"),
            (1, 12, "X8"),
            (4, 12, "X8"),
            (12, 12, "X8"),
            (0, 13, "X3X8"),
        ],
    ),
    (
        Basis::Z,
        RoundParity::Even,
        &[
            (1, 1, "X3"),
            (2, 2, "X1"),
            (0, 3, "X2"),
            (2, 3, "X2"),
            (4, 4, "X6"),
            (4, 5, "X3X6"),
            (0, 6, "X5"),
            (4, 6, "X5"),
            (8, 8, "X7"),
            (8, 10, "X5X8"),
            (0, 12, "X8"),
            (8, 12, "X8"),
            (12, 12, "X8"),
            (12, 13, "X3X8"),
        ],
    ),
    (
        Basis::X,
        RoundParity::Odd,
        &[
            (1, 1, "Z1"),
            (2, 2, "Z2"),
            (1, 3, "Z1Z2"),
            (4, 4, "Z7"),
            (0, 5, "Z4"),
            (1, 5, "Z4"),
            (5, 5, "Z4"),
            (0, 6, "Z5"),
            (4, 6, "Z5"),
            (6, 6, "Z5"),
            (8, 8, "Z9"),
            (0, 10, "Z6"),
            (2, 10, "Z6"),
            (10, 10, "Z6"),
            (4, 12, "Z8Z9"),
        ],
    ),
    (
        Basis::X,
        RoundParity::Even,
        &[
            (1, 1, "Z1"),
            (2, 2, "Z2"),
            (2, 3, "Z1Z2"),
            (4, 4, "Z7"),
            (0, 5, "Z4"),
            (4, 5, "Z4"),
            (0, 6, "Z5"),
            (2, 6, "Z5"),
            (8, 8, "Z9"),
            (0, 10, "Z6"),
            (8, 10, "Z6"),
            (8, 12, "Z8Z9"),
        ],
    ),
];

/// The four published tables, row for row.
pub fn builtin_tables() -> TableSet {
    let parts = BUILTIN
        .iter()
        .map(|&(check, parity, rows)| {
            let mut t = LookupTable::new(check, parity);
            for &(s1, s2, label) in rows {
                let p = PauliString::parse_sparse(DATA_QUBITS, label, TABLE_LABEL_OFFSET)
                    .expect("well-formed label");
                t.insert(s1, s2, p).expect("distinct keys");
            }
            t
        })
        .collect();
    TableSet::from_parts(parts).expect("four tables")
}

/// A signature produced by single faults whose data residuals are not
/// equivalent. The key is left out of the generated table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignatureConflict {
    pub check: Basis,
    pub parity: RoundParity,
    pub s1: u8,
    pub s2: u8,
    /// Inequivalent residuals, written like `X3X8` (`I` for none).
    pub residuals: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct BruteForceTables {
    pub tables: TableSet,
    pub conflicts: Vec<SignatureConflict>,
}

/// One single fault seen across a window of two rounds: its syndrome values
/// in both rounds and the data error left behind.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Footprint {
    z: (u8, u8),
    x: (u8, u8),
    residual: (u16, u16),
}

/// Every single-fault footprint for windows ending in a round of parity `last`:
/// faults in either round of the window and single-qubit data errors present
/// before it.
fn footprints(rounds: &RotatedRounds, last: RoundParity) -> Vec<Footprint> {
    let first = last.other();
    let mut out = Vec::new();
    let mut run = |start: Frame, fault_round: Option<(usize, crate::frame::Fault)>| {
        let mut frame = start;
        let mut syn = [(0u8, 0u8); 2];
        for (i, p) in [first, last].into_iter().enumerate() {
            let faults: Vec<_> = match fault_round {
                Some((r, f)) if r == i => vec![f],
                _ => Vec::new(),
            };
            let flips = rounds.compiled(p).run(&mut frame, &faults);
            syn[i] = (
                rounds.syndrome(p, Basis::Z, flips),
                rounds.syndrome(p, Basis::X, flips),
            );
        }
        out.push(Footprint {
            z: (syn[0].0, syn[1].0),
            x: (syn[0].1, syn[1].1),
            residual: rounds.data_error(last, &frame),
        });
    };
    for label in 0..DATA_QUBITS {
        for (x, z) in [(1u16, 0u16), (1, 1), (0, 1)] {
            let mut f = Frame::default();
            rounds.apply_data(last, &mut f, x << label, z << label);
            run(f, None);
        }
    }
    for (i, p) in [first, last].into_iter().enumerate() {
        for fault in rounds.compiled(p).all_faults() {
            run(Frame::default(), Some((i, fault)));
        }
    }
    out
}

/// Tables generated by injecting every single fault: each signature maps to
/// the minimum-weight residual of its class; signatures reached by
/// inequivalent residuals are reported and omitted.
pub fn generate_tables_bruteforce(rounds: &RotatedRounds) -> BruteForceTables {
    let masks = &rounds.masks;
    let mut parts = Vec::new();
    let mut conflicts = Vec::new();
    for check in [Basis::Z, Basis::X] {
        for parity in [RoundParity::Odd, RoundParity::Even] {
            let mut by_key: BTreeMap<(u8, u8), Vec<u16>> = BTreeMap::new();
            for fp in footprints(rounds, parity) {
                let (key, res) = match check {
                    Basis::Z => (fp.z, fp.residual.0),
                    Basis::X => (fp.x, fp.residual.1),
                };
                if key != (0, 0) || res != 0 {
                    by_key.entry(key).or_default().push(res);
                }
            }
            let mut table = LookupTable::new(check, parity);
            for (key, residuals) in by_key {
                let mut classes: Vec<u16> = Vec::new();
                for &r in &residuals {
                    match classes
                        .iter_mut()
                        .find(|c| same_class(masks, check, **c, r))
                    {
                        Some(c) => {
                            if (r.count_ones(), r) < (c.count_ones(), *c) {
                                *c = r;
                            }
                        }
                        None => classes.push(r),
                    }
                }
                if classes.len() > 1 {
                    let letter = table.letter();
                    conflicts.push(SignatureConflict {
                        check,
                        parity,
                        s1: key.0,
                        s2: key.1,
                        residuals: classes
                            .iter()
                            .map(|&c| mask_to_pauli(c, letter).sparse_label(TABLE_LABEL_OFFSET))
                            .collect(),
                    });
                } else if classes[0] != 0 {
                    // Identity-class keys decode to the identity by default.
                    if !same_class(masks, check, classes[0], 0) {
                        table
                            .insert(key.0, key.1, mask_to_pauli(classes[0], table.letter()))
                            .expect("fresh key");
                    }
                }
            }
            parts.push(table);
        }
    }
    BruteForceTables {
        tables: TableSet::from_parts(parts).expect("four tables"),
        conflicts,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowStatus {
    /// Same key, same recovery.
    Exact,
    /// Same key, recoveries differ by a stabilizer.
    SameClass,
    /// Published key that no single fault produces.
    Missing,
    /// Same key, logically inequivalent recoveries, or a published key that
    /// single faults reach with inequivalent residuals.
    Conflict,
    /// Generated key absent from the published table.
    Extra,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiffRow {
    pub check: Basis,
    pub parity: RoundParity,
    pub s1: u8,
    pub s2: u8,
    pub published: Option<String>,
    pub generated: Option<String>,
    pub status: RowStatus,
}

/// Per-key comparison of the published tables against generated ones.
pub fn diff_tables(
    published: &TableSet,
    generated: &BruteForceTables,
    masks: &CheckMasks,
) -> Vec<DiffRow> {
    let mut out = Vec::new();
    for gen in &generated.tables.tables {
        let (check, parity) = (gen.check, gen.parity);
        let publ = published.get(check, parity);
        let mut keys: Vec<(u8, u8)> = publ.rows.keys().chain(gen.rows.keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        for key in keys {
            let a = publ.rows.get(&key);
            let b = gen.rows.get(&key);
            let conflicted = generated
                .conflicts
                .iter()
                .any(|c| c.check == check && c.parity == parity && (c.s1, c.s2) == key);
            let status = match (a, b) {
                (Some(a), Some(b)) if a == b => RowStatus::Exact,
                (Some(a), Some(b)) => {
                    if same_class(masks, check, pauli_mask(a, check), pauli_mask(b, check)) {
                        RowStatus::SameClass
                    } else {
                        RowStatus::Conflict
                    }
                }
                (Some(_), None) if conflicted => RowStatus::Conflict,
                (Some(_), None) => RowStatus::Missing,
                (None, _) => RowStatus::Extra,
            };
            let label = |p: &PauliString| p.sparse_label(TABLE_LABEL_OFFSET);
            out.push(DiffRow {
                check,
                parity,
                s1: key.0,
                s2: key.1,
                published: a.map(label),
                generated: b.map(label),
                status,
            });
        }
    }
    out
}

/// Published rows that agree with (or are not contradicted by) the generated
/// tables, completed with the generated rows. Generated rows win conflicts.
pub fn merged_tables(
    published: &TableSet,
    generated: &BruteForceTables,
    masks: &CheckMasks,
) -> TableSet {
    let diff = diff_tables(published, generated, masks);
    let parts = generated
        .tables
        .tables
        .iter()
        .map(|gen| {
            let publ = published.get(gen.check, gen.parity);
            let mut t = gen.clone();
            for row in diff
                .iter()
                .filter(|r| r.check == gen.check && r.parity == gen.parity)
            {
                let key = (row.s1, row.s2);
                match row.status {
                    RowStatus::Exact | RowStatus::SameClass | RowStatus::Missing => {
                        t.rows.insert(key, publ.rows[&key].clone());
                    }
                    RowStatus::Conflict | RowStatus::Extra => {}
                }
            }
            t
        })
        .collect();
    TableSet::from_parts(parts).expect("four tables")
}

/// Accumulated recovery, confined to the data qubits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliFrame {
    data: Vec<bool>,
    frame: PauliString,
}

impl PauliFrame {
    /// Identity frame on `n` qubits of which `data` may be corrected.
    pub fn new(n: usize, data: &[usize]) -> Result<Self> {
        let mut mask = vec![false; n];
        for &q in data {
            if q >= n {
                return Err(Error::QubitOutOfRange { index: q, n });
            }
            mask[q] = true;
        }
        Ok(PauliFrame {
            data: mask,
            frame: PauliString::identity(n),
        })
    }

    pub fn pauli(&self) -> &PauliString {
        &self.frame
    }

    /// `frame <- frame * r`.
    pub fn apply_recovery(&mut self, r: &PauliString) -> Result<()> {
        if r.num_qubits() != self.data.len() {
            return Err(Error::SizeMismatch {
                expected: self.data.len(),
                found: r.num_qubits(),
            });
        }
        if let Some(q) = r.support().into_iter().find(|&q| !self.data[q]) {
            return Err(Error::SupportViolation(q));
        }
        self.frame.mul_assign(r);
        Ok(())
    }

    /// Z-basis outcome of qubit `q` after correcting for the frame.
    pub fn correct_z_outcome(&self, q: usize, raw: bool) -> bool {
        raw ^ self.frame.x_bit(q)
    }

    /// X-basis outcome of qubit `q` after correcting for the frame.
    pub fn correct_x_outcome(&self, q: usize, raw: bool) -> bool {
        raw ^ self.frame.z_bit(q)
    }
}

/// Fast decoder over all four tables, indexed by `(check, parity, s1, s2)`.
#[derive(Clone, Debug)]
pub struct Decoder {
    /// `[check][parity][16 * s1 + s2]`, check 0 = Z, 1 = X.
    lut: [[[u16; 256]; 2]; 2],
}

impl Decoder {
    pub fn new(tables: &TableSet) -> Self {
        let mut lut = [[[0u16; 256]; 2]; 2];
        for t in &tables.tables {
            let c = match t.check {
                Basis::Z => 0,
                Basis::X => 1,
            };
            for &(s1, s2) in t.rows.keys() {
                lut[c][parity_index(t.parity)][16 * s1 as usize + s2 as usize] = t.mask(s1, s2);
            }
        }
        Decoder { lut }
    }

    pub fn lookup(&self, check: Basis, parity: RoundParity, s1: u8, s2: u8) -> u16 {
        let c = match check {
            Basis::Z => 0,
            Basis::X => 1,
        };
        self.lut[c][parity_index(parity)][16 * s1 as usize + s2 as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_rows() {
        let b = builtin_tables();
        let t1 = b.get(Basis::Z, RoundParity::Odd);
        assert_eq!(t1.len(), 16);
        assert_eq!(t1.decode(1, 1).sparse_label(1), "X3");
        assert!(t1.decode(0, 0).is_identity());
        let t3 = b.get(Basis::X, RoundParity::Odd);
        assert_eq!(t3.decode(4, 12).sparse_label(1), "Z8Z9");
        assert_eq!(b.get(Basis::Z, RoundParity::Even).len(), 14);
        assert_eq!(b.get(Basis::X, RoundParity::Even).len(), 12);
    }

    #[test]
    fn csv_round_trip() {
        let t = builtin_tables().get(Basis::X, RoundParity::Odd).clone();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("s1,s2,recovery\n"));
        assert!(text.contains("4,12,Z8Z9"));
        let back = LookupTable::read_csv(Basis::X, RoundParity::Odd, buf.as_slice()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn table_rejects_wrong_type() {
        let mut t = LookupTable::new(Basis::Z, RoundParity::Odd);
        let z = PauliString::z(DATA_QUBITS, 0);
        assert!(t.insert(1, 1, z).is_err());
        assert!(t.insert(16, 1, PauliString::x(DATA_QUBITS, 0)).is_err());
    }

    #[test]
    fn frame_recovery() {
        let mut f = PauliFrame::new(12, &(0..9).collect::<Vec<_>>()).unwrap();
        let x3 = PauliString::x(12, 3);
        f.apply_recovery(&PauliString::identity(12)).unwrap();
        assert!(f.pauli().is_identity());
        f.apply_recovery(&x3).unwrap();
        assert!(f.correct_z_outcome(3, false));
        f.apply_recovery(&x3).unwrap();
        assert!(f.pauli().is_identity());
        assert!(matches!(
            f.apply_recovery(&PauliString::x(12, 10)),
            Err(Error::SupportViolation(10))
        ));
    }
}
