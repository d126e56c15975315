//! Compiled syndrome rounds of the rotated distance-3 code and the bit
//! bookkeeping shared by the decoder and the memory experiment.
//!
//! Syndrome values are `m1 + 2 m2 + 4 m3 + 8 m4` over the syndrome roles
//! `9, 11, 14, 16` (Z-checks) or `10, 12, 13, 15` (X-checks). Data errors are
//! 9-bit masks over data roles `0..9`.

use crate::circuit::{Basis, Circuit, RoleKind};
use crate::codes::{
    rotated_d3_checks, rotated_round, RoundParity, ROTATED_X_SYNDROMES, ROTATED_Z_SYNDROMES,
};
use crate::error::Result;
use crate::frame::{CompiledCircuit, Frame};
use crate::pauli::{Pauli, PauliString};

pub const DATA_QUBITS: usize = 9;

/// `m1 + 2 m2 + 4 m3 + 8 m4`.
pub fn syndrome_value(bits: [bool; 4]) -> u8 {
    bits.iter()
        .enumerate()
        .fold(0, |acc, (i, &b)| acc | ((b as u8) << i))
}

/// Syndrome roles of one check type in `m1..m4` order.
pub fn syndrome_labels(check: Basis) -> [usize; 4] {
    match check {
        Basis::Z => ROTATED_Z_SYNDROMES,
        Basis::X => ROTATED_X_SYNDROMES,
    }
}

pub fn parity_index(p: RoundParity) -> usize {
    match p {
        RoundParity::Odd => 0,
        RoundParity::Even => 1,
    }
}

/// Syndrome of data error masks: Z-checks see the X part, X-checks the Z part.
#[derive(Clone, Debug)]
pub struct CheckMasks {
    z: [u16; 4],
    x: [u16; 4],
}

impl CheckMasks {
    pub fn rotated_d3() -> Self {
        let mut z = [0u16; 4];
        let mut x = [0u16; 4];
        for c in rotated_d3_checks() {
            let mask = c.data.iter().fold(0u16, |m, &q| m | 1 << q);
            let (slot, labels) = match c.basis {
                Basis::Z => (&mut z, ROTATED_Z_SYNDROMES),
                Basis::X => (&mut x, ROTATED_X_SYNDROMES),
            };
            let i = labels
                .iter()
                .position(|&l| l == c.syndrome)
                .expect("known label");
            slot[i] = mask;
        }
        CheckMasks { z, x }
    }

    /// Syndrome seen by `check`-type checks of an error whose relevant part
    /// (X part for Z-checks, Z part for X-checks) is `mask`.
    pub fn syndrome(&self, check: Basis, mask: u16) -> u8 {
        let rows = match check {
            Basis::Z => &self.z,
            Basis::X => &self.x,
        };
        rows.iter().enumerate().fold(0, |acc, (i, &r)| {
            acc | ((((r & mask).count_ones() & 1) as u8) << i)
        })
    }
}

/// Logical operator supports: `Z_L = Z0 Z3 Z6`, `X_L = X0 X1 X2`.
pub const LOGICAL_Z_MASK: u16 = 0b001_001_001;
pub const LOGICAL_X_MASK: u16 = 0b000_000_111;

/// Whether two data errors of the kind detected by `check` differ by a
/// stabilizer.
pub fn same_class(masks: &CheckMasks, check: Basis, a: u16, b: u16) -> bool {
    let d = a ^ b;
    let logical = match check {
        Basis::Z => LOGICAL_Z_MASK,
        Basis::X => LOGICAL_X_MASK,
    };
    masks.syndrome(check, d) == 0 && (d & logical).count_ones() % 2 == 0
}

/// Mask over data roles as a Pauli string on the 9 data qubits.
pub fn mask_to_pauli(mask: u16, letter: Pauli) -> PauliString {
    let support: Vec<usize> = (0..DATA_QUBITS).filter(|&q| mask >> q & 1 == 1).collect();
    PauliString::on_support(DATA_QUBITS, &support, letter)
}

/// The two compiled rounds (odd, even) of the rotated code.
#[derive(Clone, Debug)]
pub struct RotatedRounds {
    cut: bool,
    circuits: [Circuit; 2],
    compiled: [CompiledCircuit; 2],
    /// Physical position of every role after each round.
    end_positions: [Vec<usize>; 2],
    pub masks: CheckMasks,
}

impl RotatedRounds {
    pub fn new(cut: bool) -> Result<Self> {
        let odd = rotated_round(RoundParity::Odd, cut);
        let even = rotated_round(RoundParity::Even, cut);
        let compiled = [
            CompiledCircuit::compile(&odd)?,
            CompiledCircuit::compile(&even)?,
        ];
        let end_positions = [odd.final_positions(), even.final_positions()];
        Ok(RotatedRounds {
            cut,
            circuits: [odd, even],
            compiled,
            end_positions,
            masks: CheckMasks::rotated_d3(),
        })
    }

    pub fn cut(&self) -> bool {
        self.cut
    }

    pub fn num_qubits(&self) -> usize {
        self.circuits[0].num_qubits()
    }

    pub fn circuit(&self, p: RoundParity) -> &Circuit {
        &self.circuits[parity_index(p)]
    }

    pub fn compiled(&self, p: RoundParity) -> &CompiledCircuit {
        &self.compiled[parity_index(p)]
    }

    /// Physical qubit holding role `label` after a round of parity `p`.
    pub fn position_after(&self, p: RoundParity, label: usize) -> usize {
        self.end_positions[parity_index(p)][label]
    }

    /// Syndrome value of `check` from the measurement flips of a round.
    pub fn syndrome(&self, p: RoundParity, check: Basis, flips: u64) -> u8 {
        let pos = &self.end_positions[parity_index(p)];
        syndrome_labels(check)
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &l)| acc | (((flips >> pos[l]) & 1) as u8) << i)
    }

    /// Data error of `frame` after a round of parity `p`, as `(x, z)` masks
    /// over data roles.
    pub fn data_error(&self, p: RoundParity, frame: &Frame) -> (u16, u16) {
        let pos = &self.end_positions[parity_index(p)];
        let mut x = 0u16;
        let mut z = 0u16;
        for (label, &q) in pos.iter().enumerate().take(DATA_QUBITS) {
            x |= (((frame.x >> q) & 1) as u16) << label;
            z |= (((frame.z >> q) & 1) as u16) << label;
        }
        (x, z)
    }

    /// Applies data-role masks to `frame` at the positions after a round of
    /// parity `p`.
    pub fn apply_data(&self, p: RoundParity, frame: &mut Frame, x: u16, z: u16) {
        let pos = &self.end_positions[parity_index(p)];
        for (label, &q) in pos.iter().enumerate().take(DATA_QUBITS) {
            frame.x ^= ((x >> label & 1) as u64) << q;
            frame.z ^= ((z >> label & 1) as u64) << q;
        }
    }

    /// Qubits that hold a non-data role after a round of parity `p`.
    pub fn non_data_after(&self, p: RoundParity) -> Vec<usize> {
        let roles = self.circuits[parity_index(p)].final_roles();
        (0..roles.len())
            .filter(|&q| roles[q].kind != RoleKind::Data)
            .collect()
    }
}

/// Minimum-weight data error for every syndrome value, used on the perfect
/// syndrome of the final transversal readout.
pub fn min_weight_table(masks: &CheckMasks, check: Basis) -> [u16; 16] {
    let mut best = [u16::MAX; 16];
    let mut found = [false; 16];
    let mut order: Vec<u16> = (0..1u16 << DATA_QUBITS).collect();
    order.sort_by_key(|m| (m.count_ones(), *m));
    for m in order {
        let s = masks.syndrome(check, m) as usize;
        if !found[s] {
            found[s] = true;
            best[s] = m;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn syndrome_values() {
        assert_eq!(syndrome_value([true, false, false, false]), 1);
        assert_eq!(syndrome_value([false; 4]), 0);
        assert_eq!(syndrome_value([true; 4]), 15);
    }

    #[test]
    fn single_data_error_syndromes() {
        let m = CheckMasks::rotated_d3();
        // X on data 2 is seen by the weight-2 check on {1, 2} only.
        assert_eq!(m.syndrome(Basis::Z, 1 << 2), 1);
        assert_eq!(m.syndrome(Basis::Z, 1 << 1), 3);
        assert_eq!(m.syndrome(Basis::Z, 1 << 7), 12);
        assert_eq!(m.syndrome(Basis::X, 1 << 0), 1);
        assert!(same_class(&m, Basis::Z, 1 << 5, 1 << 8));
        assert!(!same_class(&m, Basis::Z, 0, LOGICAL_X_MASK));
    }

    #[test]
    fn min_weight_covers_every_syndrome() {
        let m = CheckMasks::rotated_d3();
        for check in [Basis::Z, Basis::X] {
            let t = min_weight_table(&m, check);
            for (s, &e) in t.iter().enumerate() {
                assert_eq!(m.syndrome(check, e) as usize, s);
                assert!(e.count_ones() <= 2);
            }
        }
    }
}
