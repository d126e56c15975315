use crate::circuit::{Basis, Circuit, GateOp, RoleKind};
use crate::error::{Error, Result};

use super::{CnotSchedule, Variant};

/// One-dimensional parity check on `n_data` data qubits (`0..n_data`) with the
/// syndrome on qubit `n_data`. Z-checks use data controls, X-checks a syndrome
/// control. After the last moment the syndrome role sits at the far end of
/// the chain.
pub fn build_parity_chain(n_data: usize, basis: Basis) -> Result<Circuit> {
    if n_data < 2 {
        return Err(Error::InvalidArgument(format!(
            "parity chain needs at least 2 data qubits, got {n_data}"
        )));
    }
    let s = n_data;
    let mut kinds = vec![RoleKind::Data; n_data];
    kinds.push(RoleKind::Syndrome);
    let steps = (0..n_data)
        .map(|k| match basis {
            Basis::Z => vec![(k, s)],
            Basis::X => vec![(s, k)],
        })
        .collect();
    let mut c = CnotSchedule { kinds, steps }.realize(Variant::CnotSwap);
    let mut pos: Vec<[f64; 2]> = (0..n_data).map(|q| [q as f64, 0.0]).collect();
    pos.push([-1.0, 0.0]);
    c.set_positions(pos)?;
    Ok(c)
}

/// Qubits of [`build_cat4`] that end in the cat state; qubit 3 is left in `|0⟩`.
pub const CAT4_QUBITS: [usize; 4] = [0, 1, 2, 4];

/// Four-qubit cat state from five qubits in `|00000⟩`, built from one
/// Hadamard and CNOT+SWAP gates on a five-qubit ring.
pub fn build_cat4() -> Circuit {
    let kinds = [RoleKind::Syndrome; 5];
    let mut c = Circuit::with_role_kinds(&kinds);
    c.push_ops(vec![GateOp::h(0)]).expect("valid");
    c.push_ops(vec![GateOp::cnot_swap(0, 1)]).expect("valid");
    c.push_ops(vec![GateOp::cnot_swap(1, 2)]).expect("valid");
    c.push_ops(vec![GateOp::cnot_swap(2, 3), GateOp::cnot_swap(0, 4)])
        .expect("valid");
    c.push_ops(vec![GateOp::cnot_swap(3, 4)]).expect("valid");
    let ring = [[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [1.5, 1.0], [0.5, 1.0]];
    c.set_positions(ring.to_vec()).expect("five positions");
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_moves_syndrome_to_far_end() {
        let c = build_parity_chain(4, Basis::Z).unwrap();
        let roles = c.final_roles();
        assert_eq!(roles[3].kind, RoleKind::Syndrome);
        assert_eq!(roles[4].label, 0);
        assert!(build_parity_chain(1, Basis::Z).is_err());
        let ops: Vec<_> = c.ops().map(|op| op.qubits().to_vec()).collect();
        assert_eq!(ops, vec![vec![0, 4], vec![1, 0], vec![2, 1], vec![3, 2]]);
    }

    #[test]
    fn x_chain_uses_syndrome_control() {
        let c = build_parity_chain(3, Basis::X).unwrap();
        let ops: Vec<_> = c.ops().map(|op| op.qubits().to_vec()).collect();
        assert_eq!(ops, vec![vec![3, 0], vec![0, 1], vec![1, 2]]);
    }
}
