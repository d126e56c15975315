use crate::circuit::{Circuit, GateOp};
use crate::error::{Error, Result};

/// Relays `CNOTSWAP(path[0], path[last])` along `path` using one `|0⟩`
/// ancilla per interior qubit (`ancillas[i]` serves `path[i + 1]`).
///
/// The interior states are first banked into the ancillas, the two endpoint
/// states walk toward the middle through the emptied qubits, interact, walk
/// back and the interior states are restored. Every step is a CNOT+SWAP whose
/// control is in `|0⟩`, i.e. an exact swap, except the single interaction.
/// Moment count: `3 + 2 * ceil(m / 2)` for `m` interior qubits, or 1 when the
/// endpoints are adjacent.
pub fn synthesize_cut(n: usize, path: &[usize], ancillas: &[usize]) -> Result<Circuit> {
    if path.len() < 2 {
        return Err(Error::InvalidArgument(
            "cut path needs two endpoints".into(),
        ));
    }
    let m = path.len() - 2;
    if ancillas.len() != m {
        return Err(Error::SizeMismatch {
            expected: m,
            found: ancillas.len(),
        });
    }
    let mut all: Vec<usize> = path.iter().chain(ancillas).copied().collect();
    all.sort_unstable();
    if all.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidArgument(
            "path and ancillas must be distinct".into(),
        ));
    }
    if let Some(&q) = all.iter().find(|&&q| q >= n) {
        return Err(Error::QubitOutOfRange { index: q, n });
    }
    let mut c = Circuit::new(n);
    if m == 0 {
        c.push_ops(vec![GateOp::cnot_swap(path[0], path[1])])?;
        return Ok(c);
    }
    let interior = &path[1..=m];
    c.push_ops(
        interior
            .iter()
            .zip(ancillas)
            .map(|(&p, &a)| GateOp::cnot_swap(a, p))
            .collect(),
    )?;
    let left = m.div_ceil(2);
    let right = m - left;
    let last = m + 1;
    for k in 1..=left {
        let mut ops = vec![GateOp::cnot_swap(path[k], path[k - 1])];
        if k <= right {
            ops.push(GateOp::cnot_swap(path[last - k], path[last - k + 1]));
        }
        c.push_ops(ops)?;
    }
    c.push_ops(vec![GateOp::cnot_swap(path[left], path[left + 1])])?;
    for k in (1..=left).rev() {
        let mut ops = vec![GateOp::cnot_swap(path[k - 1], path[k])];
        if k <= right {
            ops.push(GateOp::cnot_swap(path[last - k + 1], path[last - k]));
        }
        c.push_ops(ops)?;
    }
    c.push_ops(
        interior
            .iter()
            .zip(ancillas)
            .map(|(&p, &a)| GateOp::cnot_swap(p, a))
            .collect(),
    )?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateKind;

    #[test]
    fn adjacent_endpoints_give_one_gate() {
        let c = synthesize_cut(2, &[0, 1], &[]).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.ops().next().unwrap().qubits(), &[0, 1]);
    }

    #[test]
    fn moment_counts() {
        let c = synthesize_cut(6, &[0, 1, 2, 3], &[4, 5]).unwrap();
        assert_eq!(c.len(), 5);
        let c = synthesize_cut(8, &[0, 1, 2, 3, 4], &[5, 6, 7]).unwrap();
        assert_eq!(c.len(), 7);
        assert!(c.ops().all(|op| op.kind() == GateKind::CnotSwap));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(synthesize_cut(4, &[0], &[]).is_err());
        assert!(synthesize_cut(4, &[0, 1, 2], &[]).is_err());
        assert!(synthesize_cut(4, &[0, 1, 2], &[1]).is_err());
        assert!(synthesize_cut(4, &[0, 1, 2], &[4]).is_err());
    }
}
