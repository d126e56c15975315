use crate::circuit::{Basis, Circuit, RoleKind};
use crate::error::{Error, Result};
use crate::layout::develop_quad_mesh;
use crate::pauli::{Pauli, PauliString};

use super::{
    copy_metadata, reverse_schedule, synthesize_cut, wrap_round, CnotSchedule, RoundParity, Variant,
};

/// A stabilizer check: syndrome role label, check type and data support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub syndrome: usize,
    pub basis: Basis,
    pub data: Vec<usize>,
}

impl Check {
    pub fn operator(&self, n: usize) -> PauliString {
        let letter = match self.basis {
            Basis::Z => Pauli::Z,
            Basis::X => Pauli::X,
        };
        PauliString::on_support(n, &self.data, letter)
    }
}

/// Compass steps `(row, col)` offsets.
fn dir(c: char) -> (isize, isize) {
    match c {
        'N' => (-1, 0),
        'S' => (1, 0),
        'W' => (0, -1),
        'E' => (0, 1),
        _ => unreachable!(),
    }
}

const Z_ORDER: [char; 4] = ['N', 'W', 'E', 'S'];
const X_ORDER: [char; 4] = ['N', 'E', 'W', 'S'];

fn check_supported(d: usize) -> Result<()> {
    if ![3, 5, 7].contains(&d) {
        return Err(Error::Unsupported(format!(
            "standard surface code distance {d} (supported: 3, 5, 7)"
        )));
    }
    Ok(())
}

/// Checks of the standard distance-`d` surface code on a `(2d-1) x (2d-1)`
/// grid, qubit `r * (2d - 1) + c`. Data sit where `r + c` is even; Z-checks on
/// odd rows, X-checks on even rows. `data` is listed in schedule order, one
/// entry per step, `None` where the neighbour falls off the grid.
fn standard_layout(d: usize) -> Vec<(usize, Basis, [Option<usize>; 4])> {
    let l = 2 * d - 1;
    let mut out = Vec::new();
    for r in 0..l {
        for c in 0..l {
            if (r + c) % 2 == 0 {
                continue;
            }
            let basis = if r % 2 == 1 { Basis::Z } else { Basis::X };
            let order = if basis == Basis::Z { Z_ORDER } else { X_ORDER };
            let mut nb = [None; 4];
            for (k, &dn) in order.iter().enumerate() {
                let (dr, dc) = dir(dn);
                let (rr, cc) = (r as isize + dr, c as isize + dc);
                if (0..l as isize).contains(&rr) && (0..l as isize).contains(&cc) {
                    nb[k] = Some(rr as usize * l + cc as usize);
                }
            }
            out.push((r * l + c, basis, nb));
        }
    }
    out
}

pub fn standard_checks(d: usize) -> Result<Vec<Check>> {
    check_supported(d)?;
    Ok(standard_layout(d)
        .into_iter()
        .map(|(s, basis, nb)| Check {
            syndrome: s,
            basis,
            data: nb.iter().flatten().copied().collect(),
        })
        .collect())
}

/// Standard surface code round: four moments, Z-checks in N, W, E, S order and
/// X-checks in N, E, W, S order, extracted simultaneously.
pub fn build_surface_standard(d: usize, variant: Variant) -> Result<Circuit> {
    check_supported(d)?;
    let l = 2 * d - 1;
    let n = l * l;
    let kinds = (0..n)
        .map(|q| {
            if (q / l + q % l) % 2 == 0 {
                RoleKind::Data
            } else {
                RoleKind::Syndrome
            }
        })
        .collect();
    let mut steps = vec![Vec::new(); 4];
    for (s, basis, nb) in standard_layout(d) {
        for (k, q) in nb.iter().enumerate() {
            if let Some(q) = *q {
                steps[k].push(match basis {
                    Basis::Z => (q, s),
                    Basis::X => (s, q),
                });
            }
        }
    }
    let mut c = CnotSchedule { kinds, steps }.realize(variant);
    let data_row = |r: usize| (0..l).step_by(2).map(move |col| r * l + col);
    let zl = PauliString::on_support(n, &data_row(0).collect::<Vec<_>>(), Pauli::Z);
    let xl_support: Vec<usize> = (0..l).step_by(2).map(|r| r * l).collect();
    let xl = PauliString::on_support(n, &xl_support, Pauli::X);
    c.set_logicals(xl, zl)?;
    let pos = match variant {
        Variant::Cnot => (0..n)
            .map(|q| [(q % l) as f64, -((q / l) as f64)])
            .collect(),
        Variant::CnotSwap => {
            let edges: Vec<(usize, usize)> = c.connectivity().into_iter().collect();
            develop_quad_mesh(n, &edges)?
        }
    };
    c.set_positions(pos)?;
    Ok(c)
}

/// Rotated distance-3 schedule: syndrome label, check type and the data qubit
/// met at each of the four steps.
pub const ROTATED_SCHEDULE: [(usize, Basis, [Option<usize>; 4]); 8] = [
    (9, Basis::Z, [None, None, Some(1), Some(2)]),
    (10, Basis::X, [None, None, Some(0), Some(3)]),
    (11, Basis::Z, [Some(0), Some(1), Some(3), Some(4)]),
    (12, Basis::X, [Some(1), Some(4), Some(2), Some(5)]),
    (13, Basis::X, [Some(3), Some(6), Some(4), Some(7)]),
    (14, Basis::Z, [Some(4), Some(5), Some(7), Some(8)]),
    (15, Basis::X, [Some(5), Some(8), None, None]),
    (16, Basis::Z, [Some(6), Some(7), None, None]),
];

pub const ROTATED_Z_SYNDROMES: [usize; 4] = [9, 11, 14, 16];
pub const ROTATED_X_SYNDROMES: [usize; 4] = [10, 12, 13, 15];

/// Path relaying the `14 -> 0` gate of the fourth step when the cut is used.
pub const ROTATED_CUT_PATH: [usize; 4] = [14, 1, 12, 0];
/// Ancillas banking qubits 1 and 12, in path order.
pub const ROTATED_ANCILLAS: [usize; 2] = [18, 17];

pub fn rotated_d3_checks() -> Vec<Check> {
    ROTATED_SCHEDULE
        .iter()
        .map(|&(s, basis, nb)| Check {
            syndrome: s,
            basis,
            data: nb.iter().flatten().copied().collect(),
        })
        .collect()
}

const ROTATED_POSITIONS: [[f64; 2]; 19] = [
    [0.0, 0.0],
    [1.0, 1.0],
    [-1.0, 1.5],
    [3.0, 0.5],
    [0.0, 2.0],
    [1.5, 3.0],
    [2.0, 2.0],
    [3.0, 2.5],
    [1.5, 4.0],
    [-1.0, -0.5],
    [0.5, -2.0],
    [0.5, -1.0],
    [1.0, 0.0],
    [2.0, 0.0],
    [0.0, 1.0],
    [1.0, 2.0],
    [2.0, 1.0],
    [1.5, -0.7],
    [0.5, 0.5],
];

fn rotated_forward(cut: bool) -> Circuit {
    let n = if cut { 19 } else { 17 };
    let mut kinds = vec![RoleKind::Data; 9];
    kinds.extend([RoleKind::Syndrome; 8]);
    if cut {
        kinds.extend([RoleKind::Ancilla; 2]);
    }
    let mut steps = vec![Vec::new(); 4];
    for (s, basis, nb) in ROTATED_SCHEDULE {
        for (k, q) in nb.iter().enumerate() {
            if let Some(q) = *q {
                steps[k].push(match basis {
                    Basis::Z => (q, s),
                    Basis::X => (s, q),
                });
            }
        }
    }
    let full = CnotSchedule { kinds, steps }.realize(Variant::CnotSwap);
    if !cut {
        return full;
    }
    let cut_pair = [ROTATED_CUT_PATH[0], ROTATED_CUT_PATH[3]];
    let mut c = Circuit::with_roles(n, full.initial_roles().to_vec()).expect("same size");
    for (k, m) in full.moments().iter().enumerate() {
        let ops = m
            .ops()
            .iter()
            .filter(|op| !(k == 3 && op.qubits() == cut_pair))
            .copied()
            .collect();
        c.push_ops(ops).expect("subset of a valid moment");
    }
    let relay = synthesize_cut(n, &ROTATED_CUT_PATH, &ROTATED_ANCILLAS).expect("valid path");
    c.append(&relay).expect("same size");
    c
}

/// Gate schedule of one rotated distance-3 round. Even rounds (the first
/// round is round 0) run the forward schedule and odd rounds its exact
/// inverse, so the syndrome roles return home every two rounds. With `cut`, the `14 -> 0` gate of the fourth step is replaced by
/// the five-moment relay through qubits 1 and 12 (ancillas 18 and 17).
pub fn build_rotated_d3(parity: RoundParity, cut: bool) -> Circuit {
    let mut fwd = rotated_forward(cut);
    let n = fwd.num_qubits();
    let xl = PauliString::on_support(n, &[0, 1, 2], Pauli::X);
    let zl = PauliString::on_support(n, &[0, 3, 6], Pauli::Z);
    fwd.set_logicals(xl, zl).expect("same size");
    fwd.set_positions(ROTATED_POSITIONS[..n].to_vec())
        .expect("same size");
    match parity {
        RoundParity::Even => fwd,
        RoundParity::Odd => {
            let mut rev = reverse_schedule(&fwd).expect("gate-only circuit");
            copy_metadata(&fwd, &mut rev);
            rev
        }
    }
}

/// Full round: syndrome resets, gates, Hadamards on X-check syndromes and
/// measurement of all eight syndromes. Cut ancillas are reset during the
/// fourth gate step of even rounds and in the preparation moment of odd
/// rounds.
pub fn rotated_round(parity: RoundParity, cut: bool) -> Circuit {
    let gates = build_rotated_d3(parity, cut);
    let at = (cut && parity == RoundParity::Even).then_some(3);
    wrap_round(&gates, &ROTATED_X_SYNDROMES, at).expect("valid round")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateKind;

    fn pairs(c: &Circuit, k: usize) -> Vec<(usize, usize)> {
        let mut v: Vec<_> = c.moments()[k]
            .ops()
            .iter()
            .map(|op| (op.qubits()[0], op.qubits()[1]))
            .collect();
        v.sort();
        v
    }

    #[test]
    fn rotated_physical_pairs() {
        let c = build_rotated_d3(RoundParity::Even, false);
        assert_eq!(
            pairs(&c, 0),
            vec![(0, 11), (4, 14), (6, 16), (12, 1), (13, 3), (15, 5)]
        );
        assert_eq!(
            pairs(&c, 3),
            vec![(1, 15), (2, 4), (5, 6), (11, 12), (14, 0), (16, 13)]
        );
        let pos = c.final_positions();
        assert_eq!(
            pos,
            vec![10, 9, 0, 11, 13, 2, 3, 1, 6, 14, 12, 16, 4, 15, 5, 8, 7]
        );
    }

    #[test]
    fn rotated_cut_replaces_one_gate() {
        let c = build_rotated_d3(RoundParity::Even, true);
        assert_eq!(c.num_qubits(), 19);
        assert_eq!(c.len(), 4 + 5);
        assert!(!c.moments()[3].ops().iter().any(|op| op.qubits() == [14, 0]));
        let plain = build_rotated_d3(RoundParity::Even, false);
        assert_eq!(
            &c.final_positions()[..17],
            plain.final_positions().as_slice()
        );
    }

    #[test]
    fn odd_round_restores_roles() {
        for cut in [false, true] {
            let fwd = build_rotated_d3(RoundParity::Even, cut);
            let rev = build_rotated_d3(RoundParity::Odd, cut);
            assert_eq!(rev.final_roles(), fwd.initial_roles());
        }
    }

    #[test]
    fn round_wrapping() {
        let r = rotated_round(RoundParity::Even, true);
        assert_eq!(r.count_kind(GateKind::MeasZ), 8);
        assert_eq!(r.count_kind(GateKind::ResetX), 4);
        assert_eq!(r.count_kind(GateKind::H), 4);
        assert!(r.moments()[4]
            .ops()
            .iter()
            .any(|op| op.kind() == GateKind::ResetZ && op.qubits() == [17]));
        let e = rotated_round(RoundParity::Odd, true);
        assert!(e.moments()[0].touches(18));
    }

    #[test]
    fn standard_sizes() {
        for d in [3, 5, 7] {
            let c = build_surface_standard(d, Variant::Cnot).unwrap();
            assert_eq!(c.num_qubits(), (2 * d - 1) * (2 * d - 1));
            assert_eq!(c.len(), 4);
        }
        assert!(build_surface_standard(4, Variant::Cnot).is_err());
        let checks = standard_checks(3).unwrap();
        assert_eq!(checks.len(), 12);
    }
}
