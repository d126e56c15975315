use std::f64::consts::PI;

use crate::circuit::{Basis, Circuit, GateKind, GateOp, RoleKind};

use super::{synthesize_cut, CnotSchedule, Variant};

/// Data qubit letters `a..g` map to qubits `0..6`; syndromes `A, B, C` are `7..9`.
pub const COLOR7_LETTERS: [char; 10] = ['a', 'b', 'c', 'd', 'e', 'f', 'g', 'A', 'B', 'C'];

/// Data qubits of each face, in the order they meet the face's syndrome.
pub const COLOR7_FACES: [[usize; 4]; 3] = [[2, 4, 5, 6], [3, 6, 0, 5], [4, 0, 6, 1]];

pub fn color7_face_orders() -> [(usize, [usize; 4]); 3] {
    [
        (7, COLOR7_FACES[0]),
        (8, COLOR7_FACES[1]),
        (9, COLOR7_FACES[2]),
    ]
}

fn color7_kinds() -> Vec<RoleKind> {
    let mut k = vec![RoleKind::Data; 7];
    k.extend([RoleKind::Syndrome; 3]);
    k
}

fn color7_schedule(check: Basis) -> CnotSchedule {
    let steps = (0..4)
        .map(|k| {
            color7_face_orders()
                .iter()
                .map(|&(s, face)| match check {
                    Basis::Z => (face[k], s),
                    Basis::X => (s, face[3 - k]),
                })
                .collect()
        })
        .collect();
    CnotSchedule {
        kinds: color7_kinds(),
        steps,
    }
}

/// Outer-face order of the CNOT+SWAP connectivity, used to place it on a ring.
const COLOR7_RING: [usize; 10] = [7, 5, 0, 1, 3, 8, 6, 4, 9, 2];

fn triangle_positions() -> Vec<[f64; 2]> {
    let r3 = 3f64.sqrt();
    let corner_c = [0.0, 2.0];
    let corner_d = [-r3, -1.0];
    let corner_b = [r3, -1.0];
    let mid = |p: [f64; 2], q: [f64; 2]| [(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0];
    let data = [
        mid(corner_d, corner_b),
        corner_b,
        corner_c,
        corner_d,
        mid(corner_c, corner_b),
        mid(corner_c, corner_d),
        [0.0, 0.0],
    ];
    let mut pos = data.to_vec();
    for face in COLOR7_FACES {
        let (sx, sy) = face
            .iter()
            .fold((0.0, 0.0), |(x, y), &q| (x + data[q][0], y + data[q][1]));
        pos.push([sx / 4.0, sy / 4.0]);
    }
    pos
}

fn ring_positions(order: &[usize]) -> Vec<[f64; 2]> {
    let mut pos = vec![[0.0; 2]; order.len()];
    for (i, &q) in order.iter().enumerate() {
        let a = 2.0 * PI * i as f64 / order.len() as f64;
        pos[q] = [3.0 * a.cos(), 3.0 * a.sin()];
    }
    pos
}

/// Seven-qubit color code check on 10 qubits. The CNOT+SWAP X-check starts
/// where the Z-check left the syndrome roles and runs the faces in reverse
/// order, which returns every role home.
pub fn build_color7(variant: Variant, check: Basis) -> Circuit {
    let z = color7_schedule(Basis::Z);
    let mut c = match (variant, check) {
        (_, Basis::Z) | (Variant::Cnot, Basis::X) => color7_schedule(check).realize(variant),
        (Variant::CnotSwap, Basis::X) => {
            let start = z.realize(Variant::CnotSwap).final_roles();
            color7_schedule(Basis::X)
                .realize_from(Variant::CnotSwap, start)
                .expect("roles form a permutation")
        }
    };
    let pos = match variant {
        Variant::Cnot => triangle_positions(),
        Variant::CnotSwap => ring_positions(&COLOR7_RING),
    };
    c.set_positions(pos).expect("10 positions");
    c
}

/// Fault-tolerant color code Z-check with four-qubit cat states.
#[derive(Clone, Debug)]
pub struct Color7Ft {
    pub circuit: Circuit,
    /// Role labels of each face's cat block; the block readout is the parity
    /// of their measurements.
    pub blocks: [[usize; 4]; 3],
    /// Moment index of the first data-to-cat coupling step.
    pub coupling_start: usize,
    /// Number of moments spent on the cut relay (0 without the cut).
    pub relay_moments: usize,
}

pub const COLOR7_FT_ANCILLAS: [usize; 3] = [19, 20, 21];

/// Cat block qubits: `A1..A4 = 7..10`, `B1..B4 = 11..14`, `C1..C4 = 15..18`.
fn cat(block: usize, i: usize) -> usize {
    7 + 4 * block + (i - 1)
}

/// Path of the relayed `A4 -> C4` interaction: `A4, A3, B4, C1, C4`.
pub fn color7_ft_cut_path() -> [usize; 5] {
    [cat(0, 4), cat(0, 3), cat(1, 4), cat(2, 1), cat(2, 4)]
}

/// Coupling steps as (data qubit, physical cat qubit).
fn ft_coupling() -> [Vec<(usize, usize)>; 3] {
    let (a, b, c, d, e, f, g) = (0, 1, 2, 3, 4, 5, 6);
    [
        vec![
            (g, cat(0, 3)),
            (e, cat(0, 4)),
            (f, cat(0, 2)),
            (a, cat(1, 1)),
            (c, cat(0, 1)),
            (d, cat(1, 2)),
            (b, cat(2, 3)),
        ],
        vec![
            (e, cat(2, 4)),
            (g, cat(1, 4)),
            (f, cat(1, 3)),
            (a, cat(2, 2)),
        ],
        vec![(g, cat(2, 1))],
    ]
}

/// Builds the 19-qubit circuit (22 with the cut ancillas): cat preparation
/// along each block chain, Hadamards turning each cat into its even-parity
/// form, three CNOT+SWAP coupling steps and Z measurement of every cat qubit.
/// With `cut`, the `A4 -> C4` gate is replaced by [`synthesize_cut`] along
/// `A4, A3, B4, C1, C4`.
pub fn build_color7_ft(cut: bool) -> Color7Ft {
    let n = if cut { 22 } else { 19 };
    let mut kinds = vec![RoleKind::Data; 7];
    kinds.extend([RoleKind::Syndrome; 12]);
    if cut {
        kinds.extend([RoleKind::Ancilla; 3]);
    }
    let mut c = Circuit::with_role_kinds(&kinds);
    let chains = [
        [cat(0, 1), cat(0, 2), cat(0, 3), cat(0, 4)],
        [cat(1, 1), cat(1, 2), cat(1, 3), cat(1, 4)],
        [cat(2, 4), cat(2, 1), cat(2, 2), cat(2, 3)],
    ];
    let mut prep: Vec<GateOp> = (7..19)
        .map(|q| GateOp::single(GateKind::ResetZ, q))
        .collect();
    if cut {
        prep.extend(COLOR7_FT_ANCILLAS.map(|q| GateOp::single(GateKind::ResetZ, q)));
    }
    c.push_ops(prep).expect("disjoint");
    c.push_ops(chains.iter().map(|ch| GateOp::h(ch[0])).collect())
        .expect("disjoint");
    for k in 0..3 {
        c.push_ops(
            chains
                .iter()
                .map(|ch| GateOp::cnot_swap(ch[k], ch[k + 1]))
                .collect(),
        )
        .expect("disjoint");
    }
    c.push_ops((7..19).map(GateOp::h).collect())
        .expect("disjoint");
    let coupling_start = c.len();

    // Data roles travel with each gate; cat roles are tracked by position.
    let mut at = (0..n).collect::<Vec<usize>>();
    let cut_pair = (cat(0, 4), cat(2, 4));
    let mut relay_moments = 0;
    for (k, step) in ft_coupling().iter().enumerate() {
        let mut ops = Vec::new();
        let mut deferred = None;
        for &(data, target) in step {
            let (pc, pt) = (at[data], target);
            if cut && (pc, pt) == cut_pair {
                deferred = Some((pc, pt));
            } else {
                ops.push(GateOp::cnot_swap(pc, pt));
            }
            at[data] = pt;
        }
        c.push_ops(ops).expect("disjoint");
        if let Some((pc, pt)) = deferred {
            debug_assert_eq!(k, 1);
            let path = color7_ft_cut_path();
            debug_assert_eq!((path[0], path[4]), (pc, pt));
            let relay = synthesize_cut(n, &path, &COLOR7_FT_ANCILLAS).expect("valid path");
            relay_moments = relay.len();
            for m in relay.moments() {
                c.push_moment(m.clone()).expect("same size");
            }
        }
    }
    let roles = c.final_roles();
    let mut blocks = [[0usize; 4]; 3];
    for (b, block) in blocks.iter_mut().enumerate() {
        for i in 0..4 {
            block[i] = cat(b, i + 1);
        }
    }
    let meas = roles
        .iter()
        .enumerate()
        .filter(|(_, r)| r.kind == RoleKind::Syndrome)
        .map(|(q, _)| GateOp::single(GateKind::MeasZ, q))
        .collect();
    c.push_ops(meas).expect("disjoint");
    Color7Ft {
        circuit: c,
        blocks,
        coupling_start,
        relay_moments,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::RoleKind;

    #[test]
    fn z_check_moves_syndromes_to_a_b_and_c() {
        let c = build_color7(Variant::CnotSwap, Basis::Z);
        let mut syn: Vec<usize> = c
            .final_roles()
            .iter()
            .enumerate()
            .filter(|(_, r)| r.kind == RoleKind::Syndrome)
            .map(|(q, _)| q)
            .collect();
        syn.sort();
        assert_eq!(syn, vec![0, 1, 9]);
        assert_eq!(c.len(), 4);
    }

    #[test]
    fn x_check_returns_roles_home() {
        let x = build_color7(Variant::CnotSwap, Basis::X);
        let z = build_color7(Variant::CnotSwap, Basis::Z);
        assert_eq!(x.initial_roles(), z.final_roles().as_slice());
        assert_eq!(x.final_roles(), z.initial_roles());
    }

    #[test]
    fn ft_coupling_touches_each_cat_once() {
        let mut seen = [0; 19];
        for step in ft_coupling() {
            for (_, t) in step {
                seen[t] += 1;
            }
        }
        assert!(seen[7..].iter().all(|&k| k == 1));
        let ft = build_color7_ft(true);
        assert_eq!(ft.circuit.num_qubits(), 22);
        assert_eq!(ft.relay_moments, 7);
        assert_eq!(ft.circuit.final_positions()[19..], [19, 20, 21]);
    }
}
