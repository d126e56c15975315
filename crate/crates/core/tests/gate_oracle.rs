use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use workshare::circuit::{dressed_iswap_layers, random_clifford};
use workshare::dense::{pauli_matrix, DenseUnitary};
use workshare::pauli::two_qubit_paulis;
use workshare::{circuit_unitary, Circuit, GateKind, GateOp, PauliString, StabilizerTableau};

fn gate_on_pair(kind: GateKind) -> GateOp {
    if kind.arity() == 1 {
        GateOp::single(kind, 1)
    } else {
        GateOp::pair(kind, 1, 0)
    }
}

#[test]
fn conjugation_table_matches_dense_matrices() {
    for kind in GateKind::UNITARY {
        let op = gate_on_pair(kind);
        let mut c = Circuit::new(2);
        c.push_ops(vec![op]).unwrap();
        let u = circuit_unitary::<f64>(&c).unwrap();
        for g in ["XI", "ZI", "IX", "IZ", "-YI", "YZ"] {
            let p: PauliString = g.parse().unwrap();
            let image = p.conjugate_by(&op);
            let want = u.conjugate(&pauli_matrix::<f64>(&p).unwrap()).unwrap();
            let got = pauli_matrix::<f64>(&image).unwrap();
            assert!(
                got.max_abs_diff(&want) < 1e-12,
                "{kind}: {g} -> {image} disagrees with dense conjugation"
            );
        }
    }
}

fn dressed_circuit() -> Circuit {
    let mut c = Circuit::new(2);
    for layer in dressed_iswap_layers(&[GateOp::cnot_swap(0, 1)]) {
        c.push_ops(layer).unwrap();
    }
    c
}

#[test]
fn dressed_iswap_equals_cnot_then_swap() {
    let mut plain = Circuit::new(2);
    plain.push_ops(vec![GateOp::cnot(0, 1)]).unwrap();
    plain
        .push_ops(vec![GateOp::pair(GateKind::Swap, 0, 1)])
        .unwrap();
    let a = circuit_unitary::<f64>(&plain).unwrap();
    let b = circuit_unitary::<f64>(&dressed_circuit()).unwrap();
    assert!(a.max_abs_diff_up_to_phase(&b) < 1e-10);
    let a32 = circuit_unitary::<f32>(&plain).unwrap();
    let b32 = circuit_unitary::<f32>(&dressed_circuit()).unwrap();
    assert!(a32.max_abs_diff_up_to_phase(&b32) < 1e-5);
}

#[test]
fn dressed_iswap_maps_all_paulis_like_cnot_swap() {
    let dressed = dressed_circuit();
    for (a, b) in two_qubit_paulis() {
        let mut p = PauliString::identity(2);
        p.set(0, a);
        p.set(1, b);
        let direct = p.conjugate_by(&GateOp::cnot_swap(0, 1));
        let via = dressed
            .ops()
            .fold(p.clone(), |acc, op| acc.conjugate_by(op));
        assert_eq!(direct, via, "{p}");
    }
}

#[test]
fn rz_quarter_turn_is_s_up_to_phase() {
    let mut c = Circuit::new(1);
    c.push_ops(vec![GateOp::single(GateKind::S, 0)]).unwrap();
    let s = circuit_unitary::<f64>(&c).unwrap();
    let mut st = workshare::DenseState::<f64>::new(1).unwrap();
    st.apply_gate(&GateOp::h(0)).unwrap();
    let mut a = st.clone();
    a.apply_rz(0, std::f64::consts::FRAC_PI_2).unwrap();
    st.apply_gate(&GateOp::single(GateKind::S, 0)).unwrap();
    assert!(workshare::states_equal_up_to_phase(&a, &st, 1e-12).unwrap());
    assert!(s.is_unitary(1e-12));
}

/// Enumerates every measurement branch of `c` on both engines and compares
/// branch probabilities.
fn compare_branches(c: &Circuit, measured: &[usize]) {
    let n = c.num_qubits();
    let mut t = StabilizerTableau::new(n).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    t.run(c, &mut rng).unwrap();
    let mut d = workshare::DenseState::<f64>::new(n).unwrap();
    d.run(c).unwrap();
    branch(&t, &d, measured, 1.0);
}

fn branch(t: &StabilizerTableau, d: &workshare::DenseState<f64>, rest: &[usize], weight: f64) {
    let Some((&q, tail)) = rest.split_first() else {
        return;
    };
    let p1 = d.probability_one(q).unwrap();
    match t.peek_z(q).unwrap() {
        Some(v) => {
            let want = if v { 1.0 } else { 0.0 };
            assert!((p1 - want).abs() < 1e-9, "deterministic {q}: {p1} vs {v}");
        }
        None => assert!((p1 - 0.5).abs() < 1e-9, "random {q}: {p1}"),
    }
    for outcome in [false, true] {
        let p = if outcome { p1 } else { 1.0 - p1 };
        if p < 1e-9 {
            continue;
        }
        let mut t2 = t.clone();
        t2.measure_z_forced(q, outcome).unwrap();
        let mut d2 = d.clone();
        d2.project(q, outcome).unwrap();
        branch(&t2, &d2, tail, weight * p);
    }
}

#[test]
fn random_clifford_circuits_agree_with_dense_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..200 {
        let n = rng.gen_range(1..=10);
        let qubits: Vec<usize> = (0..n).collect();
        let mut c = random_clifford(n, &qubits, 4, &mut rng);
        let mut extra = Vec::new();
        if n >= 2 {
            let a = rng.gen_range(0..n);
            let b = (a + rng.gen_range(1..n)) % n;
            let kind = [GateKind::CnotSwap, GateKind::ISwap, GateKind::Swap][rng.gen_range(0..3)];
            extra.push(GateOp::pair(kind, a, b));
        }
        c.push_ops(extra).unwrap();
        let mut order = qubits.clone();
        for i in (1..n).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        compare_branches(&c, &order[..n.min(4)]);
    }
}

#[test]
fn unitary_conjugation_of_identity_is_identity() {
    let id = DenseUnitary::<f64>::identity(3).unwrap();
    let p = pauli_matrix::<f64>(&"XYZ".parse().unwrap()).unwrap();
    assert!(id.conjugate(&p).unwrap().max_abs_diff(&p) < 1e-15);
}
