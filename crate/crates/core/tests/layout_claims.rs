use workshare::codes::{
    build_parity_chain, build_rotated_d3, build_surface_standard, RoundParity, Variant,
};
use workshare::{formula_counts, Basis, Circuit, Layout32, Layout64};

fn count(c: &Circuit) -> usize {
    Layout64::from_circuit(c)
        .unwrap()
        .accessibility()
        .inaccessible
        .len()
}

#[test]
fn standard_surface_counts_match_formula() {
    for d in [3, 5] {
        let before = build_surface_standard(d, Variant::Cnot).unwrap();
        let after = build_surface_standard(d, Variant::CnotSwap).unwrap();
        assert_eq!(
            (count(&before), count(&after)),
            formula_counts(d).unwrap(),
            "d={d}"
        );
    }
}

#[test]
fn rotated_cut_is_fully_accessible() {
    let uncut = build_rotated_d3(RoundParity::Even, false);
    let cut = build_rotated_d3(RoundParity::Even, true);
    let r = Layout64::from_circuit(&uncut).unwrap().accessibility();
    assert_eq!(r.inaccessible, vec![1]);
    assert_eq!(count(&cut), 0);
}

#[test]
fn parity_chain_is_a_path() {
    let c = build_parity_chain(4, Basis::Z).unwrap();
    let edges: Vec<_> = workshare::connectivity_graph(&c).into_iter().collect();
    assert_eq!(edges, vec![(0, 1), (0, 4), (1, 2), (2, 3)]);
    assert_eq!(count(&c), 0);
    assert!(workshare::connectivity_graph(&Circuit::new(3)).is_empty());
}

#[test]
fn invariant_under_rigid_motion_and_scale() {
    let c = build_surface_standard(3, Variant::CnotSwap).unwrap();
    let l = Layout64::from_circuit(&c).unwrap();
    let base = l.accessibility();
    for (a, s) in [(0.3, 1.0), (1.7, 2.5), (-2.2, 0.1)] {
        assert_eq!(l.transformed(a, s, [3.0, -7.0]).accessibility(), base);
    }
    let l32 = Layout32::from_circuit(&c).unwrap();
    assert_eq!(l32.accessibility(), base);
}
