use workshare::circuit::Basis;
use workshare::codes::{
    build_color7, build_rotated_d3, build_surface_standard, RoundParity, Variant,
};

#[test]
fn color_code_z_check_spreads_over_five_qubits() {
    let c = build_color7(Variant::CnotSwap, Basis::Z);
    let set: Vec<usize> = c.work_sharing_set().into_iter().collect();
    // a, b, A, B, C
    assert_eq!(set, vec![0, 1, 7, 8, 9]);
    let plain = build_color7(Variant::Cnot, Basis::Z);
    assert_eq!(plain.work_sharing_set().len(), 3);
}

#[test]
fn surface_code_work_sharing_sizes() {
    let d3 = build_surface_standard(3, Variant::CnotSwap).unwrap();
    assert_eq!(d3.work_sharing_set().len(), 20);
    assert_eq!(
        build_surface_standard(3, Variant::Cnot)
            .unwrap()
            .work_sharing_set()
            .len(),
        12
    );
    let d5 = build_surface_standard(5, Variant::CnotSwap).unwrap();
    assert_eq!(d5.work_sharing_set().len(), 56);
    for cut in [false, true] {
        let r = build_rotated_d3(RoundParity::Even, cut);
        assert_eq!(r.work_sharing_set().len(), 12);
    }
}
