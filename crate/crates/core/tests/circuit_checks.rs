use workshare::verify::{
    check_accessibility, check_cat_state, check_chain_propagation, check_color7_ft_readout,
    check_cut_equivalence, check_gate_identity, check_tables, check_variant_equivalence,
    CheckResult,
};

fn assert_all(results: Vec<CheckResult>) {
    for r in &results {
        assert!(r.passed, "{}: {}", r.name, r.detail);
    }
}

#[test]
fn gate_identity() {
    assert_all(vec![check_gate_identity()]);
}

#[test]
fn chain_propagation() {
    assert_all(vec![check_chain_propagation()]);
}

#[test]
fn variant_equivalence() {
    assert_all(check_variant_equivalence(30, 11));
}

#[test]
fn cut_equivalence() {
    assert_all(check_cut_equivalence(30, 12));
}

#[test]
fn cat_state() {
    assert_all(vec![check_cat_state(2000, 13)]);
}

#[test]
fn color7_ft_readout() {
    assert_all(vec![check_color7_ft_readout(14)]);
}

#[test]
fn accessibility_and_tables() {
    assert_all(vec![check_accessibility(), check_tables()]);
}
