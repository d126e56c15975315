//! Self-checks of the circuit identities: each returns a [`CheckResult`] so
//! that the command line and the test suites report the same findings.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::circuit::{
    dressed_iswap_layers, random_clifford, Basis, Circuit, GateKind, GateOp, Role, RoleKind,
};
use crate::codes::{
    build_cat4, build_color7, build_color7_ft, build_parity_chain, build_rotated_d3,
    build_surface_standard, color7_ft_cut_path, standard_checks, synthesize_cut, RoundParity,
    Variant, CAT4_QUBITS, COLOR7_FACES, COLOR7_FT_ANCILLAS, ROTATED_X_SYNDROMES,
};
use crate::decoder::{builtin_tables, diff_tables, generate_tables_bruteforce, RowStatus};
use crate::dense::{circuit_unitary, states_equal_up_to_phase, DenseState};
use crate::error::{Error, Result};
use crate::experiment::{DecoderChoice, MemoryExperiment};
use crate::layout::{formula_counts, Layout};
use crate::memory::RotatedRounds;
use crate::pauli::{Pauli, PauliString, Sign};
use crate::tableau::{stabilizer_groups_equal, StabilizerTableau};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        CheckResult {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        }
    }

    fn from_result(name: &str, r: Result<String>) -> Self {
        match r {
            Ok(detail) => Self::new(name, true, detail),
            Err(e) => Self::new(name, false, e.to_string()),
        }
    }
}

fn fail(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

/// `CNOT; SWAP` against the dressed iSWAP sequence, maximum entry deviation
/// up to a global phase.
pub fn gate_identity_deviation() -> Result<f64> {
    let mut plain = Circuit::new(2);
    plain.push_ops(vec![GateOp::cnot(0, 1)])?;
    plain.push_ops(vec![GateOp::pair(GateKind::Swap, 0, 1)])?;
    let mut dressed = Circuit::new(2);
    for layer in dressed_iswap_layers(&[GateOp::cnot_swap(0, 1)]) {
        dressed.push_ops(layer)?;
    }
    let a = circuit_unitary::<f64>(&plain)?;
    let b = circuit_unitary::<f64>(&dressed)?;
    Ok(a.max_abs_diff_up_to_phase(&b))
}

pub fn check_gate_identity() -> CheckResult {
    let r = gate_identity_deviation().and_then(|dev| {
        if dev < 1e-10 {
            Ok(format!("max deviation {dev:.2e}"))
        } else {
            Err(fail(format!("max deviation {dev:.2e}")))
        }
    });
    CheckResult::from_result("gate-identity", r)
}

/// Four-qubit parity chain on every basis input. Z-check: the syndrome ends
/// holding `i1`, data qubits shift by one and the last data qubit holds the
/// parity. X-check: the same statement in the Hadamard basis.
pub fn check_chain_propagation() -> CheckResult {
    let r = (|| -> Result<String> {
        for basis in [Basis::Z, Basis::X] {
            let c = build_parity_chain(4, basis)?;
            for input in 0..16usize {
                let bit = |k: usize| (input >> k) & 1 == 1;
                let mut in_bits: Vec<bool> = (0..4).map(bit).collect();
                in_bits.push(false);
                let parity = (0..4).fold(false, |acc, k| acc ^ bit(k));
                let out_bits = [bit(1), bit(2), bit(3), parity, bit(0)];
                let mut state = DenseState::<f64>::from_bits(&in_bits)?;
                let mut expected = DenseState::<f64>::from_bits(&out_bits)?;
                if basis == Basis::X {
                    for q in 0..5 {
                        state.apply_gate(&GateOp::h(q))?;
                        expected.apply_gate(&GateOp::h(q))?;
                    }
                }
                state.run(&c)?;
                if !states_equal_up_to_phase(&state, &expected, 1e-12)? {
                    return Err(fail(format!("{basis:?}-check input {input:04b} disagrees")));
                }
            }
        }
        Ok("32 basis inputs agree".into())
    })();
    CheckResult::from_result("chain-propagation", r)
}

/// Same circuit on `n` qubits; extra qubits are idle ancillas labelled by
/// their index.
pub fn widen(c: &Circuit, n: usize) -> Result<Circuit> {
    if n < c.num_qubits() {
        return Err(Error::SizeMismatch {
            expected: c.num_qubits(),
            found: n,
        });
    }
    let mut roles = c.initial_roles().to_vec();
    roles.extend((c.num_qubits()..n).map(|label| Role {
        kind: RoleKind::Ancilla,
        label,
    }));
    let mut out = Circuit::with_roles(n, roles)?;
    for m in c.moments() {
        out.push_moment(m.clone())?;
    }
    Ok(out)
}

/// Preparation on role labels: random Clifford on data roles, syndrome roles
/// to `|0⟩` or `|+⟩` (labels in `x_labels`), ancillas left in `|0⟩`.
fn prepare(
    n: usize,
    kinds: &[(usize, RoleKind)],
    x_labels: &[usize],
    rng: &mut impl Rng,
) -> Circuit {
    let data: Vec<usize> = kinds
        .iter()
        .filter(|(_, k)| *k == RoleKind::Data)
        .map(|&(l, _)| l)
        .collect();
    let mut c = random_clifford(n, &data, 6, rng);
    let had: Vec<GateOp> = kinds
        .iter()
        .filter(|&&(l, k)| k == RoleKind::Syndrome && x_labels.contains(&l))
        .map(|&(l, _)| GateOp::h(l))
        .collect();
    c.push_ops(had).expect("disjoint");
    c
}

fn role_kinds(c: &Circuit) -> Vec<(usize, RoleKind)> {
    c.initial_roles()
        .iter()
        .map(|r| (r.label, r.kind))
        .collect()
}

fn initial_positions(c: &Circuit) -> Vec<usize> {
    let mut pos = vec![0; c.num_qubits()];
    for (q, r) in c.initial_roles().iter().enumerate() {
        pos[r.label] = q;
    }
    pos
}

fn run_from_roles(c: &Circuit, prep: &Circuit) -> Result<StabilizerTableau> {
    let map = initial_positions(c);
    let mut t = StabilizerTableau::new(c.num_qubits())?;
    for op in prep.ops() {
        t.apply_gate(&op.remapped(&map))?;
    }
    for op in c.ops() {
        t.apply_gate(op)?;
    }
    Ok(t)
}

/// `relabel[q]` = qubit of `a` holding, at the end, the role that `b` holds
/// on qubit `q`.
fn final_relabel(a: &Circuit, b: &Circuit) -> Vec<usize> {
    let pos_a = a.final_positions();
    b.final_roles().iter().map(|r| pos_a[r.label]).collect()
}

/// Runs two gate-only circuits with the same role set on identical random
/// inputs and compares the final stabilizer groups under role relabelling,
/// then the syndrome measurement outcomes (forced to agree where random).
pub fn compare_circuits(
    a: &Circuit,
    b: &Circuit,
    x_labels: &[usize],
    trials: usize,
    seed: u64,
) -> Result<()> {
    if a.num_qubits() != b.num_qubits() {
        return Err(Error::SizeMismatch {
            expected: a.num_qubits(),
            found: b.num_qubits(),
        });
    }
    let n = a.num_qubits();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let relabel = final_relabel(a, b);
    let kinds = role_kinds(a);
    let end_a = a.final_roles();
    let pos_b = b.final_positions();
    for trial in 0..trials {
        let prep = prepare(n, &kinds, x_labels, &mut rng);
        let mut ta = run_from_roles(a, &prep)?;
        let mut tb = run_from_roles(b, &prep)?;
        if !stabilizer_groups_equal(&ta, &tb, &relabel)? {
            return Err(fail(format!("trial {trial}: stabilizer groups differ")));
        }
        for (qa, r) in end_a.iter().enumerate() {
            if r.kind != RoleKind::Syndrome {
                continue;
            }
            let qb = pos_b[r.label];
            if x_labels.contains(&r.label) {
                ta.apply_gate(&GateOp::h(qa))?;
                tb.apply_gate(&GateOp::h(qb))?;
            }
            let ma = ta.measure_z(qa, &mut rng)?;
            let mb = tb
                .measure_z_forced(qb, ma.outcome)
                .map_err(|_| fail(format!("trial {trial}: syndrome {} disagrees", r.label)))?;
            if ma.deterministic != mb.deterministic {
                return Err(fail(format!(
                    "trial {trial}: syndrome {} determinism differs",
                    r.label
                )));
            }
        }
        if !stabilizer_groups_equal(&ta, &tb, &relabel)? {
            return Err(fail(format!(
                "trial {trial}: post-measurement states differ"
            )));
        }
    }
    Ok(())
}

/// CNOT versus CNOT+SWAP forms of the color code checks and the standard
/// surface codes.
pub fn check_variant_equivalence(trials: usize, seed: u64) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let color = (|| -> Result<String> {
        let z_a = build_color7(Variant::Cnot, Basis::Z);
        let z_b = build_color7(Variant::CnotSwap, Basis::Z);
        compare_circuits(&z_a, &z_b, &[], trials, seed)?;
        let x_a = build_color7(Variant::Cnot, Basis::X);
        let x_b = build_color7(Variant::CnotSwap, Basis::X);
        compare_circuits(&x_a, &x_b, &[7, 8, 9], trials, seed ^ 1)?;
        if x_b.final_roles() != z_b.initial_roles() {
            return Err(fail("Z then X check does not return roles home"));
        }
        Ok(format!("{trials} random inputs, Z- and X-check"))
    })();
    out.push(CheckResult::from_result("equivalence-color7", color));
    for d in [3, 5] {
        let r = (|| -> Result<String> {
            let a = build_surface_standard(d, Variant::Cnot)?;
            let b = build_surface_standard(d, Variant::CnotSwap)?;
            let x: Vec<usize> = standard_checks(d)?
                .into_iter()
                .filter(|c| c.basis == Basis::X)
                .map(|c| c.syndrome)
                .collect();
            compare_circuits(&a, &b, &x, trials, seed ^ (d as u64) << 8)?;
            Ok(format!("{trials} random inputs"))
        })();
        out.push(CheckResult::from_result(
            &format!("equivalence-surface-d{d}"),
            r,
        ));
    }
    out
}

fn ancillas_in_zero(t: &StabilizerTableau, qubits: &[usize]) -> Result<bool> {
    for &q in qubits {
        let z = PauliString::single(t.num_qubits(), q, Pauli::Z);
        if t.expectation(&z)? != Some(Sign::Plus) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Cut relay against the direct gate: rotated code rounds with and without
/// the cut, and the relayed `A4 -> C4` gate of the cat-state color code check.
pub fn check_cut_equivalence(trials: usize, seed: u64) -> Vec<CheckResult> {
    let rotated = (|| -> Result<String> {
        for parity in [RoundParity::Odd, RoundParity::Even] {
            let cut = build_rotated_d3(parity, true);
            let plain = widen(&build_rotated_d3(parity, false), cut.num_qubits())?;
            compare_circuits(
                &plain,
                &cut,
                &ROTATED_X_SYNDROMES,
                trials,
                seed ^ parity as u64,
            )?;
            let anc: Vec<usize> = cut.final_positions()[17..].to_vec();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..trials {
                let prep = prepare(19, &role_kinds(&cut), &ROTATED_X_SYNDROMES, &mut rng);
                let t = run_from_roles(&cut, &prep)?;
                if !ancillas_in_zero(&t, &anc)? {
                    return Err(fail("ancilla not returned to |0⟩"));
                }
            }
        }
        Ok(format!(
            "{trials} random inputs per round parity, ancillas end in |0⟩"
        ))
    })();
    let relay = (|| -> Result<String> {
        let n = 22;
        let path = color7_ft_cut_path();
        let relay = synthesize_cut(n, &path, &COLOR7_FT_ANCILLAS)?;
        let mut direct = Circuit::new(n);
        direct.push_ops(vec![GateOp::cnot_swap(path[0], path[4])])?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc07);
        for trial in 0..trials {
            let prep = random_clifford(n, &path, 6, &mut rng);
            let mut ta = StabilizerTableau::new(n)?;
            let mut tb = StabilizerTableau::new(n)?;
            for op in prep.ops().chain(direct.ops()) {
                ta.apply_gate(op)?;
            }
            for op in prep.ops().chain(relay.ops()) {
                tb.apply_gate(op)?;
            }
            if !stabilizer_groups_equal(&ta, &tb, &(0..n).collect::<Vec<_>>())? {
                return Err(fail(format!(
                    "trial {trial}: relay differs from direct gate"
                )));
            }
            if !ancillas_in_zero(&tb, &COLOR7_FT_ANCILLAS)? {
                return Err(fail("relay ancilla not returned to |0⟩"));
            }
        }
        let ft_cut = build_color7_ft(true).circuit;
        let ft = widen(&build_color7_ft(false).circuit, n)?;
        compare_ft(&ft, &ft_cut, trials, seed)?;
        Ok(format!(
            "{trials} random inputs, {} relay moments",
            relay.len()
        ))
    })();
    vec![
        CheckResult::from_result("cut-rotated-d3", rotated),
        CheckResult::from_result("cut-color7-ft", relay),
    ]
}

/// Compares two cat-state check circuits just before their final
/// measurement moment.
fn compare_ft(a: &Circuit, b: &Circuit, trials: usize, seed: u64) -> Result<()> {
    let n = a.num_qubits();
    let data: Vec<usize> = (0..7).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xf7);
    let relabel = final_relabel(a, b);
    for trial in 0..trials {
        let prep = random_clifford(n, &data, 6, &mut rng);
        let mut ta = StabilizerTableau::new(n)?;
        let mut tb = StabilizerTableau::new(n)?;
        for (t, c) in [(&mut ta, a), (&mut tb, b)] {
            for op in prep.ops() {
                t.apply_gate(op)?;
            }
            for m in &c.moments()[..c.len() - 1] {
                for op in m.ops() {
                    t.apply_op(op, &mut rng)?;
                }
            }
        }
        if !stabilizer_groups_equal(&ta, &tb, &relabel)? {
            return Err(fail(format!(
                "trial {trial}: cut and uncut cat checks differ"
            )));
        }
    }
    Ok(())
}

/// Cat-state color code check on data in `|0000000⟩` with a single X error:
/// each block's measurement parity must equal the face parity of the error,
/// with and without the cut.
pub fn check_color7_ft_readout(seed: u64) -> CheckResult {
    let r = (|| -> Result<String> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for cut in [false, true] {
            let ft = build_color7_ft(cut);
            let pos = ft.circuit.final_positions();
            for err in (0..7).map(Some).chain([None]) {
                for _ in 0..8 {
                    let mut t = StabilizerTableau::new(ft.circuit.num_qubits())?;
                    if let Some(q) = err {
                        t.apply_gate(&GateOp::single(GateKind::X, q))?;
                    }
                    let records = t.run(&ft.circuit, &mut rng)?;
                    let bit = |q: usize| {
                        records
                            .iter()
                            .find(|m| m.qubit == q)
                            .map(|m| m.outcome)
                            .expect("every cat qubit is measured")
                    };
                    for (b, block) in ft.blocks.iter().enumerate() {
                        let got = block.iter().fold(false, |acc, &l| acc ^ bit(pos[l]));
                        let want = err.is_some_and(|q| COLOR7_FACES[b].contains(&q));
                        if got != want {
                            return Err(fail(format!(
                                "cut={cut} error {err:?}: block {b} parity {got}"
                            )));
                        }
                    }
                }
            }
        }
        Ok("all single X errors located, with and without the cut".into())
    })();
    CheckResult::from_result("color7-ft-readout", r)
}

/// Stabilizers of the cat circuit and its Z readout statistics.
pub fn cat_state_stats(shots: usize, seed: u64) -> Result<(bool, usize, usize, usize)> {
    let c = build_cat4();
    let mut t = StabilizerTableau::new(5)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    t.run(&c, &mut rng)?;
    let xxxx = PauliString::on_support(5, &CAT4_QUBITS, Pauli::X);
    let mut ok = t.expectation(&xxxx)? == Some(Sign::Plus);
    for w in CAT4_QUBITS.windows(2) {
        ok &= t.expectation(&PauliString::on_support(5, w, Pauli::Z))? == Some(Sign::Plus);
    }
    ok &= t.expectation(&PauliString::single(5, 3, Pauli::Z))? == Some(Sign::Plus);
    let (mut zeros, mut ones, mut other) = (0, 0, 0);
    for _ in 0..shots {
        let mut s = t.clone();
        let bits: Vec<bool> = CAT4_QUBITS
            .iter()
            .map(|&q| s.measure_z(q, &mut rng).map(|m| m.outcome))
            .collect::<Result<_>>()?;
        match (bits.iter().all(|&b| !b), bits.iter().all(|&b| b)) {
            (true, _) => zeros += 1,
            (_, true) => ones += 1,
            _ => other += 1,
        }
    }
    Ok((ok, zeros, ones, other))
}

pub fn check_cat_state(shots: usize, seed: u64) -> CheckResult {
    let r = cat_state_stats(shots, seed).and_then(|(ok, zeros, ones, other)| {
        let frac = zeros as f64 / shots as f64;
        let sigma = (0.25 / shots as f64).sqrt();
        let detail = format!("0000: {zeros}, 1111: {ones}, other: {other}");
        if ok && other == 0 && (frac - 0.5).abs() <= 3.0 * sigma {
            Ok(detail)
        } else {
            Err(fail(format!("stabilizers ok: {ok}; {detail}")))
        }
    });
    CheckResult::from_result("cat-state", r)
}

/// Every circuit-level check with the default sizes.
pub fn run_circuit_checks(seed: u64) -> Vec<CheckResult> {
    let mut out = vec![check_gate_identity(), check_chain_propagation()];
    out.extend(check_variant_equivalence(100, seed));
    out.extend(check_cut_equivalence(100, seed));
    out.push(check_color7_ft_readout(seed));
    out.push(check_cat_state(10_000, seed));
    out
}

fn inaccessible_count(c: &Circuit) -> Result<usize> {
    Ok(Layout::<f64>::from_circuit(c)?
        .accessibility()
        .inaccessible
        .len())
}

/// Enclosed-qubit counts of the standard surface layouts against
/// `(2d - 3)^2 -> (2d - 3)(2d - 5)`, and a fully accessible rotated code with
/// the cut.
pub fn check_accessibility() -> CheckResult {
    let r = (|| {
        let mut parts = Vec::new();
        for d in [3, 5] {
            let before = inaccessible_count(&build_surface_standard(d, Variant::Cnot)?)?;
            let after = inaccessible_count(&build_surface_standard(d, Variant::CnotSwap)?)?;
            if (before, after) != formula_counts(d)? {
                return Err(fail(format!(
                    "d = {d}: ({before}, {after}) vs formula {:?}",
                    formula_counts(d)?
                )));
            }
            parts.push(format!("d={d}: ({before}, {after})"));
        }
        let uncut = inaccessible_count(&build_rotated_d3(RoundParity::Even, false))?;
        let cut = inaccessible_count(&build_rotated_d3(RoundParity::Even, true))?;
        if cut != 0 {
            return Err(fail(format!("rotated with cut: {cut} inaccessible")));
        }
        parts.push(format!("rotated d=3: {uncut} uncut, {cut} cut"));
        Ok(parts.join("; "))
    })();
    CheckResult::from_result("accessibility", r)
}

/// Exhaustive single-fault injection over `rounds` noisy rounds.
pub fn check_certificate(cut: bool, choice: DecoderChoice, rounds: usize) -> CheckResult {
    let name = format!(
        "certificate-{}-{}",
        if cut { "cut" } else { "uncut" },
        match choice {
            DecoderChoice::Builtin => "builtin",
            DecoderChoice::Bruteforce => "bruteforce",
        }
    );
    let r = MemoryExperiment::new(cut, choice).and_then(|exp| {
        let cert = exp.certificate(rounds);
        if cert.passed() {
            Ok(format!(
                "{} single faults over {rounds} rounds, no logical error for |0>_L or |+>_L",
                cert.faults_checked
            ))
        } else {
            Err(fail(format!(
                "{} of {} faults fail, first {:?}",
                cert.failures.len(),
                cert.faults_checked,
                cert.failures[0]
            )))
        }
    });
    CheckResult::from_result(&name, r)
}

/// Published tables against the brute-force tables of the cut circuit: every
/// published row must be reproduced up to a stabilizer.
pub fn check_tables() -> CheckResult {
    let r = RotatedRounds::new(true).and_then(|rounds| {
        let generated = generate_tables_bruteforce(&rounds);
        let diff = diff_tables(&builtin_tables(), &generated, &rounds.masks);
        let published: Vec<_> = diff.iter().filter(|d| d.published.is_some()).collect();
        let exact = published
            .iter()
            .filter(|d| d.status == RowStatus::Exact)
            .count();
        let same = published
            .iter()
            .filter(|d| d.status == RowStatus::SameClass)
            .count();
        if exact + same != published.len() {
            let bad = published
                .iter()
                .find(|d| !matches!(d.status, RowStatus::Exact | RowStatus::SameClass))
                .expect("some row differs");
            return Err(fail(format!("row {bad:?}")));
        }
        Ok(format!(
            "{} published rows: {exact} verbatim, {same} same logical class",
            published.len()
        ))
    });
    CheckResult::from_result("tables", r)
}

/// Circuit checks plus accessibility, tables and the single-fault
/// certificates for both circuits and decoders.
pub fn run_all_checks(seed: u64) -> Vec<CheckResult> {
    let mut out = run_circuit_checks(seed);
    out.push(check_accessibility());
    out.push(check_tables());
    for cut in [true, false] {
        for choice in [DecoderChoice::Builtin, DecoderChoice::Bruteforce] {
            out.push(check_certificate(cut, choice, 3));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn widen_adds_idle_ancillas() {
        let c = build_parity_chain(2, Basis::Z).unwrap();
        let w = widen(&c, 5).unwrap();
        assert_eq!(w.num_qubits(), 5);
        assert_eq!(w.final_roles()[4].kind, RoleKind::Ancilla);
        assert!(widen(&c, 2).is_err());
    }

    #[test]
    fn a_wrong_schedule_is_caught() {
        let a = build_color7(Variant::Cnot, Basis::Z);
        let mut b = Circuit::with_roles(10, a.initial_roles().to_vec()).unwrap();
        for (k, m) in a.moments().iter().enumerate() {
            let ops = m
                .ops()
                .iter()
                .filter(|op| !(k == 2 && op.qubits()[1] == 8))
                .copied()
                .collect();
            b.push_ops(ops).unwrap();
        }
        assert!(compare_circuits(&a, &b, &[], 20, 1).is_err());
    }
}
