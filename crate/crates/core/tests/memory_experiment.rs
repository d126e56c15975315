use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use workshare::circuit::{Circuit, GateKind, GateOp};
use workshare::codes::RoundParity;
use workshare::experiment::*;
use workshare::frame::{CompiledCircuit, Frame};
use workshare::memory::RotatedRounds;
use workshare::noise::{NoiseModel, Timing};
use workshare::tableau::identity_permutation;
use workshare::{stabilizer_groups_equal, PauliString, StabilizerTableau};

/// Runs `c` on a tableau with the given located Paulis inserted.
fn run_with_paulis(
    t: &mut StabilizerTableau,
    c: &Circuit,
    paulis: &[(usize, Timing, PauliString)],
    rng: &mut ChaCha8Rng,
) -> Vec<(usize, bool, bool)> {
    let mut out = Vec::new();
    for (k, m) in c.moments().iter().enumerate() {
        for (_, _, p) in paulis.iter().filter(|e| e.0 == k && e.1 == Timing::Before) {
            t.apply_pauli(p).unwrap();
        }
        for op in m.ops() {
            if let Some(r) = t.apply_op(op, rng).unwrap() {
                out.push((r.qubit, r.outcome, r.deterministic));
            }
        }
        for (_, _, p) in paulis.iter().filter(|e| e.0 == k && e.1 == Timing::After) {
            t.apply_pauli(p).unwrap();
        }
    }
    out
}

#[test]
fn frame_simulation_matches_tableau() {
    for cut in [false, true] {
        let rounds = RotatedRounds::new(cut).unwrap();
        let n = rounds.num_qubits();
        let model = NoiseModel::new(0.03, 0.05).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let mut base = StabilizerTableau::new(n).unwrap();
            run_with_paulis(&mut base, rounds.circuit(RoundParity::Even), &[], &mut rng);
            let mut clean = base.clone();
            let mut noisy = base;
            let mut frame = Frame::default();
            for r in 1..=4 {
                let p = RoundParity::of_round(r);
                let compiled = rounds.compiled(p);
                let mut faults = Vec::new();
                compiled.sample_faults(&model, &mut rng, &mut faults);
                let flips = compiled.run(&mut frame, &faults);
                let located: Vec<_> = faults
                    .iter()
                    .map(|f| {
                        let loc = &compiled.locations()[f.loc];
                        (loc.moment, loc.timing, loc.pauli(n, f.pauli as usize))
                    })
                    .collect();
                let a = run_with_paulis(&mut clean, rounds.circuit(p), &[], &mut rng);
                let b = run_with_paulis(&mut noisy, rounds.circuit(p), &located, &mut rng);
                let mut expect = 0u64;
                for (x, y) in a.iter().zip(&b) {
                    assert!(x.2 && y.2, "outcomes after encoding are deterministic");
                    assert_eq!(x.0, y.0);
                    expect |= ((x.1 != y.1) as u64) << x.0;
                }
                assert_eq!(flips, expect);
            }
            clean.apply_pauli(&frame.to_pauli(n)).unwrap();
            assert!(stabilizer_groups_equal(&clean, &noisy, &identity_permutation(n)).unwrap());
        }
    }
}

#[test]
fn frame_and_physical_recovery_agree() {
    let exp = MemoryExperiment::new(true, DecoderChoice::Builtin).unwrap();
    let model = NoiseModel::new(0.005, 0.01).unwrap();
    let (mut a, mut b) = (0, 0);
    for shot in 0..10_000 {
        let f = exp.sampled_shot(&model, 40, 3, shot, RecoveryMode::Frame);
        let p = exp.sampled_shot(&model, 40, 3, shot, RecoveryMode::Physical);
        assert_eq!(f, p, "shot {shot}");
        a += f.z_flip as u32;
        b += p.z_flip as u32;
    }
    assert_eq!(a, b);
    assert!(a > 0);
}

#[test]
fn single_faults_never_cause_logical_errors() {
    for cut in [false, true] {
        for choice in [DecoderChoice::Builtin, DecoderChoice::Bruteforce] {
            let exp = MemoryExperiment::new(cut, choice).unwrap();
            let cert = exp.certificate(3);
            assert!(cert.faults_checked > 1000);
            assert!(cert.passed(), "cut={cut} {choice:?}: {:?}", cert.failures);
        }
    }
}

#[test]
fn noiseless_memory_never_fails() {
    for state in [LogicalState::Zero, LogicalState::Plus] {
        let mut cfg = ExperimentConfig::new(true, 0.0);
        cfg.logical_state = state;
        cfg.shots = 500;
        let r = run_memory_experiment(&cfg).unwrap();
        assert_eq!(r.failures, 0);
        assert_eq!(r.p_round, 0.0);
    }
    let exp = MemoryExperiment::new(true, DecoderChoice::Builtin).unwrap();
    let out = exp.run_shot(5, RecoveryMode::Frame, |_, _, _| {});
    assert_eq!(out, ShotOutcome::default());
}

#[test]
fn seeded_runs_repeat_and_grow_with_noise() {
    let exp = MemoryExperiment::new(true, DecoderChoice::Builtin).unwrap();
    let mut cfg = ExperimentConfig::new(true, 0.005);
    cfg.shots = 100_000;
    cfg.seed = 21;
    let low = exp.run(&cfg).unwrap();
    assert_eq!(low, exp.run(&cfg).unwrap());
    cfg.p2 = 0.02;
    let high = exp.run(&cfg).unwrap();
    let gap = high.p_round - low.p_round;
    let se = (high.stderr.powi(2) + low.stderr.powi(2)).sqrt();
    assert!(gap > 3.0 * se, "{low:?} {high:?}");
    assert!(low.p_round <= low.p_total);
}

#[test]
fn two_qubit_error_count_matches_gate_count() {
    let rounds = RotatedRounds::new(true).unwrap();
    let c = rounds.circuit(RoundParity::Even);
    let compiled = rounds.compiled(RoundParity::Even);
    let gates = c.count_kind(GateKind::CnotSwap);
    assert_eq!(compiled.num_pair_locations(), gates);
    let model = NoiseModel::new(0.0, 0.01).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let shots = 1_000_000;
    let mut total = 0usize;
    let mut buf = Vec::new();
    for _ in 0..shots {
        compiled.sample_faults(&model, &mut rng, &mut buf);
        total += buf.len();
    }
    let expect = 0.01 * gates as f64 * shots as f64;
    assert!(
        (total as f64 - expect).abs() / expect < 0.01,
        "{total} vs {expect}"
    );
}

#[test]
fn certain_pair_noise_is_uniform() {
    let mut c = Circuit::new(2);
    c.push_ops(vec![GateOp::cnot_swap(0, 1)]).unwrap();
    let compiled = CompiledCircuit::compile(&c).unwrap();
    let model = NoiseModel::new(0.0, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let shots = 100_000;
    let mut counts = [0u32; 15];
    let mut buf = Vec::new();
    for _ in 0..shots {
        compiled.sample_faults(&model, &mut rng, &mut buf);
        assert_eq!(buf.len(), 1);
        counts[buf[0].pauli as usize] += 1;
    }
    let p = 1.0 / 15.0;
    let mean = shots as f64 * p;
    let sigma = (shots as f64 * p * (1.0 - p)).sqrt();
    for c in counts {
        assert!((c as f64 - mean).abs() < 3.0 * sigma, "{counts:?}");
    }
}

#[test]
fn results_serialize_with_the_fixed_header() {
    let mut cfg = ExperimentConfig::new(false, 0.01);
    cfg.shots = 200;
    cfg.rounds = 4;
    let r = run_memory_experiment(&cfg).unwrap();
    let mut buf = Vec::new();
    write_results_csv(&[r], &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with(
        "code,p1,p2,rounds,shots,failures,p_total,p_round,stderr\nrotated-d3,0.0,0.01,4,200,"
    ));
}
