use std::process::Command;

fn workshare(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_workshare"))
        .args(args)
        .output()
        .unwrap()
}

#[test]
fn verify_passes() {
    let out = workshare(&["verify", "--seed", "3"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().all(|l| l.starts_with("[PASS]")));
}

#[test]
fn run_prints_header_and_one_row() {
    let out = workshare(&["run", "--p2", "0.01", "--shots", "2000", "--rounds", "5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(
        lines[0],
        "code,p1,p2,rounds,shots,failures,p_total,p_round,stderr"
    );
    assert!(lines[1].starts_with("rotated-d3-cut,"));
}

#[test]
fn bad_arguments_are_rejected() {
    assert!(!workshare(&["run", "--p2", "1.5"]).status.success());
    assert!(!workshare(&["run", "--p2", "0.01", "--code", "nope"])
        .status
        .success());
    assert!(!workshare(&["sweep", "--p2", "0.01", "--rounds", "0"])
        .status
        .success());
}

#[test]
fn dump_circuit_is_json() {
    let out = workshare(&[
        "dump-circuit",
        "--code",
        "rotated-d3-cut",
        "--check",
        "z",
        "--parity",
        "odd",
    ]);
    assert!(out.status.success());
    let _: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
}
