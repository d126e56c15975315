use workshare::circuit::Basis;
use workshare::codes::RoundParity;
use workshare::decoder::*;
use workshare::frame::Frame;
use workshare::memory::RotatedRounds;

#[test]
fn generated_tables_reproduce_the_published_ones() {
    let rounds = RotatedRounds::new(true).unwrap();
    let generated = generate_tables_bruteforce(&rounds);
    let diff = diff_tables(&builtin_tables(), &generated, &rounds.masks);
    let published: Vec<_> = diff.iter().filter(|r| r.published.is_some()).collect();
    assert_eq!(published.len(), 16 + 14 + 15 + 12);
    for row in &published {
        assert!(
            matches!(row.status, RowStatus::Exact | RowStatus::SameClass),
            "{row:?}"
        );
    }
    let exact = published
        .iter()
        .filter(|r| r.status == RowStatus::Exact)
        .count();
    assert_eq!(exact, 53);
    let t1 = generated.tables.get(Basis::Z, RoundParity::Odd);
    assert_eq!(t1.decode(1, 1).sparse_label(TABLE_LABEL_OFFSET), "X3");
    let t3 = generated.tables.get(Basis::X, RoundParity::Odd);
    assert_eq!(t3.decode(4, 12).sparse_label(TABLE_LABEL_OFFSET), "Z8Z9");
}

#[test]
fn conflicts_are_reported_not_resolved() {
    let rounds = RotatedRounds::new(true).unwrap();
    let generated = generate_tables_bruteforce(&rounds);
    assert!(!generated.conflicts.is_empty());
    for c in &generated.conflicts {
        assert!(c.residuals.len() > 1);
        let t = generated.tables.get(c.check, c.parity);
        assert!(t.decode(c.s1, c.s2).is_identity());
    }
}

#[test]
fn data_error_before_a_round_has_a_repeated_signature() {
    let rounds = RotatedRounds::new(true).unwrap();
    for parity in [RoundParity::Odd, RoundParity::Even] {
        // X3 is data label 2; its syndrome is 1 in every round.
        let mut f = Frame::default();
        rounds.apply_data(parity.other(), &mut f, 1 << 2, 0);
        let flips = rounds.compiled(parity).run(&mut f, &[]);
        assert_eq!(rounds.syndrome(parity, Basis::Z, flips), 1);
        assert_eq!(rounds.syndrome(parity, Basis::X, flips), 0);
        let flips = rounds.compiled(parity.other()).run(&mut f, &[]);
        assert_eq!(rounds.syndrome(parity.other(), Basis::Z, flips), 1);
    }
    let t = builtin_tables();
    assert_eq!(
        t.get(Basis::Z, RoundParity::Odd)
            .decode(1, 1)
            .sparse_label(1),
        "X3"
    );
}

#[test]
fn generated_tables_round_trip_through_csv() {
    let rounds = RotatedRounds::new(false).unwrap();
    let generated = generate_tables_bruteforce(&rounds);
    for t in &generated.tables.tables {
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let back = LookupTable::read_csv(t.check, t.parity, buf.as_slice()).unwrap();
        assert_eq!(&back, t);
    }
}

#[test]
fn merged_tables_keep_published_rows() {
    let rounds = RotatedRounds::new(true).unwrap();
    let generated = generate_tables_bruteforce(&rounds);
    let merged = merged_tables(&builtin_tables(), &generated, &rounds.masks);
    let publ = builtin_tables();
    for t in &publ.tables {
        let m = merged.get(t.check, t.parity);
        for (k, v) in &t.rows {
            assert_eq!(m.rows.get(k), Some(v));
        }
    }
}
