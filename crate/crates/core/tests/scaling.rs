//! Probe means are distributional, so a 10x smaller table must agree with
//! the desk-scale one.

use bucket_hash::config::TableKind;
use bucket_hash::experiments::{run_trial, Cell, TableSetup};

fn means(setup: TableSetup, n: usize, lf: f64) -> Vec<f64> {
    let mut cell = Cell::new(setup, n, lf, 21);
    cell.trials = 3;
    cell.positive_ratios = vec![1.0, 0.5];
    let out = run_trial(&cell).unwrap();
    assert!(!out.exhausted);
    vec![out.insert_mean(), out.find_mean(1.0).unwrap(), out.find_mean(0.5).unwrap()]
}

#[test]
fn probe_means_agree_between_1e5_and_1e6_keys() {
    let cases = [
        (TableSetup::new(TableKind::Bcht, 16), 0.95),
        (TableSetup::new(TableKind::Bp2ht, 32), 0.9),
        (TableSetup::new(TableKind::Iht, 16).with_threshold_pct(60), 0.86),
        (TableSetup::new(TableKind::OneCht, 1), 0.85),
    ];
    for (setup, lf) in cases {
        let small = means(setup, 100_000, lf);
        let large = means(setup, 1_000_000, lf);
        for (s, l) in small.iter().zip(&large) {
            let rel = (s - l).abs() / l;
            assert!(rel <= 0.02, "{:?} lf {lf}: {s:.4} vs {l:.4} ({:.2}%)", setup.kind, rel * 100.0);
        }
    }
}
