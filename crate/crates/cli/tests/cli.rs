use std::process::{Command, Output};

fn combfock(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_combfock")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Second column of a CSV body, header skipped.
fn column(o: &Output) -> Vec<f64> {
    stdout(o).lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect()
}

fn cayley(n: u64) -> u64 {
    n.pow(n as u32 - 1)
}

#[test]
fn counts_rooted_trees() {
    let o = combfock(&["species", "count", "A", "--max-level", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let counts = column(&o);
    let expected: Vec<f64> = (1..=5).map(|n| cayley(n) as f64).collect();
    assert_eq!(&counts[1..], expected.as_slice());
    assert_eq!(expected, [1.0, 2.0, 9.0, 64.0, 625.0]);
}

#[test]
fn tree_identity_passes() {
    let o = combfock(&["check", "tree", "--levels", "4", "--colors", "2", "--tol", "1e-9"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["max_level"], 4);
    assert!(report["deviation"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn failing_identity_exits_one() {
    let o = combfock(&["check", "tree", "--c", "1", "--levels", "3", "--colors", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(report["pass"], false);
}

#[test]
fn gaussian_moments() {
    let o = combfock(&["moments", "E", "--order", "6"]);
    assert_eq!(o.status.code(), Some(0));
    // number of pair partitions of m points
    let pairings = |m: usize| if m % 2 == 1 { 0.0 } else { (1..m).step_by(2).map(|k| k as f64).product() };
    let values = column(&o);
    assert_eq!(values.len(), 7);
    for (m, v) in values.iter().enumerate() {
        assert!((v - pairings(m)).abs() < 1e-9, "order {m}: {v}");
    }
}

#[test]
fn pair_partition_outputs() {
    let o = combfock(&["pairpart", "enum", "--r", "3"]);
    assert_eq!(stdout(&o).lines().count(), 1 + 15);
    let o = combfock(&["pairpart", "t", "ballot", "--r", "2", "--q", "0.4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let crossing = text.lines().find(|l| l.starts_with("\"(1,3)(2,4)\"")).unwrap();
    let re: f64 = crossing.split(',').nth_back(1).unwrap().parse().unwrap();
    assert!((re - 0.4).abs() < 1e-10);
}

#[test]
fn basis_records_are_json_lines() {
    let o = combfock(&["fock", "basis", "L", "--colors", "2", "--max-level", "2"]);
    let records: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    // 1 + 2 + 2^2 colored orders, one orbit per coloring
    assert_eq!(records.len(), 7);
    assert!(records.iter().all(|r| r["norm_sq"] == 1));
}

#[test]
fn creator_matrix_is_deterministic() {
    let args = ["op", "matrix", "E", "--kind", "create", "--max-level", "3"];
    let a = combfock(&args);
    assert_eq!(stdout(&a), stdout(&combfock(&args)));
    let body: Vec<String> = stdout(&a).lines().skip(1).map(String::from).collect();
    assert_eq!(body.len(), 3);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["species", "count", "A +"][..],
        &["check", "bogus"],
        &["moments", "E", "--order", "x"],
        &["check", "digraph"],
        &["op", "matrix", "E", "--kind", "create", "--color", "3"],
    ] {
        let o = combfock(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    let o = combfock(&["moments", "E", "--order", "x"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--order"));
}
