use std::path::PathBuf;
use std::process::{Command, Output};

fn gcdeq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gcdeq"))
        .args(args)
        .output()
        .expect("failed to run gcdeq")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn golden(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    std::fs::read_to_string(path).unwrap()
}

fn assert_golden(args: &[&str], name: &str) {
    let out = gcdeq(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout(&out), golden(name), "{args:?}");
    // stable across runs
    assert_eq!(stdout(&gcdeq(args)), stdout(&out));
}

#[test]
fn golden_outputs() {
    assert_golden(&["--format", "structured", "densities", "S4"], "densities_s4.json");
    assert_golden(
        &["--format", "structured", "joint", "D4", "stabilizer", "K_2", "K_sigma"],
        "joint_d4.json",
    );
    assert_golden(&["--format", "structured", "gcd-profile", "D4", "K"], "gcd_profile_d4_k.json");
    assert_golden(&["--format", "structured", "equiv", "D4", "K", "K'"], "equiv_d4.json");
    assert_golden(&["--format", "structured", "product-analysis", "A5", "A5"], "product_a5.json");
    assert_golden(
        &["--format", "structured", "scan", "x^4 - 3*x^2 - 3", "--bound", "200"],
        "scan_quartic_200.json",
    );
    assert_golden(&["densities", "S4"], "densities_s4.txt");
    assert_golden(&["catalog"], "catalog.txt");
}

#[test]
fn structured_output_parses() {
    for args in [
        vec!["--format", "structured", "catalog"],
        vec!["--format", "structured", "catalog", "F5"],
        vec!["--format", "structured", "--decimal", "densities", "D5"],
        vec!["--format", "structured", "rigidity", "--cross-degree"],
        vec!["--format", "structured", "compare", "x^2+1", "x^2+4", "--bound", "10000"],
    ] {
        let out = gcdeq(&args);
        assert!(out.status.success(), "{args:?}");
        let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert!(v.is_object());
    }
}

#[test]
fn densities_examples() {
    let s4 = stdout(&gcdeq(&["densities", "S4"]));
    assert!(s4.trim_end().ends_with("(4)        6      1/4"));
    let c3 = stdout(&gcdeq(&["densities", "C3"]));
    assert_eq!(c3.lines().count(), 4);
    assert!(c3.contains("1/3") && c3.contains("2/3"));
    let dec = stdout(&gcdeq(&["--decimal", "densities", "C3"]));
    assert!(dec.contains("approx 0.666667"));
    assert!(!c3.contains("0.6"));
}

#[test]
fn rigidity_and_cross_degree() {
    let out = gcdeq(&["rigidity", "--cross-degree"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("gcd 3: degree 3"));
    assert!(text.contains("result: pass"));
    assert_eq!(gcdeq(&["rigidity", "--max-degree", "9"]).status.code(), Some(2));
}

#[test]
fn compare_quartic_pair() {
    let out = gcdeq(&[
        "--format",
        "structured",
        "compare",
        "x^4 - 3*x^2 - 3",
        "x^4 - 3*x + 3",
        "--bound",
        "3000",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["inert_sets_equal"], true);
    assert!(v["first_gcd_disagreement"].is_u64());
}

#[test]
fn scan_files_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let poly = dir.path().join("f.txt");
    std::fs::write(&poly, "[-2, 0, 0, 1]\n").unwrap();
    let r1 = dir.path().join("a.json");
    let r2 = dir.path().join("b.json");
    let r3 = dir.path().join("c.json");
    let at = format!("@{}", poly.display());
    let out = gcdeq(&["scan", &at, "--bound", "100000", "--out", r1.to_str().unwrap(), "--jobs", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with('(')).count(), 3);
    assert!(gcdeq(&["scan", "x^3 - 2", "--bound", "100000", "--out", r2.to_str().unwrap()]).status.success());
    assert_eq!(std::fs::read(&r1).unwrap(), std::fs::read(&r2).unwrap());

    let same = gcdeq(&["compare", "--reports", r1.to_str().unwrap(), r2.to_str().unwrap()]);
    assert!(stdout(&same).contains("type agreement: 1/1"));

    assert!(gcdeq(&["scan", "x^3 - 2", "--bound", "500", "--out", r3.to_str().unwrap()]).status.success());
    let mismatch = gcdeq(&["compare", "--reports", r1.to_str().unwrap(), r3.to_str().unwrap()]);
    assert_eq!(mismatch.status.code(), Some(2));

    let text = std::fs::read_to_string(&r3).unwrap();
    std::fs::write(&r3, &text[..text.len() / 3]).unwrap();
    let broken = gcdeq(&["compare", "--reports", r1.to_str().unwrap(), r3.to_str().unwrap()]);
    assert_eq!(broken.status.code(), Some(2));
}

#[test]
fn scan_examples() {
    let out = gcdeq(&["scan", "x", "--bound", "10"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("(1)   4      1/1"));
}

#[test]
fn bad_input_exits_2() {
    for args in [
        vec!["densities", "NOPE"],
        vec!["densities", "S4", "K_9"],
        vec!["scan", "2*x^2-1", "--bound", "10"],
        vec!["scan", "x^2 + 1.5"],
        vec!["scan", "x^2 - 2*x + 1"],
        vec!["scan", "x^2 + 1", "--bound", "1"],
        vec!["scan", "@/nonexistent/poly.txt"],
        vec!["product-analysis", "S4", "S5"],
        vec!["joint", "D4"],
        vec!["no-such-command"],
    ] {
        let out = gcdeq(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn verify_paper_small_bound() {
    let out = gcdeq(&["verify-paper", "--bound", "1000", "--jobs", "2"]);
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with('[')).count(), 9);
    assert!(!text.contains("[FAIL]"));
    for id in [1, 2, 3, 4, 5, 8, 9] {
        assert!(text.contains(&format!("[PASS] {id}.")), "exact item {id}");
    }
}

#[test]
fn verify_paper_negative_control() {
    let out = gcdeq(&["--format", "structured", "verify-paper", "--bound", "1000", "--inject-fault"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["passed"], false);
    assert_eq!(v["checks"][0]["outcome"], "fail");
}
