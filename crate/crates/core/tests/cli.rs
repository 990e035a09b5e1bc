use std::path::PathBuf;
use std::process::{Command, Output};

fn kdesigns(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kdesigns"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

#[test]
fn params_output() {
    let o = kdesigns(&["params", "kc", "--khat", "4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "v=10 b=15 r=6 k=4 lambda=2\n");
    let o = kdesigns(&["params", "kp", "--khat", "3"]);
    assert_eq!(stdout(&o), "v=10 b=60 r=18 k=3 lambda=4\n");
    let o = kdesigns(&[
        "params", "explode", "--v", "7", "--b", "7", "--r", "3", "--k", "3", "--lambda", "1",
        "--j", "2",
    ]);
    assert_eq!(stdout(&o), "v=7 b=21 r=6 k=2 lambda=1\n");
}

#[test]
fn params_large_khat_is_exact() {
    // b for KP khat=20 is 39!/(2 * 18!), far beyond 64 bits.
    let o = kdesigns(&["params", "kp", "--khat", "20"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let b = out.split(' ').find_map(|kv| kv.strip_prefix("b=")).unwrap();
    assert!(b.len() > 20, "{out}");
}

#[test]
fn witness_output() {
    let o = kdesigns(&["witness", "--n", "5", "--khat", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "lambda_adj=4 lambda_non=4 balanced\n");
    let o = kdesigns(&["witness", "--n", "4", "--khat", "3"]);
    assert_eq!(stdout(&o), "lambda_adj=2 lambda_non=4 adjacent-fewer\n");
    let o = kdesigns(&["witness", "--n", "6", "--khat", "3"]);
    assert_eq!(stdout(&o), "lambda_adj=6 lambda_non=4 adjacent-more\n");
}

#[test]
fn exit_codes() {
    assert_eq!(kdesigns(&["verify", &fixture("fano.design")]).status.code(), Some(0));
    assert_eq!(
        kdesigns(&["verify", &fixture("letters16_printed.design")]).status.code(),
        Some(1)
    );
    // Fano is not a 3-design.
    assert_eq!(
        kdesigns(&["verify", &fixture("fano.design"), "--t", "3"]).status.code(),
        Some(1)
    );
    assert_eq!(kdesigns(&["verify", "/nonexistent/file"]).status.code(), Some(1));
    assert_eq!(kdesigns(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(kdesigns(&["witness", "--n", "5", "--khat", "2"]).status.code(), Some(2));
    assert_eq!(kdesigns(&["params", "kc", "--khat", "2"]).status.code(), Some(2));
    let o = kdesigns(&["gen", "kp", "--khat", "5", "--max-blocks", "100"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("ceiling"));
    let o = kdesigns(&["verify", "--stream", "kc", "--khat", "9", "--max-blocks", "1000"]);
    assert_eq!(o.status.code(), Some(3));
    // KC khat=3 is complete, not balanced.
    assert_eq!(
        kdesigns(&["verify", "--stream", "kc", "--khat", "3"]).status.code(),
        Some(1)
    );
}

#[test]
fn gen_is_deterministic_and_canonical() {
    let a = kdesigns(&["gen", "kp", "--khat", "3"]);
    let b = kdesigns(&["gen", "kp", "--khat", "3"]);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("DESIGN v=10 b=60"));
    let blocks: Vec<Vec<u32>> = lines
        .map(|l| l.split(' ').map(|t| t.parse().unwrap()).collect())
        .collect();
    assert_eq!(blocks.len(), 60);
    assert!(blocks.windows(2).all(|w| w[0] <= w[1]));

    let o = kdesigns(&["gen", "kc", "--khat", "4"]);
    assert_eq!(stdout(&o).lines().count(), 1 + 15);
    let o = kdesigns(&["gen", "k5"]);
    assert_eq!(stdout(&o).lines().count(), 1 + 30);
}

#[test]
fn gen_explode_verify_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let kc = dir.path().join("kc4.design");
    let ex = dir.path().join("kc4_j3.design");
    let kc_s = kc.to_str().unwrap();
    let ex_s = ex.to_str().unwrap();
    assert!(kdesigns(&["gen", "kc", "--khat", "4", "--out", kc_s]).status.success());
    assert!(kdesigns(&["explode", kc_s, "--j", "3", "--out", ex_s]).status.success());
    let o = kdesigns(&["verify", ex_s]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("v=10 b=60 r=18 k=3 lambda=4"));

    // The exploded file is byte-identical to the KP file.
    let kp = kdesigns(&["gen", "kp", "--khat", "3"]);
    assert_eq!(std::fs::read(&ex).unwrap(), kp.stdout);

    let o = kdesigns(&["explode", kc_s, "--j", "5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_reports_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fano_minus.design");
    std::fs::write(
        &path,
        "DESIGN v=7 b=6\n1 2 4\n2 3 5\n3 4 6\n0 4 5\n1 5 6\n0 2 6\n",
    )
    .unwrap();
    let o = kdesigns(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("verdict: unbalanced"), "{out}");
    assert!(out.contains("witness: {0,1} observed=0 expected=1"), "{out}");
}

#[test]
fn malformed_file_names_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.design");
    std::fs::write(&path, "DESIGN v=4 b=2\n0 1\n3 2\n").unwrap();
    let o = kdesigns(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn selftest_passes() {
    let o = kdesigns(&["selftest"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(!out.contains("FAIL"));
    assert!(out.contains("PASS fixture fano"));
    assert!(out.contains("PASS witness n=8 khat=5"));
}
