use std::path::Path;
use std::process::{Command, Output};

fn maass(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maass")).args(args).output().expect("run maass")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn classes_commands() {
    let o = maass(&["classes", "-d", "-20", "-M", "1", "-L", "1", "-N", "3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("formula count: 8"));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("  (")).count(), 8);

    let o = maass(&["classes", "-d", "-3", "-M", "1", "-L", "1", "-N", "1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("formula count: 1"));

    let o = maass(&["classes", "-d", "-5", "-M", "1", "-L", "1", "-N", "1"]);
    assert_eq!(code(&o), 2);

    let o = maass(&["classes", "-d", "-20", "-N", "3", "--formula-only", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "d,M,L,N,formula,enumerated,pass\n-20,1,1,3,8,,true\n");
}

#[test]
fn sweep_formats_and_usage_errors() {
    let o = maass(&["sweep", "-d", "-4,-7", "-M", "1..2", "-N", "1..4", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["points"].as_array().unwrap().len(), 16);
    assert_eq!(v["pass"], true);

    let o = maass(&["sweep", "-d", "-4", "-N", "1..4", "--format", "csv"]);
    assert_eq!(stdout(&o).lines().count(), 5);

    // output is deterministic
    let again = maass(&["sweep", "-d", "-4", "-N", "1..4", "--format", "csv"]);
    assert_eq!(o.stdout, again.stdout);

    assert_eq!(code(&maass(&["sweep", "-d", "-5"])), 2);
    assert_eq!(code(&maass(&["sweep", "-d", "-4", "-N", "0"])), 2);
    assert_eq!(code(&maass(&["sweep"])), 2);
}

#[test]
fn bessel_identity_command() {
    let o = maass(&["bessel-identity", "--lm-max", "200"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("0 failed"));
    assert_eq!(code(&maass(&["bessel-identity", "--lm-max", "1"])), 0);
    assert_eq!(code(&maass(&["bessel-identity", "--n2", "1,,2"])), 2);
    assert_eq!(code(&maass(&["bessel-identity", "--n2", "two"])), 2);
}

fn mutate(src: &Path, dst: &Path, key: &str) {
    let text = std::fs::read_to_string(src).unwrap();
    let out: String = text
        .lines()
        .map(|l| if l.starts_with(key) { format!("{key} 12345/1\n") } else { format!("{l}\n") })
        .collect();
    assert_ne!(out, text);
    std::fs::write(dst, out).unwrap();
}

#[test]
fn chi10_and_verify_maass() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("chi10.sfc");
    let t = table.to_str().unwrap();
    assert_eq!(code(&maass(&["chi10", "--bound", "10", "-o", t])), 0);
    let text = std::fs::read_to_string(&table).unwrap();
    assert!(text.starts_with("SFC 1\nk 10 N1 1 N2 1 bound 10\n"));
    assert!(text.contains("\n1 1 1 1/1\n"));

    let classical = maass(&["verify-maass", t]);
    assert_eq!(code(&classical), 0);
    assert!(stdout(&classical).contains("failed 0"));
    let level = maass(&["verify-maass", "--level-N", t]);
    assert_eq!(code(&level), 0);

    // one mutated box coefficient
    let bad = dir.path().join("bad.sfc");
    mutate(&table, &bad, "3 2 4");
    let o = maass(&["verify-maass", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("first failing T: (3, 2, 4)"), "{}", stdout(&o));
    assert_eq!(code(&maass(&["verify-maass", "--level-N", bad.to_str().unwrap()])), 1);

    // a strip coefficient only appears in the index-one dependence
    mutate(&table, &bad, "57 3 1");
    let o = maass(&["verify-maass", bad.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("(57, 3, 1)"), "{}", stdout(&o));
}

#[test]
fn verify_maass_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("x.sfc");
    assert_eq!(code(&maass(&["verify-maass", f.to_str().unwrap()])), 2);
    std::fs::write(&f, "SFC 1\nk 10 N1 1 N2 1 bound 2\n1 1 1 1/1\n1 1 1 1/1\n").unwrap();
    let o = maass(&["verify-maass", f.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));
    assert_eq!(code(&maass(&["chi10", "--bound", "1", "-o", f.to_str().unwrap()])), 2);
    // classical mode needs level (1, 1)
    std::fs::write(&f, "SFC 1\nk 10 N1 1 N2 2 bound 2\n2 2 2 1/1\n").unwrap();
    assert_eq!(code(&maass(&["verify-maass", f.to_str().unwrap()])), 2);
    assert_eq!(code(&maass(&["verify-maass", "--level-N", f.to_str().unwrap()])), 0);
}
