use std::path::PathBuf;
use std::process::Command;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_twoprim")).args(args).args(["--threads", "1", "-q"]).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn assert_golden(name: &str, actual: &str) {
    let expected = std::fs::read_to_string(fixture(name)).expect("fixture should be readable");
    assert_eq!(actual, expected, "output differs from {name}");
}

#[test]
fn scan_csv_golden() {
    let actual = run(&["scan", "--range", "3:4000"]);
    assert_golden("scan_3_4000.csv", &actual);
    let exceptions: Vec<u64> = actual
        .lines()
        .filter(|l| l.contains(",scan,exception,"))
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(exceptions, twoprim::known::SCAN_EXCEPTIONS);
}

#[test]
fn line_json_golden() {
    let actual = run(&["verify-line", "--range", "3:100", "--mode", "both", "--format", "json"]);
    assert_golden("line_3_100.json", &actual);
}
