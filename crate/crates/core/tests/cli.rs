use std::process::{Command, Output};

fn paraklein(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_paraklein")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_json_passes() {
    let o = paraklein(&["verify", "--m", "1", "--n", "1", "--p", "2", "--boson-cutoff", "4", "--families", "all", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["summary"]["pass"], true);
    assert_eq!(v["config"]["p"], 2);
    let first = &v["instances"][0];
    assert!(first["id"].is_string() && first["status"] == "pass" && first["safeColumns"].is_u64());
}

#[test]
fn relation_failure_exits_one() {
    let o = paraklein(&["verify", "--p", "2", "--mutant", "unsigned-tilde", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let failed = v["instances"].as_array().unwrap().iter().find(|i| i["status"] == "fail").unwrap();
    let entry = &failed["failure"]["entry"];
    assert!(entry["row"].is_u64() && entry["col"].is_u64() && entry["value"].is_string());
}

#[test]
fn configuration_errors_exit_two() {
    for args in [
        &["verify", "--m", "0", "--n", "0"][..],
        &["verify", "--boson-cutoff", "2"],
        &["verify", "--p", "0"],
        &["verify", "--m", "2", "--n", "0", "--families", "REL_PF"],
        &["verify", "--families", "NOPE"],
        &["verify", "--m", "6", "--n", "2", "--p", "3", "--boson-cutoff", "10"],
        &["dump-op", "--m", "1", "--n", "0", "f+2"],
        &["dump-op", "x+1"],
        &["spectrum", "f+1"],
        &["frobnicate"],
        &["verify", "--bogus"],
    ] {
        let o = paraklein(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn symbolic_and_selfcheck_pass() {
    let o = paraklein(&["symbolic", "--m", "2", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("TILDE_IDENTITY[a]"));
    let o = paraklein(&["selfcheck", "--m", "1", "--n", "1", "--p", "2", "--boson-cutoff", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for name in ["drop_boson_dressing", "unsigned_tilde", "trivial_klein"] {
        assert!(text.contains(&format!("PASS MUTANT[{name}]")), "{text}");
    }
}

#[test]
fn selfcheck_needs_both_kinds() {
    assert_eq!(paraklein(&["selfcheck", "--m", "1", "--n", "0"]).status.code(), Some(2));
}

#[test]
fn klein_dump_for_one_fermion() {
    let o = paraklein(&["dump-op", "--m", "1", "--n", "0", "--p", "1", "K"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "dim 2 2 2\n0 0 1\n1 1 -1\n");
}

#[test]
fn tilde_dump_as_json() {
    let o = paraklein(&["dump-op", "--m", "1", "--n", "0", "--format", "json", "tf+1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    // f+ K on the vacuum: K|0> = |0>, then f+ raises.
    assert_eq!(v["entries"], serde_json::json!([[1, 0, "1"]]));
}

#[test]
fn spectrum_multiplicities_sum_to_dimension() {
    let o = paraklein(&["spectrum", "--m", "2", "--n", "1", "--p", "1", "--boson-cutoff", "2", "N"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let pairs: Vec<(i64, usize)> = text
        .lines()
        .map(|l| {
            let (v, c) = l.split_once(' ').unwrap();
            (v.parse().unwrap(), c.parse().unwrap())
        })
        .collect();
    assert_eq!(pairs.iter().map(|p| p.0).collect::<Vec<_>>(), vec![0, 1, 2, 3, 4]);
    assert_eq!(pairs.iter().map(|p| p.1).sum::<usize>(), 12);
}

#[test]
fn basis_lists_vacuum_first() {
    let o = paraklein(&["basis", "--m", "1", "--n", "1", "--boson-cutoff", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 6);
    assert_eq!(text.lines().next(), Some("0 : f=0 b=0 N=0"));
}

#[test]
fn same_invocation_same_bytes() {
    let args = ["verify", "--m", "2", "--n", "1", "--p", "1", "--boson-cutoff", "3", "--seed", "5", "--format", "json"];
    let a = paraklein(&args);
    let b = paraklein(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn output_file_is_written() {
    let path = std::env::temp_dir().join(format!("paraklein-cli-{}.txt", std::process::id()));
    let o = paraklein(&["basis", "--m", "1", "--n", "0", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(written, "0 : f=0 b= N=0\n1 : f=1 b= N=1\n");
}

#[test]
fn help_exits_zero() {
    let o = paraklein(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verify"));
}

// The library entry point behaves like the binary.
#[test]
fn run_writes_to_given_streams() {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = paraklein::cli::run(["paraklein", "spectrum", "--m", "1", "--n", "0", "K"], &mut out, &mut err);
    assert_eq!(code, paraklein::cli::EXIT_PASS);
    assert_eq!(String::from_utf8(out).unwrap(), "-1 1\n1 1\n");
    assert!(err.is_empty());
}
