use std::path::Path;
use std::process::{Command, Output};

fn amls(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_amls")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

/// Third whitespace column of the first data row.
fn amls_column(out: &str) -> f64 {
    out.lines()
        .nth(1)
        .unwrap()
        .split_whitespace()
        .nth(2)
        .unwrap()
        .parse()
        .unwrap()
}

#[test]
fn bounds_table() {
    let o = amls(&["bounds", "--alpha", "2", "--c", "1024"]);
    assert!(o.status.success());
    assert!((amls_column(&stdout(&o)) - 1.2499).abs() < 1e-3);
    let o = amls(&["bounds", "--alpha", "1", "--c", "2"]);
    assert_eq!(amls_column(&stdout(&o)), 1.5);
    let o = amls(&["bounds", "--alpha", "1.1", "--c", "1.1652"]);
    assert!((amls_column(&stdout(&o)) - 1.114).abs() < 1e-3);
    assert_eq!(stdout(&o), stdout(&amls(&["bounds", "--preset", "vc-paper"])));
    let o = amls(&["bounds", "--preset", "dfvs-paper"]);
    assert!(stdout(&o).contains("brute"));
}

#[test]
fn bounds_csv_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let o = amls(&["bounds", "--alpha", "1,2", "--c", "2", "--csv", path.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next(), Some("alpha,c,amls,brute,naive,emls,dominant"));
    assert_eq!(text.lines().nth(1), Some("1,2,1.5,2,2,1.5,emls"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn bounds_usage_errors() {
    assert_eq!(amls(&["bounds", "--alpha", "abc", "--c", "2"]).status.code(), Some(1));
    assert_eq!(amls(&["bounds", "--alpha", "0.5", "--c", "2"]).status.code(), Some(1));
    assert_eq!(amls(&["bounds"]).status.code(), Some(1));
    assert_eq!(
        amls(&["bounds", "--preset", "vc-paper", "--alpha", "2"]).status.code(),
        Some(1)
    );
}

#[test]
fn solve_examples() {
    let dir = tempfile::tempdir().unwrap();
    let p3 = write(dir.path(), "p3.gr", "p edge 3 2\ne 1 2\ne 2 3\n");
    let k3 = write(dir.path(), "k3.gr", "c triangle\np edge 3 3\ne 1 2\ne 1 3\ne 2 3\n");
    let empty = write(dir.path(), "e.gr", "p edge 4 0\n");

    let o = amls(&[
        "solve",
        "--problem",
        "vc",
        "--input",
        &p3,
        "--oracle",
        "exact",
        "--seed",
        "7",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("size 1\nsolution 2\n"));

    let o = amls(&[
        "solve",
        "--problem",
        "vc",
        "--input",
        &k3,
        "--oracle",
        "matching",
        "--alpha",
        "2",
    ]);
    assert!(stdout(&o).starts_with("size 2\n"));

    let o = amls(&["solve", "--problem", "vc", "--input", &empty]);
    assert!(stdout(&o).starts_with("size 0\nsolution \nk_found 0\n"));

    let o = amls(&[
        "solve",
        "--problem",
        "vc",
        "--input",
        &k3,
        "--deterministic",
        "--workers",
        "2",
    ]);
    assert!(stdout(&o).starts_with("size 2\n"));

    let o = amls(&["brute", "--problem", "vc", "--input", &k3, "--alpha", "2"]);
    assert!(stdout(&o).starts_with("size 2\n"));
}

#[test]
fn solve_hypergraph() {
    let dir = tempfile::tempdir().unwrap();
    let h = write(dir.path(), "h.hs", "p hs3 5 3\ns 1 2 3\ns 3 4\ns 5\n");
    let o = amls(&["solve", "--problem", "hs3", "--input", &h, "--seed", "1"]);
    assert!(stdout(&o).starts_with("size 2\nsolution 3 5\n"), "{}", stdout(&o));
    let o = amls(&["solve", "--problem", "hs3", "--input", &h, "--oracle", "matching"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn solve_json_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "c5.gr", "p edge 5 5\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 1 5\n");
    let read = |flags: &[&str]| {
        let json = dir.path().join("r.json");
        let mut args = vec![
            "solve",
            "--problem",
            "vc",
            "--input",
            &g,
            "--json",
            json.to_str().unwrap(),
        ];
        args.extend_from_slice(flags);
        assert!(amls(&args).status.success());
        std::fs::read_to_string(&json).unwrap()
    };
    let a = read(&["--deterministic"]);
    assert_eq!(a, read(&["--deterministic"]));
    assert!(a.contains("\"mode\": \"deterministic\""));
    assert!(a.contains("\"size\": 3"));
    assert_eq!(read(&["--seed", "3"]), read(&["--seed", "3"]));
}

#[test]
fn solve_runtime_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.gr", "p edge 3 1\ne 1 9\n");
    let o = amls(&["solve", "--problem", "vc", "--input", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    let o = amls(&["solve", "--problem", "vc", "--input", "/nonexistent/file"]);
    assert_eq!(o.status.code(), Some(2));

    let big = write(dir.path(), "big.gr", "p edge 16 1\ne 1 2\n");
    let o = amls(&["solve", "--problem", "vc", "--input", &big, "--deterministic"]);
    assert_eq!(o.status.code(), Some(2));
    let o = amls(&["brute", "--problem", "vc", "--input", &big]);
    assert_eq!(o.status.code(), Some(2));
    let o = amls(&["solve", "--problem", "vc", "--input", &big, "--boost", "0.5"]);
    assert_eq!(o.status.code(), Some(1));
    let o = amls(&[
        "solve",
        "--problem",
        "vc",
        "--input",
        &big,
        "--oracle",
        "matching",
        "--alpha",
        "1.5",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn families_command() {
    let o = amls(&["families", "--kind", "covering", "--n", "4", "--t", "3", "--k", "2"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 4);
    assert!(out.starts_with("family covering n=4 q=3"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("verified: true"));

    let o = amls(&[
        "families",
        "--kind",
        "intersection",
        "--n",
        "5",
        "--p",
        "2",
        "--q",
        "2",
        "--r",
        "2",
        "--strong",
    ]);
    assert_eq!(stdout(&o).lines().count(), 11);

    assert_eq!(
        amls(&["families", "--kind", "intersection", "--n", "5", "--p", "2"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        amls(&["families", "--kind", "covering", "--n", "20", "--t", "3", "--k", "2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_and_bench() {
    let o = amls(&["verify", "--suite", "combinatorics"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("0 failed"));
    assert_eq!(amls(&["verify", "--suite", "nope"]).status.code(), Some(1));

    let o = amls(&["bench", "--preset", "small-vc", "--trials", "40"]);
    assert!(o.status.success());
    let frac: f64 = stdout(&o)
        .lines()
        .find_map(|l| l.strip_prefix("fraction "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(frac >= 0.9);
}

#[test]
fn help_and_unknown_flags() {
    for sub in ["bounds", "solve", "brute", "families", "verify", "bench"] {
        let o = amls(&[sub, "--help"]);
        assert_eq!(o.status.code(), Some(0), "{sub}");
        assert!(stdout(&o).contains("Usage"));
        assert_eq!(amls(&[sub, "--no-such-flag"]).status.code(), Some(1), "{sub}");
    }
    let help = stdout(&amls(&["solve", "--help"]));
    for flag in [
        "--problem",
        "--input",
        "--oracle",
        "--alpha",
        "--seed",
        "--boost",
        "--workers",
        "--deterministic",
        "--json",
    ] {
        assert!(help.contains(flag), "{flag}");
    }
    assert_eq!(amls(&[]).status.code(), Some(1));
}
