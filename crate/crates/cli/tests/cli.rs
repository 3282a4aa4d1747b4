use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn hfactor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hfactor"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hfactor-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn analyze_k5_figure() {
    let o = hfactor(&["analyze", "corpus:k5-figure"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("m(H) = 5/2"), "{out}");
    assert!(out.contains("class=non_vertex_balanced"));
    assert!(out.contains("threshold.density_exponent=-2/5"));
}

#[test]
fn analyze_formats() {
    let o = hfactor(&["--format", "json", "analyze", "corpus:k3"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["report"]["m"], "3/2");
    assert_eq!(v["threshold"]["status"], "proved_strictly_balanced");
    let o = hfactor(&["--format", "csv", "analyze", "corpus:k3"]);
    assert!(stdout(&o).starts_with("key,value\nd,3/2\n"));
}

#[test]
fn collapse_triangle_plus_isolated() {
    let o = hfactor(&["collapse", "corpus:triangle-plus-isolated"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let terminal = out.split("# terminal\n").nth(1).unwrap();
    let terminal = terminal.split('#').next().unwrap();
    assert!(terminal.starts_with("v 2\n"), "{out}");
    assert!(!terminal.contains("\ne "));
    assert!(out.contains("m(H) = 3/2"));
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let o = hfactor(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Usage"));
    assert_eq!(hfactor(&["analyze"]).status.code(), Some(2));
    assert_eq!(hfactor(&["--format", "xml", "corpus"]).status.code(), Some(2));
}

#[test]
fn malformed_file_reports_line() {
    let path = scratch("bad.txt");
    fs::write(&path, "v 3\ne 0 1\ne 0 9\n").unwrap();
    let o = hfactor(&["analyze", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
    assert_eq!(hfactor(&["analyze", "/no/such/file"]).status.code(), Some(1));
    assert_eq!(hfactor(&["analyze", "corpus:nope"]).status.code(), Some(1));
}

#[test]
fn help_lists_every_flag() {
    let cases: &[(&str, &[&str])] = &[
        ("analyze", &[]),
        ("collapse", &["--random-order"]),
        ("gen", &["--model", "--pattern", "--n", "--r", "--p"]),
        ("factor", &["--count", "--partial", "--two-phase", "--split", "--p"]),
        ("count", &[]),
        ("diagnose", &["--p", "--shearer"]),
        (
            "simulate",
            &["--pattern", "--model", "--method", "--trials", "--depth", "--out", "--meta", "--n", "--p"],
        ),
        ("scaling", &["--pattern", "--n-list", "--trials", "--depth", "--out", "--meta"]),
        ("corpus", &[]),
    ];
    for (cmd, flags) in cases {
        let o = hfactor(&[cmd, "--help"]);
        assert!(o.status.success(), "{cmd} --help");
        let text = stdout(&o);
        for flag in flags.iter().chain(&["--seed", "--budget", "--format"]) {
            assert!(text.contains(flag), "{cmd} help lacks {flag}");
        }
    }
    assert!(hfactor(&["--help"]).status.success());
}

#[test]
fn gen_factor_count_round_trip() {
    let host = scratch("host.txt");
    let o = hfactor(&["--seed", "5", "gen", "--model", "gnp", "--n", "9", "--p", "0.9"]);
    assert!(o.status.success());
    fs::write(&host, &o.stdout).unwrap();
    let again = hfactor(&["--seed", "5", "gen", "--model", "gnp", "--n", "9", "--p", "0.9"]);
    assert_eq!(o.stdout, again.stdout);

    let h = host.to_str().unwrap();
    let f = hfactor(&["factor", h, "corpus:k3"]);
    assert!(f.status.success());
    let lines = stdout(&f);
    assert_eq!(lines.lines().filter(|l| l.starts_with("copy x1:")).count(), 3, "{lines}");

    let c = hfactor(&["count", h, "corpus:k3"]);
    let phi: u64 = stdout(&c).trim().parse().unwrap();
    assert!(phi >= 1);
    let c2 = hfactor(&["factor", h, "corpus:k3", "--count"]);
    assert_eq!(stdout(&c2).trim(), phi.to_string());

    let partial = hfactor(&["factor", h, "corpus:k3", "--partial", "0.2"]);
    assert!(stdout(&partial).contains("met"));
}

#[test]
fn factor_absent_and_domain_errors() {
    let empty = scratch("empty.txt");
    fs::write(&empty, "v 6\n").unwrap();
    let e = empty.to_str().unwrap();
    let o = hfactor(&["factor", e, "corpus:k3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "absent\n");
    let o = hfactor(&["factor", e, "corpus:k4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("divide"));
    // two-phase needs a non-vertex-balanced pattern
    assert_eq!(hfactor(&["factor", e, "corpus:k3", "--two-phase"]).status.code(), Some(1));
}

#[test]
fn two_phase_factor_on_dense_host() {
    let host = scratch("dense.txt");
    let o = hfactor(&["--seed", "2", "gen", "--model", "gnp", "--n", "12", "--p", "0.95"]);
    fs::write(&host, &o.stdout).unwrap();
    let f = hfactor(&["--seed", "3", "factor", host.to_str().unwrap(), "corpus:triangle-plus-isolated", "--two-phase"]);
    assert!(f.status.success());
    assert_eq!(stdout(&f).lines().filter(|l| l.starts_with("copy")).count(), 3);
}

#[test]
fn partitioned_gen_and_diagnose() {
    let host = scratch("part.txt");
    let o = hfactor(&["--seed", "1", "gen", "--model", "partitioned", "--pattern", "corpus:k3", "--r", "3", "--p", "1"]);
    assert!(stdout(&o).contains("part 2 6 7 8"));
    fs::write(&host, &o.stdout).unwrap();
    let d = hfactor(&["diagnose", host.to_str().unwrap(), "corpus:k3", "--p", "1", "--shearer", "1"]);
    assert!(d.status.success(), "{}", stderr(&d));
    let out = stdout(&d);
    // the complete blowup has (r!)^{k-1} = 36 triangle factors
    assert!(out.contains("phi=36"), "{out}");
    assert!(out.contains("shearer.holds=true"));
    assert!(out.contains("copy_degrees=9,9,9"));
}

#[test]
fn simulate_csv_sidecar_and_determinism() {
    let out = scratch("curve.csv");
    let o = out.to_str().unwrap();
    let args = ["--seed", "9", "simulate", "--pattern", "corpus:k2", "--n", "6", "--trials", "200", "--p", "0.3,0.6", "--out", o];
    assert!(hfactor(&args).status.success());
    let first = fs::read(&out).unwrap();
    assert!(String::from_utf8_lossy(&first).starts_with("n,p,trials,successes,budget,phat,lo,hi\n"));
    assert!(hfactor(&args).status.success());
    assert_eq!(fs::read(&out).unwrap(), first);

    let meta: serde_json::Value = serde_json::from_slice(&fs::read(scratch("curve.csv.json")).unwrap()).unwrap();
    assert_eq!(meta["seed"], 9);
    assert_eq!(meta["pattern_hash"].as_str().unwrap().len(), 64);
    assert!(meta["version"].is_string());

    let bisect = ["--seed", "9", "simulate", "--pattern", "corpus:k3", "--n", "9", "--trials", "50", "--depth", "4"];
    let a = hfactor(&bisect);
    assert_eq!(stdout(&a).lines().count(), 1 + 5);
    assert_eq!(a.stdout, hfactor(&bisect).stdout);
}

#[test]
fn scaling_outputs() {
    let args = ["--seed", "4", "scaling", "--pattern", "corpus:k2", "--n-list", "4,6,8", "--trials", "60", "--depth", "4"];
    let text = hfactor(&args);
    assert!(text.status.success());
    let out = stdout(&text);
    assert!(out.contains("slope="));
    assert!(out.contains("reference=n^(-1) * (log n)^(1)"));
    let csv1 = hfactor(&[&["--format", "csv"][..], &args[..]].concat());
    let csv2 = hfactor(&[&["--format", "csv"][..], &args[..]].concat());
    assert_eq!(csv1.stdout, csv2.stdout);
    assert!(stdout(&csv1).starts_with("n,p,trials,successes,budget,phat,lo,hi\n"));
    let bad = hfactor(&["scaling", "--pattern", "corpus:k2", "--n-list", "6,4"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn corpus_listing() {
    let o = hfactor(&["corpus"]);
    let out = stdout(&o);
    for name in ["k5-figure", "triangle-plus-isolated", "necklace", "counterexample"] {
        assert!(out.contains(name));
    }
    let one = hfactor(&["corpus", "k4-link"]);
    assert!(stdout(&one).contains("v 6\n"));
    let json = hfactor(&["--format", "json", "corpus"]);
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 14);
}
