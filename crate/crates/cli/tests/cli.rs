use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_operad-forge"));
    c.env_remove("OPERAD_FORGE_THREADS").env_remove("RUST_LOG");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn error_kind(out: &Output) -> String {
    let line = String::from_utf8_lossy(&out.stderr);
    let record: Value =
        serde_json::from_str(line.lines().last().unwrap_or("")).expect("structured error");
    record["error"].as_str().unwrap().to_string()
}

fn verify(report: &Path) -> Output {
    run(&["verify-witness", report.to_str().unwrap()])
}

#[test]
fn label_lists_in_every_format() {
    let out = run(&["vd", "--d", "3"]);
    assert_eq!(code(&out), 0);
    let labels: Vec<Value> = json(&out)["elements"].as_array().unwrap().clone();
    assert_eq!(labels.len(), 4);
    let csv = run(&["vd", "--d", "3", "--format", "csv"]);
    assert_eq!(
        String::from_utf8(csv.stdout).unwrap(),
        "index,label\n1,(121)|(121)|(121)\n2,(121)|(1212)|(21)\n3,(1212)|(212)|(21)\n4,(12121)|(12)\n"
    );
    let dot = run(&["move-graph", "--d", "2", "--format", "dot"]);
    assert!(String::from_utf8(dot.stdout)
        .unwrap()
        .starts_with("digraph"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["conj1", "--d", "3"][..],
        &["poset", "--d", "3", "--dismantle"],
        &["matching", "--block", "(121)", "--level", "1"],
        &[
            "closure",
            "--operad",
            "seq",
            "--d",
            "2",
            "--max-degree",
            "1",
        ],
    ] {
        let a = run(args);
        let b = bin()
            .args(args)
            .env("OPERAD_FORGE_THREADS", "1")
            .output()
            .unwrap();
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status, b.status);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(code(&run(&["conj2", "--d", "3"])), 0);
    assert_eq!(code(&run(&["conj2", "--d", "4"])), 1);
    assert_eq!(code(&run(&["milgram", "--n", "3"])), 0);
    assert_eq!(
        code(&run(&["block-homology", "--block", "(1212)", "--out", "1"])),
        0
    );
    assert_eq!(code(&run(&["nonsense"])), 2);
    let unsupported = run(&["tilde", "--l", "2", "--format", "dot"]);
    assert_eq!(code(&unsupported), 2);
    assert_eq!(error_kind(&unsupported), "usage");
    let bad_label = run(&["conj1", "--d", "2", "--replace-level", "0=(13)"]);
    assert_eq!(code(&bad_label), 2);
}

#[test]
fn caps_and_budgets_exit_three() {
    let capped = run(&["--max-simplices", "10", "poset", "--d", "3"]);
    assert_eq!(code(&capped), 3);
    assert_eq!(error_kind(&capped), "limit");
    let frontier = run(&[
        "block-homology",
        "--block",
        "(1212)",
        "--out",
        "1",
        "--max-total",
        "1",
    ]);
    assert_eq!(code(&frontier), 3);
    assert_eq!(json(&frontier)["status"], "inconclusive");
    assert_eq!(
        code(&run(&[
            "--time-limit",
            "0",
            "matching",
            "--block",
            "(12)",
            "--level",
            "1"
        ])),
        3
    );
}

#[test]
fn config_file() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.toml");
    std::fs::write(&good, "format = \"csv\"\nmax_total = 6\n").unwrap();
    let out = run(&["--config", good.to_str().unwrap(), "vd", "--d", "2"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .starts_with("index,label"));

    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "format = \"csv\"\ncolour = \"red\"\n").unwrap();
    let out = run(&["--config", bad.to_str().unwrap(), "vd", "--d", "2"]);
    assert_eq!(code(&out), 2);
    assert_eq!(error_kind(&out), "usage");

    let zero = dir.path().join("zero.toml");
    std::fs::write(&zero, "threads = 0\n").unwrap();
    assert_eq!(
        code(&run(&[
            "--config",
            zero.to_str().unwrap(),
            "vd",
            "--d",
            "2"
        ])),
        2
    );
}

#[test]
fn bad_thread_env_is_a_usage_error() {
    let out = bin()
        .args(["vd", "--d", "2"])
        .env("OPERAD_FORGE_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.json");
    let out = run(&["--output", path.to_str().unwrap(), "vd", "--d", "2"]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["d"], 2);
}

#[test]
fn witnesses_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&str, &[&str]); 4] = [
        (
            "conj1",
            &["conj1", "--d", "2", "--replace-level", "0=(121)|(121)"],
        ),
        ("conj2", &["conj2", "--d", "4"]),
        ("matching", &["matching", "--block", "(12)", "--level", "1"]),
        (
            "closure",
            &[
                "closure",
                "--operad",
                "seq",
                "--d",
                "2",
                "--max-degree",
                "2",
                "--replace-level",
                "0=(121)|(121)",
            ],
        ),
    ];
    for (name, args) in cases {
        let out = run(args);
        assert_eq!(code(&out), 1, "{name}");
        let path = dir.path().join(format!("{name}.json"));
        std::fs::write(&path, &out.stdout).unwrap();
        let replay = verify(&path);
        assert_eq!(
            code(&replay),
            0,
            "{name}: {}",
            String::from_utf8_lossy(&replay.stderr)
        );
        assert_eq!(json(&replay)["replayed"], true);
    }
}

#[test]
fn forged_witness_does_not_replay() {
    let out = run(&["matching", "--block", "(12)", "--level", "1"]);
    let mut report = json(&out);
    let paths = report["witness"]["paths"].as_array_mut().unwrap();
    paths.reverse();
    let mut child = bin()
        .args(["verify-witness", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(report.to_string().as_bytes())
        .unwrap();
    let replay = child.wait_with_output().unwrap();
    assert_eq!(code(&replay), 1);
}

#[test]
fn passing_report_has_nothing_to_replay() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pass.json");
    std::fs::write(&path, run(&["conj2", "--d", "3"]).stdout).unwrap();
    assert_eq!(code(&verify(&path)), 2);
}

#[test]
fn path_parameters() {
    let out = run(&[
        "paths",
        "--path",
        r#"{"word":[1,2,1],"cuts":[2],"degrees":{"in":[1,0],"out":1}}"#,
        "--block",
        "(121)",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["display"], "12|1");
    assert_eq!(v["member"], true);
    assert_eq!(v["pairs"][0]["factor"], "(121)");
    let listed = json(&run(&[
        "paths", "--in", "1,0", "--out", "1", "--block", "(12)",
    ]));
    assert_eq!(listed["total"], "12");
    assert!(listed["count"].as_u64().unwrap() < 12);
}
