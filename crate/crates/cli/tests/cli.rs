use std::path::Path;
use std::process::{Command, Output};

const VERBS: [&[&str]; 13] = [
    &[],
    &["zeros"],
    &["zeros", "compute"],
    &["zeros", "verify"],
    &["zeros", "import"],
    &["fn"],
    &["fn", "list"],
    &["fn", "describe"],
    &["selberg-check"],
    &["explicit-check"],
    &["clt"],
    &["cov"],
    &["variance"],
];

fn run(args: &[&str], data: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mesoszeta"))
        .args(args)
        .env("MESOSZETA_DATA", data)
        .output()
        .expect("run mesoszeta")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn help_text() -> String {
    let dir = tempfile::tempdir().unwrap();
    let mut all = String::new();
    for verb in VERBS {
        let mut args = verb.to_vec();
        args.push("--help");
        let o = run(&args, dir.path());
        assert!(o.status.success(), "{args:?}");
        all.push_str(&format!("$ mesoszeta {}\n{}\n", args.join(" "), stdout(&o)));
    }
    all
}

#[test]
fn help_matches_golden() {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/help.txt");
    let text = help_text();
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&golden, &text).unwrap();
    }
    assert_eq!(text, std::fs::read_to_string(golden).unwrap());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path();
    assert_eq!(run(&["--version"], data).status.code(), Some(0));
    assert_eq!(run(&["clt", "--bogus"], data).status.code(), Some(1));
    assert_eq!(run(&["clt", "--side", "sideways"], data).status.code(), Some(1));
    assert_eq!(run(&["variance", "--fn", "sawtooth", "--lambda", "2"], data).status.code(), Some(1));
    let missing = run(&["clt", "--t", "1e6", "--side", "zero", "--out", dir.path().join("o").to_str().unwrap()], data);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("hint:"));
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"n_sampels": 3}"#).unwrap();
    assert_eq!(run(&["clt", "--config", bad.to_str().unwrap()], data).status.code(), Some(1));
}

#[test]
fn compute_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("z.txt");
    let t = table.to_str().unwrap();
    let o = run(&["zeros", "compute", "--from", "10", "--to", "1000", "--out", t], dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("649 zeros"));
    let o = run(&["zeros", "verify", "--table", t], dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).contains("verified 649 zeros"));

    // a table missing one ordinate fails verification
    let text = std::fs::read_to_string(&table).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let cut: Vec<&str> = lines.iter().take(lines.len() - 1).copied().collect();
    std::fs::write(&table, cut.join("\n")).unwrap();
    let o = run(&["zeros", "verify", "--table", t, "--threads", "1"], dir.path());
    assert!(!o.status.success());
}

#[test]
fn manifest_reproduces_a_run() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first");
    let args = [
        "clt",
        "--side",
        "prime",
        "--t",
        "1e4,1e5",
        "--lambda",
        "3",
        "--samples",
        "200",
        "--fn",
        "gaussian",
        "--fn",
        "tent:-1,1",
    ];
    let mut with_out = args.to_vec();
    with_out.extend(["--out", first.to_str().unwrap()]);
    assert!(run(&with_out, dir.path()).status.success());

    let second = dir.path().join("second");
    let manifest = first.join("manifest.json");
    let replay = run(&["clt", "--config", manifest.to_str().unwrap(), "--out", second.to_str().unwrap()], dir.path());
    assert!(replay.status.success(), "{}", String::from_utf8_lossy(&replay.stderr));
    for name in ["samples_0.csv", "samples_1.csv", "summary.json"] {
        let a = std::fs::read(first.join(name)).unwrap();
        assert_eq!(a, std::fs::read(second.join(name)).unwrap(), "{name}");
    }
    let m: serde_json::Value = serde_json::from_slice(&std::fs::read(&manifest).unwrap()).unwrap();
    assert_eq!(m["seed"], 20_100_531);
    assert_eq!(m["command"], "clt");
}

#[test]
fn function_inspection() {
    let dir = tempfile::tempdir().unwrap();
    let list = stdout(&run(&["fn", "list"], dir.path()));
    for name in ["gaussian", "c2_bump", "indicator", "tent", "mollified_indicator"] {
        assert!(list.lines().any(|l| l.starts_with(name)), "{name}");
    }
    let o = run(&["variance", "--fn", "indicator:0,1", "--lambda", "3"], dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).contains("diverges"));
    let o = run(&["variance", "--fn", "gaussian", "--lambda", "3"], dir.path());
    assert!(stdout(&o).contains("H^1/2 norm squared = 0.636619772368"));
    let o = run(&["fn", "describe", "--fn", "tent:-1,1", "--lambda", "2"], dir.path());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["sigma_t_sq"].as_f64().unwrap() > 0.0);
}

#[test]
fn covariance_rejects_rough_functions() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &[
            "cov",
            "--side",
            "prime",
            "--t",
            "1e4",
            "--lambda",
            "3",
            "--samples",
            "10",
            "--fn",
            "gaussian",
            "--fn",
            "indicator:0,1",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("indicator"));
}
