use std::process::{Command, Output};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_superlax")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn verify_json_report() {
    let out = cli(&["verify", "--model", "ts", "--n", "3", "--filter", "lax.*", "--format", "json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let entries = v.as_array().unwrap();
    assert!(!entries.is_empty());
    for e in entries {
        assert!(e["identity"].as_str().unwrap().starts_with("lax."));
        assert_eq!(e["model"], "ts");
        assert_eq!(e["n"], 3);
        assert_eq!(e["status"], "pass");
        assert!(e["millis"].is_u64());
    }
    let ts2 = entries.iter().find(|e| e["identity"] == "lax.ts2").unwrap();
    assert_eq!(ts2["constant"], "0");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&cli(&["verify", "--model", "calogero", "--n", "4"])), 2);
    assert_eq!(code(&cli(&["verify", "--model", "nope", "--n", "2"])), 2);
    assert_eq!(code(&cli(&["verify", "--model", "hs", "--n", "1"])), 2);
    assert_eq!(code(&cli(&["verify", "--model", "hs", "--n", "5", "--allow-n4"])), 2);
    assert_eq!(code(&cli(&["verify", "--model", "hs", "--n", "2", "--filter", "[x"])), 2);
    assert_eq!(code(&cli(&["build-op", "--model", "hs", "--n", "2", "--name", "no-such-key"])), 2);
    assert_eq!(code(&cli(&["spectrum", "--n", "4", "--depth", "2"])), 2);
    assert_eq!(code(&cli(&["frobnicate"])), 2);
    assert_eq!(code(&cli(&["--help"])), 0);
}

#[test]
fn build_op_is_deterministic() {
    let args = ["build-op", "--model", "free-calogero", "--n", "2", "--name", "H"];
    let (a, b) = (cli(&args), cli(&args));
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn spectrum_and_export() {
    let out = cli(&["spectrum", "--n", "3", "--depth", "2", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["levels"].as_array().unwrap().len(), 3);

    let out = cli(&["export", "--model", "calogero", "--n", "2"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v.is_object());
}
