//! End-to-end checks of the command-line interface: exit-code contract
//! (0 = Yes/success, 1 = No, 2 = budget refusal, 3+ = errors), the
//! verifier-accepts-every-CLI-certificate loop, generator sidecars, and
//! strategy files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_qsg")
}

fn workdir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qsg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_reference_game(dir: &Path) -> PathBuf {
    let path = dir.join("reference.game");
    std::fs::write(
        &path,
        "player1: v0\nplayer0: v1 v2\ninit: v0\n\
         edge: v0 v1 1 1\nedge: v1 v0 1 1\nedge: v1 v1 0 2\n\
         edge: v0 v2 0 1\nedge: v2 v2 0 1\n",
    )
    .unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn threshold_yes_certificate_passes_the_verifier() {
    let dir = workdir();
    let arena = write_reference_game(&dir);
    let arena_s = arena.to_str().unwrap();

    let out = run(&[
        "asv-mp-threshold",
        "--arena",
        arena_s,
        "--vertex",
        "v0",
        "--c",
        "1/2",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["answer"], "Yes");
    let cert_path = dir.join("cert.json");
    std::fs::write(&cert_path, serde_json::to_string(&v["certificate"]).unwrap()).unwrap();

    let out = run(&[
        "verify-witness",
        "--arena",
        arena_s,
        "--certificate",
        cert_path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["ok"], true);
    assert!(v["work_units"].as_u64().unwrap() > 0);

    // Tampering with the certificate flips the verdict and the exit code.
    let mut tampered: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&cert_path).unwrap()).unwrap();
    tampered["c_prime"] = serde_json::Value::String("2".into());
    let bad_path = dir.join("tampered.json");
    std::fs::write(&bad_path, serde_json::to_string(&tampered).unwrap()).unwrap();
    let out = run(&[
        "verify-witness",
        "--arena",
        arena_s,
        "--certificate",
        bad_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn no_answers_exit_one_and_errors_exit_three() {
    let dir = workdir();
    let arena = write_reference_game(&dir);
    let arena_s = arena.to_str().unwrap();

    let out = run(&["asv-mp-threshold", "--arena", arena_s, "--vertex", "v0", "--c", "2"]);
    assert_eq!(out.status.code(), Some(1));

    // Decimal thresholds are rejected with a hint.
    let out = run(&["asv-mp-threshold", "--arena", arena_s, "--vertex", "v0", "--c", "0.5"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exact fraction"));

    // Unknown vertices are input errors.
    let out = run(&["asv-mp-value", "--arena", arena_s, "--vertex", "nope"]);
    assert_eq!(out.status.code(), Some(3));

    // Missing required arguments are usage errors.
    let out = run(&["asv-mp-threshold", "--arena", arena_s]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn budget_refusal_exits_two_with_a_resource_report() {
    let dir = workdir();
    let tds = dir.join("tds.game");
    let out = run(&[
        "gen-tds", "--a", "0", "--b", "1", "--t", "3/2", "--lambda", "2/3", "--out",
        tds.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let out = Command::new(bin())
        .env("QSG_BUDGET", "8")
        .args([
            "ds-gap",
            "--arena",
            tds.to_str().unwrap(),
            "--vertex",
            "v",
            "--lambda",
            "2/3",
            "--c",
            "4/5",
            "--epsilon",
            "1/10",
            "--mode",
            "csv",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("budget exceeded"), "{err}");
    assert!(err.contains("needs"), "{err}");
}

#[test]
fn generators_emit_arena_and_sidecar() {
    let dir = workdir();
    let part = dir.join("part.game");
    let out = run(&["gen-partition", "--weights", "1,1", "--out", part.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let arena_text = std::fs::read_to_string(&part).unwrap();
    assert!(arena_text.contains("edge: v0 v1 0 1/3"));
    let meta: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(format!("{}.meta.json", part.display())).unwrap(),
    )
    .unwrap();
    assert_eq!(meta["lambda"], "4/5");
    assert_eq!(meta["threshold"], "1/2");
    assert_eq!(meta["designated_vertex"], "src");

    // The generated file parses and the gap decider accepts it end to end.
    let out = run(&[
        "ds-gap",
        "--arena",
        part.to_str().unwrap(),
        "--vertex",
        "src",
        "--lambda",
        meta["lambda"].as_str().unwrap(),
        "--c",
        meta["threshold"].as_str().unwrap(),
        "--epsilon",
        meta["epsilon"].as_str().unwrap(),
        "--mode",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0)); // solvable instance: Yes

    let out = run(&["gen-partition", "--weights", "1,1,1", "--out", part.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3)); // odd sum rejected
}

#[test]
fn ds_gap_witness_replays_through_ds_evaluate() {
    let dir = workdir();
    let tds = dir.join("tds2.game");
    run(&["gen-tds", "--a", "0", "--b", "1", "--t", "3/2", "--lambda", "2/3", "--out",
        tds.to_str().unwrap()]);
    let out = run(&[
        "ds-gap",
        "--arena",
        tds.to_str().unwrap(),
        "--vertex",
        "v",
        "--lambda",
        "2/3",
        "--c",
        "4/5",
        "--epsilon",
        "1/10",
        "--mode",
        "csv",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["answer"], "Yes");
    let witness_path = dir.join("witness.json");
    std::fs::write(&witness_path, serde_json::to_string(&v["witness"]).unwrap()).unwrap();

    let out = run(&[
        "ds-evaluate",
        "--arena",
        tds.to_str().unwrap(),
        "--vertex",
        "v",
        "--lambda",
        "2/3",
        "--strategy",
        witness_path.to_str().unwrap(),
        "--mode",
        "csv",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let replayed = stdout_json(&out);
    assert_eq!(replayed["value"], v["witness_value"]);
}

#[test]
fn zerosum_and_br_mp_roundtrip() {
    let dir = workdir();
    let arena = write_reference_game(&dir);
    let arena_s = arena.to_str().unwrap();

    // Zero-sum value with strategies; feed the minimizer strategy to br-mp.
    let out = run(&[
        "zerosum", "--arena", arena_s, "--vertex", "v0", "--payoff", "mp", "--dim", "1",
        "--maximizer", "1", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["value"], "1");
    let strategy_path = dir.join("sigma0.json");
    std::fs::write(&strategy_path, serde_json::to_string(&v["strategy_min"]).unwrap()).unwrap();

    let out = run(&[
        "br-mp",
        "--arena",
        arena_s,
        "--vertex",
        "v0",
        "--strategy",
        strategy_path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let br = stdout_json(&out);
    assert_eq!(br["value"], "1");

    let out = run(&["lambda-region", "--arena", arena_s, "--vertex", "v0", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let region = stdout_json(&out);
    assert!(region["region"]["cells"].as_array().map(|a| !a.is_empty()).unwrap_or(false));
}
