//! End-to-end tests of the `anamorph` binary: pipeline round-trips,
//! determinism under a fixed seed, exit codes, and on-disk formats.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use anamorph_core::Ciphertext;
use mat_core::DensityMatrix;
use security_metrics::trace_distance;
use tempfile::TempDir;

const MIXED_QUBIT: &str =
    r#"{"rows":2,"cols":2,"entries":[[0.5,0.0],[0.0,0.0],[0.0,0.0],[0.5,0.0]]}"#;
const GROUND_QUBIT: &str =
    r#"{"rows":2,"cols":2,"entries":[[1.0,0.0],[0.0,0.0],[0.0,0.0],[0.0,0.0]]}"#;

/// Scratch workspace with the two standard message files already in place.
struct Cli {
    dir: TempDir,
}

impl Cli {
    fn new() -> Self {
        let dir = tempfile::tempdir().expect("create temp dir");
        fs::write(dir.path().join("mo.json"), MIXED_QUBIT).unwrap();
        fs::write(dir.path().join("mc.json"), GROUND_QUBIT).unwrap();
        Cli { dir }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn read(&self, name: &str) -> Vec<u8> {
        fs::read(self.path(name)).unwrap_or_else(|e| panic!("read {name}: {e}"))
    }

    fn raw(&self, args: &[&str], env_seed: Option<&str>) -> Output {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_anamorph"));
        cmd.current_dir(self.dir.path())
            .env_remove("ANAMORPH_SEED")
            .args(args);
        if let Some(seed) = env_seed {
            cmd.env("ANAMORPH_SEED", seed);
        }
        cmd.output().expect("spawn anamorph")
    }

    fn ok(&self, args: &[&str]) -> serde_json::Value {
        let out = self.raw(args, None);
        assert!(
            out.status.success(),
            "{args:?} failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        serde_json::from_slice(&out.stdout).expect("stdout is a json report")
    }

    /// Run a command expected to fail; checks the exit code and the shape of
    /// the single stderr line, and returns it.
    fn fails(&self, args: &[&str], code: i32, label: &str) -> String {
        let out = self.raw(args, None);
        let stderr = String::from_utf8_lossy(&out.stderr).into_owned();
        assert_eq!(out.status.code(), Some(code), "{args:?}: {stderr}");
        let prefix = format!("anamorph: code={label} exit={code} msg=");
        assert!(stderr.starts_with(&prefix), "unexpected stderr: {stderr}");
        assert_eq!(stderr.lines().count(), 1, "stderr must be one line: {stderr}");
        stderr
    }
}

fn density(bytes: &[u8]) -> DensityMatrix {
    serde_json::from_slice(bytes).expect("density matrix json")
}

fn distance(a: &DensityMatrix, b: &DensityMatrix) -> f64 {
    trace_distance(a, b).unwrap()
}

#[test]
fn encrypt_then_decrypt_round_trips_both_messages() {
    let cli = Cli::new();
    cli.ok(&[
        "encrypt", "--original", "mo.json", "--covert", "mc.json", "--seed", "7", "--out",
        "ct.json", "--key-out", "key.json",
    ]);
    cli.ok(&["dom", "--ct", "ct.json", "--key", "key.json", "--out", "dec.json"]);
    let mo = density(MIXED_QUBIT.as_bytes());
    assert!(distance(&density(&cli.read("dec.json")), &mo) <= 1e-9);

    cli.ok(&[
        "dcm", "--ct", "ct.json", "--key", "key.json", "--mode", "exact", "--out", "covert.json",
    ]);
    let mc = density(GROUND_QUBIT.as_bytes());
    assert!(distance(&density(&cli.read("covert.json")), &mc) <= 1e-9);
}

#[test]
fn dilation_route_matches_direct_construction() {
    let cli = Cli::new();
    cli.ok(&[
        "encrypt", "--original", "mo.json", "--covert", "mc.json", "--seed", "7", "--out",
        "direct.json", "--key-out", "k1.json",
    ]);
    let report = cli.ok(&[
        "encrypt", "--original", "mo.json", "--covert", "mc.json", "--seed", "7", "--route",
        "dilation", "--out", "dilated.json", "--key-out", "k2.json",
    ]);
    assert_eq!(cli.read("k1.json"), cli.read("k2.json"), "same seed, same key");
    let a: Ciphertext = serde_json::from_slice(&cli.read("direct.json")).unwrap();
    let b: Ciphertext = serde_json::from_slice(&cli.read("dilated.json")).unwrap();
    let gap = a.dm.mat().max_abs_diff(b.dm.mat());
    assert!(gap <= 1e-10, "construction gap {gap}");
    assert!(report["metrics"]["lambda"].as_f64().unwrap() <= 1.0);
}

#[test]
fn extracted_original_ciphertext_feeds_the_same_decryption() {
    let cli = Cli::new();
    cli.ok(&[
        "encrypt", "--original", "mo.json", "--covert", "mc.json", "--seed", "7", "--out",
        "ct.json", "--key-out", "key.json",
    ]);
    cli.ok(&["eoc", "--ct", "ct.json", "--key", "key.json", "--out", "honest.json"]);
    cli.ok(&[
        "encrypt-original", "--original", "mo.json", "--key", "key.json", "--out", "rebuilt.json",
    ]);
    // Stripping the covert block reproduces the honest encryption exactly.
    assert_eq!(cli.read("honest.json"), cli.read("rebuilt.json"));

    cli.ok(&["dom", "--ct", "ct.json", "--key", "key.json", "--out", "dec_full.json"]);
    cli.ok(&["dom", "--ct", "honest.json", "--key", "key.json", "--out", "dec_honest.json"]);
    assert_eq!(cli.read("dec_full.json"), cli.read("dec_honest.json"));
}

#[test]
fn same_seed_gives_byte_identical_files_and_env_seed_is_a_fallback() {
    let cli = Cli::new();
    cli.ok(&[
        "encrypt", "--original", "mo.json", "--covert", "mc.json", "--seed", "9", "--out",
        "ct_a.json", "--key-out", "key_a.json",
    ]);
    cli.ok(&[
        "encrypt", "--original", "mo.json", "--covert", "mc.json", "--seed", "9", "--out",
        "ct_b.json", "--key-out", "key_b.json",
    ]);
    assert_eq!(cli.read("ct_a.json"), cli.read("ct_b.json"));
    assert_eq!(cli.read("key_a.json"), cli.read("key_b.json"));

    let out = cli.raw(
        &[
            "encrypt", "--original", "mo.json", "--covert", "mc.json", "--out", "ct_env.json",
            "--key-out", "key_env.json",
        ],
        Some("9"),
    );
    assert!(out.status.success());
    assert_eq!(cli.read("ct_env.json"), cli.read("ct_a.json"));

    cli.ok(&[
        "encrypt", "--original", "mo.json", "--covert", "mc.json", "--seed", "10", "--out",
        "ct_c.json", "--key-out", "key_c.json",
    ]);
    assert_ne!(cli.read("ct_c.json"), cli.read("ct_a.json"), "seeds must matter");
}

#[test]
fn reports_carry_digests_of_every_file_touched() {
    let cli = Cli::new();
    let report = cli.ok(&[
        "encrypt", "--original", "mo.json", "--covert", "mc.json", "--seed", "3", "--out",
        "ct.json", "--key-out", "key.json",
    ]);
    assert_eq!(report["command"], "encrypt");
    assert!(report["wall_time_ms"].is_u64());
    assert!(report["metrics"]["eta"].is_u64());
    for (section, names) in [("inputs", vec!["mo.json", "mc.json"]), ("outputs", vec!["ct.json", "key.json"])] {
        let map = report[section].as_object().unwrap();
        for name in names {
            let digest = map[name].as_str().unwrap();
            let expect = format!("{:016x}", seedstream::fnv1a64(&cli.read(name)));
            assert_eq!(digest, expect, "{section} digest of {name}");
        }
    }
}

#[test]
fn written_ciphertexts_reparse_to_the_same_bytes() {
    let cli = Cli::new();
    cli.ok(&[
        "encrypt", "--original", "mo.json", "--covert", "mc.json", "--seed", "5", "--out",
        "ct.json", "--key-out", "key.json",
    ]);
    let bytes = cli.read("ct.json");
    let ct: Ciphertext = serde_json::from_slice(&bytes).unwrap();
    let again = mat_core::json::to_json_string(&ct) + "\n";
    assert_eq!(bytes, again.as_bytes(), "serialize-parse-serialize must be the identity");
}

#[test]
fn sampled_extraction_logs_every_shot() {
    let cli = Cli::new();
    cli.ok(&[
        "encrypt", "--original", "mo.json", "--covert", "mc.json", "--seed", "7", "--out",
        "ct.json", "--key-out", "key.json",
    ]);
    let report = cli.ok(&[
        "dcm", "--ct", "ct.json", "--key", "key.json", "--mode", "sampled", "--trials", "2",
        "--seed", "11", "--out", "est.json", "--shot-log", "shots.csv",
    ]);
    assert_eq!(report["metrics"]["n_shots"], 354);

    let csv = String::from_utf8(cli.read("shots.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "trial,t,branch,pauli,outcome");
    assert_eq!(lines.len(), 1 + 2 * 354);
    for line in &lines[1..] {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 5, "bad row: {line}");
        assert!(cols[0] == "0" || cols[0] == "1");
        assert!(cols[2] == "0" || cols[2] == "1");
        assert!(["X", "Y", "Z"].contains(&cols[3]), "bad pauli: {line}");
        assert!(cols[4] == "1" || cols[4] == "-1");
    }

    // The estimate file holds a finite-shot reconstruction of the covert
    // state; at 354 shots it should be within the coarse target of the truth.
    let est: mat_core::ComplexMatrix = serde_json::from_slice(&cli.read("est.json")).unwrap();
    let mc = density(GROUND_QUBIT.as_bytes());
    assert!(est.max_abs_diff(mc.mat()) < 0.5);
}

#[test]
fn share_and_reconstruct_flow_through_files() {
    let cli = Cli::new();
    cli.ok(&[
        "share", "--original", "mo.json", "--covert", "mc.json", "--out-dir", "shares",
        "--seed", "5",
    ]);
    for name in [
        "shares/bundle-1.json",
        "shares/bundle-2.json",
        "shares/bundle-3.json",
        "shares/encoded.json",
        "shares/dictator.json",
    ] {
        assert!(cli.path(name).exists(), "{name} missing");
    }

    let report = cli.ok(&[
        "reconstruct", "--dir", "shares", "--players", "1,3", "--out-original", "rec_o.json",
        "--out-covert", "rec_c.json",
    ]);
    assert_eq!(report["metrics"]["covert_present"], true);
    let mo = density(MIXED_QUBIT.as_bytes());
    let mc = density(GROUND_QUBIT.as_bytes());
    assert!(distance(&density(&cli.read("rec_o.json")), &mo) <= 1e-9);
    assert!(distance(&density(&cli.read("rec_c.json")), &mc) <= 1e-9);

    let report = cli.ok(&[
        "reconstruct", "--dir", "shares", "--players", "2,3", "--original-only",
        "--out-original", "rec_o2.json",
    ]);
    assert_eq!(report["metrics"]["covert_present"], false);
    assert!(distance(&density(&cli.read("rec_o2.json")), &mo) <= 1e-9);
}

#[test]
fn analysis_commands_report_the_closed_form_quantities() {
    let cli = Cli::new();
    cli.ok(&[
        "encrypt", "--original", "mo.json", "--covert", "mc.json", "--seed", "7", "--out",
        "ct.json", "--key-out", "key.json",
    ]);
    cli.ok(&[
        "encrypt-original", "--original", "mo.json", "--key", "key.json", "--out", "ct0.json",
    ]);

    let report = cli.ok(&["analyze", "--ct0", "ct0.json", "--ct1", "ct.json", "--eta", "4"]);
    let m = &report["metrics"];
    assert!((m["trace_distance"].as_f64().unwrap() - 0.25).abs() <= 1e-9);
    assert!((m["expected_distance"].as_f64().unwrap() - 0.25).abs() == 0.0);
    assert!(m["fidelity"].as_f64().unwrap() >= 1.0 - 0.25 - 1e-9);

    let report = cli.ok(&["entropy", "--original", "mo.json", "--covert", "mc.json", "--key", "key.json"]);
    let m = &report["metrics"];
    assert!((m["s_mf0"].as_f64().unwrap() - 2.0).abs() <= 1e-9);
    assert!((m["rel_entropy"].as_f64().unwrap() - 0.5).abs() <= 1e-9);
    assert!((m["rel_entropy_bound"].as_f64().unwrap() - 0.5).abs() <= 1e-9);

    let report = cli.ok(&["tpds", "--original", "mo.json", "--covert", "mc.json", "--seed", "4"]);
    let m = &report["metrics"];
    assert_eq!(m["supervision_gap"].as_f64().unwrap(), 0.0);
    assert!(m["original_roundtrip"].as_f64().unwrap() <= 1e-9);
    assert!(m["covert_roundtrip"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn schema_violations_exit_two() {
    let cli = Cli::new();
    cli.ok(&[
        "encrypt", "--original", "mo.json", "--covert", "mc.json", "--seed", "7", "--out",
        "ct.json", "--key-out", "key.json",
    ]);
    let mut ct: serde_json::Value = serde_json::from_slice(&cli.read("ct.json")).unwrap();
    ct["dm"]["entries"][0] = serde_json::json!([5.0, 0.0]);
    fs::write(cli.path("bad.json"), ct.to_string()).unwrap();
    let line = cli.fails(&["dom", "--ct", "bad.json", "--key", "key.json"], 2, "schema");
    assert!(line.contains("bad.json"), "message should name the file: {line}");

    fs::write(cli.path("mangled.json"), "{not json").unwrap();
    cli.fails(&["dom", "--ct", "mangled.json", "--key", "key.json"], 2, "schema");
    cli.fails(&["dom", "--ct", "missing.json", "--key", "key.json"], 2, "io");
}

#[test]
fn infeasible_requests_exit_three() {
    let cli = Cli::new();
    // A pure original message has no spectral room for the covert block.
    cli.fails(
        &[
            "encrypt", "--original", "mc.json", "--covert", "mc.json", "--seed", "7", "--out",
            "x.json", "--key-out", "y.json",
        ],
        3,
        "infeasible",
    );
    // No coupling in {2, 3} clears the positivity floor of 4.
    cli.fails(
        &[
            "share", "--original", "mo.json", "--covert", "mc.json", "--eta-domain", "2,3",
            "--out-dir", "low", "--seed", "5",
        ],
        3,
        "infeasible",
    );
}

#[test]
fn missing_covert_signal_exits_four() {
    let cli = Cli::new();
    cli.ok(&[
        "encrypt", "--original", "mo.json", "--covert", "mc.json", "--seed", "7", "--out",
        "ct.json", "--key-out", "key.json",
    ]);
    cli.ok(&[
        "encrypt-original", "--original", "mo.json", "--key", "key.json", "--out", "ct0.json",
    ]);
    cli.fails(&["dcm", "--ct", "ct0.json", "--key", "key.json", "--mode", "exact"], 4, "failure");

    cli.ok(&[
        "share", "--original", "mo.json", "--covert", "mc.json", "--out-dir", "shares",
        "--seed", "5",
    ]);
    cli.fails(
        &[
            "reconstruct", "--dir", "shares", "--players", "1,2", "--original-only",
            "--out-covert", "z.json",
        ],
        4,
        "failure",
    );
}

#[test]
fn usage_errors_exit_two() {
    let cli = Cli::new();
    let out = cli.raw(&["no-such-command"], None);
    assert_eq!(out.status.code(), Some(2));

    cli.ok(&[
        "share", "--original", "mo.json", "--covert", "mc.json", "--out-dir", "shares",
        "--seed", "5",
    ]);
    cli.fails(&["reconstruct", "--dir", "shares", "--players", "1,1"], 2, "usage");
    cli.fails(&["reconstruct", "--dir", "shares", "--players", "1,4"], 2, "usage");

    let out = cli.raw(
        &[
            "encrypt", "--original", "mo.json", "--covert", "mc.json", "--out", "x.json",
            "--key-out", "y.json",
        ],
        Some("zzz"),
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("code=usage"));
}
