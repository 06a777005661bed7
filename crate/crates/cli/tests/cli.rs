//! End-to-end checks of the command-line surface.

use std::process::{Command, Output};

fn doldkan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_doldkan"))
        .args(args)
        .env_remove("DOLDKAN_SEED")
        .output()
        .expect("binary runs")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    assert!(output.status.success(), "stderr: {}", String::from_utf8_lossy(&output.stderr));
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

#[test]
fn normalize_cancels_the_boundary_against_the_quasidegeneracy() {
    let word = r#"[{"kind":"d","i":0,"level":2},{"kind":"u","i":1,"level":1}]"#;
    let out = doldkan(&["normalize", word]);
    let v = stdout_json(&out);
    assert_eq!(v["map"]["table"], serde_json::json!([0, 1]));
    assert_eq!(v["canonical"], serde_json::json!([]));
    assert_eq!(v["schema"], "doldkan/normalize/v1");
}

#[test]
fn normalize_requires_a_level_for_the_empty_word() {
    let out = doldkan(&["normalize", "[]"]);
    assert_eq!(out.status.code(), Some(2));
    let out = doldkan(&["normalize", "[]", "--n", "3"]);
    let v = stdout_json(&out);
    assert_eq!(v["map"]["table"], serde_json::json!([0, 1, 2, 3]));
}

#[test]
fn malformed_input_exits_with_the_usage_code() {
    let out = doldkan(&["normalize", "{not json"]);
    assert_eq!(out.status.code(), Some(2));
    let out = doldkan(&["decompose", "--instance", "bogus:1", "--n", "1", "{}"]);
    assert_eq!(out.status.code(), Some(2));
    // A word that does not compose.
    let bad = r#"[{"kind":"d","i":0,"level":2},{"kind":"d","i":0,"level":2}]"#;
    let out = doldkan(&["normalize", bad]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn presentations_verify_cleanly() {
    let out = doldkan(&["verify", "presentations", "--n-max", "3"]);
    let v = stdout_json(&out);
    assert_eq!(v["failures"], 0);
}

#[test]
fn decompose_then_reconstruct_returns_the_element() {
    let element = r#"{"level":2,"coords":{"0,0":1,"0,1":2,"0,2":3,"1,0":4,"1,1":5,"1,2":0,"2,0":1,"2,1":2,"2,2":3}}"#;
    let dir = std::env::temp_dir().join("doldkan-cli-roundtrip");
    std::fs::create_dir_all(&dir).unwrap();
    let dec_path = dir.join("dec.json");
    let out = doldkan(&[
        "decompose",
        "--instance",
        "exp:1:S3",
        "--n",
        "2",
        "--order",
        "binary",
        element,
        "--out",
        dec_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let out = doldkan(&["reconstruct", "--instance", "exp:1:S3", dec_path.to_str().unwrap()]);
    let v = stdout_json(&out);
    let expected: serde_json::Value = serde_json::from_str(element).unwrap();
    assert_eq!(v["element"], expected);
}

#[test]
fn identity_decomposes_to_identity_components() {
    let element = r#"{"level":1,"coords":{"0":0,"1":0}}"#;
    let out = doldkan(&["decompose", "--instance", "exp:0:S3", "--n", "1", element]);
    let v = stdout_json(&out);
    let components = v["decomposition"]["components"].as_array().unwrap();
    assert_eq!(components.len(), 2);
    for c in components {
        for (_, value) in c["element"]["coords"].as_object().unwrap() {
            assert_eq!(value, &serde_json::json!(0));
        }
    }
}

#[test]
fn non_extending_orders_need_force() {
    let element = r#"{"level":1,"coords":{"0":1,"1":2}}"#;
    let swapped = r#"{"n":1,"variant":"simplicial","positions":[[0],[]]}"#;
    let out = doldkan(&[
        "decompose",
        "--instance",
        "exp:0:S3",
        "--n",
        "1",
        "--order",
        swapped,
        element,
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = doldkan(&[
        "decompose",
        "--instance",
        "exp:0:S3",
        "--n",
        "1",
        "--order",
        swapped,
        "--force",
        element,
    ]);
    assert!(out.status.success());
}

#[test]
fn sdp_scope_passes_on_extending_orders() {
    for (instance, variant) in [
        (r#"gamma:{"groups":[[2],[2]],"boundaries":[[[1]]]}"#, "simplicial"),
        ("exp:0:S3", "simplicial"),
        ("exp:0:S3", "symmetric"),
    ] {
        let out = doldkan(&[
            "verify",
            "sdp",
            "--instance",
            instance,
            "--n",
            "2",
            "--variant",
            variant,
            "--order",
            "binary",
            "--trials",
            "20",
            "--seed",
            "5",
        ]);
        let v = stdout_json(&out);
        assert_eq!(v["failures"], 0, "instance {instance} variant {variant}");
    }
}

#[test]
fn symmetric_scope_passes_on_the_exponential_instance() {
    let out = doldkan(&[
        "verify",
        "symmetric",
        "--instance",
        "exp:1:S3",
        "--n",
        "2",
        "--trials",
        "40",
        "--seed",
        "12",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["failures"], 0);
}

#[test]
fn instance_scope_covers_the_chain_round_trip() {
    let out = doldkan(&[
        "verify",
        "instance",
        "--instance",
        r#"gamma:{"groups":[[2],[4],[2]],"boundaries":[[[1]],[[2]]]}"#,
        "--n",
        "3",
        "--trials",
        "20",
        "--seed",
        "3",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["failures"], 0);
    let names: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"chain_complex_round_trip"));
}

#[test]
fn search_streams_verdicts_and_a_summary() {
    let out = doldkan(&[
        "search",
        "--instance",
        "exp:0:S3",
        "--n",
        "1",
        "--mode",
        "exhaustive",
        "--seed",
        "7",
    ]);
    assert!(out.status.success());
    let lines: Vec<&str> =
        std::str::from_utf8(&out.stdout).unwrap().lines().filter(|l| !l.is_empty()).collect();
    assert_eq!(lines.len(), 3);
    let summary: serde_json::Value = serde_json::from_str(lines[2]).unwrap();
    assert_eq!(summary["schema"], "doldkan/search-summary/v1");
    assert_eq!(summary["summary"]["total"], 2);
    assert_eq!(summary["summary"]["failed"], 1);
}

#[test]
fn replay_round_trips_through_files() {
    let out = doldkan(&[
        "search",
        "--instance",
        "exp:0:S3",
        "--n",
        "1",
        "--mode",
        "exhaustive",
        "--seed",
        "21",
    ]);
    let stdout = String::from_utf8(out.stdout).unwrap();
    let witness = stdout
        .lines()
        .filter_map(|l| serde_json::from_str::<serde_json::Value>(l).ok())
        .find_map(|v| v.get("witness").cloned().filter(|w| !w.is_null()))
        .expect("a failed verdict with witness");
    let dir = std::env::temp_dir().join("doldkan-cli-replay");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("witness.json");
    std::fs::write(&path, serde_json::to_string(&witness).unwrap()).unwrap();
    let out = doldkan(&["replay", path.to_str().unwrap()]);
    let v = stdout_json(&out);
    assert_eq!(v["replay"]["reproduced"], true);

    // Tampering with the conjugator makes the replay refute the witness.
    let mut tampered = witness.clone();
    tampered["inputs"]["conjugator"] = serde_json::json!({
        "level": 1,
        "coords": { "0": 0, "1": 0 }
    });
    let path2 = dir.join("tampered.json");
    std::fs::write(&path2, serde_json::to_string(&tampered).unwrap()).unwrap();
    let out = doldkan(&["replay", path2.to_str().unwrap()]);
    let v = stdout_json(&out);
    assert_eq!(v["replay"]["reproduced"], false);
}

#[test]
fn canonical_words_are_stable_under_renormalization() {
    // A scrambled word whose table is a non-monotone map.
    let word = r#"[{"kind":"t","i":1,"level":2},{"kind":"u","i":2,"level":1},{"kind":"d","i":2,"level":2}]"#;
    let out = doldkan(&["normalize", word]);
    let v = stdout_json(&out);
    let canonical = serde_json::to_string(&v["canonical"]).unwrap();
    let again = doldkan(&["normalize", &canonical]);
    let v2 = stdout_json(&again);
    assert_eq!(v["map"], v2["map"]);
    assert_eq!(v["canonical"], v2["canonical"]);
}

#[test]
fn replaying_an_empty_witness_list_yields_an_empty_report() {
    let out = doldkan(&["replay", "[]"]);
    let v = stdout_json(&out);
    assert_eq!(v["replays"], serde_json::json!([]));
}

#[test]
fn seed_env_variable_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_doldkan"))
        .args(["verify", "presentations", "--n-max", "1"])
        .env("DOLDKAN_SEED", "99")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], 99);
}
