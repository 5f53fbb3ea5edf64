use std::io::Write;
use std::process::{Command, Stdio};

use serde_json::Value;

fn dvg(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_dvg"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

fn ok(args: &[&str], stdin: &str) -> Value {
    let (code, out, err) = dvg(args, stdin);
    assert_eq!(code, 0, "{args:?}: {err}");
    json(&out)
}

#[test]
fn enumerate_h11() {
    let v = ok(&["enumerate", "--c", "1", "--d", "1"], "");
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[1]["segments"][0]["slope"], "1/2");
}

#[test]
fn witness_report() {
    let v = ok(&["witness", "--c", "2", "--d", "3", "--p", "2"], "");
    let body = &v["body"];
    assert_eq!(body["base"]["linearization"]["segments"][0]["slope"], "3/5");
    assert_eq!(
        body["twisted"]["linearization"]["segments"][0]["slope"],
        "1/2"
    );
    assert_eq!(
        body["twisted"]["linearization"]["segments"][1]["slope"],
        "2/3"
    );
    assert_eq!(body["congruence_level"], 1);
    assert_eq!(body["experiment"]["verdict"], "counterexample-found");
    assert_eq!(body["schema"], "dvg-report/1");
    let (code, _, _) = dvg(&["witness", "--c", "1", "--d", "2"], "");
    assert_eq!(code, 2);
}

#[test]
fn malformed_input_exits_2() {
    let dir = std::env::temp_dir().join(format!("dvg-malformed-{}", std::process::id()));
    std::fs::write(&dir, "{\"ring\": 7").unwrap();
    let (code, _, err) = dvg(&["np", "--in", dir.to_str().unwrap()], "");
    assert_eq!(code, 2);
    assert!(err.contains("invalid JSON"));
    std::fs::remove_file(&dir).unwrap();
    let (code, _, _) = dvg(
        &["np"],
        r#"{"ring": {"p": 4, "deg": 1, "precision": 3}, "phi": [[["1"]]]}"#,
    );
    assert_eq!(code, 2);
    let (code, _, _) = dvg(&["verify"], "{}");
    assert_eq!(code, 2, "--seed is mandatory");
}

#[test]
fn minimal_np_and_anumber() {
    let module = ok(
        &[
            "minimal",
            "--np",
            r#"{"segments":[{"slope":"2/5","mult":5}]}"#,
            "--p",
            "3",
        ],
        "",
    );
    assert_eq!(module["rank"], 5);
    assert_eq!(module["provenance"], "minimal");
    assert!(module["description"]
        .as_str()
        .unwrap()
        .contains("column convention"));
    let text = module.to_string();
    let np = ok(&["np"], &text);
    assert_eq!(np["segments"][0]["slope"], "2/5");
    assert_eq!(ok(&["anumber"], &text)["a_number"], 2);
    let dual = ok(&["dual"], &text);
    assert_eq!(
        ok(&["np"], &dual.to_string())["segments"][0]["slope"],
        "3/5"
    );
}

#[test]
fn qx_of_witness_twist() {
    let module = ok(
        &[
            "witness",
            "--c",
            "2",
            "--d",
            "3",
            "--emit-module",
            "twisted",
        ],
        "",
    );
    let qx = ok(&["qx"], &module.to_string());
    assert_eq!(qx["valuations"], json(r#"[0, "inf", 1, "inf", "inf", 3]"#));
    assert_eq!(qx["polygon"]["segments"][0]["slope"], "1/2");
}

#[test]
fn verify_exit_codes() {
    let base = ok(
        &["witness", "--c", "2", "--d", "3", "--emit-module", "base"],
        "",
    )
    .to_string();
    let stable = ok(&["verify", "--seed", "1", "--trials", "20"], &base);
    assert_eq!(stable["body"]["level"], 2);
    assert_eq!(stable["body"]["verdict"], "all-stable");
    let args = [
        "verify",
        "--seed",
        "1",
        "--trials",
        "5",
        "--level",
        "1",
        "--inject-twist",
    ];
    let (code, out, _) = dvg(&args, &base);
    assert_eq!(code, 1);
    assert_eq!(json(&out)["body"]["verdict"], "counterexample-found");
    let mut expecting = args.to_vec();
    expecting.extend(["--expect", "counterexample"]);
    assert_eq!(dvg(&expecting, &base).0, 0);
}

#[test]
fn bounds_table() {
    let v = ok(&["bounds", "--cmax", "5", "--dmax", "5"], "");
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 25);
    let row = rows.iter().find(|r| r["c"] == 2 && r["d"] == 3).unwrap();
    assert_eq!(
        (row["j"].as_u64(), row["n_bound"].as_u64()),
        (Some(2), Some(7))
    );
    assert_eq!(dvg(&["bounds", "--cmax", "0", "--dmax", "1"], "").0, 2);
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("dvg-out-{}.json", std::process::id()));
    let (code, stdout, _) = dvg(
        &[
            "enumerate",
            "--c",
            "2",
            "--d",
            "3",
            "--out",
            path.to_str().unwrap(),
        ],
        "",
    );
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let v = json(&std::fs::read_to_string(&path).unwrap());
    assert_eq!(v.as_array().unwrap().len(), 8);
    std::fs::remove_file(&path).unwrap();
}
