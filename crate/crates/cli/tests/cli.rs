use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn polyimage(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyimage"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn degeneracy_commands() {
    let v = json_of(&polyimage(&["degen", "check", "x1 + x2*x3"]));
    assert_eq!(v["degenerate"], true);
    assert_eq!(v["span_dimension"], 2);

    let v = json_of(&polyimage(&["degen", "check", "x1 + x2"]));
    assert_eq!(v["degenerate"], false);

    let v = json_of(&polyimage(&[
        "degen",
        "bound",
        "x1 + x2*x3",
        "-A",
        "2,4,8,16",
    ]));
    assert_eq!(v["within_bound"], true);
    assert!(v["measured"].as_u64().unwrap() <= 2 * 16);

    let out = polyimage(&["degen", "decompose", "x1 + x2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn image_energy_and_rank() {
    let v = json_of(&polyimage(&[
        "image",
        "x1 + x2",
        "-A",
        "[1, 2]",
        "--histogram",
    ]));
    assert_eq!(v["size"], 3);
    assert_eq!(v["histogram"]["counts"]["3"], 2);
    let v = json_of(&polyimage(&["energy", "x1 + x2", "-A", "1,2"]));
    assert_eq!(v["energy"], 6);
    let v = json_of(&polyimage(&["rank", "-A", "2,3,6"]));
    assert_eq!(v["rank"], 2);
    let v = json_of(&polyimage(&["group", "rank", "-A", "-3/4"]));
    assert_eq!(v["factorizations"]["-3/4"]["sign"], -1);
    let v = json_of(&polyimage(&["group", "check", "-A", "1,2,3,5,7"]));
    assert_eq!(v["rank"], 4);
    assert_eq!(v["doubling"], "3");
}

#[test]
fn set_operations() {
    let v = json_of(&polyimage(&["setop", "sum", "-a", "1,2", "-b", "10"]));
    assert_eq!(v["set"], serde_json::json!(["11", "12"]));
    let v = json_of(&polyimage(&["setop", "prod", "-a", "2,4,8"]));
    assert_eq!(v["size"], 5);
    let v = json_of(&polyimage(&[
        "setop", "mixed", "-A", "0,1", "-k", "2", "-l", "1",
    ]));
    assert_eq!(v["set"], serde_json::json!(["-1", "0", "1", "2"]));
    let v = json_of(&polyimage(&["setop", "cover", "-a", "0,1", "-b", "0,5,10"]));
    assert_eq!(v["verified"], true);
    let v = json_of(&polyimage(&[
        "setop", "dyadic", "-A", "1,2,3", "--levels", "2",
    ]));
    assert_eq!(v["sizes"].as_array().unwrap().len(), 3);
    let v = json_of(&polyimage(&[
        "setop",
        "freiman",
        "--points",
        "[[0,0],[1,0],[0,1]]",
    ]));
    assert_eq!(v["holds"], true);
}

#[test]
fn goodset_commands() {
    let v = json_of(&polyimage(&[
        "goodset", "report", "x1 + x2", "-A", "2,4,8,16",
    ]));
    assert_eq!(v["sup_rep"], 2);
    assert_eq!(v["bad_count"], 0);
    let v = json_of(&polyimage(&["goodset", "env", "x1 + x2", "-A", "2,4,8,16"]));
    assert_eq!(v["doubling"], "7/4");
    let out = polyimage(&["goodset", "env", "x1*x2 + 1", "-A", "2,3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unit_equations() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("eq.json");
    fs::write(
        &path,
        r#"{"coefficients": [1, 1], "target": 2, "generators": [2], "height": 2}"#,
    )
    .unwrap();
    let v = json_of(&polyimage(&["uniteq", path.to_str().unwrap()]));
    assert_eq!(v["solutions"], serde_json::json!([["1", "1"]]));
    assert_eq!(v["box_restricted"], true);
    let v2 = json_of(&polyimage(&["group", "uniteq", path.to_str().unwrap()]));
    assert_eq!(v, v2);

    fs::write(
        &path,
        r#"{"coefficients": [1, -1], "target": 0, "generators": [2], "height": 1}"#,
    )
    .unwrap();
    let out = polyimage(&["uniteq", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nonzero"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(polyimage(&["nonsense"]).status.code(), Some(1));
    assert_eq!(
        polyimage(&["image", "x1 +", "-A", "1"]).status.code(),
        Some(1)
    );
    assert_eq!(
        polyimage(&["image", "x1", "-A", "1/0"]).status.code(),
        Some(1)
    );
    assert_eq!(polyimage(&["--help"]).status.code(), Some(0));
    let out = polyimage(&["--max-tuples", "3", "image", "x1 + x2", "-A", "1,2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn experiment_run_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "cfg.json",
        r#"{
            "family": {"kind": "group_sample", "primes": [2, 3], "height": 2},
            "polynomial": "x1 + x2*x1",
            "sweep": [3, 5, 8],
            "seed": 42
        }"#,
    );
    let mut texts = Vec::new();
    for i in 0..2 {
        let csv = dir.path().join(format!("run{i}.csv"));
        let json = dir.path().join(format!("run{i}.json"));
        let v = json_of(&polyimage(&[
            "experiment",
            "run",
            &config,
            "--csv",
            csv.to_str().unwrap(),
            "--json",
            json.to_str().unwrap(),
        ]));
        assert_eq!(v["rows"], 3);
        assert_eq!(v["failed_rows"], 0);
        let report: Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
        assert_eq!(report["schema_version"], 1);
        texts.push(fs::read(&csv).unwrap());
    }
    assert_eq!(texts[0], texts[1]);

    let csv = dir.path().join("run0.csv");
    let out = polyimage(&["experiment", "report", csv.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("3 rows, 0 failed, 0 violations"));
}

#[test]
fn experiment_with_empty_sweep_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let config = write_config(
        dir.path(),
        "cfg.json",
        &format!(
            r#"{{"family": {{"kind": "gp", "ratio": "2"}}, "polynomial": "x1 + x2",
                "sweep": [], "outputs": {{"csv": {:?}}}}}"#,
            csv.to_str().unwrap()
        ),
    );
    let v = json_of(&polyimage(&["experiment", "run", &config]));
    assert_eq!(v["rows"], 0);
    assert_eq!(fs::read_to_string(&csv).unwrap().lines().count(), 1);

    let bad = write_config(dir.path(), "bad.json", r#"{"family": {"kind": "gp"}}"#);
    assert_eq!(
        polyimage(&["experiment", "run", &bad]).status.code(),
        Some(1)
    );
}
