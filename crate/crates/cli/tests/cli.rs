use std::process::{Command, Output};

use serde_json::{json, Value};

fn weilmod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weilmod")).args(args).output().expect("spawn weilmod")
}

fn json_of(args: &[&str]) -> Value {
    let out = weilmod(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn tmp(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("weilmod-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

const W2: &str = "0,0,1,0;0,0,0,1;-1,0,0,0;0,-1,0,0";

#[test]
fn hilbert_symbol_at_five() {
    assert_eq!(json_of(&["hilbert", "--field", "qp:5", "--a", "5", "--b", "2"]), json!({ "value": -1 }));
    assert_eq!(json_of(&["hilbert", "--field", "qp:5", "--a", "-1", "--b", "5"]), json!({ "value": 1 }));
    assert_eq!(json_of(&["hilbert", "--field", "fq:3:2", "--a", "2", "--b", "2"]), json!({ "value": 1 }));
}

#[test]
fn exhaustive_operator_cocycle_over_f3() {
    let v = json_of(&["cocycle", "--field", "fq:3:1", "--m", "1", "--path", "operator", "--exhaustive"]);
    assert_eq!(v, json!({ "trivial": true, "pairs": 576 }));
}

#[test]
fn omega_is_a_cyclotomic_vector() {
    let v = json_of(&["omega", "--field", "qp:5", "--form", "diag:2,3", "--out", "json"]);
    assert_eq!(v["ring"], "Z[zeta_5]");
    assert_eq!(v["value"]["ring"], "Z[zeta_5]");
    assert!(v["value"]["coeffs"].is_array());
    assert!(v["value"].get("approx").is_none());

    let v = json_of(&["omega", "--field", "fq:3", "--form", "diag:1", "--approx"]);
    let approx = &v["value"]["approx"];
    assert!(approx["re"].is_number() && approx["im"].is_number());
    assert!(approx["note"].is_string());
}

#[test]
fn heisenberg_dump_has_27_operators() {
    let path = tmp("operators.json");
    let v = json_of(&["heisenberg", "--field", "fq:3:1", "--m", "1", "--emit", path.to_str().unwrap()]);
    assert_eq!(v["count"], 27);
    let dump: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    let ops = dump["operators"].as_array().unwrap();
    assert_eq!(ops.len(), 27);
    for op in ops {
        let m = op["matrix"].as_array().unwrap();
        assert_eq!(m.len(), 3);
        assert!(m.iter().all(|r| r.as_array().unwrap().len() == 3));
    }
}

#[test]
fn padic_cocycle_single_pair() {
    for path in ["formula", "operator"] {
        let v = json_of(&["cocycle", "--field", "qp:5", "--m", "2", "--g1", W2, "--g2", W2, "--path", path, "--out", "json"]);
        for key in ["value", "leray", "x_g1", "x_g2"] {
            assert!(v.get(key).is_some(), "{path}: missing {key}");
        }
        let c = v["value"].as_i64().unwrap();
        assert!(c == 1 || c == -1);
    }
    // ĉ(w, w) = (−1,−1)^{l(l+1)/2} with l = 2 is trivial at an odd prime
    let v = json_of(&["cocycle", "--field", "qp:3", "--m", "2", "--g1", W2, "--g2", W2]);
    assert_eq!(v["value"], 1);
    assert_eq!(v["leray"]["l"], 2);
}

#[test]
fn padic_random_operator_matches_formula() {
    let v = json_of(&["cocycle", "--field", "qp:3", "--m", "1", "--random", "20", "--seed", "5", "--path", "operator"]);
    assert_eq!(v["pairs"], 20);
    assert_eq!(v["agrees_with_formula"], true);
}

#[test]
fn theta_table_as_csv() {
    for coeff in ["cyclo", "fl:7:1"] {
        let out = weilmod(&["theta", "--field", "fq:3:1", "--V", "diag:1", "--mprime", "1", "--coeff", coeff, "--out", "csv"]);
        assert!(out.status.success());
        let mut r = csv::Reader::from_reader(out.stdout.as_slice());
        let header = r.headers().unwrap().clone();
        let col = |name: &str| header.iter().position(|h| h == name).unwrap();
        let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
        let dims: Vec<(String, String)> = rows.iter().map(|x| (x[col("pi1")].to_string(), x[col("dim_theta")].to_string())).collect();
        assert_eq!(dims, vec![("trivial".into(), "2".into()), ("sign".into(), "1".into())]);
    }
}

#[test]
fn theta_congruence_rows() {
    let v = json_of(&["theta", "--field", "fq:3", "--V", "diag:1", "--congruence", "7"]);
    for row in v["rows"].as_array().unwrap() {
        assert_eq!(row["dim_mod_ell"], row["dim_theta"]);
        assert_eq!(row["brauer"], true);
        assert_eq!(row["idempotent_h1"], true);
    }
    // ℓ = 2 divides the group order
    assert_eq!(weilmod(&["theta", "--field", "fq:3", "--V", "diag:1", "--congruence", "2"]).status.code(), Some(2));
}

#[test]
fn weilrep_all_intertwines() {
    let v = json_of(&["weilrep", "--field", "fq:3", "--all", "--coeff", "fl:7"]);
    let ops = v["operators"].as_array().unwrap();
    assert_eq!(ops.len(), 24);
    assert!(ops.iter().all(|o| o["intertwines"] == true));
}

#[test]
fn bruhat_and_hasse() {
    let v = json_of(&["bruhat", "--field", "qp:5", "--g", "0,1;-1,0"]);
    assert_eq!(v["j"], 1);
    let v = json_of(&["hasse", "--field", "qp:3", "--form", "diag:3,3"]);
    assert_eq!(v["value"], -1);
}

#[test]
fn invalid_input_exits_2() {
    let cases: &[&[&str]] = &[
        &["hilbert", "--field", "qp:4", "--a", "1", "--b", "1"],
        &["hilbert", "--field", "qp:5", "--a", "0", "--b", "1"],
        &["hasse", "--field", "fq:3", "--form", "gram:1,2;0,1"],
        &["cocycle", "--field", "fq:3", "--g1", "1,1;1,1", "--g2", "1,0;0,1"],
        &["cocycle", "--field", "qp:3", "--exhaustive"],
        &["heisenberg", "--field", "fq:5", "--m", "3"],
        &["omega", "--field", "fq:3", "--form", "diag:1", "--coeff", "fl:3"],
        &["nonsense"],
        &["selfcheck", "--suite", "99"],
    ];
    for args in cases {
        let out = weilmod(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn config_round_trip() {
    let out = weilmod(&["--print-config", "cocycle", "--field", "fq:5", "--random", "30", "--seed", "9"]);
    assert!(out.status.success());
    let cfg: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(cfg["command"]["command"], "cocycle");
    assert_eq!(cfg["command"]["seed"], 9);
    let path = tmp("job.json");
    std::fs::write(&path, &out.stdout).unwrap();
    let replay = weilmod(&["run", "--config", path.to_str().unwrap()]);
    let direct = weilmod(&["cocycle", "--field", "fq:5", "--random", "30", "--seed", "9"]);
    assert!(replay.status.success());
    assert_eq!(replay.stdout, direct.stdout);

    let nested = tmp("nested.json");
    std::fs::write(&nested, r#"{"command":{"command":"run","config":"x.json"}}"#).unwrap();
    assert_eq!(weilmod(&["run", "--config", nested.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn out_path_and_threads() {
    let path = tmp("hilbert.csv");
    let out = Command::new(env!("CARGO_BIN_EXE_weilmod"))
        .args(["hilbert", "--field", "qp:3", "--a", "3", "--b", "-1", "--out", path.to_str().unwrap()])
        .env("WEILMOD_THREADS", "1")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "key,value\nvalue,-1\n");
    let bad = Command::new(env!("CARGO_BIN_EXE_weilmod")).args(["hilbert", "--field", "qp:3", "--a", "3", "--b", "3"]).env("WEILMOD_THREADS", "x").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn selfcheck_single_suite() {
    let v = json_of(&["selfcheck", "--seed", "7", "--suite", "8"]);
    assert_eq!(v["pass"], true);
    assert_eq!(v["rows"][0]["id"], 8);
}
