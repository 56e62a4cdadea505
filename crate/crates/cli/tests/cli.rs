use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn alcove(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_alcove"))
        .args(args)
        .env_remove("ALCOVE_WEYL_CAP")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn schema(name: &str) -> Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("schemas/{name}.schema.json"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn type_ok(ty: &str, v: &Value) -> bool {
    match ty {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "integer" => v.is_i64() || v.is_u64(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        _ => true,
    }
}

/// Checks the subset of JSON Schema used by the shipped schema files.
fn conforms(s: &Value, v: &Value, path: &str) -> Result<(), String> {
    if let Some(c) = s.get("const") {
        if c != v {
            return Err(format!("{path}: expected {c}"));
        }
    }
    if let Some(Value::Array(opts)) = s.get("enum") {
        if !opts.contains(v) {
            return Err(format!("{path}: {v} not in enum"));
        }
    }
    match s.get("type") {
        Some(Value::String(t)) if !type_ok(t, v) => return Err(format!("{path}: not {t}")),
        Some(Value::Array(ts)) if !ts.iter().any(|t| type_ok(t.as_str().unwrap(), v)) => {
            return Err(format!("{path}: wrong type"))
        }
        _ => {}
    }
    if let Value::Object(m) = v {
        if let Some(Value::Array(req)) = s.get("required") {
            for k in req {
                let k = k.as_str().unwrap();
                if !m.contains_key(k) {
                    return Err(format!("{path}: missing {k}"));
                }
            }
        }
        let props = s.get("properties").and_then(Value::as_object);
        for (k, x) in m {
            let sub = props.and_then(|p| p.get(k)).or_else(|| s.get("additionalProperties"));
            if let Some(sub) = sub.filter(|x| x.is_object()) {
                conforms(sub, x, &format!("{path}.{k}"))?;
            }
        }
    }
    if let (Value::Array(xs), Some(items)) = (v, s.get("items")) {
        for (i, x) in xs.iter().enumerate() {
            conforms(items, x, &format!("{path}[{i}]"))?;
        }
    }
    Ok(())
}

fn assert_schema(name: &str, out: &Output) {
    let v = json_of(out);
    assert_eq!(v["command"], name);
    assert_eq!(v["schema_version"], 1);
    if let Err(e) = conforms(&schema(name), &v, "$") {
        panic!("{name} output violates schema: {e}");
    }
}

#[test]
fn omega_a3_is_cyclic_of_order_four() {
    let out = alcove(&["omega", "--type", "A3", "--method", "both"]);
    assert_eq!(code(&out), 0);
    assert_schema("omega", &out);
    let v = json_of(&out);
    assert_eq!(v["omega"]["order"], 4);
    assert_eq!(v["omega"]["factors"], serde_json::json!([4]));
    assert_eq!(v["constructions_agree"], true);
    assert_eq!(v["verified"], true);
}

#[test]
fn omega_adjoint_is_trivial() {
    let out = alcove(&["omega", "--type", "E6", "--isogeny", "adjoint"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json_of(&out)["omega"]["order"], 1);
}

#[test]
fn rgroup_d4_barycenter_stabilizer() {
    let out = alcove(&["rgroup", "--type", "D4", "--point", "c0"]);
    assert_eq!(code(&out), 0);
    assert_schema("rgroup", &out);
    let v = json_of(&out);
    assert_eq!(v["stabilizer"]["order"], 4);
    assert_eq!(v["stabilizer"]["iso_type"], serde_json::json!([2, 2]));
    assert_eq!(v["sphi"]["holds"], true);
}

#[test]
fn rgroup_face_point() {
    let out = alcove(&["rgroup", "--type", "A3", "--point", "face:1,3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json_of(&out)["stabilizer"]["iso_type"], serde_json::json!([2]));
}

#[test]
fn rgroup_rejects_point_outside_alcove() {
    let out = alcove(&["rgroup", "--type", "A2", "--point", "3,3"]);
    assert_eq!(code(&out), 2);
    assert!(!out.stderr.is_empty());
}

#[test]
fn restrict_2a2_gives_nonreduced_rank_one() {
    let out = alcove(&["restrict", "--type", "2A2"]);
    assert_eq!(code(&out), 0);
    assert_schema("restrict", &out);
    let v = json_of(&out);
    assert_eq!(v["restriction"]["folded_type"], serde_json::json!(["BC1"]));
    assert_eq!(v["restriction"]["folded"]["reduced"], false);
}

#[test]
fn classify_d4_realizes_every_subgroup() {
    let out = alcove(&["classify", "--type", "D4"]);
    assert_eq!(code(&out), 0);
    assert_schema("classify", &out);
    let v = json_of(&out);
    assert_eq!(v["classification"]["all_realized"], true);
    assert_eq!(v["classification"]["subgroups"].as_array().unwrap().len(), 5);
}

#[test]
fn table1_reports_odd_d_discrepancy() {
    let out = alcove(&["table1"]);
    assert_eq!(code(&out), 0);
    assert_schema("table1", &out);
    let v = json_of(&out);
    assert_eq!(v["all_consistent"], true);
    let mism: Vec<String> = v["mismatches"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["type"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(mism, ["D5", "D7"]);
    for m in v["mismatches"].as_array().unwrap() {
        assert_eq!(m["expected"], serde_json::json!([2]));
        assert_eq!(m["computed"], serde_json::json!([4]));
    }
    assert_eq!(code(&alcove(&["table1", "--strict"])), 1);
}

#[test]
fn verify_yu_2a3() {
    let out = alcove(&["verify", "yu", "--type", "2A3"]);
    assert_eq!(code(&out), 0);
    assert_schema("verify", &out);
    let e = &json_of(&out)["results"]["yu"]["entries"][0];
    assert_eq!(e["fixed_order"], 8);
    assert_eq!(e["folded_weyl_order"], 8);
    assert_eq!(e["passed"], true);
}

#[test]
fn verify_compat_is_deterministic() {
    let args = ["verify", "compat", "--type", "2A5", "--samples", "25", "--seed", "11"];
    let a = alcove(&args);
    let b = alcove(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json_of(&a)["passed"], true);
}

#[test]
fn verify_iota_single_type() {
    let out = alcove(&["verify", "iota", "--type", "D5"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json_of(&out)["results"]["iota"]["entries"][0]["constructions_agree"], true);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&alcove(&["omega", "--type", "Q7"])), 2);
    assert_eq!(code(&alcove(&["omega"])), 2);
    assert_eq!(code(&alcove(&["rgroup", "--type", "A2", "--point", "face:9"])), 2);
    assert_eq!(code(&alcove(&["frobnicate"])), 2);
    assert_eq!(code(&alcove(&["datum", "--type", "A2", "--input", "x.json"])), 2);
}

#[test]
fn cap_from_environment() {
    let run = |cap: &str| {
        Command::new(env!("CARGO_BIN_EXE_alcove"))
            .args(["omega", "--type", "B3", "--method", "barycenter"])
            .env("ALCOVE_WEYL_CAP", cap)
            .output()
            .unwrap()
    };
    assert_eq!(code(&run("10")), 2);
    assert_eq!(code(&run("48")), 0);
    assert_eq!(code(&run("lots")), 2);
    let flag = alcove(&["omega", "--type", "B3", "--method", "barycenter", "--cap", "10"]);
    assert_eq!(code(&flag), 2);
}

#[test]
fn datum_round_trip_and_corruption() {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let built = alcove(&["datum", "--type", "C3"]);
    assert_eq!(code(&built), 0);
    assert_schema("datum", &built);
    let mut d = json_of(&built)["datum"].clone();

    let good = dir.join("c3_datum.json");
    std::fs::write(&good, d.to_string()).unwrap();
    let out = alcove(&["datum", "--input", good.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_schema("datum", &out);
    assert_eq!(json_of(&out)["components"], serde_json::json!(["C3"]));

    let c = &mut d["coroots"][0];
    for x in c.as_array_mut().unwrap() {
        *x = (-x.as_i64().unwrap()).into();
    }
    let bad = dir.join("c3_corrupt.json");
    std::fs::write(&bad, d.to_string()).unwrap();
    let out = alcove(&["datum", "--input", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let v = json_of(&out);
    assert_eq!(v["valid"], false);
    assert!(v["violation"].as_str().unwrap().contains("-2"));
}

#[test]
fn output_flag_writes_file() {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("g2_omega.json");
    let out = alcove(&["omega", "--type", "G2", "--output", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["omega"]["order"], 1);
}
