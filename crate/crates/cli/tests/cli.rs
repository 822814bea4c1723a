use std::process::Command;

use bcontinuum_cli::{run, EXIT_EVAL, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

struct Run {
    code: u8,
    out: String,
    err: String,
}

fn lc_env(args: &[&str], env_depth: Option<&str>) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("lc").chain(args.iter().copied());
    let code = run(argv, env_depth, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn lc(args: &[&str]) -> Run {
    lc_env(args, None)
}

fn ok(args: &[&str]) -> String {
    let r = lc(args);
    assert_eq!(r.code, EXIT_OK, "{args:?}: {}", r.err);
    r.out
}

#[test]
fn derivative_with_trace() {
    assert_eq!(ok(&["diff", "x^2", "--at", "1"]), "2\npre_shadow = 2 + eps\n");
    assert_eq!(ok(&["diff", "t^3", "--at", "t=-2"]), "12\npre_shadow = 12 - 6*eps + eps^2\n");
}

#[test]
fn shadow_and_leading_term() {
    assert_eq!(ok(&["shadow", "3 + 2*eps - eps^2"]), "3\n");
    assert_eq!(ok(&["tlh", "3 + eps"]), "3\n");
    assert_eq!(ok(&["tlh", "eps + eps^2"]), "eps\n");
    assert_eq!(ok(&["tlh", "-eps^(-1) + 5"]), "-eps^(-1)\n");
}

#[test]
fn conic_points() {
    assert_eq!(
        ok(&["conic", "--samples", "0,2,4"]),
        "y0 = 1/4*x0^2 - 1; points: (0,-1) (2,0) (4,3)\n"
    );
    assert_eq!(
        ok(&["conic", "--samples", "-2,1/2", "--h", "eps^(-2)"]),
        "y0 = 1/4*x0^2 - 1; points: (-2,0) (1/2,-15/16)\n"
    );
}

#[test]
fn eval_with_bindings() {
    assert_eq!(ok(&["eval", "(a+b)^2", "--at", "a=eps,b=eps^(-1)"]), "eps^(-2) + 2 + eps^2\n");
    assert_eq!(ok(&["eval", "1 - x/H", "--at", "x=7,H=eps^(-1)"]), "1 - 7*eps\n");
    assert_eq!(ok(&["eval", "1/(1+x)", "--at", "x=eps", "--depth", "3"]), "1 - eps + eps^2 + O(eps^3)\n");
}

#[test]
fn sequences() {
    let out = ok(&["seq", "n/(n+1)", "--depth", "3"]);
    assert!(out.contains("standard_part: 1\n"), "{out}");
    assert!(out.contains("residue: negative\n"), "{out}");
    assert!(out.ends_with("embed: 1 - eps + eps^2 + O(eps^3)\n"), "{out}");
    let out = ok(&["seq", "const:pi:6"]);
    assert!(out.contains("terms from n = 1: 31/10, 157/50, 3141/1000"), "{out}");
    assert!(out.contains("standard_part: pi\nresidue: negative\n"), "{out}");
    assert!(out.ends_with("embed: unsupported\n"), "{out}");
    assert!(ok(&["seq", "n^2/(n+1)"]).contains("standard_part: unbounded"));
}

#[test]
fn depth_from_environment() {
    let r = lc_env(&["seq", "n/(n+1)"], Some("3"));
    assert!(r.out.ends_with("embed: 1 - eps + eps^2 + O(eps^3)\n"), "{}", r.out);
    let r = lc_env(&["seq", "n/(n+1)", "--depth", "2"], Some("3"));
    assert!(r.out.ends_with("embed: 1 - eps + O(eps^2)\n"), "{}", r.out);
    assert_eq!(lc_env(&["seq", "1/n"], Some("many")).code, EXIT_USAGE);
}

#[test]
fn exit_codes() {
    assert_eq!(lc(&[]).code, EXIT_USAGE);
    assert_eq!(lc(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(lc(&["diff", "x^2"]).code, EXIT_USAGE);
    let r = lc(&["eval", "1 +* 2"]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.err.contains("Usage:"), "{}", r.err);
    assert_eq!(lc(&["shadow", "3 + "]).code, EXIT_USAGE);
    assert_eq!(lc(&["conic", "--samples", "1,x"]).code, EXIT_USAGE);
    assert_eq!(lc(&["diff", "x*y", "--at", "1"]).code, EXIT_EVAL);
    assert_eq!(lc(&["eval", "1/(x-x)", "--at", "x=eps"]).code, EXIT_EVAL);
    assert_eq!(lc(&["eval", "y"]).code, EXIT_EVAL);
    let r = lc(&["shadow", "eps^(-1)"]);
    assert_eq!(r.code, EXIT_EVAL);
    assert!(r.err.contains("unlimited"), "{}", r.err);
    assert_eq!(lc(&["conic", "--h", "5"]).code, EXIT_EVAL);
    assert_eq!(lc(&["diff", "1/x", "--at", "0"]).code, EXIT_EVAL);
    assert_eq!(lc(&["--help"]).code, EXIT_OK);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["conic", "--json"][..],
        &["zoom", "x^3 - x", "--at", "1/2"],
        &["seq", "const:sqrt2", "--json"],
        &["eval", "sqrt(4 + x)", "--at", "x=eps"],
    ] {
        assert_eq!(lc(args).out, lc(args).out, "{args:?}");
    }
}

fn schema() -> jsonschema::JSONSchema {
    let text = include_str!("../schema/output.schema.json");
    let schema: Value = serde_json::from_str(text).unwrap();
    jsonschema::JSONSchema::compile(&schema).expect("schema compiles")
}

fn json(args: &[&str]) -> Value {
    let mut argv = args.to_vec();
    argv.push("--json");
    serde_json::from_str(&ok(&argv)).unwrap()
}

#[test]
fn json_validates_against_schema() {
    let schema = schema();
    let cases: [&[&str]; 10] = [
        &["eval", "x^2 + 1", "--at", "x=1+eps"],
        &["diff", "x^2", "--at", "1"],
        &["shadow", "3 + 2*eps - eps^2"],
        &["tlh", "eps + eps^2"],
        &["conic", "--samples", "0,2,4"],
        &["seq", "(n+1)/n"],
        &["seq", "const:pi:12"],
        &["seq", "n^3"],
        &["zoom", "x^2", "--at", "1"],
        &["eval", "3"],
    ];
    for args in cases {
        let v = json(args);
        let msgs: Vec<String> = match schema.validate(&v) {
            Ok(()) => continue,
            Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
        };
        panic!("{args:?}: {msgs:?}\n{v:#}");
    }
    let bogus = serde_json::json!({"command": "diff", "derivative": 2});
    assert!(!schema.is_valid(&bogus));
}

#[test]
fn human_numbers_appear_in_json() {
    let v = json(&["diff", "x^2", "--at", "1"]);
    assert_eq!(v["derivative"], "2");
    assert_eq!(v["pre_shadow"], "2 + eps");
    let v = json(&["conic", "--samples", "0,2,4"]);
    assert_eq!(v["equation"], "y0 = 1/4*x0^2 - 1");
    assert_eq!(v["points"], serde_json::json!([["0", "-1"], ["2", "0"], ["4", "3"]]));
    assert_eq!(v["derivation_matches"], true);
    let v = json(&["shadow", "3 + 2*eps - eps^2"]);
    assert_eq!((v["shadow"].as_str(), v["residue"].as_str()), (Some("3"), Some("positive")));
    let v = json(&["seq", "const:pi"]);
    assert_eq!(v["decomposition"]["standard_part"]["constant"], "pi");
    assert_eq!(v["decomposition"]["residue_sign"], "negative");
}

#[test]
fn zoom_writes_svg() {
    let svg = ok(&["zoom", "x^2", "--at", "1"]);
    assert!(svg.starts_with("<?xml") && svg.trim_end().ends_with("</svg>"));
    let path = std::env::temp_dir().join(format!("lc-zoom-{}.svg", std::process::id()));
    let p = path.to_str().unwrap();
    assert_eq!(ok(&["zoom", "x^2", "--at", "1", "--svg", p]), "slope = 2\n");
    assert_eq!(std::fs::read_to_string(&path).unwrap(), svg);
    ok(&["conic", "--samples", "0,2,4", "--svg", p]);
    assert_eq!(std::fs::read_to_string(&path).unwrap().matches("<circle").count(), 3);
    let _ = std::fs::remove_file(&path);
}

#[test]
fn binary_end_to_end() {
    let bin = env!("CARGO_BIN_EXE_lc");
    let out = Command::new(bin).args(["diff", "x^2", "--at", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "2\npre_shadow = 2 + eps\n");
    let out = Command::new(bin)
        .args(["eval", "1/(1+x)", "--at", "x=eps"])
        .env("LC_DEPTH", "2")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8_lossy(&out.stdout), "1 - eps + O(eps^2)\n");
    let out = Command::new(bin).args(["shadow", "eps^(-1)"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = Command::new(bin).arg("nope").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
