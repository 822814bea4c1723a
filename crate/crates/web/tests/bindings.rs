use bcontinuum_web::{conic_json, differentiate_json, evaluate_json};

#[test]
fn derivative_with_plot() {
    let v = differentiate_json("x^3", "2", 0).unwrap();
    assert_eq!(v["derivative"], "12");
    assert_eq!(v["pre_shadow"], "12 + 6*eps + eps^2");
    let svg = v["svg"].as_str().unwrap();
    assert!(svg.starts_with("<?xml") && svg.contains("</svg>"));
    assert!(differentiate_json("x^2", "two", 0).unwrap_err().contains("not a rational"));
    assert!(differentiate_json("1/x", "0", 0).is_err());
}

#[test]
fn conic_points() {
    let v = conic_json("0, 2, 4", "eps^(-1)").unwrap();
    assert_eq!(v["equation"], "y0 = 1/4*x0^2 - 1");
    assert_eq!(v["points"], serde_json::json!([["0", "-1"], ["2", "0"], ["4", "3"]]));
    assert_eq!(v["svg"].as_str().unwrap().matches("<circle").count(), 3);
    assert!(conic_json("1", "5").is_err());
}

#[test]
fn evaluation() {
    let v = evaluate_json("1/(1+x)", "x=eps", 3).unwrap();
    assert_eq!(v["value"], "1 - eps + eps^2 + O(eps^3)");
    assert_eq!(v["shadow"], "1");
    assert_eq!(v["residue"], "negative");
    let v = evaluate_json("x", "x=eps^(-1)", 0).unwrap();
    assert!(v["shadow"].is_null());
    assert!(evaluate_json("x", "x", 0).is_err());
}
