use serde_json::Value;
use toro_web::{analyze_germ, run_trace, toric_factor};

fn parse(s: &str) -> Value {
    serde_json::from_str(s).expect("valid JSON")
}

#[test]
fn analyze_flagship() {
    let v = parse(&analyze_germ("x1^2", "x1 x2", "x1", "y1"));
    assert_eq!(v["valid"], true);
    assert_eq!(v["subcase"], "1p1q1");
    assert_eq!(v["R_log"], "1*G1");
    assert_eq!(v["toroidal"], false);
}

#[test]
fn analyze_rejects() {
    let v = parse(&analyze_germ("x1", "x1 + x2^2", "x1", "y1"));
    assert_eq!(v["valid"], false);
    assert!(v["diagnostic"].as_str().unwrap().contains("Jacobian"));
    let v = parse(&analyze_germ("x1 +", "x2", "", ""));
    assert!(v["error"].as_str().unwrap().contains("f_y1"));
}

#[test]
fn run_flagship() {
    let v = parse(&run_trace("x1^2", "x1 x2", "x1", "y1", 0));
    assert!(v["error"].is_null());
    assert_eq!(v["atlas"]["steps"], 1);
    let kinds: Vec<&str> = v["events"].as_array().unwrap().iter().map(|e| e["kind"].as_str().unwrap()).collect();
    assert_eq!(kinds.first(), Some(&"RamificationComputed"));
    assert_eq!(kinds.last(), Some(&"Done"));
    assert!(v["dot_x"].as_str().unwrap().starts_with("digraph source"));

    let v = parse(&run_trace("x1 x2", "x1^3 x2^2", "x1, x2", "y1", 1));
    assert!(v["error"].as_str().unwrap().contains("1 steps"));
    assert!(v["atlas"].is_null());
}

#[test]
fn factor_fans() {
    let v = parse(&toric_factor(r#"{"rays": [[1,0],[0,1]]}"#, r#"{"rays": [[1,0],[1,1],[0,1]]}"#));
    assert_eq!((v["ups"].as_u64(), v["downs"].as_u64()), (Some(1), Some(0)));
    let v = parse(&toric_factor(r#"{"rays": [[1,0],[0,1]]}"#, r#"{"rays": [[1,0],[0,1],[-1,1]]}"#));
    assert!(v["error"].as_str().unwrap().contains("supports"));
    let v = parse(&toric_factor(r#"{"rays": [[1,0]]}"#, "{}"));
    assert!(v["error"].is_string());
}
