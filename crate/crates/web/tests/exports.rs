use fqmoments_web::{character_table_json, moment_scan_json, reciprocity_json};
use serde_json::Value;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn character_table_has_phi_rows() {
    let t = parse(&character_table_json(3, "T^2+1").unwrap());
    let chars = t["characters"].as_array().unwrap();
    assert_eq!(chars.len(), 8);
    assert!(chars[0]["l_half_sq"].is_null());
    assert_eq!(chars.iter().filter(|c| c["primitive"] == true).count(), 7);
}

#[test]
fn moment_scan_is_seeded_and_summarized() {
    let a = moment_scan_json(3, 2, 3, 1, 5, 7).unwrap();
    assert_eq!(a, moment_scan_json(3, 2, 3, 1, 5, 7).unwrap());
    let v = parse(&a);
    assert_eq!(v["summary"]["per_degree"].as_array().unwrap().len(), 2);
    assert!(!v["rows"].as_array().unwrap().is_empty());
}

#[test]
fn reciprocity_and_its_negative_control() {
    let ok = parse(&reciprocity_json(3, "T^3+2T+1", "T+1", false).unwrap());
    assert_eq!(ok["passed"], true);
    let control = parse(&reciprocity_json(3, "T^3+2T+1", "T+1", true).unwrap());
    assert_eq!(control["passed"], false);
}

#[test]
fn rejects_bad_input() {
    assert!(character_table_json(4, "T").is_err());
    assert!(character_table_json(3, "T^7+1").is_err());
    assert!(moment_scan_json(3, 3, 2, 1, 5, 0).is_err());
    assert!(reciprocity_json(3, "T^2", "T+1", false).is_err());
}
