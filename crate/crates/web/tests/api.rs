use seqbf_web::api::{bf_curve, calibration_curves, correct, deviation_trace};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn curve_matches_worksheet_and_scan_values() {
    let v = parse(bf_curve(200, 0.07, "greater", "header-dropped").unwrap());
    assert_eq!(v["s"].as_array().unwrap().len(), 201);
    let seq = v["sequential"][100].as_f64().unwrap();
    assert!((seq - 88.0 / 13.0).abs() < 1e-12);
    let exact = v["exact"][100].as_f64().unwrap();
    assert!((exact - 0.083734).abs() < 1e-6);
    assert_eq!(v["sequential"][150].as_f64(), Some(201.0));
}

#[test]
fn curve_rejects_bad_input() {
    assert!(bf_curve(0, 0.07, "greater", "exact").is_err());
    assert!(bf_curve(10, 0.7, "greater", "exact").is_err());
    assert!(bf_curve(10, 0.07, "up", "exact").is_err());
    assert!(bf_curve(10, 0.07, "greater", "other").is_err());
}

#[test]
fn trace_of_small_sample() {
    let v = parse(deviation_trace("1,0,1,1", 0.2, false).unwrap());
    let r: Vec<f64> = v["deviation"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert_eq!(r, vec![0.5, 0.0, 1.0 / 6.0, 0.25]);
    assert_eq!(v["indicator"], serde_json::json!([0, 1, 1, 0]));
    assert_eq!(v["y_sum"], 2);
    assert!((v["bf10"].as_f64().unwrap() - 1.0).abs() < 1e-15);

    let c = parse(deviation_trace("1,0,1,1", 0.2, true).unwrap());
    // 1,1,1,0: deviations 0.5, 0.5, 0.5, 0.25
    assert_eq!(c["indicator"], serde_json::json!([0, 0, 0, 0]));
    assert_eq!(c["bf10"].as_f64(), Some(5.0));

    let e = deviation_trace("1\n# c\n5", 0.07, true).unwrap_err();
    assert_eq!(e, "non-binary observation at line 3");
}

#[test]
fn correction_and_curves() {
    let v = parse(correct(0.5, 6.769231).unwrap());
    assert_eq!(v["segment"], 1);
    assert!(v["bf10"].as_f64().unwrap() > 0.0);
    assert!(correct(0.05, 27.0)
        .unwrap_err()
        .contains("outside calibrated domain"));

    let c = parse(calibration_curves(0.01).unwrap());
    let rows = c["rows"].as_array().unwrap();
    let grid0 = rows
        .iter()
        .filter(|r| r["segment"] == 0 && r["source_observed"].is_null())
        .count();
    assert_eq!(grid0, 31);
    assert!(calibration_curves(0.0).is_err());
}
