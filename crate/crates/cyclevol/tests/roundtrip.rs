use cyclevol::json::{CycleClassDto, Report};
use cyclevol::{JobSpec, Settings};
use cyclevol_core::{CycleClass, VarietySpec};
use proptest::prelude::*;
use serde_json::json;

fn roundtrip(report: &Report) {
    let text = serde_json::to_string(report).unwrap();
    let back: Report = serde_json::from_str(&text).unwrap();
    assert_eq!(&back, report);
    assert_eq!(serde_json::to_string(&back).unwrap(), text);
}

fn run(job: serde_json::Value) -> Report {
    let job: JobSpec = serde_json::from_value(job).unwrap();
    job.run(&Settings::default()).unwrap().report
}

#[test]
fn every_report_kind_round_trips() {
    let jobs = [
        json!({"command": "constants", "payload": {"max_n": 6}}),
        json!({"variety": [3], "command": "bounds", "payload": {"alpha": {"codim": 2, "coeffs": ["5/2"]}, "mu": "1/3"}}),
        json!({"variety": [1, 1], "command": "volhat", "payload": {"alpha": {"codim": 1, "coeffs": ["1/3", 7]}, "check": "duality"}}),
        json!({"variety": [2], "command": "seshadri", "payload": {"b": 7, "divisor": [2]}}),
        json!({"variety": [4], "command": "wmob", "payload": {"k": 2, "sweep": "2:6"}}),
        json!({"variety": [3], "command": "mc", "payload": {"kind": "ci", "k": 1, "m": 12}}),
        json!({"command": "mc", "payload": {"kind": "perrin", "d": 9}}),
    ];
    for job in jobs {
        roundtrip(&run(job));
    }
}

#[test]
fn class_dto_is_lossless() {
    let x = VarietySpec::new(vec![2, 1]).unwrap();
    let coeffs: Vec<_> = ["-3/7", "11/2"]
        .iter()
        .map(|s| cyclevol_core::rational::parse(s).unwrap())
        .collect();
    let class = CycleClass::from_basis_coeffs(x.clone(), 1, &coeffs).unwrap();
    let dto = CycleClassDto::from_class(&class);
    let text = serde_json::to_string(&dto).unwrap();
    let back: CycleClassDto = serde_json::from_str(&text).unwrap();
    assert_eq!(back.to_class(&x).unwrap(), class);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn bounds_and_volhat_reports_round_trip(
        coeffs in prop::collection::vec((0i64..=30, 1i64..=9), 3),
        codim in 1u32..=2,
    ) {
        let x = VarietySpec::new(vec![1, 1, 1]).unwrap();
        let len = x.basis(codim).len();
        let coeffs: Vec<String> = coeffs.iter().take(len).map(|(p, q)| format!("{p}/{q}")).collect();
        let alpha = json!({"codim": codim, "coeffs": coeffs});
        roundtrip(&run(json!({"variety": [1, 1, 1], "command": "bounds", "payload": {"alpha": alpha}})));
        roundtrip(&run(json!({"variety": [1, 1, 1], "command": "volhat", "payload": {"alpha": alpha}})));
    }
}
