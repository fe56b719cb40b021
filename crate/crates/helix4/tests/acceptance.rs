//! End-to-end acceptance run: executes every built-in verification criterion
//! and prints one line per criterion. Run with `cargo test --test acceptance
//! -- --nocapture` to see the lines.

use helix4::verify::{run_all, VerifyConfig};

#[test]
fn acceptance_criteria() {
    let cfg = VerifyConfig {
        bin: Some(env!("CARGO_BIN_EXE_helix4").into()),
        ..VerifyConfig::default()
    };
    let summary = run_all(&cfg);
    assert_eq!(summary.criteria.len(), 10);
    for c in &summary.criteria {
        println!(
            "criterion {:2} {:<24} {}{}",
            c.id,
            c.name,
            if c.passed { "pass" } else { "FAIL" },
            if c.passed { String::new() } else { format!(": {}", c.details) }
        );
    }
    assert!(
        summary.all_passed,
        "failed criteria: {}",
        summary
            .criteria
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{} ({})", c.name, c.details))
            .collect::<Vec<_>>()
            .join(", ")
    );
}

#[test]
fn summary_matches_schema() {
    let cfg = VerifyConfig { only: Some("reparameterization".into()), ..VerifyConfig::default() };
    let summary = run_all(&cfg);
    let schema: serde_json::Value =
        serde_json::from_str(helix4::verify::VERIFY_SUMMARY_SCHEMA).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let instance = serde_json::to_value(&summary).unwrap();
    assert!(validator.is_valid(&instance));
}
