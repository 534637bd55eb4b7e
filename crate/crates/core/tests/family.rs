//! The default family report as a whole.

use regideal::verify::{run_family, CheckId, CheckOptions, FamilyConfig, OpenQuestion, Severity};

#[test]
fn default_family_is_clean_and_covers_every_check() {
    let report = run_family(&FamilyConfig::default(), &CheckOptions::default()).unwrap();
    assert!(report.is_clean(), "{:?}", report.totals);
    assert!(report.totals.connected >= 25);
    let run = report.checks_run();
    for check in CheckId::ALL {
        assert!(run.contains(&check), "{check} never ran");
    }
    for d in report.rings.iter().flat_map(|r| &r.discrepancies) {
        assert_eq!(d.severity, Severity::KnownOpen);
        assert_eq!(d.open_question, Some(OpenQuestion::CenterTwoFieldsThreeFactors));
    }
}

#[test]
fn report_is_reproducible() {
    let cfg = FamilyConfig {
        seed: 7,
        count: 8,
        ..FamilyConfig::default()
    };
    let a = serde_json::to_string(&run_family(&cfg, &CheckOptions::default()).unwrap()).unwrap();
    let b = serde_json::to_string(&run_family(&cfg, &CheckOptions::default()).unwrap()).unwrap();
    assert_eq!(a, b);
}
