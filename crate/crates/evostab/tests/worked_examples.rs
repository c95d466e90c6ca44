//! End-to-end runs of the two worked-example verification suites.

use evostab::error::Error;
use evostab::examples::{run_example1_suite, run_example2_suite};
use evostab::report::{CheckRecord, CheckStatus};

fn assert_all_green(recs: &[CheckRecord], label: &str) {
    assert!(!recs.is_empty(), "{label}: suite produced no records");
    for rec in recs {
        assert!(
            matches!(rec.status, CheckStatus::Pass | CheckStatus::Info),
            "{label}: check '{}' reported {:?}: {}",
            rec.name,
            rec.status,
            rec.detail
        );
    }
}

fn assert_has(recs: &[CheckRecord], names: &[&str], label: &str) {
    for want in names {
        assert!(
            recs.iter().any(|r| r.name == *want),
            "{label}: expected a check named '{want}'"
        );
    }
}

/// The alternating-rate family passes every check of its suite at the
/// standard window length.
#[test]
fn alternating_rate_suite_is_green() {
    let recs = run_example1_suite::<f64>(512).unwrap();
    assert_all_green(&recs, "alternating-rate");
    assert_has(
        &recs,
        &[
            "closed-form-products",
            "integer-growth-table",
            "admissible-floor-scan",
            "adapted-ratio-bound",
            "even-start-slope",
            "nonuniform-at-zero",
        ],
        "alternating-rate",
    );
}

/// The oscillatory family passes every check of its suite for the canonical
/// exponent pair, with the window length chosen automatically.
#[test]
fn oscillatory_suite_is_green() {
    let recs = run_example2_suite::<f64>(-0.5, -0.2, 40, None).unwrap();
    assert_all_green(&recs, "oscillatory");
    assert_has(
        &recs,
        &[
            "rise-over-peak-identity",
            "witness-slot-in-rise",
            "unit-step-sandwich",
            "growth-gap-increasing",
            "growth-gap-approximation",
            "witness-amplitude-bounded",
            "witness-escapes-lower-space",
            "witness-vanishes-in-upper-space",
            "witness-slot-norm-cross-check",
            "floor-not-admissible",
            "exponent-scan-classification",
        ],
        "oscillatory",
    );
}

/// Windows too short to host a single witness peak are refused with the
/// horizon error rather than producing weakened checks.
#[test]
fn short_windows_are_refused() {
    match run_example2_suite::<f64>(-0.5, -0.2, 40, Some(16)) {
        Err(Error::HorizonTooSmall(_)) => {}
        other => panic!("expected a horizon error, got {other:?}"),
    }
    match run_example1_suite::<f64>(8) {
        Err(Error::HorizonTooSmall(_)) => {}
        other => panic!("expected a horizon error, got {other:?}"),
    }
}

/// Exponent pairs outside `-1 < alpha < beta < 0` are configuration errors.
#[test]
fn misordered_exponents_are_rejected() {
    assert!(run_example2_suite::<f64>(-0.2, -0.5, 40, None).is_err());
    assert!(run_example2_suite::<f64>(-1.5, -0.2, 40, None).is_err());
    assert!(run_example2_suite::<f64>(-0.5, 0.0, 40, None).is_err());
}
