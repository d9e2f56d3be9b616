//! One line per acceptance criterion; exits nonzero if any criterion fails.
//!
//! Tolerances and sizes are those of the criteria: containment and Gram
//! checks at 1e-9 / 1e-10 absolute (scaled by max(1, |A|max)), closed-form
//! agreement at 1e-8, saturation at 1e-9, projection identity at 1e-12,
//! fidelity fractions at 1e-12, slope window [0.4, 0.6], coverage >= 98%.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use robint::verify::{
    calibration_coverage, calibration_suite, containment_suite, dominance_suite,
    faithfulness_suite, fidelity_suite, gram_suite, lemma_suite, projection_identity_suite,
    tightness_suite, SuiteReport,
};
use robint_cli::tables::table_suite;

const SEED: u64 = 20240601;

struct Line {
    passed: bool,
    text: String,
}

fn timed(f: impl FnOnce() -> robint::Result<SuiteReport>) -> (SuiteReport, Duration) {
    let start = Instant::now();
    let report = f().expect("suite runs");
    (report, start.elapsed())
}

fn suite_line(report: &SuiteReport) -> Line {
    Line {
        passed: report.passed,
        text: report.detail.clone(),
    }
}

fn with_budget(report: &SuiteReport, elapsed: Duration, budget: Duration) -> Line {
    let in_time = elapsed < budget;
    Line {
        passed: report.passed && in_time,
        text: format!("{}; {:.2?} (budget {:?})", report.detail, elapsed, budget),
    }
}

fn calibration_line() -> Line {
    let report = calibration_suite(1000, 0.995, SEED).expect("calibration runs");
    let single = calibration_coverage(1000, 1000, 0.99, SEED).expect("calibration runs");
    let info: Vec<String> = single
        .iter()
        .map(|c| format!("{} {}/{}", c.method.name(), c.covered, c.trials))
        .collect();
    Line {
        passed: report.passed,
        text: format!(
            "{}; at per-side 0.99 for reference: {}",
            report.detail,
            info.join(", ")
        ),
    }
}

fn main() -> ExitCode {
    // libtest flags such as --nocapture are accepted and ignored
    let (containment, t1) = timed(|| containment_suite(1000, SEED));
    let (lemma, t2) = timed(|| lemma_suite(500, 200, SEED));
    let criteria: Vec<(&str, Line)> = vec![
        (
            "containment",
            with_budget(&containment, t1, Duration::from_secs(60)),
        ),
        (
            "lemma equivalence",
            with_budget(&lemma, t2, Duration::from_secs(30)),
        ),
        (
            "sdp tightness",
            suite_line(&tightness_suite(100, SEED).unwrap()),
        ),
        (
            "projection identity",
            suite_line(&projection_identity_suite(50).unwrap()),
        ),
        (
            "eigenvalue dominance",
            suite_line(&dominance_suite(50).unwrap()),
        ),
        (
            "faithfulness rate",
            suite_line(&faithfulness_suite().unwrap()),
        ),
        (
            "fidelity soundness",
            suite_line(&fidelity_suite(1000, SEED).unwrap()),
        ),
        ("table containment", suite_line(&table_suite().unwrap())),
        (
            "gram inequality",
            suite_line(&gram_suite(1000, 300, SEED).unwrap()),
        ),
        ("confidence calibration", calibration_line()),
    ];

    let mut failures = 0;
    for (k, (name, line)) in criteria.iter().enumerate() {
        if !line.passed {
            failures += 1;
        }
        println!(
            "criterion {:>2} {:<24} {}  {}",
            k + 1,
            name,
            if line.passed { "PASS" } else { "FAIL" },
            line.text
        );
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
