//! Full acceptance battery: every headline claim, full windows, wall-clock
//! budgets enforced. Prints one line per criterion so a test log doubles as
//! the acceptance report.

use shiftlab::suite::{all_passed, run_suite, SuiteConfig};

#[test]
fn acceptance_battery() {
    let cfg = SuiteConfig::default();
    let report = run_suite(&cfg);
    for o in &report.outcomes {
        let tag = if o.passed {
            "PASS"
        } else if o.conclusive {
            "FAIL"
        } else {
            "INCONCLUSIVE"
        };
        println!(
            "[{tag}] criterion {:>2} {:<34} {:>6} ms (budget {:>6} ms) — {}",
            o.id, o.name, o.millis, o.budget_ms, o.detail
        );
    }
    assert_eq!(report.outcomes.len(), 14, "expected all fourteen criteria to report");
    assert!(
        all_passed(&report),
        "acceptance criteria failed: {:?}",
        report
            .outcomes
            .iter()
            .filter(|o| !o.passed)
            .map(|o| format!("#{} {}: {}", o.id, o.name, o.detail))
            .collect::<Vec<_>>()
    );
}
