//! Runs the full verification suite and prints one pass/fail line per
//! criterion (visible with `--nocapture`, or on failure).

use monogrid::acceptance::{run_suite, CriterionOutcome};
use monogrid::exec::Exec;

#[test]
fn acceptance_suite() {
    let outcomes: Vec<CriterionOutcome> = run_suite(None, Exec::Auto);
    assert_eq!(outcomes.len(), 11);
    let mut failed = 0;
    for outcome in &outcomes {
        println!("{}", outcome.line());
        if !outcome.passed {
            failed += 1;
        }
    }
    assert_eq!(
        failed,
        0,
        "{failed} criteria failed:\n{}",
        outcomes
            .iter()
            .filter(|o| !o.passed)
            .map(|o| o.line())
            .collect::<Vec<_>>()
            .join("\n")
    );
}
