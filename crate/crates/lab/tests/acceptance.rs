//! Acceptance gate: runs every criterion at its stated tolerance and
//! prints one PASS/FAIL line per criterion. Criterion 9 reruns the quick
//! suite end to end and times it.

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use beltrami_lab::suite::{self, CriterionResult, Level};

fn report(out: &mut impl Write, c: &CriterionResult) {
    let _ = writeln!(out, "{}", c.summary_line());
    for check in &c.checks {
        let _ = writeln!(
            out,
            "    {} {} = {:e} ({:?} {:e})",
            if check.passed { "ok  " } else { "FAIL" },
            check.name,
            check.value,
            check.comparison,
            check.threshold
        );
    }
    for n in &c.notes {
        let _ = writeln!(out, "    note: {n}");
    }
}

fn main() -> ExitCode {
    let mut out = std::io::stdout();
    let scratch = tempfile::tempdir().expect("scratch directory");
    let mut results = vec![
        suite::criterion_1(),
        suite::criterion_2(),
        suite::criterion_3(),
        suite::criterion_4(),
        suite::criterion_5(),
        suite::criterion_6(),
        suite::criterion_7(),
        suite::criterion_8(),
    ];
    for c in &results {
        report(&mut out, c);
    }

    let start = Instant::now();
    let quick = suite::verify_suite(Level::Quick, scratch.path());
    let quick_seconds = start.elapsed().as_secs_f64();
    let mut c9 = quick.criteria.last().cloned().expect("suite ends with criterion 9");
    c9.checks.push(beltrami_lab::Assertion::equal("quick_suite_passed", f64::from(u8::from(quick.passed)), 1.0));
    c9.checks.push(beltrami_lab::Assertion::at_most("quick_suite_wall_seconds", quick_seconds, 300.0));
    c9.passed = c9.checks.iter().all(|c| c.passed);
    c9.notes.push(format!("quick suite ran {} criteria in {quick_seconds:.1} s", quick.criteria.len()));
    report(&mut out, &c9);
    results.push(c9);

    let failed = results.iter().filter(|c| !c.passed).count();
    let _ = writeln!(out, "acceptance: {} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
