//! Runs every acceptance criterion at its stated tolerance and prints one
//! pass/fail line per criterion. Built without the libtest harness so the
//! lines are never captured.

use fellb_core::suite::{criteria, run_criterion, Context, Status, SuiteConfig};

fn main() {
    let ctx = Context::new(&SuiteConfig::default()).expect("default caps are within limits");
    let mut failed = Vec::new();
    for (i, c) in criteria().iter().enumerate() {
        let r = run_criterion(c, &ctx);
        let verdict = if r.status == Status::Pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {}: {verdict} residual={:.3e} ({:.0} ms) {}",
            i + 1,
            r.name,
            r.residual,
            r.ms,
            r.detail
        );
        if r.status != Status::Pass {
            failed.push(r.name);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria().len());
}
