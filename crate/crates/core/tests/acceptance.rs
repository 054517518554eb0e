//! Runs every acceptance criterion, prints one PASS/FAIL line each and fails if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use airy4::verify::{Verifier, VerifyConfig};

fn main() -> ExitCode {
    // `cargo test -- --list` and filters are not meaningful here; honour --list only.
    if std::env::args().any(|a| a == "--list") {
        for id in 1..=11 {
            println!("criterion_{id:02}: test");
        }
        return ExitCode::SUCCESS;
    }
    let v = Verifier::new(VerifyConfig::default());
    let mut failed = Vec::new();
    for id in 1..=11 {
        let t = Instant::now();
        let r = v.run(id);
        println!("{}  [{:.1?}]", r.line(), t.elapsed());
        if !r.passed {
            failed.push(id);
        }
    }
    println!("\nacceptance: {} passed, {} failed {:?}", 11 - failed.len(), failed.len(), failed);
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
