//! Runs every acceptance criterion and prints one line per criterion.

use std::process::ExitCode;

use cyclevol::acceptance::{render, run_all};

fn main() -> ExitCode {
    let results = run_all();
    for c in &results {
        println!("{}", render(c));
    }
    let failed = results.iter().filter(|c| !c.passed).count();
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
