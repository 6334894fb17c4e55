//! Runs the eleven acceptance criteria at their stated scope and time limits.

use std::process::ExitCode;

use frobchar_core::verify::{run_criterion, Scale, DEFAULT_SEED};

fn main() -> ExitCode {
    let mut failed = 0;
    println!("acceptance suite (seed {DEFAULT_SEED})");
    for id in 1..=11 {
        let row = run_criterion(id, Scale::Small, DEFAULT_SEED).expect("criterion ids 1..=11 exist");
        println!("{row}");
        if !row.ok() {
            failed += 1;
        }
    }
    if failed == 0 {
        println!("acceptance: 11/11 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
