use std::process::ExitCode;

use utstar::acceptance::{all_pass, run_all, AcceptanceConfig};

fn main() -> ExitCode {
    let results = run_all(&AcceptanceConfig::default());
    for r in &results {
        println!("{r}");
    }
    let passed = results.iter().filter(|r| r.passed).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if all_pass(&results) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
