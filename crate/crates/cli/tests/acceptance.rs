//! Every acceptance criterion at its stated tolerance, one PASS/FAIL line
//! each. Exits nonzero if any criterion fails.

use landaucap::verify::criterion;

fn main() {
    let mut failed = Vec::new();
    for id in 1..=8 {
        let c = criterion(id).expect("known criterion");
        for check in &c.checks {
            println!("    {}", check.line());
        }
        println!("{}", c.summary_line());
        if !c.passed() {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 8 criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
