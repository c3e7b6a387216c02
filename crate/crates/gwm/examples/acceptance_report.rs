//! Run the quick acceptance suite and print the table.

use gwm::verify::{run_suite, Suite};

fn main() {
    let report = run_suite(Suite::Quick);
    for c in &report.checks {
        println!("{c}");
    }
    println!("all passed: {}", report.all_passed);
}
