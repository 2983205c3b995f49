//! Acceptance suite at the quick tier. Prints one line per criterion and
//! exits nonzero if any fails.

use symprog::verify::{checks, Tier};

fn main() {
    let mut failed = 0;
    for check in checks() {
        let report = check.run(Tier::Quick);
        println!("{report}");
        failed += usize::from(!report.passed);
    }
    println!("acceptance: {} passed, {failed} failed", checks().len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
