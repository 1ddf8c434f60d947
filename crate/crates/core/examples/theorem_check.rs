//! Checks the embedding laws on random terms over random signatures.
//!
//!     cargo run --example theorem_check -- 7 500

use fockgram::theorem::theorem_check;

fn main() {
    let mut args = std::env::args().skip(1);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(42);
    let cases = args.next().and_then(|s| s.parse().ok()).unwrap_or(1000);
    let report = theorem_check(seed, cases);
    print!("{report}");
    if !report.ok() {
        std::process::exit(1);
    }
}
