//! One line per acceptance criterion; fails if any hard check fails.

use kappa::verify::{all_hard_pass, Suite, DEFAULT_SEED};

fn main() {
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data");
    let seed = std::env::var("KAPPA_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_SEED);
    let checks = Suite::new(data, seed).run();
    for c in &checks {
        println!("{}", c.line());
    }
    if !all_hard_pass(&checks) {
        eprintln!("acceptance: hard checks failed");
        std::process::exit(1);
    }
}
