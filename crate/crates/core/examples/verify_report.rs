// Runs every verification suite with a reduced sample count and prints the
// per-check summary. Set MIXPORT_SEED to change the seed.

use mixport::cli::{resolve_seed, SEED_ENV};
use mixport::verify::{verify, VerifyConfig};

fn main() {
    let env = std::env::var(SEED_ENV).ok();
    let seed = resolve_seed(None, env.as_deref()).expect("seed");
    let report = verify(&VerifyConfig { seed, samples: 200 }).expect("verify");
    for c in &report.checks {
        let tag = match (c.passed, c.asserted) {
            (true, _) => "pass",
            (false, true) => "FAIL",
            (false, false) => "refuted",
        };
        println!("{tag:>7}  {}", c.name);
    }
    println!(
        "converse witness min eigenvalue {:e}",
        report.p1_converse_witness.min_eigenvalue
    );
    assert!(report.passed);
}
