// Randomized falsification of the block-matrix inequalities. Set
// MIXPORT_SEED to change the sample set.

use mixport::blockprops::{run_suite, HarnessConfig};
use mixport::cli::{resolve_seed, SEED_ENV};

fn main() {
    let env = std::env::var(SEED_ENV).ok();
    let seed = resolve_seed(None, env.as_deref()).expect("seed");
    let reports = run_suite(&HarnessConfig { seed, samples: 500 });
    for r in &reports {
        println!(
            "{:?}: {}/{} samples violate",
            r.property_id, r.violations, r.samples
        );
        for l in &r.links {
            let kind = if l.asserted { "asserted" } else { "claim" };
            println!("    [{kind}] {}: worst margin {:e}", l.link, l.worst_margin);
        }
        assert_eq!(r.asserted_violations(), 0);
    }
}
