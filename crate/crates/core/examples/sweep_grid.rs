// Sweeps the rank-2 family over p1 and |y| and prints the CSV.

use mixport::sweep::{sweep, SweepConfig};
use mixport::ChannelSpec;

fn main() {
    let result = sweep(&SweepConfig {
        channel: ChannelSpec::MemsRank2 { p1: 0.5 },
        params: vec![0.5, 0.75, 1.0],
        x: 0.5,
        abs_ys: vec![0.0, 0.25, 0.5],
        phases: vec![0.0, 2.0],
    })
    .expect("sweep");
    print!("{}", result.to_csv());
    assert!(result.max_abs_err() < 1e-12);
}
