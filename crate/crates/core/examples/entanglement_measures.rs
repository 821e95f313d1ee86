// Concurrence, smallest partial-transpose eigenvalue and linear entropy of
// the catalog channels.

use mixport::entanglement::{concurrence, linear_entropy, min_pt_eigenvalue};
use mixport::ChannelSpec;

fn main() {
    let specs = [
        "meps",
        "mems2:p1=0.6",
        "mems3:p1=0.4",
        "mems4:p1=0.8",
        "werner:r=0.3333333333333333",
        "werner:r=0.8",
    ];
    println!(
        "{:<30} {:>12} {:>14} {:>10}",
        "channel", "concurrence", "min PT eig", "S_L"
    );
    for s in specs {
        let spec: ChannelSpec = s.parse().expect("channel text");
        let state = spec.build().expect("channel").state;
        println!(
            "{:<30} {:>12.6} {:>14.6} {:>10.6}",
            s,
            concurrence(&state).expect("two qubits"),
            min_pt_eigenvalue(&state).expect("two qubits"),
            linear_entropy(&state)
        );
    }
}
