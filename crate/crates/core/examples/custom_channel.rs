// A general X-shaped channel given in text form, including one whose
// measurement branch is impossible for the chosen input.

use mixport::{run, ChannelSpec, QubitState, C64};

fn main() {
    let spec: ChannelSpec = "xz:a=0.4,b=0.1,c=0.05+0.02i,d=0.1,e=0.3-0.1i"
        .parse()
        .expect("channel text");
    let input = QubitState::new(1.0, C64::new(0.0, 0.0)).expect("valid qubit");
    let result = run(&input, &spec).expect("teleport");
    println!(
        "{spec}: total probability {:.15}",
        result.total_probability()
    );
    for (o, d) in result.outcomes.iter().zip(result.distortions()) {
        println!(
            "  {:<5} p = {:.4}  distortion {:?}",
            o.outcome.label(),
            o.probability,
            d
        );
    }

    let product: ChannelSpec = "xz:a=1,b=0,c=0,d=0,e=0".parse().expect("channel text");
    let result = run(
        &QubitState::new(0.0, C64::new(0.0, 0.0)).expect("valid qubit"),
        &product,
    )
    .expect("teleport");
    for o in &result.outcomes {
        println!(
            "  {:<5} degenerate: {}",
            o.outcome.label(),
            o.is_degenerate()
        );
    }
}
