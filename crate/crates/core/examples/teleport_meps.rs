// Teleports a mixed input over the maximally entangled channel and prints
// every branch: probability, Bob's raw state, corrected state, distortion.

use mixport::{run, ChannelSpec, QubitState, C64};

fn main() {
    let input = QubitState::new(0.7, C64::new(0.2, -0.1)).expect("valid qubit");
    let result = run(&input, &ChannelSpec::Meps).expect("teleport");
    let distortions = result.distortions();
    for (o, d) in result.outcomes.iter().zip(distortions) {
        let raw = o.bob_raw.as_ref().expect("non-degenerate");
        let corrected = o.bob_corrected.as_ref().expect("non-degenerate");
        println!("{:>5}  p = {:.3}", o.outcome.label(), o.probability);
        println!("       raw       {:?}", raw.matrix());
        println!("       corrected {:?}", corrected.matrix());
        println!("       distortion {:e}", d.unwrap());
        assert!(d.unwrap() < 1e-24);
    }
}
