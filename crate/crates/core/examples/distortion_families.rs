// Simulated distortion against the closed forms for each channel family,
// at a balanced and an unbalanced input.

use mixport::metrics::{closed_form, OutcomeClass};
use mixport::{run, BellOutcome, ChannelSpec, QubitState};

fn main() {
    let specs = [
        ChannelSpec::MemsRank2 { p1: 0.7 },
        ChannelSpec::MemsRank3 { p1: 0.4 },
        ChannelSpec::MemsRank4 { p1: 0.6 },
        ChannelSpec::Werner { r: 0.5 },
    ];
    for x in [0.5, 0.8] {
        let input = QubitState::from_polar(x, 0.3, 1.1).expect("valid qubit");
        println!("input x = {x}, |y| = 0.3");
        for spec in specs {
            let family = spec.family();
            let param = spec.parameter().expect("catalog family");
            let d = run(&input, &spec).expect("teleport").distortions();
            for (k, outcome) in BellOutcome::ALL.into_iter().enumerate() {
                let expected =
                    closed_form(family, OutcomeClass::of(family, outcome), x, 0.3, param)
                        .expect("closed form");
                let got = d[k].expect("non-degenerate");
                println!(
                    "  {spec:<16} {:<5} pipeline {got:.12} closed form {expected:.12}",
                    outcome.label()
                );
                assert!((got - expected).abs() < 1e-12);
            }
        }
    }
}
