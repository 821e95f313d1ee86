// Where D12 and D34 cross for p1 below 1/2: bisection against the closed
// form, and the printed variant that misses the root.

use mixport::metrics::crossing_y2;
use mixport::verify::{bisect_crossing, printed_crossing_y2, CROSSING_P1};

fn main() {
    println!(
        "{:>5} {:>16} {:>16} {:>16}",
        "p1", "bisection", "1/(4(3-4p1))", "printed"
    );
    for p1 in CROSSING_P1 {
        let root = bisect_crossing(p1).expect("sign change");
        let formula = crossing_y2(p1).expect("p1 in range");
        println!(
            "{p1:>5} {root:>16.12} {formula:>16.12} {:>16.12}",
            printed_crossing_y2(p1)
        );
        assert!((root - formula).abs() < 1e-10);
    }
}
