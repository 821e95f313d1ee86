// Writes fig1.csv .. fig5.csv to a temporary directory and checks the
// landmarks read back from the rows.

use mixport::figures::{check_landmarks, figures, write_figures};

fn main() {
    let dir = std::env::temp_dir().join(format!("mixport-figures-{}", std::process::id()));
    for path in write_figures(&dir).expect("write figures") {
        println!("wrote {}", path.display());
    }
    for l in check_landmarks(&figures().expect("figures")).expect("landmarks") {
        println!(
            "{} {}: {}",
            if l.passed { "ok  " } else { "FAIL" },
            l.name,
            l.detail
        );
        assert!(l.passed);
    }
    std::fs::remove_dir_all(&dir).expect("cleanup");
}
