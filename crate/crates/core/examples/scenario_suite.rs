// Generate a seeded suite of mutated protocol pairs and count how the
// checker classifies them, with and without the control filter.

use std::collections::BTreeSet;
use std::time::Instant;

use objchip::equiv::{generate_suite, run_suite, CONTROL_SIGNALS};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let suite = generate_suite(7, 1200, 3..=20)?;
    let filter: BTreeSet<String> = CONTROL_SIGNALS.iter().map(|s| s.to_string()).collect();
    for (name, f) in [("unfiltered", BTreeSet::new()), ("filtered", filter)] {
        let t = Instant::now();
        let s = run_suite(&suite, &f);
        println!(
            "{name:>10}: {} pairs, TP {} TN {} FP {} FN {} ({:?}) in {:?}",
            s.total, s.true_positive, s.true_negative, s.false_positive, s.false_negative, s.false_negatives_by_mutation,
            t.elapsed()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
