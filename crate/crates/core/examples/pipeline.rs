// Run a whole project: admissibility, protocol checks, interconnect and
// floorplan. The mutated project stops at the protocol check.

use std::path::Path;

use objchip::project::{load_project, run_pipeline};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    for name in ["ecg_project.json", "ecg_project_mutated.json"] {
        let project = load_project(&fixtures.join(name))?;
        let report = run_pipeline(&project, &fixtures)?;
        println!("{name}: {:?} (exit {})", report.status, report.exit_code());
        for c in &report.checks {
            println!("  {} <-> {}: {} {}", c.object, c.ip, c.outcome.name(), c.witness.join(" "));
        }
        if let Some(sim) = &report.interconnect {
            println!("  interconnect: {} cycles, {:.4} us", sim.total_cycles, sim.latency_us);
        }
        match &report.floorplan {
            Some(plan) => println!("  floorplan fit {} utilization {:.2}", plan.fit, plan.utilization),
            None => println!("  no floorplan"),
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
