// Pack IP template variants into a box, swap one variant, and undo.

use objchip::layout::{compose, load_templates, metrics, opt_select, render_svg, undo, BoundingBox, PlanState, Selections};

const TEMPLATES: &str = include_str!("../fixtures/templates.json");

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let library = load_templates(TEMPLATES)?;
    let selections: Selections =
        [("ecg_analyzer", "fast"), ("simulation_host", "std")].map(|(a, b)| (a.to_string(), b.to_string())).into();
    let bbox = BoundingBox { width: 120.0, height: 80.0 };

    let plan = compose(&library, &selections, bbox, 5.0)?;
    for p in &plan.placements {
        println!("{}/{} at ({}, {}) {}x{}", p.ip, p.variant, p.x, p.y, p.width, p.height);
    }
    println!("{:?}", metrics(&library, &plan));

    let state = PlanState::new(&library, selections, bbox, 5.0)?;
    let (swapped, deltas) = opt_select(&library, &state, "ecg_analyzer", "small")?;
    println!("ecg_analyzer -> small: {deltas:?}");
    let (restored, _) = undo(&library, &swapped)?;
    assert_eq!(render_svg(&restored.floorplan), render_svg(&state.floorplan));
    println!("undo restores the original plan; svg is {} bytes", render_svg(&restored.floorplan).len());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
