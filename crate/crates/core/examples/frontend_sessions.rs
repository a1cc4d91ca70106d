// Parse an object program, check it is admissible, and derive the
// protocol each object pair speaks.

use objchip::frontend::{extract_sessions, parse_program, validate_constraints};
use objchip::session::dual;

const PROGRAM: &str = include_str!("../fixtures/ecg.oo");
const INVALID: &str = include_str!("../fixtures/ecg_invalid.oo");

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let graph = parse_program(PROGRAM)?;
    println!("objects: {}", graph.objects.iter().map(|o| format!("{}: {}", o.name, o.class)).collect::<Vec<_>>().join(", "));
    for e in &graph.edges {
        println!("edge #{} {} -> {}.{}", e.order, e.caller, e.callee, e.method);
    }
    assert!(validate_constraints(&graph, PROGRAM).is_empty());

    for ((caller, callee), session) in extract_sessions(&graph)? {
        println!("{caller} sees {callee} as  {session}");
        println!("{callee} sees {caller} as  {}", dual(&session));
    }

    let bad = parse_program(INVALID)?;
    println!("rejected program:");
    for v in validate_constraints(&bad, INVALID) {
        println!("  {v}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
