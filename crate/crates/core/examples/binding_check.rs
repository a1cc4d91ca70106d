// Bind a program object to a hardware FSM. The analyzer's start/done
// handshake has no software counterpart, so it is contracted away.

use std::collections::BTreeSet;

use objchip::equiv::check_binding;
use objchip::frontend::{object_session, parse_program};
use objchip::hw::candidates_from_text;
use objchip::session::WidthPolicy;

const PROGRAM: &str = include_str!("../fixtures/ecg.oo");
const ANALYZER: &str = include_str!("../fixtures/ecg_analyzer_ctrl.json");
const MUTATED: &str = include_str!("../fixtures/ecg_analyzer_mutated.json");

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let graph = parse_program(PROGRAM)?;
    let software = object_session(&graph, "analyzer", &WidthPolicy::default())?.ok_or("analyzer takes part in no call")?;
    println!("analyzer session: {software}");

    let candidates = candidates_from_text(ANALYZER)?;
    let filter: BTreeSet<String> = ["start", "done"].map(String::from).into();
    println!("no filter:   {}", check_binding(&software, &candidates, &BTreeSet::new())?);
    println!("start, done: {}", check_binding(&software, &candidates, &filter)?);
    println!("mutated:     {}", check_binding(&software, &candidates_from_text(MUTATED)?, &filter)?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
