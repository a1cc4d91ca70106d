// Read hardware FSMs (JSON and the line-oriented HDL) and list the
// protocols each one may follow.

use objchip::hw::{candidates_from_text, classify_actions, extract_candidates, parse_toy_hdl};

const ANALYZER: &str = include_str!("../fixtures/ecg_analyzer_ctrl.json");

const ADDER: &str = "
ip adder
in a 8
in b 8
out sum 8
reset S0
state S0 { if (a.valid) goto S1 }
state S1 { if (b.valid) goto S2 }
state S2 { sum.valid = 1; sum.data = total; goto S0 }
";

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for c in candidates_from_text(ANALYZER)? {
        println!("ecg_analyzer #{}: {}", c.id, c.session);
        for p in &c.paths {
            println!("    via {p}");
        }
    }

    let fsm = parse_toy_hdl(ADDER)?;
    let labeled = classify_actions(&fsm)?;
    for state in &fsm.states {
        println!("{}: {:?}", state.id, labeled.tag(&state.id));
    }
    for c in extract_candidates(&labeled)? {
        println!("adder #{}: {}", c.id, c.session);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
