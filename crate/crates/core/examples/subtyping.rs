// Subtyping and equivalence between two hand-written protocols, plus the
// width folding that lets a wide message match a burst of narrow ones.

use objchip::equiv::{equivalent, subtype};
use objchip::session::{fold_widths, Label, Proto, SessionLts};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    // T: receive A, then send B and C.
    let t = SessionLts::linear([Label::recv("A", 8), Label::send("B", 8), Label::send("C", 8)])?;
    // U: like T, but may also receive E and stop.
    let u = SessionLts::from_proto(&Proto::Branch(vec![
        (Label::recv("A", 8), Proto::seq([Label::send("B", 8), Label::send("C", 8)])),
        (Label::recv("E", 8), Proto::End),
    ]))?;
    println!("T = {t}");
    println!("U = {u}");
    println!("U <: T  {}", subtype(&u, &t).holds);
    let back = subtype(&t, &u);
    println!("T <: U  {} witness {:?}", back.holds, back.witness.iter().map(ToString::to_string).collect::<Vec<_>>());
    println!("equivalent(T, U) = {}", equivalent(&t, &u));

    let wide = SessionLts::linear([Label::recv("A", 16), Label::send("ack", 1)])?;
    let burst = SessionLts::linear([Label::recv("A", 8), Label::recv("A", 8), Label::send("ack", 1)])?;
    let folded = fold_widths(&burst);
    println!("{burst} folds to {} ({} fold)", folded.session, folded.folds);
    println!("equivalent = {}", equivalent(&wide, &burst));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
