use std::collections::HashSet;

use crate::session::{Label, Polarity, SessionLts, StateId};

/// Outcome of one subtyping query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubtypeResult {
    pub holds: bool,
    /// Lexicographically least label path leading to the first violated
    /// rule; empty when `holds`.
    pub witness: Vec<Label>,
}

/// Decide `sub <: sup` by searching for a simulation relation.
///
/// Output states are covariant (every send or choice of `sub` must be
/// offered by `sup`), input states are contravariant (`sub` must accept
/// every receive or offer branch of `sup`), and terminals only relate to
/// terminals. Labels match on polarity, message and width.
pub fn subtype(sub: &SessionLts, sup: &SessionLts) -> SubtypeResult {
    let mut proven = HashSet::new();
    let mut path = Vec::new();
    match check(sub, sup, sub.initial(), sup.initial(), &mut path, &mut proven) {
        Ok(()) => SubtypeResult { holds: true, witness: Vec::new() },
        Err(witness) => SubtypeResult { holds: false, witness },
    }
}

fn check(
    sub: &SessionLts,
    sup: &SessionLts,
    s: StateId,
    t: StateId,
    path: &mut Vec<Label>,
    proven: &mut HashSet<(StateId, StateId)>,
) -> Result<(), Vec<Label>> {
    if proven.contains(&(s, t)) {
        return Ok(());
    }
    let sub_out = sub.outgoing(s);
    let sup_out = sup.outgoing(t);
    let fail = |path: &Vec<Label>, at: &Label| {
        let mut w = path.clone();
        w.push(at.clone());
        Err(w)
    };

    match (sub_out.first(), sup_out.first()) {
        (None, None) => {}
        (None, Some(u)) => return fail(path, &u.label),
        (Some(u), None) => return fail(path, &u.label),
        (Some(a), Some(b)) if a.label.polarity() != b.label.polarity() => {
            return fail(path, if a.label <= b.label { &a.label } else { &b.label });
        }
        (Some(a), Some(_)) => {
            // Covariant side iterates its own labels, contravariant side iterates the supertype's.
            let (driver, other, driver_is_sub) = match a.label.polarity() {
                Polarity::Output => (sub_out, sup_out, true),
                Polarity::Input => (sup_out, sub_out, false),
            };
            for d in driver {
                let key = d.label.match_key();
                let Some(m) = other.iter().find(|o| o.label.match_key() == key) else {
                    return fail(path, &d.label);
                };
                let (next_s, next_t) = if driver_is_sub { (d.to, m.to) } else { (m.to, d.to) };
                path.push(d.label.clone());
                let r = check(sub, sup, next_s, next_t, path, proven);
                path.pop();
                r?;
            }
        }
    }
    proven.insert((s, t));
    Ok(())
}
