//! Brute-force equivalence used to cross-check the subtyping search.
//!
//! Computes the greatest simulation over the full state-pair matrix by
//! repeated elimination, instead of the goal-directed search in `subtype`.

use thiserror::Error;

use crate::session::{fold_widths, Action, SessionLts};

/// Largest input (in transitions, before folding) the oracle accepts.
pub const ORACLE_MAX_TRANSITIONS: usize = 14;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("oracle limited to {limit} transitions, got {got}")]
pub struct OracleTooLarge {
    pub limit: usize,
    pub got: usize,
}

pub fn oracle_equivalent(a: &SessionLts, b: &SessionLts) -> Result<bool, OracleTooLarge> {
    for s in [a, b] {
        if s.transition_count() > ORACLE_MAX_TRANSITIONS {
            return Err(OracleTooLarge { limit: ORACLE_MAX_TRANSITIONS, got: s.transition_count() });
        }
    }
    let a = fold_widths(a).session;
    let b = fold_widths(b).session;
    Ok(oracle_subtype(&a, &b) && oracle_subtype(&b, &a))
}

/// `sub <: sup` via the greatest fixed point of the simulation conditions.
pub fn oracle_subtype(sub: &SessionLts, sup: &SessionLts) -> bool {
    let (n, m) = (sub.num_states(), sup.num_states());
    let mut rel = vec![vec![true; m]; n];
    loop {
        let mut changed = false;
        for s in 0..n {
            for t in 0..m {
                if rel[s][t] && !locally_ok(sub, sup, s, t, &rel) {
                    rel[s][t] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            return rel[0][0];
        }
    }
}

fn is_output(a: Action) -> bool {
    matches!(a, Action::Send | Action::Choose)
}

fn locally_ok(sub: &SessionLts, sup: &SessionLts, s: usize, t: usize, rel: &[Vec<bool>]) -> bool {
    let xs = sub.outgoing(s);
    let ys = sup.outgoing(t);
    if xs.is_empty() || ys.is_empty() {
        return xs.is_empty() && ys.is_empty();
    }
    let out_x = xs.iter().all(|x| is_output(x.label.action));
    let out_y = ys.iter().all(|y| is_output(y.label.action));
    if out_x != out_y {
        return false;
    }
    let same = |x: &crate::session::Transition, y: &crate::session::Transition| {
        is_output(x.label.action) == is_output(y.label.action)
            && x.label.message == y.label.message
            && x.label.payload.width() == y.label.payload.width()
    };
    if out_x {
        xs.iter().all(|x| ys.iter().any(|y| same(x, y) && rel[x.to][y.to]))
    } else {
        ys.iter().all(|y| xs.iter().any(|x| same(x, y) && rel[x.to][y.to]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::session::{Label, Proto};

    #[test]
    fn extra_input_branch_is_not_equivalent() {
        let t1 = SessionLts::linear([Label::recv("A", 8), Label::send("B", 8), Label::send("C", 8)]).unwrap();
        let u1 = SessionLts::from_proto(&Proto::Branch(vec![
            (Label::recv("A", 8), Proto::seq([Label::send("B", 8), Label::send("C", 8)])),
            (Label::recv("E", 8), Proto::End),
        ]))
        .unwrap();
        assert!(oracle_subtype(&u1, &t1));
        assert!(!oracle_subtype(&t1, &u1));
        assert_eq!(oracle_equivalent(&t1, &u1), Ok(false));
        assert_eq!(oracle_equivalent(&u1, &u1), Ok(true));
    }

    #[test]
    fn size_bound() {
        let big = SessionLts::linear((0..15).map(|i| Label::send(format!("m{i}"), 8))).unwrap();
        assert_eq!(
            oracle_equivalent(&big, &big),
            Err(OracleTooLarge { limit: ORACLE_MAX_TRANSITIONS, got: 15 })
        );
    }
}
