use std::collections::BTreeSet;

use thiserror::Error;

use super::verdict::{equivalent, EquivalenceVerdict, Outcome};
use crate::hw::CandidateProtocol;
use crate::session::{prune_communication, SessionLts};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BindingError {
    #[error("IP has no candidate protocols to bind against")]
    NoCandidates,
}

/// Check a software session (already in the hardware's polarity) against
/// every candidate of one IP.
///
/// Messages in `control_filter` are contracted out of each candidate first.
/// The first equivalent candidate in canonical order wins; otherwise the
/// verdict is `NotEquivalent` carrying the least witness over all
/// candidates.
pub fn check_binding(
    software: &SessionLts,
    candidates: &[CandidateProtocol],
    control_filter: &BTreeSet<String>,
) -> Result<EquivalenceVerdict, BindingError> {
    if candidates.is_empty() {
        return Err(BindingError::NoCandidates);
    }
    if !control_filter.is_empty() {
        log::info!(
            "contracting control signals {:?} from {} candidate(s) of `{}`",
            control_filter,
            candidates.len(),
            candidates[0].ip
        );
    }
    let mut best: Option<EquivalenceVerdict> = None;
    for cand in candidates {
        let hardware = match prune_communication(&cand.session, control_filter) {
            Ok(pruned) => pruned,
            Err(e) => {
                log::warn!("candidate {} of `{}` cannot be pruned ({e}); comparing it unpruned", cand.id, cand.ip);
                cand.session.clone()
            }
        };
        let mut verdict = equivalent(software, &hardware);
        verdict.candidate = Some(cand.id);
        if verdict.outcome == Outcome::Equivalent {
            return Ok(verdict);
        }
        if best.as_ref().is_none_or(|b| verdict.witness < b.witness) {
            best = Some(verdict);
        }
    }
    let best = best.expect("at least one candidate was checked");
    Ok(EquivalenceVerdict { outcome: Outcome::NotEquivalent, witness: best.witness, candidate: None, folds: best.folds })
}
