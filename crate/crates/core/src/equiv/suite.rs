use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::scenario::{Expected, Mutation, Scenario};
use super::verdict::equivalent;
use crate::session::prune_communication;

/// Positive means the checker accepted the pair as equivalent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    TruePositive,
    TrueNegative,
    FalsePositive,
    FalseNegative,
}

/// Check one scenario, contracting `filter` out of the hardware side first.
/// Pairs that are equivalent only modulo control signals count as intended
/// equivalences.
pub fn classify(scenario: &Scenario, filter: &BTreeSet<String>) -> Classification {
    let hardware = if filter.is_empty() {
        scenario.right.clone()
    } else {
        prune_communication(&scenario.right, filter).unwrap_or_else(|_| scenario.right.clone())
    };
    let accepted = equivalent(&scenario.left, &hardware).outcome.is_equivalent();
    match (scenario.expected != Expected::NonEq, accepted) {
        (true, true) => Classification::TruePositive,
        (false, false) => Classification::TrueNegative,
        (false, true) => Classification::FalsePositive,
        (true, false) => Classification::FalseNegative,
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub total: usize,
    pub true_positive: usize,
    pub true_negative: usize,
    pub false_positive: usize,
    pub false_negative: usize,
    /// Mutation kinds of the false negatives, with counts.
    pub false_negatives_by_mutation: Vec<(Mutation, usize)>,
}

pub fn run_suite(scenarios: &[Scenario], filter: &BTreeSet<String>) -> SuiteSummary {
    let mut s = SuiteSummary { total: scenarios.len(), ..SuiteSummary::default() };
    let mut by_mutation = BTreeMap::new();
    for sc in scenarios {
        match classify(sc, filter) {
            Classification::TruePositive => s.true_positive += 1,
            Classification::TrueNegative => s.true_negative += 1,
            Classification::FalsePositive => s.false_positive += 1,
            Classification::FalseNegative => {
                s.false_negative += 1;
                *by_mutation.entry(sc.mutation).or_insert(0) += 1;
            }
        }
    }
    s.false_negatives_by_mutation = by_mutation.into_iter().collect();
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equiv::{generate_suite, CONTROL_SIGNALS};

    #[test]
    fn control_signals_are_the_only_false_negatives() {
        let suite = generate_suite(5, 120, 3..=6).unwrap();
        let none = run_suite(&suite, &BTreeSet::new());
        assert_eq!(none.false_positive, 0);
        assert_eq!(none.false_negatives_by_mutation, vec![(Mutation::ControlSignal, 20)]);
        let filter = CONTROL_SIGNALS.iter().map(|s| s.to_string()).collect();
        let filtered = run_suite(&suite, &filter);
        assert_eq!((filtered.false_positive, filtered.false_negative), (0, 0));
        assert_eq!(filtered.true_positive + filtered.true_negative, 120);
    }
}
