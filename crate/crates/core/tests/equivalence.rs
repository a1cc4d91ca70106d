use std::collections::BTreeSet;

use objchip::equiv::{
    equivalent, generate_scenario, generate_suite, oracle_equivalent, subtype, Direction, Expected, Mutation, Outcome,
    CONTROL_SIGNALS, ORACLE_MAX_TRANSITIONS,
};
use objchip::session::{prune_communication, Label, PayloadType, SessionLts};
use proptest::prelude::*;

fn controls() -> BTreeSet<String> {
    CONTROL_SIGNALS.iter().map(|s| s.to_string()).collect()
}

#[test]
fn no_false_positives_on_seeded_suite() {
    let suite = generate_suite(11, 3000, 3..=20).unwrap();
    for s in &suite {
        let v = equivalent(&s.left, &s.right);
        match s.expected {
            Expected::NonEq => assert_ne!(v.outcome, Outcome::Equivalent, "{:?} seed {}", s.mutation, s.seed),
            Expected::Eq => assert_eq!(v.outcome, Outcome::Equivalent, "{:?} seed {}", s.mutation, s.seed),
            Expected::EqWithFilter => {
                assert_ne!(v.outcome, Outcome::Equivalent);
                let pruned = prune_communication(&s.right, &controls()).unwrap();
                assert_eq!(equivalent(&s.left, &pruned).outcome, Outcome::Equivalent);
            }
        }
        if !v.outcome.is_equivalent() {
            assert!(!v.witness.is_empty());
        }
    }
}

#[test]
fn oracle_agrees_on_small_scenarios() {
    let mut checked = 0;
    for seed in 0..200 {
        for m in Mutation::ALL {
            for len in 3..=8 {
                let s = generate_scenario(seed, len, m).unwrap();
                if s.transition_count() > ORACLE_MAX_TRANSITIONS {
                    continue;
                }
                let fast = equivalent(&s.left, &s.right).outcome.is_equivalent();
                assert_eq!(oracle_equivalent(&s.left, &s.right).unwrap(), fast, "{s:?}");
                checked += 1;
            }
        }
    }
    assert!(checked >= 500, "only {checked} scenarios in oracle range");
}

#[test]
fn verdict_symmetry() {
    for seed in 0..100 {
        for m in Mutation::ALL {
            let s = generate_scenario(seed, 6, m).unwrap();
            let ab = equivalent(&s.left, &s.right).outcome;
            let ba = equivalent(&s.right, &s.left).outcome;
            match ab {
                Outcome::SubtypeOnly(d) => assert_eq!(ba, Outcome::SubtypeOnly(d.flip())),
                other => assert_eq!(ba, other),
            }
        }
    }
}

#[test]
fn subtype_transitivity_spot_check() {
    let mut triples = 0;
    for seed in 0..150 {
        let a = generate_scenario(seed, 4, Mutation::Branching).unwrap();
        let b = generate_scenario(seed, 4, Mutation::None).unwrap();
        let sessions = [&a.left, &a.right, &b.left, &b.right];
        for x in sessions {
            for y in sessions {
                for z in sessions {
                    if subtype(x, y).holds && subtype(y, z).holds {
                        assert!(subtype(x, z).holds);
                        triples += 1;
                    }
                }
            }
        }
    }
    assert!(triples > 0);
}

#[test]
fn direction_flip_is_involutive() {
    assert_eq!(Direction::SoftwareSubHardware.flip().flip(), Direction::SoftwareSubHardware);
}

fn linear_session() -> impl Strategy<Value = Vec<(bool, u8, u32)>> {
    prop::collection::vec((any::<bool>(), 0u8..4, prop::sample::select(vec![8u32, 16, 32, 64])), 1..10)
}

fn to_labels(steps: &[(bool, u8, u32)]) -> Vec<Label> {
    steps.iter()
        .map(|(out, m, w)| {
            let msg = format!("m{m}");
            if *out {
                Label::send(msg, *w)
            } else {
                Label::recv(msg, *w)
            }
        })
        .collect()
}

proptest! {
    #[test]
    fn reflexive_on_generated(seed in 0u64..10_000, len in 3usize..=20, m in 0usize..6) {
        let s = generate_scenario(seed, len, Mutation::ALL[m]).unwrap();
        prop_assert!(subtype(&s.left, &s.left).holds);
        prop_assert!(subtype(&s.right, &s.right).holds);
        prop_assert_eq!(equivalent(&s.right, &s.right).outcome, Outcome::Equivalent);
    }

    #[test]
    fn beat_splitting_preserves_equivalence(steps in linear_session(), idx in any::<prop::sample::Index>(), beats_pow in 1u32..4) {
        let labels = to_labels(&steps);
        let i = idx.index(labels.len());
        let w = labels[i].width().unwrap();
        let beats = 1u32 << beats_pow;
        prop_assume!(w % beats == 0);
        // Splitting next to a same-message neighbour would merge differently.
        prop_assume!(i == 0 || labels[i - 1].message != labels[i].message || labels[i - 1].action != labels[i].action);
        prop_assume!(i + 1 == labels.len() || labels[i + 1].message != labels[i].message || labels[i + 1].action != labels[i].action);
        let mut split = labels.clone();
        let beat = Label::new(labels[i].action, labels[i].message.clone(), PayloadType::int(w / beats));
        split.splice(i..=i, std::iter::repeat(beat).take(beats as usize));
        let a = SessionLts::linear(labels).unwrap();
        let b = SessionLts::linear(split).unwrap();
        prop_assert_eq!(equivalent(&a, &b).outcome, Outcome::Equivalent);
    }
}
