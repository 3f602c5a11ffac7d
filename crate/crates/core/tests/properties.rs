//! Module invariants exercised on random inputs: structural-operator
//! algebra, language preservation of the subset construction, stability
//! laws of the trace property, and zone-kernel properties.

mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use niva::model::{
    hide, is_deterministic, restrict, untime, Action, Atom, ClockId, Label, Rel,
};
use niva::monitor::timed_language_included;
use niva::synthesis::Outcome;
use niva::untimed::{check_snni_untimed, determinize, language_included};
use niva::zone::Zone;

#[test]
fn hide_and_restrict_commute_with_untime() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for a in [niva::fixtures::ag(), niva::fixtures::aj(), niva::fixtures::k_aut()] {
        let l = a.alphabet.high.clone();
        let via_untime = hide(&untime(&a), &l).unwrap();
        let via_hide = untime(&hide(&a, &l).unwrap());
        assert_eq!(via_untime.edges, via_hide.edges);
        let via_untime = restrict(&untime(&a), &l).unwrap();
        let via_restrict = untime(&restrict(&a, &l).unwrap());
        assert_eq!(via_untime.edges, via_restrict.edges);
    }
    for _ in 0..100 {
        let a = common::random_nfa(&mut rng, 5, true);
        let mut l = BTreeSet::new();
        if rng.gen_bool(0.7) {
            l.insert(Action::new("l1"));
        }
        if rng.gen_bool(0.5) {
            l.insert(Action::new("h"));
        }
        let lhs = untime(&hide(&a, &l).unwrap());
        let rhs = hide(&untime(&a), &l).unwrap();
        assert_eq!(lhs.edges, rhs.edges);
    }
}

#[test]
fn restriction_is_a_sub_behaviour_of_hiding() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..200 {
        let a = common::random_nfa(&mut rng, 5, true);
        let l: BTreeSet<Action> = if rng.gen_bool(0.5) {
            a.alphabet.high.clone()
        } else {
            BTreeSet::from([Action::new("l1")])
        };
        let restricted = restrict(&a, &l).unwrap();
        let hidden = hide(&a, &l).unwrap();
        // Edge sets match modulo relabeling...
        assert!(restricted.edges.len() <= hidden.edges.len());
        for e in &restricted.edges {
            assert!(hidden
                .edges
                .iter()
                .any(|f| f.source == e.source && f.target == e.target));
        }
        // ...and so do the languages.
        let (included, cex) = language_included(&restricted, &hidden).unwrap();
        assert!(included, "restricted word escaped the hiding: {cex:?}");
    }
}

#[test]
fn neutral_product_preserves_the_language() {
    for a in [niva::fixtures::aa(), niva::fixtures::ak_family(2), niva::fixtures::k_aut()] {
        let padded = niva::timed::neutral_operand(&a).unwrap();
        if a.is_clock_free() {
            let (fwd, _) = language_included(&a, &padded).unwrap();
            let (bwd, _) = language_included(&padded, &a).unwrap();
            assert!(fwd && bwd);
        } else {
            // The region graphs are isomorphic in size; the languages agree
            // by mutual inclusion when the operand is deterministic.
            let ra = niva::region_graph::build_region_graph(&a);
            let rp = niva::region_graph::build_region_graph(&padded);
            assert_eq!(ra.node_count(), rp.node_count());
            if is_deterministic(&a).map(|c| c.deterministic).unwrap_or(false) {
                let (fwd, _) = timed_language_included(&a, &padded).unwrap();
                let (bwd, _) = timed_language_included(&padded, &a).unwrap();
                assert!(fwd && bwd);
            }
        }
    }
}

#[test]
fn restriction_cannot_create_nondeterminism() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut checked = 0;
    for _ in 0..300 {
        let a = common::random_nfa(&mut rng, 5, false);
        if !is_deterministic(&a).unwrap().deterministic {
            continue;
        }
        checked += 1;
        let l = BTreeSet::from([Action::new("l1")]);
        assert!(is_deterministic(&restrict(&a, &l).unwrap()).unwrap().deterministic);
    }
    assert!(checked > 20);
}

#[test]
fn determinization_preserves_the_language() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let actions = [Action::new("l1"), Action::new("l2"), Action::new("h")];
    for _ in 0..1000 {
        let a = common::random_nfa(&mut rng, 5, true);
        let det = determinize(&a).unwrap();
        assert!(is_deterministic(&det).unwrap().deterministic);
        let (fwd, cex) = language_included(&a, &det).unwrap();
        assert!(fwd, "word lost by determinization: {cex:?}");
        let (bwd, cex) = language_included(&det, &a).unwrap();
        assert!(bwd, "word invented by determinization: {cex:?}");
        // Spot-check with explicit short words against the oracle.
        for _ in 0..5 {
            let len = rng.gen_range(0..4);
            let word: Vec<Action> =
                (0..len).map(|_| actions[rng.gen_range(0..3)].clone()).collect();
            assert_eq!(
                common::oracle_included(&word_automaton(&word), &a),
                common::oracle_included(&word_automaton(&word), &det),
            );
        }
    }
}

fn word_automaton(word: &[Action]) -> niva::model::TimedAutomaton {
    let mut b = niva::builder::AutomatonBuilder::new("word");
    b.low(&["l1", "l2"]).high(&["h"]).initial("w0");
    for (i, act) in word.iter().enumerate() {
        b.edge(&format!("w{i}"), act.as_str(), "", &[], &format!("w{}", i + 1));
    }
    b.build().unwrap()
}

#[test]
fn language_preserving_transforms_keep_the_verdict() {
    // Replacing an automaton by a language-equivalent one never flips the
    // trace verdict; the subset construction is such a transform.
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    for _ in 0..300 {
        let a = common::random_nfa(&mut rng, 5, true);
        let det = determinize(&a).unwrap();
        assert_eq!(
            check_snni_untimed(&a).unwrap().holds,
            check_snni_untimed(&det).unwrap().holds,
        );
    }
}

#[test]
fn secure_automata_stay_secure_under_restriction() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let actions = [Action::new("l1"), Action::new("l2"), Action::new("h")];
    let mut secure_seen = 0;
    for _ in 0..600 {
        let a = common::random_nfa(&mut rng, 5, false);
        if !check_snni_untimed(&a).unwrap().holds {
            continue;
        }
        secure_seen += 1;
        let l: BTreeSet<Action> = actions
            .iter()
            .filter(|_| rng.gen_bool(0.4))
            .cloned()
            .collect();
        let cut = restrict(&a, &l).unwrap();
        assert!(
            check_snni_untimed(&cut).unwrap().holds,
            "restriction broke the property: {a:?} minus {l:?}"
        );
    }
    assert!(secure_seen > 50);
}

#[test]
fn verification_and_synthesis_are_consistent() {
    // A secure automaton admits the controller that changes nothing; an
    // insecure one forces every controller to cut behaviour.
    for a in [
        niva::fixtures::ak_family(1),
        niva::fixtures::ak_family(2),
        niva::fixtures::h_aut(),
        niva::fixtures::aj(),
    ] {
        let secure = niva::timed::check_snni_timed(&a).unwrap().holds;
        let result = niva::timed::synthesize_snni(&a).unwrap();
        match (secure, &result.outcome) {
            (true, Outcome::Controller) => {
                let f = result.final_automaton.as_ref().unwrap();
                let (fwd, _) = timed_language_included(f, &a).unwrap();
                assert!(fwd);
                assert_eq!(result.effective_iterations, 0);
            }
            (false, Outcome::Controller) => {
                assert!(result.effective_iterations > 0);
            }
            (_, Outcome::Bot) => assert!(!secure),
        }
    }
}

#[test]
fn cancellation_interrupts_the_game() {
    use std::sync::atomic::{AtomicBool, Ordering};
    let flag = AtomicBool::new(true);
    flag.store(true, Ordering::Relaxed);
    let err = niva::timed::synthesize_snni_with(&niva::fixtures::k_aut(), Some(&flag));
    assert!(matches!(err, Err(niva::Error::Cancelled)));
}

// Zone-kernel properties on arbitrary atom soups.

fn atom_strategy(clocks: usize) -> impl Strategy<Value = Atom> {
    let rel = prop_oneof![
        Just(Rel::Lt),
        Just(Rel::Le),
        Just(Rel::Eq),
        Just(Rel::Ge),
        Just(Rel::Gt)
    ];
    prop_oneof![
        (0..clocks, rel.clone(), 0i64..6).prop_map(|(c, rel, constant)| Atom::Simple {
            clock: ClockId(c),
            rel,
            constant,
        }),
        (0..clocks, 0..clocks, rel, -5i64..6).prop_filter_map(
            "distinct clocks",
            |(x, y, rel, constant)| {
                (x != y).then(|| Atom::Diff {
                    left: ClockId(x),
                    right: ClockId(y),
                    rel,
                    constant,
                })
            }
        ),
    ]
}

proptest! {
    #[test]
    fn canonicalization_is_order_insensitive(
        atoms in proptest::collection::vec(atom_strategy(3), 0..6),
        seed in 0u64..1000,
    ) {
        let dim = 4;
        let mut z1 = Zone::universe(dim);
        for a in &atoms {
            z1.and_atom(a);
        }
        let z1 = z1.canonicalize();

        let mut shuffled = atoms.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in (1..shuffled.len()).rev() {
            let j = rng.gen_range(0..=i);
            shuffled.swap(i, j);
        }
        let mut z2 = Zone::universe(dim);
        for a in &shuffled {
            z2.and_atom(a);
        }
        prop_assert_eq!(z1.clone(), z2.canonicalize());
        // Idempotence on the side.
        prop_assert_eq!(z1.clone().canonicalize(), z1);
    }

    #[test]
    fn intersection_is_monotone_and_commutative(
        left in proptest::collection::vec(atom_strategy(3), 0..5),
        right in proptest::collection::vec(atom_strategy(3), 0..5),
    ) {
        let dim = 4;
        let mut a = Zone::universe(dim);
        for atom in &left {
            a.and_atom(atom);
        }
        let a = a.canonicalize();
        let mut b = Zone::universe(dim);
        for atom in &right {
            b.and_atom(atom);
        }
        let b = b.canonicalize();
        let ab = a.intersect(&b);
        prop_assert_eq!(ab.clone(), b.intersect(&a));
        prop_assert!(ab.is_subset(&a) || ab.is_empty());
        prop_assert!(ab.is_subset(&b) || ab.is_empty());
    }

    #[test]
    fn up_and_down_are_closures(
        atoms in proptest::collection::vec(atom_strategy(2), 0..5),
    ) {
        let dim = 3;
        let mut z = Zone::universe(dim);
        for a in &atoms {
            z.and_atom(a);
        }
        let z = z.canonicalize();
        prop_assert_eq!(z.up().up(), z.up());
        prop_assert_eq!(z.down().down(), z.down());
        if !z.is_empty() {
            prop_assert!(z.is_subset(&z.up()));
            prop_assert!(z.is_subset(&z.down()));
        }
    }
}

#[test]
fn reset_image_agrees_with_pointwise_semantics() {
    // reset({x = y, x >= 3}, {x}) must be exactly {x = 0, y >= 3},
    // checked against the direct predicate on random rational points.
    use num_rational::BigRational;
    use num_traits::FromPrimitive;
    let mut z = Zone::universe(3);
    z.and_atom(&Atom::Diff {
        left: ClockId(0),
        right: ClockId(1),
        rel: Rel::Eq,
        constant: 0,
    });
    z.and_atom(&Atom::Simple {
        clock: ClockId(0),
        rel: Rel::Ge,
        constant: 3,
    });
    let image = z.canonicalize().reset([ClockId(0)]);
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    for _ in 0..100 {
        let x = BigRational::from_f64(rng.gen_range(0..=24) as f64 / 4.0).unwrap();
        let y = BigRational::from_f64(rng.gen_range(0..=24) as f64 / 4.0).unwrap();
        let expected = x == BigRational::from_f64(0.0).unwrap()
            && y >= BigRational::from_f64(3.0).unwrap();
        assert_eq!(image.contains(&[x.clone(), y.clone()]), expected, "point ({x},{y})");
    }
}

#[test]
fn timed_words_project_and_normalize() {
    use niva::model::TimedWord;
    use num_rational::BigRational;
    use num_traits::FromPrimitive;
    let rat = |x: f64| BigRational::from_f64(x).unwrap();
    let entries = vec![
        (rat(1.0), Label::Act(Action::new("h"))),
        (rat(0.5), Label::Epsilon),
        (rat(2.0), Label::Act(Action::new("l"))),
        (rat(9.0), Label::Epsilon),
    ];
    let word = TimedWord::normalize(entries);
    assert_eq!(
        word.pairs,
        vec![(rat(1.0), Action::new("h")), (rat(2.5), Action::new("l"))]
    );
    let low = BTreeSet::from([Action::new("l")]);
    let projected = word.project(&low);
    assert_eq!(projected.pairs, vec![(rat(3.5), Action::new("l"))]);
    assert_eq!(projected.untimed(), vec![Action::new("l")]);
}
