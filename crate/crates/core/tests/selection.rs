mod support;

use std::collections::BTreeSet;

use phax_core::adapt::{
    select_explanation, select_explanation_beam, select_explanation_with, sufficiency, DisputeTree, Role, Strategy, UserProfile,
    UtilityWeights,
};
use phax_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn all(t: &DisputeTree) -> BTreeSet<usize> {
    t.nodes.keys().copied().collect()
}

fn ids(t: &DisputeTree) -> BTreeSet<usize> {
    t.nodes.keys().copied().collect()
}

#[test]
fn hand_computed_sigma() {
    let leaf = DisputeTree::synthetic(&[], &[0.8]);
    assert!((sufficiency(&leaf) - 0.8).abs() < 1e-12);
    let attacked = DisputeTree::synthetic(&[0], &[0.8, 0.5]);
    assert!((sufficiency(&attacked) - 0.4).abs() < 1e-12);
    let defended = DisputeTree::synthetic(&[0, 1], &[1.0, 0.5, 1.0]);
    assert!((sufficiency(&defended) - 1.0).abs() < 1e-12);
}

#[test]
fn sigma_matches_recursion_and_is_monotone() {
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    for case in 0..500 {
        let n = rng.gen_range(1..=15);
        let t = support::random_tree(&mut rng, n);
        let full = sufficiency(&t);
        assert!((full - support::reference_sigma(&t, &all(&t))).abs() < 1e-12, "case {case}");
        assert!((0.0..=t.root_node().base).contains(&full));
        for v in t.nodes.values().filter(|v| v.parent.is_some()) {
            // drop v and everything below it
            let mut keep = all(&t);
            let mut stack = vec![v.id];
            while let Some(x) = stack.pop() {
                keep.remove(&x);
                stack.extend(t.nodes[&x].children.iter().copied());
            }
            let cut = sufficiency(&t.restrict(&keep));
            match v.role {
                Role::Opponent => assert!(cut >= full - 1e-12, "case {case}: dropping opponent {} lowered σ", v.id),
                Role::Proponent => assert!(cut <= full + 1e-12, "case {case}: dropping defender {} raised σ", v.id),
            }
        }
    }
}

#[test]
fn exact_and_beam_agree_up_to_twenty_nodes() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let (mut total, mut narrow_agree) = (0, 0);
    for case in 0..300 {
        let n = rng.gen_range(1..=20);
        let t = support::random_tree(&mut rng, n);
        let u = support::random_profile(&mut rng);
        let w = UtilityWeights {
            tau: 0.0,
            epsilon: rng.gen_range(0.0..0.3),
            ..UtilityWeights::default()
        };
        let exact = ids(&select_explanation_with(&t, &u, &w, Strategy::Exact).unwrap().subtree);
        let wide = ids(&select_explanation_beam(&t, &u, &w, usize::MAX).unwrap().subtree);
        assert_eq!(wide, exact, "case {case}: unbounded beam differs from exact");
        let narrow = ids(&select_explanation_with(&t, &u, &w, Strategy::Beam).unwrap().subtree);
        total += 1;
        narrow_agree += usize::from(narrow == exact);
    }
    // width 8 is a heuristic; guard against regressions only
    assert!(narrow_agree * 100 >= total * 95, "width-8 beam agreed on {narrow_agree}/{total}");
}

#[test]
fn exact_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for case in 0..300 {
        let n = rng.gen_range(1..=12);
        let t = support::random_tree(&mut rng, n);
        let u = support::random_profile(&mut rng);
        let w = UtilityWeights {
            alpha: rng.gen_range(0.1..2.0),
            beta: rng.gen_range(0.1..2.0),
            gamma: rng.gen_range(0.1..2.0),
            tau: rng.gen_range(0.0..0.6),
            epsilon: rng.gen_range(0.0..0.3),
        };
        let expected = support::reference_selection(&t, &u, &w);
        match select_explanation(&t, &u, &w) {
            Ok(sel) => {
                assert_eq!(Some(ids(&sel.subtree)), expected, "case {case}");
                assert!(sel.sigma >= w.tau && (sel.sigma - sel.sigma_full).abs() <= w.epsilon);
                assert!(t.is_ancestor_closed(&ids(&sel.subtree)));
            }
            Err(Error::Insufficient { sigma_full, tau }) => {
                assert_eq!(expected, None, "case {case}");
                assert!(sigma_full < tau);
            }
            Err(e) => panic!("case {case}: {e}"),
        }
    }
}

#[test]
fn argmax_invariant_under_weight_scaling() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for case in 0..200 {
        let n = rng.gen_range(1..=25);
        let t = support::random_tree(&mut rng, n);
        let u = support::random_profile(&mut rng);
        let w = UtilityWeights {
            alpha: rng.gen_range(0.1..2.0),
            beta: rng.gen_range(0.1..2.0),
            gamma: rng.gen_range(0.1..2.0),
            tau: 0.0,
            epsilon: 0.2,
        };
        let base = ids(&select_explanation(&t, &u, &w).unwrap().subtree);
        for k in [0.5, 2.0, 10.0] {
            let scaled = ids(&select_explanation(&t, &u, &w.scaled(k)).unwrap().subtree);
            assert_eq!(scaled, base, "case {case}, k = {k}");
        }
    }
}

#[test]
fn insufficient_exactly_below_tau() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let u = UserProfile::builtin("policymaker").unwrap();
    for _ in 0..300 {
        let n = rng.gen_range(1..=15);
        let t = support::random_tree(&mut rng, n);
        let full = sufficiency(&t);
        let tau = rng.gen_range(0.0..1.0);
        let w = UtilityWeights { tau, ..UtilityWeights::default() };
        let got = select_explanation(&t, &u, &w);
        assert_eq!(matches!(got, Err(Error::Insufficient { .. })), full < tau, "σ_full {full}, τ {tau}");
        // τ exactly at σ_full is sufficient
        let at = UtilityWeights { tau: full, ..UtilityWeights::default() };
        assert!(select_explanation(&t, &u, &at).is_ok());
    }
}

#[test]
fn beam_handles_large_trees() {
    let mut rng = ChaCha8Rng::seed_from_u64(60);
    let t = support::random_tree(&mut rng, 60);
    let u = UserProfile::builtin("clinician").unwrap();
    let sel = select_explanation(&t, &u, &UtilityWeights { tau: 0.0, ..UtilityWeights::default() }).unwrap();
    assert_eq!(sel.strategy, Strategy::Beam);
    assert!(t.is_ancestor_closed(&ids(&sel.subtree)));
    assert!((sel.sigma - sel.sigma_full).abs() <= 0.05);
}
