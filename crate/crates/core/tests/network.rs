mod common;

use common::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ra_kit::corpus::{left_linear, point_algebra, CHAIN3_NET, CYCLE3_NET};
use ra_kit::*;

/// Path consistency by sweeping every rule in a shuffled order until
/// nothing changes.
fn naive_pc(ra: &RelationAlgebra, net: &Network, seed: u64) -> Option<Vec<Element>> {
    let n = net.len();
    let mut f = net.labels().to_vec();
    let mut rules: Vec<(usize, usize, usize)> =
        (0..n).flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k)))).collect();
    rules.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    loop {
        let before = f.clone();
        for &(i, j, k) in &rules {
            let via = ra.compose(f[i * n + j], f[j * n + k]);
            f[i * n + k] &= via;
            let reverse = ra.converse(f[j * n + i]);
            f[i * n + j] &= reverse;
        }
        if f.iter().any(|l| l.is_empty()) {
            return None;
        }
        if f == before {
            return Some(f);
        }
    }
}

fn arb_network(k: usize, max_n: usize) -> impl Strategy<Value = Network> {
    (1..=max_n).prop_flat_map(move |n| {
        let full = (1u64 << k) - 1;
        let label = prop_oneof![Just(full), 1..=full].prop_map(Element::from_bits);
        prop::collection::vec(label, n * n)
            .prop_map(move |labels| Network::from_labels("n", Network::default_nodes(n), labels))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn pc_is_idempotent_and_contracting(net in arb_network(4, 5)) {
        let ra = left_linear();
        if let Some(once) = path_consistency(&ra, &net) {
            prop_assert!(once.refines(&net));
            let twice = path_consistency(&ra, &once).unwrap();
            prop_assert_eq!(twice.labels(), once.labels());
        }
    }

    #[test]
    fn pc_matches_any_rule_order(net in arb_network(4, 5), seed in any::<u64>()) {
        let ra = left_linear();
        let ours = path_consistency(&ra, &net).map(|n| n.labels().to_vec());
        prop_assert_eq!(ours, naive_pc(&ra, &net, seed));
    }

    #[test]
    fn pc_keeps_every_atomic_refinement(net in arb_network(3, 4)) {
        let ra = point_algebra();
        let n = net.len();
        let pc = path_consistency(&ra, &net);
        for a in all_atomic_labelings(&ra, n) {
            let refined = a.iter().zip(net.labels()).all(|(&x, l)| l.contains(x));
            if refined {
                let pc = pc.as_ref().expect("pc emptied a satisfiable network");
                prop_assert!(a.iter().zip(pc.labels()).all(|(&x, l)| l.contains(x)));
            }
        }
    }

    #[test]
    fn converse_distributes_over_composition(x in 0u64..16, y in 0u64..16) {
        let ra = left_linear();
        let (x, y) = (Element::from_bits(x), Element::from_bits(y));
        prop_assert_eq!(ra.converse(ra.compose(x, y)), ra.compose(ra.converse(y), ra.converse(x)));
        prop_assert_eq!(ra.converse(ra.converse(x)), x);
        prop_assert_eq!(ra.compose(x, ra.identity()), x);
    }

    #[test]
    fn solutions_are_atomic_refinements(net in arb_network(4, 4)) {
        let ra = left_linear();
        if let Some(sol) = refine_solve(&ra, &net) {
            prop_assert!(sol.refines(&net));
            prop_assert!(is_atomic(&ra, &sol));
        }
    }
}

#[test]
fn is_atomic_agrees_with_definition() {
    let ra = left_linear();
    for n in 0..=3 {
        let atomic = all_atomic_labelings(&ra, n);
        for labels in &atomic {
            assert!(is_atomic(&ra, &to_network("a", labels, n)));
        }
        // single-cell changes, most of them not atomic
        for labels in &atomic {
            for p in 0..n * n {
                for b in 0..ra.k() {
                    let mut l = labels.clone();
                    l[p] = b;
                    assert_eq!(is_atomic(&ra, &to_network("a", &l, n)), oracle_atomic(&ra, &l, n));
                }
            }
        }
    }
}

#[test]
fn chain_forces_transitivity() {
    let ra = point_algebra();
    let net = Network::parse(&ra, CHAIN3_NET).unwrap();
    let lt = ra.parse_element("lt").unwrap();
    assert_eq!(net.label(0, 2), ra.top());
    let pc = path_consistency(&ra, &normalize(&ra, &net).unwrap()).unwrap();
    assert_eq!(pc.label(0, 2), lt);
    let sol = refine_solve(&ra, &net).unwrap();
    assert_eq!(sol.label(0, 2), lt);
    assert!(is_atomic(&ra, &sol));
}

#[test]
fn cycle_is_unsatisfiable() {
    let ra = point_algebra();
    let net = Network::parse(&ra, CYCLE3_NET).unwrap();
    assert!(path_consistency(&ra, &net).is_none());
    assert!(refine_solve(&ra, &net).is_none());
}

#[test]
fn text_round_trip() {
    let ra = left_linear();
    let net = grow_limit(&ra, 6, 11, &GrowOptions::default()).unwrap();
    let back = Network::parse(&ra, &net.to_text(&ra)).unwrap();
    assert_eq!(back, net);
}
