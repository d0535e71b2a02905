mod support;

use fspcheck_core::lts::compose;
use fspcheck_core::{Lts, StateId};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use support::{compile_random, isomorphic, product_oracle, random_lts, random_spec};

#[test]
fn compiled_specs_match_brute_force_product() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut with_error = 0;
    for _ in 0..64 {
        let spec = random_spec(&mut rng);
        let (composed, parts) = compile_random(&spec);
        let oracle = product_oracle(&parts);
        assert!(isomorphic(&composed, &oracle), "\n{}", spec.text);
        with_error += usize::from(oracle.error().is_some());
    }
    assert!(with_error > 0, "no generated spec reached ERROR");
}

#[test]
fn isomorphism_check_rejects_a_redirected_edge() {
    let mut rng = StdRng::seed_from_u64(7);
    let (parts, product) = loop {
        let parts: Vec<Lts> = (0..2).map(|_| random_lts(&mut rng, 6, 3, false)).collect();
        let product = compose(&parts).unwrap();
        if product.num_states() > 2 {
            break (parts, product);
        }
    };
    assert!(isomorphic(&product, &product_oracle(&parts)));
    let mut rows: Vec<Vec<_>> = product.states().map(|s| product.successors(s).to_vec()).collect();
    let (s, i) = rows
        .iter()
        .enumerate()
        .find_map(|(s, r)| (!r.is_empty()).then_some((s, 0)))
        .expect("some transition");
    let n = rows.len() as StateId;
    rows[s][i].1 = (rows[s][i].1 + 1) % n;
    let tampered = Lts::from_parts(product.alphabet().to_vec(), product.initial(), rows, None).unwrap();
    assert!(!isomorphic(&product, &tampered));
}

fn arb_parts() -> impl Strategy<Value = Vec<Lts>> {
    (any::<u64>(), 2usize..=3).prop_map(|(seed, n)| {
        let mut rng = StdRng::seed_from_u64(seed);
        (0..n)
            .map(|i| random_lts(&mut rng, 6, 2 + i % 3, i == n - 1))
            .collect()
    })
}

/// Component tuple of a composite state, read back from its name.
fn tuple(lts: &Lts, s: StateId) -> Option<Vec<StateId>> {
    let name = lts.state_name(s);
    let inner = name.strip_prefix('(')?.strip_suffix(')')?;
    inner
        .split(", ")
        .map(|x| x.strip_prefix('s')?.parse().ok())
        .collect()
}

proptest! {
    #[test]
    fn random_systems_match_brute_force_product(parts in arb_parts()) {
        prop_assert!(isomorphic(&compose(&parts).unwrap(), &product_oracle(&parts)));
    }

    #[test]
    fn composition_order_does_not_matter(parts in arb_parts()) {
        let forward = compose(&parts).unwrap();
        let mut reversed = parts.clone();
        reversed.reverse();
        let backward = compose(&reversed).unwrap();
        prop_assert!(isomorphic(&forward, &backward));
    }

    #[test]
    fn every_step_is_a_synchronised_move(parts in arb_parts()) {
        let product = compose(&parts).unwrap();
        prop_assume!(product.num_states() <= 1000);
        for (s, l, t) in product.transitions() {
            let label = product.label(l);
            let from = tuple(&product, s).expect("only non-error states have successors");
            let Some(to) = tuple(&product, t) else {
                prop_assert!(product.is_error(t));
                let fires_error = parts.iter().zip(&from).any(|(p, &c)| {
                    p.label_id(label).is_some_and(|pl| {
                        p.successors(c).iter().any(|&(x, y)| x == pl && p.is_error(y))
                    })
                });
                prop_assert!(fires_error);
                continue;
            };
            for ((part, &a), &b) in parts.iter().zip(&from).zip(&to) {
                match part.label_id(label) {
                    Some(pl) => prop_assert!(part.successors(a).contains(&(pl, b))),
                    None => prop_assert_eq!(a, b),
                }
            }
        }
    }

    #[test]
    fn reachable_restriction_keeps_a_subsystem(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let lts = random_lts(&mut rng, 8, 3, false);
        let pruned = lts.reachable();
        prop_assert_eq!(
            lts.state_name(lts.initial()),
            pruned.state_name(pruned.initial())
        );
        let original: std::collections::BTreeSet<(String, String, String)> = lts
            .transitions()
            .map(|(f, a, t)| (lts.state_name(f), lts.label(a).to_string(), lts.state_name(t)))
            .collect();
        for (f, a, t) in pruned.transitions() {
            let edge = (pruned.state_name(f), pruned.label(a).to_string(), pruned.state_name(t));
            prop_assert!(original.contains(&edge));
        }
    }
}
