mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use rbcsp_core::csp::{conflict_count, Assignment, CspInstance, SearchState};

#[test]
fn conflict_count_matches_scan_on_small_instance() {
    let mut rng = rng(1);
    let inst = random_instance(&mut rng, 6, 3, 10);
    for _ in 0..200 {
        let x = random_values(&mut rng, 6, 3);
        assert_eq!(
            conflict_count(&inst, &Assignment::from_values(x.clone())).unwrap(),
            brute_conflicts(&inst, &x)
        );
    }
}

#[test]
fn incremental_violated_set_tracks_recount_over_long_walks() {
    let mut rng = rng(2);
    let mut steps = 0usize;
    while steps < 100_000 {
        let n = rng.gen_range(2..=50);
        let d = rng.gen_range(2..=8);
        let m = rng.gen_range(0..=3 * n);
        let inst = random_instance(&mut rng, n, d, m);
        let x = random_values(&mut rng, n, d);
        let mut state = SearchState::with_assignment(&inst, Assignment::from_values(x)).unwrap();
        for _ in 0..2_000 {
            let v = rng.gen_range(0..n as u32);
            let old = state.value(v).unwrap();
            let mut u = rng.gen_range(0..d as u32 - 1);
            if u >= old {
                u += 1;
            }
            let before = state.iteration();
            state.apply_change(v, u);
            steps += 1;
            assert_eq!(state.timestamp(v), before + 1);
            let mut got: Vec<usize> = state.violated().iter().map(|&c| c as usize).collect();
            got.sort_unstable();
            assert_eq!(got, violated_ids(&inst, state.assignment().values()));
        }
    }
}

#[test]
fn change_then_inverse_restores_violations() {
    let mut rng = rng(3);
    let inst = random_instance(&mut rng, 12, 4, 30);
    let x = random_values(&mut rng, 12, 4);
    let mut state = SearchState::with_assignment(&inst, Assignment::from_values(x)).unwrap();
    for _ in 0..500 {
        let v = rng.gen_range(0..12);
        let old = state.value(v).unwrap();
        let new = (old + rng.gen_range(1..4)) % 4;
        let mut before = state.violated().to_vec();
        let t_before = state.timestamps().to_vec();
        state.apply_change(v, new);
        state.apply_change(v, old);
        let mut after = state.violated().to_vec();
        before.sort_unstable();
        after.sort_unstable();
        assert_eq!(before, after);
        // only v's timestamp moved
        for (w, (&a, &b)) in t_before.iter().zip(state.timestamps()).enumerate() {
            assert!(w == v as usize || a == b);
        }
    }
}

fn instance_and_values() -> impl Strategy<Value = (CspInstance, Vec<u32>)> {
    (2usize..=20, 2usize..=6, 0usize..=40, any::<u64>()).prop_map(|(n, d, m, seed)| {
        let mut r = rng(seed);
        let inst = random_instance(&mut r, n, d, m);
        let x = random_values(&mut r, n, d);
        (inst, x)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn delta_equals_recount_difference((inst, x) in instance_and_values()) {
        let state = SearchState::with_assignment(&inst, Assignment::from_values(x.clone())).unwrap();
        let base = brute_conflicts(&inst, &x) as i64;
        for v in 0..inst.num_vars() as u32 {
            for u in 0..inst.domain_size() as u32 {
                let mut y = x.clone();
                y[v as usize] = u;
                prop_assert_eq!(state.delta_conflicts(v, u), brute_conflicts(&inst, &y) as i64 - base);
            }
        }
    }

    #[test]
    fn evaluate_all_values_matches_single_deltas((inst, x) in instance_and_values()) {
        let state = SearchState::with_assignment(&inst, Assignment::from_values(x.clone())).unwrap();
        let mut all = vec![0i64; inst.domain_size()];
        for v in 0..inst.num_vars() as u32 {
            state.evaluate_all_values(v, &mut all);
            prop_assert_eq!(all[x[v as usize] as usize], 0);
            for u in 0..inst.domain_size() as u32 {
                prop_assert_eq!(all[u as usize], state.delta_conflicts(v, u));
            }
        }
    }

    #[test]
    fn count_ignores_constraint_order((inst, x) in instance_and_values(), seed in any::<u64>()) {
        let mut cons = inst.constraints().to_vec();
        rand::seq::SliceRandom::shuffle(cons.as_mut_slice(), &mut rng(seed));
        let shuffled = CspInstance::new(inst.num_vars(), inst.domain_size(), cons).unwrap();
        let a = Assignment::from_values(x);
        prop_assert_eq!(conflict_count(&inst, &a).unwrap(), conflict_count(&shuffled, &a).unwrap());
    }

    #[test]
    fn listing_every_constraint_twice_doubles_count((inst, x) in instance_and_values()) {
        let mut cons = inst.constraints().to_vec();
        cons.extend_from_slice(inst.constraints());
        let doubled = CspInstance::new(inst.num_vars(), inst.domain_size(), cons).unwrap();
        let a = Assignment::from_values(x);
        prop_assert_eq!(conflict_count(&doubled, &a).unwrap(), 2 * conflict_count(&inst, &a).unwrap());
    }
}
