mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use rbcsp_core::csp::{Assignment, SearchState};
use rbcsp_core::target::{check_target, min_conflict_cover, TargetSpec};

/// Smallest vertex cover size by subset enumeration, if at most `limit`.
fn brute_cover_size(edges: &[(u32, u32)], n: usize, limit: usize) -> Option<usize> {
    (0..=limit.min(n)).find(|&k| {
        subsets(n, k)
            .iter()
            .any(|s| edges.iter().all(|(a, b)| s.contains(a) || s.contains(b)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn cover_is_minimum_and_valid(
        edges in prop::collection::vec((0u32..8, 0u32..8).prop_filter("distinct", |(a, b)| a != b), 0..9),
        budget in 0usize..4,
    ) {
        let got = min_conflict_cover(&edges, budget);
        let want = brute_cover_size(&edges, 8, budget);
        prop_assert_eq!(got.as_ref().map(Vec::len), want);
        if let Some(cover) = got {
            prop_assert!(edges.iter().all(|(a, b)| cover.contains(a) || cover.contains(b)));
        }
    }
}

#[test]
fn check_target_agrees_with_subset_enumeration() {
    let mut r = rng(21);
    let mut checked = 0;
    while checked < 300 {
        let n = r.gen_range(3..=10);
        let d = r.gen_range(2..=3);
        let m = r.gen_range(1..=12);
        let inst = random_instance(&mut r, n, d, m);
        let x = random_values(&mut r, n, d);
        let state = SearchState::with_assignment(&inst, Assignment::from_values(x.clone())).unwrap();
        let conflicts = state.conflict_count();
        if conflicts > 8 {
            continue;
        }
        checked += 1;
        let removal = r.gen_range(0..=3.min(n));
        let t = n - removal;
        let spec = TargetSpec::new(n, t, 8).unwrap();
        let got = check_target(&state, &spec);
        let oracle = subsets(n, t).into_iter().any(|s| conflicts_within(&inst, &x, &s) == 0);
        assert_eq!(got.is_some(), oracle, "n={n} t={t} conflicts={conflicts}");
        if let Some(s) = got {
            assert_eq!(s.len(), t);
            assert_eq!(conflicts_within(&inst, &x, &s), 0);
        }
    }
}

#[test]
fn states_above_the_cap_are_skipped() {
    let mut r = rng(22);
    let inst = random_instance(&mut r, 6, 2, 30);
    let x = vec![0; 6];
    let state = SearchState::with_assignment(&inst, Assignment::from_values(x)).unwrap();
    let c = state.conflict_count();
    assert!(c >= 2, "fixture needs a few conflicts, got {c}");
    // removing every variable clears any conflict set, but the cap says no
    let spec = TargetSpec::new(6, 0, c - 1).unwrap();
    assert_eq!(check_target(&state, &spec), None);
    let spec = TargetSpec::new(6, 0, c).unwrap();
    assert_eq!(check_target(&state, &spec), Some(vec![]));
}
