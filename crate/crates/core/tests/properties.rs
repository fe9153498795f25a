use std::collections::{HashMap, HashSet};

use footsort::basis::{basis_up_to_length, find_basis_witness};
use footsort::oracle::{is_sortable, oracle_is_sortable, oracle_witness, sortable_by_moves};
use footsort::state::{
    apply_move, find_sandwich, first_terminating_sortable, is_color_sortable, sortable_colors,
};
use footsort::verify::{cross_check, enumerate_canonical, verify_theorem, VerifyOptions};
use footsort::{full_sort, greedy, interlace, replay, Color, SockOrdering, SortState};
use proptest::prelude::*;

fn ordering(max_len: usize, max_colors: u32) -> impl Strategy<Value = SockOrdering> {
    prop::collection::vec(0..max_colors, 0..=max_len).prop_map(|ids| SockOrdering::from_ids(&ids))
}

fn up_to(len: usize) -> impl Iterator<Item = SockOrdering> {
    (0..=len).flat_map(enumerate_canonical)
}

fn subsequences(word: &SockOrdering) -> impl Iterator<Item = SockOrdering> + '_ {
    (0u32..1 << word.len()).map(move |mask| {
        (0..word.len())
            .filter(|k| mask >> k & 1 == 1)
            .map(|k| word.socks()[k])
            .collect()
    })
}

/// Every sandwich-free split of `word` into stack and remaining input.
fn stages(word: &SockOrdering) -> impl Iterator<Item = SortState> + '_ {
    (0..=word.len()).filter_map(|k| {
        let (s, r) = word.socks().split_at(k);
        find_sandwich(s)
            .is_none()
            .then(|| SortState::new(s.iter().copied().collect(), r.iter().copied().collect()))
    })
}

fn sorted_colors(mut colors: Vec<Color>) -> Vec<Color> {
    colors.sort();
    colors
}

// ---- orderings ----

proptest! {
    #[test]
    fn canonicalize_is_idempotent(x in ordering(8, 8)) {
        let c = x.canonicalize();
        prop_assert_eq!(c.canonicalize(), c.clone());
        prop_assert!(c.is_canonical());
        prop_assert!(x.is_equivalent(&c));
    }

    #[test]
    fn subpattern_is_reflexive_and_transitive(
        x in ordering(6, 4),
        ymask in any::<u32>(),
        zmask in any::<u32>(),
    ) {
        prop_assert!(x.contains_pattern(&x));
        let pick = |w: &SockOrdering, mask: u32| -> SockOrdering {
            (0..w.len()).filter(|k| mask >> k & 1 == 1).map(|k| w.socks()[k]).collect()
        };
        // Relabel to make the containments genuinely up to recoloring.
        let y = pick(&x, ymask).canonicalize();
        let z = pick(&y, zmask).canonicalize();
        prop_assert!(x.contains_pattern(&y));
        prop_assert!(y.contains_pattern(&z));
        prop_assert!(x.contains_pattern(&z));
    }

    #[test]
    fn embeddings_validate(x in ordering(10, 5), y in ordering(5, 3)) {
        if let Some(e) = x.find_subpattern(&y) {
            prop_assert!(e.validates(&y, &x));
        }
    }
}

#[test]
fn equivalence_is_an_equivalence_relation() {
    for len in 0..=5 {
        // Every word of length `len` over `len` colors.
        let words: Vec<SockOrdering> = (0..(len as u32).pow(len as u32).max(1))
            .map(|mut code| {
                (0..len)
                    .map(|_| {
                        let id = code % len.max(1) as u32;
                        code /= len.max(1) as u32;
                        id
                    })
                    .map(Color)
                    .collect()
            })
            .collect();
        for a in words.iter().step_by(7) {
            assert!(a.is_equivalent(a));
            for b in &words {
                assert_eq!(a.is_equivalent(b), b.is_equivalent(a));
                if a.is_equivalent(b) {
                    for c in words.iter().step_by(3) {
                        assert_eq!(b.is_equivalent(c), a.is_equivalent(c), "{a} {b} {c}");
                    }
                }
            }
        }
    }
}

#[test]
fn subordering_implies_subpattern() {
    for x in up_to(6) {
        for y in subsequences(&x) {
            assert!(x.contains_subordering(&y));
            let e = x
                .find_subpattern(&y)
                .unwrap_or_else(|| panic!("{y} in {x}"));
            assert!(e.validates(&y, &x));
        }
    }
}

#[test]
fn interlace_lengths() {
    for n in 1..=8u32 {
        let ts: Vec<Color> = (0..n).map(Color).collect();
        assert_eq!(interlace(&ts).unwrap().len(), 2 * (n as usize - 1));
    }
}

// ---- stages and moves ----

#[test]
fn sortability_ignores_the_stack_split() {
    for word in up_to(7) {
        let flat = SortState::initial(&word);
        for stage in stages(&word) {
            for x in stage.colors() {
                if stage.is_buried(x) {
                    continue;
                }
                assert_eq!(
                    is_color_sortable(&stage, x).unwrap(),
                    is_color_sortable(&flat, x).unwrap(),
                    "{stage} {x}"
                );
            }
        }
    }
}

#[test]
fn moves_conserve_socks_and_remove_the_color() {
    for word in up_to(7) {
        for stage in stages(&word) {
            for x in sortable_colors(&stage) {
                let (next, trace) = apply_move(&stage, x).unwrap();
                assert!(!next.contains_color(x), "{stage} {x}");
                assert!(find_sandwich(next.stack.socks()).is_none());
                let before = sorted_colors(stage.concat().into_socks());
                let mut after = next.concat().into_socks();
                after.extend(std::iter::repeat_n(x, trace.emitted()));
                assert_eq!(before, sorted_colors(after), "{stage} {x}");
            }
        }
    }
}

#[test]
fn first_terminating_choice_is_deterministic() {
    for word in up_to(7) {
        for stage in stages(&word) {
            assert_eq!(
                first_terminating_sortable(&stage, &[]),
                first_terminating_sortable(&stage, &[])
            );
        }
    }
}

// ---- oracle ----

#[test]
fn sortability_passes_to_subpatterns() {
    let mut verdicts: HashMap<SockOrdering, bool> = HashMap::new();
    for x in up_to(7) {
        verdicts.insert(x.clone(), is_sortable(&x));
    }
    for (x, &sortable) in &verdicts {
        if !sortable {
            continue;
        }
        for y in subsequences(x) {
            assert!(verdicts[&y.canonicalize()], "{y} under sortable {x}");
        }
    }
}

#[test]
fn top_block_without_later_socks_is_irrelevant() {
    for word in up_to(7) {
        for stage in stages(&word) {
            let Some(x) = stage.top() else { continue };
            if stage.remaining.contains_color(x) {
                continue;
            }
            let block = stage.stack.iter().rev().take_while(|&&c| c == x).count();
            if block != stage.stack.iter().filter(|&&c| c == x).count() {
                continue;
            }
            let trimmed = SortState::new(
                stage.stack.socks()[..stage.stack.len() - block]
                    .iter()
                    .copied()
                    .collect(),
                stage.remaining.clone(),
            );
            assert_eq!(
                oracle_is_sortable(&stage).unwrap(),
                oracle_is_sortable(&trimmed).unwrap(),
                "{stage}"
            );
        }
    }
}

#[test]
fn whole_color_moves_lose_nothing() {
    for x in up_to(8) {
        let initial = SortState::initial(&x);
        assert_eq!(
            oracle_is_sortable(&initial).unwrap(),
            sortable_by_moves(&initial).unwrap(),
            "{x}"
        );
    }
}

proptest! {
    #[test]
    fn oracle_witness_is_a_grouped_permutation(x in ordering(12, 5)) {
        if let Some(w) = oracle_witness(&x).unwrap() {
            prop_assert!(w.output.is_grouped());
            prop_assert_eq!(sorted_colors(w.output.into_socks()), sorted_colors(x.into_socks()));
        }
    }
}

// ---- sorter ----

fn assert_sorter_agrees(x: &SockOrdering) {
    let report = full_sort(x).unwrap();
    assert_eq!(report.is_sorted(), is_sortable(x), "{x}");
    assert!(report.recursion_depth <= x.color_count(), "{x}");
    if report.is_sorted() {
        let r = replay(x, report.sequence.colors()).unwrap();
        assert!(r.state.is_empty());
        assert!(r.output.is_grouped());
        assert_eq!(report.output, Some(r.output));
    } else {
        assert!(x.contains_subordering(&report.witness), "{x}");
        assert!(!is_sortable(&report.witness), "{x}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn sorter_matches_oracle_beyond_exhaustive_range(x in ordering(16, 6)) {
        assert_sorter_agrees(&x);
    }

    #[test]
    fn greedy_is_deterministic(x in ordering(16, 6)) {
        prop_assert_eq!(greedy(&x, &[]).unwrap(), greedy(&x, &[]).unwrap());
    }
}

#[test]
fn recursion_depth_is_bounded_by_colors() {
    for x in up_to(9) {
        let report = full_sort(&x).unwrap();
        assert!(report.recursion_depth <= x.color_count(), "{x}");
    }
}

// ---- basis ----

#[test]
fn basis_realizations_are_pairwise_inequivalent() {
    let basis = basis_up_to_length(13);
    let distinct: HashSet<&SockOrdering> = basis.iter().map(|e| &e.realization).collect();
    assert_eq!(distinct.len(), basis.len());
    for e in &basis {
        assert_eq!(e.realization, e.named.canonicalize());
    }
}

proptest! {
    #[test]
    fn basis_avoidance_matches_oracle(x in ordering(12, 5)) {
        prop_assert_eq!(find_basis_witness(&x).is_none(), is_sortable(&x));
    }
}

// ---- harness ----

#[test]
fn reports_do_not_depend_on_partitioning() {
    let run = |jobs, shard_prefix_len| {
        let options = VerifyOptions {
            jobs,
            shard_prefix_len,
            cache: None,
        };
        (
            verify_theorem(8, &options).unwrap().without_timing(),
            cross_check(8, &options).unwrap().without_timing(),
        )
    };
    let reference = run(1, 1);
    for (jobs, prefix) in [(2, 3), (4, 5), (3, 8)] {
        assert_eq!(run(jobs, prefix), reference, "jobs {jobs} prefix {prefix}");
    }
}

#[test]
fn reports_round_trip_through_json() {
    let report = cross_check(7, &VerifyOptions::default()).unwrap();
    let text = serde_json::to_string(&report).unwrap();
    let back: footsort::verify::VerifyReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, report);
}
