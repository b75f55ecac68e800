mod common;

use std::sync::Mutex;

use common::*;
use parikh_grid::{
    bounds, construct_family, enumerate_covering, enumerate_pv, is_realizable_set, is_universal_cycle, parikh_set,
    rank, search, unrank, verify, wrap_cycle, Family, Letter, ParikhSet, ParikhVector, PdbGrid, SearchConfig,
    SearchStatus,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 512, ..ProptestConfig::default() })]

    #[test]
    fn neighbors_are_symmetric(p in pv_strategy(6, 5)) {
        let ns = p.neighbors();
        let support = p.counts().iter().filter(|&&c| c > 0).count();
        prop_assert_eq!(ns.len(), support * (p.sigma() - 1));
        for q in &ns {
            prop_assert!(q.neighbors().contains(&p));
            prop_assert_eq!(q.order(), p.order());
        }
    }

    #[test]
    fn parents_and_children_invert(p in pv_strategy(6, 5)) {
        for up in p.parents() {
            prop_assert!(up.children().contains(&p));
        }
        for down in p.children() {
            prop_assert!(down.parents().contains(&p));
        }
        prop_assert_eq!(p.parents().len(), p.sigma());
    }

    #[test]
    fn rank_round_trips(p in pv_strategy(7, 6)) {
        let r = rank(&p);
        prop_assert!(r < pascal(p.order() + p.sigma() - 1, p.sigma() - 1));
        prop_assert_eq!(unrank(r, p.order(), p.sigma()).unwrap(), p);
    }

    #[test]
    fn sliding_windows_match_naive_counts((w, k, sigma) in word_strategy(6, 5, 20)) {
        prop_assert_eq!(library_parikh_set(&w, k, sigma), naive_parikh_set(&w, k, sigma));
    }

    #[test]
    fn walk_round_trip((w, k, sigma) in word_strategy(5, 4, 14)) {
        check_walk_roundtrip(&w, k, sigma).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn bowfree_walks_obey_the_lemma((w, k, sigma) in bowfree_word_strategy(5, 4, 16)) {
        check_bowfree_lemma(&w, k, sigma).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn bowfree_check_on_arbitrary_words((w, k, sigma) in word_strategy(4, 3, 12)) {
        check_bowfree_lemma(&w, k, sigma).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn meet_join_laws((p, q) in pv_pair_strategy(5, 6)) {
        check_lattice_laws(&p, &q).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn pdb_means_covering_at_minimum_length((w, k, sigma) in word_strategy(3, 3, 10)) {
        let r = verify(&w, k, sigma).unwrap();
        let len = pascal(sigma + k - 1, k) as usize + k - 1;
        prop_assert_eq!(r.is_covering, naive_is_covering(&w, k, sigma));
        prop_assert_eq!(r.is_pdb, r.is_covering && w.len() == len);
        prop_assert_eq!(r.excess, r.is_covering.then(|| (w.len() - len) as u64));
    }

    #[test]
    fn realizable_witness_reproduces_its_set((w, k, sigma) in word_strategy(4, 4, 12)) {
        let set = parikh_set(&w, k, sigma).unwrap();
        let r = is_realizable_set(&set).unwrap();
        prop_assert!(r.realizable);
        let witness = r.witness.unwrap();
        prop_assert_eq!(library_parikh_set(&witness, k, sigma), naive_parikh_set(&w, k, sigma));
    }
}

#[test]
fn realizability_matches_exhaustive_automaton() {
    for (k, sigma) in [(2, 2), (3, 2), (2, 3), (4, 2), (2, 4)] {
        let vectors = enumerate_pv(k, sigma).unwrap();
        let oracle = realizable_masks(k, sigma, &vectors);
        for mask in 1u64..(1 << vectors.len()) {
            let members = vectors.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| p.clone());
            let set = ParikhSet::new(k, sigma, members).unwrap();
            let r = is_realizable_set(&set).unwrap();
            assert_eq!(r.realizable, oracle.contains_key(&mask), "({k},{sigma}) mask {mask:b}");
            if let Some(w) = r.witness {
                assert_eq!(parikh_set(&w, k, sigma).unwrap().members, set.members);
                assert!(w.len() >= oracle[&mask]);
            }
        }
    }
}

/// All itineraries of up to `steps` steps, as vertex index sequences.
fn itineraries(grid: &PdbGrid, steps: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0..grid.vertex_count()).map(|v| vec![v]).collect();
    let mut frontier = out.clone();
    for _ in 0..steps {
        let mut next = Vec::new();
        for path in &frontier {
            for u in grid.neighbors_of(*path.last().unwrap()) {
                let mut longer = path.clone();
                longer.push(u);
                next.push(longer);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[test]
fn itineraries_are_followed_exactly() {
    for (k, sigma, steps) in [(3, 3, 5), (2, 4, 5), (4, 2, 6), (1, 3, 4)] {
        let grid = PdbGrid::build(k, sigma).unwrap();
        for path in itineraries(&grid, steps) {
            let vs: Vec<ParikhVector> = path.iter().map(|&i| grid.vertex(i).clone()).collect();
            check_itinerary(&vs, k, sigma).unwrap();
        }
    }
}

#[test]
fn clique_lemma_exhaustive() {
    for k in 1..=5 {
        for sigma in 1..=5 {
            check_clique_lemma(k, sigma).unwrap();
        }
    }
}

#[test]
fn wrapped_universal_cycles_are_pdb() {
    let mut total = 0;
    for (k, sigma) in [(1, 3), (2, 2), (2, 3), (3, 2), (4, 2), (5, 2), (3, 3)] {
        for cycle in naive_universal_cycles(k, sigma) {
            assert!(is_universal_cycle(&cycle, k, sigma).unwrap());
            assert!(verify(&wrap_cycle(&cycle, k), k, sigma).unwrap().is_pdb, "{}", text(&cycle));
            total += 1;
        }
    }
    assert!(total > 0);
    for sigma in (1..=9).step_by(2) {
        let w = construct_family(Family::K2Eulerian, 2, sigma).unwrap();
        let cycle = &w[..w.len() - 1];
        assert!(is_universal_cycle(cycle, 2, sigma).unwrap());
        assert_eq!(wrap_cycle(cycle, 2), w);
    }
}

#[test]
fn universal_cycle_check_rejects_non_cycles() {
    assert!(!is_universal_cycle(&word("aabb"), 2, 3).unwrap());
    assert!(!is_universal_cycle(&word("aabbcca"), 2, 3).unwrap());
}

/// Every covering word the search enumerates: at least the lower bound in
/// length, each letter at least as often as the counting bound demands,
/// and for two letters or `k ≤ 3` also `(k-1)`-covering.
#[test]
fn enumerated_covering_words_respect_the_bounds() {
    for (k, sigma, extra) in [(2, 2, 3), (3, 2, 3), (4, 2, 2), (5, 2, 2), (2, 3, 2), (3, 3, 1), (2, 4, 1), (4, 3, 1)] {
        let b = bounds(k, sigma).unwrap();
        let per_letter = pascal(sigma + k - 1, k - 1).div_ceil(k as u64);
        let lower = b.shortest_lower_bound as usize;
        let failures = Mutex::new(Vec::new());
        let seen = Mutex::new(0usize);
        let visit = |w: &[Letter]| {
            *seen.lock().unwrap() += 1;
            let mut problems = Vec::new();
            if !naive_is_covering(w, k, sigma) {
                problems.push("not covering");
            }
            let counts = naive_windows(w, w.len(), sigma).pop().unwrap();
            if counts.iter().any(|&c| (c as u64) < per_letter) {
                problems.push("letter below the counting bound");
            }
            if (sigma <= 2 || k <= 3) && k >= 2 && !naive_is_covering(w, k - 1, sigma) {
                problems.push("not (k-1)-covering");
            }
            if !problems.is_empty() {
                failures.lock().unwrap().push(format!("{}: {}", text(w), problems.join(", ")));
            }
        };
        let cfg = SearchConfig::new(k, sigma).budget(None);
        for len in lower.saturating_sub(1)..=lower + extra {
            let e = enumerate_covering(&cfg, len, &visit).unwrap();
            assert!(e.complete);
            if len < lower {
                assert_eq!(*seen.lock().unwrap(), 0, "covering word below the lower bound for ({k},{sigma})");
            }
        }
        assert!(*seen.lock().unwrap() > 0);
        let failures = failures.into_inner().unwrap();
        assert!(failures.is_empty(), "({k},{sigma}): {failures:?}");
    }
}

#[test]
fn search_agrees_with_brute_force() {
    for (k, sigma) in [(2, 2), (3, 2), (4, 2), (2, 3), (3, 3), (2, 4)] {
        let o = search(&SearchConfig::new(k, sigma)).unwrap();
        assert_eq!(o.status, SearchStatus::Found);
        let w = o.witness_letters().unwrap();
        assert!(naive_is_covering(&w, k, sigma));
        assert!(!exists_covering_word_of_length(w.len() - 1, k, sigma), "({k},{sigma}) shorter word exists");
    }
}

#[test]
fn search_is_independent_of_workers_and_split() {
    for (k, sigma) in [(3, 3), (2, 5), (4, 3), (3, 4)] {
        let base = search(&SearchConfig::new(k, sigma)).unwrap();
        for workers in [2, 3, 8] {
            for split in [None, Some(1), Some(k + 4)] {
                let mut cfg = SearchConfig::new(k, sigma).workers(workers);
                cfg.split_depth = split;
                let o = search(&cfg).unwrap();
                assert_eq!((o.status, &o.witness, o.minimal), (base.status, &base.witness, base.minimal));
            }
        }
    }
}

#[test]
fn pruning_does_not_change_the_answer() {
    use parikh_grid::Pruning;
    for (k, sigma) in [(2, 3), (3, 3), (2, 4), (3, 2)] {
        let full = search(&SearchConfig::new(k, sigma)).unwrap();
        let bare = search(&SearchConfig::new(k, sigma).pruning(Pruning::none())).unwrap();
        assert_eq!(full.witness, bare.witness);
        assert!(bare.stats.nodes >= full.stats.nodes);
    }
}

/// All vertex sequences of `m` vertices in which consecutive vertices are
/// equal or adjacent, plus every sequence at all when `m ≤ 3`.
fn vertex_sequences(grid: &PdbGrid, m: usize) -> Vec<Vec<usize>> {
    let n = grid.vertex_count();
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..m {
        let mut next = Vec::new();
        for seq in &out {
            let options: Vec<usize> = match seq.last() {
                Some(&v) if m > 3 => std::iter::once(v).chain(grid.neighbors_of(v)).collect(),
                _ => (0..n).collect(),
            };
            for u in options {
                let mut longer = seq.clone();
                longer.push(u);
                next.push(longer);
            }
        }
        out = next;
    }
    out
}

#[test]
fn walk_realizability_matches_brute_force() {
    use parikh_grid::{is_realizable_walk, walk_of, Walk};
    use std::collections::HashSet;
    for (k, sigma, max_len) in [(2, 2, 10), (3, 2, 10), (2, 3, 8), (3, 3, 7), (1, 3, 5)] {
        let grid = PdbGrid::build(k, sigma).unwrap();
        for len in k..=max_len {
            let mut spelled: HashSet<Vec<usize>> = HashSet::new();
            let mut w = vec![0 as Letter; len];
            loop {
                let walk = walk_of(&w, k, sigma).unwrap();
                spelled.insert(walk.vertices.iter().map(|p| grid.index_of(p).unwrap()).collect());
                if !next_word(&mut w, sigma) {
                    break;
                }
            }
            for seq in vertex_sequences(&grid, len + 1 - k) {
                let vs = seq.iter().map(|&i| grid.vertex(i).clone()).collect();
                let r = is_realizable_walk(&Walk::new(k, vs, None).unwrap()).unwrap();
                assert_eq!(r.is_realizable(), spelled.contains(&seq), "({k},{sigma}) {seq:?}");
            }
        }
    }
}
