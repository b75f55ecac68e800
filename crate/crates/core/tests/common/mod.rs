//! Oracles and property checks shared by the property and acceptance suites.
//! Everything here is computed from first principles rather than through the
//! library's own helpers.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use proptest::prelude::*;
use proptest::test_runner::{Config as ProptestConfig, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use parikh_grid::{
    check_bowfree_consequences, classify_clique, enumerate_pv, is_realizable_walk, join, meet, parikh_set, spell,
    string_from_itinerary, walk_of, BowfreeReport, CliqueKind, Itinerary, Letter, ParikhVector, Realizability,
};

pub fn word(s: &str) -> Vec<Letter> {
    s.bytes().map(|b| b - b'a').collect()
}

pub fn text(w: &[Letter]) -> String {
    w.iter().map(|&l| char::from(b'a' + l)).collect()
}

pub fn pv(c: &[u32]) -> ParikhVector {
    ParikhVector::new(c.to_vec())
}

/// Binomial coefficients from Pascal's rule.
pub fn pascal(n: usize, k: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![1u64; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row.get(k).copied().unwrap_or(0)
}

/// Letter counts of every length-`k` window, counted from scratch.
pub fn naive_windows(w: &[Letter], k: usize, sigma: usize) -> Vec<Vec<u32>> {
    if k == 0 || w.len() < k {
        return Vec::new();
    }
    (0..=w.len() - k)
        .map(|i| {
            let mut c = vec![0u32; sigma];
            for &l in &w[i..i + k] {
                c[l as usize] += 1;
            }
            c
        })
        .collect()
}

/// All vectors of order `k` over `sigma` letters, by brute force over `σ^k`
/// words.
pub fn naive_vectors(k: usize, sigma: usize) -> BTreeSet<Vec<u32>> {
    let mut out = BTreeSet::new();
    let total = (sigma as u64).pow(k as u32);
    for mut code in 0..total {
        let mut c = vec![0u32; sigma];
        for _ in 0..k {
            c[(code % sigma as u64) as usize] += 1;
            code /= sigma as u64;
        }
        out.insert(c);
    }
    out
}

/// Whether `w` contains a window for every order-`k` vector.
pub fn naive_is_covering(w: &[Letter], k: usize, sigma: usize) -> bool {
    let seen: HashSet<Vec<u32>> = naive_windows(w, k, sigma).into_iter().collect();
    seen.len() as u64 == pascal(sigma + k - 1, k)
}

/// Whether any word of length `len` over `sigma` letters is `k`-covering,
/// checked by trying all `σ^len` words.
pub fn exists_covering_word_of_length(len: usize, k: usize, sigma: usize) -> bool {
    let mut w = vec![0 as Letter; len];
    loop {
        if naive_is_covering(&w, k, sigma) {
            return true;
        }
        if !next_word(&mut w, sigma) {
            return false;
        }
    }
}

/// Advances `w` to the next word in lexicographic order; `false` after the last.
pub fn next_word(w: &mut [Letter], sigma: usize) -> bool {
    for i in (0..w.len()).rev() {
        if (w[i] as usize) + 1 < sigma {
            w[i] += 1;
            return true;
        }
        w[i] = 0;
    }
    false
}

/// Every set of order-`k` vectors that is the Parikh set of some word, as
/// bitmasks over `vectors`, with the shortest length realizing it.
///
/// Explores the automaton whose state is the last `k - 1` letters together
/// with the set of windows seen so far; this covers words of every length.
pub fn realizable_masks(k: usize, sigma: usize, vectors: &[ParikhVector]) -> BTreeMap<u64, usize> {
    assert!(k >= 2 && vectors.len() <= 64);
    let index: BTreeMap<Vec<u32>, usize> = vectors.iter().enumerate().map(|(i, p)| (p.counts().to_vec(), i)).collect();
    let bit = |window: &[Letter]| -> u64 {
        let mut c = vec![0u32; sigma];
        for &l in window {
            c[l as usize] += 1;
        }
        1u64 << index[&c]
    };
    let mut best: BTreeMap<u64, usize> = BTreeMap::new();
    let mut seen: HashSet<(Vec<Letter>, u64)> = HashSet::new();
    let mut queue = VecDeque::new();
    let total = (sigma as u64).pow(k as u32);
    for mut code in 0..total {
        let mut w = Vec::with_capacity(k);
        for _ in 0..k {
            w.push((code % sigma as u64) as Letter);
            code /= sigma as u64;
        }
        let state = (w[1..].to_vec(), bit(&w));
        if seen.insert(state.clone()) {
            queue.push_back((state, k));
        }
    }
    while let Some(((suffix, mask), len)) = queue.pop_front() {
        let e = best.entry(mask).or_insert(len);
        *e = (*e).min(len);
        for x in 0..sigma as Letter {
            let mut window = suffix.clone();
            window.push(x);
            let next = (window[1..].to_vec(), mask | bit(&window));
            if seen.insert(next.clone()) {
                queue.push_back((next, len + 1));
            }
        }
    }
    best
}

/// Spelling a word's labeled walk gives a word with the same walk and
/// labels, equal to the word once the walk is long enough to fix every
/// letter; the unlabeled walk is realizable by a word with the same walk
/// that is no larger.
pub fn check_walk_roundtrip(w: &[Letter], k: usize, sigma: usize) -> Result<(), String> {
    let walk = walk_of(w, k, sigma).map_err(|e| e.to_string())?;
    let expected: Vec<ParikhVector> = naive_windows(w, k, sigma).into_iter().map(ParikhVector::new).collect();
    if walk.vertices != expected {
        return Err(format!("walk of {} disagrees with its windows", text(w)));
    }
    let spelled = spell(&walk).map_err(|e| e.to_string())?;
    if walk_of(&spelled, k, sigma).map_err(|e| e.to_string())? != walk {
        return Err(format!("spelling the labeled walk of {} gives {}, with another walk", text(w), text(&spelled)));
    }
    if w.len() + 1 >= 2 * k && spelled != w {
        return Err(format!("spelling the labeled walk of {} gives {}", text(w), text(&spelled)));
    }
    match is_realizable_walk(&walk.without_labels()).map_err(|e| e.to_string())? {
        Realizability::Realizable { word: found, .. } => {
            let again = walk_of(&found, k, sigma).map_err(|e| e.to_string())?;
            if again.vertices != walk.vertices {
                return Err(format!("{} spells a different walk than {}", text(&found), text(w)));
            }
            if found.as_slice() > w {
                return Err(format!("{} is not the smallest word for the walk of {}", text(&found), text(w)));
            }
            Ok(())
        }
        Realizability::Unrealizable(r) => Err(format!("walk of {} refuted: {r}", text(w))),
    }
}

/// For a word whose walk uses no bow: no letter recurs exactly `k` places
/// later, and `k` steps after a corner `k·e_j` the window has no `j`.
pub fn check_bowfree_lemma(w: &[Letter], k: usize, sigma: usize) -> Result<(), String> {
    if w.len() < k {
        return Ok(());
    }
    let windows = naive_windows(w, k, sigma);
    let bowfree = windows.windows(2).all(|p| p[0] != p[1]);
    let reported = check_bowfree_consequences(w, k, sigma).map_err(|e| e.to_string())?;
    let expected = if bowfree { BowfreeReport::Pass } else { BowfreeReport::NotApplicable };
    if reported != expected {
        return Err(format!("{}: library reports {reported:?}, expected {expected:?}", text(w)));
    }
    if !bowfree {
        return Ok(());
    }
    for i in 0..w.len().saturating_sub(k) {
        if w[i] == w[i + k] {
            return Err(format!("{}: letter {} repeats {k} places later", text(w), i));
        }
    }
    for (i, c) in windows.iter().enumerate() {
        if let Some(j) = c.iter().position(|&x| x as usize == k) {
            if let Some(later) = windows.get(i + k) {
                if later[j] != 0 {
                    return Err(format!("{}: window {} after corner still has letter {j}", text(w), i + k));
                }
            }
        }
    }
    Ok(())
}

/// The word built from a bowfree itinerary has exactly that itinerary.
pub fn check_itinerary(itinerary: &[ParikhVector], k: usize, sigma: usize) -> Result<(), String> {
    let it = Itinerary::new(itinerary.to_vec()).map_err(|e| e.to_string())?;
    let w = string_from_itinerary(&it, k).map_err(|e| e.to_string())?;
    let mut got = naive_windows(&w, k, sigma);
    got.dedup();
    let want: Vec<Vec<u32>> = itinerary.iter().map(|p| p.counts().to_vec()).collect();
    if got != want {
        return Err(format!("{} does not follow the itinerary {want:?}", text(&w)));
    }
    Ok(())
}

/// Meet and join are idempotent, commutative, absorbing and bound their
/// arguments.
pub fn check_lattice_laws(p: &ParikhVector, q: &ParikhVector) -> Result<(), String> {
    let m = |a: &ParikhVector, b: &ParikhVector| meet(&[a.clone(), b.clone()]).unwrap();
    let j = |a: &ParikhVector, b: &ParikhVector| join(&[a.clone(), b.clone()]).unwrap();
    let le = |a: &ParikhVector, b: &ParikhVector| a.counts().iter().zip(b.counts()).all(|(x, y)| x <= y);
    let checks = [
        ("idempotent meet", m(p, p) == *p),
        ("idempotent join", j(p, p) == *p),
        ("commutative meet", m(p, q) == m(q, p)),
        ("commutative join", j(p, q) == j(q, p)),
        ("absorption", m(p, &j(p, q)) == *p && j(p, &m(p, q)) == *p),
        ("bounds", le(&m(p, q), p) && le(&m(p, q), q) && le(p, &j(p, q)) && le(q, &j(p, q))),
    ];
    match checks.iter().find(|(_, ok)| !ok) {
        Some((name, _)) => Err(format!("{name} fails for {p}, {q}")),
        None => Ok(()),
    }
}

/// Every clique of `H(k, σ)` has a common child or a common parent, found
/// by trying all vectors one order below and above; the classification
/// must agree. Returns the number of cliques with at least two vertices.
pub fn check_clique_lemma(k: usize, sigma: usize) -> Result<usize, String> {
    let vs = enumerate_pv(k, sigma).map_err(|e| e.to_string())?;
    let lower = if k >= 1 { enumerate_pv(k - 1, sigma).unwrap_or_default() } else { Vec::new() };
    let upper = enumerate_pv(k + 1, sigma).map_err(|e| e.to_string())?;
    let adjacent = |a: &ParikhVector, b: &ParikhVector| {
        let diff: u32 = a.counts().iter().zip(b.counts()).map(|(x, y)| x.abs_diff(*y)).sum();
        diff == 2
    };
    let below = |c: &ParikhVector, p: &ParikhVector| {
        let diff: Vec<i64> = p.counts().iter().zip(c.counts()).map(|(&x, &y)| x as i64 - y as i64).collect();
        diff.iter().all(|&d| d == 0 || d == 1) && diff.iter().sum::<i64>() == 1
    };

    let mut count = 0;
    let mut stack: Vec<(Vec<usize>, usize)> = (0..vs.len()).map(|i| (vec![i], i + 1)).collect();
    while let Some((clique, _)) = stack.pop() {
        for j in clique[clique.len() - 1] + 1..vs.len() {
            if clique.iter().all(|&i| adjacent(&vs[i], &vs[j])) {
                let mut bigger = clique.clone();
                bigger.push(j);
                stack.push((bigger, j + 1));
            }
        }
        if clique.len() < 2 {
            continue;
        }
        count += 1;
        let members: Vec<ParikhVector> = clique.iter().map(|&i| vs[i].clone()).collect();
        let child = lower.iter().find(|c| members.iter().all(|p| below(c, p)));
        let parent = upper.iter().find(|u| members.iter().all(|p| below(p, u)));
        if child.is_none() && parent.is_none() {
            return Err(format!("clique {members:?} has neither a common child nor a common parent"));
        }
        if members.len() >= 3 && child.is_some() && parent.is_some() {
            return Err(format!("clique {members:?} has both a common child and a common parent"));
        }
        let c = classify_clique(&members).map_err(|e| e.to_string())?;
        let want = match (child.is_some(), parent.is_some()) {
            (true, true) => CliqueKind::Both,
            (true, false) => CliqueKind::CommonChild,
            _ => CliqueKind::CommonParent,
        };
        if c.kind != want || c.common_child.as_ref() != child || c.common_parent.as_ref() != parent {
            return Err(format!("classification of {members:?} is {:?}, expected {want:?}", c.kind));
        }
    }
    Ok(count)
}

/// Brute-force Parikh set from naive window counts.
pub fn naive_parikh_set(w: &[Letter], k: usize, sigma: usize) -> BTreeSet<Vec<u32>> {
    naive_windows(w, k, sigma).into_iter().collect()
}

pub fn library_parikh_set(w: &[Letter], k: usize, sigma: usize) -> BTreeSet<Vec<u32>> {
    parikh_set(w, k, sigma).unwrap().iter().map(|p| p.counts().to_vec()).collect()
}

/// A word of length `k..=k+extra` over `1..=max_sigma` letters, with its
/// `k ≤ max_k` and `σ`.
pub fn word_strategy(
    max_k: usize,
    max_sigma: usize,
    extra: usize,
) -> impl Strategy<Value = (Vec<Letter>, usize, usize)> {
    (1..=max_k, 1..=max_sigma).prop_flat_map(move |(k, sigma)| {
        prop::collection::vec(0..sigma as Letter, k..=k + extra).prop_map(move |w| (w, k, sigma))
    })
}

/// Like [`word_strategy`] with at least two letters, repaired so that no
/// letter recurs exactly `k` places later (its walk uses no bow).
pub fn bowfree_word_strategy(
    max_k: usize,
    max_sigma: usize,
    extra: usize,
) -> impl Strategy<Value = (Vec<Letter>, usize, usize)> {
    (1..=max_k, 2..=max_sigma.max(2)).prop_flat_map(move |(k, sigma)| {
        prop::collection::vec(0..sigma as Letter, k..=k + extra).prop_map(move |mut w| {
            for i in k..w.len() {
                if w[i] == w[i - k] {
                    w[i] = (w[i] + 1) % sigma as Letter;
                }
            }
            (w, k, sigma)
        })
    })
}

/// Two vectors over the same alphabet of up to `max_sigma` letters.
pub fn pv_pair_strategy(max_sigma: usize, max_count: u32) -> impl Strategy<Value = (ParikhVector, ParikhVector)> {
    (1..=max_sigma).prop_flat_map(move |sigma| {
        let one = prop::collection::vec(0..=max_count, sigma).prop_map(ParikhVector::new);
        (one.clone(), one)
    })
}

/// A vector of order `k ≤ max_k` over up to `max_sigma` letters.
pub fn pv_strategy(max_k: usize, max_sigma: usize) -> impl Strategy<Value = ParikhVector> {
    (1..=max_k, 1..=max_sigma).prop_flat_map(|(k, sigma)| {
        prop::collection::vec(0..sigma, k).prop_map(move |letters| {
            let mut c = vec![0u32; sigma];
            for l in letters {
                c[l] += 1;
            }
            ParikhVector::new(c)
        })
    })
}

/// All cyclic words of length `C(σ+k-1, k)` whose cyclic windows realize
/// every order-`k` vector once, by trying every word.
pub fn naive_universal_cycles(k: usize, sigma: usize) -> Vec<Vec<Letter>> {
    let n = pascal(sigma + k - 1, k) as usize;
    let mut out = Vec::new();
    let mut w = vec![0 as Letter; n];
    loop {
        let mut cyclic = w.clone();
        cyclic.extend_from_slice(&w[..k - 1]);
        let windows = naive_windows(&cyclic, k, sigma);
        let distinct: HashSet<&Vec<u32>> = windows.iter().collect();
        if distinct.len() == n {
            out.push(w.clone());
        }
        if !next_word(&mut w, sigma) {
            return out;
        }
    }
}

/// Runs `check` on `cases` random inputs, reporting the first failure.
pub fn run_property<S: Strategy>(
    cases: u32,
    strategy: S,
    check: impl Fn(S::Value) -> Result<(), String>,
) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    let config = ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, |v| check(v).map_err(TestCaseError::fail)).map_err(|e| e.to_string())
}
