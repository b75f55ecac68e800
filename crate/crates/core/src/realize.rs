//! Which sets of order-`k` Parikh vectors are exactly `Π_k` of some word.
//!
//! A set is realizable precisely when it induces a connected subgraph of the
//! grid. A witness is built from a depth-first exploration of that subgraph,
//! fed through [`string_from_itinerary`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parikh::{meet, parikh_set, Letter, ParikhSet, ParikhVector};
use crate::walks::{string_from_itinerary, Itinerary};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizabilityResult {
    pub realizable: bool,
    pub witness: Option<Vec<Letter>>,
    /// Two distinct connected components, when not realizable.
    pub refutation: Option<(Vec<ParikhVector>, Vec<ParikhVector>)>,
}

/// Decides whether some word has exactly `set` as its order-`k` Parikh set.
pub fn is_realizable_set(set: &ParikhSet) -> Result<RealizabilityResult> {
    if set.is_empty() {
        return Err(Error::invalid("cannot realize an empty set of Parikh vectors"));
    }
    let members: Vec<&ParikhVector> = set.iter().collect();
    let index_of = |p: &ParikhVector| members.binary_search(&p).ok();
    let adjacency: Vec<Vec<usize>> =
        members.iter().map(|p| p.neighbors().iter().filter_map(&index_of).collect()).collect();

    let components = components(&adjacency);
    if components.len() > 1 {
        let collect = |c: &Vec<usize>| c.iter().map(|&i| members[i].clone()).collect::<Vec<_>>();
        return Ok(RealizabilityResult {
            realizable: false,
            witness: None,
            refutation: Some((collect(&components[0]), collect(&components[1]))),
        });
    }

    let tour = exploration_walk(&adjacency);
    let itinerary = Itinerary::new(tour.into_iter().map(|i| members[i].clone()).collect())?;
    let witness = string_from_itinerary(&itinerary, set.k)?;
    let got = parikh_set(&witness, set.k, set.sigma)?;
    assert_eq!(got.members, set.members, "witness must realize the set exactly");
    Ok(RealizabilityResult { realizable: true, witness: Some(witness), refutation: None })
}

/// Convenience wrapper over [`is_realizable_set`] for a slice of vectors.
pub fn is_realizable(vectors: &[ParikhVector]) -> Result<RealizabilityResult> {
    let first = vectors.first().ok_or_else(|| Error::invalid("cannot realize an empty set of Parikh vectors"))?;
    let set = ParikhSet::new(first.order(), first.sigma(), vectors.iter().cloned())?;
    is_realizable_set(&set)
}

fn components(adjacency: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; adjacency.len()];
    let mut out = Vec::new();
    for start in 0..adjacency.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &u in &adjacency[v] {
                if !seen[u] {
                    seen[u] = true;
                    comp.push(u);
                    stack.push(u);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Depth-first tour of a connected graph that walks back over tree edges,
/// cut after the last newly discovered vertex. Consecutive entries are
/// adjacent and distinct.
fn exploration_walk(adjacency: &[Vec<usize>]) -> Vec<usize> {
    let n = adjacency.len();
    let mut seen = vec![false; n];
    let mut tour = vec![0];
    let mut last_new = 0;
    seen[0] = true;
    let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
    while let Some(top) = stack.last_mut() {
        let (v, next) = *top;
        if let Some(&u) = adjacency[v].get(next) {
            top.1 += 1;
            if !seen[u] {
                seen[u] = true;
                tour.push(u);
                last_new = tour.len();
                stack.push((u, 0));
            }
        } else {
            stack.pop();
            if let Some(&(parent, _)) = stack.last() {
                tour.push(parent);
            }
        }
    }
    tour.truncate(last_new.max(1));
    tour
}

/// `a_i · t · a_j` where `q = p - e_i + e_j` and `t` is the sorted word of
/// the meet of `p` and `q`; its order-`k` Parikh set is `{p, q}`.
pub fn realizable_pair_witness(p: &ParikhVector, q: &ParikhVector) -> Result<Vec<Letter>> {
    let (out, into) = p.shift_to(q).ok_or_else(|| Error::invalid(format!("{p} and {q} are not neighbors")))?;
    let middle = meet(&[p.clone(), q.clone()])?;
    let mut w = vec![out as Letter];
    w.extend(middle.canonical_word());
    w.push(into as Letter);
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(c: &[u32]) -> ParikhVector {
        ParikhVector::new(c.to_vec())
    }

    fn text(w: &[Letter]) -> String {
        w.iter().map(|&l| char::from(b'a' + l)).collect()
    }

    #[test]
    fn singleton() {
        let r = is_realizable(&[pv(&[1, 2, 0])]).unwrap();
        assert!(r.realizable);
        assert_eq!(text(r.witness.as_ref().unwrap()), "abb");
    }

    #[test]
    fn non_neighbors() {
        let r = is_realizable(&[pv(&[3, 0, 0]), pv(&[0, 3, 0])]).unwrap();
        assert!(!r.realizable);
        let (a, b) = r.refutation.unwrap();
        assert_eq!((a.len(), b.len()), (1, 1));
    }

    #[test]
    fn neighbor_pair() {
        let r = is_realizable(&[pv(&[2, 1, 0]), pv(&[1, 2, 0])]).unwrap();
        assert_eq!(text(r.witness.as_ref().unwrap()), "aabb");
    }

    #[test]
    fn empty_is_error() {
        let set = ParikhSet::new(3, 3, []).unwrap();
        assert!(is_realizable_set(&set).is_err());
    }

    #[test]
    fn pair_witnesses() {
        let w = realizable_pair_witness(&pv(&[2, 1, 0]), &pv(&[1, 2, 0])).unwrap();
        assert_eq!(text(&w), "aabb");
        let w = realizable_pair_witness(&pv(&[5, 0, 0]), &pv(&[4, 1, 0])).unwrap();
        assert_eq!(text(&w), "aaaaab");
        let w = realizable_pair_witness(&pv(&[1, 1, 1]), &pv(&[0, 2, 1])).unwrap();
        assert_eq!(text(&w), "abcb");
        assert_eq!(parikh_set(&w, 3, 3).unwrap().len(), 2);
        assert!(realizable_pair_witness(&pv(&[3, 0, 0]), &pv(&[0, 3, 0])).is_err());
    }

    #[test]
    fn whole_grid_is_realizable() {
        let all = crate::parikh::enumerate_pv(4, 3).unwrap();
        let r = is_realizable(&all).unwrap();
        let w = r.witness.unwrap();
        assert_eq!(parikh_set(&w, 4, 3).unwrap().len(), 15);
    }
}
