//! Words as walks in the directed grid.
//!
//! The `i`-th vertex of the walk of a word is the Parikh vector of its
//! `i`-th length-`k` window, and the step from window `i` to `i+1` carries
//! the label `(w_i, w_{i+k})`. Going the other way, a walk spells a word only
//! if the letters forced by its steps are consistent.
//!
//! Positions of a word fall into `k` chains `r, r+k, r+2k, …`. A step
//! between distinct vertices fixes the letter leaving the window and the one
//! entering `k` positions later; an unlabeled bow only says those two
//! positions carry the same letter. Deciding realizability is therefore a
//! per-chain consistency check followed by a check that the letters forced
//! into the first window fit its Parikh vector.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::EdgeLabel;
use crate::parikh::{Letter, ParikhVector, Windows};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Walk {
    pub k: usize,
    pub sigma: usize,
    pub vertices: Vec<ParikhVector>,
    pub labels: Option<Vec<EdgeLabel>>,
}

impl Walk {
    /// Checks that every vertex has order `k` over a common alphabet and
    /// that labels, when given, number one per step.
    pub fn new(k: usize, vertices: Vec<ParikhVector>, labels: Option<Vec<EdgeLabel>>) -> Result<Self> {
        let first = vertices.first().ok_or_else(|| Error::invalid("empty walk"))?;
        if k == 0 {
            return Err(Error::invalid("walk order k must be at least 1"));
        }
        let sigma = first.sigma();
        for (i, p) in vertices.iter().enumerate() {
            if p.sigma() != sigma || p.order() != k {
                return Err(Error::invalid(format!(
                    "vertex {i} = {p} is not an order-{k} vector over {sigma} letters"
                )));
            }
        }
        if let Some(labels) = &labels {
            if labels.len() + 1 != vertices.len() {
                return Err(Error::invalid(format!(
                    "{} labels given for a walk with {} steps",
                    labels.len(),
                    vertices.len() - 1
                )));
            }
        }
        Ok(Walk { k, sigma, vertices, labels })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn without_labels(&self) -> Walk {
        Walk { labels: None, ..self.clone() }
    }

    pub fn is_bowfree(&self) -> bool {
        self.vertices.windows(2).all(|w| w[0] != w[1])
    }

    /// The walk with runs of repeated vertices collapsed.
    pub fn itinerary(&self) -> Itinerary {
        let mut vertices = self.vertices.clone();
        vertices.dedup();
        Itinerary { vertices }
    }
}

/// A walk without bows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Itinerary {
    vertices: Vec<ParikhVector>,
}

impl Itinerary {
    pub fn new(vertices: Vec<ParikhVector>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::invalid("empty itinerary"));
        }
        if let Some(i) = vertices.windows(2).position(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("itinerary repeats vertex {} at step {i}", vertices[i])));
        }
        Ok(Itinerary { vertices })
    }

    pub fn vertices(&self) -> &[ParikhVector] {
        &self.vertices
    }
}

/// The walk spelled by `word` in the order-`k` grid.
pub fn walk_of(word: &[Letter], k: usize, sigma: usize) -> Result<Walk> {
    if k == 0 || word.len() < k {
        return Err(Error::invalid(format!("word of length {} has no windows of length {k}", word.len())));
    }
    let vertices: Vec<_> = Windows::new(word, k, sigma)?.collect();
    let labels = (0..vertices.len() - 1).map(|i| EdgeLabel::new(word[i], word[i + k])).collect();
    Ok(Walk { k, sigma, vertices, labels: Some(labels) })
}

/// The vectors one order above and below a step of a word's walk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepIncidence {
    /// Letters `i..i+k+1`: the common child of the step's two windows.
    pub join: ParikhVector,
    /// Letters `i+1..i+k`: their common parent.
    pub meet: ParikhVector,
}

/// One entry per step `i → i+1` of [`walk_of`].
pub fn step_incidences(word: &[Letter], k: usize, sigma: usize) -> Result<Vec<StepIncidence>> {
    let steps = walk_of(word, k, sigma)?.len() - 1;
    (0..steps)
        .map(|i| {
            Ok(StepIncidence {
                join: crate::parikh::pv_of(&word[i..i + k + 1], sigma)?,
                meet: crate::parikh::pv_of(&word[i + 1..i + k], sigma)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RefutationKind {
    /// Consecutive vertices are neither equal nor neighbors.
    NotAdjacent,
    /// A given label is not an arc between its two vertices.
    InvalidLabel,
    /// The letter leaving at this step differs from the one that entered
    /// `k` steps earlier.
    LetterConflict,
    /// The letters forced into the first window do not fit its vector.
    InitialWindow,
}

/// Why a walk spells no word. `index` is the step (or, for
/// [`RefutationKind::InitialWindow`], the vertex `0`) where it fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refutation {
    pub index: usize,
    pub kind: RefutationKind,
}

impl fmt::Display for Refutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            RefutationKind::NotAdjacent => "consecutive vertices are not adjacent",
            RefutationKind::InvalidLabel => "label is not an arc between the vertices",
            RefutationKind::LetterConflict => "outgoing letter contradicts an earlier step",
            RefutationKind::InitialWindow => "forced letters do not fit the first window",
        };
        write!(f, "{what} (constraint {})", self.index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Realizability {
    Realizable { word: Vec<Letter>, labels: Vec<EdgeLabel> },
    Unrealizable(Refutation),
}

impl Realizability {
    pub fn is_realizable(&self) -> bool {
        matches!(self, Realizability::Realizable { .. })
    }
}

/// Decides whether the vertex sequence of `walk` spells some word; labels
/// on the walk are ignored. On success returns the lexicographically
/// smallest such word and its labels.
pub fn is_realizable_walk(walk: &Walk) -> Result<Realizability> {
    let walk = Walk::new(walk.k, walk.vertices.clone(), None)?;
    Ok(match solve(&walk)? {
        Ok(word) => {
            let k = walk.k;
            let labels = (0..walk.len() - 1).map(|i| EdgeLabel::new(word[i], word[i + k])).collect();
            Realizability::Realizable { word, labels }
        }
        Err(r) => Realizability::Unrealizable(r),
    })
}

/// A word spelled by `walk`, honoring its labels when present; otherwise
/// the lexicographically smallest one.
pub fn spell(walk: &Walk) -> Result<Vec<Letter>> {
    let walk = Walk::new(walk.k, walk.vertices.clone(), walk.labels.clone())?;
    solve(&walk)?.map_err(Error::Unrealizable)
}

#[derive(Clone, Copy)]
enum Step {
    Fixed { out: Letter, into: Letter },
    Free,
}

#[derive(Clone, Copy, PartialEq)]
enum Slot {
    Known(Letter),
    ChainStart,
}

fn solve(walk: &Walk) -> Result<std::result::Result<Vec<Letter>, Refutation>> {
    let (k, sigma, m) = (walk.k, walk.sigma, walk.len());
    let n = m + k - 1;
    let vs = &walk.vertices;

    let mut steps = Vec::with_capacity(m - 1);
    for i in 0..m - 1 {
        let (p, q) = (&vs[i], &vs[i + 1]);
        let step = match walk.labels.as_ref().map(|ls| ls[i]) {
            Some(label) => {
                if !label.fits(p, q) {
                    let kind = if p == q || p.is_neighbor(q) {
                        RefutationKind::InvalidLabel
                    } else {
                        RefutationKind::NotAdjacent
                    };
                    return Ok(Err(Refutation { index: i, kind }));
                }
                Step::Fixed { out: label.out_letter, into: label.in_letter }
            }
            None if p == q => Step::Free,
            None => match p.shift_to(q) {
                Some((o, c)) => Step::Fixed { out: o as Letter, into: c as Letter },
                None => return Ok(Err(Refutation { index: i, kind: RefutationKind::NotAdjacent })),
            },
        };
        steps.push(step);
    }

    // Walk each chain r, r+k, … carrying either a known letter or the
    // still-undetermined letter of the chain start.
    let mut slots = vec![Slot::ChainStart; n];
    let mut conflict: Option<usize> = None;
    for r in 0..k {
        let mut cur = Slot::ChainStart;
        let mut pos = r;
        while pos < n {
            slots[pos] = cur;
            if pos >= m - 1 {
                pos += k;
                continue;
            }
            match steps[pos] {
                Step::Fixed { out, into } => {
                    match cur {
                        Slot::Known(x) if x != out => {
                            conflict = Some(conflict.map_or(pos, |c| c.min(pos)));
                            break;
                        }
                        Slot::Known(_) => {}
                        Slot::ChainStart => {
                            let mut back = r;
                            while back <= pos {
                                slots[back] = Slot::Known(out);
                                back += k;
                            }
                        }
                    }
                    cur = Slot::Known(into);
                }
                Step::Free => {}
            }
            pos += k;
        }
    }

    // Letters forced into the first window must fit its vector; the
    // remaining letters go to undetermined chains in ascending order.
    let mut remaining: Vec<u32> = vs[0].counts().to_vec();
    let mut fits = true;
    for slot in &slots[..k] {
        if let Slot::Known(x) = *slot {
            if remaining[x as usize] == 0 {
                fits = false;
                break;
            }
            remaining[x as usize] -= 1;
        }
    }
    if !fits {
        return Ok(Err(Refutation { index: 0, kind: RefutationKind::InitialWindow }));
    }
    if let Some(index) = conflict {
        return Ok(Err(Refutation { index, kind: RefutationKind::LetterConflict }));
    }
    let mut free_letters = (0..sigma).flat_map(|x| std::iter::repeat_n(x as Letter, remaining[x] as usize));
    let mut word = vec![0 as Letter; n];
    for r in 0..k {
        let start = match slots[r] {
            Slot::Known(x) => x,
            Slot::ChainStart => free_letters.next().expect("counts balance"),
        };
        let mut pos = r;
        while pos < n {
            word[pos] = match slots[pos] {
                Slot::Known(x) => x,
                Slot::ChainStart => start,
            };
            pos += k;
        }
    }
    debug_assert_eq!(Windows::new(&word, k, sigma)?.collect::<Vec<_>>(), *vs);
    Ok(Ok(word))
}

/// Builds a word whose walk has exactly the given itinerary.
///
/// Starts from the sorted word of the first vertex. To move to the next
/// vertex, which swaps outgoing letter `x` for incoming letter `y`, the
/// earliest `x` in the current last window is located; the letters before
/// it in that window are repeated (bows at the current vertex) and `y` is
/// appended.
pub fn string_from_itinerary(itinerary: &Itinerary, k: usize) -> Result<Vec<Letter>> {
    let vs = itinerary.vertices();
    let sigma = vs[0].sigma();
    for (i, p) in vs.iter().enumerate() {
        if p.order() != k || p.sigma() != sigma {
            return Err(Error::invalid(format!("vertex {i} = {p} is not of order {k}")));
        }
    }
    let mut word = vs[0].canonical_word();
    for (i, pair) in vs.windows(2).enumerate() {
        let (out, into) = pair[0].shift_to(&pair[1]).ok_or_else(|| {
            Error::invalid(format!("itinerary step {i}: {} and {} are not neighbors", pair[0], pair[1]))
        })?;
        let start = word.len() - k;
        let first =
            (start..word.len()).find(|&q| word[q] as usize == out).expect("outgoing letter occurs in the last window");
        for t in start..first {
            word.push(word[t]);
        }
        word.push(into as Letter);
    }
    Ok(word)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum BowfreeReport {
    /// The walk of the word uses a bow (or the word is shorter than `k`).
    NotApplicable,
    Pass,
    /// `clause` 1: `w_i = w_{i+k}`; clause 2: the window `k` steps after a
    /// corner `k·e_j` still contains letter `j`. `position` is 0-based.
    Fail {
        clause: u8,
        position: usize,
    },
}

/// For a word whose walk avoids bows, checks that no letter recurs exactly
/// `k` positions later, and that the window `k` steps after a corner
/// vertex `k·e_j` contains no letter `j`.
pub fn check_bowfree_consequences(word: &[Letter], k: usize, sigma: usize) -> Result<BowfreeReport> {
    if k == 0 {
        return Err(Error::invalid("window length k must be at least 1"));
    }
    if word.len() < k {
        return Ok(BowfreeReport::NotApplicable);
    }
    let walk = walk_of(word, k, sigma)?;
    if !walk.is_bowfree() {
        return Ok(BowfreeReport::NotApplicable);
    }
    if let Some(i) = (0..word.len() - k).find(|&i| word[i] == word[i + k]) {
        return Ok(BowfreeReport::Fail { clause: 1, position: i });
    }
    let m = walk.len();
    for i in 0..m {
        let p = &walk.vertices[i];
        if p.support_size() != 1 || i + k >= m {
            continue;
        }
        let j = (0..sigma).find(|&j| p.get(j) > 0).expect("non-zero vertex");
        if walk.vertices[i + k].get(j) != 0 {
            return Ok(BowfreeReport::Fail { clause: 2, position: i });
        }
    }
    Ok(BowfreeReport::Pass)
}
