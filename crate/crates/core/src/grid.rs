//! The Parikh-de-Bruijn grid of order `k` over `σ` letters.
//!
//! Vertices are the order-`k` Parikh vectors, stored by rank. Two vertices
//! are adjacent when one window shift turns one into the other
//! (`q = p - e_i + e_j`). The directed view doubles every edge into two
//! labeled arcs and adds one bow (labeled self-loop) per non-zero coordinate.
//! Adjacency is always derived from the vector itself; edge lists are only
//! materialized on request.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parikh::{enumerate_pv, join, meet, rank, Letter, ParikhVector, Shape};

/// Grids with more vertices than this are refused.
pub const MAX_MATERIALIZED: u64 = 1 << 24;

/// Label of a directed edge: the letter leaving the window, then the one entering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeLabel {
    pub out_letter: Letter,
    pub in_letter: Letter,
}

impl EdgeLabel {
    pub fn new(out_letter: Letter, in_letter: Letter) -> Self {
        EdgeLabel { out_letter, in_letter }
    }

    pub fn is_bow(&self) -> bool {
        self.out_letter == self.in_letter
    }

    pub fn reversed(&self) -> Self {
        EdgeLabel { out_letter: self.in_letter, in_letter: self.out_letter }
    }

    /// Whether this label is a valid arc from `from` to `to`.
    pub fn fits(&self, from: &ParikhVector, to: &ParikhVector) -> bool {
        let (o, i) = (self.out_letter as usize, self.in_letter as usize);
        if o >= from.sigma() || i >= from.sigma() {
            return false;
        }
        if self.is_bow() {
            from == to && from.get(o) > 0
        } else {
            from.shifted(o, i).as_ref() == Some(to)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectedEdge {
    pub from: usize,
    pub to: usize,
    pub label: EdgeLabel,
}

#[derive(Debug, Clone)]
pub struct PdbGrid {
    shape: Shape,
    vertices: Vec<ParikhVector>,
}

impl PdbGrid {
    pub fn build(k: usize, sigma: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("grid order k must be at least 1"));
        }
        let shape = Shape::new(k, sigma)?;
        let n = shape.vertex_count();
        if n > MAX_MATERIALIZED {
            return Err(Error::capacity(format!(
                "grid ({k},{sigma}) has {n} vertices; at most {MAX_MATERIALIZED} can be built"
            )));
        }
        Ok(PdbGrid { shape, vertices: enumerate_pv(k, sigma)? })
    }

    pub fn k(&self) -> usize {
        self.shape.k
    }

    pub fn sigma(&self) -> usize {
        self.shape.sigma
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[ParikhVector] {
        &self.vertices
    }

    pub fn vertex(&self, r: usize) -> &ParikhVector {
        &self.vertices[r]
    }

    /// Rank of `p` if it is a vertex of this grid.
    pub fn index_of(&self, p: &ParikhVector) -> Option<usize> {
        (p.sigma() == self.sigma() && p.order() == self.k()).then(|| rank(p) as usize)
    }

    pub fn neighbors_of(&self, r: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.vertices[r].neighbors().iter().map(|q| rank(q) as usize).collect();
        out.sort_unstable();
        out
    }

    pub fn degree(&self, r: usize) -> usize {
        self.vertices[r].support_size() * (self.sigma() - 1)
    }

    pub fn undirected_edge_count(&self) -> usize {
        (0..self.vertex_count()).map(|r| self.degree(r)).sum::<usize>() / 2
    }

    pub fn bow_count(&self) -> usize {
        self.vertices.iter().map(|p| p.support_size()).sum()
    }

    /// Each neighbor pair once, as `(smaller rank, larger rank)`.
    pub fn undirected_edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::with_capacity(self.undirected_edge_count());
        for r in 0..self.vertex_count() {
            for s in self.neighbors_of(r) {
                if r < s {
                    edges.push((r, s));
                }
            }
        }
        edges
    }

    /// `(vertex, letter)` for every bow.
    pub fn bows(&self) -> Vec<(usize, Letter)> {
        self.vertices
            .iter()
            .enumerate()
            .flat_map(|(r, p)| (0..self.sigma()).filter(move |&i| p.get(i) > 0).map(move |i| (r, i as Letter)))
            .collect()
    }

    /// All arcs of the directed grid, bows included.
    pub fn directed_edges(&self) -> Vec<DirectedEdge> {
        let sigma = self.sigma();
        let mut out = Vec::new();
        for (r, p) in self.vertices.iter().enumerate() {
            for i in 0..sigma {
                for j in 0..sigma {
                    if let Some(q) = p.shifted(i, j) {
                        out.push(DirectedEdge {
                            from: r,
                            to: rank(&q) as usize,
                            label: EdgeLabel::new(i as Letter, j as Letter),
                        });
                    }
                }
            }
        }
        out
    }

    /// Dense table `next[(r·σ + out)·σ + in]` of the vertex reached from `r`
    /// by a window shift, `u32::MAX` when `out` does not occur in `r`.
    pub fn transition_table(&self) -> Vec<u32> {
        let sigma = self.sigma();
        let mut table = vec![u32::MAX; self.vertex_count() * sigma * sigma];
        for (r, p) in self.vertices.iter().enumerate() {
            for i in 0..sigma {
                for j in 0..sigma {
                    if let Some(q) = p.shifted(i, j) {
                        table[(r * sigma + i) * sigma + j] = rank(&q) as u32;
                    }
                }
            }
        }
        table
    }

    /// Children of an order-`k+1` vector: the clique it spans in this grid.
    pub fn simplex_of_parent(&self, r: &ParikhVector) -> Result<Vec<ParikhVector>> {
        self.check_sigma(r)?;
        if r.order() != self.k() + 1 {
            return Err(Error::invalid(format!(
                "{r} has order {}, expected {} for a parent simplex of grid order {}",
                r.order(),
                self.k() + 1,
                self.k()
            )));
        }
        Ok(r.children())
    }

    /// Parents of an order-`k-1` vector: the clique it spans in this grid.
    pub fn simplex_of_child(&self, q: &ParikhVector) -> Result<Vec<ParikhVector>> {
        self.check_sigma(q)?;
        if q.order() + 1 != self.k() {
            return Err(Error::invalid(format!(
                "{q} has order {}, expected {} for a child simplex of grid order {}",
                q.order(),
                self.k() - 1,
                self.k()
            )));
        }
        Ok(q.parents())
    }

    fn check_sigma(&self, p: &ParikhVector) -> Result<()> {
        if p.sigma() != self.sigma() {
            return Err(Error::invalid(format!("{p} is not over a {}-letter alphabet", self.sigma())));
        }
        Ok(())
    }

    /// Planar coordinates of every vertex (by rank) for the triangular
    /// drawing of a 3-letter grid. Neighbors are at distance 1.
    pub fn layout_2d(&self) -> Result<Vec<(f64, f64)>> {
        if self.sigma() != 3 {
            return Err(Error::Unsupported(format!("2D layout needs a 3-letter alphabet, got {}", self.sigma())));
        }
        Ok(self.vertices.iter().map(layout_point).collect())
    }
}

fn layout_point(p: &ParikhVector) -> (f64, f64) {
    let (b, c) = (p.get(1) as f64, p.get(2) as f64);
    (b + c / 2.0, c * 3f64.sqrt() / 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CliqueKind {
    CommonChild,
    CommonParent,
    Both,
    NotAClique,
    Singleton,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueClassification {
    pub kind: CliqueKind,
    pub common_child: Option<ParikhVector>,
    pub common_parent: Option<ParikhVector>,
    /// A pair that is not adjacent, for [`CliqueKind::NotAClique`].
    pub non_adjacent: Option<(ParikhVector, ParikhVector)>,
}

/// Classifies a set of equal-order vectors by shared child and parent.
///
/// Pairwise-adjacent sets of three or more vectors have either a common
/// child (their meet) or a common parent (their join), never both. Two
/// adjacent vectors always share both, which is the `σ = 2` situation.
pub fn classify_clique(vs: &[ParikhVector]) -> Result<CliqueClassification> {
    let mut vs: Vec<ParikhVector> = vs.to_vec();
    vs.sort();
    vs.dedup();
    let first = vs.first().ok_or_else(|| Error::invalid("cannot classify an empty set"))?;
    let (k, sigma) = (first.order(), first.sigma());
    if let Some(bad) = vs.iter().find(|p| p.order() != k || p.sigma() != sigma) {
        return Err(Error::invalid(format!("{bad} does not have the same order as {first}")));
    }
    let mut result = CliqueClassification {
        kind: CliqueKind::Singleton,
        common_child: None,
        common_parent: None,
        non_adjacent: None,
    };
    if vs.len() == 1 {
        return Ok(result);
    }
    for (a, p) in vs.iter().enumerate() {
        for q in &vs[a + 1..] {
            if !p.is_neighbor(q) {
                result.kind = CliqueKind::NotAClique;
                result.non_adjacent = Some((p.clone(), q.clone()));
                return Ok(result);
            }
        }
    }
    let low = meet(&vs)?;
    let high = join(&vs)?;
    let has_child = low.order() + 1 == k;
    let has_parent = high.order() == k + 1;
    result.kind = match (has_child, has_parent) {
        (true, true) => CliqueKind::Both,
        (true, false) => CliqueKind::CommonChild,
        (false, true) => CliqueKind::CommonParent,
        (false, false) => {
            debug_assert!(false, "pairwise-adjacent vectors share a child or a parent");
            CliqueKind::NotAClique
        }
    };
    if has_child {
        result.common_child = Some(low);
    }
    if has_parent {
        result.common_parent = Some(high);
    }
    Ok(result)
}
