//! Bundle scores: the potential function behind the always-"no" result for
//! planar simple instances with breakable degrees above 5 and unbreakable
//! degrees above 4.
//!
//! A bundle at `x` is a maximal cyclic run, in rotation order, of half-edges
//! whose far endpoint currently has degree 1. Scores depend on the current
//! state only; nothing is carried across breaks.

use thiserror::Error;

use crate::graph::{GraphError, HalfEdge, Multigraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScoreError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("input is not a tree")]
    NotATree,
    #[error("tree has a single vertex")]
    SingleVertex,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bundle {
    pub vertex: VertexId,
    /// Consecutive in rotation order.
    pub members: Vec<HalfEdge>,
}

impl Bundle {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// -1 for a lone edge, size - 1 otherwise.
    pub fn score(&self) -> i64 {
        match self.members.len() {
            1 => -1,
            n => n as i64 - 1,
        }
    }
}

pub fn bundles_at(g: &Multigraph, x: VertexId) -> Result<Vec<Bundle>, ScoreError> {
    let rot = g.rotation().ok_or(GraphError::MissingRotation)?;
    let order = rot.get(&x).ok_or(GraphError::UnknownVertex(x))?;
    let to_leaf: Vec<bool> = order
        .iter()
        .map(|&h| g.degree(g.neighbor_across(h)) == 1)
        .collect();
    let bundle = |members: Vec<HalfEdge>| Bundle { vertex: x, members };
    let Some(start) = to_leaf.iter().position(|&leaf| !leaf) else {
        // No separating edge: the whole neighbourhood is one bundle.
        return Ok(if order.is_empty() { Vec::new() } else { vec![bundle(order.clone())] });
    };
    // Walk once around starting just after a separator so no run wraps.
    let d = order.len();
    let mut out = Vec::new();
    let mut run = Vec::new();
    for step in 1..=d {
        let i = (start + step) % d;
        if to_leaf[i] {
            run.push(order[i]);
        } else if !run.is_empty() {
            out.push(bundle(std::mem::take(&mut run)));
        }
    }
    Ok(out)
}

pub fn vertex_score(g: &Multigraph, x: VertexId) -> Result<i64, ScoreError> {
    Ok(bundles_at(g, x)?.iter().map(Bundle::score).sum())
}

/// Sum of vertex scores.
pub fn score(g: &Multigraph) -> Result<i64, ScoreError> {
    g.vertex_ids().map(|x| vertex_score(g, x)).sum()
}

/// The three quantities compared by the tree-score lemma.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeCounts {
    pub leaves: usize,
    pub degree_two: usize,
    pub edges: usize,
}

impl TreeCounts {
    /// `2 * leaves + degree_two > edges`.
    pub fn holds(&self) -> bool {
        2 * self.leaves + self.degree_two > self.edges
    }
}

pub fn tree_counts(t: &Multigraph) -> Result<TreeCounts, ScoreError> {
    if !t.is_tree() {
        return Err(ScoreError::NotATree);
    }
    if t.vertex_count() < 2 {
        return Err(ScoreError::SingleVertex);
    }
    let count = |d: usize| t.vertex_ids().filter(|&v| t.degree(v) == d).count();
    Ok(TreeCounts { leaves: count(1), degree_two: count(2), edges: t.edge_count() })
}

pub fn tree_score_inequality(t: &Multigraph) -> Result<bool, ScoreError> {
    Ok(tree_counts(t)?.holds())
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::corpus;
    use crate::graph::VertexKind::{Breakable as B, Unbreakable as U};

    fn vid(v: u64) -> VertexId {
        VertexId(v)
    }

    /// Degree-10 centre 0 whose rotation reads L L X L L X L L L X, where the
    /// leaves L are 1..=7 and the X neighbours 8, 9, 10 also meet vertex 11.
    fn mixed_bundles() -> Multigraph {
        let pattern = [1, 2, 8, 3, 4, 9, 5, 6, 7, 10];
        let mut edges: Vec<[VertexId; 2]> = pattern.iter().map(|&n| [vid(0), vid(n)]).collect();
        edges.extend((8..=10).map(|n| [vid(n), vid(11)]));
        let g = Multigraph::new((0..12).map(|v| (vid(v), U)), edges).unwrap();
        let rot: BTreeMap<VertexId, Vec<HalfEdge>> =
            g.vertex_ids().map(|v| (v, g.incident(v).to_vec())).collect();
        g.with_rotation(rot).unwrap()
    }

    #[test]
    fn mixed_bundles_and_score() {
        let g = mixed_bundles();
        let mut sizes: Vec<usize> = bundles_at(&g, vid(0)).unwrap().iter().map(Bundle::len).collect();
        sizes.sort();
        assert_eq!(sizes, vec![2, 2, 3]);
        // (2 - 1) + (2 - 1) + (3 - 1)
        assert_eq!(vertex_score(&g, vid(0)).unwrap(), 4);
        assert_eq!(score(&g).unwrap(), 4);
    }

    #[test]
    fn bundles_are_contiguous_runs() {
        let g = mixed_bundles();
        let order = &g.rotation().unwrap()[&vid(0)];
        for b in bundles_at(&g, vid(0)).unwrap() {
            let first = order.iter().position(|&h| h == b.members[0]).unwrap();
            for (k, h) in b.members.iter().enumerate() {
                assert_eq!(order[(first + k) % order.len()], *h);
            }
        }
    }

    #[test]
    fn no_leaf_neighbours_no_bundles() {
        let g = corpus::k4();
        assert!(bundles_at(&g, vid(0)).unwrap().is_empty());
        assert_eq!(score(&g).unwrap(), 0);
        assert_eq!(score(&corpus::icosahedron(B)).unwrap(), 0);
    }

    #[test]
    fn star_centre_is_one_bundle() {
        let g = corpus::star(B, 6);
        let bundles = bundles_at(&g, vid(0)).unwrap();
        assert_eq!(bundles.len(), 1);
        assert_eq!(bundles[0].len(), 6);
        assert_eq!(score(&g).unwrap(), 5);
    }

    #[test]
    fn single_bundle_scores_minus_one() {
        // Path 0 - 1 - 2 - 3: vertex 1 sees leaf 0 and non-leaf 2.
        let g = corpus::path(&[U, U, U, U]);
        assert_eq!(vertex_score(&g, vid(1)).unwrap(), -1);
        assert_eq!(score(&g).unwrap(), -2);
    }

    #[test]
    fn missing_rotation_is_an_error() {
        let g = corpus::star(U, 3).without_rotation();
        assert_eq!(score(&g), Err(ScoreError::Graph(GraphError::MissingRotation)));
    }

    #[test]
    fn tree_inequality_examples() {
        let two = corpus::path(&[U, U]);
        assert_eq!(tree_counts(&two).unwrap(), TreeCounts { leaves: 2, degree_two: 0, edges: 1 });
        let star = corpus::star(U, 5);
        assert_eq!(tree_counts(&star).unwrap(), TreeCounts { leaves: 5, degree_two: 0, edges: 5 });
        let p4 = corpus::path(&[U, U, U, U]);
        assert_eq!(tree_counts(&p4).unwrap(), TreeCounts { leaves: 2, degree_two: 2, edges: 3 });
        for t in [two, star, p4] {
            assert!(tree_score_inequality(&t).unwrap());
        }
    }

    #[test]
    fn tree_inequality_rejects_bad_input() {
        assert_eq!(tree_score_inequality(&corpus::cycle(&[U, U, U])), Err(ScoreError::NotATree));
        assert_eq!(tree_score_inequality(&corpus::path(&[U])), Err(ScoreError::SingleVertex));
    }
}
