//! Hypergraph Spanning Tree and its two-way correspondence with TRVB.
//!
//! A hyperedge subset `S` is a spanning tree when the incidence graph
//! restricted to every vertex node plus the edge nodes in `S` is a tree.
//! Deleting a breakable node and breaking it are interchangeable once all of
//! its neighbours are unbreakable, which is what makes the two problems the
//! same.

use std::collections::BTreeSet;

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{Multigraph, VertexId, VertexKind};
use crate::reductions::{contract_unbreakable_adjacent, insert_unbreakable_deg2};
use crate::unionfind::UnionFind;

/// Largest hyperedge count `hst_brute` will enumerate.
pub const HST_GUARD: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypergraphError {
    #[error("hyperedge {edge} names unknown vertex {vertex}")]
    UnknownEndpoint { edge: usize, vertex: VertexId },
    #[error("hyperedge {edge} repeats endpoint {vertex}")]
    RepeatedEndpoint { edge: usize, vertex: VertexId },
    #[error("vertex {0} listed twice")]
    DuplicateVertex(VertexId),
    #[error("hyperedge index {index} out of range ({count} hyperedges)")]
    BadIndex { index: usize, count: usize },
    #[error("{edges} hyperedges exceed the brute-force guard of {guard}")]
    GuardExceeded { edges: usize, guard: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    vertices: BTreeSet<VertexId>,
    edges: Vec<BTreeSet<VertexId>>,
}

impl Hypergraph {
    /// Endpoint lists must name known vertices, each at most once.
    pub fn new(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: Vec<Vec<VertexId>>,
    ) -> Result<Self, HypergraphError> {
        let mut vs = BTreeSet::new();
        for v in vertices {
            if !vs.insert(v) {
                return Err(HypergraphError::DuplicateVertex(v));
            }
        }
        let mut sets = Vec::with_capacity(edges.len());
        for (edge, ends) in edges.into_iter().enumerate() {
            let mut set = BTreeSet::new();
            for vertex in ends {
                if !vs.contains(&vertex) {
                    return Err(HypergraphError::UnknownEndpoint { edge, vertex });
                }
                if !set.insert(vertex) {
                    return Err(HypergraphError::RepeatedEndpoint { edge, vertex });
                }
            }
            sets.push(set);
        }
        Ok(Self { vertices: vs, edges: sets })
    }

    pub fn vertices(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn edges(&self) -> &[BTreeSet<VertexId>] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of hyperedges containing `v`.
    pub fn degree(&self, v: VertexId) -> usize {
        self.edges.iter().filter(|e| e.contains(&v)).count()
    }

    /// Id given to the node of hyperedge `i` in the incidence graph.
    pub fn edge_node(&self, i: usize) -> VertexId {
        let base = self.vertices.iter().next_back().map_or(0, |v| v.0 + 1);
        VertexId(base + i as u64)
    }
}

/// Bipartite incidence graph: vertex nodes keep their ids and are
/// unbreakable; hyperedge `i` becomes breakable node `edge_node(i)`.
pub fn incidence_graph(h: &Hypergraph) -> Multigraph {
    let vertices = h
        .vertices
        .iter()
        .map(|&v| (v, VertexKind::Unbreakable))
        .chain((0..h.edges.len()).map(|i| (h.edge_node(i), VertexKind::Breakable)));
    let edges = h
        .edges
        .iter()
        .enumerate()
        .flat_map(|(i, ends)| ends.iter().map(move |&v| [h.edge_node(i), v]))
        .collect();
    Multigraph::new(vertices, edges).expect("incidence graph of a valid hypergraph")
}

/// Reverse direction of the correspondence; identical to `incidence_graph`.
pub fn hst_to_trvb(h: &Hypergraph) -> Multigraph {
    incidence_graph(h)
}

pub fn is_spanning_tree(h: &Hypergraph, s: &BTreeSet<usize>) -> Result<bool, HypergraphError> {
    if let Some(&index) = s.iter().find(|&&i| i >= h.edges.len()) {
        return Err(HypergraphError::BadIndex { index, count: h.edges.len() });
    }
    Ok(spanning(h, s.iter().copied()))
}

fn spanning(h: &Hypergraph, chosen: impl Iterator<Item = usize>) -> bool {
    let slot = |v: &VertexId| h.vertices.range(..*v).count();
    let n = h.vertices.len();
    let chosen: Vec<usize> = chosen.collect();
    let nodes = n + chosen.len();
    let incidences: usize = chosen.iter().map(|&i| h.edges[i].len()).sum();
    if nodes == 0 || incidences + 1 != nodes {
        return false;
    }
    let mut uf = UnionFind::new(nodes);
    for (j, &i) in chosen.iter().enumerate() {
        for v in &h.edges[i] {
            if !uf.union(n + j, slot(v)) {
                return false;
            }
        }
    }
    // Acyclic with nodes - 1 links, hence connected.
    true
}

/// Lexicographically least spanning tree (as a sorted index list), if any.
pub fn hst_brute(h: &Hypergraph) -> Result<Option<BTreeSet<usize>>, HypergraphError> {
    let m = h.edges.len();
    if m > HST_GUARD {
        return Err(HypergraphError::GuardExceeded { edges: m, guard: HST_GUARD });
    }
    let members = |mask: u32| (0..m).filter(move |&i| mask >> i & 1 == 1);
    let best = (0u32..1 << m)
        .into_par_iter()
        .filter(|&mask| spanning(h, members(mask)))
        .map(|mask| members(mask).collect::<Vec<_>>())
        .min();
    Ok(best.map(|v| v.into_iter().collect()))
}

/// Common hyperedge size, if every hyperedge has the same size.
pub fn uniformity(h: &Hypergraph) -> Option<usize> {
    constant(h.edges.iter().map(BTreeSet::len))
}

/// Common vertex degree, if every vertex lies in the same number of hyperedges.
pub fn regularity(h: &Hypergraph) -> Option<usize> {
    constant(h.vertices.iter().map(|&v| h.degree(v)))
}

fn constant(mut it: impl Iterator<Item = usize>) -> Option<usize> {
    let first = it.next()?;
    it.all(|x| x == first).then_some(first)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HstReduction {
    /// An unbreakable self-loop survived contraction: no break set can work.
    TrivialNo,
    Hypergraph {
        hypergraph: Hypergraph,
        /// Breakable vertex of the rewritten graph behind each hyperedge.
        sources: Vec<VertexId>,
        /// Breakable vertices joined to one unbreakable neighbour by several
        /// edges. Leaving one unbroken closes a cycle, so they are broken
        /// outright and contribute no hyperedge.
        forced: Vec<VertexId>,
    },
}

/// Contracts unbreakable-unbreakable edges, subdivides breakable-breakable
/// edges once, then reads the bipartite result as an incidence graph.
pub fn trvb_to_hst(g: &Multigraph) -> HstReduction {
    let contracted = contract_unbreakable_adjacent(g);
    let rewritten = subdivide_breakable_pairs(&contracted);
    let unbreakable_loop = rewritten
        .edges()
        .iter()
        .any(|&[a, b]| a == b && !rewritten.is_breakable(a));
    if unbreakable_loop {
        return HstReduction::TrivialNo;
    }
    let vertices = rewritten.vertices().filter(|&(_, k)| k == VertexKind::Unbreakable).map(|(v, _)| v);
    let mut edges = Vec::new();
    let mut sources = Vec::new();
    let mut forced = Vec::new();
    for b in rewritten.breakable_vertices() {
        let ends: Vec<VertexId> = rewritten
            .incident(b)
            .iter()
            .map(|&h| rewritten.neighbor_across(h))
            .collect();
        let distinct: BTreeSet<VertexId> = ends.iter().copied().collect();
        if distinct.len() < ends.len() {
            forced.push(b);
        } else {
            edges.push(ends);
            sources.push(b);
        }
    }
    let hypergraph = Hypergraph::new(vertices, edges).expect("bipartite rewrite yields a hypergraph");
    HstReduction::Hypergraph { hypergraph, sources, forced }
}

/// Inserts one unbreakable vertex into every edge with two breakable ends,
/// self-loops included.
fn subdivide_breakable_pairs(g: &Multigraph) -> Multigraph {
    let mut next = g.max_id().map_or(0, |m| m.0 + 1);
    let mut vertices: Vec<(VertexId, VertexKind)> = g.vertices().collect();
    let mut edges = Vec::new();
    for &[a, b] in g.edges() {
        if g.is_breakable(a) && g.is_breakable(b) {
            let mid = VertexId(next);
            next += 1;
            vertices.push((mid, VertexKind::Unbreakable));
            edges.push([a, mid]);
            edges.push([mid, b]);
        } else {
            edges.push([a, b]);
        }
    }
    Multigraph::new(vertices, edges).expect("subdivision of a valid graph")
}

/// Applies the same subdivision with rotations kept, for callers that want
/// the rewritten TRVB instance itself.
pub fn bipartite_rewrite(g: &Multigraph) -> Multigraph {
    let contracted = contract_unbreakable_adjacent(g);
    if contracted.rotation().is_none() {
        return subdivide_breakable_pairs(&contracted);
    }
    // Subdivide every edge once, then contract back the edges that did not
    // need it; both steps carry the rotation.
    let once = insert_unbreakable_deg2(&contracted, 1);
    contract_unbreakable_adjacent(&once)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::graph::VertexKind::{Breakable as B, Unbreakable as U};
    use crate::solver::solve;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn vid(v: u64) -> VertexId {
        VertexId(v)
    }

    fn hg(n: u64, edges: &[&[u64]]) -> Hypergraph {
        Hypergraph::new((0..n).map(vid), edges.iter().map(|e| e.iter().map(|&v| vid(v)).collect()).collect())
            .unwrap()
    }

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    fn reduction_answer(g: &Multigraph) -> bool {
        match trvb_to_hst(g) {
            HstReduction::TrivialNo => false,
            HstReduction::Hypergraph { hypergraph, .. } => hst_brute(&hypergraph).unwrap().is_some(),
        }
    }

    #[test]
    fn single_hyperedge_is_a_path() {
        let h = hg(2, &[&[0, 1]]);
        let g = incidence_graph(&h);
        assert_eq!(g.edges(), &[[vid(2), vid(0)], [vid(2), vid(1)]]);
        assert!(g.is_breakable(vid(2)));
        assert!(!g.is_breakable(vid(0)));
    }

    #[test]
    fn empty_edge_set_leaves_isolated_vertices() {
        let g = incidence_graph(&hg(3, &[]));
        assert_eq!((g.vertex_count(), g.edge_count()), (3, 0));
        assert!(g.vertex_ids().all(|v| g.degree(v) == 0));
    }

    #[test]
    fn spanning_tree_examples() {
        let h = hg(3, &[&[0, 1], &[1, 2]]);
        assert!(is_spanning_tree(&h, &set(&[0, 1])).unwrap());
        assert!(!is_spanning_tree(&h, &set(&[0])).unwrap());
        assert!(is_spanning_tree(&hg(1, &[]), &set(&[])).unwrap());
        assert_eq!(
            is_spanning_tree(&h, &set(&[2])),
            Err(HypergraphError::BadIndex { index: 2, count: 2 })
        );
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(hst_brute(&hg(3, &[&[0, 1], &[1, 2]])).unwrap(), Some(set(&[0, 1])));
        // Subsets of two parallel pairs: {} and both fail, either single edge works.
        let par = hg(2, &[&[0, 1], &[0, 1]]);
        let all: Vec<_> = [set(&[]), set(&[0]), set(&[1]), set(&[0, 1])]
            .into_iter()
            .filter(|s| is_spanning_tree(&par, s).unwrap())
            .collect();
        assert_eq!(all, vec![set(&[0]), set(&[1])]);
        assert_eq!(hst_brute(&par).unwrap(), Some(set(&[0])));
        assert_eq!(hst_brute(&hg(3, &[&[0, 1]])).unwrap(), None);
    }

    #[test]
    fn guard_is_enforced() {
        let edges: Vec<&[u64]> = vec![&[0, 1]; HST_GUARD + 1];
        assert_eq!(
            hst_brute(&hg(2, &edges)),
            Err(HypergraphError::GuardExceeded { edges: HST_GUARD + 1, guard: HST_GUARD })
        );
    }

    #[test]
    fn construction_rejects_bad_endpoints() {
        assert_eq!(
            Hypergraph::new([vid(0), vid(1)], vec![vec![vid(0), vid(0)]]),
            Err(HypergraphError::RepeatedEndpoint { edge: 0, vertex: vid(0) })
        );
        assert_eq!(
            Hypergraph::new([vid(0)], vec![vec![vid(5)]]),
            Err(HypergraphError::UnknownEndpoint { edge: 0, vertex: vid(5) })
        );
    }

    #[test]
    fn uniformity_and_regularity() {
        let h = hg(3, &[&[0, 1], &[1, 2], &[2, 0]]);
        assert_eq!((uniformity(&h), regularity(&h)), (Some(2), Some(2)));
        let mixed = hg(3, &[&[0, 1], &[0, 1, 2]]);
        assert_eq!((uniformity(&mixed), regularity(&mixed)), (None, None));
        let empty = Hypergraph::new([], vec![]).unwrap();
        assert_eq!((uniformity(&empty), regularity(&empty)), (None, None));
    }

    #[test]
    fn bipartite_input_is_read_directly() {
        let g = corpus::cycle(&[U, B, U, B]);
        let HstReduction::Hypergraph { hypergraph, sources, forced } = trvb_to_hst(&g) else {
            panic!("bipartite input is not trivially no");
        };
        assert_eq!(sources, vec![vid(1), vid(3)]);
        assert!(forced.is_empty());
        assert_eq!(hypergraph.edges(), &[[vid(0), vid(2)].into(), [vid(2), vid(0)].into()]);
    }

    #[test]
    fn unbreakable_loop_is_trivially_no() {
        assert_eq!(trvb_to_hst(&corpus::cycle(&[U])), HstReduction::TrivialNo);
        assert_eq!(trvb_to_hst(&corpus::cycle(&[U, U, U])), HstReduction::TrivialNo);
    }

    #[test]
    fn triangle_agrees_with_solver() {
        let g = corpus::triangle_one_breakable();
        assert!(solve(&g).is_some());
        assert!(reduction_answer(&g));
    }

    #[test]
    fn breakable_loop_is_forced() {
        let g = corpus::cycle(&[B]);
        let HstReduction::Hypergraph { hypergraph, forced, .. } = trvb_to_hst(&g) else {
            panic!("breakable loop is solvable");
        };
        assert_eq!(forced, vec![vid(0)]);
        assert_eq!(hypergraph.edge_count(), 0);
        assert!(reduction_answer(&g));
    }

    #[test]
    fn planar_regular_breakable_gives_uniform_regular() {
        let octahedron = corpus::from_triangles(
            6,
            &[[0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 1], [5, 2, 1], [5, 3, 2], [5, 4, 3], [5, 1, 4]],
            B,
        );
        for (g, k) in [(corpus::icosahedron(B), 5), (octahedron, 4)] {
            let HstReduction::Hypergraph { hypergraph, .. } = trvb_to_hst(&g) else {
                panic!("all-breakable input");
            };
            assert_eq!((uniformity(&hypergraph), regularity(&hypergraph)), (Some(k), Some(2)));
        }
    }

    #[test]
    fn random_multigraphs_agree_with_solver() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..150 {
            let g = corpus::random_multigraph(&mut rng, 6, 9);
            assert_eq!(solve(&g).is_some(), reduction_answer(&g), "{g:?}");
        }
    }

    #[test]
    fn random_hypergraphs_agree_with_incidence_solver() {
        let mut rng = StdRng::seed_from_u64(6);
        for _ in 0..80 {
            let n = rng.gen_range(1..=5u64);
            let m = rng.gen_range(0..=6);
            let edges = (0..m)
                .map(|_| (0..n).filter(|_| rng.gen_bool(0.5)).map(vid).collect())
                .collect();
            let h = Hypergraph::new((0..n).map(vid), edges).unwrap();
            let via_trvb = solve(&incidence_graph(&h)).is_some();
            assert_eq!(hst_brute(&h).unwrap().is_some(), via_trvb, "{h:?}");
        }
    }

    #[test]
    fn rewrite_keeps_rotation_and_bipartition() {
        let g = corpus::icosahedron(B);
        let out = bipartite_rewrite(&g);
        assert_eq!(out.vertex_count(), 12 + 30);
        assert!(out.embedding_summary().unwrap().is_planar());
        assert!(out
            .edges()
            .iter()
            .all(|&[a, b]| out.is_breakable(a) != out.is_breakable(b)));
        assert_eq!(solve(&g).is_some(), solve(&out).is_some());
    }
}
