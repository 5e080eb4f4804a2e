//! Local rewrites of TRVB instances that never change the answer.

use std::collections::BTreeMap;

use crate::graph::{HalfEdge, Multigraph, VertexId, VertexKind};

/// Subdivides every edge with `per_edge` unbreakable degree-2 vertices. The
/// first segment keeps the original edge index; the rest are appended. With
/// `per_edge >= 2` the result is simple.
pub fn insert_unbreakable_deg2(g: &Multigraph, per_edge: usize) -> Multigraph {
    if per_edge == 0 {
        return g.clone();
    }
    let mut next = g.max_id().map_or(0, |m| m.0 + 1);
    let mut edges: Vec<[VertexId; 2]> = g.edges().to_vec();
    let mut vertices: Vec<(VertexId, VertexKind)> = g.vertices().collect();
    // Original head end -> half-edge that now reaches that endpoint.
    let mut head_moves: BTreeMap<HalfEdge, HalfEdge> = BTreeMap::new();
    let mut inner_rotation: BTreeMap<VertexId, Vec<HalfEdge>> = BTreeMap::new();
    for e in 0..g.edge_count() {
        let [_, b] = g.edges()[e];
        let chain: Vec<VertexId> = (0..per_edge)
            .map(|_| {
                let v = VertexId(next);
                next += 1;
                vertices.push((v, VertexKind::Unbreakable));
                v
            })
            .collect();
        edges[e][1] = chain[0];
        let mut prev = HalfEdge::new(e, 1);
        for (i, &s) in chain.iter().enumerate() {
            let to = chain.get(i + 1).copied().unwrap_or(b);
            edges.push([s, to]);
            let seg = edges.len() - 1;
            inner_rotation.insert(s, vec![prev, HalfEdge::new(seg, 0)]);
            prev = HalfEdge::new(seg, 1);
        }
        head_moves.insert(HalfEdge::new(e, 1), prev);
    }
    let out = Multigraph::new(vertices, edges).expect("subdivision of a valid graph");
    match g.rotation() {
        None => out,
        Some(rot) => {
            let mut rotation: BTreeMap<VertexId, Vec<HalfEdge>> = rot
                .iter()
                .map(|(&v, order)| {
                    (v, order.iter().map(|h| *head_moves.get(h).unwrap_or(h)).collect())
                })
                .collect();
            rotation.extend(inner_rotation);
            out.with_rotation(rotation).expect("subdivided rotation")
        }
    }
}

/// Contracts edges between distinct unbreakable vertices until none remain,
/// always taking the lowest-index such edge. The merged vertex keeps the lower
/// id; parallel edges between the merged pair become self-loops; remaining
/// edges are renumbered in order.
pub fn contract_unbreakable_adjacent(g: &Multigraph) -> Multigraph {
    let mut current = g.clone();
    loop {
        let pick = current.edges().iter().position(|&[a, b]| {
            a != b && !current.is_breakable(a) && !current.is_breakable(b)
        });
        match pick {
            Some(e) => current = contract_edge(&current, e),
            None => return current,
        }
    }
}

fn contract_edge(g: &Multigraph, e: usize) -> Multigraph {
    let [a, b] = g.edges()[e];
    let (keep, gone) = if a <= b { (a, b) } else { (b, a) };
    let renumber = |x: usize| if x > e { x - 1 } else { x };
    let edges: Vec<[VertexId; 2]> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != e)
        .map(|(_, &[x, y])| {
            let r = |v: VertexId| if v == gone { keep } else { v };
            [r(x), r(y)]
        })
        .collect();
    let vertices = g.vertices().filter(|&(v, _)| v != gone);
    let out = Multigraph::new(vertices, edges).expect("contraction of a valid graph");
    let Some(rot) = g.rotation() else {
        return out;
    };
    let end_at = |v: VertexId| HalfEdge::new(e, if g.edges()[e][0] == v { 0 } else { 1 });
    let after = |v: VertexId| -> Vec<HalfEdge> {
        let order = &rot[&v];
        let i = order.iter().position(|&h| h == end_at(v)).expect("edge end in rotation");
        order[i + 1..].iter().chain(&order[..i]).copied().collect()
    };
    let mut merged = after(keep);
    merged.extend(after(gone));
    let fix = |h: &HalfEdge| HalfEdge::new(renumber(h.edge), h.end);
    let mut rotation: BTreeMap<VertexId, Vec<HalfEdge>> = rot
        .iter()
        .filter(|(&v, _)| v != keep && v != gone)
        .map(|(&v, order)| (v, order.iter().map(fix).collect()))
        .collect();
    rotation.insert(keep, merged.iter().map(fix).collect());
    out.with_rotation(rotation).expect("contracted rotation")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::graph::VertexKind::{Breakable as B, Unbreakable as U};
    use crate::solver::solve;
    use crate::variant::{validate, VariantSpec};

    fn vid(v: u64) -> VertexId {
        VertexId(v)
    }

    fn is_simple(g: &Multigraph) -> bool {
        let spec = VariantSpec { simple: true, ..VariantSpec::unrestricted() };
        validate(g, &spec).is_valid()
    }

    #[test]
    fn subdivided_self_loop_is_a_simple_triangle() {
        let g = corpus::cycle(&[B]);
        let out = insert_unbreakable_deg2(&g, 2);
        assert_eq!((out.vertex_count(), out.edge_count()), (3, 3));
        assert!(is_simple(&out));
        assert!(out.embedding_summary().unwrap().is_planar());
    }

    #[test]
    fn subdivided_double_edge_is_simple() {
        let g = corpus::cycle(&[U, B]);
        let out = insert_unbreakable_deg2(&g, 2);
        assert_eq!((out.vertex_count(), out.edge_count()), (6, 6));
        assert!(is_simple(&out));
    }

    #[test]
    fn subdivision_keeps_answer_and_planarity() {
        let g = corpus::triangle_one_breakable();
        let out = insert_unbreakable_deg2(&g, 2);
        assert_eq!(solve(&g).is_some(), solve(&out).is_some());
        let w = corpus::wheel(B, 5);
        let out = insert_unbreakable_deg2(&w, 1);
        assert!(out.embedding_summary().unwrap().is_planar());
        assert_eq!(out.edges()[0][0], w.edges()[0][0]);
    }

    #[test]
    fn contract_path_to_a_point() {
        let g = corpus::path(&[U, U, U]);
        let out = contract_unbreakable_adjacent(&g);
        assert_eq!((out.vertex_count(), out.edge_count()), (1, 0));
        assert!(out.contains(vid(0)));
    }

    #[test]
    fn contract_double_edge_leaves_loop() {
        let g = corpus::cycle(&[U, U]);
        let out = contract_unbreakable_adjacent(&g);
        assert_eq!(out.edges(), &[[vid(0), vid(0)]]);
        assert!(out.embedding_summary().unwrap().is_planar());
    }

    #[test]
    fn contract_leaves_bipartite_input_alone() {
        let g = corpus::cycle(&[U, B, U, B]);
        assert_eq!(contract_unbreakable_adjacent(&g), g);
    }

    #[test]
    fn contraction_keeps_planarity() {
        let g = corpus::wheel(U, 6);
        let out = contract_unbreakable_adjacent(&g);
        assert_eq!(out.vertex_count(), 1);
        assert!(out.embedding_summary().unwrap().is_planar());
    }
}
