//! The construction from in/out-degree-2 planar non-alternating digraphs to
//! planar TRVB instances with breakable degree-k and unbreakable degree-4
//! vertices.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{HalfEdge, Multigraph, VertexId, VertexKind};
use crate::solver::BreakCertificate;

use super::directed::{DirectedMultigraph, HEAD, TAIL};
use super::ReductionError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RkOutput {
    pub graph: Multigraph,
    /// Unbreakable node of each input vertex; the removed one is included.
    pub vertex_node: BTreeMap<VertexId, VertexId>,
    /// Breakable node of each arc, by arc index.
    pub arc_node: Vec<VertexId>,
    pub vhat: VertexId,
}

impl RkOutput {
    /// Breaks the nodes of every arc outside the given cycle cover.
    pub fn certificate_for_cover(&self, cover: &BTreeSet<usize>) -> BreakCertificate {
        BreakCertificate::new(
            self.arc_node
                .iter()
                .enumerate()
                .filter(|(a, _)| !cover.contains(a))
                .map(|(_, &node)| node),
        )
    }

    /// Arcs whose nodes are left unbroken.
    pub fn cover_for_certificate(&self, cert: &BreakCertificate) -> BTreeSet<usize> {
        self.arc_node
            .iter()
            .enumerate()
            .filter(|(_, node)| !cert.broken.contains(node))
            .map(|(a, _)| a)
            .collect()
    }
}

/// Angular sector of an edge end at an arc node `m(e)`, `e = (x, y)`, counted
/// counterclockwise from the direction of `m(y)`.
mod sector {
    pub const HEAD_NODE: u8 = 0;
    pub const HEAD_SIBLING_LEFT: u8 = 1;
    pub const TAIL_SIBLING_LEFT: u8 = 2;
    pub const TAIL_NODE: u8 = 3;
    pub const TAIL_SIBLING_RIGHT: u8 = 4;
    pub const HEAD_SIBLING_RIGHT: u8 = 5;
}

/// Builds the instance. `vhat` defaults to the lowest vertex id.
pub fn r_k(
    d: &DirectedMultigraph,
    k: u32,
    vhat: Option<VertexId>,
) -> Result<RkOutput, ReductionError> {
    if k < 4 {
        return Err(ReductionError::InvalidK(k));
    }
    let n = d.vertex_count();
    if n == 0 {
        return Err(ReductionError::Empty);
    }
    for (a, [t, h]) in d.arcs().iter().enumerate() {
        if t == h {
            return Err(ReductionError::SelfLoopArc(a));
        }
    }
    for v in d.vertices() {
        let (i, o) = (d.in_degree(v), d.out_degree(v));
        if i != 2 || o != 2 {
            return Err(ReductionError::DegreeOutOfRange {
                vertex: v,
                in_degree: i,
                out_degree: o,
            });
        }
    }
    let rot = d.rotation().ok_or(ReductionError::MissingRotation)?;
    if let Some(v) = d.first_alternating()? {
        return Err(ReductionError::Alternating(v));
    }
    if !d.is_planar_embedded()? {
        return Err(ReductionError::NotPlanar);
    }
    let vhat = match vhat {
        Some(v) if d.contains(v) => v,
        Some(v) => return Err(ReductionError::UnknownVertex(v)),
        None => d.vertices().next().expect("nonempty"),
    };

    let vertex_node: BTreeMap<VertexId, VertexId> = d
        .vertices()
        .enumerate()
        .map(|(i, v)| (v, VertexId(i as u64)))
        .collect();
    let arc_node: Vec<VertexId> = (0..d.arc_count())
        .map(|a| VertexId((n + a) as u64))
        .collect();

    // Position of each arc end in its vertex's rotation.
    let successor = |v: VertexId, h: HalfEdge| -> HalfEdge {
        let order = &rot[&v];
        let i = order.iter().position(|&x| x == h).expect("arc end in rotation");
        order[(i + 1) % order.len()]
    };
    let sibling = |v: VertexId, arc: usize, end: u8| -> usize {
        let arcs = if end == TAIL { d.out_arcs(v) } else { d.in_arcs(v) };
        arcs.into_iter().find(|&a| a != arc).expect("degree 2")
    };

    let mut edges: Vec<[VertexId; 2]> = Vec::new();
    // Per arc node: (sector, rank, half-edge).
    let mut at_arc: BTreeMap<VertexId, Vec<(u8, i64, HalfEdge)>> = BTreeMap::new();
    let mut rotation: BTreeMap<VertexId, Vec<HalfEdge>> = BTreeMap::new();
    let push = |edges: &mut Vec<[VertexId; 2]>, a: VertexId, b: VertexId| {
        edges.push([a, b]);
        edges.len() - 1
    };

    for v in d.vertices() {
        let mv = vertex_node[&v];
        let is_hat = v == vhat;
        if !is_hat {
            let mut local = Vec::with_capacity(4);
            for &h in &rot[&v] {
                let node = arc_node[h.edge];
                let e = push(&mut edges, mv, node);
                local.push(HalfEdge::new(e, 0));
                let code = if h.end == TAIL { sector::TAIL_NODE } else { sector::HEAD_NODE };
                at_arc.entry(node).or_default().push((code, 0, HalfEdge::new(e, 1)));
            }
            rotation.insert(mv, local);
        }

        // Out-pair at v: arcs leave v, so v is the tail of both.
        let outs = d.out_arcs(v);
        let (first, second) = ordered_pair(&outs, |a| successor(v, HalfEdge::new(a, TAIL)) == HalfEdge::new(sibling(v, a, TAIL), TAIL));
        let mut pair_edges = vec![(false, 0i64)];
        if is_hat {
            pair_edges.push((true, 0));
        }
        for (replacement, rank) in pair_edges {
            let e = push(&mut edges, arc_node[first], arc_node[second]);
            // `second` follows `first` counterclockwise at the tail.
            let code_first = if replacement { sector::TAIL_NODE } else { sector::TAIL_SIBLING_LEFT };
            let code_second = if replacement { sector::TAIL_NODE } else { sector::TAIL_SIBLING_RIGHT };
            at_arc.entry(arc_node[first]).or_default().push((code_first, rank, HalfEdge::new(e, 0)));
            at_arc.entry(arc_node[second]).or_default().push((code_second, rank, HalfEdge::new(e, 1)));
        }

        // In-pair lens at v: index 0 innermost; the replacement edge sits
        // inside all of them, in the slot of the removed vertex node.
        let ins = d.in_arcs(v);
        let (first, second) = ordered_pair(&ins, |a| successor(v, HalfEdge::new(a, HEAD)) == HalfEdge::new(sibling(v, a, HEAD), HEAD));
        let lens = k as i64 - 3;
        let mut lens_edges: Vec<(bool, i64)> = (0..lens).map(|i| (false, i)).collect();
        if is_hat {
            lens_edges.push((true, -1));
        }
        for (replacement, index) in lens_edges {
            let e = push(&mut edges, arc_node[first], arc_node[second]);
            // `second` follows `first` counterclockwise at the head, so the
            // lens lies on the right of `first` and the left of `second`.
            let (code_first, rank_first, code_second, rank_second) = if replacement {
                (sector::HEAD_NODE, 0, sector::HEAD_NODE, 0)
            } else {
                (sector::HEAD_SIBLING_RIGHT, -index, sector::HEAD_SIBLING_LEFT, index)
            };
            at_arc.entry(arc_node[first]).or_default().push((code_first, rank_first, HalfEdge::new(e, 0)));
            at_arc.entry(arc_node[second]).or_default().push((code_second, rank_second, HalfEdge::new(e, 1)));
        }
    }
    for (node, mut ends) in at_arc {
        ends.sort_by_key(|&(code, rank, _)| (code, rank));
        rotation.insert(node, ends.into_iter().map(|(_, _, h)| h).collect());
    }

    let hat_node = vertex_node[&vhat];
    let vertices = vertex_node
        .values()
        .filter(|&&m| m != hat_node)
        .map(|&m| (m, VertexKind::Unbreakable))
        .chain(arc_node.iter().map(|&m| (m, VertexKind::Breakable)));
    let graph = Multigraph::new(vertices, edges)?.with_rotation(rotation)?;
    Ok(RkOutput {
        graph,
        vertex_node,
        arc_node,
        vhat,
    })
}

/// Orders a two-element pair so the second follows the first.
fn ordered_pair(pair: &[usize], second_follows: impl Fn(usize) -> bool) -> (usize, usize) {
    let (a, b) = (pair[0], pair[1]);
    if second_follows(a) {
        (a, b)
    } else {
        (b, a)
    }
}
