//! Rotation systems read off straight-line drawings with optional bend points.

use std::collections::BTreeMap;

use crate::graph::{HalfEdge, Multigraph, VertexId, VertexKind};

pub(crate) struct Drawing {
    vertices: Vec<(VertexId, VertexKind, (f64, f64))>,
    edges: Vec<([VertexId; 2], Option<(f64, f64)>)>,
}

impl Drawing {
    pub(crate) fn new() -> Self {
        Self {
            vertices: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub(crate) fn vertex(&mut self, id: u64, kind: VertexKind, at: (f64, f64)) -> VertexId {
        self.vertices.push((VertexId(id), kind, at));
        VertexId(id)
    }

    pub(crate) fn edge(&mut self, a: VertexId, b: VertexId) {
        self.edges.push(([a, b], None));
    }

    /// Edge drawn as two segments through `bend`.
    pub(crate) fn bent_edge(&mut self, a: VertexId, b: VertexId, bend: (f64, f64)) {
        self.edges.push(([a, b], Some(bend)));
    }

    pub(crate) fn position(&self, v: VertexId) -> (f64, f64) {
        self.vertices
            .iter()
            .find(|(id, _, _)| *id == v)
            .map(|&(_, _, p)| p)
            .expect("drawn vertex")
    }

    /// Graph whose rotation at each vertex is the counterclockwise order of
    /// the initial segments of its edges.
    pub(crate) fn build(&self) -> Multigraph {
        let pos: BTreeMap<VertexId, (f64, f64)> =
            self.vertices.iter().map(|&(v, _, p)| (v, p)).collect();
        let graph = Multigraph::new(
            self.vertices.iter().map(|&(v, k, _)| (v, k)),
            self.edges.iter().map(|&(ends, _)| ends).collect(),
        )
        .expect("drawing vertices cover its edges");
        let mut rotation: BTreeMap<VertexId, Vec<(f64, HalfEdge)>> = BTreeMap::new();
        for (e, &([a, b], bend)) in self.edges.iter().enumerate() {
            for (end, (here, there)) in [(a, b), (b, a)].into_iter().enumerate() {
                let from = pos[&here];
                let toward = bend.unwrap_or(pos[&there]);
                let angle = (toward.1 - from.1).atan2(toward.0 - from.0);
                rotation
                    .entry(here)
                    .or_default()
                    .push((angle, HalfEdge::new(e, end as u8)));
            }
        }
        let rotation = rotation
            .into_iter()
            .map(|(v, mut hs)| {
                hs.sort_by(|x, y| x.0.total_cmp(&y.0));
                (v, hs.into_iter().map(|(_, h)| h).collect())
            })
            .collect();
        graph.with_rotation(rotation).expect("drawing rotation is well formed")
    }
}
