//! Labeled multigraphs with half-edges, optional rotation systems, and the
//! vertex-breaking operation.
//!
//! Every edge owns two half-edges, `(edge, 0)` and `(edge, 1)`, attached to the
//! edge's first and second endpoint respectively. A self-loop therefore
//! contributes two half-edges (and 2 to the degree) of its vertex. A rotation
//! system, when present, lists the half-edges around each vertex in cyclic
//! order and describes a combinatorial embedding.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::unionfind::UnionFind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u64);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexKind {
    Breakable,
    Unbreakable,
}

impl VertexKind {
    pub fn is_breakable(self) -> bool {
        self == VertexKind::Breakable
    }
}

/// One end of an edge. `end` is 0 or 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfEdge {
    pub edge: usize,
    pub end: u8,
}

impl HalfEdge {
    pub const fn new(edge: usize, end: u8) -> Self {
        Self { edge, end }
    }

    pub const fn twin(self) -> Self {
        Self {
            edge: self.edge,
            end: 1 - self.end,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(VertexId),
    #[error("vertex {0} is not breakable")]
    NotBreakable(VertexId),
    #[error("vertex {0} listed more than once")]
    DuplicateMember(VertexId),
    #[error("edge {edge} has endpoint end {end} outside 0..=1")]
    BadHalfEdge { edge: usize, end: u8 },
    #[error("rotation system required")]
    MissingRotation,
    #[error("malformed rotation: {0}")]
    MalformedRotation(String),
}

/// Result of breaking one or more vertices.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BreakTrace {
    pub broken: Vec<VertexId>,
    /// Fresh degree-1 vertices per broken vertex, aligned with its half-edges
    /// (rotation order when present, else edge-index order).
    pub spawned: BTreeMap<VertexId, Vec<VertexId>>,
}

/// Embedding summary obtained by tracing the faces of a rotation system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingSummary {
    pub vertices: usize,
    pub edges: usize,
    /// Traced faces plus one face per isolated vertex.
    pub faces: usize,
    pub components: usize,
}

impl EmbeddingSummary {
    /// Sum of the Euler characteristics of all components.
    pub fn euler_sum(&self) -> i64 {
        self.vertices as i64 - self.edges as i64 + self.faces as i64
    }

    /// Every component is a sphere embedding iff the characteristics sum to 2C,
    /// since no component can exceed 2.
    pub fn is_planar(&self) -> bool {
        self.euler_sum() == 2 * self.components as i64
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigraph {
    kinds: BTreeMap<VertexId, VertexKind>,
    edges: Vec<[VertexId; 2]>,
    incident: BTreeMap<VertexId, Vec<HalfEdge>>,
    rotation: Option<BTreeMap<VertexId, Vec<HalfEdge>>>,
}

impl Multigraph {
    pub fn new(
        vertices: impl IntoIterator<Item = (VertexId, VertexKind)>,
        edges: Vec<[VertexId; 2]>,
    ) -> Result<Self, GraphError> {
        let mut kinds = BTreeMap::new();
        for (id, kind) in vertices {
            if kinds.insert(id, kind).is_some() {
                return Err(GraphError::DuplicateVertex(id));
            }
        }
        let mut incident: BTreeMap<VertexId, Vec<HalfEdge>> =
            kinds.keys().map(|&v| (v, Vec::new())).collect();
        for (i, ends) in edges.iter().enumerate() {
            for (end, v) in ends.iter().enumerate() {
                incident
                    .get_mut(v)
                    .ok_or(GraphError::UnknownVertex(*v))?
                    .push(HalfEdge::new(i, end as u8));
            }
        }
        Ok(Self {
            kinds,
            edges,
            incident,
            rotation: None,
        })
    }

    /// Attaches a rotation system. Each half-edge must appear exactly once, in
    /// the list of its own endpoint.
    pub fn with_rotation(
        mut self,
        rotation: BTreeMap<VertexId, Vec<HalfEdge>>,
    ) -> Result<Self, GraphError> {
        let mut seen = BTreeSet::new();
        for (v, order) in &rotation {
            if !self.kinds.contains_key(v) {
                return Err(GraphError::UnknownVertex(*v));
            }
            for &h in order {
                if h.end > 1 || h.edge >= self.edges.len() {
                    return Err(GraphError::BadHalfEdge {
                        edge: h.edge,
                        end: h.end,
                    });
                }
                if self.endpoint(h) != *v {
                    return Err(GraphError::MalformedRotation(format!(
                        "half-edge ({}, {}) listed at {} but attached to {}",
                        h.edge,
                        h.end,
                        v,
                        self.endpoint(h)
                    )));
                }
                if !seen.insert(h) {
                    return Err(GraphError::MalformedRotation(format!(
                        "half-edge ({}, {}) listed twice",
                        h.edge, h.end
                    )));
                }
            }
        }
        if seen.len() != 2 * self.edges.len() {
            return Err(GraphError::MalformedRotation(format!(
                "{} of {} half-edges placed",
                seen.len(),
                2 * self.edges.len()
            )));
        }
        let mut full = rotation;
        for v in self.kinds.keys() {
            full.entry(*v).or_default();
        }
        self.rotation = Some(full);
        Ok(self)
    }

    pub fn without_rotation(mut self) -> Self {
        self.rotation = None;
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.kinds.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = (VertexId, VertexKind)> + '_ {
        self.kinds.iter().map(|(&v, &k)| (v, k))
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.kinds.keys().copied()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.kinds.contains_key(&v)
    }

    pub fn kind(&self, v: VertexId) -> Option<VertexKind> {
        self.kinds.get(&v).copied()
    }

    pub fn is_breakable(&self, v: VertexId) -> bool {
        self.kind(v) == Some(VertexKind::Breakable)
    }

    pub fn breakable_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices()
            .filter(|(_, k)| k.is_breakable())
            .map(|(v, _)| v)
    }

    pub fn edges(&self) -> &[[VertexId; 2]] {
        &self.edges
    }

    pub fn endpoint(&self, h: HalfEdge) -> VertexId {
        self.edges[h.edge][h.end as usize]
    }

    pub fn is_self_loop(&self, edge: usize) -> bool {
        self.edges[edge][0] == self.edges[edge][1]
    }

    /// Half-edges at `v` in edge-index order.
    pub fn incident(&self, v: VertexId) -> &[HalfEdge] {
        self.incident.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Half-edges at `v` in rotation order when a rotation is present,
    /// otherwise in edge-index order.
    pub fn ordered_incident(&self, v: VertexId) -> &[HalfEdge] {
        match &self.rotation {
            Some(rot) => rot.get(&v).map(Vec::as_slice).unwrap_or(&[]),
            None => self.incident(v),
        }
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incident(v).len()
    }

    pub fn neighbor_across(&self, h: HalfEdge) -> VertexId {
        self.endpoint(h.twin())
    }

    pub fn rotation(&self) -> Option<&BTreeMap<VertexId, Vec<HalfEdge>>> {
        self.rotation.as_ref()
    }

    pub fn has_rotation(&self) -> bool {
        self.rotation.is_some()
    }

    pub fn max_id(&self) -> Option<VertexId> {
        self.kinds.keys().next_back().copied()
    }

    fn next_fresh(&self) -> u64 {
        self.max_id().map_or(0, |v| v.0 + 1)
    }

    /// Dense position of every vertex, in id order.
    pub(crate) fn index_map(&self) -> BTreeMap<VertexId, usize> {
        self.kinds.keys().enumerate().map(|(i, &v)| (v, i)).collect()
    }

    /// Replaces `v` by one fresh degree-1 vertex per incident half-edge.
    pub fn break_vertex(&self, v: VertexId) -> Result<(Multigraph, BreakTrace), GraphError> {
        match self.kind(v) {
            None => return Err(GraphError::UnknownVertex(v)),
            Some(VertexKind::Unbreakable) => return Err(GraphError::NotBreakable(v)),
            Some(VertexKind::Breakable) => {}
        }
        let order: Vec<HalfEdge> = self.ordered_incident(v).to_vec();
        let mut next = self.next_fresh();
        let mut kinds = self.kinds.clone();
        kinds.remove(&v);
        let mut edges = self.edges.clone();
        let mut spawned = Vec::with_capacity(order.len());
        let mut incident = self.incident.clone();
        incident.remove(&v);
        let mut rotation = self.rotation.clone();
        if let Some(rot) = rotation.as_mut() {
            rot.remove(&v);
        }
        for h in order {
            let fresh = VertexId(next);
            next += 1;
            spawned.push(fresh);
            // Fresh leaves inherit the kind; it never matters since they have degree 1.
            kinds.insert(fresh, VertexKind::Breakable);
            edges[h.edge][h.end as usize] = fresh;
            incident.insert(fresh, vec![h]);
            if let Some(rot) = rotation.as_mut() {
                rot.insert(fresh, vec![h]);
            }
        }
        let graph = Multigraph {
            kinds,
            edges,
            incident,
            rotation,
        };
        let trace = BreakTrace {
            broken: vec![v],
            spawned: BTreeMap::from([(v, spawned)]),
        };
        Ok((graph, trace))
    }

    /// Breaks every member of `set`, in ascending id order so the result does
    /// not depend on the order the caller lists them in.
    pub fn break_set(&self, set: &[VertexId]) -> Result<Multigraph, GraphError> {
        self.break_set_traced(set).map(|(g, _)| g)
    }

    pub fn break_set_traced(
        &self,
        set: &[VertexId],
    ) -> Result<(Multigraph, BreakTrace), GraphError> {
        let mut sorted = BTreeSet::new();
        for &v in set {
            if !sorted.insert(v) {
                return Err(GraphError::DuplicateMember(v));
            }
            match self.kind(v) {
                None => return Err(GraphError::UnknownVertex(v)),
                Some(VertexKind::Unbreakable) => return Err(GraphError::NotBreakable(v)),
                Some(VertexKind::Breakable) => {}
            }
        }
        let mut graph = self.clone();
        let mut trace = BreakTrace::default();
        for v in sorted {
            let (next, step) = graph.break_vertex(v)?;
            graph = next;
            trace.broken.extend(step.broken);
            trace.spawned.extend(step.spawned);
        }
        Ok((graph, trace))
    }

    pub fn component_count(&self) -> usize {
        let index = self.index_map();
        let mut uf = UnionFind::new(self.kinds.len());
        let mut components = self.kinds.len();
        for [a, b] in &self.edges {
            if uf.union(index[a], index[b]) {
                components -= 1;
            }
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// Connected with exactly one fewer edge than vertices.
    pub fn is_tree(&self) -> bool {
        !self.kinds.is_empty() && self.edges.len() + 1 == self.kinds.len() && self.is_connected()
    }

    /// `E - V + 1`: the exact value of the sum of `deg(v) - 1` over any break
    /// set whose residue is a tree.
    pub fn required_vertex_growth(&self) -> i64 {
        self.edges.len() as i64 - self.kinds.len() as i64 + 1
    }

    /// Traces every face of the rotation system. A face is the cyclic sequence
    /// of half-edges leaving successive corners; following half-edge `h` into
    /// vertex `w` continues with the rotation successor of `h.twin()` at `w`.
    pub fn trace_faces(&self) -> Result<Vec<Vec<HalfEdge>>, GraphError> {
        let rot = self.rotation.as_ref().ok_or(GraphError::MissingRotation)?;
        let mut position: BTreeMap<HalfEdge, usize> = BTreeMap::new();
        for order in rot.values() {
            for (i, &h) in order.iter().enumerate() {
                position.insert(h, i);
            }
        }
        let mut visited = BTreeSet::new();
        let mut faces = Vec::new();
        for edge in 0..self.edges.len() {
            for end in 0..2 {
                let start = HalfEdge::new(edge, end);
                if visited.contains(&start) {
                    continue;
                }
                let mut face = Vec::new();
                let mut h = start;
                loop {
                    visited.insert(h);
                    face.push(h);
                    let twin = h.twin();
                    let around = &rot[&self.endpoint(twin)];
                    h = around[(position[&twin] + 1) % around.len()];
                    if h == start {
                        break;
                    }
                }
                faces.push(face);
            }
        }
        Ok(faces)
    }

    pub fn embedding_summary(&self) -> Result<EmbeddingSummary, GraphError> {
        let faces = self.trace_faces()?.len();
        let isolated = self.incident.values().filter(|h| h.is_empty()).count();
        Ok(EmbeddingSummary {
            vertices: self.kinds.len(),
            edges: self.edges.len(),
            faces: faces + isolated,
            components: self.component_count(),
        })
    }
}
