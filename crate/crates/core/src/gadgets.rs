//! Hardness gadgets, their exhaustive behavior analysis, and substitution into
//! host graphs.
//!
//! A gadget body carries one unbreakable degree-1 terminal per port; the
//! terminal's single edge is the port edge. Internal vertices therefore have
//! their full degree inside the body.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::drawing::Drawing;
use crate::graph::{GraphError, HalfEdge, Multigraph, VertexId, VertexKind};
use crate::solver::BreakCertificate;
use crate::unionfind::UnionFind;

use VertexKind::{Breakable as B, Unbreakable as U};

/// Behavior enumeration refuses more internal breakable vertices than this
/// unless forced.
pub const BEHAVIOR_GUARD: usize = 24;

/// Witness break sets kept per port partition.
pub const WITNESS_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GadgetError {
    #[error("unknown gadget {0:?}")]
    UnknownGadget(String),
    #[error("invalid parameters for {name}: {reason}")]
    BadParameters { name: String, reason: String },
    #[error("{name} is not constructed: {reason}")]
    Omitted { name: String, reason: String },
    #[error("{breakable} internal breakable vertices exceed the enumeration guard of {guard}")]
    GuardExceeded { breakable: usize, guard: usize },
    #[error("expected {expected} ports, gadget has {ports}")]
    PortMismatch { expected: usize, ports: usize },
    #[error("vertex {vertex} has degree {degree} but the gadget has {ports} ports")]
    DegreeMismatch { vertex: VertexId, degree: usize, ports: usize },
    #[error("vertex {vertex} is {found:?} but the gadget simulates a {expected:?} vertex")]
    KindMismatch { vertex: VertexId, expected: VertexKind, found: VertexKind },
    #[error("host carries a rotation system but the gadget does not")]
    MissingGadgetRotation,
    #[error("malformed gadget: {0}")]
    Malformed(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A partition of port indices: blocks sorted internally and by first element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PortPartition(Vec<Vec<usize>>);

impl PortPartition {
    pub fn new(blocks: Vec<Vec<usize>>) -> Self {
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .filter(|b| !b.is_empty())
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        blocks.sort();
        Self(blocks)
    }

    pub fn single_block(ports: usize) -> Self {
        Self(vec![(0..ports).collect()])
    }

    pub fn singletons(ports: usize) -> Self {
        Self((0..ports).map(|p| vec![p]).collect())
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.0
    }
}

impl fmt::Display for PortPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for block in &self.0 {
            let inner: Vec<String> = block.iter().map(usize::to_string).collect();
            write!(f, "{{{}}}", inner.join(","))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Realizations {
    pub count: u64,
    /// Smallest realizing break sets, at most [`WITNESS_LIMIT`].
    pub witnesses: Vec<BreakCertificate>,
}

impl Realizations {
    fn merge(&mut self, other: Realizations) {
        self.count += other.count;
        self.witnesses.extend(other.witnesses);
        self.witnesses.sort();
        self.witnesses.truncate(WITNESS_LIMIT);
    }
}

/// Admissible port partitions of a gadget and how many internal break sets
/// realize each.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Behavior {
    pub ports: usize,
    pub admissible: BTreeMap<PortPartition, Realizations>,
}

impl Behavior {
    pub fn partitions(&self) -> BTreeSet<PortPartition> {
        self.admissible.keys().cloned().collect()
    }

    pub fn total_solutions(&self) -> u64 {
        self.admissible.values().map(|r| r.count).sum()
    }

    fn merge(mut self, other: Behavior) -> Behavior {
        for (p, r) in other.admissible {
            self.admissible.entry(p).or_default().merge(r);
        }
        self
    }
}

/// The kind and degree of vertex a gadget stands in for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Simulates {
    pub kind: VertexKind,
    pub degree: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gadget {
    name: String,
    body: Multigraph,
    ports: Vec<VertexId>,
    simulates: Simulates,
    /// Topology rebuilt from textual constraints rather than read off a drawing.
    reconstructed: bool,
}

impl Gadget {
    /// Wraps a body whose `ports` are unbreakable degree-1 terminals whose
    /// neighbors are internal.
    pub fn new(
        name: impl Into<String>,
        body: Multigraph,
        ports: Vec<VertexId>,
        simulates: Simulates,
    ) -> Result<Self, GadgetError> {
        if ports.is_empty() {
            return Err(GadgetError::Malformed("no ports".into()));
        }
        let terminals: BTreeSet<VertexId> = ports.iter().copied().collect();
        if terminals.len() != ports.len() {
            return Err(GadgetError::Malformed("repeated port terminal".into()));
        }
        for &t in &ports {
            match body.kind(t) {
                None => return Err(GraphError::UnknownVertex(t).into()),
                Some(B) => {
                    return Err(GadgetError::Malformed(format!("terminal {t} is breakable")))
                }
                Some(U) => {}
            }
            if body.degree(t) != 1 {
                return Err(GadgetError::Malformed(format!("terminal {t} is not a leaf")));
            }
            let anchor = body.neighbor_across(body.incident(t)[0]);
            if terminals.contains(&anchor) {
                return Err(GadgetError::Malformed(format!(
                    "terminal {t} attaches to another terminal"
                )));
            }
        }
        if body.vertex_count() == ports.len() {
            return Err(GadgetError::Malformed("no internal vertices".into()));
        }
        Ok(Self {
            name: name.into(),
            body,
            ports,
            simulates,
            reconstructed: false,
        })
    }

    fn reconstructed(mut self) -> Self {
        self.reconstructed = true;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn body(&self) -> &Multigraph {
        &self.body
    }

    /// Port terminals in port order.
    pub fn ports(&self) -> &[VertexId] {
        &self.ports
    }

    pub fn port_count(&self) -> usize {
        self.ports.len()
    }

    pub fn simulates(&self) -> Simulates {
        self.simulates
    }

    pub fn is_reconstructed(&self) -> bool {
        self.reconstructed
    }

    pub fn is_terminal(&self, v: VertexId) -> bool {
        self.ports.contains(&v)
    }

    pub fn internal_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.body.vertex_ids().filter(|v| !self.is_terminal(*v))
    }

    pub fn internal_vertex_count(&self) -> usize {
        self.body.vertex_count() - self.ports.len()
    }

    pub fn internal_breakable(&self) -> Vec<VertexId> {
        self.internal_vertices()
            .filter(|&v| self.body.is_breakable(v))
            .collect()
    }

    /// Internal vertex holding port `i`.
    pub fn anchor(&self, port: usize) -> VertexId {
        let t = self.ports[port];
        self.body.neighbor_across(self.body.incident(t)[0])
    }

    /// Internal edges plus the port edges, i.e. the degree sum over internal
    /// vertices halved with port edges counted once.
    pub fn internal_edge_count(&self) -> usize {
        self.body.edge_count() - self.ports.len()
    }
}

/// A one-vertex gadget: the vertex itself with `ports` incident port edges.
pub fn single_vertex(kind: VertexKind, ports: usize) -> Gadget {
    let mut d = Drawing::new();
    let center = d.vertex(0, kind, (0.0, 0.0));
    let terminals: Vec<VertexId> = (0..ports)
        .map(|i| {
            let theta = 2.0 * PI * i as f64 / ports as f64;
            let t = d.vertex(1 + i as u64, U, (theta.cos(), theta.sin()));
            d.edge(center, t);
            t
        })
        .collect();
    let name = match kind {
        B => "breakable_vertex",
        U => "unbreakable_vertex",
    };
    Gadget::new(name, d.build(), terminals, Simulates { kind, degree: ports })
        .expect("single vertex gadget")
}

/// Enumerates every break set of internal breakable vertices and records the
/// port partition of each admissible fragment: no cycle, and every component
/// reaches a port.
pub fn behavior(gd: &Gadget) -> Result<Behavior, GadgetError> {
    behavior_with_guard(gd, BEHAVIOR_GUARD)
}

pub fn behavior_with_guard(gd: &Gadget, guard: usize) -> Result<Behavior, GadgetError> {
    let internal = gd.internal_breakable();
    if internal.len() > guard || internal.len() >= 63 {
        return Err(GadgetError::GuardExceeded {
            breakable: internal.len(),
            guard,
        });
    }
    let frag = Fragment::new(gd, &internal);
    let ports = gd.port_count();
    let empty = || Behavior {
        ports,
        admissible: BTreeMap::new(),
    };
    let mut result = (0u64..1u64 << internal.len())
        .into_par_iter()
        .fold(empty, |mut acc, mask| {
            if let Some(partition) = frag.classify(mask) {
                let slot = acc.admissible.entry(partition).or_default();
                slot.count += 1;
                slot.witnesses.push(frag.certificate(mask));
                if slot.witnesses.len() >= 2 * WITNESS_LIMIT {
                    slot.witnesses.sort();
                    slot.witnesses.truncate(WITNESS_LIMIT);
                }
            }
            acc
        })
        .reduce(empty, Behavior::merge);
    for r in result.admissible.values_mut() {
        r.witnesses.sort();
        r.witnesses.truncate(WITNESS_LIMIT);
    }
    Ok(result)
}

struct Fragment {
    n: usize,
    ends: Vec<[usize; 2]>,
    internal: Vec<usize>,
    internal_ids: Vec<VertexId>,
    terminals: Vec<usize>,
}

impl Fragment {
    fn new(gd: &Gadget, internal: &[VertexId]) -> Self {
        let index = gd.body.index_map();
        Self {
            n: index.len(),
            ends: gd.body.edges().iter().map(|[a, b]| [index[a], index[b]]).collect(),
            internal: internal.iter().map(|v| index[v]).collect(),
            internal_ids: internal.to_vec(),
            terminals: gd.ports.iter().map(|t| index[t]).collect(),
        }
    }

    fn certificate(&self, mask: u64) -> BreakCertificate {
        BreakCertificate::new(
            (0..self.internal.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| self.internal_ids[i]),
        )
    }

    fn classify(&self, mask: u64) -> Option<PortPartition> {
        let mut broken = vec![false; self.n];
        for (i, &v) in self.internal.iter().enumerate() {
            broken[v] = mask >> i & 1 == 1;
        }
        let mut uf = UnionFind::new(self.n + 2 * self.ends.len());
        let mut residue = Vec::with_capacity(self.n);
        residue.extend((0..self.n).filter(|&v| !broken[v]));
        for (e, &[a, b]) in self.ends.iter().enumerate() {
            let node = |v: usize, end: usize| {
                if broken[v] {
                    self.n + 2 * e + end
                } else {
                    v
                }
            };
            let (x, y) = (node(a, 0), node(b, 1));
            if !uf.union(x, y) {
                return None;
            }
            residue.extend([x, y].into_iter().filter(|&z| z >= self.n));
        }
        let roots: Vec<usize> = self.terminals.iter().map(|&t| uf.find(t)).collect();
        if residue.iter().any(|&z| !roots.contains(&uf.find(z))) {
            return None;
        }
        let mut blocks: Vec<(usize, Vec<usize>)> = Vec::new();
        for (port, root) in roots.into_iter().enumerate() {
            match blocks.iter_mut().find(|(r, _)| *r == root) {
                Some((_, block)) => block.push(port),
                None => blocks.push((root, vec![port])),
            }
        }
        Some(PortPartition::new(blocks.into_iter().map(|(_, b)| b).collect()))
    }
}

fn check_ports(gd: &Gadget, t: usize) -> Result<(), GadgetError> {
    if gd.port_count() != t {
        return Err(GadgetError::PortMismatch {
            expected: t,
            ports: gd.port_count(),
        });
    }
    Ok(())
}

/// Admissible partitions are exactly the single block.
pub fn equivalent_to_unbreakable(gd: &Gadget, t: usize) -> Result<bool, GadgetError> {
    check_ports(gd, t)?;
    let b = behavior(gd)?;
    Ok(b.partitions() == BTreeSet::from([PortPartition::single_block(t)]))
}

/// Admissible partitions are exactly the single block and all singletons.
pub fn equivalent_to_breakable(gd: &Gadget, t: usize) -> Result<bool, GadgetError> {
    check_ports(gd, t)?;
    let b = behavior(gd)?;
    let expected = BTreeSet::from([PortPartition::single_block(t), PortPartition::singletons(t)]);
    Ok(b.partitions() == expected)
}

/// Whether the gadget's behavior matches the vertex it claims to simulate.
pub fn certify(gd: &Gadget) -> Result<bool, GadgetError> {
    certify_with_guard(gd, BEHAVIOR_GUARD)
}

/// `certify` with an explicit bound on internal breakable vertices.
pub fn certify_with_guard(gd: &Gadget, guard: usize) -> Result<bool, GadgetError> {
    let s = gd.simulates();
    check_ports(gd, s.degree)?;
    let target = single_vertex(s.kind, s.degree);
    Ok(behavior_with_guard(gd, guard)?.partitions() == behavior(&target)?.partitions())
}

/// Replaces `v` by the gadget body. Port `i` takes over the `i`-th half-edge
/// of `v` (rotation order when present). Internal vertices get fresh ids above
/// the host's maximum; host edges keep their indices and internal edges are
/// appended.
pub fn substitute(g: &Multigraph, v: VertexId, gd: &Gadget) -> Result<Multigraph, GadgetError> {
    if !g.contains(v) {
        return Err(GraphError::UnknownVertex(v).into());
    }
    let host_half: Vec<HalfEdge> = g.ordered_incident(v).to_vec();
    if host_half.len() != gd.port_count() {
        return Err(GadgetError::DegreeMismatch {
            vertex: v,
            degree: host_half.len(),
            ports: gd.port_count(),
        });
    }
    if g.has_rotation() && !gd.body.has_rotation() {
        return Err(GadgetError::MissingGadgetRotation);
    }
    let base = g.max_id().map_or(0, |m| m.0 + 1);
    let fresh: BTreeMap<VertexId, VertexId> = gd
        .internal_vertices()
        .enumerate()
        .map(|(i, u)| (u, VertexId(base + i as u64)))
        .collect();

    // Port edge index in the body -> host half-edge it becomes.
    let mut port_edge: BTreeMap<usize, HalfEdge> = BTreeMap::new();
    let mut edges: Vec<[VertexId; 2]> = g.edges().to_vec();
    for (i, &h) in host_half.iter().enumerate() {
        let t = gd.ports[i];
        let th = gd.body.incident(t)[0];
        port_edge.insert(th.edge, h);
        edges[h.edge][h.end as usize] = fresh[&gd.body.endpoint(th.twin())];
    }
    let mut internal_edge: BTreeMap<usize, usize> = BTreeMap::new();
    for (e, [a, b]) in gd.body.edges().iter().enumerate() {
        if port_edge.contains_key(&e) {
            continue;
        }
        internal_edge.insert(e, edges.len());
        edges.push([fresh[a], fresh[b]]);
    }
    let vertices = g
        .vertices()
        .filter(|&(u, _)| u != v)
        .chain(fresh.iter().map(|(u, &f)| (f, gd.body.kind(*u).expect("body vertex"))));
    let graph = Multigraph::new(vertices, edges)?;
    let Some(host_rot) = g.rotation() else {
        return Ok(graph);
    };
    let body_rot = gd.body.rotation().expect("checked above");
    let mut rotation: BTreeMap<VertexId, Vec<HalfEdge>> = host_rot.clone();
    rotation.remove(&v);
    for (u, &f) in &fresh {
        let order = body_rot[u]
            .iter()
            .map(|h| match port_edge.get(&h.edge) {
                Some(&host) => host,
                None => HalfEdge::new(internal_edge[&h.edge], h.end),
            })
            .collect();
        rotation.insert(f, order);
    }
    Ok(graph.with_rotation(rotation)?)
}

/// Catalog entry: a named constructor and the parameters it takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub takes_k: bool,
    pub takes_a: bool,
    pub default_k: u32,
    pub default_a: u32,
    pub reconstructed: bool,
    pub constructed: bool,
}

pub const CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        name: "u4_from_b4",
        description: "unbreakable degree-4 vertex from breakable degree-4 vertices",
        takes_k: false,
        takes_a: false,
        default_k: 4,
        default_a: 0,
        reconstructed: true,
        constructed: true,
    },
    CatalogEntry {
        name: "u_from_bk",
        description: "unbreakable degree-(k-2a) vertex from breakable degree-k vertices",
        takes_k: true,
        takes_a: true,
        default_k: 5,
        default_a: 1,
        reconstructed: false,
        constructed: true,
    },
    CatalogEntry {
        name: "u4_split_u3",
        description: "unbreakable degree-4 vertex from two unbreakable degree-3 vertices",
        takes_k: false,
        takes_a: false,
        default_k: 3,
        default_a: 0,
        reconstructed: false,
        constructed: true,
    },
    CatalogEntry {
        name: "u2_from_bk",
        description: "unbreakable degree-2 vertex from 2k-2 breakable degree-k vertices, simple graph",
        takes_k: true,
        takes_a: false,
        default_k: 4,
        default_a: 0,
        reconstructed: false,
        constructed: true,
    },
    CatalogEntry {
        name: "u2_from_bk_u4",
        description: "unbreakable degree-2 vertex from breakable degree-k and unbreakable degree-4 vertices",
        takes_k: true,
        takes_a: false,
        default_k: 4,
        default_a: 0,
        reconstructed: true,
        constructed: true,
    },
    CatalogEntry {
        name: "u2_from_bk_u3",
        description: "unbreakable degree-2 vertex from breakable degree-k and unbreakable degree-3 vertices",
        takes_k: true,
        takes_a: false,
        default_k: 4,
        default_a: 0,
        reconstructed: true,
        constructed: true,
    },
    CatalogEntry {
        name: "u2_from_bk_u1",
        description: "unbreakable degree-2 vertex from a breakable degree-k hub and unbreakable leaves",
        takes_k: true,
        takes_a: false,
        default_k: 4,
        default_a: 0,
        reconstructed: false,
        constructed: true,
    },
    CatalogEntry {
        name: "u2_from_bk_b1",
        description: "unbreakable degree-2 vertex from a breakable degree-k hub and breakable leaves",
        takes_k: true,
        takes_a: false,
        default_k: 4,
        default_a: 0,
        reconstructed: false,
        constructed: true,
    },
    CatalogEntry {
        name: "u2_from_bk_b2",
        description: "unbreakable degree-(k-2a) vertex from breakable degree-k and degree-2 vertices",
        takes_k: true,
        takes_a: true,
        default_k: 4,
        default_a: 1,
        reconstructed: false,
        constructed: true,
    },
    CatalogEntry {
        name: "u2_from_b3",
        description: "unbreakable degree-2 vertex from four breakable degree-3 vertices",
        takes_k: false,
        takes_a: false,
        default_k: 3,
        default_a: 0,
        reconstructed: false,
        constructed: true,
    },
    CatalogEntry {
        name: "u2_from_b4",
        description: "unbreakable degree-2 vertex from six breakable degree-4 vertices",
        takes_k: false,
        takes_a: false,
        default_k: 4,
        default_a: 0,
        reconstructed: false,
        constructed: true,
    },
    CatalogEntry {
        name: "u2_from_b5",
        description: "unbreakable degree-2 vertex from 32 breakable degree-5 vertices (counting only)",
        takes_k: false,
        takes_a: false,
        default_k: 5,
        default_a: 0,
        reconstructed: false,
        constructed: false,
    },
];

pub fn catalog_entry(name: &str) -> Option<&'static CatalogEntry> {
    CATALOG.iter().find(|e| e.name == name)
}

/// Builds a catalog gadget; `k` and `a` fall back to the entry defaults.
pub fn builtin(name: &str, k: Option<u32>, a: Option<u32>) -> Result<Gadget, GadgetError> {
    let entry = catalog_entry(name).ok_or_else(|| GadgetError::UnknownGadget(name.into()))?;
    let k = k.unwrap_or(entry.default_k);
    let a = a.unwrap_or(entry.default_a);
    match name {
        "u4_from_b4" => Ok(u4_from_b4()),
        "u_from_bk" => u_from_bk(k, a),
        "u4_split_u3" => Ok(u4_split_u3()),
        "u2_from_bk" => u2_from_bk(k),
        "u2_from_bk_u4" => u2_from_bk_u4(k),
        "u2_from_bk_u3" => u2_from_bk_u3(k),
        "u2_from_bk_u1" => u2_from_bk_leaves(k, U),
        "u2_from_bk_b1" => u2_from_bk_leaves(k, B),
        "u2_from_bk_b2" => u2_from_bk_b2(k, a),
        "u2_from_b3" => Ok(u2_from_b3()),
        "u2_from_b4" => u2_from_bk(4).map(|g| Gadget {
            name: "u2_from_b4".into(),
            ..g
        }),
        _ => Err(GadgetError::Omitted {
            name: name.into(),
            reason: "topology is not recoverable from its textual description".into(),
        }),
    }
}

fn bad(name: &str, reason: impl Into<String>) -> GadgetError {
    GadgetError::BadParameters {
        name: name.into(),
        reason: reason.into(),
    }
}

fn polar(r: f64, theta: f64) -> (f64, f64) {
    (r * theta.cos(), r * theta.sin())
}

/// Attaches terminals and returns them sorted counterclockwise around `center`.
fn attach_ports(
    d: &mut Drawing,
    next_id: &mut u64,
    spots: &[(VertexId, (f64, f64))],
    center: (f64, f64),
) -> Vec<VertexId> {
    let mut terminals: Vec<(f64, VertexId)> = spots
        .iter()
        .map(|&(anchor, at)| {
            let t = d.vertex(*next_id, U, at);
            *next_id += 1;
            d.edge(anchor, t);
            ((at.1 - center.1).atan2(at.0 - center.0), t)
        })
        .collect();
    terminals.sort_by(|x, y| x.0.total_cmp(&y.0));
    terminals.into_iter().map(|(_, t)| t).collect()
}

fn unbreakable(degree: usize) -> Simulates {
    Simulates { kind: U, degree }
}

/// Two breakable vertices `P0`, `P1` joined by three parallel edges, each
/// tied to its own `Qi`; `Q0`–`Q1` adjacent with two ports each.
pub fn u4_from_b4() -> Gadget {
    let mut d = Drawing::new();
    let p0 = d.vertex(0, B, (-1.0, 0.0));
    let p1 = d.vertex(1, B, (1.0, 0.0));
    let q0 = d.vertex(2, B, (-1.0, -2.0));
    let q1 = d.vertex(3, B, (1.0, -2.0));
    d.bent_edge(p0, p1, (0.0, 0.6));
    d.edge(p0, p1);
    d.bent_edge(p0, p1, (0.0, -0.6));
    d.edge(p0, q0);
    d.edge(p1, q1);
    d.edge(q0, q1);
    let mut next = 4;
    let ports = attach_ports(
        &mut d,
        &mut next,
        &[
            (q0, (-2.0, -2.5)),
            (q0, (-1.5, -3.0)),
            (q1, (1.5, -3.0)),
            (q1, (2.0, -2.5)),
        ],
        (0.0, -1.0),
    );
    Gadget::new("u4_from_b4", d.build(), ports, unbreakable(4))
        .expect("well formed")
        .reconstructed()
}

/// Hub `Q` with `2a` spokes to `P0..P{2a-1}`, `k-1` parallel edges inside
/// each pair `(P{2i}, P{2i+1})`, and `k-2a` ports on `Q`.
pub fn u_from_bk(k: u32, a: u32) -> Result<Gadget, GadgetError> {
    hub_with_pairs("u_from_bk", k, a, k as usize - 1)
}

/// As [`u_from_bk`] but with a single edge inside each pair, so the `P`
/// vertices have degree 2.
pub fn u2_from_bk_b2(k: u32, a: u32) -> Result<Gadget, GadgetError> {
    hub_with_pairs("u2_from_bk_b2", k, a, 1)
}

fn hub_with_pairs(name: &str, k: u32, a: u32, multiplicity: usize) -> Result<Gadget, GadgetError> {
    if k < 4 {
        return Err(bad(name, "k must be at least 4"));
    }
    if a == 0 || 2 * a + 2 > k || k - 2 * a > 4 {
        return Err(bad(name, "need a >= 1 and k - 2a in 2..=4"));
    }
    let (k, a) = (k as usize, a as usize);
    let mut d = Drawing::new();
    let q = d.vertex(0, B, (0.0, 0.0));
    let arms = 2 * a;
    let ps: Vec<VertexId> = (0..arms)
        .map(|j| {
            let theta = PI * (j as f64 + 1.0) / (arms as f64 + 1.0);
            let p = d.vertex(1 + j as u64, B, polar(2.0, theta));
            d.edge(q, p);
            p
        })
        .collect();
    for pair in ps.chunks(2) {
        let (x, y) = (d.position(pair[0]), d.position(pair[1]));
        let mid = ((x.0 + y.0) / 2.0, (x.1 + y.1) / 2.0);
        for s in 0..multiplicity {
            let f = 1.0 + 0.2 * s as f64;
            if s == 0 {
                d.edge(pair[0], pair[1]);
            } else {
                d.bent_edge(pair[0], pair[1], (mid.0 * f, mid.1 * f));
            }
        }
    }
    let t = k - arms;
    let mut next = 1 + arms as u64;
    let spots: Vec<(VertexId, (f64, f64))> = (0..t)
        .map(|i| (q, polar(2.0, PI + PI * (i as f64 + 1.0) / (t as f64 + 1.0))))
        .collect();
    let ports = attach_ports(&mut d, &mut next, &spots, (0.0, 0.0));
    Gadget::new(name, d.build(), ports, unbreakable(t)).map_err(Into::into)
}

/// Two adjacent unbreakable degree-3 vertices with two ports each.
pub fn u4_split_u3() -> Gadget {
    let mut d = Drawing::new();
    let u = d.vertex(0, U, (-1.0, 0.0));
    let w = d.vertex(1, U, (1.0, 0.0));
    d.edge(u, w);
    let mut next = 2;
    let ports = attach_ports(
        &mut d,
        &mut next,
        &[(u, (-2.0, 1.0)), (u, (-2.0, -1.0)), (w, (2.0, -1.0)), (w, (2.0, 1.0))],
        (0.0, 0.0),
    );
    Gadget::new("u4_split_u3", d.build(), ports, unbreakable(4)).expect("well formed")
}

/// Breakable `P1..P{k-2}` and `Q1..Qk`, complete bipartite between them, a
/// path through the `Q`s, ports at `Q1` and `Qk`. Planar only for `k = 4`;
/// larger `k` carries no rotation.
pub fn u2_from_bk(k: u32) -> Result<Gadget, GadgetError> {
    if k < 4 {
        return Err(bad("u2_from_bk", "k must be at least 4"));
    }
    let k = k as usize;
    let mut d = Drawing::new();
    let width = (k - 1) as f64;
    let qs: Vec<VertexId> = (0..k)
        .map(|i| d.vertex(i as u64, B, (i as f64, 0.0)))
        .collect();
    let ps: Vec<VertexId> = (0..k - 2)
        .map(|j| {
            let y = if j % 2 == 0 { 2.0 } else { -2.0 } * (1.0 + (j / 2) as f64);
            d.vertex((k + j) as u64, B, (width / 2.0, y))
        })
        .collect();
    for &p in &ps {
        for &q in &qs {
            d.edge(p, q);
        }
    }
    for w in qs.windows(2) {
        d.edge(w[0], w[1]);
    }
    let mut next = (2 * k - 2) as u64;
    let ports = attach_ports(
        &mut d,
        &mut next,
        &[(qs[0], (-1.0, 0.0)), (qs[k - 1], (width + 1.0, 0.0))],
        (width / 2.0, 0.0),
    );
    let mut body = d.build();
    if k > 4 {
        body = body.without_rotation();
    }
    Gadget::new("u2_from_bk", body, ports, unbreakable(2)).map_err(Into::into)
}

/// Unbreakable path `U1..Uk` with two breakable degree-k vertices, one on
/// each side, adjacent to every `Ui`; ports at `U1` and `Uk`.
pub fn u2_from_bk_u4(k: u32) -> Result<Gadget, GadgetError> {
    fan_gadget("u2_from_bk_u4", k, 2)
}

/// Unbreakable path `U1..Uk` plus one breakable degree-k vertex adjacent to
/// every `Ui`; ports at `U1` and `Uk`.
pub fn u2_from_bk_u3(k: u32) -> Result<Gadget, GadgetError> {
    fan_gadget("u2_from_bk_u3", k, 1)
}

fn fan_gadget(name: &str, k: u32, sides: usize) -> Result<Gadget, GadgetError> {
    if k < 4 {
        return Err(bad(name, "k must be at least 4"));
    }
    let k = k as usize;
    let mut d = Drawing::new();
    let width = (k - 1) as f64;
    let us: Vec<VertexId> = (0..k)
        .map(|i| d.vertex(i as u64, U, (i as f64, 0.0)))
        .collect();
    for w in us.windows(2) {
        d.edge(w[0], w[1]);
    }
    for s in 0..sides {
        let y = if s == 0 { 2.0 } else { -2.0 };
        let hub = d.vertex((k + s) as u64, B, (width / 2.0, y));
        for &u in &us {
            d.edge(hub, u);
        }
    }
    let mut next = (k + sides) as u64;
    let ports = attach_ports(
        &mut d,
        &mut next,
        &[(us[0], (-1.0, 0.0)), (us[k - 1], (width + 1.0, 0.0))],
        (width / 2.0, 0.0),
    );
    Ok(Gadget::new(name, d.build(), ports, unbreakable(2))?.reconstructed())
}

/// Breakable degree-k hub with `k-2` leaves of the given kind and two ports.
pub fn u2_from_bk_leaves(k: u32, leaf: VertexKind) -> Result<Gadget, GadgetError> {
    let name = match leaf {
        U => "u2_from_bk_u1",
        B => "u2_from_bk_b1",
    };
    if k < 4 {
        return Err(bad(name, "k must be at least 4"));
    }
    let k = k as usize;
    let mut d = Drawing::new();
    let hub = d.vertex(0, B, (0.0, 0.0));
    for i in 0..k - 2 {
        let leaf_v = d.vertex(1 + i as u64, leaf, polar(1.0, PI * (i as f64 + 1.0) / (k as f64 - 1.0)));
        d.edge(hub, leaf_v);
    }
    let mut next = (k - 1) as u64;
    let ports = attach_ports(
        &mut d,
        &mut next,
        &[(hub, polar(1.0, 1.25 * PI)), (hub, polar(1.0, 1.75 * PI))],
        (0.0, 0.0),
    );
    Gadget::new(name, d.build(), ports, unbreakable(2)).map_err(Into::into)
}

/// `P` adjacent to `Q1`, `Q2`, `Q3`; `Q2` adjacent to `Q1` and `Q3`; ports at
/// `Q1` and `Q3`. All four vertices breakable of degree 3.
pub fn u2_from_b3() -> Gadget {
    let mut d = Drawing::new();
    let p = d.vertex(0, B, (0.0, 2.0));
    let q1 = d.vertex(1, B, (-1.0, 0.0));
    let q2 = d.vertex(2, B, (0.0, 0.0));
    let q3 = d.vertex(3, B, (1.0, 0.0));
    d.edge(p, q1);
    d.edge(p, q2);
    d.edge(p, q3);
    d.edge(q2, q1);
    d.edge(q2, q3);
    let mut next = 4;
    let ports = attach_ports(
        &mut d,
        &mut next,
        &[(q1, (-2.0, 0.0)), (q3, (2.0, 0.0))],
        (0.0, 0.5),
    );
    Gadget::new("u2_from_b3", d.build(), ports, unbreakable(2)).expect("well formed")
}

/// Counting facts for a hypothetical gadget of `vertices` breakable
/// degree-`degree` vertices with `external` edges leaving it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClosureCounts {
    pub internal_edges: u64,
    /// Breaks needed for the fragment to become one tree, when integral.
    pub one_tree_breaks: Option<u64>,
    /// Breaks needed for the fragment to become two trees, when integral.
    pub two_tree_breaks: Option<u64>,
}

/// Breaking a degree-d vertex adds `d - 1` vertices and no edges, so a tree
/// on `m` edges needs `(m + 1 - vertices) / (d - 1)` breaks and a two-tree
/// forest needs `(m + 2 - vertices) / (d - 1)`.
pub fn closure_counts(vertices: u64, degree: u64, external: u64) -> Option<ClosureCounts> {
    let half_edges = (vertices * degree).checked_sub(external)?;
    if half_edges % 2 != 0 || degree < 2 {
        return None;
    }
    let m = half_edges / 2;
    let breaks = |target: u64| {
        target
            .checked_sub(vertices)
            .filter(|growth| growth % (degree - 1) == 0)
            .map(|growth| growth / (degree - 1))
    };
    Some(ClosureCounts {
        internal_edges: m,
        one_tree_breaks: breaks(m + 1),
        two_tree_breaks: breaks(m + 2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::solver::{solve, verify};

    fn vid(v: u64) -> VertexId {
        VertexId(v)
    }

    #[test]
    fn bare_breakable_vertex_behaves_as_breakable() {
        let gd = single_vertex(B, 4);
        let b = behavior(&gd).unwrap();
        assert_eq!(
            b.partitions(),
            BTreeSet::from([PortPartition::single_block(4), PortPartition::singletons(4)])
        );
        assert!(equivalent_to_breakable(&gd, 4).unwrap());
        assert!(!equivalent_to_unbreakable(&gd, 4).unwrap());
        assert!(matches!(
            equivalent_to_breakable(&gd, 3),
            Err(GadgetError::PortMismatch { expected: 3, ports: 4 })
        ));
    }

    #[test]
    fn hub_with_unbreakable_leaves_needs_empty_break_set() {
        let gd = u2_from_bk_leaves(4, U).unwrap();
        assert_eq!(gd.internal_vertex_count(), 3);
        let b = behavior(&gd).unwrap();
        let only = &b.admissible[&PortPartition::single_block(2)];
        assert_eq!(b.admissible.len(), 1);
        assert_eq!(only.count, 1);
        assert_eq!(only.witnesses, vec![BreakCertificate::default()]);
        assert!(equivalent_to_unbreakable(&gd, 2).unwrap());
        assert!(!equivalent_to_breakable(&gd, 2).unwrap());
    }

    #[test]
    fn b3_gadget_breaks_exactly_one_of_p_and_q2() {
        let gd = u2_from_b3();
        let b = behavior(&gd).unwrap();
        assert_eq!(b.partitions(), BTreeSet::from([PortPartition::single_block(2)]));
        let r = &b.admissible[&PortPartition::single_block(2)];
        assert_eq!(r.count, 2);
        assert_eq!(
            r.witnesses,
            vec![BreakCertificate::new([vid(0)]), BreakCertificate::new([vid(2)])]
        );
    }

    #[test]
    fn two_breakable_degree_two_in_series() {
        let g = corpus::path(&[U, B, B, U]);
        let gd = Gadget::new("series", g, vec![vid(0), vid(3)], Simulates { kind: B, degree: 2 })
            .unwrap();
        let b = behavior(&gd).unwrap();
        assert_eq!(b.admissible[&PortPartition::single_block(2)].count, 1);
        assert_eq!(b.admissible[&PortPartition::singletons(2)].count, 2);
        assert!(equivalent_to_breakable(&gd, 2).unwrap());
    }

    #[test]
    fn catalog_sizes() {
        assert_eq!(u2_from_bk(4).unwrap().internal_vertex_count(), 6);
        assert_eq!(u_from_bk(5, 1).unwrap().port_count(), 3);
        assert_eq!(u2_from_bk_u4(6).unwrap().internal_vertex_count(), 8);
        assert_eq!(u2_from_bk_u3(6).unwrap().internal_vertex_count(), 7);
        assert_eq!(u2_from_bk_b2(7, 2).unwrap().internal_vertex_count(), 5);
        assert!(matches!(builtin("u2_from_b5", None, None), Err(GadgetError::Omitted { .. })));
        assert!(matches!(builtin("nope", None, None), Err(GadgetError::UnknownGadget(_))));
        assert!(matches!(u_from_bk(5, 0), Err(GadgetError::BadParameters { .. })));
    }

    #[test]
    fn every_constructed_catalog_gadget_certifies() {
        for entry in CATALOG.iter().filter(|e| e.constructed) {
            let gd = builtin(entry.name, None, None).unwrap();
            assert!(certify(&gd).unwrap(), "{}", entry.name);
            for v in gd.internal_vertices() {
                if gd.body().is_breakable(v) {
                    assert_eq!(gd.body().degree(v) as u32, breakable_degree(entry.name, &gd, v));
                }
            }
        }
    }

    fn breakable_degree(name: &str, gd: &Gadget, v: VertexId) -> u32 {
        match name {
            "u2_from_bk_b2" if gd.body().degree(v) == 2 => 2,
            "u2_from_bk_b1" if gd.body().degree(v) == 1 => 1,
            "u2_from_b3" => 3,
            _ => builtin_k(name),
        }
    }

    fn builtin_k(name: &str) -> u32 {
        catalog_entry(name).unwrap().default_k
    }

    #[test]
    fn rotation_carrying_gadgets_are_planar() {
        for entry in CATALOG.iter().filter(|e| e.constructed) {
            let gd = builtin(entry.name, None, None).unwrap();
            let summary = gd.body().embedding_summary().unwrap();
            assert!(summary.is_planar(), "{}: {summary:?}", entry.name);
        }
        assert!(!u2_from_bk(5).unwrap().body().has_rotation());
    }

    #[test]
    fn substitute_b3_gadget_into_triangle() {
        let host = corpus::triangle_one_breakable();
        let out = substitute(&host, vid(1), &u2_from_b3()).unwrap();
        assert_eq!(out.vertex_count(), 2 + 4);
        assert_eq!(out.edge_count(), 3 + 5);
        let cert = solve(&out).expect("still solvable");
        assert!(verify(&out, &cert));
    }

    #[test]
    fn substitute_rejects_degree_mismatch() {
        let host = corpus::triangle_one_breakable();
        assert!(matches!(
            substitute(&host, vid(1), &u4_split_u3()),
            Err(GadgetError::DegreeMismatch { degree: 2, ports: 4, .. })
        ));
    }

    #[test]
    fn identity_substitution_relabels_only() {
        let host = corpus::wheel(U, 5);
        let out = substitute(&host, vid(0), &single_vertex(U, 5)).unwrap();
        assert_eq!(out.vertex_count(), host.vertex_count());
        assert_eq!(out.edge_count(), host.edge_count());
        assert!(out.embedding_summary().unwrap().is_planar());
    }

    #[test]
    fn substitution_into_wheel_hub_keeps_planarity() {
        for entry in CATALOG.iter().filter(|e| e.constructed) {
            let gd = builtin(entry.name, None, None).unwrap();
            if !gd.body().has_rotation() {
                continue;
            }
            let t = gd.port_count() as u64;
            let host = if t >= 3 { corpus::wheel(U, t) } else { corpus::cycle(&[U; 3]) };
            let out = substitute(&host, vid(0), &gd).unwrap();
            let s = out.embedding_summary().unwrap();
            assert!(s.is_planar(), "{}: {s:?}", entry.name);
        }
    }

    #[test]
    fn reversed_port_order_breaks_planarity() {
        let gd = u4_split_u3();
        let mut ports = gd.ports().to_vec();
        ports.swap(0, 1);
        let twisted = Gadget::new("twisted", gd.body().clone(), ports, gd.simulates()).unwrap();
        let out = substitute(&corpus::wheel(U, 4), vid(0), &twisted).unwrap();
        assert!(!out.embedding_summary().unwrap().is_planar());
    }

    #[test]
    fn degree_five_closure_arithmetic() {
        let c = closure_counts(32, 5, 2).unwrap();
        assert_eq!(c.internal_edges, 79);
        assert_eq!(c.one_tree_breaks, Some(12));
        assert_eq!(c.two_tree_breaks, None);
    }
}
