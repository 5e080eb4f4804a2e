//! Directed multigraphs, simplification over an arc, and reduction of
//! max-degree-3 Hamiltonicity instances to in/out-degree exactly 2.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{HalfEdge, Multigraph, VertexId, VertexKind};

use super::ReductionError;

/// Largest vertex count [`hamiltonian_cycle`] accepts.
pub const HAM_GUARD: usize = 12;

pub const TAIL: u8 = 0;
pub const HEAD: u8 = 1;

/// Arcs are `[tail, head]`. Arc ends reuse [`HalfEdge`]: end 0 is the tail
/// (outgoing at that vertex) and end 1 the head (incoming).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedMultigraph {
    underlying: Multigraph,
}

impl DirectedMultigraph {
    pub fn new(
        vertices: impl IntoIterator<Item = VertexId>,
        arcs: Vec<[VertexId; 2]>,
    ) -> Result<Self, ReductionError> {
        let underlying =
            Multigraph::new(vertices.into_iter().map(|v| (v, VertexKind::Unbreakable)), arcs)?;
        Ok(Self { underlying })
    }

    pub fn with_rotation(
        self,
        rotation: BTreeMap<VertexId, Vec<HalfEdge>>,
    ) -> Result<Self, ReductionError> {
        Ok(Self {
            underlying: self.underlying.with_rotation(rotation)?,
        })
    }

    pub fn without_rotation(self) -> Self {
        Self {
            underlying: self.underlying.without_rotation(),
        }
    }

    /// The undirected multigraph with the same edges and rotation, all
    /// vertices unbreakable.
    pub fn underlying(&self) -> &Multigraph {
        &self.underlying
    }

    pub fn vertex_count(&self) -> usize {
        self.underlying.vertex_count()
    }

    pub fn arc_count(&self) -> usize {
        self.underlying.edge_count()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.underlying.vertex_ids()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.underlying.contains(v)
    }

    pub fn arcs(&self) -> &[[VertexId; 2]] {
        self.underlying.edges()
    }

    pub fn rotation(&self) -> Option<&BTreeMap<VertexId, Vec<HalfEdge>>> {
        self.underlying.rotation()
    }

    pub fn out_arcs(&self, v: VertexId) -> Vec<usize> {
        self.ends_at(v, TAIL)
    }

    pub fn in_arcs(&self, v: VertexId) -> Vec<usize> {
        self.ends_at(v, HEAD)
    }

    fn ends_at(&self, v: VertexId, end: u8) -> Vec<usize> {
        self.underlying
            .incident(v)
            .iter()
            .filter(|h| h.end == end)
            .map(|h| h.edge)
            .collect()
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out_arcs(v).len()
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.in_arcs(v).len()
    }

    pub fn max_id(&self) -> Option<VertexId> {
        self.underlying.max_id()
    }

    /// The rotation system passes the Euler check.
    pub fn is_planar_embedded(&self) -> Result<bool, ReductionError> {
        Ok(self.underlying.embedding_summary()?.is_planar())
    }

    /// No vertex switches from incoming to outgoing arc ends more than once
    /// around its rotation.
    pub fn is_non_alternating(&self) -> Result<bool, ReductionError> {
        Ok(self.first_alternating()?.is_none())
    }

    pub fn first_alternating(&self) -> Result<Option<VertexId>, ReductionError> {
        let rot = self.rotation().ok_or(ReductionError::MissingRotation)?;
        Ok(rot
            .iter()
            .find(|(_, order)| {
                let n = order.len();
                (0..n)
                    .filter(|&i| order[i].end == HEAD && order[(i + 1) % n].end == TAIL)
                    .count()
                    > 1
            })
            .map(|(&v, _)| v))
    }

    /// Rebuilds from kept arcs (in their current order), mapping endpoints
    /// and rotation entries through `rename`.
    fn rebuild(
        &self,
        vertices: BTreeSet<VertexId>,
        keep: &[usize],
        rename: impl Fn(VertexId) -> VertexId,
        rotation: Option<BTreeMap<VertexId, Vec<HalfEdge>>>,
    ) -> Result<Self, ReductionError> {
        let index: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let arcs = keep
            .iter()
            .map(|&a| {
                let [t, h] = self.arcs()[a];
                [rename(t), rename(h)]
            })
            .collect();
        let g = Self::new(vertices, arcs)?;
        match rotation {
            None => Ok(g),
            Some(rot) => {
                let rot = rot
                    .into_iter()
                    .map(|(v, order)| {
                        let order = order
                            .into_iter()
                            .filter_map(|h| index.get(&h.edge).map(|&e| HalfEdge::new(e, h.end)))
                            .collect();
                        (v, order)
                    })
                    .collect();
                g.with_rotation(rot)
            }
        }
    }

    /// Drops the given arcs, keeping the order of the rest.
    pub fn remove_arcs(&self, removed: &BTreeSet<usize>) -> Result<Self, ReductionError> {
        let keep: Vec<usize> = (0..self.arc_count()).filter(|a| !removed.contains(a)).collect();
        self.rebuild(self.vertices().collect(), &keep, |v| v, self.rotation().cloned())
    }
}

/// Removes every other arc out of `u` and into `v`, then contracts `(u, v)`
/// into a fresh vertex that inherits `u`'s in-arcs and `v`'s out-arcs. Arcs
/// from `v` to `u` become self-loops.
pub fn simplify_over_edge(
    d: &DirectedMultigraph,
    arc: usize,
) -> Result<DirectedMultigraph, ReductionError> {
    let &[u, v] = d.arcs().get(arc).ok_or(ReductionError::UnknownArc(arc))?;
    if u == v {
        return Err(ReductionError::SelfLoopArc(arc));
    }
    let removed: BTreeSet<usize> = d
        .out_arcs(u)
        .into_iter()
        .chain(d.in_arcs(v))
        .collect();
    let keep: Vec<usize> = (0..d.arc_count()).filter(|a| !removed.contains(a)).collect();
    let merged = VertexId(d.max_id().map_or(0, |m| m.0 + 1));
    let rename = |x: VertexId| if x == u || x == v { merged } else { x };
    let mut vertices: BTreeSet<VertexId> = d.vertices().filter(|&x| x != u && x != v).collect();
    vertices.insert(merged);
    let rotation = d.rotation().map(|rot| {
        let mut rot = rot.clone();
        let after = |order: &Vec<HalfEdge>, h: HalfEdge| -> Vec<HalfEdge> {
            let i = order.iter().position(|&x| x == h).expect("arc end in rotation");
            order[i + 1..].iter().chain(&order[..i]).copied().collect()
        };
        let ru = rot.remove(&u).unwrap_or_default();
        let rv = rot.remove(&v).unwrap_or_default();
        let mut joined = after(&ru, HalfEdge::new(arc, TAIL));
        joined.extend(after(&rv, HalfEdge::new(arc, HEAD)));
        joined.retain(|h| !removed.contains(&h.edge));
        rot.insert(merged, joined);
        rot
    });
    d.rebuild(vertices, &keep, rename, rotation)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Preprocessed {
    /// Every in- and out-degree is exactly 2.
    Reduced {
        graph: DirectedMultigraph,
        simplifications: usize,
    },
    /// Small or degenerate enough to answer directly.
    Decided {
        hamiltonian: bool,
        graph: DirectedMultigraph,
        simplifications: usize,
    },
}

impl Preprocessed {
    pub fn graph(&self) -> &DirectedMultigraph {
        match self {
            Preprocessed::Reduced { graph, .. } | Preprocessed::Decided { graph, .. } => graph,
        }
    }
}

/// Simplifies over arcs whose tail has out-degree 1 or whose head has
/// in-degree 1 until every degree is 2. Self-loops are dropped whenever at
/// least two vertices remain, since no Hamiltonian cycle can use them.
pub fn preprocess_to_degree2(d: &DirectedMultigraph) -> Result<Preprocessed, ReductionError> {
    for v in d.vertices() {
        let (i, o) = (d.in_degree(v), d.out_degree(v));
        if !(1..=2).contains(&i) || !(1..=2).contains(&o) {
            return Err(ReductionError::DegreeOutOfRange {
                vertex: v,
                in_degree: i,
                out_degree: o,
            });
        }
    }
    let mut g = d.clone();
    let mut steps = 0;
    loop {
        if g.vertex_count() >= 2 {
            let loops: BTreeSet<usize> =
                (0..g.arc_count()).filter(|&a| g.arcs()[a][0] == g.arcs()[a][1]).collect();
            if !loops.is_empty() {
                g = g.remove_arcs(&loops)?;
            }
        }
        let decided = |g: DirectedMultigraph, hamiltonian: bool| Preprocessed::Decided {
            hamiltonian,
            graph: g,
            simplifications: steps,
        };
        if g.vertex_count() <= 2 {
            let ham = hamiltonian_cycle(&g)?.is_some();
            return Ok(decided(g, ham));
        }
        if g.vertices().any(|v| g.in_degree(v) == 0 || g.out_degree(v) == 0) {
            return Ok(decided(g, false));
        }
        let pick = (0..g.arc_count()).find(|&a| {
            let [u, v] = g.arcs()[a];
            u != v && (g.out_degree(u) == 1 || g.in_degree(v) == 1)
        });
        match pick {
            Some(a) => {
                g = simplify_over_edge(&g, a)?;
                steps += 1;
            }
            None => {
                return Ok(Preprocessed::Reduced {
                    graph: g,
                    simplifications: steps,
                })
            }
        }
    }
}

/// Some directed Hamiltonian cycle as a list of arc indices starting at the
/// lowest vertex. A single vertex is Hamiltonian exactly when it carries a
/// self-loop.
pub fn hamiltonian_cycle(d: &DirectedMultigraph) -> Result<Option<Vec<usize>>, ReductionError> {
    let n = d.vertex_count();
    if n > HAM_GUARD {
        return Err(ReductionError::GuardExceeded {
            vertices: n,
            guard: HAM_GUARD,
        });
    }
    let ids: Vec<VertexId> = d.vertices().collect();
    if n == 0 {
        return Ok(None);
    }
    let index: BTreeMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut out: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (a, [t, h]) in d.arcs().iter().enumerate() {
        out[index[t]].push((a, index[h]));
    }
    if n == 1 {
        return Ok(out[0].first().map(|&(a, _)| vec![a]));
    }
    fn extend(
        at: usize,
        visited: &mut Vec<bool>,
        path: &mut Vec<usize>,
        out: &[Vec<(usize, usize)>],
    ) -> bool {
        let n = visited.len();
        for &(a, to) in &out[at] {
            if path.len() + 1 == n {
                if to == 0 {
                    path.push(a);
                    return true;
                }
                continue;
            }
            if !visited[to] {
                visited[to] = true;
                path.push(a);
                if extend(to, visited, path, out) {
                    return true;
                }
                path.pop();
                visited[to] = false;
            }
        }
        false
    }
    let mut visited = vec![false; n];
    visited[0] = true;
    let mut path = Vec::new();
    Ok(extend(0, &mut visited, &mut path, &out).then_some(path))
}

pub fn ham_brute(d: &DirectedMultigraph) -> Result<bool, ReductionError> {
    Ok(hamiltonian_cycle(d)?.is_some())
}

/// All non-alternating rotations of an in/out-degree-2 graph, one per
/// combination of in-pair order and out-pair order at each vertex, in a fixed
/// enumeration order.
pub fn non_alternating_rotations(
    d: &DirectedMultigraph,
) -> Result<Vec<BTreeMap<VertexId, Vec<HalfEdge>>>, ReductionError> {
    let ids: Vec<VertexId> = d.vertices().collect();
    let mut choices = Vec::with_capacity(ids.len());
    for &v in &ids {
        let (ins, outs) = (d.in_arcs(v), d.out_arcs(v));
        if ins.len() != 2 || outs.len() != 2 {
            return Err(ReductionError::DegreeOutOfRange {
                vertex: v,
                in_degree: ins.len(),
                out_degree: outs.len(),
            });
        }
        let mut local = Vec::with_capacity(4);
        for swap_in in [false, true] {
            for swap_out in [false, true] {
                let (i0, i1) = if swap_in { (ins[1], ins[0]) } else { (ins[0], ins[1]) };
                let (o0, o1) = if swap_out { (outs[1], outs[0]) } else { (outs[0], outs[1]) };
                local.push(vec![
                    HalfEdge::new(i0, HEAD),
                    HalfEdge::new(i1, HEAD),
                    HalfEdge::new(o0, TAIL),
                    HalfEdge::new(o1, TAIL),
                ]);
            }
        }
        choices.push(local);
    }
    let total = 4usize.checked_pow(ids.len() as u32).unwrap_or(usize::MAX);
    let mut all = Vec::new();
    for code in 0..total {
        let mut c = code;
        let rot = ids
            .iter()
            .zip(&choices)
            .map(|(&v, local)| {
                let pick = local[c % 4].clone();
                c /= 4;
                (v, pick)
            })
            .collect();
        all.push(rot);
    }
    Ok(all)
}

/// First non-alternating rotation that passes the Euler check, if any.
pub fn find_planar_non_alternating(
    d: &DirectedMultigraph,
) -> Result<Option<DirectedMultigraph>, ReductionError> {
    for rot in non_alternating_rotations(d)? {
        let g = d.clone().with_rotation(rot)?;
        if g.is_planar_embedded()? {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vid(v: u64) -> VertexId {
        VertexId(v)
    }

    pub(crate) fn digraph(n: u64, arcs: &[(u64, u64)]) -> DirectedMultigraph {
        DirectedMultigraph::new(
            (0..n).map(vid),
            arcs.iter().map(|&(a, b)| [vid(a), vid(b)]).collect(),
        )
        .unwrap()
    }

    #[test]
    fn ham_brute_small_cases() {
        assert!(ham_brute(&digraph(3, &[(0, 1), (1, 2), (2, 0)])).unwrap());
        assert!(!ham_brute(&digraph(2, &[(0, 1)])).unwrap());
        assert!(ham_brute(&digraph(2, &[(0, 1), (1, 0)])).unwrap());
        assert!(ham_brute(&digraph(1, &[(0, 0)])).unwrap());
        assert!(!ham_brute(&digraph(1, &[])).unwrap());
        let big = digraph(13, &[]);
        assert!(matches!(ham_brute(&big), Err(ReductionError::GuardExceeded { .. })));
    }

    #[test]
    fn simplify_triangle() {
        let d = digraph(3, &[(0, 1), (1, 2), (2, 0)]);
        let s = simplify_over_edge(&d, 0).unwrap();
        assert_eq!(s.vertex_count(), 2);
        assert_eq!(s.arcs(), &[[vid(3), vid(2)], [vid(2), vid(3)]]);
        assert!(ham_brute(&s).unwrap());
        assert!(matches!(
            simplify_over_edge(&digraph(1, &[(0, 0)]), 0),
            Err(ReductionError::SelfLoopArc(0))
        ));
        assert!(matches!(simplify_over_edge(&d, 7), Err(ReductionError::UnknownArc(7))));
    }

    #[test]
    fn simplify_drops_competing_in_arc() {
        // 0 has out-degree 1 into 1, which also receives 3 -> 1.
        let d = digraph(4, &[(0, 1), (1, 2), (2, 3), (3, 1), (3, 0), (2, 0)]);
        let s = simplify_over_edge(&d, 0).unwrap();
        assert_eq!(s.vertex_count(), 3);
        assert_eq!(s.arc_count(), 4);
        assert_eq!(ham_brute(&d).unwrap(), ham_brute(&s).unwrap());
        assert!(ham_brute(&s).unwrap());
    }

    #[test]
    fn non_alternating_checks() {
        let d = digraph(3, &[(0, 1), (0, 2), (1, 0), (2, 0)]);
        let rot = |order: Vec<HalfEdge>| {
            BTreeMap::from([
                (vid(0), order),
                (vid(1), vec![HalfEdge::new(0, HEAD), HalfEdge::new(2, TAIL)]),
                (vid(2), vec![HalfEdge::new(1, HEAD), HalfEdge::new(3, TAIL)]),
            ])
        };
        let grouped = d
            .clone()
            .with_rotation(rot(vec![
                HalfEdge::new(2, HEAD),
                HalfEdge::new(3, HEAD),
                HalfEdge::new(0, TAIL),
                HalfEdge::new(1, TAIL),
            ]))
            .unwrap();
        assert!(grouped.is_non_alternating().unwrap());
        let mixed = d
            .clone()
            .with_rotation(rot(vec![
                HalfEdge::new(2, HEAD),
                HalfEdge::new(0, TAIL),
                HalfEdge::new(3, HEAD),
                HalfEdge::new(1, TAIL),
            ]))
            .unwrap();
        assert_eq!(mixed.first_alternating().unwrap(), Some(vid(0)));
        assert!(matches!(d.is_non_alternating(), Err(ReductionError::MissingRotation)));
    }

    #[test]
    fn preprocess_three_cycle() {
        let d = digraph(3, &[(0, 1), (1, 2), (2, 0)]);
        match preprocess_to_degree2(&d).unwrap() {
            Preprocessed::Decided { hamiltonian, simplifications, .. } => {
                assert!(hamiltonian);
                assert_eq!(simplifications, 1);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn preprocess_leaves_degree_two_graph_alone() {
        let d = digraph(3, &[(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)]);
        assert_eq!(
            preprocess_to_degree2(&d).unwrap(),
            Preprocessed::Reduced {
                graph: d,
                simplifications: 0
            }
        );
    }

    #[test]
    fn preprocess_rejects_degree_three() {
        let d = digraph(4, &[(0, 1), (0, 2), (0, 3), (1, 0), (2, 0), (3, 0)]);
        assert!(matches!(
            preprocess_to_degree2(&d),
            Err(ReductionError::DegreeOutOfRange { out_degree: 3, .. })
        ));
    }

    #[test]
    fn preprocess_one_in_degree_one_vertex() {
        // Vertex 3 has in-degree 1; everything else has degree 2.
        let d = digraph(
            4,
            &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 0), (2, 1), (3, 0)],
        );
        assert_eq!(d.in_degree(vid(3)), 1);
        let p = preprocess_to_degree2(&d).unwrap();
        let ham = match &p {
            Preprocessed::Reduced { graph, .. } => ham_brute(graph).unwrap(),
            Preprocessed::Decided { hamiltonian, .. } => *hamiltonian,
        };
        assert_eq!(ham, ham_brute(&d).unwrap());
    }

    #[test]
    fn simplification_keeps_planar_non_alternating() {
        use rand::SeedableRng;
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for n in 2..=5 {
            let embedded = crate::corpus::random_planar_two_in_two_out(&mut rng, n, 200)
                .expect("embeddable sample");
            for a in 0..embedded.arc_count() {
                let s = simplify_over_edge(&embedded, a).unwrap();
                assert!(s.is_non_alternating().unwrap());
                assert!(s.is_planar_embedded().unwrap());
                assert_eq!(s.vertex_count() + 1, embedded.vertex_count());
            }
        }
    }
}
