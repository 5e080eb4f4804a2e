//! Small named graphs and seeded random generators used by tests, the
//! acceptance suite and the CLI examples.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{HalfEdge, Multigraph, VertexId, VertexKind};
use crate::reductions::{find_planar_non_alternating, DirectedMultigraph};

fn vid(v: u64) -> VertexId {
    VertexId(v)
}

/// Attaches the rotation that lists each vertex's half-edges in edge-index
/// order. Planar whenever every vertex has degree at most 2 or the graph is
/// a tree.
fn with_incident_rotation(g: Multigraph) -> Multigraph {
    let rot: BTreeMap<VertexId, Vec<HalfEdge>> = g
        .vertex_ids()
        .map(|v| (v, g.incident(v).to_vec()))
        .collect();
    g.with_rotation(rot).expect("incident order is a valid rotation")
}

/// Path on `kinds.len()` vertices with ids `0..n`.
pub fn path(kinds: &[VertexKind]) -> Multigraph {
    let n = kinds.len() as u64;
    let edges = (1..n).map(|i| [vid(i - 1), vid(i)]).collect();
    let g = Multigraph::new(kinds.iter().enumerate().map(|(i, &k)| (vid(i as u64), k)), edges)
        .expect("path");
    with_incident_rotation(g)
}

/// Cycle through ids `0..n` (n >= 1; n = 1 is a self-loop, n = 2 a doubled edge).
pub fn cycle(kinds: &[VertexKind]) -> Multigraph {
    let n = kinds.len() as u64;
    let edges = (0..n).map(|i| [vid(i), vid((i + 1) % n)]).collect();
    let g = Multigraph::new(kinds.iter().enumerate().map(|(i, &k)| (vid(i as u64), k)), edges)
        .expect("cycle");
    with_incident_rotation(g)
}

/// Center `0` of the given kind with `leaves` unbreakable leaves `1..=leaves`.
pub fn star(center: VertexKind, leaves: u64) -> Multigraph {
    let vertices = std::iter::once((vid(0), center))
        .chain((1..=leaves).map(|i| (vid(i), VertexKind::Unbreakable)));
    let edges = (1..=leaves).map(|i| [vid(0), vid(i)]).collect();
    with_incident_rotation(Multigraph::new(vertices, edges).expect("star"))
}

/// Triangle on `0, 1, 2` in which only vertex `0` is breakable.
pub fn triangle_one_breakable() -> Multigraph {
    cycle(&[VertexKind::Breakable, VertexKind::Unbreakable, VertexKind::Unbreakable])
}

/// Two vertices joined by three parallel edges, embedded in the plane.
pub fn theta() -> Multigraph {
    let g = Multigraph::new(
        [(vid(0), VertexKind::Unbreakable), (vid(1), VertexKind::Unbreakable)],
        vec![[vid(0), vid(1)]; 3],
    )
    .expect("theta");
    let rot = BTreeMap::from([
        (vid(0), (0..3).map(|e| HalfEdge::new(e, 0)).collect()),
        (vid(1), (0..3).rev().map(|e| HalfEdge::new(e, 1)).collect()),
    ]);
    g.with_rotation(rot).expect("theta rotation")
}

/// Builds a simple graph with a rotation system from the triangles of a
/// sphere triangulation. Triangles may be given in any orientation; they are
/// oriented coherently first.
pub fn from_triangles(n: u64, triangles: &[[u64; 3]], kind: VertexKind) -> Multigraph {
    let faces = orient_triangles(triangles);
    let mut edge_index: BTreeMap<(u64, u64), usize> = BTreeMap::new();
    let mut edges = Vec::new();
    for f in &faces {
        for i in 0..3 {
            let (a, b) = (f[i], f[(i + 1) % 3]);
            let key = (a.min(b), a.max(b));
            edge_index.entry(key).or_insert_with(|| {
                edges.push([vid(key.0), vid(key.1)]);
                edges.len() - 1
            });
        }
    }
    // Around vertex a, the face (a, b, c) puts c right after b.
    let mut succ: BTreeMap<u64, BTreeMap<u64, u64>> = BTreeMap::new();
    for f in &faces {
        for i in 0..3 {
            let (a, b, c) = (f[i], f[(i + 1) % 3], f[(i + 2) % 3]);
            succ.entry(a).or_default().insert(b, c);
        }
    }
    let mut rot = BTreeMap::new();
    for (&a, next) in &succ {
        let start = *next.keys().next().expect("vertex on a face");
        let mut order = Vec::new();
        let mut cur = start;
        loop {
            let key = (a.min(cur), a.max(cur));
            let e = edge_index[&key];
            let end = if edges[e][0] == vid(a) { 0 } else { 1 };
            order.push(HalfEdge::new(e, end));
            cur = next[&cur];
            if cur == start {
                break;
            }
        }
        rot.insert(vid(a), order);
    }
    Multigraph::new((0..n).map(|i| (vid(i), kind)), edges)
        .and_then(|g| g.with_rotation(rot))
        .expect("triangulation")
}

fn orient_triangles(triangles: &[[u64; 3]]) -> Vec<[u64; 3]> {
    let mut faces: Vec<[u64; 3]> = triangles.to_vec();
    let mut by_edge: BTreeMap<(u64, u64), Vec<usize>> = BTreeMap::new();
    for (i, f) in faces.iter().enumerate() {
        for j in 0..3 {
            let (a, b) = (f[j], f[(j + 1) % 3]);
            by_edge.entry((a.min(b), a.max(b))).or_default().push(i);
        }
    }
    let directed = |f: &[u64; 3], a: u64, b: u64| (0..3).any(|j| f[j] == a && f[(j + 1) % 3] == b);
    let mut done = vec![false; faces.len()];
    for root in 0..faces.len() {
        if done[root] {
            continue;
        }
        done[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(i) = queue.pop_front() {
            let f = faces[i];
            for j in 0..3 {
                let (a, b) = (f[j], f[(j + 1) % 3]);
                for &other in &by_edge[&(a.min(b), a.max(b))] {
                    if other == i || done[other] {
                        continue;
                    }
                    if directed(&faces[other], a, b) {
                        faces[other].reverse();
                    }
                    done[other] = true;
                    queue.push_back(other);
                }
            }
        }
    }
    faces
}

fn k4_triangles() -> Vec<[u64; 3]> {
    vec![[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2]]
}

/// K4 with its planar embedding; all vertices unbreakable.
pub fn k4() -> Multigraph {
    from_triangles(4, &k4_triangles(), VertexKind::Unbreakable)
}

fn icosahedron_triangles() -> Vec<[u64; 3]> {
    // 0 top, 1..=5 upper ring, 6..=10 lower ring, 11 bottom.
    let mut t = Vec::new();
    for i in 0..5 {
        let (u, u2) = (1 + i, 1 + (i + 1) % 5);
        let (l, l2) = (6 + i, 6 + (i + 1) % 5);
        t.push([0, u, u2]);
        t.push([u, l, u2]);
        t.push([u2, l, l2]);
        t.push([11, l2, l]);
    }
    t
}

/// The icosahedron: 12 vertices of degree 5, planar and simple.
pub fn icosahedron(kind: VertexKind) -> Multigraph {
    from_triangles(12, &icosahedron_triangles(), kind)
}

/// Splits every triangle into four, adding one vertex per edge.
pub fn subdivide_triangles(n: u64, triangles: &[[u64; 3]]) -> (u64, Vec<[u64; 3]>) {
    let mut mid: BTreeMap<(u64, u64), u64> = BTreeMap::new();
    let mut next = n;
    let mut midpoint = |a: u64, b: u64| {
        *mid.entry((a.min(b), a.max(b))).or_insert_with(|| {
            next += 1;
            next - 1
        })
    };
    let mut out = Vec::new();
    for &[a, b, c] in triangles {
        let (ab, bc, ca) = (midpoint(a, b), midpoint(b, c), midpoint(c, a));
        out.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
    }
    (next, out)
}

/// Triangulated sphere instances in which every vertex has degree at least 5.
/// Vertices of degree at least 6 are marked breakable with probability
/// `p_breakable`; random edge flips and deletions add variety while keeping
/// the graph simple and the minimum degree at least 5.
pub fn min_degree_five_planar<R: Rng>(rng: &mut R, flips: usize, deletions: usize, p_breakable: f64) -> Multigraph {
    let (n, mut tris) = subdivide_triangles(12, &icosahedron_triangles());
    tris = orient_triangles(&tris);
    for _ in 0..flips {
        random_flip(rng, &mut tris);
    }
    let base = from_triangles(n, &tris, VertexKind::Unbreakable);
    let mut removed: BTreeSet<usize> = BTreeSet::new();
    let mut degree: BTreeMap<VertexId, usize> = base.vertex_ids().map(|v| (v, base.degree(v))).collect();
    let mut candidates: Vec<usize> = (0..base.edge_count()).collect();
    candidates.shuffle(rng);
    for e in candidates {
        if removed.len() >= deletions {
            break;
        }
        let [a, b] = base.edges()[e];
        if degree[&a] > 5 && degree[&b] > 5 {
            removed.insert(e);
            *degree.get_mut(&a).unwrap() -= 1;
            *degree.get_mut(&b).unwrap() -= 1;
        }
    }
    let kinds: Vec<(VertexId, VertexKind)> = base
        .vertex_ids()
        .map(|v| {
            let kind = if degree[&v] >= 6 && rng.gen_bool(p_breakable) {
                VertexKind::Breakable
            } else {
                VertexKind::Unbreakable
            };
            (v, kind)
        })
        .collect();
    delete_edges(&base, &removed, kinds)
}

fn delete_edges(
    base: &Multigraph,
    removed: &BTreeSet<usize>,
    kinds: Vec<(VertexId, VertexKind)>,
) -> Multigraph {
    let mut remap = BTreeMap::new();
    let mut edges = Vec::new();
    for (e, ends) in base.edges().iter().enumerate() {
        if !removed.contains(&e) {
            remap.insert(e, edges.len());
            edges.push(*ends);
        }
    }
    let keep: BTreeSet<VertexId> = kinds.iter().map(|(v, _)| *v).collect();
    let rot = base.rotation().map(|rot| {
        rot.iter()
            .filter(|(v, _)| keep.contains(v))
            .map(|(&v, order)| {
                let kept = order
                    .iter()
                    .filter_map(|h| remap.get(&h.edge).map(|&e| HalfEdge::new(e, h.end)))
                    .collect();
                (v, kept)
            })
            .collect()
    });
    let g = Multigraph::new(kinds, edges).expect("edge deletion");
    match rot {
        Some(r) => g.with_rotation(r).expect("rotation after deletion"),
        None => g,
    }
}

fn random_flip<R: Rng>(rng: &mut R, tris: &mut [[u64; 3]]) {
    let mut degree: BTreeMap<u64, usize> = BTreeMap::new();
    let mut adjacent: BTreeSet<(u64, u64)> = BTreeSet::new();
    for f in tris.iter() {
        for j in 0..3 {
            let (a, b) = (f[j], f[(j + 1) % 3]);
            if adjacent.insert((a.min(b), a.max(b))) {
                *degree.entry(a).or_default() += 1;
                *degree.entry(b).or_default() += 1;
            }
        }
    }
    for _ in 0..64 {
        let i = rng.gen_range(0..tris.len());
        let j = rng.gen_range(0..3);
        let (a, b, c) = (tris[i][j], tris[i][(j + 1) % 3], tris[i][(j + 2) % 3]);
        let Some(k) = (0..tris.len()).find(|&k| {
            k != i && (0..3).any(|m| tris[k][m] == b && tris[k][(m + 1) % 3] == a)
        }) else {
            continue;
        };
        let d = *tris[k].iter().find(|&&x| x != a && x != b).expect("third vertex");
        if degree[&a] <= 5 || degree[&b] <= 5 || adjacent.contains(&(c.min(d), c.max(d))) {
            continue;
        }
        tris[i] = [a, d, c];
        tris[k] = [d, b, c];
        return;
    }
}

/// Random multigraph with `1..=max_vertices` vertices and up to `max_edges`
/// edges (self-loops and parallel edges allowed) and no degree-0 vertex.
pub fn random_multigraph<R: Rng>(rng: &mut R, max_vertices: u64, max_edges: usize) -> Multigraph {
    loop {
        let n = rng.gen_range(1..=max_vertices);
        let min_edges = (n as usize).div_ceil(2).max(1);
        if min_edges > max_edges {
            continue;
        }
        let m = rng.gen_range(min_edges..=max_edges);
        let edges: Vec<[VertexId; 2]> = (0..m)
            .map(|_| [vid(rng.gen_range(0..n)), vid(rng.gen_range(0..n))])
            .collect();
        let mut covered = BTreeSet::new();
        for [a, b] in &edges {
            covered.insert(*a);
            covered.insert(*b);
        }
        if covered.len() as u64 != n {
            continue;
        }
        let kinds = (0..n).map(|i| {
            let kind = if rng.gen_bool(0.6) { VertexKind::Breakable } else { VertexKind::Unbreakable };
            (vid(i), kind)
        });
        return Multigraph::new(kinds, edges).expect("random multigraph");
    }
}

/// Uniform random labeled tree on `n >= 2` vertices via a Prüfer sequence.
pub fn random_tree<R: Rng>(rng: &mut R, n: u64) -> Multigraph {
    let seq: Vec<u64> = (0..n.saturating_sub(2)).map(|_| rng.gen_range(0..n)).collect();
    tree_from_prufer(n, &seq)
}

pub fn tree_from_prufer(n: u64, seq: &[u64]) -> Multigraph {
    let mut degree = vec![1usize; n as usize];
    for &s in seq {
        degree[s as usize] += 1;
    }
    let mut edges = Vec::new();
    for &s in seq {
        let leaf = (0..n as usize).find(|&i| degree[i] == 1).expect("leaf");
        edges.push([vid(leaf as u64), vid(s)]);
        degree[leaf] -= 1;
        degree[s as usize] -= 1;
    }
    let rest: Vec<u64> = (0..n).filter(|&i| degree[i as usize] == 1).collect();
    if rest.len() == 2 {
        edges.push([vid(rest[0]), vid(rest[1])]);
    }
    Multigraph::new((0..n).map(|i| (vid(i), VertexKind::Unbreakable)), edges).expect("tree")
}

/// Tree given by a parent array: vertex `i >= 1` hangs from `parent[i - 1] < i`.
pub fn tree_from_parents(parents: &[u64]) -> Multigraph {
    let n = parents.len() as u64 + 1;
    let edges = parents
        .iter()
        .enumerate()
        .map(|(i, &p)| [vid(p), vid(i as u64 + 1)])
        .collect();
    Multigraph::new((0..n).map(|i| (vid(i), VertexKind::Unbreakable)), edges).expect("tree")
}

/// Wheel: hub `0` joined to rim `1..=spokes`, rim closed into a cycle,
/// embedded in the plane. `spokes >= 3`.
pub fn wheel(hub: VertexKind, spokes: u64) -> Multigraph {
    // Triangulate with an apex over the rim face, then drop the apex.
    let apex = spokes + 1;
    let mut tris: Vec<[u64; 3]> = (0..spokes).map(|i| [0, 1 + i, 1 + (i + 1) % spokes]).collect();
    tris.extend((0..spokes).map(|i| [apex, 1 + (i + 1) % spokes, 1 + i]));
    let closed = from_triangles(spokes + 2, &tris, VertexKind::Unbreakable);
    let removed: BTreeSet<usize> = closed.incident(vid(apex)).iter().map(|h| h.edge).collect();
    let kinds = closed
        .vertex_ids()
        .filter(|&v| v != vid(apex))
        .map(|v| (v, if v == vid(0) { hub } else { VertexKind::Unbreakable }))
        .collect();
    delete_edges(&closed, &removed, kinds)
}

/// Random digraph on `0..n` with every in- and out-degree 2, formed from two
/// random derangements. Parallel arcs are possible, self-loops are not.
pub fn random_two_in_two_out<R: Rng>(rng: &mut R, n: u64) -> DirectedMultigraph {
    let derangement = |rng: &mut R| loop {
        let mut p: Vec<u64> = (0..n).collect();
        p.shuffle(rng);
        if p.iter().enumerate().all(|(i, &x)| i as u64 != x) {
            return p;
        }
    };
    let (a, b) = (derangement(rng), derangement(rng));
    let arcs = (0..n as usize)
        .flat_map(|i| [[vid(i as u64), vid(a[i])], [vid(i as u64), vid(b[i])]])
        .collect();
    DirectedMultigraph::new((0..n).map(vid), arcs).expect("derangement digraph")
}

/// Samples 2-in/2-out digraphs on `n >= 2` vertices until one admits a planar
/// non-alternating rotation, which it then carries.
pub fn random_planar_two_in_two_out<R: Rng>(
    rng: &mut R,
    n: u64,
    attempts: usize,
) -> Option<DirectedMultigraph> {
    (0..attempts).find_map(|_| {
        let d = random_two_in_two_out(rng, n);
        find_planar_non_alternating(&d).expect("degrees are 2")
    })
}

/// Disjoint union of two directed graphs, the second shifted above the
/// first's ids. Rotations are kept when both carry one.
pub fn disjoint_union(a: &DirectedMultigraph, b: &DirectedMultigraph) -> DirectedMultigraph {
    let shift = a.max_id().map_or(0, |m| m.0 + 1);
    let moved = |v: VertexId| VertexId(v.0 + shift);
    let offset = a.arc_count();
    let vertices: Vec<VertexId> = a.vertices().chain(b.vertices().map(moved)).collect();
    let arcs = a
        .arcs()
        .iter()
        .copied()
        .chain(b.arcs().iter().map(|&[t, h]| [moved(t), moved(h)]))
        .collect();
    let d = DirectedMultigraph::new(vertices, arcs).expect("union");
    match (a.rotation(), b.rotation()) {
        (Some(ra), Some(rb)) => {
            let mut rot = ra.clone();
            for (&v, order) in rb {
                let order = order.iter().map(|h| HalfEdge::new(h.edge + offset, h.end)).collect();
                rot.insert(moved(v), order);
            }
            d.with_rotation(rot).expect("union rotation")
        }
        _ => d,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn named_embeddings_are_planar() {
        for g in [k4(), theta(), icosahedron(VertexKind::Unbreakable), wheel(VertexKind::Breakable, 5)] {
            assert!(g.embedding_summary().unwrap().is_planar());
        }
        let ico = icosahedron(VertexKind::Unbreakable);
        assert_eq!((ico.vertex_count(), ico.edge_count()), (12, 30));
        assert!(ico.vertex_ids().all(|v| ico.degree(v) == 5));
    }

    #[test]
    fn min_degree_five_family() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..5 {
            let g = min_degree_five_planar(&mut rng, 20, 6, 0.5);
            assert!(g.embedding_summary().unwrap().is_planar());
            assert!(g.vertex_ids().all(|v| g.degree(v) >= 5));
            assert!(g.breakable_vertices().all(|v| g.degree(v) >= 6));
        }
    }

    #[test]
    fn random_generators_respect_bounds() {
        let mut rng = StdRng::seed_from_u64(1);
        for _ in 0..200 {
            let g = random_multigraph(&mut rng, 6, 9);
            assert!(g.vertex_count() <= 6 && g.edge_count() <= 9);
            assert!(g.vertex_ids().all(|v| g.degree(v) > 0));
        }
        for n in 2..12 {
            assert!(random_tree(&mut rng, n).is_tree());
        }
    }
}
