//! Exact TRVB decision by lexicographic subset search over breakable vertices.
//!
//! A search node is a chosen set `S` plus a cursor `i` into the vertex order;
//! its descendants add vertices from `order[i..]` only, so every vertex before
//! the cursor that is not in `S` is decided unbroken.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{GraphError, Multigraph, VertexId};
use crate::unionfind::UnionFind;

/// Default bound on the number of solutions collected by enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;

/// A set of breakable vertices claimed to leave a tree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BreakCertificate {
    pub broken: BTreeSet<VertexId>,
}

impl BreakCertificate {
    pub fn new(broken: impl IntoIterator<Item = VertexId>) -> Self {
        Self {
            broken: broken.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.broken.len()
    }

    pub fn is_empty(&self) -> bool {
        self.broken.is_empty()
    }

    pub fn to_vec(&self) -> Vec<VertexId> {
        self.broken.iter().copied().collect()
    }
}

/// Switches for the individual pruning rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    /// Partial degree sums must stay extendable to `E - V + 1`.
    pub budget: bool,
    /// No two adjacent vertices broken, and no vertex with a self-loop, unless
    /// the graph has a single edge.
    pub adjacency: bool,
    /// A cycle through decided-unbroken vertices kills the branch.
    pub isolated_cycle: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            budget: true,
            adjacency: true,
            isolated_cycle: true,
        }
    }
}

impl SolveOptions {
    pub fn unpruned() -> Self {
        Self {
            budget: false,
            adjacency: false,
            isolated_cycle: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchStats {
    pub nodes: u64,
    pub residue_checks: u64,
    pub budget_prunes: u64,
    pub adjacency_prunes: u64,
    pub cycle_prunes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub solutions: Vec<BreakCertificate>,
    /// More than `cap` solutions exist.
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyFailure {
    UnknownVertex(VertexId),
    NotBreakable(VertexId),
    NotATree,
}

impl VerifyFailure {
    /// Stable machine-readable reason code.
    pub fn code(&self) -> &'static str {
        match self {
            VerifyFailure::UnknownVertex(_) => "unknown vertex",
            VerifyFailure::NotBreakable(_) => "not breakable",
            VerifyFailure::NotATree => "not a tree",
        }
    }
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyFailure::UnknownVertex(v) => write!(f, "unknown vertex {v}"),
            VerifyFailure::NotBreakable(v) => write!(f, "vertex {v} is not breakable"),
            VerifyFailure::NotATree => write!(f, "residue is not a tree"),
        }
    }
}

/// Checks a certificate through the public breaking operation, independently
/// of the search.
pub fn verify_detailed(g: &Multigraph, cert: &BreakCertificate) -> Result<(), VerifyFailure> {
    for &v in &cert.broken {
        match g.kind(v) {
            None => return Err(VerifyFailure::UnknownVertex(v)),
            Some(k) if !k.is_breakable() => return Err(VerifyFailure::NotBreakable(v)),
            Some(_) => {}
        }
    }
    let residue = g.break_set(&cert.to_vec()).map_err(|e| match e {
        GraphError::UnknownVertex(v) => VerifyFailure::UnknownVertex(v),
        GraphError::NotBreakable(v) => VerifyFailure::NotBreakable(v),
        _ => VerifyFailure::NotATree,
    })?;
    if residue.is_tree() {
        Ok(())
    } else {
        Err(VerifyFailure::NotATree)
    }
}

pub fn verify(g: &Multigraph, cert: &BreakCertificate) -> bool {
    verify_detailed(g, cert).is_ok()
}

pub fn solve(g: &Multigraph) -> Option<BreakCertificate> {
    solve_with(g, SolveOptions::default()).0
}

/// First solution found when branching on breakable vertices by descending
/// degree.
pub fn solve_with(g: &Multigraph, opts: SolveOptions) -> (Option<BreakCertificate>, SearchStats) {
    let mut search = Search::new(g, opts, Order::DescendingDegree);
    let mut found = None;
    search.run(&mut |cert| {
        found = Some(cert);
        false
    });
    (found, search.stats)
}

pub fn enumerate_solutions(g: &Multigraph, cap: usize) -> Enumeration {
    enumerate_solutions_with(g, cap, SolveOptions::default()).0
}

/// All solutions in lexicographic order of their sorted member lists.
pub fn enumerate_solutions_with(
    g: &Multigraph,
    cap: usize,
    opts: SolveOptions,
) -> (Enumeration, SearchStats) {
    let cap = cap.max(1);
    let mut search = Search::new(g, opts, Order::AscendingId);
    let mut solutions = Vec::new();
    let mut truncated = false;
    search.run(&mut |cert| {
        if solutions.len() == cap {
            truncated = true;
            return false;
        }
        solutions.push(cert);
        true
    });
    (Enumeration { solutions, truncated }, search.stats)
}

#[derive(Clone, Copy)]
enum Order {
    DescendingDegree,
    AscendingId,
}

struct Search {
    opts: SolveOptions,
    stats: SearchStats,
    n: usize,
    edge_count: usize,
    ends: Vec<[usize; 2]>,
    ids: Vec<VertexId>,
    order: Vec<usize>,
    weight: Vec<i64>,
    target: i64,
    /// `reach[i][s + offset]`: some subset of `order[i..]` has weight sum `s`.
    reach: Vec<Vec<bool>>,
    offset: i64,
    self_loop: Vec<bool>,
    neighbors: Vec<Vec<usize>>,
    broken: Vec<bool>,
}

impl Search {
    fn new(g: &Multigraph, opts: SolveOptions, order_kind: Order) -> Self {
        let index: BTreeMap<VertexId, usize> = g.index_map();
        let ids: Vec<VertexId> = g.vertex_ids().collect();
        let n = ids.len();
        let ends: Vec<[usize; 2]> = g.edges().iter().map(|[a, b]| [index[a], index[b]]).collect();
        let mut degree = vec![0i64; n];
        let mut self_loop = vec![false; n];
        let mut neighbors = vec![Vec::new(); n];
        for &[a, b] in &ends {
            degree[a] += 1;
            degree[b] += 1;
            if a == b {
                self_loop[a] = true;
            } else {
                neighbors[a].push(b);
                neighbors[b].push(a);
            }
        }
        let mut order: Vec<usize> = (0..n).filter(|&i| g.is_breakable(ids[i])).collect();
        if let Order::DescendingDegree = order_kind {
            order.sort_by(|&a, &b| degree[b].cmp(&degree[a]).then(a.cmp(&b)));
        }
        let weight: Vec<i64> = order.iter().map(|&v| degree[v] - 1).collect();
        let offset = weight.iter().filter(|&&w| w < 0).map(|w| -w).sum::<i64>();
        let span = (offset + weight.iter().filter(|&&w| w > 0).sum::<i64>()) as usize + 1;
        let mut reach = vec![vec![false; span]; order.len() + 1];
        reach[order.len()][offset as usize] = true;
        for i in (0..order.len()).rev() {
            let (head, tail) = reach.split_at_mut(i + 1);
            let (cur, next) = (&mut head[i], &tail[0]);
            for s in 0..span {
                if next[s] {
                    cur[s] = true;
                    let t = s as i64 + weight[i];
                    if (0..span as i64).contains(&t) {
                        cur[t as usize] = true;
                    }
                }
            }
        }
        Self {
            opts,
            stats: SearchStats::default(),
            n,
            edge_count: ends.len(),
            ends,
            ids,
            order,
            weight,
            target: g.required_vertex_growth(),
            reach,
            offset,
            self_loop,
            neighbors,
            broken: vec![false; n],
        }
    }

    fn reachable(&self, i: usize, remaining: i64) -> bool {
        let s = remaining + self.offset;
        s >= 0 && (s as usize) < self.reach[i].len() && self.reach[i][s as usize]
    }

    /// Visits every solution; `emit` returns false to stop.
    fn run(&mut self, emit: &mut dyn FnMut(BreakCertificate) -> bool) {
        if self.n == 0 {
            return;
        }
        if self.opts.budget && !self.reachable(0, self.target) {
            self.stats.budget_prunes += 1;
            return;
        }
        let mut chosen = Vec::new();
        self.visit(0, 0, &mut chosen, emit);
    }

    fn visit(
        &mut self,
        cursor: usize,
        sum: i64,
        chosen: &mut Vec<usize>,
        emit: &mut dyn FnMut(BreakCertificate) -> bool,
    ) -> bool {
        self.stats.nodes += 1;
        if self.opts.isolated_cycle && self.decided_cycle(cursor) {
            self.stats.cycle_prunes += 1;
            return true;
        }
        if (!self.opts.budget || sum == self.target) && self.residue_is_tree() {
            let cert = BreakCertificate::new(chosen.iter().map(|&v| self.ids[v]));
            if !emit(cert) {
                return false;
            }
        }
        for j in cursor..self.order.len() {
            let v = self.order[j];
            let next_sum = sum + self.weight[j];
            if self.opts.budget && !self.reachable(j + 1, self.target - next_sum) {
                self.stats.budget_prunes += 1;
                continue;
            }
            if self.opts.adjacency && self.edge_count >= 2 && self.conflicts(v) {
                self.stats.adjacency_prunes += 1;
                continue;
            }
            self.broken[v] = true;
            chosen.push(v);
            let go_on = self.visit(j + 1, next_sum, chosen, emit);
            chosen.pop();
            self.broken[v] = false;
            if !go_on {
                return false;
            }
        }
        true
    }

    fn conflicts(&self, v: usize) -> bool {
        self.self_loop[v] || self.neighbors[v].iter().any(|&u| self.broken[u])
    }

    /// Cycle among vertices that can no longer be broken at this node.
    fn decided_cycle(&self, cursor: usize) -> bool {
        let mut open = vec![false; self.n];
        for &v in &self.order[cursor..] {
            open[v] = true;
        }
        let fixed = |v: usize| !self.broken[v] && !open[v];
        let mut uf = UnionFind::new(self.n);
        self.ends
            .iter()
            .filter(|&&[a, b]| fixed(a) && fixed(b))
            .any(|&[a, b]| !uf.union(a, b))
    }

    /// Broken endpoints become private leaves: node `n + 2e + end`.
    fn residue_is_tree(&mut self) -> bool {
        self.stats.residue_checks += 1;
        let nodes = self.n + 2 * self.edge_count;
        let mut uf = UnionFind::new(nodes);
        let mut residue_vertices = self.n;
        for (e, &[a, b]) in self.ends.iter().enumerate() {
            let node = |v: usize, end: usize| {
                if self.broken[v] {
                    self.n + 2 * e + end
                } else {
                    v
                }
            };
            if !uf.union(node(a, 0), node(b, 1)) {
                return false;
            }
            residue_vertices += usize::from(self.broken[a]) + usize::from(self.broken[b]);
        }
        residue_vertices -= self.broken.iter().filter(|&&b| b).count();
        self.edge_count + 1 == residue_vertices
    }
}
