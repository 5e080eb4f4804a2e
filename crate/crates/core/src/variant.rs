//! Degree-restricted problem variants and instance validation against them.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::graph::{Multigraph, VertexId, VertexKind};

/// A set of positive integers: finitely many members plus an optional tail
/// "every integer >= m".
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DegreeSet {
    finite: BTreeSet<u32>,
    tail: Option<u32>,
}

impl DegreeSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// All positive integers.
    pub fn all() -> Self {
        Self::at_least(1)
    }

    pub fn at_least(m: u32) -> Self {
        Self {
            finite: BTreeSet::new(),
            tail: Some(m.max(1)),
        }
    }

    pub fn of(members: &[u32]) -> Self {
        Self {
            finite: members.iter().copied().filter(|&d| d > 0).collect(),
            tail: None,
        }
        .normalized()
    }

    pub fn with_tail(mut self, m: u32) -> Self {
        self.tail = Some(self.tail.map_or(m.max(1), |t| t.min(m.max(1))));
        self.normalized()
    }

    pub fn insert(&mut self, d: u32) {
        if d > 0 {
            self.finite.insert(d);
        }
        *self = std::mem::take(self).normalized();
    }

    pub fn union(&self, other: &DegreeSet) -> DegreeSet {
        let mut out = DegreeSet {
            finite: self.finite.union(&other.finite).copied().collect(),
            tail: match (self.tail, other.tail) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            },
        };
        out = out.normalized();
        out
    }

    /// Folds finite members covered by the tail into it.
    fn normalized(mut self) -> Self {
        if let Some(mut t) = self.tail {
            self.finite.retain(|&d| d < t);
            while t > 1 && self.finite.remove(&(t - 1)) {
                t -= 1;
            }
            self.tail = Some(t);
        }
        self
    }

    pub fn tail(&self) -> Option<u32> {
        self.tail
    }

    pub fn finite_members(&self) -> impl Iterator<Item = u32> + '_ {
        self.finite.iter().copied()
    }

    pub fn contains(&self, d: u32) -> bool {
        d > 0 && (self.tail.is_some_and(|t| d >= t) || self.finite.contains(&d))
    }

    pub fn is_empty(&self) -> bool {
        self.finite.is_empty() && self.tail.is_none()
    }

    /// Whether some member lies in `lo..=hi`.
    pub fn intersects_range(&self, lo: u32, hi: u32) -> bool {
        if lo > hi {
            return false;
        }
        self.tail.is_some_and(|t| t <= hi) || self.finite.range(lo..=hi).next().is_some()
    }

    /// Whether every member lies in `1..=hi`.
    pub fn is_subset_of_up_to(&self, hi: u32) -> bool {
        self.tail.is_none() && self.finite.iter().all(|&d| d <= hi)
    }

    pub fn is_subset_of(&self, other: &DegreeSet) -> bool {
        let tail_ok = match (self.tail, other.tail) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(a), Some(b)) => a >= b || (a..b).all(|d| other.finite.contains(&d)),
        };
        tail_ok && self.finite.iter().all(|&d| other.contains(d))
    }

    /// Some member is at least `m`.
    pub fn has_member_at_least(&self, m: u32) -> bool {
        self.tail.is_some() || self.finite.range(m..).next().is_some()
    }
}

impl fmt::Display for DegreeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.finite.iter().map(u32::to_string).collect();
        if let Some(t) = self.tail {
            parts.push(format!("{t}+"));
        }
        if parts.is_empty() {
            write!(f, "none")
        } else {
            write!(f, "{}", parts.join(","))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDegreeSetError(pub String);

impl fmt::Display for ParseDegreeSetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid degree set: {}", self.0)
    }
}

impl std::error::Error for ParseDegreeSetError {}

/// Accepts comma-separated members, `m+` for a tail, ranges `a-b`, `all`
/// and `none`.
impl FromStr for DegreeSet {
    type Err = ParseDegreeSetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let mut set = DegreeSet::empty();
        if s.is_empty() || s.eq_ignore_ascii_case("none") {
            return Ok(set);
        }
        for part in s.split(',').map(str::trim) {
            let bad = || ParseDegreeSetError(part.to_string());
            if part.eq_ignore_ascii_case("all") {
                set = set.with_tail(1);
            } else if let Some(m) = part.strip_suffix('+') {
                let m: u32 = m.trim().parse().map_err(|_| bad())?;
                if m == 0 {
                    return Err(bad());
                }
                set = set.with_tail(m);
            } else if let Some((a, b)) = part.split_once('-') {
                let a: u32 = a.trim().parse().map_err(|_| bad())?;
                let b: u32 = b.trim().parse().map_err(|_| bad())?;
                if a == 0 || a > b {
                    return Err(bad());
                }
                for d in a..=b {
                    set.insert(d);
                }
            } else {
                let d: u32 = part.parse().map_err(|_| bad())?;
                if d == 0 {
                    return Err(bad());
                }
                set.insert(d);
            }
        }
        Ok(set)
    }
}

/// Allowed breakable degrees, allowed unbreakable degrees, and the planar and
/// simple-graph restrictions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariantSpec {
    pub breakable: DegreeSet,
    pub unbreakable: DegreeSet,
    pub planar: bool,
    pub simple: bool,
}

impl VariantSpec {
    /// Unrestricted TRVB.
    pub fn unrestricted() -> Self {
        Self {
            breakable: DegreeSet::all(),
            unbreakable: DegreeSet::all(),
            planar: false,
            simple: false,
        }
    }
}

impl fmt::Display for VariantSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match (self.planar, self.simple) {
            (true, true) => "Planar Graph ",
            (true, false) => "Planar ",
            (false, true) => "Graph ",
            (false, false) => "",
        };
        write!(f, "{prefix}({{{}}}, {{{}}})-TRVB", self.breakable, self.unbreakable)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    ZeroDegree { vertex: VertexId },
    DegreeNotAllowed { vertex: VertexId, kind: VertexKind, degree: usize },
    SelfLoop { edge: usize },
    ParallelEdges { a: VertexId, b: VertexId, edges: Vec<usize> },
    MissingRotation,
    NonPlanarEmbedding { euler_sum: i64, expected: i64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ZeroDegree { vertex } => write!(f, "vertex {vertex} has degree 0"),
            Violation::DegreeNotAllowed { vertex, kind, degree } => {
                let kind = if kind.is_breakable() { "breakable" } else { "unbreakable" };
                write!(f, "{kind} vertex {vertex} has disallowed degree {degree}")
            }
            Violation::SelfLoop { edge } => write!(f, "self-loop at edge {edge}"),
            Violation::ParallelEdges { a, b, edges } => {
                write!(f, "parallel edges between {a} and {b}: {edges:?}")
            }
            Violation::MissingRotation => write!(f, "planar instance without a rotation system"),
            Violation::NonPlanarEmbedding { euler_sum, expected } => write!(
                f,
                "rotation system is not planar: V - E + F = {euler_sum}, expected {expected}"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Faces traced when a planarity check ran.
    pub faces: Option<usize>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks degrees, simplicity and certified planarity of `g` against `spec`.
pub fn validate(g: &Multigraph, spec: &VariantSpec) -> ValidationReport {
    let mut report = ValidationReport::default();
    for (v, kind) in g.vertices() {
        let degree = g.degree(v);
        if degree == 0 {
            report.violations.push(Violation::ZeroDegree { vertex: v });
            continue;
        }
        let allowed = match kind {
            VertexKind::Breakable => &spec.breakable,
            VertexKind::Unbreakable => &spec.unbreakable,
        };
        if !allowed.contains(degree as u32) {
            report
                .violations
                .push(Violation::DegreeNotAllowed { vertex: v, kind, degree });
        }
    }
    if spec.simple {
        let mut pairs: std::collections::BTreeMap<(VertexId, VertexId), Vec<usize>> =
            Default::default();
        for (e, &[a, b]) in g.edges().iter().enumerate() {
            if a == b {
                report.violations.push(Violation::SelfLoop { edge: e });
            } else {
                pairs.entry((a.min(b), a.max(b))).or_default().push(e);
            }
        }
        for ((a, b), edges) in pairs {
            if edges.len() > 1 {
                report.violations.push(Violation::ParallelEdges { a, b, edges });
            }
        }
    }
    if spec.planar {
        match g.embedding_summary() {
            Ok(summary) => {
                report.faces = Some(summary.faces);
                if !summary.is_planar() {
                    report.violations.push(Violation::NonPlanarEmbedding {
                        euler_sum: summary.euler_sum(),
                        expected: 2 * summary.components as i64,
                    });
                }
            }
            Err(_) => report.violations.push(Violation::MissingRotation),
        }
    }
    report
}
