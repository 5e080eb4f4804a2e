//! Complexity dichotomy for degree-restricted TRVB variants.

use std::fmt;

use crate::variant::VariantSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ComplexityClass {
    /// Every breakable degree is at most 3: polynomial via Hypergraph
    /// Spanning Tree with hyperedges of at most 3 endpoints.
    PSmallBreakable,
    /// Every valid instance is a "no" instance.
    PAlwaysNo,
    NpComplete,
}

impl ComplexityClass {
    pub fn is_polynomial(self) -> bool {
        !matches!(self, ComplexityClass::NpComplete)
    }

    /// Stable machine-readable name.
    pub fn code(self) -> &'static str {
        match self {
            ComplexityClass::PSmallBreakable => "P_small_breakable",
            ComplexityClass::PAlwaysNo => "P_always_no",
            ComplexityClass::NpComplete => "NP_complete",
        }
    }
}

impl fmt::Display for ComplexityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ComplexityClass::PSmallBreakable => "polynomial (breakable degrees at most 3)",
            ComplexityClass::PAlwaysNo => "polynomial (always no)",
            ComplexityClass::NpComplete => "NP-complete",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub class: ComplexityClass,
    /// The governing theorem, stated in words.
    pub citation: &'static str,
}

const SMALL_BREAKABLE: &str = "(B, U)-TRVB with B a subset of {1,2,3} is polynomial-time solvable: \
     the instance reduces to Hypergraph Spanning Tree with at most 3 endpoints per hyperedge (Lovász)";
const PLANAR_MULTIGRAPH: &str =
    "Planar (B, U)-TRVB is NP-complete if B contains any k >= 4 (reduction from Hamiltonicity of \
     planar max-degree-3 directed graphs)";
const PLANAR_GRAPH_SMALL: &str =
    "Planar Graph (B, U)-TRVB is NP-complete if either B meets {1,2,3,4,5} or U meets {1,2,3,4}";
const PLANAR_GRAPH_LARGE: &str = "Planar Graph (B, U)-TRVB has no yes inputs if b > 5 for every b in B \
     and u > 4 for every u in U (bundle-score argument)";

/// Rules are tried in order; the first match wins, so the result is total
/// and exclusive.
pub fn classify(spec: &VariantSpec) -> Classification {
    let (b, u) = (&spec.breakable, &spec.unbreakable);
    if b.is_subset_of_up_to(3) {
        return Classification { class: ComplexityClass::PSmallBreakable, citation: SMALL_BREAKABLE };
    }
    // From here on B has a member >= 4.
    if !(spec.planar && spec.simple) {
        return Classification { class: ComplexityClass::NpComplete, citation: PLANAR_MULTIGRAPH };
    }
    if b.intersects_range(1, 5) || u.intersects_range(1, 4) {
        return Classification { class: ComplexityClass::NpComplete, citation: PLANAR_GRAPH_SMALL };
    }
    Classification { class: ComplexityClass::PAlwaysNo, citation: PLANAR_GRAPH_LARGE }
}
