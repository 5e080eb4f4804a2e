//! JSON file formats and DOT export.
//!
//! Every format carries `"version": 1`. Rotation maps are keyed by vertex id
//! and list `[edge_index, end]` pairs in counterclockwise order. Errors name
//! the offending field as a path such as `edges[3][1]`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gadgets::{Gadget, Simulates};
use crate::graph::{HalfEdge, Multigraph, VertexId, VertexKind};
use crate::hypergraph::Hypergraph;
use crate::reductions::DirectedMultigraph;
use crate::solver::BreakCertificate;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("{path}: {message} (line {line}, column {column})")]
    Syntax { path: String, line: usize, column: usize, message: String },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

fn invalid(path: impl Into<String>, message: impl Into<String>) -> FormatError {
    FormatError::Invalid { path: path.into(), message: message.into() }
}

fn decode<T: DeserializeOwned>(text: &str) -> Result<T, FormatError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let mut message = inner.to_string();
        // The location is reported separately.
        if let Some(at) = message.rfind(" at line ") {
            message.truncate(at);
        }
        FormatError::Syntax {
            path,
            line: inner.line(),
            column: inner.column(),
            message,
        }
    })
}

fn encode<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn check_version(v: u32) -> Result<(), FormatError> {
    if v == FORMAT_VERSION {
        Ok(())
    } else {
        Err(invalid("version", format!("unsupported version {v}, expected {FORMAT_VERSION}")))
    }
}

fn default_version() -> u32 {
    FORMAT_VERSION
}

type RotationEntry = BTreeMap<u64, Vec<[usize; 2]>>;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexEntry {
    id: u64,
    breakable: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    version: u32,
    vertices: Vec<VertexEntry>,
    edges: Vec<[u64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rotation: Option<RotationEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimulatesEntry {
    breakable: bool,
    degree: usize,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GadgetFile {
    version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    vertices: Vec<VertexEntry>,
    edges: Vec<[u64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rotation: Option<RotationEntry>,
    ports: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    simulates: Option<SimulatesEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DirectedVertexEntry {
    id: u64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DirectedFile {
    version: u32,
    vertices: Vec<DirectedVertexEntry>,
    arcs: Vec<[u64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rotation: Option<RotationEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HypergraphFile {
    #[serde(default = "default_version")]
    version: u32,
    vertices: Vec<u64>,
    edges: Vec<Vec<u64>>,
}

/// Builds the multigraph shared by instance, gadget and directed files and
/// rejects degree-0 vertices. `list` names the edge array in paths.
fn build_graph(
    vertices: Vec<(VertexId, VertexKind)>,
    edges: &[[u64; 2]],
    rotation: Option<&RotationEntry>,
    list: &str,
) -> Result<Multigraph, FormatError> {
    let mut index: BTreeMap<VertexId, usize> = BTreeMap::new();
    for (i, &(v, _)) in vertices.iter().enumerate() {
        if index.insert(v, i).is_some() {
            return Err(invalid(format!("vertices[{i}].id"), format!("duplicate vertex id {v}")));
        }
    }
    let mut degree = vec![0usize; vertices.len()];
    for (e, ends) in edges.iter().enumerate() {
        for (j, &v) in ends.iter().enumerate() {
            let slot = index
                .get(&VertexId(v))
                .ok_or_else(|| invalid(format!("{list}[{e}][{j}]"), format!("unknown vertex {v}")))?;
            degree[*slot] += 1;
        }
    }
    if let Some(i) = degree.iter().position(|&d| d == 0) {
        return Err(invalid(format!("vertices[{i}]"), format!("vertex {} has degree 0", vertices[i].0)));
    }
    let edges = edges.iter().map(|&[a, b]| [VertexId(a), VertexId(b)]).collect();
    let g = Multigraph::new(vertices, edges).map_err(|e| invalid(list, e.to_string()))?;
    let Some(rot) = rotation else {
        return Ok(g);
    };
    let mut order: BTreeMap<VertexId, Vec<HalfEdge>> = BTreeMap::new();
    for (&v, hs) in rot {
        let mut list = Vec::with_capacity(hs.len());
        for (k, &[edge, end]) in hs.iter().enumerate() {
            let path = format!("rotation.{v}[{k}]");
            if edge >= g.edge_count() {
                return Err(invalid(path, format!("edge index {edge} out of range")));
            }
            if end > 1 {
                return Err(invalid(path, format!("edge end {end} is not 0 or 1")));
            }
            list.push(HalfEdge::new(edge, end as u8));
        }
        order.insert(VertexId(v), list);
    }
    g.with_rotation(order).map_err(|e| invalid("rotation", e.to_string()))
}

fn export_rotation(g: &Multigraph) -> Option<RotationEntry> {
    g.rotation().map(|rot| {
        rot.iter()
            .map(|(v, hs)| (v.0, hs.iter().map(|h| [h.edge, h.end as usize]).collect()))
            .collect()
    })
}

fn export_vertices(g: &Multigraph) -> Vec<VertexEntry> {
    g.vertices()
        .map(|(v, k)| VertexEntry { id: v.0, breakable: k == VertexKind::Breakable })
        .collect()
}

fn export_edges(edges: &[[VertexId; 2]]) -> Vec<[u64; 2]> {
    edges.iter().map(|&[a, b]| [a.0, b.0]).collect()
}

fn kinds(vertices: &[VertexEntry]) -> Vec<(VertexId, VertexKind)> {
    vertices
        .iter()
        .map(|v| {
            let kind = if v.breakable { VertexKind::Breakable } else { VertexKind::Unbreakable };
            (VertexId(v.id), kind)
        })
        .collect()
}

pub fn parse_instance(text: &str) -> Result<Multigraph, FormatError> {
    let file: InstanceFile = decode(text)?;
    check_version(file.version)?;
    build_graph(kinds(&file.vertices), &file.edges, file.rotation.as_ref(), "edges")
}

pub fn instance_to_json(g: &Multigraph) -> String {
    encode(&InstanceFile {
        version: FORMAT_VERSION,
        vertices: export_vertices(g),
        edges: export_edges(g.edges()),
        rotation: export_rotation(g),
    })
}

/// Without a `simulates` field the gadget is taken to stand for an
/// unbreakable vertex with one edge per port.
pub fn parse_gadget(text: &str) -> Result<Gadget, FormatError> {
    let file: GadgetFile = decode(text)?;
    check_version(file.version)?;
    let body = build_graph(kinds(&file.vertices), &file.edges, file.rotation.as_ref(), "edges")?;
    let simulates = match file.simulates {
        Some(s) => Simulates {
            kind: if s.breakable { VertexKind::Breakable } else { VertexKind::Unbreakable },
            degree: s.degree,
        },
        None => Simulates { kind: VertexKind::Unbreakable, degree: file.ports.len() },
    };
    let ports = file.ports.iter().map(|&p| VertexId(p)).collect();
    Gadget::new(file.name.unwrap_or_else(|| "custom".into()), body, ports, simulates)
        .map_err(|e| invalid("ports", e.to_string()))
}

pub fn gadget_to_json(gd: &Gadget) -> String {
    let body = gd.body();
    let sim = gd.simulates();
    encode(&GadgetFile {
        version: FORMAT_VERSION,
        name: Some(gd.name().to_string()),
        vertices: export_vertices(body),
        edges: export_edges(body.edges()),
        rotation: export_rotation(body),
        ports: gd.ports().iter().map(|p| p.0).collect(),
        simulates: Some(SimulatesEntry { breakable: sim.kind == VertexKind::Breakable, degree: sim.degree }),
    })
}

pub fn parse_directed(text: &str) -> Result<DirectedMultigraph, FormatError> {
    let file: DirectedFile = decode(text)?;
    check_version(file.version)?;
    let vertices = file.vertices.iter().map(|v| (VertexId(v.id), VertexKind::Unbreakable)).collect();
    let g = build_graph(vertices, &file.arcs, file.rotation.as_ref(), "arcs")?;
    let d = DirectedMultigraph::new(g.vertex_ids(), g.edges().to_vec())
        .map_err(|e| invalid("arcs", e.to_string()))?;
    match g.rotation() {
        Some(rot) => d.with_rotation(rot.clone()).map_err(|e| invalid("rotation", e.to_string())),
        None => Ok(d),
    }
}

pub fn directed_to_json(d: &DirectedMultigraph) -> String {
    encode(&DirectedFile {
        version: FORMAT_VERSION,
        vertices: d.vertices().map(|v| DirectedVertexEntry { id: v.0 }).collect(),
        arcs: export_edges(d.arcs()),
        rotation: export_rotation(d.underlying()),
    })
}

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph, FormatError> {
    let file: HypergraphFile = decode(text)?;
    check_version(file.version)?;
    let known: BTreeSet<u64> = file.vertices.iter().copied().collect();
    for (e, ends) in file.edges.iter().enumerate() {
        let mut seen = BTreeSet::new();
        for (j, v) in ends.iter().enumerate() {
            let path = format!("edges[{e}][{j}]");
            if !known.contains(v) {
                return Err(invalid(path, format!("unknown vertex {v}")));
            }
            if !seen.insert(v) {
                return Err(invalid(path, format!("endpoint {v} repeated; hyperedges are sets")));
            }
        }
    }
    Hypergraph::new(
        file.vertices.iter().map(|&v| VertexId(v)),
        file.edges.iter().map(|e| e.iter().map(|&v| VertexId(v)).collect()).collect(),
    )
    .map_err(|e| invalid("vertices", e.to_string()))
}

pub fn hypergraph_to_json(h: &Hypergraph) -> String {
    encode(&HypergraphFile {
        version: FORMAT_VERSION,
        vertices: h.vertices().iter().map(|v| v.0).collect(),
        edges: h.edges().iter().map(|e| e.iter().map(|v| v.0).collect()).collect(),
    })
}

/// A certificate is a JSON list of vertex ids; order and repeats are ignored
/// on input and output is sorted.
pub fn parse_certificate(text: &str) -> Result<BreakCertificate, FormatError> {
    let ids: Vec<u64> = decode(text)?;
    Ok(BreakCertificate::new(ids.into_iter().map(VertexId)))
}

pub fn certificate_to_json(c: &BreakCertificate) -> String {
    encode(c)
}

/// Output of `solve`: the answer plus a witness when the answer is yes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveReport {
    pub answer: bool,
    pub certificate: Option<BreakCertificate>,
}

impl SolveReport {
    pub fn new(certificate: Option<BreakCertificate>) -> Self {
        Self { answer: certificate.is_some(), certificate }
    }

    pub fn to_json(&self) -> String {
        encode(self)
    }
}

/// Undirected DOT: unbreakable vertices filled, breakable ones open circles.
/// Edges appear in index order, so parallel edges and loops are kept.
pub fn to_dot(g: &Multigraph) -> String {
    let mut out = String::from("graph trvb {\n  node [shape=circle];\n");
    for (v, k) in g.vertices() {
        let style = match k {
            VertexKind::Unbreakable => ", style=filled, fillcolor=black, fontcolor=white",
            VertexKind::Breakable => "",
        };
        let _ = writeln!(out, "  {v} [label=\"{v}\"{style}];");
    }
    for [a, b] in g.edges() {
        let _ = writeln!(out, "  {a} -- {b};");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::gadgets;
    use crate::graph::VertexKind::{Breakable as B, Unbreakable as U};

    fn vid(v: u64) -> VertexId {
        VertexId(v)
    }

    #[test]
    fn instance_round_trip() {
        for g in [corpus::triangle_one_breakable(), corpus::theta(), corpus::icosahedron(B), corpus::wheel(U, 4)] {
            assert_eq!(parse_instance(&instance_to_json(&g)).unwrap(), g);
            let bare = g.clone().without_rotation();
            assert_eq!(parse_instance(&instance_to_json(&bare)).unwrap(), bare);
        }
    }

    #[test]
    fn instance_json_shape() {
        let json = instance_to_json(&corpus::path(&[B, U]));
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["version"], 1);
        assert_eq!(v["vertices"][0]["breakable"], true);
        assert_eq!(v["edges"], serde_json::json!([[0, 1]]));
        assert_eq!(v["rotation"]["1"], serde_json::json!([[0, 1]]));
    }

    #[test]
    fn degree_zero_is_rejected() {
        let text = r#"{"version":1,"vertices":[{"id":0,"breakable":true},{"id":1,"breakable":false}],"edges":[[0,0]]}"#;
        assert_eq!(
            parse_instance(text),
            Err(invalid("vertices[1]", "vertex 1 has degree 0"))
        );
    }

    #[test]
    fn errors_carry_field_paths() {
        let unknown = r#"{"version":1,"vertices":[{"id":0,"breakable":true}],"edges":[[0,4]]}"#;
        assert_eq!(parse_instance(unknown), Err(invalid("edges[0][1]", "unknown vertex 4")));
        let typed = "{\"version\":1,\n\"vertices\":[{\"id\":\"x\",\"breakable\":true}],\"edges\":[]}";
        match parse_instance(typed) {
            Err(FormatError::Syntax { path, line, .. }) => {
                assert_eq!(path, "vertices[0].id");
                assert_eq!(line, 2);
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
        let version = r#"{"version":2,"vertices":[],"edges":[]}"#;
        assert!(matches!(parse_instance(version), Err(FormatError::Invalid { path, .. }) if path == "version"));
        let rot = r#"{"version":1,"vertices":[{"id":0,"breakable":true}],"edges":[[0,0]],"rotation":{"0":[[0,0],[0,2]]}}"#;
        assert!(matches!(parse_instance(rot), Err(FormatError::Invalid { path, .. }) if path == "rotation.0[1]"));
    }

    #[test]
    fn gadget_round_trip() {
        let gd = gadgets::u4_from_b4();
        let back = parse_gadget(&gadget_to_json(&gd)).unwrap();
        assert_eq!(back.body(), gd.body());
        assert_eq!(back.ports(), gd.ports());
        assert_eq!(back.simulates(), gd.simulates());
    }

    #[test]
    fn directed_round_trip() {
        let d = DirectedMultigraph::new([vid(0), vid(1)], vec![[vid(0), vid(1)], [vid(1), vid(0)]]).unwrap();
        let text = directed_to_json(&d);
        assert!(text.contains("\"arcs\""));
        assert_eq!(parse_directed(&text).unwrap(), d);
    }

    #[test]
    fn hypergraph_round_trip_and_sets() {
        let h = Hypergraph::new([vid(0), vid(1), vid(2)], vec![vec![vid(0), vid(1)], vec![vid(1), vid(2)]]).unwrap();
        assert_eq!(parse_hypergraph(&hypergraph_to_json(&h)).unwrap(), h);
        let repeated = r#"{"vertices":[0,1],"edges":[[0,0]]}"#;
        assert!(matches!(parse_hypergraph(repeated), Err(FormatError::Invalid { path, .. }) if path == "edges[0][1]"));
    }

    #[test]
    fn certificate_is_sorted() {
        let c = parse_certificate("[5, 1, 3, 1]").unwrap();
        assert_eq!(certificate_to_json(&c).split_whitespace().collect::<String>(), "[1,3,5]");
        let report = SolveReport::new(Some(c));
        let v: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(v, serde_json::json!({"answer": true, "certificate": [1, 3, 5]}));
        let no: serde_json::Value = serde_json::from_str(&SolveReport::new(None).to_json()).unwrap();
        assert_eq!(no, serde_json::json!({"answer": false, "certificate": null}));
    }

    #[test]
    fn dot_fills_unbreakable_only() {
        let dot = to_dot(&corpus::triangle_one_breakable());
        assert!(dot.contains("  0 [label=\"0\"];"));
        assert!(dot.contains("  1 [label=\"1\", style=filled"));
        assert_eq!(dot.matches(" -- ").count(), 3);
    }
}
