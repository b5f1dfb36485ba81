//! The workbench input document: a JSON object with a `version` field and
//! the sections `graph`, `groups`, `edge_maps`, `descent` and `options`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::gog::{EdgeMapMode, GraphOfGroups};
use crate::graph::{Branch, ReductionGraph};
use crate::group::{FiniteGroup, GroupDescriptor, GroupHom};

pub const SCHEMA_VERSION: u64 = 1;

/// A schema error at a JSON path such as `graph.edges[1].point`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchemaError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

fn err(path: impl Into<String>, message: impl Into<String>) -> SchemaError {
    SchemaError { path: path.into(), message: message.into() }
}

/// A group given by name, short form (`Z/3`, `S3`, `Z/2 x Z/2`) or full descriptor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Short(String),
    Full(GroupDescriptor),
}

/// An element of a group by label or index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElemRef {
    Index(usize),
    Label(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub label: String,
    pub point: String,
    pub component: String,
    #[serde(flatten)]
    pub extra: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GraphSection {
    #[serde(default)]
    pub points: Vec<String>,
    #[serde(default)]
    pub components: Vec<String>,
    #[serde(default)]
    pub edges: Vec<EdgeSpec>,
    /// Vertex label to group; unlisted vertices carry the trivial group.
    #[serde(default)]
    pub vertex_groups: BTreeMap<String, GroupSpec>,
    #[serde(flatten)]
    pub extra: BTreeMap<String, Value>,
}

/// Edge group and the images of its elements (in its element order) in the
/// point and component vertex groups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeMapSpec {
    pub group: GroupSpec,
    pub point: Vec<ElemRef>,
    pub component: Vec<ElemRef>,
    #[serde(flatten)]
    pub extra: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArtinSchreierSpec {
    pub p: usize,
    #[serde(default = "one")]
    pub k1_degree: u32,
    /// `"finite"` (with `k2_degree`) or `"rational"`.
    pub k2: String,
    #[serde(default)]
    pub k2_degree: Option<u32>,
    pub alpha: String,
    #[serde(flatten)]
    pub extra: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GbarSpec {
    Polynomial(Vec<usize>),
    LacunarySquares {
        #[serde(default)]
        terms: Option<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KummerSpec {
    pub p: usize,
    #[serde(default = "one")]
    pub field_degree: u32,
    pub gbar: GbarSpec,
    #[serde(default = "default_precision")]
    pub precision: usize,
    #[serde(flatten)]
    pub extra: BTreeMap<String, Value>,
}

fn one() -> u32 {
    1
}

fn default_precision() -> usize {
    128
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DescentSection {
    #[serde(default)]
    pub artin_schreier: Option<ArtinSchreierSpec>,
    #[serde(default)]
    pub kummer: Option<KummerSpec>,
    #[serde(flatten)]
    pub extra: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct OptionsSection {
    #[serde(default)]
    pub test_group: Option<GroupSpec>,
    #[serde(default)]
    pub degree: Option<usize>,
    #[serde(default)]
    pub support_bound: Option<usize>,
    #[serde(default)]
    pub truncation: Option<i64>,
    #[serde(default)]
    pub search_bound: Option<usize>,
    #[serde(default)]
    pub all_trees: Option<bool>,
    /// Edge labels of a spanning tree to use instead of the canonical one.
    #[serde(default)]
    pub tree: Option<Vec<String>>,
    #[serde(default)]
    pub local_indices: Option<BTreeMap<String, i64>>,
    #[serde(default)]
    pub permissive_edge_maps: Option<bool>,
    #[serde(flatten)]
    pub extra: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorkbenchInput {
    pub version: u64,
    #[serde(default)]
    pub graph: Option<GraphSection>,
    #[serde(default)]
    pub groups: BTreeMap<String, GroupSpec>,
    #[serde(default)]
    pub edge_maps: BTreeMap<String, EdgeMapSpec>,
    #[serde(default)]
    pub descent: Option<DescentSection>,
    #[serde(default)]
    pub options: OptionsSection,
    #[serde(flatten)]
    pub extra: BTreeMap<String, Value>,
}

/// A parsed and cross-checked document plus warnings for unknown keys.
#[derive(Debug, Clone)]
pub struct ParsedInput {
    pub input: WorkbenchInput,
    pub warnings: Vec<String>,
}

fn unknown(path: &str, extra: &BTreeMap<String, Value>, warnings: &mut Vec<String>) {
    for key in extra.keys() {
        let full = if path.is_empty() { key.clone() } else { format!("{path}.{key}") };
        warnings.push(format!("{full}: unknown key ignored"));
    }
}

/// Parses and validates a document: version present and supported, group
/// descriptors build, references resolve.
pub fn parse_input(text: &str) -> Result<ParsedInput, Vec<SchemaError>> {
    let value: Value = serde_json::from_str(text).map_err(|e| vec![err("$", format!("not valid JSON: {e}"))])?;
    let Some(obj) = value.as_object() else {
        return Err(vec![err("$", "document must be a JSON object")]);
    };
    match obj.get("version") {
        None => return Err(vec![err("version", "version field missing")]),
        Some(v) if v.as_u64() != Some(SCHEMA_VERSION) => {
            return Err(vec![err("version", format!("unsupported version {v}; expected {SCHEMA_VERSION}"))])
        }
        Some(_) => {}
    }
    let input: WorkbenchInput = serde_json::from_value(value).map_err(|e| vec![err("$", e.to_string())])?;
    let mut warnings = Vec::new();
    let mut errors = Vec::new();
    unknown("", &input.extra, &mut warnings);
    unknown("options", &input.options.extra, &mut warnings);
    if let Some(d) = &input.descent {
        unknown("descent", &d.extra, &mut warnings);
        if let Some(a) = &d.artin_schreier {
            unknown("descent.artin_schreier", &a.extra, &mut warnings);
        }
        if let Some(k) = &d.kummer {
            unknown("descent.kummer", &k.extra, &mut warnings);
        }
    }
    for (name, spec) in &input.groups {
        if let Err(e) = resolve_group(&input, spec, &format!("groups.{name}"), 0) {
            errors.push(e);
        }
    }
    if let Some(g) = &input.graph {
        unknown("graph", &g.extra, &mut warnings);
        let declared: Vec<&String> = g.points.iter().chain(&g.components).collect();
        for (i, e) in g.edges.iter().enumerate() {
            unknown(&format!("graph.edges[{i}]"), &e.extra, &mut warnings);
            for (field, end) in [("point", &e.point), ("component", &e.component)] {
                if !declared.contains(&end) {
                    errors.push(err(
                        format!("graph.edges[{i}].{field}"),
                        format!("edge {} references undeclared vertex {end}", e.label),
                    ));
                }
            }
        }
        for (v, spec) in &g.vertex_groups {
            let path = format!("graph.vertex_groups.{v}");
            if !declared.contains(&v) {
                errors.push(err(&path, format!("undeclared vertex {v}")));
            }
            if let Err(e) = resolve_group(&input, spec, &path, 0) {
                errors.push(e);
            }
        }
        for (b, m) in &input.edge_maps {
            let path = format!("edge_maps.{b}");
            unknown(&path, &m.extra, &mut warnings);
            if !g.edges.iter().any(|e| &e.label == b) {
                errors.push(err(&path, format!("undeclared edge {b}")));
            }
        }
    } else if let Some(b) = input.edge_maps.keys().next() {
        errors.push(err(format!("edge_maps.{b}"), "edge maps given without a graph section"));
    }
    if let Some(t) = &input.options.test_group {
        if let Err(e) = resolve_group(&input, t, "options.test_group", 0) {
            errors.push(e);
        }
    }
    if errors.is_empty() {
        Ok(ParsedInput { input, warnings })
    } else {
        Err(errors)
    }
}

/// Resolves a group by name in `groups`, else as a short form or descriptor.
pub fn resolve_group(input: &WorkbenchInput, spec: &GroupSpec, path: &str, depth: usize) -> Result<FiniteGroup, SchemaError> {
    if depth > input.groups.len() {
        return Err(err(path, "group names refer to each other in a cycle"));
    }
    match spec {
        GroupSpec::Short(name) => {
            if let Some(inner) = input.groups.get(name) {
                if inner == spec {
                    return Err(err(path, format!("group {name} refers to itself")));
                }
                return resolve_group(input, inner, path, depth + 1).map(|g| g.renamed(name));
            }
            let desc = GroupDescriptor::parse_short(name)
                .map_err(|_| err(path, format!("{name:?} is neither a declared group nor a group descriptor")))?;
            desc.build().map_err(|e| err(path, e.to_string()))
        }
        GroupSpec::Full(desc) => desc.build().map_err(|e| err(path, e.to_string())),
    }
}

impl WorkbenchInput {
    pub fn graph(&self) -> Result<ReductionGraph, SchemaError> {
        let g = self.graph.as_ref().ok_or_else(|| err("graph", "this command needs a graph section"))?;
        let branches = g.edges.iter().map(|e| Branch::new(&e.label, &e.point, &e.component)).collect();
        Ok(ReductionGraph::new(g.points.clone(), g.components.clone(), branches))
    }

    pub fn test_group(&self, flag: Option<&str>) -> Result<Arc<FiniteGroup>, SchemaError> {
        let spec = match flag {
            Some(name) => GroupSpec::Short(name.to_string()),
            None => self.options.test_group.clone().unwrap_or(GroupSpec::Short("Z/2".into())),
        };
        let path = if flag.is_some() { "--group" } else { "options.test_group" };
        resolve_group(self, &spec, path, 0).map(Arc::new)
    }

    /// Builds the graph of groups; needs a valid graph.
    pub fn graph_of_groups(&self) -> Result<GraphOfGroups, SchemaError> {
        let graph = self.graph()?;
        graph.check().map_err(|e| err("graph", e.to_string()))?;
        let section = self.graph.as_ref().expect("graph section checked above");
        let mut vertex_groups = Vec::with_capacity(graph.vertex_count());
        for v in 0..graph.vertex_count() {
            let label = graph.vertex_label(v);
            let g = match section.vertex_groups.get(label) {
                Some(spec) => resolve_group(self, spec, &format!("graph.vertex_groups.{label}"), 0)?,
                None => FiniteGroup::trivial(),
            };
            vertex_groups.push(Arc::new(g));
        }
        let trivial = Arc::new(FiniteGroup::trivial());
        let mut edge_groups = Vec::new();
        let mut point_maps = Vec::new();
        let mut component_maps = Vec::new();
        for e in 0..graph.edge_count() {
            let label = graph.branch_label(e);
            let (p, u) = graph.endpoints(e);
            match self.edge_maps.get(label) {
                None => {
                    edge_groups.push(trivial.clone());
                    point_maps.push(GroupHom::trivial(trivial.clone(), vertex_groups[p].clone()));
                    component_maps.push(GroupHom::trivial(trivial.clone(), vertex_groups[u].clone()));
                }
                Some(spec) => {
                    let path = format!("edge_maps.{label}");
                    let eg = Arc::new(resolve_group(self, &spec.group, &format!("{path}.group"), 0)?);
                    let pm = edge_map(&eg, &vertex_groups[p], &spec.point, &format!("{path}.point"))?;
                    let cm = edge_map(&eg, &vertex_groups[u], &spec.component, &format!("{path}.component"))?;
                    edge_groups.push(eg);
                    point_maps.push(pm);
                    component_maps.push(cm);
                }
            }
        }
        let mode =
            if self.options.permissive_edge_maps == Some(true) { EdgeMapMode::Permissive } else { EdgeMapMode::Strict };
        GraphOfGroups::new(graph, vertex_groups, edge_groups, point_maps, component_maps, mode)
            .map_err(|e| err("edge_maps", e.to_string()))
    }
}

fn edge_map(source: &Arc<FiniteGroup>, target: &Arc<FiniteGroup>, images: &[ElemRef], path: &str) -> Result<GroupHom, SchemaError> {
    let map = images
        .iter()
        .enumerate()
        .map(|(i, r)| match r {
            ElemRef::Index(x) if target.contains(*x) => Ok(*x),
            ElemRef::Index(x) => Err(err(format!("{path}[{i}]"), format!("{x} is not an element index of {}", target.name()))),
            ElemRef::Label(l) => target.element_by_label(l).map_err(|e| err(format!("{path}[{i}]"), e.to_string())),
        })
        .collect::<Result<Vec<_>, _>>()?;
    GroupHom::new(source.clone(), target.clone(), map).map_err(|e| err(path, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"version": 1, "graph": {"points": ["P"], "components": ["U"],
        "edges": [{"label": "e1", "point": "P", "component": "U"}]}}"#;

    #[test]
    fn minimal_document_parses() {
        let parsed = parse_input(MINIMAL).unwrap();
        assert!(parsed.warnings.is_empty());
        let gog = parsed.input.graph_of_groups().unwrap();
        assert_eq!(gog.graph().edge_count(), 1);
    }

    #[test]
    fn dangling_edge_is_named() {
        let doc = MINIMAL.replace(r#""component": "U"}"#, r#""component": "V"}"#);
        let errors = parse_input(&doc).unwrap_err();
        assert_eq!(errors[0].path, "graph.edges[0].component");
        assert!(errors[0].message.contains("edge e1"));
    }

    #[test]
    fn missing_version_is_an_error() {
        let doc = MINIMAL.replace(r#""version": 1, "#, "");
        assert_eq!(parse_input(&doc).unwrap_err()[0].path, "version");
    }

    #[test]
    fn unknown_keys_warn() {
        let doc = MINIMAL.replace(r#""version": 1,"#, r#""version": 1, "colour": "red","#);
        let parsed = parse_input(&doc).unwrap();
        assert_eq!(parsed.warnings, vec!["colour: unknown key ignored".to_string()]);
    }

    #[test]
    fn bad_table_reports_triple() {
        let doc = r#"{"version": 1, "groups": {"bad": {"table": {"elements": ["a", "b", "c"],
            "mul": [[0, 1, 2], [1, 2, 0], [2, 1, 0]]}}}}"#;
        let errors = parse_input(doc).unwrap_err();
        assert_eq!(errors[0].path, "groups.bad");
    }

    #[test]
    fn edge_maps_resolve_labels() {
        let doc = r#"{"version": 1,
            "groups": {"A": "Z/4", "B": "Z/6"},
            "graph": {"points": ["P"], "components": ["U"],
                "edges": [{"label": "e1", "point": "P", "component": "U"}],
                "vertex_groups": {"P": "A", "U": "B"}},
            "edge_maps": {"e1": {"group": "Z/2", "point": ["0", "2"], "component": [0, 3]}}}"#;
        let gog = parse_input(doc).unwrap().input.graph_of_groups().unwrap();
        assert_eq!(gog.point_map(0).table(), &[0, 2]);
        assert_eq!(gog.vertex_group(0).name(), "A");
    }
}
