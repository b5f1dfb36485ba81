//! Bipartite reduction graphs: point vertices, component vertices, and
//! branches joining them (parallel branches allowed).

mod cover;
mod dot;
mod tree;

pub use cover::{enumerate_connected_covers, enumerate_connected_covers_with_tree, GraphCover};
pub use dot::export_dot;
pub use tree::{all_spanning_trees, maximal_tree, SpanningTree};

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid reduction graph: {0}")]
    Invalid(ValidationReport),
    #[error("edge set is not a spanning tree of this graph: {0}")]
    NotASpanningTree(String),
    #[error("cover degree must be at least 1")]
    ZeroDegree,
    #[error("search space too large: {0}")]
    TooLarge(String),
    #[error("index for {0} must be positive (got {1})")]
    NonPositiveIndex(String, i64),
    #[error("index product overflows 64 bits")]
    Overflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexKind {
    Point,
    Component,
}

/// A branch as supplied: a label and two endpoint labels, in either order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    pub label: String,
    pub ends: [String; 2],
}

impl Branch {
    pub fn new(label: &str, a: &str, b: &str) -> Self {
        Branch { label: label.to_string(), ends: [a.to_string(), b.to_string()] }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum GraphIssue {
    DuplicateLabel(String),
    NoPointVertex,
    NoComponentVertex,
    DanglingEndpoint { branch: String, endpoint: String },
    NonBipartite { branch: String, kind: VertexKind },
    IsolatedVertex(String),
    Disconnected { pieces: Vec<Vec<String>> },
}

impl fmt::Display for GraphIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphIssue::DuplicateLabel(l) => write!(f, "duplicate label {l}"),
            GraphIssue::NoPointVertex => write!(f, "no point vertex"),
            GraphIssue::NoComponentVertex => write!(f, "no component vertex"),
            GraphIssue::DanglingEndpoint { branch, endpoint } => {
                write!(f, "branch {branch} references undeclared vertex {endpoint}")
            }
            GraphIssue::NonBipartite { branch, kind } => {
                let k = match kind {
                    VertexKind::Point => "point",
                    VertexKind::Component => "component",
                };
                write!(f, "non-bipartite: branch {branch} joins two {k} vertices")
            }
            GraphIssue::IsolatedVertex(v) => write!(f, "vertex {v} has no branch"),
            GraphIssue::Disconnected { pieces } => {
                let p: Vec<String> = pieces.iter().map(|c| format!("{{{}}}", c.join(", "))).collect();
                write!(f, "disconnected: {}", p.join(" "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub issues: Vec<GraphIssue>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.issues.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "pass");
        }
        let parts: Vec<String> = self.issues.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// The reduction graph. Vertices and branches are kept in canonical order:
/// points before components, each sorted by label with digit runs compared
/// numerically (so `e2 < e10`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionGraph {
    points: Vec<String>,
    components: Vec<String>,
    branches: Vec<Branch>,
    /// `(point vertex, component vertex)` per branch, when resolvable.
    resolved: Vec<Option<(usize, usize)>>,
}

impl ReductionGraph {
    /// Builds the graph without validating; see [`ReductionGraph::validate`].
    pub fn new(mut points: Vec<String>, mut components: Vec<String>, mut branches: Vec<Branch>) -> Self {
        points.sort_by(|a, b| natural_cmp(a, b));
        components.sort_by(|a, b| natural_cmp(a, b));
        branches.sort_by(|a, b| natural_cmp(&a.label, &b.label));
        let index = |label: &str| -> Option<(usize, VertexKind)> {
            if let Some(i) = points.iter().position(|p| p == label) {
                return Some((i, VertexKind::Point));
            }
            components.iter().position(|c| c == label).map(|i| (points.len() + i, VertexKind::Component))
        };
        let resolved = branches
            .iter()
            .map(|b| match (index(&b.ends[0]), index(&b.ends[1])) {
                (Some((p, VertexKind::Point)), Some((u, VertexKind::Component)))
                | (Some((u, VertexKind::Component)), Some((p, VertexKind::Point))) => Some((p, u)),
                _ => None,
            })
            .collect();
        ReductionGraph { points, components, branches, resolved }
    }

    /// Convenience constructor from string slices; branches are `(label, end, end)`.
    pub fn from_labels(points: &[&str], components: &[&str], branches: &[(&str, &str, &str)]) -> Self {
        Self::new(
            points.iter().map(|s| s.to_string()).collect(),
            components.iter().map(|s| s.to_string()).collect(),
            branches.iter().map(|(l, a, b)| Branch::new(l, a, b)).collect(),
        )
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn components(&self) -> &[String] {
        &self.components
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn vertex_count(&self) -> usize {
        self.points.len() + self.components.len()
    }

    pub fn edge_count(&self) -> usize {
        self.branches.len()
    }

    pub fn vertex_label(&self, v: usize) -> &str {
        if v < self.points.len() {
            &self.points[v]
        } else {
            &self.components[v - self.points.len()]
        }
    }

    pub fn vertex_kind(&self, v: usize) -> VertexKind {
        if v < self.points.len() {
            VertexKind::Point
        } else {
            VertexKind::Component
        }
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        (0..self.vertex_count()).find(|&v| self.vertex_label(v) == label)
    }

    pub fn branch_index(&self, label: &str) -> Option<usize> {
        self.branches.iter().position(|b| b.label == label)
    }

    pub fn branch_label(&self, e: usize) -> &str {
        &self.branches[e].label
    }

    /// `(point vertex, component vertex)` of a branch in a validated graph.
    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.resolved[e].expect("endpoints of a validated graph")
    }

    /// Branches at (or on) a vertex, in canonical order.
    pub fn incident(&self, v: usize) -> Vec<usize> {
        (0..self.edge_count())
            .filter(|&e| matches!(self.resolved[e], Some((p, u)) if p == v || u == v))
            .collect()
    }

    /// Lists every violated invariant; never fails.
    pub fn validate(&self) -> ValidationReport {
        let mut issues = Vec::new();
        let mut seen = BTreeSet::new();
        for label in self.points.iter().chain(&self.components).chain(self.branches.iter().map(|b| &b.label)) {
            if !seen.insert(label.as_str()) {
                issues.push(GraphIssue::DuplicateLabel(label.clone()));
            }
        }
        if self.points.is_empty() {
            issues.push(GraphIssue::NoPointVertex);
        }
        if self.components.is_empty() {
            issues.push(GraphIssue::NoComponentVertex);
        }
        for (b, res) in self.branches.iter().zip(&self.resolved) {
            if res.is_some() {
                continue;
            }
            let mut kinds = Vec::new();
            for end in &b.ends {
                match self.vertex_index(end) {
                    Some(v) => kinds.push(self.vertex_kind(v)),
                    None => issues.push(GraphIssue::DanglingEndpoint { branch: b.label.clone(), endpoint: end.clone() }),
                }
            }
            if kinds.len() == 2 && kinds[0] == kinds[1] {
                issues.push(GraphIssue::NonBipartite { branch: b.label.clone(), kind: kinds[0] });
            }
        }
        let n = self.vertex_count();
        let mut degree = vec![0usize; n];
        let mut uf = UnionFind::new(n);
        for b in &self.branches {
            // Connectivity uses every resolvable endpoint pair, bipartite or not.
            let ends: Vec<usize> = b.ends.iter().filter_map(|e| self.vertex_index(e)).collect();
            for &v in &ends {
                degree[v] += 1;
            }
            if let [a, c] = ends[..] {
                uf.union(a, c);
            }
        }
        for v in 0..n {
            if degree[v] == 0 {
                issues.push(GraphIssue::IsolatedVertex(self.vertex_label(v).to_string()));
            }
        }
        let mut pieces: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        for v in 0..n {
            pieces.entry(uf.find(v)).or_default().push(self.vertex_label(v).to_string());
        }
        if pieces.len() > 1 {
            let mut pieces: Vec<Vec<String>> = pieces.into_values().collect();
            pieces.sort();
            issues.push(GraphIssue::Disconnected { pieces });
        }
        ValidationReport { issues }
    }

    pub fn check(&self) -> Result<(), GraphError> {
        let report = self.validate();
        if report.passed() {
            Ok(())
        } else {
            Err(GraphError::Invalid(report))
        }
    }

    pub fn is_tree(&self) -> Result<bool, GraphError> {
        self.check()?;
        Ok(self.edge_count() + 1 == self.vertex_count())
    }

    /// First Betti number `|E| - |V| + 1`.
    pub fn cycle_rank(&self) -> Result<usize, GraphError> {
        self.check()?;
        Ok(self.edge_count() + 1 - self.vertex_count())
    }
}

/// Both the product of the local indices (a proven divisibility bound for the
/// global index) and their least common multiple (the conjectured sharp value).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IndexBound {
    pub product_bound: u64,
    pub lcm_candidate: u64,
}

pub fn index_bound(local_indices: &BTreeMap<String, i64>) -> Result<IndexBound, GraphError> {
    let mut product: u64 = 1;
    let mut lcm: u64 = 1;
    for (label, &index) in local_indices {
        if index <= 0 {
            return Err(GraphError::NonPositiveIndex(label.clone(), index));
        }
        let index = index as u64;
        product = product.checked_mul(index).ok_or(GraphError::Overflow)?;
        lcm = (lcm / gcd_u64(lcm, index)).checked_mul(index).ok_or(GraphError::Overflow)?;
    }
    Ok(IndexBound { product_bound: product, lcm_candidate: lcm })
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Orders strings by alternating non-digit and digit runs, digits numerically.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn chunks(s: &str) -> Vec<(bool, &str)> {
        let mut out = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        for i in 1..=bytes.len() {
            if i == bytes.len() || bytes[i].is_ascii_digit() != bytes[start].is_ascii_digit() {
                out.push((bytes[start].is_ascii_digit(), &s[start..i]));
                start = i;
            }
        }
        out
    }
    let (ca, cb) = (chunks(a), chunks(b));
    for ((da, sa), (db, sb)) in ca.iter().zip(&cb) {
        let ord = if *da && *db {
            let (ta, tb) = (sa.trim_start_matches('0'), sb.trim_start_matches('0'));
            ta.len().cmp(&tb.len()).then_with(|| ta.cmp(tb))
        } else {
            sa.cmp(sb)
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
    ca.len().cmp(&cb.len()).then_with(|| a.cmp(b))
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Small named graphs used throughout the tests and examples.
pub mod samples {
    use super::ReductionGraph;

    /// One point, one component, one branch.
    pub fn diamond() -> ReductionGraph {
        ReductionGraph::from_labels(&["P"], &["U"], &[("e1", "P", "U")])
    }

    /// `P` and `U` joined by two parallel branches.
    pub fn circle() -> ReductionGraph {
        ReductionGraph::from_labels(&["P"], &["U"], &[("e1", "P", "U"), ("e2", "P", "U")])
    }

    /// `P` and `U` joined by three parallel branches.
    pub fn theta() -> ReductionGraph {
        ReductionGraph::from_labels(&["P"], &["U"], &[("e1", "P", "U"), ("e2", "P", "U"), ("e3", "P", "U")])
    }

    /// The path `P1 - U - P2`.
    pub fn path() -> ReductionGraph {
        ReductionGraph::from_labels(&["P1", "P2"], &["U"], &[("e1", "P1", "U"), ("e2", "P2", "U")])
    }
}
