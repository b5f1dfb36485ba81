//! Graphs of finite groups over a reduction graph, their fundamental-group
//! presentation, and hom-set comparisons against the naive direct limit.

mod limit;
mod presentation;
mod verify;

pub use limit::naive_limit_homs;
pub use presentation::{build_presentation, count_pi1_homs, enumerate_pi1_homs, VanKampenPresentation};
pub use verify::{
    conjugacy_class_count, verify_tree_independence, verify_tree_vankampen, Discrepancy, TreeIndependenceReport,
    VanKampenReport,
};

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{GraphError, ReductionGraph, VertexKind};
use crate::group::{Elem, FiniteGroup, GroupError, GroupHom};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GogError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("{0}")]
    Shape(String),
    #[error("edge map of {branch} into its {side:?} end does not run from the edge group to that vertex group")]
    MapMismatch { branch: String, side: VertexKind },
    #[error("edge map of {branch} into its {side:?} end is not injective")]
    NonInjective { branch: String, side: VertexKind },
}

/// Whether non-injective edge maps are accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeMapMode {
    #[default]
    Strict,
    Permissive,
}

/// Finite vertex and edge groups on a reduction graph, with edge maps
/// `α_P : G_e -> G_P` and `α_U : G_e -> G_U` per branch `e` at `P` on `U`.
#[derive(Debug, Clone)]
pub struct GraphOfGroups {
    graph: ReductionGraph,
    vertex_groups: Vec<Arc<FiniteGroup>>,
    edge_groups: Vec<Arc<FiniteGroup>>,
    point_maps: Vec<GroupHom>,
    component_maps: Vec<GroupHom>,
    mode: EdgeMapMode,
}

impl GraphOfGroups {
    /// Vertex groups are indexed like the graph's vertices, edge data like its branches.
    pub fn new(
        graph: ReductionGraph,
        vertex_groups: Vec<Arc<FiniteGroup>>,
        edge_groups: Vec<Arc<FiniteGroup>>,
        point_maps: Vec<GroupHom>,
        component_maps: Vec<GroupHom>,
        mode: EdgeMapMode,
    ) -> Result<Self, GogError> {
        graph.check()?;
        if vertex_groups.len() != graph.vertex_count() {
            return Err(GogError::Shape(format!(
                "{} vertex groups for {} vertices",
                vertex_groups.len(),
                graph.vertex_count()
            )));
        }
        let m = graph.edge_count();
        if edge_groups.len() != m || point_maps.len() != m || component_maps.len() != m {
            return Err(GogError::Shape(format!("edge data must have one entry per branch ({m})")));
        }
        for e in 0..m {
            let (p, u) = graph.endpoints(e);
            for (side, v, map) in [(VertexKind::Point, p, &point_maps[e]), (VertexKind::Component, u, &component_maps[e])] {
                let branch = graph.branch_label(e).to_string();
                if **map.source() != *edge_groups[e] || **map.target() != *vertex_groups[v] {
                    return Err(GogError::MapMismatch { branch, side });
                }
                if mode == EdgeMapMode::Strict && !map.is_injective() {
                    return Err(GogError::NonInjective { branch, side });
                }
            }
        }
        Ok(GraphOfGroups { graph, vertex_groups, edge_groups, point_maps, component_maps, mode })
    }

    /// Trivial edge groups throughout.
    pub fn with_trivial_edges(graph: ReductionGraph, vertex_groups: Vec<Arc<FiniteGroup>>) -> Result<Self, GogError> {
        let trivial = Arc::new(FiniteGroup::trivial());
        let m = graph.edge_count();
        let mut point_maps = Vec::with_capacity(m);
        let mut component_maps = Vec::with_capacity(m);
        graph.check()?;
        if vertex_groups.len() != graph.vertex_count() {
            return Err(GogError::Shape(format!(
                "{} vertex groups for {} vertices",
                vertex_groups.len(),
                graph.vertex_count()
            )));
        }
        for e in 0..m {
            let (p, u) = graph.endpoints(e);
            point_maps.push(GroupHom::trivial(trivial.clone(), vertex_groups[p].clone()));
            component_maps.push(GroupHom::trivial(trivial.clone(), vertex_groups[u].clone()));
        }
        Self::new(graph, vertex_groups, vec![trivial; m], point_maps, component_maps, EdgeMapMode::Strict)
    }

    /// Every vertex and edge group trivial.
    pub fn trivial(graph: ReductionGraph) -> Result<Self, GogError> {
        let trivial = Arc::new(FiniteGroup::trivial());
        let n = graph.vertex_count();
        Self::with_trivial_edges(graph, vec![trivial; n])
    }

    pub fn graph(&self) -> &ReductionGraph {
        &self.graph
    }

    pub fn vertex_group(&self, v: usize) -> &Arc<FiniteGroup> {
        &self.vertex_groups[v]
    }

    pub fn vertex_groups(&self) -> &[Arc<FiniteGroup>] {
        &self.vertex_groups
    }

    pub fn edge_group(&self, e: usize) -> &Arc<FiniteGroup> {
        &self.edge_groups[e]
    }

    pub fn point_map(&self, e: usize) -> &GroupHom {
        &self.point_maps[e]
    }

    pub fn component_map(&self, e: usize) -> &GroupHom {
        &self.component_maps[e]
    }

    pub fn mode(&self) -> EdgeMapMode {
        self.mode
    }
}

/// Vertex hom tables into a test group `G` plus one conjugator per branch.
/// Ordered lexicographically by vertex tables, then conjugators.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct HomFamily {
    pub vertex_maps: Vec<Vec<Elem>>,
    pub conjugators: Vec<Elem>,
}

impl HomFamily {
    /// Each vertex map is a hom and `f_U(α_U g) = c_e f_P(α_P g) c_e⁻¹` on every branch.
    pub fn is_valid(&self, gog: &GraphOfGroups, target: &FiniteGroup) -> bool {
        let graph = gog.graph();
        if self.vertex_maps.len() != graph.vertex_count() || self.conjugators.len() != graph.edge_count() {
            return false;
        }
        let homs_ok = self.vertex_maps.iter().enumerate().all(|(v, map)| {
            let g = gog.vertex_group(v);
            map.len() == g.order()
                && map.iter().all(|&x| target.contains(x))
                && g.elements().all(|a| g.elements().all(|b| map[g.mul(a, b)] == target.mul(map[a], map[b])))
        });
        homs_ok
            && (0..graph.edge_count()).all(|e| {
                let (p, u) = graph.endpoints(e);
                let c = self.conjugators[e];
                target.contains(c)
                    && gog.edge_group(e).elements().all(|g| {
                        let lhs = self.vertex_maps[u][gog.component_map(e).apply(g)];
                        let rhs = target.conj(c, self.vertex_maps[p][gog.point_map(e).apply(g)]);
                        lhs == rhs
                    })
            })
    }

    /// Simultaneous conjugation `f ↦ c f c⁻¹`, `c_e ↦ c c_e c⁻¹`.
    pub fn conjugate(&self, c: Elem, target: &FiniteGroup) -> HomFamily {
        HomFamily {
            vertex_maps: self.vertex_maps.iter().map(|m| m.iter().map(|&x| target.conj(c, x)).collect()).collect(),
            conjugators: self.conjugators.iter().map(|&x| target.conj(c, x)).collect(),
        }
    }

    pub fn has_trivial_conjugators(&self, target: &FiniteGroup) -> bool {
        self.conjugators.iter().all(|&c| c == target.identity())
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::graph::samples;

    pub fn arc(g: Result<FiniteGroup, GroupError>) -> Arc<FiniteGroup> {
        Arc::new(g.unwrap())
    }

    /// Diamond with vertex groups `Z/2` (point) and `Z/3` (component), trivial edge group.
    pub fn diamond_z2_z3() -> GraphOfGroups {
        GraphOfGroups::with_trivial_edges(samples::diamond(), vec![arc(FiniteGroup::cyclic(2)), arc(FiniteGroup::cyclic(3))])
            .unwrap()
    }

    /// `Z/4 *_{Z/2} Z/6` over the diamond.
    pub fn diamond_z4_z2_z6() -> GraphOfGroups {
        let z2 = arc(FiniteGroup::cyclic(2));
        let z4 = arc(FiniteGroup::cyclic(4));
        let z6 = arc(FiniteGroup::cyclic(6));
        let a_p = GroupHom::new(z2.clone(), z4.clone(), vec![0, 2]).unwrap();
        let a_u = GroupHom::new(z2.clone(), z6.clone(), vec![0, 3]).unwrap();
        GraphOfGroups::new(samples::diamond(), vec![z4, z6], vec![z2], vec![a_p], vec![a_u], EdgeMapMode::Strict).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::graph::samples;

    #[test]
    fn rejects_non_injective_edge_map_in_strict_mode() {
        let z2 = arc(FiniteGroup::cyclic(2));
        let one = arc(FiniteGroup::cyclic(1));
        let kill = GroupHom::trivial(z2.clone(), one.clone());
        let err = GraphOfGroups::new(
            samples::diamond(),
            vec![one.clone(), one.clone()],
            vec![z2.clone()],
            vec![kill.clone()],
            vec![kill.clone()],
            EdgeMapMode::Strict,
        )
        .unwrap_err();
        assert_eq!(err, GogError::NonInjective { branch: "e1".into(), side: VertexKind::Point });
        let ok = GraphOfGroups::new(samples::diamond(), vec![one.clone(), one], vec![z2], vec![kill.clone()], vec![kill], EdgeMapMode::Permissive);
        assert_eq!(ok.unwrap().mode(), EdgeMapMode::Permissive);
    }

    #[test]
    fn rejects_maps_into_wrong_vertex_group() {
        let z2 = arc(FiniteGroup::cyclic(2));
        let z4 = arc(FiniteGroup::cyclic(4));
        let into_z4 = GroupHom::new(z2.clone(), z4.clone(), vec![0, 2]).unwrap();
        let err = GraphOfGroups::new(
            samples::diamond(),
            vec![z4, z2.clone()],
            vec![z2.clone()],
            vec![into_z4.clone()],
            vec![into_z4],
            EdgeMapMode::Strict,
        )
        .unwrap_err();
        assert_eq!(err, GogError::MapMismatch { branch: "e1".into(), side: VertexKind::Component });
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(GraphOfGroups::with_trivial_edges(samples::circle(), vec![]), Err(GogError::Shape(_))));
    }

    #[test]
    fn family_validity_and_conjugation() {
        let gog = diamond_z2_z3();
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let t = s3.element_by_label("(1 2)").unwrap();
        let r = s3.element_by_label("(1 2 3)").unwrap();
        let fam = HomFamily { vertex_maps: vec![vec![0, t], vec![0, r, s3.mul(r, r)]], conjugators: vec![0] };
        assert!(fam.is_valid(&gog, &s3));
        let c = fam.conjugate(r, &s3);
        assert!(c.is_valid(&gog, &s3));
        assert_ne!(c, fam);
        let bad = HomFamily { vertex_maps: vec![vec![0, r], vec![0, r, s3.mul(r, r)]], conjugators: vec![0] };
        assert!(!bad.is_valid(&gog, &s3));
    }
}
