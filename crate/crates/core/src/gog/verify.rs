use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Serialize;

use super::{count_pi1_homs, enumerate_pi1_homs, naive_limit_homs, GogError, GraphOfGroups, HomFamily};
use crate::graph::{all_spanning_trees, maximal_tree};
use crate::group::FiniteGroup;

/// First reason the forget-edge-letters map fails to be a bijection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Discrepancy {
    /// A presentation hom whose vertex restrictions do not agree exactly on some branch.
    OutsideLimit { family: HomFamily, branch: String },
    /// Two presentation homs with the same vertex restrictions.
    Collision { first: HomFamily, second: HomFamily },
    /// A compatible family that no presentation hom restricts to.
    Missed { family: HomFamily },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VanKampenReport {
    pub is_tree: bool,
    pub tree: Vec<String>,
    pub pi1_count: usize,
    pub naive_count: usize,
    pub lands_in_limit: bool,
    pub injective: bool,
    pub surjective: bool,
    pub bijection: bool,
    pub discrepancy: Option<Discrepancy>,
    /// Counts up to simultaneous conjugation in the test group.
    pub pi1_classes: usize,
    pub naive_classes: usize,
}

impl VanKampenReport {
    /// On a tree the restriction must be a bijection; off a tree a
    /// discrepancy is expected and only reported.
    pub fn holds(&self) -> bool {
        !self.is_tree || self.bijection
    }
}

/// Compares presentation homs (canonical maximal tree) with the naive limit
/// via the map that forgets the edge letters.
pub fn verify_tree_vankampen(gog: &GraphOfGroups, target: &Arc<FiniteGroup>) -> Result<VanKampenReport, GogError> {
    let graph = gog.graph();
    let tree = maximal_tree(graph)?;
    let pi1 = enumerate_pi1_homs(gog, &tree, target)?;
    let naive = naive_limit_homs(gog, target);
    let naive_set: BTreeSet<&Vec<Vec<usize>>> = naive.iter().map(|f| &f.vertex_maps).collect();

    let mut discrepancy = None;
    let mut lands_in_limit = true;
    let mut injective = true;
    let mut hit: BTreeMap<&Vec<Vec<usize>>, &HomFamily> = BTreeMap::new();
    for fam in &pi1 {
        if !naive_set.contains(&fam.vertex_maps) {
            if lands_in_limit {
                let branch = (0..graph.edge_count())
                    .find(|&e| {
                        let (p, u) = graph.endpoints(e);
                        gog.edge_group(e).elements().any(|h| {
                            fam.vertex_maps[p][gog.point_map(e).apply(h)]
                                != fam.vertex_maps[u][gog.component_map(e).apply(h)]
                        })
                    })
                    .map(|e| graph.branch_label(e).to_string())
                    .unwrap_or_default();
                discrepancy.get_or_insert(Discrepancy::OutsideLimit { family: fam.clone(), branch });
            }
            lands_in_limit = false;
            continue;
        }
        if let Some(first) = hit.insert(&fam.vertex_maps, fam) {
            if injective {
                discrepancy.get_or_insert(Discrepancy::Collision { first: first.clone(), second: fam.clone() });
            }
            injective = false;
        }
    }
    let missed = naive.iter().find(|f| !hit.contains_key(&f.vertex_maps));
    let surjective = missed.is_none();
    if let Some(f) = missed {
        discrepancy.get_or_insert(Discrepancy::Missed { family: f.clone() });
    }
    let bijection = lands_in_limit && injective && surjective;
    Ok(VanKampenReport {
        is_tree: graph.is_tree()?,
        tree: tree.labels(graph).into_iter().map(String::from).collect(),
        pi1_count: pi1.len(),
        naive_count: naive.len(),
        lands_in_limit,
        injective,
        surjective,
        bijection,
        discrepancy,
        pi1_classes: conjugacy_class_count(&pi1, target),
        naive_classes: conjugacy_class_count(&naive, target),
    })
}

/// Number of orbits under simultaneous conjugation by the test group.
pub fn conjugacy_class_count(families: &[HomFamily], target: &FiniteGroup) -> usize {
    let canon: BTreeSet<HomFamily> = families
        .iter()
        .map(|f| target.elements().map(|c| f.conjugate(c, target)).min().expect("groups are nonempty"))
        .collect();
    canon.len()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeIndependenceReport {
    /// Tree branch labels and the hom count computed with that tree.
    pub counts: Vec<(Vec<String>, usize)>,
    pub holds: bool,
}

/// Recomputes the presentation hom count for every spanning tree.
pub fn verify_tree_independence(gog: &GraphOfGroups, target: &FiniteGroup) -> Result<TreeIndependenceReport, GogError> {
    let graph = gog.graph();
    let mut counts = Vec::new();
    for tree in all_spanning_trees(graph)? {
        let n = count_pi1_homs(gog, &tree, target)?;
        counts.push((tree.labels(graph).into_iter().map(String::from).collect(), n));
    }
    let holds = counts.windows(2).all(|w| w[0].1 == w[1].1);
    Ok(TreeIndependenceReport { counts, holds })
}
