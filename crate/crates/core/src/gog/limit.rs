use std::sync::Arc;

use super::{GraphOfGroups, HomFamily};
use crate::group::{homs_between, Elem, FiniteGroup};

/// Families of vertex homs that agree exactly on every branch,
/// `f_U ∘ α_U = f_P ∘ α_P`, with every conjugator the identity.
///
/// Vertex homs come from the Cayley-graph enumerator, not the presentation
/// solver, so this is an independent computation.
pub fn naive_limit_homs(gog: &GraphOfGroups, target: &Arc<FiniteGroup>) -> Vec<HomFamily> {
    let graph = gog.graph();
    let n = graph.vertex_count();
    let local: Vec<Vec<Vec<Elem>>> = gog
        .vertex_groups()
        .iter()
        .map(|g| homs_between(g, target).into_iter().map(|h| h.table().to_vec()).collect())
        .collect();
    // Branches to check once vertex `v` is assigned: those whose later end is `v`.
    let mut closing: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in 0..graph.edge_count() {
        let (p, u) = graph.endpoints(e);
        closing[p.max(u)].push(e);
    }
    let agrees = |e: usize, choice: &[usize]| {
        let (p, u) = graph.endpoints(e);
        let (fp, fu) = (&local[p][choice[p]], &local[u][choice[u]]);
        gog.edge_group(e)
            .elements()
            .all(|h| fp[gog.point_map(e).apply(h)] == fu[gog.component_map(e).apply(h)])
    };
    let mut out = Vec::new();
    let mut choice = vec![0usize; n];
    fn rec(
        v: usize,
        choice: &mut Vec<usize>,
        local: &[Vec<Vec<Elem>>],
        closing: &[Vec<usize>],
        agrees: &dyn Fn(usize, &[usize]) -> bool,
        emit: &mut dyn FnMut(&[usize]),
    ) {
        if v == local.len() {
            emit(choice);
            return;
        }
        for i in 0..local[v].len() {
            choice[v] = i;
            if closing[v].iter().all(|&e| agrees(e, choice)) {
                rec(v + 1, choice, local, closing, agrees, emit);
            }
        }
    }
    let identity = target.identity();
    let m = graph.edge_count();
    rec(0, &mut choice, &local, &closing, &agrees, &mut |c| {
        out.push(HomFamily {
            vertex_maps: c.iter().enumerate().map(|(v, &i)| local[v][i].clone()).collect(),
            conjugators: vec![identity; m],
        });
    });
    // Local lists are sorted and vertices are visited in order, so `out` is sorted already.
    debug_assert!(out.windows(2).all(|w| w[0] < w[1]));
    out
}
