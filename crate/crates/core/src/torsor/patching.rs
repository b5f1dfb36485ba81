use std::collections::VecDeque;
use std::sync::Arc;

use super::{hom_from_torsor, torsor_morphisms, ModelGroupoid, MultipointedTorsor, TorsorError, TorsorMorphism};
use crate::gog::{enumerate_pi1_homs, GraphOfGroups, HomFamily};
use crate::graph::{maximal_tree, UnionFind, VertexKind};
use crate::group::{Elem, FiniteGroup, GroupHom};

/// Per-vertex groupoids whose objects are the incident branches (base
/// object = least branch), one-object branch groupoids, and the gauge:
/// a spanning tree of the connecting arrows `α^ξ_s` across all vertices,
/// on which functors are normalized to the identity.
#[derive(Debug, Clone)]
pub struct LocalStructure {
    vertex_groupoids: Vec<ModelGroupoid>,
    vertex_branches: Vec<Vec<usize>>,
    branch_groupoids: Vec<ModelGroupoid>,
    gauge: Vec<Vec<bool>>,
}

impl LocalStructure {
    pub fn new(gog: &GraphOfGroups) -> Self {
        let graph = gog.graph();
        let mut vertex_groupoids = Vec::new();
        let mut vertex_branches = Vec::new();
        for v in 0..graph.vertex_count() {
            let branches = graph.incident(v);
            let labels = branches.iter().map(|&e| graph.branch_label(e).to_string()).collect();
            vertex_groupoids.push(ModelGroupoid::new(labels, gog.vertex_group(v).clone()).expect("validated graph"));
            vertex_branches.push(branches);
        }
        let branch_groupoids = (0..graph.edge_count())
            .map(|e| ModelGroupoid::new(vec![graph.branch_label(e).to_string()], gog.edge_group(e).clone()).unwrap())
            .collect();
        let mut uf = UnionFind::new(graph.edge_count());
        let gauge = vertex_branches
            .iter()
            .map(|bs| bs.iter().map(|&e| e != bs[0] && uf.union(bs[0], e)).collect())
            .collect();
        LocalStructure { vertex_groupoids, vertex_branches, branch_groupoids, gauge }
    }

    pub fn vertex_groupoid(&self, v: usize) -> &ModelGroupoid {
        &self.vertex_groupoids[v]
    }

    pub fn branch_groupoid(&self, e: usize) -> &ModelGroupoid {
        &self.branch_groupoids[e]
    }

    /// Branch indices in the object order of the vertex groupoid.
    pub fn vertex_branches(&self, v: usize) -> &[usize] {
        &self.vertex_branches[v]
    }

    pub fn position(&self, v: usize, e: usize) -> usize {
        self.vertex_branches[v].iter().position(|&b| b == e).expect("branch is incident")
    }

    /// True when the connecting arrow to object `s` of vertex `v` is gauge-fixed.
    pub fn is_gauge_fixed(&self, v: usize, s: usize) -> bool {
        self.gauge[v][s]
    }

    pub fn gauge_fixed_count(&self) -> usize {
        self.gauge.iter().flatten().filter(|&&b| b).count()
    }
}

/// A torsor over the whole graph: carrier `G`, a presentation hom `ψ`
/// (vertex homs and branch conjugators), and one point per branch. Seen
/// from the point end of branch `e` the point is `ζ_e`; seen from the
/// component end it is `ψ(e)·ζ_e`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GlobalTorsor {
    pub family: HomFamily,
    pub points: Vec<Elem>,
}

impl GlobalTorsor {
    /// Points pinned by `ζ_{e₀} = 1` and the gauge equations, so restricted
    /// local functors are identity on every gauge-fixed connecting arrow.
    pub fn normalized(gog: &GraphOfGroups, local: &LocalStructure, family: HomFamily, target: &FiniteGroup) -> Self {
        let graph = gog.graph();
        let m = graph.edge_count();
        // Gauge edges joining branches: the local point of `s` must equal that of the base object.
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m];
        for v in 0..graph.vertex_count() {
            let bs = local.vertex_branches(v);
            for (s, &e) in bs.iter().enumerate() {
                if local.is_gauge_fixed(v, s) {
                    adj[bs[0]].push((e, v));
                    adj[e].push((bs[0], v));
                }
            }
        }
        let mut points = vec![None; m];
        points[0] = Some(target.identity());
        let mut queue = VecDeque::from([0]);
        let twist = |e: usize, v: usize| match graph.vertex_kind(v) {
            VertexKind::Point => target.identity(),
            VertexKind::Component => family.conjugators[e],
        };
        while let Some(a) = queue.pop_front() {
            for &(b, v) in &adj[a] {
                if points[b].is_none() {
                    // twist(b) ζ_b = twist(a) ζ_a
                    let za = points[a].unwrap();
                    let zb = target.mul(target.inv(twist(b, v)), target.mul(twist(a, v), za));
                    points[b] = Some(zb);
                    queue.push_back(b);
                }
            }
        }
        let points = points.into_iter().map(|p| p.expect("gauge tree spans the branches")).collect();
        GlobalTorsor { family, points }
    }

    /// The point of branch `e` seen from vertex `v`.
    pub fn local_point(&self, gog: &GraphOfGroups, e: usize, v: usize, target: &FiniteGroup) -> Elem {
        match gog.graph().vertex_kind(v) {
            VertexKind::Point => self.points[e],
            VertexKind::Component => target.mul(self.family.conjugators[e], self.points[e]),
        }
    }

    pub fn restrict_vertex(
        &self,
        gog: &GraphOfGroups,
        local: &LocalStructure,
        v: usize,
        target: &Arc<FiniteGroup>,
    ) -> MultipointedTorsor {
        let lambda = GroupHom::new(gog.vertex_group(v).clone(), target.clone(), self.family.vertex_maps[v].clone())
            .expect("vertex maps of a valid family are homs");
        let points = local.vertex_branches(v).iter().map(|&e| self.local_point(gog, e, v, target)).collect();
        MultipointedTorsor::regular(local.vertex_groupoid(v).clone(), &lambda, points).expect("regular torsor")
    }

    /// The morphism `k` (left multiplication) from `self` to `other`, if any.
    pub fn morphism(&self, other: &GlobalTorsor, target: &FiniteGroup) -> Option<Elem> {
        let k = target.mul(other.points[0], target.inv(self.points[0]));
        let moved = self.family.conjugate(k, target);
        let points_ok = self.points.iter().zip(&other.points).all(|(&a, &b)| target.mul(k, a) == b);
        (moved == other.family && points_ok).then_some(k)
    }
}

/// Local torsors per vertex and per branch, to be glued.
#[derive(Debug, Clone)]
pub struct PatchingProblem {
    pub gog: GraphOfGroups,
    pub group: Arc<FiniteGroup>,
    pub vertex_torsors: Vec<MultipointedTorsor>,
    pub branch_torsors: Vec<MultipointedTorsor>,
}

/// A vertex-side restriction, a component-side restriction, and the
/// isomorphism between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoFiberObject {
    pub left: MultipointedTorsor,
    pub right: MultipointedTorsor,
    pub connecting: TorsorMorphism,
}

#[derive(Debug, Clone)]
pub struct PatchingSolution {
    pub global: GlobalTorsor,
    /// Isomorphism from the restriction of the global torsor to each vertex datum.
    pub vertex_isomorphisms: Vec<TorsorMorphism>,
    /// Per branch, the glued pair over that branch.
    pub branch_objects: Vec<TwoFiberObject>,
}

impl PatchingProblem {
    /// Restriction of a vertex datum to one incident branch.
    fn restrict(&self, local: &LocalStructure, v: usize, e: usize) -> Result<MultipointedTorsor, TorsorError> {
        let graph = self.gog.graph();
        let (p, _) = graph.endpoints(e);
        let alpha = if v == p { self.gog.point_map(e) } else { self.gog.component_map(e) };
        self.vertex_torsors[v].restrict_to_object(local.position(v, e), alpha)
    }

    /// Whole-problem shape check: groupoids and groups line up with the graph of groups.
    fn check_shape(&self, local: &LocalStructure) -> Result<(), TorsorError> {
        let graph = self.gog.graph();
        if self.vertex_torsors.len() != graph.vertex_count() || self.branch_torsors.len() != graph.edge_count() {
            return Err(TorsorError::Shape("one torsor per vertex and per branch required".into()));
        }
        let all = self.vertex_torsors.iter().zip(&local.vertex_groupoids).chain(self.branch_torsors.iter().zip(&local.branch_groupoids));
        for (t, g) in all {
            if t.groupoid() != g || **t.group() != *self.group {
                return Err(TorsorError::ActionMismatch);
            }
        }
        Ok(())
    }
}

/// Glues local data into a global torsor. The tree branches of the
/// canonical maximal tree get trivial conjugators; the solution is
/// normalized so the first branch's point is the identity.
pub fn solve_patching(problem: &PatchingProblem) -> Result<PatchingSolution, TorsorError> {
    let gog = &problem.gog;
    let graph = gog.graph();
    let g = &*problem.group;
    let local = LocalStructure::new(gog);
    problem.check_shape(&local)?;

    // Branch compatibility, from both ends.
    for e in 0..graph.edge_count() {
        let (p, u) = graph.endpoints(e);
        for (v, side) in [(p, VertexKind::Point), (u, VertexKind::Component)] {
            let r = problem.restrict(&local, v, e)?;
            if torsor_morphisms(&r, &problem.branch_torsors[e]).is_none() {
                return Err(TorsorError::Incompatible { branch: graph.branch_label(e).to_string(), side });
            }
        }
    }

    // Standard form of each vertex datum: λ_ξ and ζ^ξ_s = f(α_s)⁻¹.
    let mut lambdas = Vec::new();
    let mut std_points: Vec<Vec<Elem>> = Vec::new();
    for v in 0..graph.vertex_count() {
        let f = hom_from_torsor(&problem.vertex_torsors[v], local.vertex_groupoid(v))?;
        lambdas.push(f.base_hom());
        std_points.push(f.connecting_values().into_iter().map(|c| g.inv(c)).collect());
    }
    let zeta = |v: usize, e: usize| std_points[v][local.position(v, e)];

    // k_U = k_P ζ^P_e (ζ^U_e)⁻¹ along the tree, from k = 1 at vertex 0.
    let tree = maximal_tree(graph)?;
    let mut k: Vec<Option<Elem>> = vec![None; graph.vertex_count()];
    k[0] = Some(g.identity());
    let mut changed = true;
    while changed {
        changed = false;
        for &e in tree.edges() {
            let (p, u) = graph.endpoints(e);
            let bridge = g.mul(zeta(p, e), g.inv(zeta(u, e)));
            match (k[p], k[u]) {
                (Some(kp), None) => k[u] = Some(g.mul(kp, bridge)),
                (None, Some(ku)) => k[p] = Some(g.mul(ku, g.inv(bridge))),
                _ => continue,
            }
            changed = true;
        }
    }
    let k: Vec<Elem> = k.into_iter().map(|x| x.expect("tree reaches every vertex")).collect();

    let vertex_maps = (0..graph.vertex_count())
        .map(|v| lambdas[v].table().iter().map(|&x| g.conj(k[v], x)).collect())
        .collect();
    let mut conjugators = Vec::with_capacity(graph.edge_count());
    let mut points = Vec::with_capacity(graph.edge_count());
    for e in 0..graph.edge_count() {
        let (p, u) = graph.endpoints(e);
        let c = g.mul(g.mul(k[u], zeta(u, e)), g.inv(g.mul(k[p], zeta(p, e))));
        conjugators.push(c);
        points.push(g.mul(k[p], zeta(p, e)));
    }
    let raw = GlobalTorsor { family: HomFamily { vertex_maps, conjugators }, points };
    let m = g.inv(raw.points[0]);
    let global = GlobalTorsor {
        family: raw.family.conjugate(m, g),
        points: raw.points.iter().map(|&z| g.mul(m, z)).collect(),
    };
    if !global.family.is_valid(gog, g) {
        return Err(TorsorError::Internal("glued family violates a relation".into()));
    }

    let mut vertex_isomorphisms = Vec::new();
    for v in 0..graph.vertex_count() {
        let r = global.restrict_vertex(gog, &local, v, &problem.group);
        vertex_isomorphisms.push(
            torsor_morphisms(&r, &problem.vertex_torsors[v])
                .ok_or_else(|| TorsorError::Internal(format!("restriction to {} is not isomorphic", graph.vertex_label(v))))?,
        );
    }
    let mut branch_objects = Vec::new();
    for e in 0..graph.edge_count() {
        let (p, u) = graph.endpoints(e);
        let left = global.restrict_vertex(gog, &local, p, &problem.group).restrict_to_object(local.position(p, e), gog.point_map(e))?;
        let right = global.restrict_vertex(gog, &local, u, &problem.group).restrict_to_object(local.position(u, e), gog.component_map(e))?;
        let connecting = torsor_morphisms(&left, &right)
            .ok_or_else(|| TorsorError::Internal(format!("branch {} restrictions differ", graph.branch_label(e))))?;
        branch_objects.push(TwoFiberObject { left, right, connecting });
    }
    Ok(PatchingSolution { global, vertex_isomorphisms, branch_objects })
}

/// Global torsors normalized by the gauge, one per presentation hom.
pub fn normalized_global_torsors(
    gog: &GraphOfGroups,
    local: &LocalStructure,
    target: &Arc<FiniteGroup>,
) -> Result<Vec<GlobalTorsor>, TorsorError> {
    let tree = maximal_tree(gog.graph())?;
    Ok(enumerate_pi1_homs(gog, &tree, target)?
        .into_iter()
        .map(|f| GlobalTorsor::normalized(gog, local, f, target))
        .collect())
}

/// The problem induced by restricting a global torsor (branch data from the point side).
pub fn induced_problem(gog: &GraphOfGroups, global: &GlobalTorsor, target: &Arc<FiniteGroup>) -> Result<PatchingProblem, TorsorError> {
    let graph = gog.graph();
    let local = LocalStructure::new(gog);
    let vertex_torsors: Vec<MultipointedTorsor> =
        (0..graph.vertex_count()).map(|v| global.restrict_vertex(gog, &local, v, target)).collect();
    let branch_torsors = (0..graph.edge_count())
        .map(|e| {
            let (p, _) = graph.endpoints(e);
            vertex_torsors[p].restrict_to_object(local.position(p, e), gog.point_map(e))
        })
        .collect::<Result<_, _>>()?;
    Ok(PatchingProblem { gog: gog.clone(), group: target.clone(), vertex_torsors, branch_torsors })
}
