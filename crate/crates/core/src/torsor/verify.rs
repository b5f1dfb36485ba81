use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::patching::{normalized_global_torsors, LocalStructure};
use super::{hom_from_torsor, torsor_from_hom, torsor_morphisms, GroupoidFunctor, MultipointedTorsor, TorsorError};
use crate::gog::{count_pi1_homs, GraphOfGroups};
use crate::graph::maximal_tree;
use crate::group::{enumerate_homs, Elem, FiniteGroup, GroupHom, Letter, Presentation, Word};

/// Normalized counts are per gauge slice; multiplying by `gauge_factor =
/// |G|^(|B|-1)` gives the raw number of functors (or of torsor classes).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SetoidReport {
    pub global_classes: usize,
    pub local_classes: usize,
    pub essentially_surjective: bool,
    pub fully_faithful: bool,
    pub gauge_factor: u64,
}

impl SetoidReport {
    pub fn holds(&self) -> bool {
        self.essentially_surjective && self.fully_faithful && self.global_classes == self.local_classes
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PushoutReport {
    pub global_functors: usize,
    pub fiber_product_families: usize,
    pub pi1_homs: usize,
    pub bijection: bool,
    pub gauge_factor: u64,
}

impl PushoutReport {
    pub fn holds(&self) -> bool {
        self.bijection && self.global_functors == self.fiber_product_families && self.fiber_product_families == self.pi1_homs
    }
}

fn gauge_factor(gog: &GraphOfGroups, target: &FiniteGroup) -> u64 {
    let exp = gog.graph().edge_count().saturating_sub(1) as u32;
    (target.order() as u64).checked_pow(exp).unwrap_or(u64::MAX)
}

/// Per-vertex functors respecting the gauge.
fn gauged_functors(local: &LocalStructure, v: usize, target: &Arc<FiniteGroup>) -> Vec<GroupoidFunctor> {
    GroupoidFunctor::enumerate(local.vertex_groupoid(v), target)
        .into_iter()
        .filter(|f| {
            f.connecting_values()
                .iter()
                .enumerate()
                .all(|(s, &c)| !local.is_gauge_fixed(v, s) || c == target.identity())
        })
        .collect()
}

/// Backtracking join: one candidate per vertex, each branch checked once both ends are chosen.
fn join(gog: &GraphOfGroups, sizes: &[usize], compatible: &dyn Fn(usize, &[usize]) -> bool) -> Vec<Vec<usize>> {
    let graph = gog.graph();
    let n = graph.vertex_count();
    let mut closing = vec![Vec::new(); n];
    for e in 0..graph.edge_count() {
        let (p, u) = graph.endpoints(e);
        closing[p.max(u)].push(e);
    }
    let mut out = Vec::new();
    let mut choice = vec![0; n];
    fn rec(
        v: usize,
        sizes: &[usize],
        closing: &[Vec<usize>],
        choice: &mut Vec<usize>,
        compatible: &dyn Fn(usize, &[usize]) -> bool,
        out: &mut Vec<Vec<usize>>,
    ) {
        if v == sizes.len() {
            out.push(choice.clone());
            return;
        }
        for i in 0..sizes[v] {
            choice[v] = i;
            if closing[v].iter().all(|&e| compatible(e, choice)) {
                rec(v + 1, sizes, closing, choice, compatible, out);
            }
        }
    }
    rec(0, sizes, &closing, &mut choice, compatible, &mut out);
    out
}

/// Restricts the normalized global torsors to every vertex and compares with
/// the families of local torsors whose branch restrictions are isomorphic.
pub fn verify_setoid_equivalence(gog: &GraphOfGroups, target: &Arc<FiniteGroup>) -> Result<SetoidReport, TorsorError> {
    let graph = gog.graph();
    let local = LocalStructure::new(gog);
    let n = graph.vertex_count();

    let candidates: Vec<Vec<MultipointedTorsor>> =
        (0..n).map(|v| gauged_functors(&local, v, target).iter().map(torsor_from_hom).collect()).collect();
    let restricted: Vec<Vec<BTreeMap<usize, MultipointedTorsor>>> = (0..n)
        .map(|v| {
            candidates[v]
                .iter()
                .map(|t| {
                    local
                        .vertex_branches(v)
                        .iter()
                        .map(|&e| {
                            let alpha = if graph.endpoints(e).0 == v { gog.point_map(e) } else { gog.component_map(e) };
                            (e, t.restrict_to_object(local.position(v, e), alpha).expect("matching groups"))
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let sizes: Vec<usize> = candidates.iter().map(Vec::len).collect();
    let families = join(gog, &sizes, &|e, choice| {
        let (p, u) = graph.endpoints(e);
        torsor_morphisms(&restricted[p][choice[p]][&e], &restricted[u][choice[u]][&e]).is_some()
    });
    let index: BTreeMap<&Vec<usize>, usize> = families.iter().enumerate().map(|(i, f)| (f, i)).collect();

    let globals = normalized_global_torsors(gog, &local, target)?;
    let mut hit: Vec<Option<usize>> = vec![None; families.len()];
    let mut essentially_surjective = true;
    let mut fully_faithful = true;
    for (gi, global) in globals.iter().enumerate() {
        // Identify the class of each restriction among the local candidates.
        let mut choice = Vec::with_capacity(n);
        for v in 0..n {
            let r = global.restrict_vertex(gog, &local, v, target);
            match candidates[v].iter().position(|c| torsor_morphisms(&r, c).is_some()) {
                Some(i) => choice.push(i),
                None => break,
            }
        }
        let Some(&fi) = (choice.len() == n).then(|| index.get(&choice)).flatten() else {
            // The restriction leaves the gauge slice or fails to glue.
            essentially_surjective = false;
            continue;
        };
        match hit[fi] {
            Some(other) if globals[other].morphism(global, target).is_none() => fully_faithful = false,
            _ => hit[fi] = Some(gi),
        }
    }
    if hit.iter().any(Option::is_none) {
        essentially_surjective = false;
    }
    Ok(SetoidReport {
        global_classes: globals.len(),
        local_classes: families.len(),
        essentially_surjective,
        fully_faithful,
        gauge_factor: gauge_factor(gog, target),
    })
}

/// Presentation of the gauge-fixed functors out of the global groupoid:
/// per vertex, loops `x[v.γ]` at the base object with the multiplication
/// table and connecting arrows `a[v.e]`; per branch and edge-group element,
/// the two images of the branch loop are identified.
fn groupoid_presentation(gog: &GraphOfGroups, local: &LocalStructure) -> (Presentation, Vec<Vec<Option<usize>>>, Vec<Vec<Option<usize>>>) {
    let graph = gog.graph();
    let mut generators = Vec::new();
    let mut loops = Vec::new();
    let mut arrows = Vec::new();
    for v in 0..graph.vertex_count() {
        let g = gog.vertex_group(v);
        let label = graph.vertex_label(v);
        loops.push(
            g.elements()
                .map(|x| {
                    (x != g.identity()).then(|| {
                        generators.push(format!("x[{label}.{x}]"));
                        generators.len() - 1
                    })
                })
                .collect::<Vec<_>>(),
        );
        arrows.push(
            local
                .vertex_branches(v)
                .iter()
                .enumerate()
                .map(|(s, &e)| {
                    (s != 0).then(|| {
                        generators.push(format!("a[{label}.{}]", graph.branch_label(e)));
                        generators.len() - 1
                    })
                })
                .collect::<Vec<_>>(),
        );
    }
    let mut relators: Vec<Word> = Vec::new();
    for v in 0..graph.vertex_count() {
        let g = gog.vertex_group(v);
        for a in g.elements() {
            for b in g.elements() {
                let (Some(x), Some(y)) = (loops[v][a], loops[v][b]) else { continue };
                let mut w = vec![Letter::gen(x), Letter::gen(y)];
                w.extend(loops[v][g.mul(a, b)].map(Letter::inv));
                relators.push(w);
            }
        }
    }
    // Loop at object `s` of vertex `v` given by `γ`: a_s x_γ a_s⁻¹.
    let branch_loop = |v: usize, s: usize, gamma: usize, inverse: bool| -> Word {
        let mut w = Vec::new();
        if let Some(x) = loops[v][gamma] {
            let a = arrows[v][s];
            w.extend(a.map(Letter::gen));
            w.push(if inverse { Letter::inv(x) } else { Letter::gen(x) });
            w.extend(a.map(Letter::inv));
        }
        w
    };
    for e in 0..graph.edge_count() {
        let (p, u) = graph.endpoints(e);
        let (sp, su) = (local.position(p, e), local.position(u, e));
        let eg = gog.edge_group(e);
        for h in eg.elements().filter(|&h| h != eg.identity()) {
            let mut w = branch_loop(p, sp, gog.point_map(e).apply(h), false);
            // (a x a⁻¹)⁻¹ = a x⁻¹ a⁻¹
            w.extend(branch_loop(u, su, gog.component_map(e).apply(h), true));
            if !w.is_empty() {
                relators.push(w);
            }
        }
    }
    for (v, arrs) in arrows.iter().enumerate() {
        for (s, a) in arrs.iter().enumerate() {
            if let (Some(a), true) = (a, local.is_gauge_fixed(v, s)) {
                relators.push(vec![Letter::gen(*a)]);
            }
        }
    }
    let presentation = Presentation::new(generators, relators).expect("symbols declared above");
    (presentation, loops, arrows)
}

/// Compares functors out of the global groupoid (through its presentation)
/// with compatible families of per-vertex functors, all in the gauge slice,
/// and cross-checks the count with the fundamental-group presentation.
pub fn verify_groupoid_pushout(gog: &GraphOfGroups, target: &Arc<FiniteGroup>) -> Result<PushoutReport, TorsorError> {
    let graph = gog.graph();
    let local = LocalStructure::new(gog);
    let n = graph.vertex_count();

    let candidates: Vec<Vec<GroupoidFunctor>> = (0..n).map(|v| gauged_functors(&local, v, target)).collect();
    let sizes: Vec<usize> = candidates.iter().map(Vec::len).collect();
    let families = join(gog, &sizes, &|e, choice| {
        let (p, u) = graph.endpoints(e);
        let (fp, fu) = (&candidates[p][choice[p]], &candidates[u][choice[u]]);
        let (sp, su) = (local.position(p, e), local.position(u, e));
        gog.edge_group(e).elements().all(|h| {
            let gp = fp.groupoid().loop_at(sp, gog.point_map(e).apply(h));
            let gu = fu.groupoid().loop_at(su, gog.component_map(e).apply(h));
            fp.apply(gp) == fu.apply(gu)
        })
    });
    let keys: BTreeMap<Vec<Vec<Elem>>, usize> = families
        .iter()
        .enumerate()
        .map(|(i, ch)| (ch.iter().enumerate().map(|(v, &c)| candidates[v][c].values().to_vec()).collect(), i))
        .collect();

    let (presentation, loops, arrows) = groupoid_presentation(gog, &local);
    let solutions = enumerate_homs(&presentation, target);
    let mut hit = vec![false; families.len()];
    let mut bijection = keys.len() == families.len();
    for sol in &solutions {
        let key: Vec<Vec<Elem>> = (0..n)
            .map(|v| {
                let map = loops[v].iter().map(|x| x.map_or(target.identity(), |i| sol[i])).collect();
                let lambda = GroupHom::new(gog.vertex_group(v).clone(), target.clone(), map).expect("table relators force a hom");
                let c: Vec<Elem> = arrows[v].iter().map(|a| a.map_or(target.identity(), |i| sol[i])).collect();
                GroupoidFunctor::from_data(local.vertex_groupoid(v).clone(), &lambda, &c).expect("well-formed").values().to_vec()
            })
            .collect();
        match keys.get(&key) {
            Some(&i) if !hit[i] => hit[i] = true,
            _ => bijection = false,
        }
    }
    bijection &= hit.iter().all(|&h| h);
    let tree = maximal_tree(graph)?;
    Ok(PushoutReport {
        global_functors: solutions.len(),
        fiber_product_families: families.len(),
        pi1_homs: count_pi1_homs(gog, &tree, target)?,
        bijection,
        gauge_factor: gauge_factor(gog, target),
    })
}

/// Checks that `hom_from_torsor ∘ torsor_from_hom` is the identity on
/// functors, and `torsor_from_hom ∘ hom_from_torsor` is isomorphic to the
/// input torsor.
pub fn round_trip_check(functor: &GroupoidFunctor, torsor: &MultipointedTorsor) -> Result<(), String> {
    let back = hom_from_torsor(&torsor_from_hom(functor), functor.groupoid()).map_err(|e| e.to_string())?;
    if &back != functor {
        return Err("hom_from_torsor(torsor_from_hom(f)) differs from f".into());
    }
    let f = hom_from_torsor(torsor, torsor.groupoid()).map_err(|e| e.to_string())?;
    if torsor_morphisms(&torsor_from_hom(&f), torsor).is_none() {
        return Err("torsor_from_hom(hom_from_torsor(t)) is not isomorphic to t".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::samples;

    fn arc(g: FiniteGroup) -> Arc<FiniteGroup> {
        Arc::new(g)
    }

    fn diamond_z2_z3() -> GraphOfGroups {
        GraphOfGroups::with_trivial_edges(
            samples::diamond(),
            vec![arc(FiniteGroup::cyclic(2).unwrap()), arc(FiniteGroup::cyclic(3).unwrap())],
        )
        .unwrap()
    }

    #[test]
    fn setoid_examples() {
        let one = arc(FiniteGroup::trivial());
        let r = verify_setoid_equivalence(&diamond_z2_z3(), &one).unwrap();
        assert_eq!((r.global_classes, r.local_classes), (1, 1));
        let r = verify_setoid_equivalence(&diamond_z2_z3(), &arc(FiniteGroup::symmetric(3).unwrap())).unwrap();
        assert_eq!((r.global_classes, r.local_classes), (12, 12));
        assert!(r.holds());
        let circle = GraphOfGroups::trivial(samples::circle()).unwrap();
        let r = verify_setoid_equivalence(&circle, &arc(FiniteGroup::cyclic(3).unwrap())).unwrap();
        assert_eq!((r.global_classes, r.local_classes), (3, 3));
        assert_eq!(r.gauge_factor, 3);
        assert!(r.holds());
    }

    #[test]
    fn pushout_examples() {
        let one = arc(FiniteGroup::trivial());
        let r = verify_groupoid_pushout(&diamond_z2_z3(), &one).unwrap();
        assert_eq!((r.global_functors, r.fiber_product_families, r.pi1_homs), (1, 1, 1));
        let r = verify_groupoid_pushout(&diamond_z2_z3(), &arc(FiniteGroup::symmetric(3).unwrap())).unwrap();
        assert_eq!((r.global_functors, r.fiber_product_families, r.pi1_homs), (12, 12, 12));
        assert!(r.holds());
        let theta = GraphOfGroups::trivial(samples::theta()).unwrap();
        let r = verify_groupoid_pushout(&theta, &arc(FiniteGroup::cyclic(2).unwrap())).unwrap();
        assert_eq!((r.global_functors, r.fiber_product_families, r.pi1_homs), (4, 4, 4));
        assert_eq!(r.gauge_factor, 4);
        assert!(r.holds());
    }

    #[test]
    fn amalgam_and_nontree_with_groups_agree() {
        let z2 = arc(FiniteGroup::cyclic(2).unwrap());
        let z4 = arc(FiniteGroup::cyclic(4).unwrap());
        let s3 = arc(FiniteGroup::symmetric(3).unwrap());
        let a = GroupHom::new(z2.clone(), z4.clone(), vec![0, 2]).unwrap();
        let t = s3.element_by_label("(1 2)").unwrap();
        let b = GroupHom::new(z2.clone(), s3.clone(), vec![0, t]).unwrap();
        let gog = GraphOfGroups::new(
            samples::circle(),
            vec![z4, s3.clone()],
            vec![z2.clone(), z2],
            vec![a.clone(), a],
            vec![b.clone(), b],
            crate::gog::EdgeMapMode::Strict,
        )
        .unwrap();
        for target in [FiniteGroup::cyclic(2), FiniteGroup::cyclic(4), FiniteGroup::symmetric(3)] {
            let target = arc(target.unwrap());
            let r = verify_groupoid_pushout(&gog, &target).unwrap();
            assert!(r.holds(), "{r:?}");
            let s = verify_setoid_equivalence(&gog, &target).unwrap();
            assert!(s.holds(), "{s:?}");
            assert_eq!(s.global_classes, r.pi1_homs);
        }
    }
}
