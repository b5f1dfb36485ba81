use super::{GogError, GraphOfGroups, HomFamily};
use crate::graph::SpanningTree;
use crate::group::{count_homs, enumerate_homs, Elem, FiniteGroup, Letter, Presentation, Word};

/// The fundamental-group presentation relative to a spanning tree, with the
/// bookkeeping to turn generator assignments back into [`HomFamily`] values.
///
/// Generators: `{vertex}.{index}` for each non-identity vertex-group element,
/// then `e[{branch}]` for each branch.
#[derive(Debug, Clone)]
pub struct VanKampenPresentation {
    presentation: Presentation,
    tree: SpanningTree,
    /// Per vertex, per element: generator index, `None` for the identity.
    vertex_symbols: Vec<Vec<Option<usize>>>,
    edge_symbols: Vec<usize>,
}

impl VanKampenPresentation {
    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn tree(&self) -> &SpanningTree {
        &self.tree
    }

    pub fn edge_symbol(&self, e: usize) -> usize {
        self.edge_symbols[e]
    }

    pub fn vertex_symbol(&self, v: usize, a: Elem) -> Option<usize> {
        self.vertex_symbols[v][a]
    }

    pub fn decode(&self, assignment: &[Elem], target: &FiniteGroup) -> HomFamily {
        let vertex_maps = self
            .vertex_symbols
            .iter()
            .map(|syms| syms.iter().map(|s| s.map_or(target.identity(), |g| assignment[g])).collect())
            .collect();
        let conjugators = self.edge_symbols.iter().map(|&g| assignment[g]).collect();
        HomFamily { vertex_maps, conjugators }
    }

    pub fn encode(&self, family: &HomFamily) -> Vec<Elem> {
        let mut out = vec![0; self.presentation.generators().len()];
        for (syms, map) in self.vertex_symbols.iter().zip(&family.vertex_maps) {
            for (s, &x) in syms.iter().zip(map) {
                if let Some(g) = s {
                    out[*g] = x;
                }
            }
        }
        for (&g, &c) in self.edge_symbols.iter().zip(&family.conjugators) {
            out[g] = c;
        }
        out
    }
}

pub fn build_presentation(gog: &GraphOfGroups, tree: &SpanningTree) -> Result<VanKampenPresentation, GogError> {
    let graph = gog.graph();
    if !tree.fits(graph) {
        return Err(GogError::Shape("spanning tree does not belong to this graph".into()));
    }
    let mut generators = Vec::new();
    let mut vertex_symbols = Vec::with_capacity(graph.vertex_count());
    for v in 0..graph.vertex_count() {
        let g = gog.vertex_group(v);
        let syms: Vec<Option<usize>> = g
            .elements()
            .map(|a| {
                (a != g.identity()).then(|| {
                    generators.push(format!("{}.{a}", graph.vertex_label(v)));
                    generators.len() - 1
                })
            })
            .collect();
        vertex_symbols.push(syms);
    }
    let edge_symbols: Vec<usize> = (0..graph.edge_count())
        .map(|e| {
            generators.push(format!("e[{}]", graph.branch_label(e)));
            generators.len() - 1
        })
        .collect();

    let mut relators: Vec<Word> = Vec::new();
    for (v, syms) in vertex_symbols.iter().enumerate() {
        let g = gog.vertex_group(v);
        for a in g.elements() {
            for b in g.elements() {
                let (Some(x), Some(y)) = (syms[a], syms[b]) else { continue };
                let mut word = vec![Letter::gen(x), Letter::gen(y)];
                word.extend(syms[g.mul(a, b)].map(Letter::inv));
                relators.push(word);
            }
        }
    }
    for e in 0..graph.edge_count() {
        let (p, u) = graph.endpoints(e);
        let letter = edge_symbols[e];
        let eg = gog.edge_group(e);
        for h in eg.elements().filter(|&h| h != eg.identity()) {
            let on_u = vertex_symbols[u][gog.component_map(e).apply(h)];
            let on_p = vertex_symbols[p][gog.point_map(e).apply(h)];
            if on_u.is_none() && on_p.is_none() {
                continue;
            }
            // α_U(h) · e · α_P(h)⁻¹ · e⁻¹
            let mut word: Word = on_u.map(Letter::gen).into_iter().collect();
            word.push(Letter::gen(letter));
            word.extend(on_p.map(Letter::inv));
            word.push(Letter::inv(letter));
            relators.push(word);
        }
    }
    for &e in tree.edges() {
        relators.push(vec![Letter::gen(edge_symbols[e])]);
    }
    let presentation = Presentation::new(generators, relators)?;
    Ok(VanKampenPresentation { presentation, tree: tree.clone(), vertex_symbols, edge_symbols })
}

/// Homs from the presented group to `target`, sorted canonically.
pub fn enumerate_pi1_homs(
    gog: &GraphOfGroups,
    tree: &SpanningTree,
    target: &FiniteGroup,
) -> Result<Vec<HomFamily>, GogError> {
    let vk = build_presentation(gog, tree)?;
    let mut out: Vec<HomFamily> =
        enumerate_homs(vk.presentation(), target).iter().map(|a| vk.decode(a, target)).collect();
    out.sort();
    Ok(out)
}

pub fn count_pi1_homs(gog: &GraphOfGroups, tree: &SpanningTree, target: &FiniteGroup) -> Result<usize, GogError> {
    let vk = build_presentation(gog, tree)?;
    Ok(count_homs(vk.presentation(), target))
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use crate::graph::{maximal_tree, samples};
    use crate::group::homs_between;

    fn tree_of(gog: &GraphOfGroups) -> SpanningTree {
        maximal_tree(gog.graph()).unwrap()
    }

    #[test]
    fn free_product_presentation() {
        let gog = diamond_z2_z3();
        let vk = build_presentation(&gog, &tree_of(&gog)).unwrap();
        let p = vk.presentation();
        assert_eq!(p.generators(), ["P.1", "U.1", "U.2", "e[e1]"]);
        // Z/2 table: 1 relator; Z/3 table: 4 relators; trivial edge group: none; tree letter: 1.
        assert_eq!(p.relators().len(), 6);
        assert_eq!(p.format_word(p.relators().last().unwrap()), "e[e1]");
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(count_pi1_homs(&gog, vk.tree(), &s3).unwrap(), 12);
    }

    #[test]
    fn circle_of_trivial_groups_is_free_of_rank_one() {
        let gog = GraphOfGroups::trivial(samples::circle()).unwrap();
        let vk = build_presentation(&gog, &tree_of(&gog)).unwrap();
        assert_eq!(vk.presentation().to_string(), "< e[e1], e[e2] | e[e1] >");
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let homs = enumerate_pi1_homs(&gog, vk.tree(), &s3).unwrap();
        assert_eq!(homs.len(), 6);
        assert!(homs.iter().all(|h| h.conjugators[0] == 0));
    }

    #[test]
    fn amalgam_relators() {
        let gog = diamond_z4_z2_z6();
        let vk = build_presentation(&gog, &tree_of(&gog)).unwrap();
        let p = vk.presentation();
        let conj: Vec<String> = p.relators().iter().map(|r| p.format_word(r)).filter(|w| w.contains("e[e1]")).collect();
        assert_eq!(conj, ["U.3 e[e1] P.2^-1 e[e1]^-1", "e[e1]"]);
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let homs = enumerate_pi1_homs(&gog, vk.tree(), &z2).unwrap();
        assert_eq!(homs.len(), 2);
        assert!(homs.iter().all(|h| h.vertex_maps[1].iter().all(|&x| x == 0)));
    }

    #[test]
    fn free_product_count_is_product_of_local_counts() {
        let gog = diamond_z2_z3();
        for target in [FiniteGroup::cyclic(2), FiniteGroup::cyclic(6), FiniteGroup::symmetric(3), FiniteGroup::dihedral(4)] {
            let target = std::sync::Arc::new(target.unwrap());
            let expected: usize =
                gog.vertex_groups().iter().map(|g| homs_between(g, &target).len()).product();
            assert_eq!(count_pi1_homs(&gog, &tree_of(&gog), &target).unwrap(), expected);
        }
    }

    #[test]
    fn encode_decode_roundtrip_and_validity() {
        let gog = diamond_z4_z2_z6();
        let vk = build_presentation(&gog, &tree_of(&gog)).unwrap();
        let s3 = FiniteGroup::symmetric(3).unwrap();
        for fam in enumerate_pi1_homs(&gog, vk.tree(), &s3).unwrap() {
            assert!(fam.is_valid(&gog, &s3));
            assert_eq!(vk.decode(&vk.encode(&fam), &s3), fam);
        }
    }

    #[test]
    fn foreign_tree_rejected() {
        let gog = diamond_z2_z3();
        let other = maximal_tree(&samples::path()).unwrap();
        assert!(matches!(build_presentation(&gog, &other), Err(GogError::Shape(_))));
    }
}
