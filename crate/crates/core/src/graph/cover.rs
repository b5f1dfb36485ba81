use super::{maximal_tree, GraphError, ReductionGraph, SpanningTree, UnionFind};
use crate::group::{permutations_lex, FiniteGroup};

/// Largest sheet count supported (the sheet-relabelling group is `S_n`).
pub const MAX_COVER_DEGREE: usize = 5;
const MAX_ASSIGNMENTS: usize = 5_000_000;

/// A degree-`n` cover of a reduction graph: each branch carries a permutation
/// of the sheets `0..n`, identity on the branches of the chosen tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphCover {
    degree: usize,
    tree: SpanningTree,
    sheets: Vec<Vec<usize>>,
}

impl GraphCover {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn tree(&self) -> &SpanningTree {
        &self.tree
    }

    /// Sheet permutation carried by branch `e`: sheet `i` over the point end
    /// is joined to sheet `permutation(e)[i]` over the component end.
    pub fn permutation(&self, e: usize) -> &[usize] {
        &self.sheets[e]
    }

    /// Vertices `(v, i)` of the total space are numbered `v * degree + i`.
    pub fn total_space(&self, graph: &ReductionGraph) -> (usize, Vec<(usize, usize)>) {
        let n = self.degree;
        let mut edges = Vec::with_capacity(graph.edge_count() * n);
        for e in 0..graph.edge_count() {
            let (p, u) = graph.endpoints(e);
            for i in 0..n {
                edges.push((p * n + i, u * n + self.sheets[e][i]));
            }
        }
        (graph.vertex_count() * n, edges)
    }

    /// The projection to the base is a covering: every vertex fiber has
    /// `degree` points and each branch lifts to a perfect matching.
    pub fn is_covering(&self, graph: &ReductionGraph) -> bool {
        let n = self.degree;
        let (count, edges) = self.total_space(graph);
        let mut hits = vec![vec![0usize; count]; graph.edge_count()];
        for (k, &(a, b)) in edges.iter().enumerate() {
            hits[k / n][a] += 1;
            hits[k / n][b] += 1;
        }
        count == graph.vertex_count() * n
            && (0..graph.edge_count()).all(|e| {
                let (p, u) = graph.endpoints(e);
                (0..n).all(|i| hits[e][p * n + i] == 1 && hits[e][u * n + i] == 1)
            })
    }

    pub fn is_connected(&self, graph: &ReductionGraph) -> bool {
        let (count, edges) = self.total_space(graph);
        let mut uf = UnionFind::new(count);
        let mut pieces = count;
        for (a, b) in edges {
            if uf.union(a, b) {
                pieces -= 1;
            }
        }
        pieces == 1
    }
}

/// Connected covers of the given degree, one per isomorphism class over the
/// base, relative to the canonical maximal tree.
pub fn enumerate_connected_covers(graph: &ReductionGraph, degree: usize) -> Result<Vec<GraphCover>, GraphError> {
    let tree = maximal_tree(graph)?;
    enumerate_connected_covers_with_tree(graph, &tree, degree)
}

/// Assigns sheet permutations to the non-tree branches, keeps the transitive
/// assignments, and picks the lexicographically least assignment in each
/// orbit under simultaneous relabelling of sheets.
pub fn enumerate_connected_covers_with_tree(
    graph: &ReductionGraph,
    tree: &SpanningTree,
    degree: usize,
) -> Result<Vec<GraphCover>, GraphError> {
    graph.check()?;
    if !tree.fits(graph) {
        return Err(GraphError::NotASpanningTree("tree does not belong to this graph".into()));
    }
    if degree == 0 {
        return Err(GraphError::ZeroDegree);
    }
    if degree > MAX_COVER_DEGREE {
        return Err(GraphError::TooLarge(format!("cover degree {degree} exceeds {MAX_COVER_DEGREE}")));
    }
    let free = tree.complement(graph);
    let sym = FiniteGroup::symmetric(degree).expect("degree is within the supported range");
    let perms = permutations_lex(degree);
    let base = perms.len();
    let total = (0..free.len()).try_fold(1usize, |acc, _| acc.checked_mul(base).filter(|&t| t <= MAX_ASSIGNMENTS));
    let Some(total) = total else {
        return Err(GraphError::TooLarge(format!("{base}^{} sheet assignments", free.len())));
    };

    let decode = |mut code: usize| -> Vec<usize> {
        let mut digits = vec![0; free.len()];
        for slot in digits.iter_mut().rev() {
            *slot = code % base;
            code /= base;
        }
        digits
    };
    let encode = |digits: &[usize]| digits.iter().fold(0usize, |acc, &d| acc * base + d);

    let mut seen = vec![false; total];
    let mut covers = Vec::new();
    for code in 0..total {
        if seen[code] {
            continue;
        }
        let tuple = decode(code);
        for sigma in sym.elements() {
            let conj: Vec<usize> = tuple.iter().map(|&t| sym.conj(sigma, t)).collect();
            seen[encode(&conj)] = true;
        }
        if !is_transitive(degree, tuple.iter().map(|&t| perms[t].as_slice())) {
            continue;
        }
        let mut sheets = vec![(0..degree).collect::<Vec<_>>(); graph.edge_count()];
        for (&e, &t) in free.iter().zip(&tuple) {
            sheets[e] = perms[t].clone();
        }
        covers.push(GraphCover { degree, tree: tree.clone(), sheets });
    }
    Ok(covers)
}

fn is_transitive<'a>(n: usize, gens: impl Iterator<Item = &'a [usize]> + Clone) -> bool {
    let mut reached = vec![false; n];
    reached[0] = true;
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        for g in gens.clone() {
            let j = g[i];
            if !reached[j] {
                reached[j] = true;
                stack.push(j);
            }
        }
    }
    reached.into_iter().all(|r| r)
}

#[cfg(test)]
mod tests {
    use super::super::samples::*;
    use super::super::all_spanning_trees;
    use super::*;

    #[test]
    fn trees_have_no_connected_double_covers() {
        assert!(enumerate_connected_covers(&diamond(), 2).unwrap().is_empty());
        assert!(enumerate_connected_covers(&path(), 2).unwrap().is_empty());
        assert_eq!(enumerate_connected_covers(&path(), 1).unwrap().len(), 1);
    }

    #[test]
    fn circle_has_one_connected_cover_per_degree() {
        let g = circle();
        for n in 1..=MAX_COVER_DEGREE {
            let covers = enumerate_connected_covers(&g, n).unwrap();
            assert_eq!(covers.len(), 1, "degree {n}");
            assert!(covers[0].is_connected(&g));
            assert!(covers[0].is_covering(&g));
        }
    }

    #[test]
    fn theta_has_three_connected_double_covers() {
        let g = theta();
        let covers = enumerate_connected_covers(&g, 2).unwrap();
        assert_eq!(covers.len(), 3);
        assert!(covers.iter().all(|c| c.is_connected(&g) && c.is_covering(&g)));
    }

    #[test]
    fn counts_independent_of_tree() {
        for g in [circle(), theta()] {
            for n in 1..=3 {
                let counts: Vec<usize> = all_spanning_trees(&g)
                    .unwrap()
                    .iter()
                    .map(|t| enumerate_connected_covers_with_tree(&g, t, n).unwrap().len())
                    .collect();
                assert!(counts.windows(2).all(|w| w[0] == w[1]), "{counts:?}");
            }
        }
    }

    fn factorial(n: u64) -> u64 {
        (1..=n).product()
    }

    /// Hall's recursion for the number of index-`n` subgroups of a free group of rank `r`.
    fn hall(n: u64, r: u32) -> u64 {
        let mut a = vec![0u64; n as usize + 1];
        for m in 1..=n {
            let mut v = m * factorial(m).pow(r - 1);
            for k in 1..m {
                v -= factorial(m - k).pow(r - 1) * a[k as usize];
            }
            a[m as usize] = v;
        }
        a[n as usize]
    }

    /// Canonical form by minimizing over every sheet relabelling. Also returns
    /// the number of transitive assignments.
    fn brute_count(graph: &ReductionGraph, n: usize) -> (usize, u64) {
        let perms = permutations_lex(n);
        let free = maximal_tree(graph).unwrap().complement(graph);
        let mut classes = std::collections::BTreeSet::new();
        let mut tuple = vec![0usize; free.len()];
        let mut transitive = 0;
        loop {
            let gens: Vec<&[usize]> = tuple.iter().map(|&t| perms[t].as_slice()).collect();
            if is_transitive(n, gens.iter().copied()) {
                transitive += 1;
                let canon = perms
                    .iter()
                    .map(|s| {
                        gens.iter()
                            .map(|g| {
                                // s g s^-1 as an explicit permutation
                                let mut c = vec![0; n];
                                for i in 0..n {
                                    c[s[i]] = s[g[i]];
                                }
                                c
                            })
                            .collect::<Vec<_>>()
                    })
                    .min()
                    .unwrap();
                classes.insert(canon);
            }
            let Some(i) = (0..tuple.len()).rev().find(|&i| tuple[i] + 1 < perms.len()) else {
                break;
            };
            tuple[i] += 1;
            for t in &mut tuple[i + 1..] {
                *t = 0;
            }
        }
        (classes.len(), transitive)
    }

    #[test]
    fn counts_match_brute_force_and_subgroup_counts() {
        let rank3 = ReductionGraph::from_labels(
            &["P"],
            &["U"],
            &[("e1", "P", "U"), ("e2", "P", "U"), ("e3", "P", "U"), ("e4", "P", "U")],
        );
        for (g, r) in [(circle(), 1), (theta(), 2), (rank3, 3)] {
            for n in 1..=3 {
                let got = enumerate_connected_covers(&g, n).unwrap().len();
                let (classes, transitive) = brute_count(&g, n);
                assert_eq!(got, classes, "rank {r} degree {n}");
                // Transitive actions with sheet 0 marked, up to relabelling fixing 0,
                // are the index-n subgroups.
                assert_eq!(transitive / factorial(n as u64 - 1), hall(n as u64, r), "rank {r} degree {n}");
            }
        }
    }

    #[test]
    fn degree_errors() {
        assert_eq!(enumerate_connected_covers(&circle(), 0), Err(GraphError::ZeroDegree));
        assert!(matches!(enumerate_connected_covers(&circle(), 6), Err(GraphError::TooLarge(_))));
    }
}
