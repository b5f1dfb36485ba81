use super::{GraphError, ReductionGraph, UnionFind};

/// Spanning-tree enumeration is refused above this many candidate subsets.
const MAX_TREE_CANDIDATES: u128 = 2_000_000;

/// A spanning tree, as a sorted list of branch indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpanningTree {
    edges: Vec<usize>,
}

impl SpanningTree {
    /// Checks that `edges` spans `graph` and is acyclic.
    pub fn new(graph: &ReductionGraph, mut edges: Vec<usize>) -> Result<Self, GraphError> {
        graph.check()?;
        edges.sort_unstable();
        edges.dedup();
        if let Some(&e) = edges.iter().find(|&&e| e >= graph.edge_count()) {
            return Err(GraphError::NotASpanningTree(format!("branch index {e} out of range")));
        }
        if edges.len() + 1 != graph.vertex_count() {
            return Err(GraphError::NotASpanningTree(format!(
                "{} branches given, a spanning tree needs {}",
                edges.len(),
                graph.vertex_count() - 1
            )));
        }
        let mut uf = UnionFind::new(graph.vertex_count());
        for &e in &edges {
            let (p, u) = graph.endpoints(e);
            if !uf.union(p, u) {
                return Err(GraphError::NotASpanningTree(format!("branch {} closes a cycle", graph.branch_label(e))));
            }
        }
        Ok(SpanningTree { edges })
    }

    pub fn from_labels(graph: &ReductionGraph, labels: &[&str]) -> Result<Self, GraphError> {
        let edges = labels
            .iter()
            .map(|l| graph.branch_index(l).ok_or_else(|| GraphError::NotASpanningTree(format!("unknown branch {l}"))))
            .collect::<Result<_, _>>()?;
        Self::new(graph, edges)
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn contains(&self, e: usize) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// Branches of `graph` outside the tree, in canonical order.
    pub fn complement(&self, graph: &ReductionGraph) -> Vec<usize> {
        (0..graph.edge_count()).filter(|&e| !self.contains(e)).collect()
    }

    pub fn labels<'g>(&self, graph: &'g ReductionGraph) -> Vec<&'g str> {
        self.edges.iter().map(|&e| graph.branch_label(e)).collect()
    }

    /// True when this tree has exactly the right size and endpoints for `graph`.
    pub fn fits(&self, graph: &ReductionGraph) -> bool {
        SpanningTree::new(graph, self.edges.clone()).is_ok_and(|t| t == *self)
    }
}

/// The canonical spanning tree: grown from vertex 0, always adding the
/// least-indexed branch that reaches a new vertex.
pub fn maximal_tree(graph: &ReductionGraph) -> Result<SpanningTree, GraphError> {
    graph.check()?;
    let n = graph.vertex_count();
    let mut reached = vec![false; n];
    reached[0] = true;
    let mut edges = Vec::with_capacity(n - 1);
    while edges.len() + 1 < n {
        let next = (0..graph.edge_count())
            .find(|&e| {
                let (p, u) = graph.endpoints(e);
                reached[p] != reached[u]
            })
            .expect("validated graphs are connected");
        let (p, u) = graph.endpoints(next);
        reached[p] = true;
        reached[u] = true;
        edges.push(next);
    }
    edges.sort_unstable();
    Ok(SpanningTree { edges })
}

/// Every spanning tree, in lexicographic order of edge lists.
pub fn all_spanning_trees(graph: &ReductionGraph) -> Result<Vec<SpanningTree>, GraphError> {
    graph.check()?;
    let m = graph.edge_count();
    let k = graph.vertex_count() - 1;
    let candidates = binomial(m as u128, k as u128);
    if candidates > MAX_TREE_CANDIDATES {
        return Err(GraphError::TooLarge(format!("{candidates} candidate edge subsets")));
    }
    let mut out = Vec::new();
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        let mut uf = UnionFind::new(graph.vertex_count());
        let acyclic = subset.iter().all(|&e| {
            let (p, u) = graph.endpoints(e);
            uf.union(p, u)
        });
        if acyclic {
            out.push(SpanningTree { edges: subset.clone() });
        }
        // Next k-subset in lexicographic order.
        let Some(i) = (0..k).rev().find(|&i| subset[i] < m - k + i) else {
            break;
        };
        subset[i] += 1;
        for j in i + 1..k {
            subset[j] = subset[j - 1] + 1;
        }
    }
    Ok(out)
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::super::samples::*;
    use super::*;

    #[test]
    fn tree_is_its_own_spanning_tree() {
        let g = path();
        assert_eq!(maximal_tree(&g).unwrap().edges(), &[0, 1]);
        assert_eq!(all_spanning_trees(&g).unwrap().len(), 1);
    }

    #[test]
    fn circle_tree_is_first_edge() {
        let g = circle();
        let t = maximal_tree(&g).unwrap();
        assert_eq!(t.labels(&g), ["e1"]);
        assert_eq!(t.complement(&g), [1]);
    }

    #[test]
    fn theta_has_three_spanning_trees() {
        let g = theta();
        assert_eq!(maximal_tree(&g).unwrap().labels(&g), ["e1"]);
        let all = all_spanning_trees(&g).unwrap();
        assert_eq!(all.len(), 3);
        // Brute-force oracle over all edge subsets.
        let mut brute = 0;
        for mask in 0u32..(1 << g.edge_count()) {
            let edges: Vec<usize> = (0..g.edge_count()).filter(|e| mask >> e & 1 == 1).collect();
            if SpanningTree::new(&g, edges).is_ok() {
                brute += 1;
            }
        }
        assert_eq!(brute, 3);
    }

    #[test]
    fn non_tree_edge_count_equals_cycle_rank() {
        for g in [diamond(), circle(), theta(), path()] {
            for t in all_spanning_trees(&g).unwrap() {
                assert_eq!(t.complement(&g).len(), g.cycle_rank().unwrap());
            }
        }
    }

    #[test]
    fn rejects_cycles_and_wrong_sizes() {
        let g = circle();
        assert!(SpanningTree::new(&g, vec![0, 1]).is_err());
        assert!(SpanningTree::new(&g, vec![]).is_err());
        assert!(SpanningTree::from_labels(&g, &["e2"]).is_ok());
        assert!(SpanningTree::from_labels(&g, &["nope"]).is_err());
    }
}
