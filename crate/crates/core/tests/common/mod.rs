#![allow(dead_code)]
//! Shared generators and brute-force oracles for the integration tests.
//! Nothing here calls the library's own counting routines.

use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use patchwork::gog::{EdgeMapMode, GraphOfGroups};
use patchwork::graph::{Branch, ReductionGraph, SpanningTree};
use patchwork::group::{homs_between, Elem, FiniteGroup, GroupHom};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn arc(g: FiniteGroup) -> Arc<FiniteGroup> {
    Arc::new(g)
}

/// Groups of order at most 8.
pub fn vertex_pool() -> Vec<Arc<FiniteGroup>> {
    let z = |n| arc(FiniteGroup::cyclic(n).unwrap());
    vec![
        arc(FiniteGroup::trivial()),
        z(2),
        z(3),
        z(4),
        arc(FiniteGroup::product(&FiniteGroup::cyclic(2).unwrap(), &FiniteGroup::cyclic(2).unwrap()).unwrap()),
        z(5),
        z(6),
        arc(FiniteGroup::symmetric(3).unwrap()),
        z(7),
        z(8),
        arc(FiniteGroup::dihedral(4).unwrap()),
        arc(FiniteGroup::product(&FiniteGroup::cyclic(2).unwrap(), &FiniteGroup::cyclic(4).unwrap()).unwrap()),
    ]
}

/// Groups of order at most 4.
pub fn edge_pool() -> Vec<Arc<FiniteGroup>> {
    vertex_pool().into_iter().filter(|g| g.order() <= 4).collect()
}

pub fn test_groups() -> Vec<Arc<FiniteGroup>> {
    vec![
        arc(FiniteGroup::cyclic(2).unwrap()),
        arc(FiniteGroup::cyclic(3).unwrap()),
        arc(FiniteGroup::symmetric(3).unwrap()),
    ]
}

fn injective_homs(source: &Arc<FiniteGroup>, target: &Arc<FiniteGroup>) -> Vec<GroupHom> {
    homs_between(source, target).into_iter().filter(GroupHom::is_injective).collect()
}

/// A connected bipartite graph on at most `max_vertices` vertices with
/// `extra` branches beyond a spanning tree.
pub fn random_graph(rng: &mut ChaCha8Rng, max_vertices: usize, extra: usize) -> ReductionGraph {
    let n = rng.gen_range(2..=max_vertices);
    // vertex 0 is a point, vertex 1 a component, the rest random
    let mut kinds = vec![true, false];
    for _ in 2..n {
        kinds.push(rng.gen_bool(0.5));
    }
    let name = |i: usize, kinds: &[bool]| if kinds[i] { format!("P{i}") } else { format!("U{i}") };
    let mut pairs = vec![(0usize, 1usize)];
    for i in 2..n {
        let opposite: Vec<usize> = (0..i).filter(|&j| kinds[j] != kinds[i]).collect();
        let j = *opposite.choose(rng).unwrap();
        pairs.push((i, j));
    }
    let points: Vec<usize> = (0..n).filter(|&i| kinds[i]).collect();
    let comps: Vec<usize> = (0..n).filter(|&i| !kinds[i]).collect();
    for _ in 0..extra {
        pairs.push((*points.choose(rng).unwrap(), *comps.choose(rng).unwrap()));
    }
    let branches = pairs
        .iter()
        .enumerate()
        .map(|(k, &(a, b))| Branch::new(&format!("e{}", k + 1), &name(a, &kinds), &name(b, &kinds)))
        .collect();
    ReductionGraph::new(
        points.iter().map(|&i| name(i, &kinds)).collect(),
        comps.iter().map(|&i| name(i, &kinds)).collect(),
        branches,
    )
}

/// Random vertex groups and injective edge maps on `graph`.
pub fn random_groups(rng: &mut ChaCha8Rng, graph: ReductionGraph) -> GraphOfGroups {
    let vpool = vertex_pool();
    let epool = edge_pool();
    let vertex_groups: Vec<_> = (0..graph.vertex_count()).map(|_| vpool.choose(rng).unwrap().clone()).collect();
    let mut edge_groups = Vec::new();
    let mut point_maps = Vec::new();
    let mut component_maps = Vec::new();
    for e in 0..graph.edge_count() {
        let (p, u) = graph.endpoints(e);
        let options: Vec<(Arc<FiniteGroup>, Vec<GroupHom>, Vec<GroupHom>)> = epool
            .iter()
            .map(|h| (h.clone(), injective_homs(h, &vertex_groups[p]), injective_homs(h, &vertex_groups[u])))
            .filter(|(_, a, b)| !a.is_empty() && !b.is_empty())
            .collect();
        let (h, a, b) = options.choose(rng).unwrap();
        edge_groups.push(h.clone());
        point_maps.push(a.choose(rng).unwrap().clone());
        component_maps.push(b.choose(rng).unwrap().clone());
    }
    GraphOfGroups::new(graph, vertex_groups, edge_groups, point_maps, component_maps, EdgeMapMode::Strict).unwrap()
}

pub fn random_gog(rng: &mut ChaCha8Rng, max_vertices: usize, extra: usize) -> GraphOfGroups {
    let graph = random_graph(rng, max_vertices, extra);
    random_groups(rng, graph)
}

fn for_each_product(sizes: &[usize], visit: &mut dyn FnMut(&[usize])) {
    let mut idx = vec![0; sizes.len()];
    if sizes.contains(&0) {
        return;
    }
    loop {
        visit(&idx);
        let Some(i) = (0..sizes.len()).rev().find(|&i| idx[i] + 1 < sizes[i]) else { return };
        idx[i] += 1;
        for x in &mut idx[i + 1..] {
            *x = 0;
        }
    }
}

fn all_vertex_homs(gog: &GraphOfGroups, target: &Arc<FiniteGroup>) -> Vec<Vec<GroupHom>> {
    gog.vertex_groups().iter().map(|g| homs_between(g, target)).collect()
}

/// Families of vertex homs that agree exactly on every edge group.
pub fn oracle_naive_limit_count(gog: &GraphOfGroups, target: &Arc<FiniteGroup>) -> usize {
    oracle_hom_count(gog, target, &[], true)
}

/// Homs out of the fundamental group: vertex homs plus one `c_e` per branch
/// with `f_U(α_U g) = c_e f_P(α_P g) c_e⁻¹`, and `c_e = 1` on the tree.
/// With `exact_everywhere` every branch is treated as a tree branch.
pub fn oracle_hom_count(gog: &GraphOfGroups, target: &Arc<FiniteGroup>, tree: &[usize], exact_everywhere: bool) -> usize {
    let graph = gog.graph();
    let homs = all_vertex_homs(gog, target);
    let sizes: Vec<usize> = homs.iter().map(Vec::len).collect();
    let mut total = 0;
    for_each_product(&sizes, &mut |idx| {
        let mut product = 1;
        for e in 0..graph.edge_count() {
            let (p, u) = graph.endpoints(e);
            let fp = &homs[p][idx[p]];
            let fu = &homs[u][idx[u]];
            let ok = |c: Elem| {
                gog.edge_group(e).elements().all(|g| {
                    let lhs = fu.apply(gog.component_map(e).apply(g));
                    let rhs = conj(target, c, fp.apply(gog.point_map(e).apply(g)));
                    lhs == rhs
                })
            };
            let n = if exact_everywhere || tree.contains(&e) {
                usize::from(ok(target.identity()))
            } else {
                target.elements().filter(|&c| ok(c)).count()
            };
            product *= n;
            if product == 0 {
                break;
            }
        }
        total += product;
    });
    total
}

pub fn oracle_tree_hom_count(gog: &GraphOfGroups, target: &Arc<FiniteGroup>, tree: &SpanningTree) -> usize {
    oracle_hom_count(gog, target, tree.edges(), false)
}

/// Conjugates `x` by `g` in `target` using only its multiplication.
fn conj(target: &FiniteGroup, g: Elem, x: Elem) -> Elem {
    target.mul(target.mul(g, x), target.inv(g))
}

pub fn compose_perm(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

pub fn invert_perm(a: &[usize]) -> Vec<usize> {
    let mut out = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        out[x] = i;
    }
    out
}

pub fn all_perms(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    heap_permute(n, &mut cur, &mut out);
    out.sort();
    out
}

fn heap_permute(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(cur.clone());
        return;
    }
    for i in 0..k {
        heap_permute(k - 1, cur, out);
        if k.is_multiple_of(2) {
            cur.swap(i, k - 1);
        } else {
            cur.swap(0, k - 1);
        }
    }
}

/// Connected degree-`n` covers up to isomorphism: a permutation on every
/// branch (no tree gauge), connectivity by breadth-first search on the total
/// space, classes under independent relabelling of the sheets over each
/// vertex, `σ_e ↦ φ_U σ_e φ_P⁻¹`.
pub fn oracle_connected_covers(graph: &ReductionGraph, n: usize) -> usize {
    let perms = all_perms(n);
    let m = graph.edge_count();
    let v = graph.vertex_count();
    let mut seen: BTreeSet<Vec<Vec<usize>>> = BTreeSet::new();
    let mut classes = 0;
    for_each_product(&vec![perms.len(); m], &mut |idx| {
        let sheets: Vec<Vec<usize>> = idx.iter().map(|&i| perms[i].clone()).collect();
        if seen.contains(&sheets) || !total_space_connected(graph, &sheets, n) {
            return;
        }
        classes += 1;
        for_each_product(&vec![perms.len(); v], &mut |phi| {
            let moved: Vec<Vec<usize>> = (0..m)
                .map(|e| {
                    let (p, u) = graph.endpoints(e);
                    compose_perm(&compose_perm(&perms[phi[u]], &sheets[e]), &invert_perm(&perms[phi[p]]))
                })
                .collect();
            seen.insert(moved);
        });
    });
    classes
}

fn total_space_connected(graph: &ReductionGraph, sheets: &[Vec<usize>], n: usize) -> bool {
    let v = graph.vertex_count();
    let mut seen = vec![false; v * n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(x) = queue.pop_front() {
        let (vert, sheet) = (x / n, x % n);
        for e in 0..graph.edge_count() {
            let (p, u) = graph.endpoints(e);
            let next = if vert == p {
                Some(u * n + sheets[e][sheet])
            } else if vert == u {
                Some(p * n + invert_perm(&sheets[e])[sheet])
            } else {
                None
            };
            if let Some(y) = next {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    seen.iter().all(|&b| b)
}

/// `W³ + W² + W - c²` in `F_p[Y]/(Y³ - Y - c)` with `W = Y²`, for a given
/// `c ∈ F_p`. Returns the coefficients of `1, Y, Y²`.
pub fn cubic_identity_residue(p: u64, c: u64) -> [u64; 3] {
    let mul = |a: [u64; 3], b: [u64; 3]| -> [u64; 3] {
        let mut full = [0u64; 5];
        for i in 0..3 {
            for j in 0..3 {
                full[i + j] = (full[i + j] + a[i] * b[j]) % p;
            }
        }
        // Y^4 = Y^2 + cY, Y^3 = Y + c
        for k in (3..5).rev() {
            let x = full[k];
            full[k] = 0;
            full[k - 2] = (full[k - 2] + x) % p;
            full[k - 3] = (full[k - 3] + x * c) % p;
        }
        [full[0], full[1], full[2]]
    };
    let w = [0, 0, 1];
    let w2 = mul(w, w);
    let w3 = mul(w2, w);
    let mut out = [0; 3];
    for i in 0..3 {
        out[i] = (w3[i] + w2[i] + w[i]) % p;
    }
    out[0] = (out[0] + p * p - c * c % p) % p;
    out
}


pub fn input_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../inputs").join(name)
}

/// `(command, input file, extra flags, expected exit status)` covering
/// every command.
pub fn cli_cases() -> Vec<(&'static str, Option<&'static str>, Vec<&'static str>, i32)> {
    vec![
        ("graph-check", Some("circle.json"), vec![], 0),
        ("graph-tree", Some("circle.json"), vec!["--all-trees"], 0),
        ("graph-rank", Some("theta.json"), vec![], 0),
        ("graph-covers", Some("theta.json"), vec!["--degree", "2"], 0),
        ("gog-presentation", Some("amalgam.json"), vec![], 0),
        ("gog-homs", Some("amalgam.json"), vec!["--all-trees"], 0),
        ("gog-verify", Some("circle.json"), vec!["--group", "Z/2"], 0),
        ("gog-verify", Some("amalgam.json"), vec![], 0),
        ("torsor-verify", Some("amalgam.json"), vec![], 0),
        ("pushout-verify", Some("circle.json"), vec!["--group", "S3"], 0),
        ("descent-as", Some("as_finite.json"), vec![], 0),
        ("descent-as", Some("as_rational.json"), vec![], 0),
        ("descent-as", Some("as_finite.json"), vec!["--support-bound", "0"], 2),
        ("descent-kummer", Some("kummer_lacunary.json"), vec![], 0),
        ("descent-kummer", Some("kummer_base.json"), vec![], 1),
        ("descent-example29", None, vec![], 0),
        ("descent-example29", None, vec!["--characteristic", "5"], 1),
        ("index-bound", Some("amalgam.json"), vec![], 0),
        ("export-dot", Some("theta.json"), vec![], 0),
    ]
}

pub struct CliRun {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CliRun {
    pub fn digest(&self) -> Option<&str> {
        self.stdout.lines().find_map(|l| l.strip_prefix("digest: "))
    }
}

pub fn run_cli(args: &[&str], stdin: Option<&str>) -> CliRun {
    use std::io::Write;
    use std::process::{Command, Stdio};
    let mut child = Command::new(env!("CARGO_BIN_EXE_patchwork"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    let out = child.wait_with_output().unwrap();
    CliRun {
        status: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

pub fn run_case(cmd: &str, input: Option<&str>, flags: &[&str]) -> CliRun {
    let path = input.map(|f| input_path(f).to_string_lossy().into_owned());
    let mut args = vec![cmd];
    if let Some(p) = &path {
        args.push(p);
    }
    args.extend_from_slice(flags);
    run_cli(&args, None)
}
