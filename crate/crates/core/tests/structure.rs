mod common;

use std::collections::HashMap;

use common::{arb_tree, prufer_tree, random_perm, rooted_brute};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rootfinder::isomorphism::{log_aut_total_naive, orbit_counts_naive, AllRootClasses};
use rootfinder::tree::{ShapeTree, TreeError};
use rootfinder::{aut_log, canonical_code, orbit_count, split_sizes, subtree_sizes, GrowthTree};

/// Union-find verdict on whether an edge list is a tree on `1..=max label`.
fn is_tree_by_union_find(edges: &[(usize, usize)]) -> bool {
    let Some(n) = edges.iter().map(|&(a, b)| a.max(b)).max() else {
        return false;
    };
    if edges.len() != n - 1 {
        return false;
    }
    let mut root: Vec<usize> = (0..=n).collect();
    fn find(root: &mut [usize], mut x: usize) -> usize {
        while root[x] != x {
            root[x] = root[root[x]];
            x = root[x];
        }
        x
    }
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut root, a), find(&mut root, b));
        if ra == rb {
            return false;
        }
        root[ra] = rb;
    }
    true
}

/// All permutations of `1..=n` (slot 0 fixed).
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..=n).collect();
    fn rec(p: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(p, k + 1, out);
            p.swap(k, i);
        }
    }
    rec(&mut p, 1, &mut out);
    out
}

fn edge_key(shape: &ShapeTree, perm: &[usize]) -> Vec<(usize, usize)> {
    let mut e: Vec<_> = shape
        .edges()
        .map(|(a, b)| (perm[a].min(perm[b]), perm[a].max(perm[b])))
        .collect();
    e.sort_unstable();
    e
}

/// Lexicographically least relabeling of `(shape, root)`: equal keys exactly
/// for isomorphic rooted trees.
fn brute_key(shape: &ShapeTree, root: usize, perms: &[Vec<usize>]) -> (usize, Vec<(usize, usize)>) {
    perms.iter().map(|p| (p[root], edge_key(shape, p))).min().unwrap()
}

fn brute_automorphisms(shape: &ShapeTree, root: usize, perms: &[Vec<usize>]) -> usize {
    let base = edge_key(shape, &(0..=shape.n()).collect::<Vec<_>>());
    perms.iter().filter(|p| p[root] == root && edge_key(shape, p) == base).count()
}

fn all_labeled_trees(n: usize) -> Vec<ShapeTree> {
    let total = n.pow((n - 2) as u32);
    (0..total)
        .map(|mut code| {
            let seq: Vec<usize> = (0..n - 2)
                .map(|_| {
                    let x = code % n + 1;
                    code /= n;
                    x
                })
                .collect();
            prufer_tree(n, &seq)
        })
        .collect()
}

#[test]
fn codes_match_permutation_search_on_all_small_trees() {
    for n in 2..=6 {
        let perms = permutations(n);
        let mut by_code = HashMap::new();
        let mut by_key = HashMap::new();
        for shape in all_labeled_trees(n) {
            for u in shape.vertices() {
                let code = canonical_code(&shape, u);
                let key = brute_key(&shape, u, &perms);
                assert_eq!(by_code.entry(code.clone()).or_insert_with(|| key.clone()), &key);
                assert_eq!(by_key.entry(key).or_insert(code.clone()), &code);
            }
        }
        println!("n={n}: {} rooted classes", by_code.len());
    }
}

#[test]
fn forest_and_triangle_are_rejected() {
    assert!(matches!(
        ShapeTree::from_edges(&[(1, 2), (1, 3), (2, 3)]),
        Err(TreeError::CycleOrDisconnected { .. })
    ));
    assert!(matches!(
        ShapeTree::from_edges(&[(1, 2), (3, 4)]),
        Err(TreeError::CycleOrDisconnected { .. })
    ));
    assert!(matches!(ShapeTree::from_edges(&[(1, 1)]), Err(TreeError::SelfLoop(..))));
}

fn arb_edges() -> impl Strategy<Value = Vec<(usize, usize)>> {
    (2usize..8).prop_flat_map(|n| proptest::collection::vec((1..=n, 1..=n), 0..10))
}

proptest! {
    #[test]
    fn build_shape_accepts_exactly_the_trees(edges in arb_edges()) {
        prop_assert_eq!(ShapeTree::from_edges(&edges).is_ok(), is_tree_by_union_find(&edges));
    }

    #[test]
    fn split_sizes_agree_with_rooted_recounts(shape in arb_tree(2, 200)) {
        let n = shape.n();
        let split = split_sizes(&shape);
        for u in shape.vertices() {
            let (_, size) = rooted_brute(&shape, u);
            let mut total = 0;
            for (v, s) in split.around(&shape, u) {
                prop_assert_eq!(s, size[v]);
                prop_assert_eq!(s + split.size(&shape, v, u), n);
                total += s;
            }
            prop_assert_eq!(total, n - 1);
        }
    }

    #[test]
    fn rooted_views_match_breadth_first_search(shape in arb_tree(2, 150), pick in any::<prop::sample::Index>()) {
        let root = pick.index(shape.n()) + 1;
        let view = subtree_sizes(&shape, root);
        let (parent, size) = rooted_brute(&shape, root);
        for v in shape.vertices() {
            prop_assert_eq!(view.down_size(v), size[v]);
            let expected = if v == root { None } else { Some(parent[v]) };
            prop_assert_eq!(view.parent(v), expected);
            let kid_sum: usize = view.children(v).map(|c| view.down_size(c)).sum();
            prop_assert_eq!(view.down_size(v), 1 + kid_sum);
        }
        prop_assert_eq!(view.preorder().len(), shape.n());
        prop_assert!(view.leaves().all(|v| view.child_count(v) == 0));
    }

    #[test]
    fn growth_tree_file_round_trips(parents in (2usize..60).prop_flat_map(|n| {
        (2..=n).map(|i| 1..i).collect::<Vec<_>>()
    })) {
        let t = GrowthTree::from_parents(&parents).unwrap();
        let mut buf = Vec::new();
        t.write_to(&mut buf).unwrap();
        prop_assert_eq!(GrowthTree::parse(std::str::from_utf8(&buf).unwrap()).unwrap(), t);
    }

    #[test]
    fn codes_survive_relabeling(shape in arb_tree(2, 60), seed in any::<u64>()) {
        let perm = random_perm(shape.n(), &mut ChaCha8Rng::seed_from_u64(seed));
        let moved = shape.relabel(&perm);
        for u in shape.vertices() {
            let code = canonical_code(&shape, u);
            prop_assert_eq!(code.vertex_count(), shape.n());
            prop_assert_eq!(&code, &canonical_code(&moved, perm[u]));
        }
    }

    #[test]
    fn aut_and_orbits_match_brute_force(shape in arb_tree(2, 7)) {
        let perms = permutations(shape.n());
        let keys: Vec<_> = shape.vertices().map(|u| brute_key(&shape, u, &perms)).collect();
        let naive = orbit_counts_naive(&shape);
        for u in shape.vertices() {
            let auts = aut_log(&shape, u);
            let view = subtree_sizes(&shape, u);
            for v in shape.vertices() {
                let kids = view.child_count(v);
                let max: f64 = (1..=kids).map(|k| (k as f64).ln()).sum();
                prop_assert!(auts[v] >= 0.0 && auts[v] <= max + 1e-12);
            }
            let total: f64 = auts.iter().sum();
            prop_assert_eq!(total.exp().round() as usize, brute_automorphisms(&shape, u, &perms));
            let orbit = keys.iter().filter(|k| **k == keys[u - 1]).count();
            prop_assert_eq!(orbit_count(&shape, u), orbit);
            prop_assert_eq!(naive[u], orbit);
        }
    }

    #[test]
    fn orbits_partition_the_vertices(shape in arb_tree(2, 120)) {
        let classes = AllRootClasses::compute(&shape);
        let mut seen = HashMap::new();
        for u in shape.vertices() {
            seen.insert(classes.whole_class(u), classes.orbit(u));
        }
        prop_assert_eq!(seen.len(), classes.orbit_representatives());
        prop_assert_eq!(seen.values().sum::<usize>(), shape.n());
    }

    #[test]
    fn aut_grows_by_at_most_the_subtree_size_along_paths(
        shape in arb_tree(2, 50),
        a in any::<prop::sample::Index>(),
        b in any::<prop::sample::Index>(),
    ) {
        let (u, v) = (a.index(shape.n()) + 1, b.index(shape.n()) + 1);
        let at_u = aut_log(&shape, u);
        let at_v = aut_log(&shape, v);
        let view_v = subtree_sizes(&shape, v);
        let (parent_v, _) = rooted_brute(&shape, v);
        let mut w = u;
        loop {
            let bound = (view_v.down_size(w) as f64).ln() + at_u[w];
            prop_assert!(at_v[w] <= bound + 1e-9, "vertex {} on the {}-{} path", w, u, v);
            if w == v {
                break;
            }
            w = parent_v[w];
        }
    }

    #[test]
    fn rerooted_classes_agree_with_per_root_codes(shape in arb_tree(2, 120)) {
        let classes = AllRootClasses::compute(&shape);
        let naive_orbits = orbit_counts_naive(&shape);
        let naive_aut = log_aut_total_naive(&shape);
        let codes: Vec<_> = shape.vertices().map(|u| canonical_code(&shape, u)).collect();
        for u in shape.vertices() {
            prop_assert_eq!(classes.orbit(u), naive_orbits[u]);
            prop_assert!((classes.log_aut_total(u) - naive_aut[u]).abs() <= 1e-9 * naive_aut[u].max(1.0));
            for v in shape.vertices() {
                prop_assert_eq!(
                    classes.code_rank(u).cmp(&classes.code_rank(v)),
                    codes[u - 1].cmp(&codes[v - 1])
                );
            }
        }
    }
}

/// Trees with many symmetries, where random trees rarely go.
fn symmetric_trees() -> Vec<ShapeTree> {
    let mut out = Vec::new();
    // complete binary tree of depth 6
    let e: Vec<_> = (2..128).map(|v| (v / 2, v)).collect();
    out.push(ShapeTree::from_edges(&e).unwrap());
    // spider with six legs of length 4
    let mut e = Vec::new();
    let mut next = 2;
    for _ in 0..6 {
        let mut prev = 1;
        for _ in 0..4 {
            e.push((prev, next));
            prev = next;
            next += 1;
        }
    }
    out.push(ShapeTree::from_edges(&e).unwrap());
    // two stars joined center to center, and a caterpillar of cherries
    let mut e = vec![(1, 2)];
    e.extend((3..=12).map(|v| (1, v)));
    e.extend((13..=22).map(|v| (2, v)));
    out.push(ShapeTree::from_edges(&e).unwrap());
    let mut e = Vec::new();
    for i in 1..10 {
        e.push((i, i + 1));
    }
    let mut next = 11;
    for i in 1..=10 {
        e.push((i, next));
        e.push((next, next + 1));
        e.push((next, next + 2));
        next += 3;
    }
    out.push(ShapeTree::from_edges(&e).unwrap());
    out
}

#[test]
fn rerooted_classes_on_symmetric_trees() {
    for shape in symmetric_trees() {
        let classes = AllRootClasses::compute(&shape);
        let naive_orbits = orbit_counts_naive(&shape);
        let naive_aut = log_aut_total_naive(&shape);
        for u in shape.vertices() {
            assert_eq!(classes.orbit(u), naive_orbits[u]);
            assert!((classes.log_aut_total(u) - naive_aut[u]).abs() <= 1e-9 * naive_aut[u].max(1.0));
        }
    }
    let binary = &symmetric_trees()[0];
    assert_eq!(orbit_count(binary, 1), 1);
    assert_eq!(orbit_count(binary, 64), 64);
    // root of a complete binary tree: Aut = 2^(internal vertices)
    let total: f64 = aut_log(binary, 1).iter().sum();
    assert!((total - 63.0 * 2f64.ln()).abs() < 1e-9);
}
