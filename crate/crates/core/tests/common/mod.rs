#![allow(dead_code)]

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use rootfinder::tree::ShapeTree;
use statrs::distribution::{ChiSquared, ContinuousCDF};

pub fn path(n: usize) -> ShapeTree {
    let e: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
    ShapeTree::from_edges(&e).unwrap()
}

pub fn star(n: usize) -> ShapeTree {
    let e: Vec<_> = (2..=n).map(|i| (1, i)).collect();
    ShapeTree::from_edges(&e).unwrap()
}

/// Edges of the labeled tree with the given Prüfer sequence (entries 1..=n).
pub fn prufer_edges(n: usize, seq: &[usize]) -> Vec<(usize, usize)> {
    assert_eq!(seq.len(), n - 2);
    let mut degree = vec![1usize; n + 1];
    for &x in seq {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &x in seq {
        let leaf = (1..=n).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf, x));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let rest: Vec<_> = (1..=n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

pub fn prufer_tree(n: usize, seq: &[usize]) -> ShapeTree {
    if n == 2 {
        return path(2);
    }
    ShapeTree::from_edges(&prufer_edges(n, seq)).unwrap()
}

/// Uniform labeled trees on `lo..=hi` vertices.
pub fn arb_tree(lo: usize, hi: usize) -> impl Strategy<Value = ShapeTree> {
    (lo..=hi).prop_flat_map(|n| {
        proptest::collection::vec(1..=n, n.saturating_sub(2)).prop_map(move |seq| prufer_tree(n, &seq))
    })
}

pub fn random_tree<R: Rng>(n: usize, rng: &mut R) -> ShapeTree {
    let seq: Vec<usize> = (0..n.saturating_sub(2)).map(|_| rng.random_range(1..=n)).collect();
    prufer_tree(n, &seq)
}

/// Random permutation with slot 0 fixed, as taken by `ShapeTree::relabel`.
pub fn random_perm<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut p: Vec<usize> = (0..=n).collect();
    p[1..].shuffle(rng);
    p
}

/// Parent and subtree size of every vertex when rooted at `root`, by an
/// explicit breadth-first search.
pub fn rooted_brute(shape: &ShapeTree, root: usize) -> (Vec<usize>, Vec<usize>) {
    let n = shape.n();
    let mut parent = vec![0usize; n + 1];
    let mut seen = vec![false; n + 1];
    let mut order = vec![root];
    seen[root] = true;
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        i += 1;
        for w in shape.neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                parent[w] = u;
                order.push(w);
            }
        }
    }
    let mut size = vec![1usize; n + 1];
    size[0] = 0;
    for &v in order.iter().rev() {
        if v != root {
            size[parent[v]] += size[v];
        }
    }
    (parent, size)
}

/// `ln φ(u)` straight from the definition: sum of `ln |subtree|` over v ≠ u.
pub fn log_phi_brute(shape: &ShapeTree, u: usize) -> f64 {
    let (_, size) = rooted_brute(shape, u);
    shape.vertices().filter(|&v| v != u).map(|v| (size[v] as f64).ln()).sum()
}

/// Pearson chi-square p-value for counts against cell probabilities.
pub fn chi_square_p(observed: &[u64], probs: &[f64]) -> f64 {
    assert_eq!(observed.len(), probs.len());
    let total: u64 = observed.iter().sum();
    let stat: f64 = observed
        .iter()
        .zip(probs)
        .map(|(&o, &p)| {
            let e = p * total as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum();
    let dist = ChiSquared::new((observed.len() - 1) as f64).unwrap();
    1.0 - dist.cdf(stat)
}

pub fn relative_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
