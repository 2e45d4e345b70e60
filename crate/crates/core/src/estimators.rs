//! Root estimators and confidence-set selection.
//!
//! Every estimator assigns each vertex a score where lower means more likely
//! to be the first vertex:
//!
//! | estimator | score                                                       |
//! |-----------|-------------------------------------------------------------|
//! | `psi`     | size of the largest component left after deleting `u`       |
//! | `phi`     | `ln ∏_{v≠u} |(T,u)_{v↓}|` (inverse rumor centrality)        |
//! | `zeta`    | exact uniform-attachment likelihood objective, log domain   |
//! | `xi`      | exact plane-oriented likelihood objective, log domain       |
//!
//! `psi` and `phi` run in O(n). `zeta` and `xi` need automorphism data for
//! every root; they use the rerooted classes of [`AllRootClasses`] and are
//! cross-checked against a per-root evaluation in the tests.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::generators::ModelSpec;
use crate::isomorphism::{aut_log, orbit_counts_naive, AllRootClasses};
use crate::tree::{split_sizes, subtree_sizes, ShapeTree, Vertex};

/// Scores closer than this (relative, with an absolute floor of one unit) are
/// treated as tied.
pub const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EstimatorError {
    #[error("exact posterior is only defined for ua and pa, got {0}")]
    UnsupportedModel(ModelSpec),
    #[error("unknown estimator {0:?}, expected psi, phi, zeta or xi")]
    UnknownEstimator(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Estimator {
    Psi,
    Phi,
    Zeta,
    Xi,
}

impl Estimator {
    pub const ALL: [Estimator; 4] = [Estimator::Psi, Estimator::Phi, Estimator::Zeta, Estimator::Xi];

    pub fn name(&self) -> &'static str {
        match self {
            Estimator::Psi => "psi",
            Estimator::Phi => "phi",
            Estimator::Zeta => "zeta",
            Estimator::Xi => "xi",
        }
    }

    /// Whether the estimator needs per-root automorphism data.
    pub fn is_exact_likelihood(&self) -> bool {
        matches!(self, Estimator::Zeta | Estimator::Xi)
    }

    pub fn scores(&self, shape: &ShapeTree) -> ScoreVector {
        match self {
            Estimator::Psi => psi_scores(shape),
            Estimator::Phi => phi_scores(shape),
            Estimator::Zeta => zeta_scores(shape),
            Estimator::Xi => xi_scores(shape),
        }
    }
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Estimator {
    type Err = EstimatorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Estimator::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| EstimatorError::UnknownEstimator(s.to_string()))
    }
}

/// Per-vertex scores; lower is more root-like.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector {
    estimator: Estimator,
    // slot 0 unused
    values: Vec<f64>,
}

impl ScoreVector {
    pub fn estimator(&self) -> Estimator {
        self.estimator
    }

    pub fn n(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, v: Vertex) -> f64 {
        self.values[v]
    }

    /// `(vertex, score)` pairs in vertex order.
    pub fn iter(&self) -> impl Iterator<Item = (Vertex, f64)> + '_ {
        self.values.iter().copied().enumerate().skip(1)
    }

    /// Vertices with the minimal score (up to [`TIE_TOLERANCE`]).
    pub fn argmin(&self) -> Vec<Vertex> {
        let best = self.values[1..].iter().copied().fold(f64::INFINITY, f64::min);
        self.iter()
            .filter(|&(_, s)| tied(s, best))
            .map(|(v, _)| v)
            .collect()
    }
}

fn tied(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_TOLERANCE * a.abs().max(b.abs()).max(1.0)
}

/// `ψ(u)`: the largest `size(u→v)` over neighbors `v`.
pub fn psi_scores(shape: &ShapeTree) -> ScoreVector {
    let split = split_sizes(shape);
    let values = std::iter::once(0.0)
        .chain(
            shape
                .vertices()
                .map(|u| split.around(shape, u).map(|(_, s)| s).max().unwrap_or(0) as f64),
        )
        .collect();
    ScoreVector {
        estimator: Estimator::Psi,
        values,
    }
}

/// `ln φ(u)` for every vertex, by rerooting from vertex 1:
/// `ln φ(c) = ln φ(p) + ln(n − s) − ln s` with `s = size(p→c)`.
pub fn phi_scores(shape: &ShapeTree) -> ScoreVector {
    ScoreVector {
        estimator: Estimator::Phi,
        values: log_phi(shape),
    }
}

fn log_phi(shape: &ShapeTree) -> Vec<f64> {
    let n = shape.n();
    let view = subtree_sizes(shape, 1);
    let mut values = vec![0.0; n + 1];
    values[1] = shape
        .vertices()
        .skip(1)
        .map(|v| (view.down_size(v) as f64).ln())
        .sum();
    for c in view.preorder().skip(1) {
        let p = view.parent(c).expect("non-root has a parent");
        let s = view.down_size(c) as f64;
        values[c] = values[p] + (n as f64 - s).ln() - s.ln();
    }
    values
}

/// `ln ζ(u) = ln Ā(u) + Σ_{v non-leaf} (ln |(T,u)_{v↓}| + ln Aut(v,(T,u)))`.
pub fn zeta_scores(shape: &ShapeTree) -> ScoreVector {
    ScoreVector {
        estimator: Estimator::Zeta,
        values: log_zeta(shape),
    }
}

/// `ln ξ(u) = ln ζ(u) − ln d(u)`.
pub fn xi_scores(shape: &ShapeTree) -> ScoreVector {
    let mut values = log_zeta(shape);
    for u in shape.vertices() {
        values[u] -= (shape.degree(u) as f64).ln();
    }
    ScoreVector {
        estimator: Estimator::Xi,
        values,
    }
}

fn log_zeta(shape: &ShapeTree) -> Vec<f64> {
    let classes = AllRootClasses::compute(shape);
    let ln_n = (shape.n() as f64).ln();
    let mut values = log_phi(shape);
    for u in shape.vertices() {
        // φ omits the root's own size n; ζ includes it.
        values[u] += ln_n + (classes.orbit(u) as f64).ln() + classes.log_aut_total(u);
    }
    values
}

/// ζ evaluated root by root with a fresh rooted pass each time. O(n² log n);
/// the reference for [`zeta_scores`].
pub fn zeta_scores_naive(shape: &ShapeTree) -> ScoreVector {
    let orbits = orbit_counts_naive(shape);
    let mut values = vec![0.0; shape.n() + 1];
    for u in shape.vertices() {
        let view = subtree_sizes(shape, u);
        let aut = aut_log(shape, u);
        values[u] = (orbits[u] as f64).ln()
            + view
                .preorder()
                .filter(|&v| view.child_count(v) > 0)
                .map(|v| (view.down_size(v) as f64).ln() + aut[v])
                .sum::<f64>();
    }
    ScoreVector {
        estimator: Estimator::Zeta,
        values,
    }
}

/// ξ from [`zeta_scores_naive`].
pub fn xi_scores_naive(shape: &ShapeTree) -> ScoreVector {
    let mut z = zeta_scores_naive(shape);
    for u in shape.vertices() {
        z.values[u] -= (shape.degree(u) as f64).ln();
    }
    z.estimator = Estimator::Xi;
    z
}

/// The `K` vertices an estimator reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfidenceSet {
    pub k: usize,
    /// Ascending by score, `min(k, n)` entries.
    pub vertices: Vec<Vertex>,
}

impl ConfidenceSet {
    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.contains(&v)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Picks the `k` lowest-scoring vertices.
///
/// Ties (see [`TIE_TOLERANCE`]) are ordered by the canonical code of the
/// rooted view and then by label, so the result only depends on labels among
/// vertices whose rooted views are isomorphic. Code order comes from
/// [`AllRootClasses::code_rank`], computed once if any tie group reaches into
/// the first `k` positions.
pub fn select_smallest(shape: &ShapeTree, scores: &ScoreVector, k: usize) -> ConfidenceSet {
    assert!(k >= 1, "confidence set size must be positive");
    assert_eq!(shape.n(), scores.n(), "scores belong to a different tree");
    let n = shape.n();
    let take = k.min(n);
    let mut order: Vec<Vertex> = shape.vertices().collect();
    order.sort_unstable_by(|&a, &b| scores.get(a).total_cmp(&scores.get(b)).then(a.cmp(&b)));

    let mut classes: Option<AllRootClasses> = None;
    let mut start = 0;
    while start < take {
        let mut end = start + 1;
        while end < n && tied(scores.get(order[end - 1]), scores.get(order[end])) {
            end += 1;
        }
        if end - start > 1 {
            let classes = classes.get_or_insert_with(|| AllRootClasses::compute(shape));
            let mut group: Vec<_> = order[start..end]
                .iter()
                .map(|&v| (classes.code_rank(v), v))
                .collect();
            group.sort_unstable();
            for (slot, (_, v)) in order[start..end].iter_mut().zip(group) {
                *slot = v;
            }
        }
        start = end;
    }
    order.truncate(take);
    ConfidenceSet { k, vertices: order }
}

/// Posterior probability that each vertex is the first vertex, given the
/// shape: proportional to `1/ζ` under uniform attachment and `1/ξ` under
/// preferential attachment. Slot 0 is unused and zero.
pub fn root_posterior(shape: &ShapeTree, model: ModelSpec) -> Result<Vec<f64>, EstimatorError> {
    let scores = match model.canonical() {
        ModelSpec::UniformAttachment => zeta_scores(shape),
        ModelSpec::PreferentialAttachment => xi_scores(shape),
        other => return Err(EstimatorError::UnsupportedModel(other)),
    };
    let min = scores.values[1..].iter().copied().fold(f64::INFINITY, f64::min);
    let mut p = vec![0.0; shape.n() + 1];
    let mut total = 0.0;
    for (u, s) in scores.iter() {
        p[u] = (min - s).exp();
        total += p[u];
    }
    for x in &mut p[1..] {
        *x /= total;
    }
    Ok(p)
}
