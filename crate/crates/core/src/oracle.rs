//! Exact ground truth for small trees.
//!
//! Everything here trades speed for certainty: trees are enumerated
//! exhaustively, counts are big integers, posteriors are exact rationals.
//! The module also hosts Monte Carlo validators for the tail bounds that
//! underpin the estimators' guarantees, and the named check suites run by
//! `rootfinder verify`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use thiserror::Error;

use crate::estimators::root_posterior;
use crate::generators::{ModelSpec, RngStream};
use crate::isomorphism::{canonical_code, child_multiplicities, orbit_counts_naive, CanonicalCode};
use crate::tree::{subtree_sizes, GrowthTree, ShapeTree, Vertex};

/// Exact non-negative integer.
pub type ExactCount = BigUint;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("n = {n} is above the enumeration limit {max}")]
    TooLarge { n: usize, max: usize },
    #[error("n = {0} is below 2")]
    TooSmall(usize),
    #[error("{numerator} is not divisible by {denominator}")]
    NonIntegerResult {
        numerator: BigUint,
        denominator: BigUint,
    },
    #[error("threshold {t} outside ({lo}, {hi})")]
    BadT { t: f64, lo: f64, hi: f64 },
    #[error("partition vector must have a positive total")]
    EmptyPartition,
    #[error("need at least {min} trials, got {got}")]
    TooFewTrials { got: usize, min: usize },
    #[error("exact posterior is only defined for ua and pa, got {0}")]
    UnsupportedModel(ModelSpec),
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
}

pub const MAX_RECURSIVE_N: usize = 9;
pub const MAX_PLANE_N: usize = 8;
pub const MAX_POSTERIOR_UA_N: usize = 8;
pub const MAX_POSTERIOR_PA_N: usize = 7;
pub const MIN_TAIL_TRIALS: usize = 10_000;

fn check_range(n: usize, max: usize) -> Result<(), OracleError> {
    if n < 2 {
        Err(OracleError::TooSmall(n))
    } else if n > max {
        Err(OracleError::TooLarge { n, max })
    } else {
        Ok(())
    }
}

pub fn factorial(n: usize) -> BigUint {
    (2..=n as u64).map(BigUint::from).product::<BigUint>()
}

/// `k!! = k · (k − 2) · …`, ending at 1 or 2; `0!! = 1`.
pub fn double_factorial(k: usize) -> BigUint {
    (1..=k as u64).rev().step_by(2).map(BigUint::from).product::<BigUint>()
}

/// Every recursive tree on `n` vertices, each exactly once, streamed by
/// odometer over the parent array.
pub struct RecursiveTrees {
    parents: Vec<Vertex>,
    done: bool,
}

/// All `(n − 1)!` recursive trees on `n` vertices, `2 ≤ n ≤ 9`.
pub fn enumerate_recursive(n: usize) -> Result<RecursiveTrees, OracleError> {
    check_range(n, MAX_RECURSIVE_N)?;
    Ok(RecursiveTrees {
        parents: vec![1; n - 1],
        done: false,
    })
}

impl Iterator for RecursiveTrees {
    type Item = GrowthTree;

    fn next(&mut self) -> Option<GrowthTree> {
        if self.done {
            return None;
        }
        let tree = GrowthTree::from_parents(&self.parents).expect("odometer keeps parent < child");
        // parents[k] belongs to vertex k + 2 and ranges over 1..=k + 1
        match (0..self.parents.len()).rev().find(|&k| self.parents[k] < k + 1) {
            Some(k) => {
                self.parents[k] += 1;
                self.parents[k + 1..].iter_mut().for_each(|p| *p = 1);
            }
            None => self.done = true,
        }
        Some(tree)
    }
}

/// A recursive tree together with an ordering of every vertex's children.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneTree {
    pub tree: GrowthTree,
    /// `children[v]` in plane order; slot 0 empty.
    pub children: Vec<Vec<Vertex>>,
}

/// Every plane-oriented recursive tree on `n` vertices. Vertex `v` enters
/// one of the `2v − 3` gaps between (or around) the existing children lists.
pub struct PlaneTrees {
    n: usize,
    // slot[v - 2] ∈ 0..2v - 3 for v = 2..=n
    slot: Vec<usize>,
    done: bool,
}

/// All `(2n − 3)!!` plane-oriented recursive trees, `2 ≤ n ≤ 8`.
pub fn enumerate_plane_recursive(n: usize) -> Result<PlaneTrees, OracleError> {
    check_range(n, MAX_PLANE_N)?;
    Ok(PlaneTrees {
        n,
        slot: vec![0; n - 1],
        done: false,
    })
}

impl PlaneTrees {
    fn decode(&self) -> PlaneTree {
        let mut children: Vec<Vec<Vertex>> = vec![Vec::new(); self.n + 1];
        let mut parents = Vec::with_capacity(self.n - 1);
        for v in 2..=self.n {
            let mut s = self.slot[v - 2];
            let host = (1..v)
                .find(|&u| {
                    let gaps = children[u].len() + 1;
                    if s < gaps {
                        true
                    } else {
                        s -= gaps;
                        false
                    }
                })
                .expect("slot index within the gap count");
            children[host].insert(s, v);
            parents.push(host);
        }
        PlaneTree {
            tree: GrowthTree::from_parents(&parents).expect("hosts precede arrivals"),
            children,
        }
    }
}

impl Iterator for PlaneTrees {
    type Item = PlaneTree;

    fn next(&mut self) -> Option<PlaneTree> {
        if self.done {
            return None;
        }
        let tree = self.decode();
        let gaps = |k: usize| 2 * (k + 2) - 3;
        match (0..self.slot.len()).rev().find(|&k| self.slot[k] + 1 < gaps(k)) {
            Some(k) => {
                self.slot[k] += 1;
                self.slot[k + 1..].iter_mut().for_each(|s| *s = 0);
            }
            None => self.done = true,
        }
        Some(tree)
    }
}

fn exact_div(numerator: BigUint, denominator: BigUint) -> Result<BigUint, OracleError> {
    if (&numerator % &denominator).is_zero() {
        Ok(numerator / denominator)
    } else {
        Err(OracleError::NonIntegerResult {
            numerator,
            denominator,
        })
    }
}

/// `∏_{v non-leaf} |T_{v↓}| · Aut(v, T)` for `(shape, root)`.
fn embedding_denominator(shape: &ShapeTree, root: Vertex) -> BigUint {
    let view = subtree_sizes(shape, root);
    let mult = child_multiplicities(shape, root);
    let mut d = BigUint::one();
    for v in shape.vertices().filter(|&v| view.child_count(v) > 0) {
        d *= BigUint::from(view.down_size(v));
        for &l in &mult[v] {
            d *= factorial(l);
        }
    }
    d
}

/// Number of recursive trees whose rooted shape is `(shape, root)`:
/// `n! / ∏_{v non-leaf} (|T_{v↓}| · Aut(v, T))`.
pub fn embedding_count(shape: &ShapeTree, root: Vertex) -> Result<ExactCount, OracleError> {
    check_range(shape.n(), 20)?;
    exact_div(factorial(shape.n()), embedding_denominator(shape, root))
}

/// Number of plane-oriented recursive trees whose rooted shape is
/// `(shape, root)`: the recursive count times `d(root)! ∏_{v≠root} (d(v) − 1)!`.
pub fn embedding_count_plane(shape: &ShapeTree, root: Vertex) -> Result<ExactCount, OracleError> {
    check_range(shape.n(), 16)?;
    let mut numerator = factorial(shape.n());
    for v in shape.vertices() {
        let orderings = shape.degree(v) - usize::from(v != root);
        numerator *= factorial(orderings);
    }
    exact_div(numerator, embedding_denominator(shape, root))
}

fn normalize(weights: Vec<BigRational>) -> Vec<BigRational> {
    let total = weights.iter().fold(BigRational::zero(), |acc, w| acc + w);
    weights.into_iter().map(|w| w / &total).collect()
}

fn plane_model(model: ModelSpec) -> Result<bool, OracleError> {
    match model.canonical() {
        ModelSpec::UniformAttachment => Ok(false),
        ModelSpec::PreferentialAttachment => Ok(true),
        other => Err(OracleError::UnsupportedModel(other)),
    }
}

/// Exact posterior of the first vertex from the counting formulas:
/// `P(u) ∝ count(T, u) / Ā(u)`, recursive counts under `ua`, plane-oriented
/// counts under `pa`. Index 0 holds zero.
pub fn exact_posterior(shape: &ShapeTree, model: ModelSpec) -> Result<Vec<BigRational>, OracleError> {
    let plane = plane_model(model)?;
    check_range(
        shape.n(),
        if plane { MAX_POSTERIOR_PA_N } else { MAX_POSTERIOR_UA_N },
    )?;
    let orbits = orbit_counts_naive(shape);
    let mut weights = Vec::with_capacity(shape.n());
    for u in shape.vertices() {
        let count = if plane {
            embedding_count_plane(shape, u)?
        } else {
            embedding_count(shape, u)?
        };
        weights.push(BigRational::new(BigInt::from(count), BigInt::from(orbits[u])));
    }
    Ok(std::iter::once(BigRational::zero()).chain(normalize(weights)).collect())
}

/// How often each rooted shape arises among all recursive (or all
/// plane-oriented recursive) trees of one size, keyed by canonical code.
#[derive(Debug, Clone)]
pub struct ClassCensus {
    n: usize,
    plane: bool,
    total: u64,
    classes: HashMap<CanonicalCode, (u64, GrowthTree)>,
}

impl ClassCensus {
    pub fn recursive(n: usize) -> Result<Self, OracleError> {
        let mut census = ClassCensus::empty(n, false);
        for t in enumerate_recursive(n)? {
            census.add(t);
        }
        Ok(census)
    }

    pub fn plane(n: usize) -> Result<Self, OracleError> {
        let mut census = ClassCensus::empty(n, true);
        for t in enumerate_plane_recursive(n)? {
            census.add(t.tree);
        }
        Ok(census)
    }

    /// Census matching `model` (`ua` → recursive, `pa` → plane-oriented).
    pub fn for_model(n: usize, model: ModelSpec) -> Result<Self, OracleError> {
        if plane_model(model)? {
            ClassCensus::plane(n)
        } else {
            ClassCensus::recursive(n)
        }
    }

    fn empty(n: usize, plane: bool) -> Self {
        ClassCensus {
            n,
            plane,
            total: 0,
            classes: HashMap::new(),
        }
    }

    fn add(&mut self, t: GrowthTree) {
        let code = canonical_code(&t.to_shape(), 1);
        self.total += 1;
        self.classes.entry(code).or_insert((0, t)).0 += 1;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_plane(&self) -> bool {
        self.plane
    }

    /// Number of trees enumerated.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Number of distinct rooted shapes seen.
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// How many enumerated trees have rooted shape `code`.
    pub fn count(&self, code: &CanonicalCode) -> u64 {
        self.classes.get(code).map_or(0, |c| c.0)
    }

    /// `(count, representative tree)` for every rooted shape, in code order.
    pub fn classes(&self) -> Vec<(u64, &GrowthTree)> {
        let mut v: Vec<_> = self.classes.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v.into_iter().map(|(_, (c, t))| (*c, t)).collect()
    }

    /// One representative per unrooted shape.
    pub fn unrooted_shapes(&self) -> Vec<ShapeTree> {
        let mut seen = HashMap::new();
        for (_, t) in self.classes() {
            let shape = t.to_shape();
            let key = shape.vertices().map(|u| canonical_code(&shape, u)).min().unwrap();
            seen.entry(key).or_insert(shape);
        }
        let mut v: Vec<_> = seen.into_iter().collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v.into_iter().map(|(_, s)| s).collect()
    }

    /// Posterior of the first vertex read off the raw enumeration:
    /// `P(u) ∝ count(code(T, u)) / Ā(u)`.
    pub fn posterior(&self, shape: &ShapeTree) -> Vec<BigRational> {
        assert_eq!(shape.n(), self.n, "census built for a different size");
        let orbits = orbit_counts_naive(shape);
        let weights = shape
            .vertices()
            .map(|u| {
                BigRational::new(
                    BigInt::from(self.count(&canonical_code(shape, u))),
                    BigInt::from(orbits[u]),
                )
            })
            .collect();
        std::iter::once(BigRational::zero()).chain(normalize(weights)).collect()
    }
}

/// Multiplicities `(j_1, …, j_ℓ)`: `j_k` parts of size `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionVector(Vec<u64>);

impl PartitionVector {
    pub fn new(multiplicities: Vec<u64>) -> Result<Self, OracleError> {
        let p = PartitionVector(multiplicities);
        if p.total() == 0 {
            return Err(OracleError::EmptyPartition);
        }
        Ok(p)
    }

    pub fn multiplicities(&self) -> &[u64] {
        &self.0
    }

    /// `s = Σ k · j_k`.
    pub fn total(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &j)| (i as u64 + 1) * j)
            .sum()
    }
}

impl fmt::Display for PartitionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|j| j.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `p(0), …, p(max)` by the coin-change recurrence over part sizes.
pub fn partition_counts(max: usize) -> Vec<ExactCount> {
    let mut p = vec![BigUint::zero(); max + 1];
    p[0] = BigUint::one();
    for part in 1..=max {
        for s in part..=max {
            let add = p[s - part].clone();
            p[s] += add;
        }
    }
    p
}

/// Number of integer partitions of `s`.
pub fn partition_count(s: usize) -> ExactCount {
    partition_counts(s).pop().expect("non-empty table")
}

/// `exp(π √(2s/3))`, Erdős' explicit upper bound on `p(s)`.
pub fn partition_upper_bound(s: usize) -> f64 {
    (std::f64::consts::PI * (2.0 * s as f64 / 3.0).sqrt()).exp()
}

/// Outcome of a Monte Carlo test of an upper bound on a probability.
#[derive(Debug, Clone, PartialEq)]
pub struct TailCheck {
    pub hits: usize,
    pub trials: usize,
    pub empirical: f64,
    pub bound: f64,
    /// Standard error of `empirical`.
    pub sigma: f64,
}

impl TailCheck {
    fn new(hits: usize, trials: usize, bound: f64) -> Self {
        let p = hits as f64 / trials as f64;
        TailCheck {
            hits,
            trials,
            empirical: p,
            bound,
            sigma: (p * (1.0 - p) / trials as f64).sqrt(),
        }
    }

    /// A bound at or above 1 cannot be violated.
    pub fn is_vacuous(&self) -> bool {
        self.bound >= 1.0
    }

    /// `empirical ≤ bound + 3σ`.
    pub fn passes(&self) -> bool {
        self.is_vacuous() || self.empirical <= self.bound + 3.0 * self.sigma
    }
}

fn check_trials(trials: usize) -> Result<(), OracleError> {
    if trials < MIN_TAIL_TRIALS {
        Err(OracleError::TooFewTrials {
            got: trials,
            min: MIN_TAIL_TRIALS,
        })
    } else {
        Ok(())
    }
}

fn exponential<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    -(1.0 - rng.random::<f64>()).ln()
}

/// `exp(−√(s/2) · ln(s / (e t)))`.
pub fn gamma_tail_bound(s: f64, t: f64) -> f64 {
    (-(s / 2.0).sqrt() * (s / (std::f64::consts::E * t)).ln()).exp()
}

/// Estimates `P(Σ_k X_k < t)` for independent `X_k ~ Gamma(shape j_k,
/// scale k)` and compares it with [`gamma_tail_bound`]. Each `X_k` is drawn
/// as a sum of `j_k` exponentials with mean `k`.
pub fn gamma_tail_check(
    parts: &PartitionVector,
    t: f64,
    trials: usize,
    rng: &mut RngStream,
) -> Result<TailCheck, OracleError> {
    let s = parts.total() as f64;
    if !(t > 0.0 && t < s) {
        return Err(OracleError::BadT { t, lo: 0.0, hi: s });
    }
    check_trials(trials)?;
    let mut hits = 0;
    for _ in 0..trials {
        let mut sum = 0.0;
        'draw: for (i, &j) in parts.multiplicities().iter().enumerate() {
            let scale = (i + 1) as f64;
            for _ in 0..j {
                sum += scale * exponential(rng);
                if sum >= t {
                    break 'draw;
                }
            }
        }
        if sum < t {
            hits += 1;
        }
    }
    Ok(TailCheck::new(hits, trials, gamma_tail_bound(s, t)))
}

/// One draw of `X = ∏_i min(E_1 + … + E_i, 1)`. Factors are 1 once the
/// partial sum reaches 1, so the product stops there.
pub fn sample_exponential_product<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let mut partial = 0.0;
    let mut x = 1.0;
    loop {
        partial += exponential(rng);
        if partial >= 1.0 {
            return x;
        }
        x *= partial;
    }
}

/// Estimates `P(X ≤ t)` for the exponential partial-sum product and compares
/// it with `6 t^{1/4}`.
pub fn product_tail_check(t: f64, trials: usize, rng: &mut RngStream) -> Result<TailCheck, OracleError> {
    if !(t > 0.0 && t < 1.0) {
        return Err(OracleError::BadT { t, lo: 0.0, hi: 1.0 });
    }
    check_trials(trials)?;
    let hits = (0..trials)
        .filter(|_| sample_exponential_product(rng) <= t)
        .count();
    Ok(TailCheck::new(hits, trials, 6.0 * t.powf(0.25)))
}

/// Grid of `(parts, t)` points, each with a gamma tail bound below 1.
pub fn gamma_check_grid() -> Vec<(PartitionVector, f64)> {
    let grid: [(&[u64], f64); 10] = [
        (&[25], 5.0),
        (&[2, 3], 1.0),
        (&[50], 5.0),
        (&[10], 1.0),
        (&[0, 0, 4], 2.0),
        (&[1, 1, 1, 1], 2.0),
        (&[5, 0, 0, 0, 2], 3.0),
        (&[100], 20.0),
        (&[0, 10], 1.0),
        (&[3, 2, 1, 0, 0, 1], 4.0),
    ];
    grid.iter()
        .map(|&(j, t)| (PartitionVector::new(j.to_vec()).expect("non-empty"), t))
        .collect()
}

/// Thresholds used for the exponential-product check.
pub const PRODUCT_CHECK_THRESHOLDS: [f64; 4] = [1e-2, 1e-4, 1e-6, 1e-8];

/// One line of a verification report.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{}: {verdict} ({})", self.name, self.detail)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Counting,
    PlaneCounting,
    Posterior,
    Partitions,
    Gamma,
    ProductTail,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Counting,
        Suite::PlaneCounting,
        Suite::Posterior,
        Suite::Partitions,
        Suite::Gamma,
        Suite::ProductTail,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Counting => "counting",
            Suite::PlaneCounting => "plane-counting",
            Suite::Posterior => "posterior",
            Suite::Partitions => "partitions",
            Suite::Gamma => "gamma",
            Suite::ProductTail => "product-tail",
        }
    }
}

impl FromStr for Suite {
    type Err = OracleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| OracleError::UnknownSuite(s.to_string()))
    }
}

/// Options shared by the check suites.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    /// Largest tree size for the enumeration suites, or the largest `s` for
    /// the partition suite. `None` picks each suite's default.
    pub n_max: Option<usize>,
    pub seed: u64,
    /// Monte Carlo trials per grid point.
    pub trials: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            n_max: None,
            seed: 1,
            trials: 100_000,
        }
    }
}

/// Runs one named suite and returns a line per check.
pub fn run_suite(suite: Suite, opts: SuiteOptions) -> Result<Vec<Check>, OracleError> {
    match suite {
        Suite::Counting => counting_checks(opts.n_max.unwrap_or(7), false),
        Suite::PlaneCounting => counting_checks(opts.n_max.unwrap_or(6), true),
        Suite::Posterior => posterior_checks(opts.n_max),
        Suite::Partitions => Ok(partition_checks(opts.n_max.unwrap_or(500))),
        Suite::Gamma => gamma_checks(opts),
        Suite::ProductTail => product_checks(opts),
    }
}

fn counting_checks(n_max: usize, plane: bool) -> Result<Vec<Check>, OracleError> {
    let mut out = Vec::new();
    for n in 2..=n_max {
        let census = if plane {
            ClassCensus::plane(n)?
        } else {
            ClassCensus::recursive(n)?
        };
        let mut formula_total = BigUint::zero();
        let mut mismatches = 0;
        for (count, t) in census.classes() {
            let shape = t.to_shape();
            let c = if plane {
                embedding_count_plane(&shape, 1)?
            } else {
                embedding_count(&shape, 1)?
            };
            if c != BigUint::from(count) {
                mismatches += 1;
            }
            formula_total += c;
        }
        let (label, expected) = if plane {
            ("(2n-3)!!", double_factorial(2 * n - 3))
        } else {
            ("(n-1)!", factorial(n - 1))
        };
        out.push(Check::new(
            format!("n={n} {label} check"),
            formula_total == expected && BigUint::from(census.total()) == expected,
            format!("formula sum {formula_total}, enumerated {}, expected {expected}", census.total()),
        ));
        out.push(Check::new(
            format!("n={n} per-class counts"),
            mismatches == 0,
            format!("{} classes, {mismatches} mismatches", census.class_count()),
        ));
    }
    Ok(out)
}

fn posterior_checks(n_max: Option<usize>) -> Result<Vec<Check>, OracleError> {
    let mut out = Vec::new();
    for (model, max) in [
        (ModelSpec::UniformAttachment, MAX_POSTERIOR_UA_N),
        (ModelSpec::PreferentialAttachment, MAX_POSTERIOR_PA_N),
    ] {
        let top = n_max.map_or(max, |m| m.min(max));
        for n in 3..=top {
            let census = ClassCensus::for_model(n, model)?;
            let shapes = census.unrooted_shapes();
            let mut exact_mismatch = 0;
            let mut worst = 0.0f64;
            for shape in &shapes {
                let formula = exact_posterior(shape, model)?;
                if formula != census.posterior(shape) {
                    exact_mismatch += 1;
                }
                let float = root_posterior(shape, model).expect("model checked above");
                for u in shape.vertices() {
                    let diff = (float[u] - formula[u].to_f64().unwrap_or(f64::NAN)).abs();
                    worst = worst.max(diff);
                }
            }
            out.push(Check::new(
                format!("{model} n={n} posterior"),
                exact_mismatch == 0 && worst <= 1e-10,
                format!(
                    "{} shapes, {exact_mismatch} rational mismatches, max float error {worst:.2e}",
                    shapes.len()
                ),
            ));
        }
    }
    Ok(out)
}

fn partition_checks(s_max: usize) -> Vec<Check> {
    let p = partition_counts(s_max);
    let violations: Vec<usize> = (1..=s_max)
        .filter(|&s| p[s].to_f64().unwrap_or(f64::INFINITY) > partition_upper_bound(s))
        .collect();
    let mut out = vec![Check::new(
        format!("p(s) <= exp(pi sqrt(2s/3)) for s <= {s_max}"),
        violations.is_empty(),
        format!("{} violations", violations.len()),
    )];
    if s_max >= 5 {
        out.push(Check::new("p(5) = 7", p[5] == BigUint::from(7u32), format!("p(5) = {}", p[5])));
    }
    out
}

fn gamma_checks(opts: SuiteOptions) -> Result<Vec<Check>, OracleError> {
    gamma_check_grid()
        .into_iter()
        .enumerate()
        .map(|(i, (parts, t))| {
            let mut rng = RngStream::new(opts.seed, i as u64);
            let r = gamma_tail_check(&parts, t, opts.trials, &mut rng)?;
            Ok(Check::new(
                format!("gamma tail j={parts} t={t}"),
                r.passes(),
                format!("empirical {:.5} vs bound {:.5} (+3 sigma {:.5})", r.empirical, r.bound, 3.0 * r.sigma),
            ))
        })
        .collect()
}

fn product_checks(opts: SuiteOptions) -> Result<Vec<Check>, OracleError> {
    PRODUCT_CHECK_THRESHOLDS
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let mut rng = RngStream::new(opts.seed, i as u64);
            let r = product_tail_check(t, opts.trials, &mut rng)?;
            Ok(Check::new(
                format!("product tail t={t:e}"),
                r.passes(),
                format!("empirical {:.6} vs bound {:.6} (+3 sigma {:.6})", r.empirical, r.bound, 3.0 * r.sigma),
            ))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(e: &[(usize, usize)]) -> ShapeTree {
        ShapeTree::from_edges(e).unwrap()
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(enumerate_recursive(2).unwrap().count(), 1);
        assert_eq!(enumerate_recursive(4).unwrap().count(), 6);
        assert_eq!(enumerate_recursive(6).unwrap().count(), 120);
        assert_eq!(enumerate_plane_recursive(2).unwrap().count(), 1);
        assert_eq!(enumerate_plane_recursive(3).unwrap().count(), 3);
        assert_eq!(enumerate_plane_recursive(5).unwrap().count(), 105);
        assert!(matches!(enumerate_recursive(10), Err(OracleError::TooLarge { .. })));
        assert!(matches!(enumerate_plane_recursive(9), Err(OracleError::TooLarge { .. })));
        assert!(matches!(enumerate_recursive(1), Err(OracleError::TooSmall(1))));
    }

    #[test]
    fn enumerated_trees_are_distinct() {
        let all: Vec<_> = enumerate_recursive(5).unwrap().collect();
        let mut dedup = all.clone();
        dedup.sort_by_key(|t| t.parents().collect::<Vec<_>>());
        dedup.dedup();
        assert_eq!(dedup.len(), all.len());

        let plane: Vec<_> = enumerate_plane_recursive(4).unwrap().collect();
        let mut keys: Vec<_> = plane.iter().map(|p| p.children.clone()).collect();
        keys.sort();
        keys.dedup();
        assert_eq!(keys.len(), 15);
    }

    #[test]
    fn embedding_count_examples() {
        let p3 = shape(&[(1, 2), (2, 3)]);
        assert_eq!(embedding_count(&p3, 1).unwrap(), BigUint::from(1u32));
        let star = shape(&[(1, 2), (1, 3), (1, 4)]);
        assert_eq!(embedding_count(&star, 1).unwrap(), BigUint::from(1u32));
        let mixed = shape(&[(1, 2), (1, 3), (3, 4)]);
        assert_eq!(embedding_count(&mixed, 1).unwrap(), BigUint::from(3u32));

        assert_eq!(embedding_count_plane(&p3, 1).unwrap(), BigUint::from(1u32));
        assert_eq!(embedding_count_plane(&p3, 2).unwrap(), BigUint::from(2u32));
        assert_eq!(embedding_count_plane(&star, 1).unwrap(), BigUint::from(6u32));
    }

    #[test]
    fn mixed_shape_count_matches_enumeration() {
        let mixed = shape(&[(1, 2), (1, 3), (3, 4)]);
        let code = canonical_code(&mixed, 1);
        let hits = enumerate_recursive(4)
            .unwrap()
            .filter(|t| canonical_code(&t.to_shape(), 1) == code)
            .count();
        assert_eq!(hits, 3);
    }

    #[test]
    fn posterior_on_three_path() {
        let p3 = shape(&[(1, 2), (2, 3)]);
        let q = |a, b| BigRational::new(BigInt::from(a), BigInt::from(b));
        let ua = exact_posterior(&p3, ModelSpec::UniformAttachment).unwrap();
        assert_eq!(ua[1..], [q(1, 4), q(1, 2), q(1, 4)]);
        let pa = exact_posterior(&p3, ModelSpec::PreferentialAttachment).unwrap();
        assert_eq!(pa[1..], [q(1, 6), q(2, 3), q(1, 6)]);
        assert_eq!(ClassCensus::recursive(3).unwrap().posterior(&p3), ua);
        assert_eq!(ClassCensus::plane(3).unwrap().posterior(&p3), pa);
    }

    #[test]
    fn star_posterior_formula_equals_enumeration() {
        let star = shape(&[(1, 2), (1, 3), (1, 4)]);
        let census = ClassCensus::recursive(4).unwrap();
        assert_eq!(
            exact_posterior(&star, ModelSpec::UniformAttachment).unwrap(),
            census.posterior(&star)
        );
        assert!(matches!(
            exact_posterior(&star, ModelSpec::AlphaAttachment(2.0)),
            Err(OracleError::UnsupportedModel(_))
        ));
    }

    #[test]
    fn partitions() {
        assert_eq!(partition_count(1), BigUint::from(1u32));
        assert_eq!(partition_count(5), BigUint::from(7u32));
        assert_eq!(partition_count(100), "190569292".parse::<BigUint>().unwrap());
        assert!(partition_count(100).to_f64().unwrap() <= partition_upper_bound(100));
    }

    #[test]
    fn tail_check_argument_errors() {
        let mut rng = RngStream::new(0, 0);
        let j = PartitionVector::new(vec![3]).unwrap();
        assert!(matches!(gamma_tail_check(&j, 3.0, 10_000, &mut rng), Err(OracleError::BadT { .. })));
        assert!(matches!(gamma_tail_check(&j, 0.0, 10_000, &mut rng), Err(OracleError::BadT { .. })));
        assert!(matches!(
            gamma_tail_check(&j, 1.0, 10, &mut rng),
            Err(OracleError::TooFewTrials { .. })
        ));
        assert!(matches!(product_tail_check(1.0, 10_000, &mut rng), Err(OracleError::BadT { .. })));
        assert_eq!(PartitionVector::new(vec![0, 0]), Err(OracleError::EmptyPartition));
    }

    #[test]
    fn near_s_threshold_is_vacuous() {
        let j = PartitionVector::new(vec![25]).unwrap();
        let r = gamma_tail_check(&j, 0.99 * 25.0, 10_000, &mut RngStream::new(5, 0)).unwrap();
        assert!(r.bound >= 1.0);
        assert!(r.is_vacuous() && r.passes());
        let r = product_tail_check(0.5, 10_000, &mut RngStream::new(5, 1)).unwrap();
        assert!(r.is_vacuous());
    }

    #[test]
    fn grid_bounds_are_informative() {
        let grid = gamma_check_grid();
        assert_eq!(grid.len(), 10);
        for (parts, t) in grid {
            assert!(gamma_tail_bound(parts.total() as f64, t) < 1.0, "{parts} {t}");
        }
    }

    #[test]
    fn suite_names() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }
}
