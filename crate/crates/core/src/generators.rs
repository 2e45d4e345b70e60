//! Random growth processes: uniform, preferential and degree^α attachment.
//!
//! Every sampler draws from an [`RngStream`], a ChaCha8 generator addressed by
//! a `(seed, stream_id)` pair. Experiments give trial `i` the stream
//! `(seed, i)`, so a trial's randomness never depends on which worker ran it
//! or in what order.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::tree::{GrowthTree, Vertex};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeneratorError {
    #[error("tree size must be at least 2, got {0}")]
    BadSize(usize),
    #[error("attachment exponent must be finite, got {0}")]
    BadAlpha(f64),
    #[error("degree^alpha overflowed at degree {degree} (alpha = {alpha})")]
    WeightOverflow { degree: usize, alpha: f64 },
    #[error("unknown model {0:?}, expected ua, pa or alpha")]
    UnknownModel(String),
}

/// A reproducible random stream.
///
/// The generator is ChaCha8 keyed by `seed` through
/// [`SeedableRng::seed_from_u64`], with the ChaCha stream (nonce) word set to
/// `stream_id`. Identical pairs produce identical sequences on every platform.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        RngStream {
            seed,
            stream_id,
            rng,
        }
    }

    /// The stream used by trial `trial` of an experiment seeded with `seed`.
    pub fn for_trial(seed: u64, trial: u64) -> Self {
        RngStream::new(seed, trial)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// Which growth process to run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelSpec {
    UniformAttachment,
    PreferentialAttachment,
    /// Attach to `i` with probability proportional to `degree(i)^alpha`.
    AlphaAttachment(f64),
}

impl ModelSpec {
    /// The exponent this model uses.
    pub fn alpha(&self) -> f64 {
        match *self {
            ModelSpec::UniformAttachment => 0.0,
            ModelSpec::PreferentialAttachment => 1.0,
            ModelSpec::AlphaAttachment(a) => a,
        }
    }

    /// Collapses `AlphaAttachment(0)` and `AlphaAttachment(1)` onto the named
    /// models.
    pub fn canonical(&self) -> ModelSpec {
        match *self {
            ModelSpec::AlphaAttachment(a) if a == 0.0 => ModelSpec::UniformAttachment,
            ModelSpec::AlphaAttachment(a) if a == 1.0 => ModelSpec::PreferentialAttachment,
            m => m,
        }
    }

    pub fn sample(&self, n: usize, rng: &mut RngStream) -> Result<GrowthTree, GeneratorError> {
        match *self {
            ModelSpec::UniformAttachment => sample_uniform_attachment(n, rng),
            ModelSpec::PreferentialAttachment => sample_preferential_attachment(n, rng),
            ModelSpec::AlphaAttachment(a) => sample_alpha_attachment(n, a, rng),
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::UniformAttachment => f.write_str("ua"),
            ModelSpec::PreferentialAttachment => f.write_str("pa"),
            ModelSpec::AlphaAttachment(a) => write!(f, "alpha:{a}"),
        }
    }
}

impl FromStr for ModelSpec {
    type Err = GeneratorError;

    /// Accepts `ua`, `pa`, `alpha:<f64>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ua" => Ok(ModelSpec::UniformAttachment),
            "pa" => Ok(ModelSpec::PreferentialAttachment),
            _ => {
                let a = s
                    .strip_prefix("alpha:")
                    .and_then(|a| a.parse::<f64>().ok())
                    .ok_or_else(|| GeneratorError::UnknownModel(s.to_string()))?;
                if !a.is_finite() {
                    return Err(GeneratorError::BadAlpha(a));
                }
                Ok(ModelSpec::AlphaAttachment(a))
            }
        }
    }
}

fn check_size(n: usize) -> Result<(), GeneratorError> {
    if n < 2 {
        Err(GeneratorError::BadSize(n))
    } else {
        Ok(())
    }
}

/// Uniform attachment: vertex `i + 1` picks its parent uniformly in `1..=i`.
pub fn sample_uniform_attachment(
    n: usize,
    rng: &mut RngStream,
) -> Result<GrowthTree, GeneratorError> {
    check_size(n)?;
    let mut tree = GrowthTree::with_capacity(n);
    for existing in 2..n {
        tree.attach(rng.random_range(1..=existing));
    }
    Ok(tree)
}

/// Preferential attachment: vertex `i + 1` picks `j` with probability
/// `d(j) / (2(i - 1))`, by drawing a uniform entry of the list holding both
/// endpoints of every existing edge.
pub fn sample_preferential_attachment(
    n: usize,
    rng: &mut RngStream,
) -> Result<GrowthTree, GeneratorError> {
    check_size(n)?;
    let mut tree = GrowthTree::with_capacity(n);
    let mut endpoints: Vec<u32> = Vec::with_capacity(2 * (n - 1));
    endpoints.extend_from_slice(&[1, 2]);
    for new in 3..=n {
        let target = endpoints[rng.random_range(0..endpoints.len())];
        tree.attach(target as Vertex);
        endpoints.push(target);
        endpoints.push(new as u32);
    }
    Ok(tree)
}

/// Attachment with probability proportional to `degree^alpha`.
///
/// `alpha == 0` runs the uniform sampler, so the two agree draw for draw.
/// Other exponents keep exact weights in a sum tree and update the two
/// touched vertices after each arrival.
pub fn sample_alpha_attachment(
    n: usize,
    alpha: f64,
    rng: &mut RngStream,
) -> Result<GrowthTree, GeneratorError> {
    check_size(n)?;
    if !alpha.is_finite() {
        return Err(GeneratorError::BadAlpha(alpha));
    }
    if alpha == 0.0 {
        return sample_uniform_attachment(n, rng);
    }
    let weight = |degree: usize| -> Result<f64, GeneratorError> {
        let w = (degree as f64).powf(alpha);
        if w.is_finite() {
            Ok(w)
        } else {
            Err(GeneratorError::WeightOverflow { degree, alpha })
        }
    };
    let mut tree = GrowthTree::with_capacity(n);
    let mut degree = vec![0usize; n + 1];
    degree[1] = 1;
    degree[2] = 1;
    let mut sums = SumTree::new(n);
    sums.set(1, weight(1)?);
    sums.set(2, weight(1)?);
    for new in 3..=n {
        let target = sums.sample(rng.random::<f64>());
        tree.attach(target);
        degree[target] += 1;
        sums.set(target, weight(degree[target])?);
        degree[new] = 1;
        sums.set(new, weight(1)?);
    }
    Ok(tree)
}

/// Complete binary tree of partial sums over vertex weights. Internal nodes
/// are recomputed from their children on every update, so no rounding error
/// accumulates across updates.
struct SumTree {
    leaves: usize,
    node: Vec<f64>,
}

impl SumTree {
    fn new(n: usize) -> Self {
        let leaves = (n + 1).next_power_of_two();
        SumTree {
            leaves,
            node: vec![0.0; 2 * leaves],
        }
    }

    fn set(&mut self, v: Vertex, w: f64) {
        let mut i = self.leaves + v;
        self.node[i] = w;
        while i > 1 {
            i /= 2;
            self.node[i] = self.node[2 * i] + self.node[2 * i + 1];
        }
    }

    /// Vertex whose cumulative-weight interval contains `u * total`,
    /// `u ∈ [0, 1)`. Never lands on a zero-weight slot.
    fn sample(&self, u: f64) -> Vertex {
        let mut x = u * self.node[1];
        let mut i = 1;
        while i < self.leaves {
            let left = 2 * i;
            if x < self.node[left] || self.node[left + 1] == 0.0 {
                i = left;
            } else {
                x -= self.node[left];
                i = left + 1;
            }
        }
        i - self.leaves
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_vertex_tree_is_unique() {
        for model in [
            ModelSpec::UniformAttachment,
            ModelSpec::PreferentialAttachment,
            ModelSpec::AlphaAttachment(2.5),
        ] {
            let t = model.sample(2, &mut RngStream::new(9, 0)).unwrap();
            assert_eq!(t.parents().collect::<Vec<_>>(), vec![1]);
        }
    }

    #[test]
    fn bad_sizes_and_alphas() {
        let mut rng = RngStream::new(0, 0);
        assert_eq!(
            sample_uniform_attachment(1, &mut rng),
            Err(GeneratorError::BadSize(1))
        );
        assert_eq!(
            sample_preferential_attachment(0, &mut rng),
            Err(GeneratorError::BadSize(0))
        );
        assert!(matches!(
            sample_alpha_attachment(5, f64::NAN, &mut rng),
            Err(GeneratorError::BadAlpha(_))
        ));
        assert!(matches!(
            sample_alpha_attachment(10, 2000.0, &mut rng),
            Err(GeneratorError::WeightOverflow { .. })
        ));
    }

    #[test]
    fn alpha_zero_matches_uniform_draw_for_draw() {
        for seed in 0..20 {
            let a = sample_uniform_attachment(300, &mut RngStream::new(seed, 4)).unwrap();
            let b = sample_alpha_attachment(300, 0.0, &mut RngStream::new(seed, 4)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn samplers_are_deterministic_and_increasing() {
        for model in [
            ModelSpec::UniformAttachment,
            ModelSpec::PreferentialAttachment,
            ModelSpec::AlphaAttachment(-0.5),
            ModelSpec::AlphaAttachment(1.7),
        ] {
            let a = model.sample(500, &mut RngStream::new(11, 2)).unwrap();
            let b = model.sample(500, &mut RngStream::new(11, 2)).unwrap();
            assert_eq!(a, b);
            assert!(a.edges().all(|(c, p)| p < c));
            let c = model.sample(500, &mut RngStream::new(11, 3)).unwrap();
            assert_ne!(a, c);
        }
    }

    #[test]
    fn model_parsing() {
        assert_eq!("ua".parse::<ModelSpec>().unwrap(), ModelSpec::UniformAttachment);
        assert_eq!(
            "alpha:0.5".parse::<ModelSpec>().unwrap(),
            ModelSpec::AlphaAttachment(0.5)
        );
        assert!("alpha:inf".parse::<ModelSpec>().is_err());
        assert!("ba".parse::<ModelSpec>().is_err());
        assert_eq!(
            ModelSpec::AlphaAttachment(1.0).canonical(),
            ModelSpec::PreferentialAttachment
        );
    }

    #[test]
    fn sum_tree_skips_empty_slots() {
        let mut s = SumTree::new(5);
        s.set(1, 1.0);
        s.set(2, 3.0);
        assert_eq!(s.sample(0.0), 1);
        assert_eq!(s.sample(0.24), 1);
        assert_eq!(s.sample(0.26), 2);
        assert_eq!(s.sample(0.999_999_999), 2);
    }
}
