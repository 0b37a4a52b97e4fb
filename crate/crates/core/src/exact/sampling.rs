use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::leverage::SamplingDistribution;

/// `d_sub` i.i.d. indices drawn from `q` by inverse CDF with a seeded ChaCha8 stream.
pub fn nystrom_sample(q: &SamplingDistribution, d_sub: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_with_rng(q, d_sub, &mut rng)
}

pub(crate) fn sample_with_rng<R: Rng>(q: &SamplingDistribution, d_sub: usize, rng: &mut R) -> Vec<usize> {
    let probs = q.probabilities();
    let mut cdf = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for &p in probs {
        acc += p;
        cdf.push(acc);
    }
    let total = acc;
    let last = probs.len() - 1;
    (0..d_sub)
        .map(|_| {
            let u = rng.gen::<f64>() * total;
            cdf.partition_point(|&c| c <= u).min(last)
        })
        .collect()
}
