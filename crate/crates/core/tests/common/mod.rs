#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use residua::gamma::{ExponentMatrix, Weights};
use residua::products::{FactorKind, FactorSpec, ProductSpec};

pub const SEED: u64 = 0x5eed_2024;

pub fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(SEED);
    r.set_stream(stream);
    r
}

pub fn monomial<R: Rng>(rng: &mut R, n: usize, max: u32) -> Vec<u32> {
    loop {
        let v: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=max)).collect();
        if v.iter().any(|&a| a > 0) {
            return v;
        }
    }
}

/// `len` distinct values from `1..=max`, decreasing.
pub fn strict_weights<R: Rng>(rng: &mut R, len: usize, max: u32) -> Weights {
    let mut pool: Vec<u32> = (1..=max).collect();
    pool.shuffle(rng);
    let mut mu = pool[..len].to_vec();
    mu.sort_unstable_by(|a, b| b.cmp(a));
    Weights::strict(mu).expect("strictly decreasing")
}

pub struct LemmaInstance {
    pub alpha: ExponentMatrix,
    pub k: Vec<u32>,
    pub p: usize,
    pub sigma: Vec<usize>,
    pub mu: Weights,
}

/// `r, n ≤ 4`, entries `≤ 3`, random `σ`, `μ ≤ 9`.
pub fn lemma_instance<R: Rng>(rng: &mut R) -> LemmaInstance {
    let r = rng.gen_range(1..=4);
    let n = rng.gen_range(1..=4);
    let alpha = ExponentMatrix::new((0..r).map(|_| monomial(rng, n, 3)).collect()).expect("valid matrix");
    let k = (0..r).map(|_| rng.gen_range(1..=2)).collect();
    let p = rng.gen_range(0..=r.min(n));
    let mut sigma: Vec<usize> = (0..r).collect();
    sigma.shuffle(rng);
    let mu = strict_weights(rng, r, 9);
    LemmaInstance { alpha, k, p, sigma, mu }
}

/// Product of `q ≤ 2` factors on `n ≤ 3` coordinates with mixed kinds.
pub fn product_spec<R: Rng>(rng: &mut R, kinds: &[FactorKind]) -> ProductSpec {
    let n = rng.gen_range(1..=3);
    let q = rng.gen_range(1..=2);
    let factors = (0..q)
        .map(|_| {
            let kind = *kinds.choose(rng).expect("nonempty kinds");
            FactorSpec::new(kind, monomial(rng, n, 2))
        })
        .collect();
    ProductSpec::new(factors, strict_weights(rng, q, 9)).expect("valid spec")
}
