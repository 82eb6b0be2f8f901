//! Seeded random Borel fixed ideals for property tests and acceptance runs.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::borel::{borel_closure_in, BorelIdeal};
use crate::monomial::{Monomial, RingSpec, Var};

pub const DEFAULT_SEED: u64 = 20_100_107;
pub const DEFAULT_SIZE: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorpusConfig {
    pub seed: u64,
    pub size: usize,
    pub max_vars: u32,
    pub max_degree: u32,
    pub max_seeds: usize,
    pub max_gens: usize,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig { seed: DEFAULT_SEED, size: DEFAULT_SIZE, max_vars: 5, max_degree: 5, max_seeds: 3, max_gens: 30 }
    }
}

fn random_monomial(rng: &mut ChaCha8Rng, n: u32, max_degree: u32) -> Monomial {
    let degree = rng.gen_range(1..=max_degree);
    Monomial::from_pairs((0..degree).map(|_| (Var::Single(rng.gen_range(1..=n)), 1)))
}

/// Distinct Borel closures of random seed monomials, in generation order.
/// Stops early if too many consecutive draws are rejected.
pub fn corpus(config: &CorpusConfig) -> Vec<BorelIdeal> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut seen: HashSet<(RingSpec, Vec<Monomial>)> = HashSet::new();
    let mut out = Vec::new();
    let mut misses = 0;
    while out.len() < config.size && misses < 10_000 {
        let n = rng.gen_range(1..=config.max_vars);
        let k = rng.gen_range(1..=config.max_seeds);
        let seeds: Vec<Monomial> = (0..k).map(|_| random_monomial(&mut rng, n, config.max_degree)).collect();
        let ring = RingSpec::single(n);
        let ideal = match borel_closure_in(ring, &seeds) {
            Ok(i) if i.gens().len() <= config.max_gens => i,
            _ => {
                misses += 1;
                continue;
            }
        };
        if seen.insert((ring, ideal.gens().to_vec())) {
            out.push(ideal);
            misses = 0;
        } else {
            misses += 1;
        }
    }
    out
}

/// The default corpus.
pub fn default_corpus() -> Vec<BorelIdeal> {
    corpus(&CorpusConfig::default())
}
