//! Independent oracles for the mutation model: floating-point power iteration
//! against the closed-form stationary distribution, Monte-Carlo simulation of
//! the explicit four-letter sequence chain against the lumped count chain,
//! and frequency checks for the exact sampler.

mod common;

use common::rat;
use grnsynth::{
    binomial_pmf, GrnSpace, LumpedNucleotideChain, MutationCountChain, MutationDistribution,
    Rational,
};
use num_traits::ToPrimitive;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap()
}

/// Power iteration over the exact transition matrix, in f64.
fn power_iteration(chain: &MutationCountChain, iterations: usize) -> Vec<f64> {
    let l = chain.length() as usize;
    let t: Vec<Vec<f64>> = chain
        .transition_matrix()
        .iter()
        .map(|row| row.iter().map(to_f64).collect())
        .collect();
    let mut pi = vec![1.0 / (l as f64 + 1.0); l + 1];
    for _ in 0..iterations {
        let mut next = vec![0.0; l + 1];
        for (i, row) in t.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                next[j] += pi[i] * p;
            }
        }
        let diff: f64 = next
            .iter()
            .zip(&pi)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        pi = next;
        if diff < 1e-16 {
            break;
        }
    }
    pi
}

#[test]
fn power_iteration_converges_to_binomial() {
    for p in [rat(1, 100), rat(1, 10)] {
        let base = LumpedNucleotideChain::from_mutation_rate(&p).unwrap();
        for l in [1u32, 2, 5, 12] {
            let chain = MutationCountChain::new(l, base.clone()).unwrap();
            let pi = power_iteration(&chain, 10_000);
            let expected = binomial_pmf(l, &chain.stationary_beta_for_test());
            for (k, e) in expected.iter().enumerate() {
                assert!(
                    (pi[k] - to_f64(e)).abs() < 1e-12,
                    "l={l} k={k}: power iteration {} vs binomial {}",
                    pi[k],
                    to_f64(e)
                );
            }
        }
    }
}

// Convenience: the library exposes beta through the base chain.
trait BetaForTest {
    fn stationary_beta_for_test(&self) -> Rational;
}

impl BetaForTest for MutationCountChain {
    fn stationary_beta_for_test(&self) -> Rational {
        self.base().stationary_beta().unwrap()
    }
}

/// Simulates one generation of the explicit 4-letter promoter sequence: each
/// position mutates to one of the three other letters with probability p/3.
/// Letter 0 is the weight-maximizing value.
fn simulate_generation(seq: &mut [u8], p: f64, rng: &mut StdRng) {
    for site in seq.iter_mut() {
        if rng.random_bool(p) {
            let shift = rng.random_range(1..4u8);
            *site = (*site + shift) % 4;
        }
    }
}

#[test]
fn count_chain_matches_explicit_sequence_simulation() {
    // l = 3 sites, p = 1/10: empirical one-step count transitions from each
    // start count agree with the exact lumped chain to three decimals.
    let l = 3usize;
    let p = 0.1f64;
    let base = LumpedNucleotideChain::from_mutation_rate(&rat(1, 10)).unwrap();
    let chain = MutationCountChain::new(l as u32, base).unwrap();
    let mut rng = StdRng::seed_from_u64(0x4eaf);
    let trials = 1_000_000usize;
    for start in 0..=l {
        let mut histogram = vec![0u64; l + 1];
        let template: Vec<u8> = (0..l).map(|i| if i < start { 1 } else { 0 }).collect();
        for _ in 0..trials {
            let mut seq = template.clone();
            simulate_generation(&mut seq, p, &mut rng);
            let mutated = seq.iter().filter(|&&s| s != 0).count();
            histogram[mutated] += 1;
        }
        for j in 0..=l {
            let expected = to_f64(&chain.transition(start as u32, j as u32).unwrap());
            let observed = histogram[j] as f64 / trials as f64;
            assert!(
                (expected - observed).abs() < 1e-3,
                "T({start},{j}): exact {expected} vs simulated {observed}"
            );
        }
    }
}

#[test]
fn sampler_frequencies_match_binomial_marginals() {
    // 10^5 draws per edge; per-bin frequencies within 3 sigma of the pmf
    // under the fixed seed.
    let space = GrnSpace::from_json(
        grnsynth::catalog::find("bistable").unwrap().model_json,
    )
    .unwrap();
    let beta = rat(1, 4);
    let dist = MutationDistribution::uniform_beta(&space, beta.clone()).unwrap();
    let sampler = dist.sampler();
    let draws = 100_000usize;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20240717);
    use rand::SeedableRng as _;
    let edges = space.edges().len();
    let mut histograms = vec![vec![0u64; 13]; edges];
    for _ in 0..draws {
        let counts = sampler.sample_counts(&mut rng);
        for (e, &k) in counts.iter().enumerate() {
            histograms[e][k as usize] += 1;
        }
    }
    let pmf = binomial_pmf(12, &beta);
    for (e, hist) in histograms.iter().enumerate() {
        let mut chi_square = 0.0;
        for k in 0..=12usize {
            let p = to_f64(&pmf[k]);
            let sigma = (p * (1.0 - p) / draws as f64).sqrt();
            let observed = hist[k] as f64 / draws as f64;
            assert!(
                (observed - p).abs() <= 3.0 * sigma + 1e-9,
                "edge {e} count {k}: observed {observed}, expected {p} (sigma {sigma})"
            );
            let expected_count = p * draws as f64;
            chi_square += (hist[k] as f64 - expected_count).powi(2) / expected_count;
        }
        // 99.9% quantile of chi-square with 12 degrees of freedom is 32.9.
        assert!(chi_square < 32.9, "edge {e}: chi-square {chi_square}");
    }
}

#[test]
fn count_chain_rejects_out_of_range_indices() {
    let base = LumpedNucleotideChain::from_mutation_rate(&rat(1, 10)).unwrap();
    let chain = MutationCountChain::new(3, base).unwrap();
    assert!(chain.transition(0, 4).is_err());
    assert!(chain.transition(4, 0).is_err());
}
