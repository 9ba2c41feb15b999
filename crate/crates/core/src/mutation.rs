//! The mutation model: a two-state (correct/mutated) nucleotide chain, the
//! induced Markov chain on per-edge mutation counts, its stationary binomial
//! distribution, and the product distribution over whole-genome mutation
//! configurations that weights are drawn from.
//!
//! Each edge has a binding site of `length` nucleotides; `k` mutated
//! nucleotides quantize its weight to `w_max * (1 - k/length)`. At
//! stationarity each nucleotide is mutated independently with probability
//! `beta`, so the count is `Binomial(length, beta)` and edges are independent.

use crate::model::{GrnSpace, QuantizedGrid, WeightFunction};
use crate::rational::{format_rational, in_unit_interval, parse_rational, rat, Rational};
use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_traits::{One, ToPrimitive, Zero};
use rand::RngCore;
use serde::Deserialize;
use thiserror::Error;

/// Errors from chain construction and queries.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MutationError {
    /// A probability parameter is outside `[0, 1]` or rows do not sum to 1.
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    /// The chain has no unique stationary distribution.
    #[error("degenerate chain: {0}")]
    Degenerate(String),
    /// A mutation-count index is outside `0..=length`.
    #[error("mutation count {index} out of range 0..={length}")]
    OutOfRange { index: u32, length: u32 },
    /// Distribution and space disagree on the edge set.
    #[error("mutation distribution mismatch: {0}")]
    Mismatch(String),
    /// Malformed mutation config file.
    #[error("mutation config: {0}")]
    File(String),
}

/// Row-stochastic 2x2 chain on {0 = correct, 1 = mutated}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LumpedNucleotideChain {
    pub p00: Rational,
    pub p01: Rational,
    pub p10: Rational,
    pub p11: Rational,
}

impl LumpedNucleotideChain {
    /// Validates entries in `[0,1]` and unit row sums.
    pub fn new(
        p00: Rational,
        p01: Rational,
        p10: Rational,
        p11: Rational,
    ) -> Result<Self, MutationError> {
        for (name, p) in [("p00", &p00), ("p01", &p01), ("p10", &p10), ("p11", &p11)] {
            if !in_unit_interval(p) {
                return Err(MutationError::InvalidChain(format!(
                    "{name} = {} not in [0, 1]",
                    format_rational(p)
                )));
            }
        }
        if &p00 + &p01 != Rational::one() || &p10 + &p11 != Rational::one() {
            return Err(MutationError::InvalidChain("rows must sum to 1".into()));
        }
        Ok(LumpedNucleotideChain { p00, p01, p10, p11 })
    }

    /// The symmetric single-mutation chain: a correct nucleotide mutates with
    /// probability `p` (to each of the three other values with `p/3`), and a
    /// mutated one reverts with probability `p/3`.
    pub fn from_mutation_rate(p: &Rational) -> Result<Self, MutationError> {
        if !in_unit_interval(p) {
            return Err(MutationError::InvalidChain(format!(
                "p = {} not in [0, 1]",
                format_rational(p)
            )));
        }
        let third = p / rat(3, 1);
        LumpedNucleotideChain::new(
            Rational::one() - p,
            p.clone(),
            third.clone(),
            Rational::one() - third,
        )
    }

    /// The stationary probability of the mutated state, solved exactly from
    /// the balance equation: `beta = p01 / (p01 + p10)`. Errors on chains
    /// without a unique stationary distribution (the identity and the
    /// two-state swap).
    pub fn stationary_beta(&self) -> Result<Rational, MutationError> {
        if self.p01.is_zero() && self.p10.is_zero() {
            return Err(MutationError::Degenerate(
                "identity chain is reducible".into(),
            ));
        }
        if self.p01.is_one() && self.p10.is_one() {
            return Err(MutationError::Degenerate(
                "swap chain has period two".into(),
            ));
        }
        Ok(&self.p01 / (&self.p01 + &self.p10))
    }
}

/// The Markov chain on the number of mutated nucleotides in a binding site of
/// length `l`, driven by one lumped nucleotide chain per position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutationCountChain {
    length: u32,
    base: LumpedNucleotideChain,
}

impl MutationCountChain {
    pub fn new(length: u32, base: LumpedNucleotideChain) -> Result<Self, MutationError> {
        if length == 0 {
            return Err(MutationError::InvalidChain("length must be >= 1".into()));
        }
        Ok(MutationCountChain { length, base })
    }

    pub fn length(&self) -> u32 {
        self.length
    }

    pub fn base(&self) -> &LumpedNucleotideChain {
        &self.base
    }

    /// Exact transition probability from `i` to `j` mutated nucleotides:
    /// sum over the number `u` of mutated nucleotides that stay mutated, with
    /// `j - u` previously correct ones becoming mutated.
    pub fn transition(&self, i: u32, j: u32) -> Result<Rational, MutationError> {
        let l = self.length;
        for index in [i, j] {
            if index > l {
                return Err(MutationError::OutOfRange { index, length: l });
            }
        }
        let c = &self.base;
        let mut sum = Rational::zero();
        for u in 0..=i.min(j) {
            // Choosing j - u fresh mutations among l - i correct positions;
            // the binomial is zero when j - u exceeds l - i.
            if j - u > l - i {
                continue;
            }
            let ways_stay = binomial(BigInt::from(i), BigInt::from(u));
            let ways_new = binomial(BigInt::from(l - i), BigInt::from(j - u));
            let term = Rational::from_integer(ways_stay * ways_new)
                * pow_rat(&c.p11, u)
                * pow_rat(&c.p10, i - u)
                * pow_rat(&c.p01, j - u)
                * pow_rat(&c.p00, l - i - (j - u));
            sum += term;
        }
        Ok(sum)
    }

    /// The full `(l+1) x (l+1)` transition matrix.
    pub fn transition_matrix(&self) -> Vec<Vec<Rational>> {
        (0..=self.length)
            .map(|i| {
                (0..=self.length)
                    .map(|j| self.transition(i, j).expect("indices in range"))
                    .collect()
            })
            .collect()
    }

    /// The stationary distribution over counts, in closed form: the binomial
    /// with the base chain's stationary mutation probability.
    pub fn stationary(&self) -> Result<Vec<Rational>, MutationError> {
        let beta = self.base.stationary_beta()?;
        Ok(binomial_pmf(self.length, &beta))
    }
}

/// Exact `Binomial(l, beta)` probability mass function over `0..=l`.
pub fn binomial_pmf(l: u32, beta: &Rational) -> Vec<Rational> {
    let complement = Rational::one() - beta;
    (0..=l)
        .map(|k| {
            Rational::from_integer(binomial(BigInt::from(l), BigInt::from(k)))
                * pow_rat(beta, k)
                * pow_rat(&complement, l - k)
        })
        .collect()
}

fn pow_rat(r: &Rational, e: u32) -> Rational {
    // 0^0 = 1 for pmf formulas.
    if e == 0 {
        return Rational::one();
    }
    r.pow(e as i32)
}

/// The quantized weight `w_max * (1 - k/l)` after `k` of `l` nucleotides
/// mutate.
pub fn weight_from_count(w_max: &Rational, k: u32, l: u32) -> Result<Rational, MutationError> {
    if l == 0 || k > l {
        return Err(MutationError::OutOfRange { index: k, length: l });
    }
    Ok(w_max * (Rational::one() - rat(k as i64, l as i64)))
}

/// The product distribution over per-edge mutation counts: edge `e` carries
/// `Binomial(length(e), beta(e))`, independent across edges. Entries align
/// with a space's edge order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutationDistribution {
    entries: Vec<(u32, Rational)>,
}

impl MutationDistribution {
    /// A distribution with one shared stationary mutation probability; edge
    /// lengths come from the space.
    pub fn uniform_beta(space: &GrnSpace, beta: Rational) -> Result<Self, MutationError> {
        if !in_unit_interval(&beta) {
            return Err(MutationError::InvalidChain(format!(
                "beta = {} not in [0, 1]",
                format_rational(&beta)
            )));
        }
        Ok(MutationDistribution {
            entries: space
                .edges()
                .iter()
                .map(|e| (e.length, beta.clone()))
                .collect(),
        })
    }

    /// Per-edge `(length, beta)` pairs in edge order.
    pub fn entries(&self) -> &[(u32, Rational)] {
        &self.entries
    }

    pub fn edge_count(&self) -> usize {
        self.entries.len()
    }

    /// Checks alignment with a space's edges (same count and lengths).
    pub fn validate_for(&self, space: &GrnSpace) -> Result<(), MutationError> {
        if self.entries.len() != space.edges().len() {
            return Err(MutationError::Mismatch(format!(
                "distribution covers {} edges, space has {}",
                self.entries.len(),
                space.edges().len()
            )));
        }
        for (i, (l, _)) in self.entries.iter().enumerate() {
            if *l != space.edges()[i].length {
                return Err(MutationError::Mismatch(format!(
                    "edge {} length {} vs space length {}",
                    i,
                    l,
                    space.edges()[i].length
                )));
            }
        }
        Ok(())
    }

    /// Exact probability of a full mutation-count configuration.
    pub fn genome_pmf(&self, counts: &[u32]) -> Result<Rational, MutationError> {
        if counts.len() != self.entries.len() {
            return Err(MutationError::Mismatch(format!(
                "{} counts for {} edges",
                counts.len(),
                self.entries.len()
            )));
        }
        let mut p = Rational::one();
        for (&k, (l, beta)) in counts.iter().zip(&self.entries) {
            if k > *l {
                return Err(MutationError::OutOfRange { index: k, length: *l });
            }
            p *= Rational::from_integer(binomial(BigInt::from(*l), BigInt::from(k)))
                * pow_rat(beta, k)
                * pow_rat(&(Rational::one() - beta), *l - k);
        }
        Ok(p)
    }

    /// Precomputes exact inverse-cdf tables for repeated sampling.
    pub fn sampler(&self) -> MutationSampler {
        MutationSampler::new(self)
    }

    /// One weight function drawn from the distribution. For repeated draws
    /// build a [`MutationSampler`] once.
    pub fn sample_weights(
        &self,
        space: &GrnSpace,
        rng: &mut impl RngCore,
    ) -> Result<WeightFunction, MutationError> {
        self.validate_for(space)?;
        let sampler = self.sampler();
        let grid = space.quantized_grid();
        let counts = sampler.sample_counts(rng);
        Ok(grid.weight_function(&counts))
    }
}

/// Exact integer inverse-cdf sampler for per-edge binomial counts. Each draw
/// compares a uniform integer below `denom(beta)^l` against cumulative pmf
/// numerators, so sampled frequencies match the rational pmf exactly.
/// Denominators fitting a `u64` sample without heap allocation.
pub struct MutationSampler {
    per_edge: Vec<EdgeSampler>,
}

enum EdgeSampler {
    Small { thresholds: Vec<u64>, denom: u64 },
    Big { thresholds: Vec<BigUint>, denom: BigUint },
}

impl MutationSampler {
    fn new(dist: &MutationDistribution) -> MutationSampler {
        let per_edge = dist
            .entries
            .iter()
            .map(|(l, beta)| {
                let num = beta.numer().to_biguint().expect("beta >= 0");
                let den = beta.denom().to_biguint().expect("positive denominator");
                let comp = &den - &num;
                let mut acc = BigUint::zero();
                let thresholds: Vec<BigUint> = (0..=*l)
                    .map(|k| {
                        let ways = binomial(BigUint::from(*l), BigUint::from(k));
                        acc += ways * num.pow(k) * comp.pow(*l - k);
                        acc.clone()
                    })
                    .collect();
                let denom = den.pow(*l);
                match denom.to_u64() {
                    Some(d) => EdgeSampler::Small {
                        thresholds: thresholds
                            .iter()
                            .map(|t| t.to_u64().expect("below denom"))
                            .collect(),
                        denom: d,
                    },
                    None => EdgeSampler::Big { thresholds, denom },
                }
            })
            .collect();
        MutationSampler { per_edge }
    }

    /// Draws one count per edge.
    pub fn sample_counts(&self, rng: &mut impl RngCore) -> Vec<u32> {
        let mut counts = Vec::with_capacity(self.per_edge.len());
        for e in &self.per_edge {
            counts.push(self.draw(e, rng));
        }
        counts
    }

    fn draw(&self, edge: &EdgeSampler, rng: &mut impl RngCore) -> u32 {
        match edge {
            EdgeSampler::Small { thresholds, denom } => {
                let u = if *denom <= 1 {
                    0
                } else {
                    rand::Rng::random_range(rng, 0..*denom)
                };
                thresholds.iter().position(|&t| u < t).expect("cdf ends at denom") as u32
            }
            EdgeSampler::Big { thresholds, denom } => {
                let u = uniform_below(rng, denom);
                thresholds.iter().position(|t| u < *t).expect("cdf ends at denom") as u32
            }
        }
    }

    /// Draws one count-vector and materializes the corresponding weights.
    pub fn sample_point(&self, grid: &QuantizedGrid, rng: &mut impl RngCore) -> WeightFunction {
        grid.weight_function(&self.sample_counts(rng))
    }
}

/// Uniform integer in `[0, bound)` by rejection over the bound's bit width.
/// Bounds fitting a `u64` (every benchmark here) take the allocation-free
/// path.
fn uniform_below(rng: &mut impl RngCore, bound: &BigUint) -> BigUint {
    if bound <= &BigUint::one() {
        return BigUint::zero();
    }
    if let Some(b) = bound.to_u64() {
        return BigUint::from(rand::Rng::random_range(rng, 0..b));
    }
    let bits = bound.bits();
    let limbs = bits.div_ceil(32) as usize;
    let top_mask: u32 = if bits % 32 == 0 {
        u32::MAX
    } else {
        (1u32 << (bits % 32)) - 1
    };
    loop {
        let mut digits = vec![0u32; limbs];
        for d in digits.iter_mut() {
            *d = rng.next_u32();
        }
        digits[limbs - 1] &= top_mask;
        let candidate = BigUint::from_slice(&digits);
        if &candidate < bound {
            return candidate;
        }
    }
}

/// Mutation config file: `{"p": "1/100"}` derives `beta` from the symmetric
/// nucleotide chain (it is 3/4 for every positive `p`); `{"beta": "1/4"}`
/// overrides it directly. An empty object defaults to `beta = 3/4`.
#[derive(Debug, Clone, Default, Deserialize)]
pub struct MutationConfig {
    pub p: Option<String>,
    pub beta: Option<String>,
}

impl MutationConfig {
    pub fn from_json(text: &str) -> Result<Self, MutationError> {
        serde_json::from_str(text).map_err(|e| MutationError::File(e.to_string()))
    }

    /// The stationary mutation probability this config selects.
    pub fn resolve_beta(&self) -> Result<Rational, MutationError> {
        if self.p.is_some() && self.beta.is_some() {
            return Err(MutationError::File(
                "config sets both \"p\" and \"beta\"".into(),
            ));
        }
        if let Some(beta) = &self.beta {
            let b = parse_rational(beta).map_err(|e| MutationError::File(e.to_string()))?;
            if !in_unit_interval(&b) {
                return Err(MutationError::File(format!(
                    "beta = {} not in [0, 1]",
                    format_rational(&b)
                )));
            }
            return Ok(b);
        }
        if let Some(p) = &self.p {
            let p = parse_rational(p).map_err(|e| MutationError::File(e.to_string()))?;
            return LumpedNucleotideChain::from_mutation_rate(&p)?.stationary_beta();
        }
        Ok(rat(3, 4))
    }
}

// A helper so tests and robustness can turn a beta into integer pmf
// numerators over denom(beta)^l.
pub(crate) fn pmf_numerators(l: u32, beta: &Rational) -> (Vec<BigUint>, BigUint) {
    let num = beta.numer().to_biguint().expect("beta >= 0");
    let den = beta.denom().to_biguint().expect("positive denominator");
    let comp = &den - &num;
    let numerators = (0..=l)
        .map(|k| binomial(BigUint::from(l), BigUint::from(k)) * num.pow(k) * comp.pow(l - k))
        .collect();
    (numerators, den.pow(l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_rate_gives_identity_chain() {
        let c = LumpedNucleotideChain::from_mutation_rate(&Rational::zero()).unwrap();
        assert_eq!(c.p00, Rational::one());
        assert_eq!(c.p01, Rational::zero());
        assert_eq!(c.p10, Rational::zero());
        assert_eq!(c.p11, Rational::one());
        assert!(c.stationary_beta().is_err());
    }

    #[test]
    fn rate_three_quarters_gives_equal_rows() {
        let c = LumpedNucleotideChain::from_mutation_rate(&rat(3, 4)).unwrap();
        assert_eq!((c.p00, c.p01), (rat(1, 4), rat(3, 4)));
        assert_eq!((c.p10, c.p11), (rat(1, 4), rat(3, 4)));
    }

    #[test]
    fn small_rate_rows() {
        let c = LumpedNucleotideChain::from_mutation_rate(&rat(1, 100)).unwrap();
        assert_eq!((c.p00.clone(), c.p01.clone()), (rat(99, 100), rat(1, 100)));
        assert_eq!((c.p10, c.p11), (rat(1, 300), rat(299, 300)));
    }

    #[test]
    fn beta_is_three_quarters_for_any_positive_rate() {
        for p in [rat(1, 100), rat(1, 10), rat(1, 2), Rational::one()] {
            let c = LumpedNucleotideChain::from_mutation_rate(&p).unwrap();
            assert_eq!(c.stationary_beta().unwrap(), rat(3, 4));
        }
    }

    #[test]
    fn beta_special_cases() {
        let symmetric =
            LumpedNucleotideChain::new(rat(1, 2), rat(1, 2), rat(1, 2), rat(1, 2)).unwrap();
        assert_eq!(symmetric.stationary_beta().unwrap(), rat(1, 2));
        let absorbing =
            LumpedNucleotideChain::new(Rational::one(), Rational::zero(), rat(1, 3), rat(2, 3))
                .unwrap();
        assert_eq!(absorbing.stationary_beta().unwrap(), Rational::zero());
    }

    #[test]
    fn single_nucleotide_chain_reduces_to_base() {
        let base = LumpedNucleotideChain::from_mutation_rate(&rat(1, 10)).unwrap();
        let chain = MutationCountChain::new(1, base.clone()).unwrap();
        assert_eq!(chain.transition(0, 1).unwrap(), base.p01);
        assert_eq!(chain.transition(1, 0).unwrap(), base.p10);
        assert_eq!(chain.transition(0, 0).unwrap(), base.p00);
        assert_eq!(chain.transition(1, 1).unwrap(), base.p11);
    }

    #[test]
    fn quarter_p00_rows_are_binomial_and_identical() {
        // p00 = 1/4 with p01 = p11 = 3/4, p10 = 1/4: every row equals
        // Binomial(l, 3/4).
        let base =
            LumpedNucleotideChain::new(rat(1, 4), rat(3, 4), rat(1, 4), rat(3, 4)).unwrap();
        for l in [1u32, 2, 3, 5] {
            let chain = MutationCountChain::new(l, base.clone()).unwrap();
            let pmf = binomial_pmf(l, &rat(3, 4));
            for i in 0..=l {
                for j in 0..=l {
                    assert_eq!(chain.transition(i, j).unwrap(), pmf[j as usize]);
                }
            }
        }
    }

    #[test]
    fn rows_sum_to_one_exactly() {
        let base = LumpedNucleotideChain::from_mutation_rate(&rat(1, 10)).unwrap();
        for l in [1u32, 2, 3, 5, 12] {
            let chain = MutationCountChain::new(l, base.clone()).unwrap();
            for i in 0..=l {
                let sum: Rational = (0..=l)
                    .map(|j| chain.transition(i, j).unwrap())
                    .sum();
                assert_eq!(sum, Rational::one(), "row {i} of l={l}");
            }
        }
    }

    #[test]
    fn all_transitions_positive_for_interior_rate() {
        let base = LumpedNucleotideChain::from_mutation_rate(&rat(1, 10)).unwrap();
        let chain = MutationCountChain::new(5, base).unwrap();
        for i in 0..=5 {
            for j in 0..=5 {
                assert!(chain.transition(i, j).unwrap().is_positive());
            }
        }
    }

    #[test]
    fn stationary_is_fixed_point_of_transition_matrix() {
        let base = LumpedNucleotideChain::from_mutation_rate(&rat(1, 10)).unwrap();
        for l in [1u32, 2, 5] {
            let chain = MutationCountChain::new(l, base.clone()).unwrap();
            let pi = chain.stationary().unwrap();
            let t = chain.transition_matrix();
            for j in 0..=(l as usize) {
                let mut acc = Rational::zero();
                for i in 0..=(l as usize) {
                    acc += &pi[i] * &t[i][j];
                }
                assert_eq!(acc, pi[j], "column {j} of l={l}");
            }
        }
    }

    #[test]
    fn stationary_counts_examples() {
        let base =
            LumpedNucleotideChain::new(rat(1, 4), rat(3, 4), rat(1, 4), rat(3, 4)).unwrap();
        let chain = MutationCountChain::new(2, base.clone()).unwrap();
        assert_eq!(
            chain.stationary().unwrap(),
            vec![rat(1, 16), rat(6, 16), rat(9, 16)]
        );
        let one = MutationCountChain::new(1, base).unwrap();
        assert_eq!(one.stationary().unwrap(), vec![rat(1, 4), rat(3, 4)]);
    }

    #[test]
    fn weight_quantization() {
        assert_eq!(
            weight_from_count(&rat(2, 3), 0, 12).unwrap(),
            rat(2, 3)
        );
        assert_eq!(
            weight_from_count(&rat(2, 3), 12, 12).unwrap(),
            Rational::zero()
        );
        assert_eq!(weight_from_count(&rat(2, 3), 3, 12).unwrap(), rat(1, 2));
        assert!(weight_from_count(&rat(2, 3), 13, 12).is_err());
    }

    #[test]
    fn genome_pmf_matches_hand_values() {
        let space = crate::catalog::find("bistable").unwrap().space().unwrap();
        let dist = MutationDistribution::uniform_beta(&space, rat(3, 4)).unwrap();
        let zero = vec![0u32; 6];
        let expected = pow_rat(&rat(1, 4), 12).pow(6);
        assert_eq!(dist.genome_pmf(&zero).unwrap(), expected);
    }

    #[test]
    fn genome_pmf_sums_to_one_on_small_grid() {
        // Two-edge toy space, lengths 2 each.
        let space = two_edge_space();
        let dist = MutationDistribution::uniform_beta(&space, rat(3, 4)).unwrap();
        let mut total = Rational::zero();
        for k0 in 0..=2u32 {
            for k1 in 0..=2u32 {
                total += dist.genome_pmf(&[k0, k1]).unwrap();
            }
        }
        assert_eq!(total, Rational::one());
    }

    #[test]
    fn single_edge_pmf_example() {
        let space = one_edge_space(2);
        let dist = MutationDistribution::uniform_beta(&space, rat(3, 4)).unwrap();
        assert_eq!(dist.genome_pmf(&[1]).unwrap(), rat(3, 8));
    }

    #[test]
    fn degenerate_betas_sample_deterministically() {
        let space = one_edge_space(4);
        let grid = space.quantized_grid();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let always_max = MutationDistribution::uniform_beta(&space, Rational::zero()).unwrap();
        let w = always_max.sample_weights(&space, &mut rng).unwrap();
        assert_eq!(w, space.max_weights());
        let always_zero = MutationDistribution::uniform_beta(&space, Rational::one()).unwrap();
        let w = always_zero.sample_weights(&space, &mut rng).unwrap();
        assert_eq!(w.get(0), grid.value(0, 4));
        assert!(w.get(0).is_zero());
    }

    #[test]
    fn sampling_is_reproducible_and_on_grid() {
        let space = crate::catalog::find("bistable").unwrap().space().unwrap();
        let dist = MutationDistribution::uniform_beta(&space, rat(1, 4)).unwrap();
        let grid = space.quantized_grid();
        let sampler = dist.sampler();
        let mut a = ChaCha8Rng::seed_from_u64(42);
        let mut b = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..50 {
            let wa = sampler.sample_point(&grid, &mut a);
            let wb = sampler.sample_point(&grid, &mut b);
            assert_eq!(wa, wb);
            assert!(grid.contains(&wa));
        }
    }

    #[test]
    fn config_resolution() {
        assert_eq!(
            MutationConfig::from_json(r#"{"p":"1/100"}"#)
                .unwrap()
                .resolve_beta()
                .unwrap(),
            rat(3, 4)
        );
        assert_eq!(
            MutationConfig::from_json(r#"{"beta":"1/4"}"#)
                .unwrap()
                .resolve_beta()
                .unwrap(),
            rat(1, 4)
        );
        assert_eq!(
            MutationConfig::from_json("{}").unwrap().resolve_beta().unwrap(),
            rat(3, 4)
        );
        assert!(MutationConfig::from_json(r#"{"p":"1/2","beta":"1/2"}"#)
            .unwrap()
            .resolve_beta()
            .is_err());
    }

    fn one_edge_space(length: u32) -> GrnSpace {
        crate::model::GrnSpace::new(
            ("IN", rat(-1, 1)),
            vec![("A".into(), rat(1, 2))],
            vec![crate::model::EdgeDef {
                from: "IN".into(),
                to: "A".into(),
                sign: crate::model::Sign::Activate,
                w_max: Rational::one(),
                length,
            }],
        )
        .unwrap()
    }

    fn two_edge_space() -> GrnSpace {
        crate::model::GrnSpace::new(
            ("IN", rat(-1, 1)),
            vec![("A".into(), rat(1, 2)), ("B".into(), rat(1, 2))],
            vec![
                crate::model::EdgeDef {
                    from: "IN".into(),
                    to: "A".into(),
                    sign: crate::model::Sign::Activate,
                    w_max: Rational::one(),
                    length: 2,
                },
                crate::model::EdgeDef {
                    from: "IN".into(),
                    to: "B".into(),
                    sign: crate::model::Sign::Activate,
                    w_max: Rational::one(),
                    length: 2,
                },
            ],
        )
        .unwrap()
    }
}
