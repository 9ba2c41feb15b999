//! Mutational robustness of a GRN population: the probability mass, under the
//! mutation-induced weight distribution, of individuals satisfying a
//! property. Computed exactly by enumerating the quantized grid, or
//! statistically by seeded sampling with either the execution method
//! (simulate and check the property) or the evaluation method (evaluate
//! pre-synthesized constraints).

use crate::constraints::{CompiledSet, ConstraintSet};
use crate::logic::BoundLtl;
use crate::model::GrnSpace;
use crate::mutation::{pmf_numerators, MutationDistribution, MutationError};
use crate::rational::{format_rational, rational_to_f64, Rational};
use crate::synth::verify_by_execution;
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;
use std::time::Instant;
use thiserror::Error;

/// Default cap on exact-enumeration grid size.
pub const DEFAULT_EXACT_BUDGET: u64 = 10_000_000;

/// Errors from robustness computation.
#[derive(Debug, Error)]
pub enum RobustnessError {
    #[error(
        "quantized grid has {points} points, above the exact budget {budget}; \
         use sampling or raise the budget"
    )]
    BudgetExceeded { points: u64, budget: u64 },
    #[error(transparent)]
    Mutation(#[from] MutationError),
    #[error("constraint evaluation: {0}")]
    Constraints(#[from] crate::constraints::ConstraintError),
    #[error("execution: {0}")]
    Model(#[from] crate::model::ModelError),
    #[error("sampling needs samples >= 1 and repeats >= 1")]
    EmptyPlan,
}

/// A GRN space together with the mutation distribution over its weights.
#[derive(Debug, Clone)]
pub struct GrnPopulation {
    space: GrnSpace,
    dist: MutationDistribution,
}

impl GrnPopulation {
    pub fn new(space: GrnSpace, dist: MutationDistribution) -> Result<Self, MutationError> {
        dist.validate_for(&space)?;
        Ok(GrnPopulation { space, dist })
    }

    pub fn space(&self) -> &GrnSpace {
        &self.space
    }

    pub fn dist(&self) -> &MutationDistribution {
        &self.dist
    }
}

/// How individuals are checked against the property.
pub enum Checker<'a> {
    /// Evaluation method: a synthesized constraint set.
    Constraints(&'a ConstraintSet),
    /// Execution method: simulate the dynamics and check the property.
    Execution(&'a BoundLtl),
}

/// How a robustness figure was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exact,
    SampleExec,
    SampleEval,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::SampleExec => "sample-exec",
            Method::SampleEval => "sample-eval",
        }
    }
}

/// A robustness figure with its precision and provenance.
#[derive(Debug, Clone)]
pub struct RobustnessEstimate {
    pub method: Method,
    /// Point estimate in [0, 1].
    pub mean: f64,
    /// Exact value when the method is exact.
    pub mean_exact: Option<Rational>,
    /// Sample variance of the per-repeat fractions (0 for exact).
    pub variance: f64,
    /// 95% confidence interval from the normal approximation over repeats;
    /// collapses to the point for the exact method.
    pub ci95: (f64, f64),
    /// Samples per repeat (grid points for exact).
    pub samples: u64,
    pub repeats: u32,
    /// Mean wall-clock seconds per individual check, when measured.
    pub per_check_secs: Option<f64>,
    /// Constraint-synthesis seconds, when the evaluation method was used.
    pub synthesis_secs: Option<f64>,
}

impl RobustnessEstimate {
    /// The report JSON emitted by the CLI and bench tooling.
    pub fn to_json(&self) -> serde_json::Value {
        let mut obj = json!({
            "method": self.method.name(),
            "mean": self.mean,
            "variance": self.variance,
            "ci95": [self.ci95.0, self.ci95.1],
            "samples": self.samples,
            "repeats": self.repeats,
        });
        let map = obj.as_object_mut().expect("object");
        if let Some(exact) = &self.mean_exact {
            map.insert("mean_exact".into(), json!(format_rational(exact)));
        }
        if let Some(sec) = self.per_check_secs {
            let key = match self.method {
                Method::SampleExec => "k_ex_sec",
                _ => "k_ev_sec",
            };
            map.insert(key.into(), json!(sec));
        }
        if let Some(sec) = self.synthesis_secs {
            map.insert("t_c_sec".into(), json!(sec));
        }
        obj
    }
}

/// Exact robustness: sums the genome pmf over every satisfying point of the
/// quantized grid. Rejects grids above `budget` points.
pub fn robustness_exact(
    pop: &GrnPopulation,
    checker: &Checker<'_>,
    budget: u64,
) -> Result<RobustnessEstimate, RobustnessError> {
    let grid = pop.space.quantized_grid();
    let points = grid
        .total_points()
        .ok_or(RobustnessError::BudgetExceeded {
            points: u64::MAX,
            budget,
        })?;
    if points > budget {
        return Err(RobustnessError::BudgetExceeded { points, budget });
    }

    // Integer pmf: numerators over the common denominator prod denom^l.
    let mut edge_numerators: Vec<Vec<BigUint>> = Vec::new();
    let mut denominator = BigUint::from(1u8);
    for (l, beta) in pop.dist.entries() {
        let (nums, den) = pmf_numerators(*l, beta);
        edge_numerators.push(nums);
        denominator *= den;
    }
    // Narrow path: when the largest possible per-point product fits u128 with
    // room for a whole chunk of additions, sum chunks in machine words.
    let chunk = 1u64 << 14;
    let narrow: Option<Vec<Vec<u128>>> = edge_numerators
        .iter()
        .map(|nums| {
            nums.iter()
                .map(|n| n.to_u128())
                .collect::<Option<Vec<u128>>>()
        })
        .collect::<Option<Vec<_>>>()
        .filter(|tables| {
            tables
                .iter()
                .try_fold(1u128, |acc, t| {
                    acc.checked_mul(*t.iter().max().unwrap_or(&1))
                })
                .is_some_and(|max_term| max_term <= u128::MAX / chunk as u128)
        });

    let compiled = match checker {
        Checker::Constraints(set) => Some(CompiledSet::compile(set, &grid)?),
        Checker::Execution(_) => None,
    };

    let started = Instant::now();
    let chunk_count = points.div_ceil(chunk);
    let numerator: BigUint = (0..chunk_count)
        .into_par_iter()
        .map(|c| {
            let start = c * chunk;
            let stop = (start + chunk).min(points);
            let mut counts = grid.decode_index(start);
            let mut acc = BigUint::zero();
            let mut acc_narrow = 0u128;
            for _ in start..stop {
                let satisfied = match (&compiled, checker) {
                    (Some(set), _) => set.eval(&counts),
                    (None, Checker::Execution(phi)) => {
                        let w = grid.weight_function(&counts);
                        verify_by_execution(&pop.space, &w, phi).expect("validated space")
                    }
                    (None, Checker::Constraints(_)) => unreachable!("compiled above"),
                };
                if satisfied {
                    match &narrow {
                        Some(tables) => {
                            let mut term = 1u128;
                            for (e, &k) in counts.iter().enumerate() {
                                term *= tables[e][k as usize];
                            }
                            acc_narrow += term;
                        }
                        None => {
                            let mut term = BigUint::from(1u8);
                            for (e, &k) in counts.iter().enumerate() {
                                term *= &edge_numerators[e][k as usize];
                            }
                            acc += term;
                        }
                    }
                }
                grid.advance(&mut counts);
            }
            if acc_narrow > 0 {
                acc += BigUint::from(acc_narrow);
            }
            acc
        })
        .reduce(BigUint::zero, |a, b| a + b);
    let elapsed = started.elapsed().as_secs_f64();

    let exact = Rational::new(numerator.into(), denominator.into());
    let mean = rational_to_f64(&exact);
    Ok(RobustnessEstimate {
        method: Method::Exact,
        mean,
        mean_exact: Some(exact),
        variance: 0.0,
        ci95: (mean, mean),
        samples: points,
        repeats: 1,
        per_check_secs: Some(elapsed / points.max(1) as f64),
        synthesis_secs: None,
    })
}

/// Statistical robustness: `repeats` independent experiments of `samples`
/// draws each; reports the mean and sample variance of the per-experiment
/// satisfaction fractions and a 95% normal-approximation interval for the
/// mean. Deterministic for a fixed `(seed, samples, repeats)`: repeat `r`
/// uses its own counter-mode RNG stream, so results do not depend on the
/// worker count.
pub fn robustness_sampled(
    pop: &GrnPopulation,
    checker: &Checker<'_>,
    samples: u64,
    repeats: u32,
    seed: u64,
) -> Result<RobustnessEstimate, RobustnessError> {
    if samples == 0 || repeats == 0 {
        return Err(RobustnessError::EmptyPlan);
    }
    let grid = pop.space.quantized_grid();
    let sampler = pop.dist.sampler();

    let started = Instant::now();
    let fractions: Vec<f64> = (0..repeats)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64 + 1);
            let mut hits = 0u64;
            for _ in 0..samples {
                let w = sampler.sample_point(&grid, &mut rng);
                let ok = match checker {
                    Checker::Constraints(set) => set.eval(&w).expect("bound variables"),
                    Checker::Execution(phi) => {
                        verify_by_execution(&pop.space, &w, phi).expect("validated space")
                    }
                };
                if ok {
                    hits += 1;
                }
            }
            hits as f64 / samples as f64
        })
        .collect();
    let elapsed = started.elapsed().as_secs_f64();

    let n = fractions.len() as f64;
    let mean = fractions.iter().sum::<f64>() / n;
    let variance = if fractions.len() > 1 {
        fractions.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let half = 1.96 * (variance / n).sqrt();
    Ok(RobustnessEstimate {
        method: match checker {
            Checker::Constraints(_) => Method::SampleEval,
            Checker::Execution(_) => Method::SampleExec,
        },
        mean,
        mean_exact: None,
        variance,
        ci95: (mean - half, mean + half),
        samples,
        repeats,
        per_check_secs: Some(elapsed / (samples * repeats as u64) as f64),
        synthesis_secs: None,
    })
}

/// One timing row of the method benchmark.
#[derive(Debug, Clone)]
pub struct BenchRow {
    pub method: Method,
    pub samples: u64,
    pub seconds: f64,
}

/// Timing comparison of the execution and evaluation methods over a grid of
/// sample counts, with least-squares fits of `t_ex = k_ex * p` and
/// `t_ev = k_ev * p + t_c`.
#[derive(Debug, Clone)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    /// Per-sample seconds of the execution method (through-origin fit).
    pub k_ex: f64,
    /// Per-sample seconds of the evaluation method (affine fit slope).
    pub k_ev: f64,
    /// Affine fit intercept of the evaluation method.
    pub t_ev_intercept: f64,
    /// Separately measured constraint-synthesis seconds.
    pub t_c_measured: f64,
    /// Speed ratio `k_ex / k_ev`; above 1 when evaluation wins per sample.
    pub ratio: f64,
}

impl BenchReport {
    /// CSV with `method,samples,seconds` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("method,samples,seconds\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{:.9}\n",
                row.method.name(),
                row.samples,
                row.seconds
            ));
        }
        out
    }
}

/// Runs both methods sequentially over `sample_grid` draws. Each evaluation
/// run re-synthesizes the constraints so its total time carries the
/// `t_c` offset that the affine fit recovers; the execution runs time pure
/// simulation. Sampling streams are fixed per run, so both methods check the
/// same individuals.
pub fn bench_methods(
    pop: &GrnPopulation,
    phi: &BoundLtl,
    sample_grid: &[u64],
    seed: u64,
) -> Result<BenchReport, RobustnessError> {
    if sample_grid.is_empty() {
        return Err(RobustnessError::EmptyPlan);
    }
    let grid = pop.space.quantized_grid();
    let sampler = pop.dist.sampler();

    let t0 = Instant::now();
    let ts = crate::synth::ParametrizedTs::new(&pop.space);
    let baseline = crate::synth::gencons(&ts, phi).simplify();
    let t_c_measured = t0.elapsed().as_secs_f64();
    drop(baseline);

    let mut rows = Vec::new();
    for &n in sample_grid {
        // Execution method: simulate every sampled individual.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(1);
        let started = Instant::now();
        let mut hits = 0u64;
        for _ in 0..n {
            let w = sampler.sample_point(&grid, &mut rng);
            if verify_by_execution(&pop.space, &w, phi)? {
                hits += 1;
            }
        }
        rows.push(BenchRow {
            method: Method::SampleExec,
            samples: n,
            seconds: started.elapsed().as_secs_f64(),
        });
        std::hint::black_box(hits);

        // Evaluation method: synthesis plus per-sample constraint evaluation.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(1);
        let started = Instant::now();
        let set = crate::synth::gencons(&ts, phi).simplify();
        let mut hits = 0u64;
        for _ in 0..n {
            let w = sampler.sample_point(&grid, &mut rng);
            if set.eval(&w)? {
                hits += 1;
            }
        }
        rows.push(BenchRow {
            method: Method::SampleEval,
            samples: n,
            seconds: started.elapsed().as_secs_f64(),
        });
        std::hint::black_box(hits);
    }

    let exec_rows: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.method == Method::SampleExec)
        .map(|r| (r.samples as f64, r.seconds))
        .collect();
    let eval_rows: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.method == Method::SampleEval)
        .map(|r| (r.samples as f64, r.seconds))
        .collect();

    let k_ex = fit_through_origin(&exec_rows);
    let (k_ev, t_ev_intercept) = fit_affine(&eval_rows);
    Ok(BenchReport {
        rows,
        k_ex,
        k_ev,
        t_ev_intercept,
        t_c_measured,
        ratio: k_ex / k_ev,
    })
}

fn fit_through_origin(points: &[(f64, f64)]) -> f64 {
    let num: f64 = points.iter().map(|(x, y)| x * y).sum();
    let den: f64 = points.iter().map(|(x, _)| x * x).sum();
    num / den
}

fn fit_affine(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|(x, _)| x).sum();
    let sy: f64 = points.iter().map(|(_, y)| y).sum();
    let sxx: f64 = points.iter().map(|(x, _)| x * x).sum();
    let sxy: f64 = points.iter().map(|(x, y)| x * y).sum();
    let den = n * sxx - sx * sx;
    if den == 0.0 {
        // Single sample count: no slope information.
        return (sy / sx.max(1.0), 0.0);
    }
    let slope = (n * sxy - sx * sy) / den;
    let intercept = (sy - slope * sx) / n;
    (slope, intercept)
}
