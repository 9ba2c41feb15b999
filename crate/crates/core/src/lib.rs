//! Constraint synthesis and mutational robustness for weighted Boolean gene
//! regulatory networks.
//!
//! Given a network topology with per-edge weight ranges (a *GRN space*) and a
//! linear temporal logic property, [`synth::gencons`] produces exact linear
//! constraints on the edge weights that hold for precisely the weight
//! functions whose network satisfies the property. A Markov-chain mutation
//! model ([`mutation`]) induces a distribution over the quantized weight
//! lattice, and [`robustness`] integrates the satisfying region against it,
//! exactly or by seeded sampling.
//!
//! Modules follow the pipeline: [`model`] (spaces, states, dynamics),
//! [`logic`] (LTL parsing and evaluation), [`constraints`] (exact linear
//! arithmetic and feasibility), [`synth`] (constraint generation),
//! [`mutation`] (the mutation chain), [`robustness`] (population measures),
//! [`catalog`] (bundled benchmark networks).

pub mod catalog;
pub mod constraints;
pub mod logic;
pub mod model;
pub mod mutation;
pub mod rational;
pub mod robustness;
pub mod synth;

pub use constraints::{
    Bounds, CompiledSet, ConstraintError, ConstraintSet, FeasibilityContext, LinearAtom,
    RunConstraint,
};
pub use logic::{eval_lasso, eval_prefix, parse_ltl, BoundLtl, Ltl, LtlFormula, Verdict};
pub use model::{Edge, EdgeDef, GrnSpace, GrnState, LassoRun, ModelError, QuantizedGrid, Sign, WeightFunction};
pub use mutation::{
    binomial_pmf, weight_from_count, LumpedNucleotideChain, MutationConfig, MutationCountChain,
    MutationDistribution, MutationError, MutationSampler,
};
pub use rational::{format_rational, parse_rational, rational_to_f64, Rational};
pub use robustness::{
    bench_methods, robustness_exact, robustness_sampled, BenchReport, Checker, GrnPopulation,
    Method, RobustnessError, RobustnessEstimate, DEFAULT_EXACT_BUDGET,
};
pub use synth::{gencons, verify_by_execution, ParametrizedTs};
