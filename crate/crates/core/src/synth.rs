//! Constraint synthesis: the parametrized transition system over symbolic
//! edge weights, and the depth-first search that collects the negated run
//! constraints of every feasible counterexample to an LTL property.
//!
//! The search unfolds runs from every initial state in canonical order. A
//! branch extends only while its accumulated run constraint stays feasible,
//! and stops as soon as (a) the three-valued prefix verdict of the negated
//! property becomes definite, or (b) a state repeats within the branch,
//! closing a lasso whose exact verdict decides the branch. Distinct states
//! along a branch bound the depth by the state count.

use crate::constraints::{
    Bounds, ConstraintSet, FeasibilityContext, LinearAtom, RunConstraint,
};
use crate::logic::{eval_lasso, eval_prefix, BoundLtl, Verdict};
use crate::model::{GrnSpace, GrnState, LassoRun, ModelError, Sign, WeightFunction};
use crate::rational::Rational;
use num_traits::One;

/// A GRN space viewed as a transition system between all state pairs, with
/// edges labelled by the linear constraints enabling them. Edge weights map to
/// symbolic variables identified with the space's edge indices.
pub struct ParametrizedTs<'a> {
    space: &'a GrnSpace,
}

impl<'a> ParametrizedTs<'a> {
    pub fn new(space: &'a GrnSpace) -> ParametrizedTs<'a> {
        ParametrizedTs { space }
    }

    pub fn space(&self) -> &'a GrnSpace {
        self.space
    }

    /// The transition label between two states: one atom per non-input gene,
    /// asserting that its weighted input sum exceeds the threshold exactly
    /// when the gene is active in the successor. Atoms only reference the
    /// variables of edges into that gene whose source is active in `s`.
    pub fn edge_constraint(&self, s: GrnState, s2: GrnState) -> RunConstraint {
        let mut rc = RunConstraint::new();
        for g in 1..self.space.gene_count() {
            let mut coeffs: Vec<(usize, Rational)> = Vec::new();
            for &e in self.space.in_edges(g) {
                let edge = &self.space.edges()[e];
                if s.is_active(edge.from) {
                    let c = match edge.sign {
                        Sign::Activate => Rational::one(),
                        Sign::Repress => -Rational::one(),
                    };
                    coeffs.push((e, c));
                }
            }
            // sum - t(g) > 0 when the gene turns on; its negation otherwise.
            let on = LinearAtom::new(coeffs, -self.space.threshold(g), true);
            rc.insert(if s2.is_active(g) { on } else { on.negated() });
        }
        rc
    }
}

/// Synthesizes the CNF characterizing the weight functions under which the
/// space satisfies `phi`: the conjunction, over all feasible runs violating
/// `phi`, of the negated run constraints. A property with no counterexamples
/// yields the empty (true) set; output order is deterministic.
pub fn gencons(ts: &ParametrizedTs<'_>, phi: &BoundLtl) -> ConstraintSet {
    let space = ts.space();
    let states = space.enumerate_states();
    let mut set = ConstraintSet::trivially_true();
    let mut search = Search {
        ts,
        phi,
        states: &states,
        ctx: FeasibilityContext::new(Bounds::from_space(space)),
        run: Vec::new(),
        clauses: Vec::new(),
    };
    for &s0 in &states {
        search.run.push(s0);
        search.explore();
        search.run.pop();
        debug_assert_eq!(search.ctx.depth(), 0);
    }
    for clause in search.clauses {
        set.push_clause(clause);
    }
    set
}

struct Search<'a, 'b> {
    ts: &'a ParametrizedTs<'b>,
    phi: &'a BoundLtl,
    states: &'a [GrnState],
    ctx: FeasibilityContext,
    run: Vec<GrnState>,
    clauses: Vec<Vec<LinearAtom>>,
}

impl Search<'_, '_> {
    fn emit_counterexample(&mut self) {
        let clause = RunConstraint::from_atoms(self.ctx.atoms().iter().cloned())
            .negation_clause();
        self.clauses.push(clause);
    }

    fn explore(&mut self) {
        // Definite prefix verdicts are extension-invariant: a true negated
        // property emits the branch's clause, a false one prunes it.
        match eval_prefix(self.phi, &self.run).negate() {
            Verdict::True => {
                self.emit_counterexample();
                return;
            }
            Verdict::False => return,
            Verdict::Undefined => {}
        }
        let last = *self.run.last().expect("nonempty run");
        for &next in self.states {
            let rc = self.ts.edge_constraint(last, next);
            let mut ok = true;
            for atom in rc.atoms() {
                ok = self.ctx.push(atom.clone());
            }
            if ok {
                if let Some(loop_start) = self.run.iter().position(|&s| s == next) {
                    // Lasso closed: the infinite unrolling decides the branch.
                    let lasso = LassoRun {
                        states: self.run.clone(),
                        loop_start,
                    };
                    if !eval_lasso(self.phi, &lasso) {
                        self.emit_counterexample();
                    }
                } else {
                    self.run.push(next);
                    self.explore();
                    self.run.pop();
                }
            }
            for _ in 0..rc.len() {
                self.ctx.pop().expect("balanced pops");
            }
        }
    }
}

/// Checks a concrete individual by executing it: the property must hold on
/// the run from every initial state.
pub fn verify_by_execution(
    space: &GrnSpace,
    w: &WeightFunction,
    phi: &BoundLtl,
) -> Result<bool, ModelError> {
    space.validate_weights(w)?;
    for s0 in space.enumerate_states() {
        let run = space.run_to_lasso(w, s0)?;
        if !eval_lasso(phi, &run) {
            return Ok(false);
        }
    }
    Ok(true)
}
