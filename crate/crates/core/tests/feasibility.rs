//! Randomized validation of the Fourier-Motzkin feasibility engine against an
//! independent vertex-enumeration oracle, plus stack-discipline checks for
//! the incremental context.

mod common;

use common::{oracle_feasible, random_atom};
use grnsynth::constraints::feasible_atoms;
use grnsynth::{Bounds, FeasibilityContext, LinearAtom, Rational};
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn unit_bounds(n: usize) -> Bounds {
    Bounds::new(vec![Rational::zero(); n], vec![Rational::one(); n])
}

#[test]
fn agrees_with_vertex_enumeration_oracle() {
    let mut rng = StdRng::seed_from_u64(0xfa57);
    let mut feasible_seen = 0u32;
    let mut infeasible_seen = 0u32;
    for case in 0..1500 {
        let n = rng.random_range(2..=3usize);
        let m = rng.random_range(1..=4usize);
        let atoms: Vec<LinearAtom> = (0..m).map(|_| random_atom(&mut rng, n)).collect();
        let bounds = unit_bounds(n);
        let ours = feasible_atoms(&atoms, &bounds);
        let oracle = oracle_feasible(&atoms, &bounds, n);
        assert_eq!(ours.is_some(), oracle, "case {case}: atoms {atoms:?}");
        match &ours {
            Some(witness) => {
                feasible_seen += 1;
                for a in &atoms {
                    assert!(
                        a.eval_values(witness).unwrap(),
                        "witness violates {a} in case {case}"
                    );
                }
                for (v, x) in witness.iter().enumerate() {
                    assert!(
                        !x.is_negative() && *x <= Rational::one(),
                        "witness leaves the box at v{v}"
                    );
                }
            }
            None => infeasible_seen += 1,
        }
    }
    // The random family must exercise both outcomes.
    assert!(feasible_seen > 100, "only {feasible_seen} feasible cases");
    assert!(infeasible_seen > 100, "only {infeasible_seen} infeasible cases");
}

use num_traits::Signed;

#[test]
fn strictness_boundaries_for_random_constants() {
    let mut rng = StdRng::seed_from_u64(0x57c7);
    for _ in 0..200 {
        let c = common::rat(rng.random_range(0..=8), rng.random_range(1..=8));
        if c > Rational::one() {
            continue;
        }
        let ge = LinearAtom::new(vec![(0, Rational::one())], -c.clone(), false);
        let le = LinearAtom::new(vec![(0, -Rational::one())], c.clone(), false);
        let gt = LinearAtom::new(vec![(0, Rational::one())], -c.clone(), true);
        let bounds = unit_bounds(1);
        let point = feasible_atoms(&[ge.clone(), le.clone()], &bounds).expect("x = c");
        assert_eq!(point[0], c);
        assert!(feasible_atoms(&[gt, le], &bounds).is_none());
    }
}

#[test]
fn random_push_pop_stacks_match_from_scratch() {
    let mut rng = StdRng::seed_from_u64(0x9097);
    let mut queries = 0u32;
    for _ in 0..300 {
        let n = rng.random_range(2..=3usize);
        let bounds = unit_bounds(n);
        let mut ctx = FeasibilityContext::new(bounds.clone());
        let mut stack: Vec<LinearAtom> = Vec::new();
        for _ in 0..40 {
            let push = stack.is_empty() || rng.random_bool(0.6);
            if push {
                let atom = random_atom(&mut rng, n);
                stack.push(atom.clone());
                ctx.push(atom);
            } else {
                stack.pop();
                ctx.pop().unwrap();
            }
            let expected = feasible_atoms(&stack, &bounds).is_some();
            assert_eq!(ctx.is_feasible(), expected, "stack {stack:?}");
            if let Some(w) = ctx.witness() {
                for a in &stack {
                    assert!(a.eval_values(w).unwrap());
                }
            }
            queries += 1;
        }
        for _ in 0..stack.len() {
            ctx.pop().unwrap();
        }
        assert!(ctx.is_feasible());
        assert!(ctx.pop().is_err());
    }
    assert_eq!(queries, 300 * 40);
}

#[test]
fn simplification_never_changes_sampled_verdicts() {
    use grnsynth::ConstraintSet;
    let mut rng = StdRng::seed_from_u64(0x51e9);
    for _ in 0..200 {
        let n = 3usize;
        let clause_count = rng.random_range(0..=5usize);
        let set = ConstraintSet::from_clauses((0..clause_count).map(|_| {
            let len = rng.random_range(0..=3usize);
            (0..len).map(|_| random_atom(&mut rng, n)).collect()
        }));
        let simplified = set.simplify();
        for _ in 0..50 {
            let point: Vec<Rational> = (0..n)
                .map(|_| common::rat(rng.random_range(0..=8), 8))
                .collect();
            let a = eval_set_at(&set, &point);
            let b = eval_set_at(&simplified, &point);
            assert_eq!(a, b);
        }
    }
}

fn eval_set_at(set: &grnsynth::ConstraintSet, point: &[Rational]) -> bool {
    set.clauses().iter().all(|clause| {
        clause
            .iter()
            .any(|atom| atom.eval_values(point).unwrap())
    })
}
