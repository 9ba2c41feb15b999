//! Exact linear constraints over edge-weight variables.
//!
//! Atoms are (non-)strict inequalities `k_1 v_1 + ... + k_n v_n + t {>, >=} 0`
//! with arbitrary-precision rational coefficients; variables are edge indices
//! of a [`GrnSpace`](crate::model::GrnSpace). Conjunctions of atoms form run
//! constraints, and CNF sets of negated run constraints characterize the
//! weight region satisfying a property.
//!
//! Feasibility is decided by exact Fourier-Motzkin elimination with strictness
//! tracking (the combination of a strict and a non-strict bound is strict).
//! Every feasible verdict produces a rational witness inside the weight box.

use crate::model::{GrnSpace, QuantizedGrid, WeightFunction};
use crate::rational::{format_rational, parse_rational, rat, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use thiserror::Error;

/// Constraint variables are edge indices of the owning space.
pub type VarId = usize;

/// Errors from constraint evaluation, contexts and serialization.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ConstraintError {
    /// An atom references a variable the weight function does not bind.
    #[error("unbound constraint variable v{0}")]
    UnboundVariable(VarId),
    /// `pop` on a context with no pushed atoms.
    #[error("pop on an empty feasibility context")]
    PopOnEmpty,
    /// A grid table would exceed the size cap.
    #[error("atom support too large to tabulate ({0} entries)")]
    TableTooLarge(u64),
    /// Malformed constraint file.
    #[error("constraint file: {0}")]
    File(String),
}

/// One linear inequality. `strict` selects `> 0` over `>= 0`.
///
/// Atoms are kept normalized: coefficients sorted by variable, zero
/// coefficients dropped, and the whole inequality scaled by the unique
/// positive rational making all coefficients and the constant coprime
/// integers. Scaling by a negative factor would flip the inequality, so signs
/// are preserved; structural equality therefore coincides with syntactic
/// equality of inequalities up to positive scaling.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearAtom {
    coeffs: Vec<(VarId, Rational)>,
    constant: Rational,
    strict: bool,
}

impl LinearAtom {
    /// Builds a normalized atom from (possibly duplicated, unsorted)
    /// coefficient terms.
    pub fn new(
        coeffs: impl IntoIterator<Item = (VarId, Rational)>,
        constant: Rational,
        strict: bool,
    ) -> LinearAtom {
        let mut merged: BTreeMap<VarId, Rational> = BTreeMap::new();
        for (v, c) in coeffs {
            let entry = merged.entry(v).or_insert_with(Rational::zero);
            *entry += c;
        }
        merged.retain(|_, c| !c.is_zero());
        let mut atom = LinearAtom {
            coeffs: merged.into_iter().collect(),
            constant,
            strict,
        };
        atom.normalize();
        atom
    }

    fn normalize(&mut self) {
        if self.coeffs.is_empty() {
            // Constant atom: scale the constant to its sign.
            let sign = match self.constant.numer().sign() {
                num_bigint::Sign::Minus => -1,
                num_bigint::Sign::NoSign => 0,
                num_bigint::Sign::Plus => 1,
            };
            self.constant = Rational::from_integer(BigInt::from(sign));
            return;
        }
        // Positive scale factor lcm(denoms)/gcd(numers) makes entries coprime
        // integers without flipping the inequality.
        let mut lcm = BigInt::one();
        let mut gcd = BigInt::zero();
        for r in self
            .coeffs
            .iter()
            .map(|(_, c)| c)
            .chain(std::iter::once(&self.constant))
        {
            lcm = lcm.lcm(r.denom());
            gcd = gcd.gcd(r.numer());
        }
        if gcd.is_zero() {
            gcd = BigInt::one();
        }
        let scale = Rational::new(lcm, gcd);
        for (_, c) in &mut self.coeffs {
            *c *= &scale;
        }
        self.constant *= &scale;
    }

    /// Coefficient terms, sorted by variable.
    pub fn coeffs(&self) -> &[(VarId, Rational)] {
        &self.coeffs
    }

    /// The constant term.
    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    /// Whether the comparison is `> 0` (vs `>= 0`).
    pub fn is_strict(&self) -> bool {
        self.strict
    }

    /// Variables referenced by the atom.
    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.coeffs.iter().map(|(v, _)| *v)
    }

    fn coeff_of(&self, var: VarId) -> Option<&Rational> {
        self.coeffs
            .binary_search_by_key(&var, |(v, _)| *v)
            .ok()
            .map(|i| &self.coeffs[i].1)
    }

    /// Logical negation: `!(e > 0)` is `-e >= 0`, `!(e >= 0)` is `-e > 0`.
    pub fn negated(&self) -> LinearAtom {
        LinearAtom {
            coeffs: self.coeffs.iter().map(|(v, c)| (*v, -c)).collect(),
            constant: -&self.constant,
            strict: !self.strict,
        }
    }

    /// Exact evaluation at a weight function.
    pub fn eval(&self, w: &WeightFunction) -> Result<bool, ConstraintError> {
        let mut sum = self.constant.clone();
        for (v, c) in &self.coeffs {
            if *v >= w.len() {
                return Err(ConstraintError::UnboundVariable(*v));
            }
            sum += c * w.get(*v);
        }
        Ok(self.holds_for(&sum))
    }

    /// Exact evaluation at an explicit value vector.
    pub fn eval_values(&self, values: &[Rational]) -> Result<bool, ConstraintError> {
        let mut sum = self.constant.clone();
        for (v, c) in &self.coeffs {
            if *v >= values.len() {
                return Err(ConstraintError::UnboundVariable(*v));
            }
            sum += c * &values[*v];
        }
        Ok(self.holds_for(&sum))
    }

    fn holds_for(&self, sum: &Rational) -> bool {
        if self.strict {
            sum.is_positive()
        } else {
            !sum.is_negative()
        }
    }

    /// Renders the atom with the space's edge-variable names.
    pub fn display_with(&self, space: &GrnSpace) -> String {
        self.render(|v| space.edge_var_name(v))
    }

    fn render(&self, name: impl Fn(VarId) -> String) -> String {
        let mut s = String::new();
        for (i, (v, c)) in self.coeffs.iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    s.push('-');
                }
            } else {
                s.push_str(if c.is_negative() { " - " } else { " + " });
            }
            if !mag.is_one() {
                s.push_str(&format_rational(&mag));
                s.push(' ');
            }
            s.push_str(&name(*v));
        }
        if self.coeffs.is_empty() {
            s.push_str(&format_rational(&self.constant));
        } else if !self.constant.is_zero() {
            s.push_str(if self.constant.is_negative() { " - " } else { " + " });
            s.push_str(&format_rational(&self.constant.abs()));
        }
        s.push_str(if self.strict { " > 0" } else { " >= 0" });
        s
    }
}

impl fmt::Display for LinearAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(|v| format!("v{v}")))
    }
}

/// A conjunction of atoms collected along one symbolic run. Order-insensitive
/// set semantics: atoms are kept sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RunConstraint {
    atoms: Vec<LinearAtom>,
}

impl RunConstraint {
    pub fn new() -> RunConstraint {
        RunConstraint::default()
    }

    pub fn from_atoms(atoms: impl IntoIterator<Item = LinearAtom>) -> RunConstraint {
        let mut rc = RunConstraint::new();
        for a in atoms {
            rc.insert(a);
        }
        rc
    }

    /// Adds an atom; returns false when it was already present.
    pub fn insert(&mut self, atom: LinearAtom) -> bool {
        match self.atoms.binary_search(&atom) {
            Ok(_) => false,
            Err(i) => {
                self.atoms.insert(i, atom);
                true
            }
        }
    }

    pub fn atoms(&self) -> &[LinearAtom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Conjunction value at a point.
    pub fn eval(&self, w: &WeightFunction) -> Result<bool, ConstraintError> {
        for a in &self.atoms {
            if !a.eval(w)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The clause `!(a_1 & ... & a_n)` as a disjunction of negated atoms.
    pub fn negation_clause(&self) -> Vec<LinearAtom> {
        let mut clause: Vec<LinearAtom> = self.atoms.iter().map(LinearAtom::negated).collect();
        clause.sort();
        clause.dedup();
        clause
    }
}

/// A CNF over linear atoms: a conjunction of disjunctive clauses. No clauses
/// means `true`; an empty clause means `false`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConstraintSet {
    clauses: Vec<Vec<LinearAtom>>,
}

impl ConstraintSet {
    /// The trivially true set.
    pub fn trivially_true() -> ConstraintSet {
        ConstraintSet::default()
    }

    /// The trivially false set (one empty clause).
    pub fn trivially_false() -> ConstraintSet {
        ConstraintSet {
            clauses: vec![Vec::new()],
        }
    }

    /// A pure conjunction: one unit clause per atom.
    pub fn conjunction(atoms: impl IntoIterator<Item = LinearAtom>) -> ConstraintSet {
        ConstraintSet {
            clauses: atoms.into_iter().map(|a| vec![a]).collect(),
        }
    }

    /// Builds from clauses, normalizing each clause (sorted, deduplicated).
    pub fn from_clauses(clauses: impl IntoIterator<Item = Vec<LinearAtom>>) -> ConstraintSet {
        let mut set = ConstraintSet::default();
        for c in clauses {
            set.push_clause(c);
        }
        set
    }

    /// Appends one clause (normalized).
    pub fn push_clause(&mut self, mut clause: Vec<LinearAtom>) {
        clause.sort();
        clause.dedup();
        self.clauses.push(clause);
    }

    pub fn clauses(&self) -> &[Vec<LinearAtom>] {
        &self.clauses
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    pub fn atom_count(&self) -> usize {
        self.clauses.iter().map(Vec::len).sum()
    }

    /// Short-circuiting CNF evaluation at a point.
    pub fn eval(&self, w: &WeightFunction) -> Result<bool, ConstraintError> {
        'clauses: for clause in &self.clauses {
            for atom in clause {
                if atom.eval(w)? {
                    continue 'clauses;
                }
            }
            return Ok(false);
        }
        Ok(true)
    }

    /// Removes duplicate clauses and clauses subsumed by a sub-clause, and
    /// puts the result in canonical order. Logically equivalent to the input.
    pub fn simplify(&self) -> ConstraintSet {
        let mut clauses: Vec<Vec<LinearAtom>> = self
            .clauses
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.sort();
                c.dedup();
                c
            })
            .collect();
        clauses.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        clauses.dedup();
        let mut kept: Vec<Vec<LinearAtom>> = Vec::new();
        'outer: for c in clauses {
            for k in &kept {
                if is_subset(k, &c) {
                    continue 'outer;
                }
            }
            kept.push(c);
        }
        kept.sort();
        ConstraintSet { clauses: kept }
    }

    /// Serializes to the constraint JSON schema using the space's
    /// `w_<from>_<to>` variable names.
    pub fn to_json(&self, space: &GrnSpace) -> String {
        let file = ConstraintFile {
            clauses: self
                .clauses
                .iter()
                .map(|clause| clause.iter().map(|a| atom_to_file(a, space)).collect())
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("constraint serialization cannot fail")
    }

    /// Parses the constraint JSON schema against a space's edge variables.
    pub fn from_json(text: &str, space: &GrnSpace) -> Result<ConstraintSet, ConstraintError> {
        let file: ConstraintFile =
            serde_json::from_str(text).map_err(|e| ConstraintError::File(e.to_string()))?;
        let mut by_name: HashMap<String, VarId> = HashMap::new();
        for e in 0..space.edges().len() {
            by_name.insert(space.edge_var_name(e), e);
        }
        let mut set = ConstraintSet::default();
        for clause in file.clauses {
            let mut atoms = Vec::with_capacity(clause.len());
            for af in clause {
                let mut coeffs = Vec::new();
                for (name, value) in af.coeffs {
                    let var = *by_name.get(&name).ok_or_else(|| {
                        ConstraintError::File(format!("unknown variable {name:?}"))
                    })?;
                    let c = parse_rational(&value)
                        .map_err(|e| ConstraintError::File(e.to_string()))?;
                    coeffs.push((var, c));
                }
                let constant = parse_rational(&af.constant)
                    .map_err(|e| ConstraintError::File(e.to_string()))?;
                atoms.push(LinearAtom::new(coeffs, constant, af.strict));
            }
            set.push_clause(atoms);
        }
        Ok(set)
    }
}

fn is_subset(small: &[LinearAtom], big: &[LinearAtom]) -> bool {
    // Both sorted and deduplicated.
    let mut i = 0;
    for b in big {
        if i == small.len() {
            return true;
        }
        if &small[i] == b {
            i += 1;
        }
    }
    i == small.len()
}

#[derive(Serialize, Deserialize)]
struct AtomFile {
    coeffs: BTreeMap<String, String>,
    #[serde(rename = "const")]
    constant: String,
    strict: bool,
}

#[derive(Serialize, Deserialize)]
struct ConstraintFile {
    clauses: Vec<Vec<AtomFile>>,
}

fn atom_to_file(a: &LinearAtom, space: &GrnSpace) -> AtomFile {
    AtomFile {
        coeffs: a
            .coeffs
            .iter()
            .map(|(v, c)| (space.edge_var_name(*v), format_rational(c)))
            .collect(),
        constant: format_rational(&a.constant),
        strict: a.strict,
    }
}

// ---------------------------------------------------------------------------
// Feasibility: exact Fourier-Motzkin with strictness tracking
// ---------------------------------------------------------------------------

/// Closed box bounds `lower[v] <= v <= upper[v]` for every variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds {
    lower: Vec<Rational>,
    upper: Vec<Rational>,
}

impl Bounds {
    /// Arbitrary box; lower and upper must have equal length.
    pub fn new(lower: Vec<Rational>, upper: Vec<Rational>) -> Bounds {
        assert_eq!(lower.len(), upper.len(), "box arity mismatch");
        Bounds { lower, upper }
    }

    /// The weight box `0 <= v_e <= w_max(e)` of a space.
    pub fn from_space(space: &GrnSpace) -> Bounds {
        Bounds {
            lower: vec![Rational::zero(); space.edges().len()],
            upper: space.edges().iter().map(|e| e.w_max.clone()).collect(),
        }
    }

    /// Number of variables.
    pub fn len(&self) -> usize {
        self.lower.len()
    }

    /// Lower bound of variable `v`.
    pub fn lower(&self, v: VarId) -> &Rational {
        &self.lower[v]
    }

    /// Upper bound of variable `v`.
    pub fn upper(&self, v: VarId) -> &Rational {
        &self.upper[v]
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    fn atoms(&self) -> Vec<LinearAtom> {
        let mut out = Vec::with_capacity(2 * self.lower.len());
        for v in 0..self.lower.len() {
            // v - lower >= 0
            out.push(LinearAtom::new(
                vec![(v, Rational::one())],
                -self.lower[v].clone(),
                false,
            ));
            // upper - v >= 0
            out.push(LinearAtom::new(
                vec![(v, -Rational::one())],
                self.upper[v].clone(),
                false,
            ));
        }
        out
    }
}

struct Elimination {
    lowers: Vec<LinearAtom>,
    uppers: Vec<LinearAtom>,
    var: VarId,
}

/// Decides whether a conjunction of atoms has a rational solution inside the
/// box; on success returns a witness, verified in debug builds against every
/// input atom.
pub fn feasible(rc: &RunConstraint, bounds: &Bounds) -> Option<Vec<Rational>> {
    feasible_atoms(rc.atoms(), bounds)
}

/// [`feasible`] over a raw atom slice.
pub fn feasible_atoms(atoms: &[LinearAtom], bounds: &Bounds) -> Option<Vec<Rational>> {
    let mut system: Vec<LinearAtom> = bounds.atoms();
    system.extend(atoms.iter().cloned());
    let mut system = compress(system)?;

    let mut remaining: Vec<VarId> = (0..bounds.len()).collect();
    let mut eliminations: Vec<Elimination> = Vec::with_capacity(remaining.len());

    while !remaining.is_empty() {
        // Pick the variable minimizing the lower*upper product to curb the
        // quadratic growth of combinations.
        let (pos, _) = remaining
            .iter()
            .enumerate()
            .min_by_key(|(_, &v)| {
                let lowers = system
                    .iter()
                    .filter(|a| a.coeff_of(v).is_some_and(|c| c.is_positive()))
                    .count();
                let uppers = system
                    .iter()
                    .filter(|a| a.coeff_of(v).is_some_and(|c| c.is_negative()))
                    .count();
                lowers * uppers
            })
            .expect("nonempty remaining");
        let var = remaining.swap_remove(pos);

        let mut lowers = Vec::new();
        let mut uppers = Vec::new();
        let mut rest = Vec::new();
        for a in system {
            match a.coeff_of(var) {
                Some(c) if c.is_positive() => lowers.push(a),
                Some(_) => uppers.push(a),
                None => rest.push(a),
            }
        }
        for l in &lowers {
            let al = l.coeff_of(var).expect("lower bound coefficient").clone();
            for u in &uppers {
                let au = u.coeff_of(var).expect("upper bound coefficient").clone();
                // (-au) * l + al * u cancels var; both scale factors positive.
                let coeffs = merge_scaled(l, &-&au, u, &al);
                let constant = -&au * &l.constant + &al * &u.constant;
                rest.push(LinearAtom::new(coeffs, constant, l.strict || u.strict));
            }
        }
        system = compress(rest)?;
        eliminations.push(Elimination { lowers, uppers, var });
    }

    debug_assert!(system.iter().all(|a| a.coeffs.is_empty()));

    // Back-substitute in reverse elimination order.
    let mut witness = vec![Rational::zero(); bounds.len()];
    for elim in eliminations.iter().rev() {
        let value = pick_value(elim, &witness);
        witness[elim.var] = value;
    }

    debug_assert!(
        atoms
            .iter()
            .all(|a| a.eval_values(&witness).unwrap_or(false)),
        "Fourier-Motzkin witness failed verification"
    );
    Some(witness)
}

/// Discharges constant atoms (returning `None` on a violated one) and keeps
/// only the tightest atom per coefficient vector: for equal left-hand sides
/// the smallest constant dominates, strict beating non-strict at a tie.
fn compress(atoms: Vec<LinearAtom>) -> Option<Vec<LinearAtom>> {
    let mut tightest: BTreeMap<Vec<(VarId, Rational)>, (Rational, bool)> = BTreeMap::new();
    for a in atoms {
        if a.coeffs.is_empty() {
            if !a.holds_for(&a.constant) {
                return None;
            }
            continue;
        }
        match tightest.get_mut(&a.coeffs) {
            None => {
                tightest.insert(a.coeffs, (a.constant, a.strict));
            }
            Some((c, strict)) => {
                if a.constant < *c || (a.constant == *c && a.strict && !*strict) {
                    *c = a.constant;
                    *strict = a.strict;
                }
            }
        }
    }
    Some(
        tightest
            .into_iter()
            .map(|(coeffs, (constant, strict))| LinearAtom {
                coeffs,
                constant,
                strict,
            })
            .collect(),
    )
}

fn merge_scaled(
    l: &LinearAtom,
    scale_l: &Rational,
    u: &LinearAtom,
    scale_u: &Rational,
) -> Vec<(VarId, Rational)> {
    let mut coeffs: Vec<(VarId, Rational)> =
        l.coeffs.iter().map(|(v, c)| (*v, scale_l * c)).collect();
    coeffs.extend(u.coeffs.iter().map(|(v, c)| (*v, scale_u * c)));
    coeffs
}

fn pick_value(elim: &Elimination, witness: &[Rational]) -> Rational {
    // Evaluate a bound atom `a*x + rest ~ 0` at the partial witness, yielding
    // the bound value `-rest/a` and its strictness.
    let bound_at = |atom: &LinearAtom| -> (Rational, bool) {
        let a = atom.coeff_of(elim.var).expect("bound coefficient").clone();
        let mut rest = atom.constant.clone();
        for (v, c) in &atom.coeffs {
            if *v != elim.var {
                rest += c * &witness[*v];
            }
        }
        (-rest / a, atom.strict)
    };

    let mut lo: Option<(Rational, bool)> = None;
    for l in &elim.lowers {
        let (val, strict) = bound_at(l);
        lo = Some(match lo {
            None => (val, strict),
            Some((cur, cur_strict)) => {
                if val > cur {
                    (val, strict)
                } else if val == cur {
                    (cur, cur_strict || strict)
                } else {
                    (cur, cur_strict)
                }
            }
        });
    }
    let mut hi: Option<(Rational, bool)> = None;
    for u in &elim.uppers {
        let (val, strict) = bound_at(u);
        hi = Some(match hi {
            None => (val, strict),
            Some((cur, cur_strict)) => {
                if val < cur {
                    (val, strict)
                } else if val == cur {
                    (cur, cur_strict || strict)
                } else {
                    (cur, cur_strict)
                }
            }
        });
    }
    match (lo, hi) {
        (Some((lo_v, _)), Some((hi_v, _))) => {
            debug_assert!(lo_v <= hi_v, "inconsistent bounds after elimination");
            if lo_v == hi_v {
                lo_v
            } else {
                (lo_v + hi_v) / rat(2, 1)
            }
        }
        (Some((lo_v, strict)), None) => {
            if strict {
                lo_v + Rational::one()
            } else {
                lo_v
            }
        }
        (None, Some((hi_v, strict))) => {
            if strict {
                hi_v - Rational::one()
            } else {
                hi_v
            }
        }
        (None, None) => Rational::zero(),
    }
}

/// Incremental conjunction feasibility for depth-first search: `push` an atom,
/// query, `pop` to restore the previous verdict exactly.
///
/// Single-owner mutable object; parallel searches each own one.
#[derive(Debug, Clone)]
pub struct FeasibilityContext {
    bounds: Bounds,
    atoms: Vec<LinearAtom>,
    // Cached verdict per depth; index 0 is the empty conjunction.
    verdicts: Vec<Option<Vec<Rational>>>,
}

impl FeasibilityContext {
    /// Context over the box only (always feasible for valid spaces).
    pub fn new(bounds: Bounds) -> FeasibilityContext {
        let base = feasible_atoms(&[], &bounds);
        FeasibilityContext {
            bounds,
            atoms: Vec::new(),
            verdicts: vec![base],
        }
    }

    /// Adds an atom to the conjunction and returns the new feasibility.
    /// Infeasibility is sticky: once infeasible, deeper pushes skip the
    /// solver.
    pub fn push(&mut self, atom: LinearAtom) -> bool {
        self.atoms.push(atom);
        let verdict = if self.verdicts.last().expect("base verdict").is_none() {
            None
        } else {
            feasible_atoms(&self.atoms, &self.bounds)
        };
        let feasible = verdict.is_some();
        self.verdicts.push(verdict);
        feasible
    }

    /// Removes the most recently pushed atom.
    pub fn pop(&mut self) -> Result<(), ConstraintError> {
        if self.atoms.is_empty() {
            return Err(ConstraintError::PopOnEmpty);
        }
        self.atoms.pop();
        self.verdicts.pop();
        Ok(())
    }

    /// Current conjunction feasibility.
    pub fn is_feasible(&self) -> bool {
        self.verdicts.last().expect("base verdict").is_some()
    }

    /// Witness for the current conjunction, when feasible.
    pub fn witness(&self) -> Option<&[Rational]> {
        self.verdicts
            .last()
            .expect("base verdict")
            .as_deref()
    }

    /// Number of pushed atoms.
    pub fn depth(&self) -> usize {
        self.atoms.len()
    }

    /// The pushed atoms, in push order.
    pub fn atoms(&self) -> &[LinearAtom] {
        &self.atoms
    }
}

// ---------------------------------------------------------------------------
// Grid-compiled evaluation
// ---------------------------------------------------------------------------

/// Per-atom table-size cap (entries) for [`CompiledSet`].
const TABLE_CAP: u64 = 1 << 22;

struct AtomTable {
    support: Vec<VarId>,
    strides: Vec<usize>,
    truth: Vec<bool>,
}

impl AtomTable {
    fn build(atom: &LinearAtom, grid: &QuantizedGrid) -> Result<AtomTable, ConstraintError> {
        let support: Vec<VarId> = atom.vars().collect();
        let radices: Vec<usize> = support
            .iter()
            .map(|&v| grid.edge_values(v).len())
            .collect();
        let mut size = 1u64;
        for &r in &radices {
            size = size
                .checked_mul(r as u64)
                .filter(|&s| s <= TABLE_CAP)
                .ok_or(ConstraintError::TableTooLarge(u64::MAX))?;
        }
        let mut strides = vec![1usize; support.len()];
        for i in (0..support.len()).rev().skip(1) {
            strides[i] = strides[i + 1] * radices[i + 1];
        }
        let mut truth = vec![false; size as usize];
        let mut counts = vec![0usize; support.len()];
        for slot in truth.iter_mut() {
            let mut sum = atom.constant().clone();
            for (i, &v) in support.iter().enumerate() {
                sum += &atom.coeffs[i].1 * grid.value(v, counts[i]);
            }
            *slot = atom.holds_for(&sum);
            // Mixed-radix increment, last support variable fastest.
            let mut i = support.len();
            while i > 0 {
                i -= 1;
                counts[i] += 1;
                if counts[i] < radices[i] {
                    break;
                }
                counts[i] = 0;
            }
        }
        Ok(AtomTable {
            support,
            strides,
            truth,
        })
    }

    #[inline]
    fn eval(&self, counts: &[u32]) -> bool {
        let mut idx = 0usize;
        for (i, &v) in self.support.iter().enumerate() {
            idx += counts[v] as usize * self.strides[i];
        }
        self.truth[idx]
    }
}

/// A constraint set pre-evaluated over a quantized grid: each distinct atom
/// becomes a truth table over its (small) support, so evaluating a grid point
/// costs only table lookups. Used for exhaustive sweeps and exact robustness.
pub struct CompiledSet {
    tables: Vec<AtomTable>,
    clauses: Vec<Vec<usize>>,
}

impl CompiledSet {
    /// Tabulates every atom of `set` over `grid`.
    pub fn compile(set: &ConstraintSet, grid: &QuantizedGrid) -> Result<CompiledSet, ConstraintError> {
        let mut index: HashMap<LinearAtom, usize> = HashMap::new();
        let mut tables = Vec::new();
        let mut clauses = Vec::with_capacity(set.clause_count());
        for clause in set.clauses() {
            let mut ids = Vec::with_capacity(clause.len());
            for atom in clause {
                let id = match index.get(atom) {
                    Some(&id) => id,
                    None => {
                        let id = tables.len();
                        tables.push(AtomTable::build(atom, grid)?);
                        index.insert(atom.clone(), id);
                        id
                    }
                };
                ids.push(id);
            }
            clauses.push(ids);
        }
        Ok(CompiledSet { tables, clauses })
    }

    /// CNF value at a grid point given by mutation counts.
    #[inline]
    pub fn eval(&self, counts: &[u32]) -> bool {
        'clauses: for clause in &self.clauses {
            for &id in clause {
                if self.tables[id].eval(counts) {
                    continue 'clauses;
                }
            }
            return false;
        }
        true
    }
}
