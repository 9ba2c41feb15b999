//! Weighted Boolean gene regulatory networks: the parameter space
//! ([`GrnSpace`]), concrete individuals ([`WeightFunction`]), and their
//! deterministic synchronous dynamics up to ultimately periodic runs
//! ([`LassoRun`]).
//!
//! Gene 0 is always the constant-input gene: it is active in every state,
//! activates every other gene, and has no incoming edges. Its negative
//! threshold keeps it switched on under the update rule.

use crate::rational::{format_rational, parse_rational, rat_int, Rational};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

/// Hard cap on gene count; the state space is `2^(genes-1)`.
pub const MAX_GENES: usize = 24;

/// Errors from model construction and dynamics.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ModelError {
    /// A structural invariant of the GRN space is violated.
    #[error("invalid GRN space: {0}")]
    InvalidSpace(String),
    /// A weight function does not fit the space it is used with.
    #[error("invalid weight function: {0}")]
    InvalidWeights(String),
    /// A state refers to genes outside the space, or deactivates the input.
    #[error("invalid state: {0}")]
    InvalidState(String),
    /// Malformed model file.
    #[error("model file: {0}")]
    File(String),
}

/// Regulation type of an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    /// Source gene raises the target's activation sum.
    Activate,
    /// Source gene lowers the target's activation sum.
    Repress,
}

/// A directed interaction with its mutable-weight range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    /// Source gene index.
    pub from: usize,
    /// Target gene index.
    pub to: usize,
    /// Activation or repression.
    pub sign: Sign,
    /// Maximum weight; the unmutated binding site realizes it.
    pub w_max: Rational,
    /// Binding-site length; mutations quantize the weight into
    /// `w_max * (1 - k/length)` for `k` in `0..=length`.
    pub length: u32,
}

/// Edge description by gene name, used when building a space.
#[derive(Debug, Clone)]
pub struct EdgeDef {
    pub from: String,
    pub to: String,
    pub sign: Sign,
    pub w_max: Rational,
    pub length: u32,
}

/// A GRN space: topology, thresholds and per-edge weight ranges. All
/// individuals of a population share one of these.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrnSpace {
    genes: Vec<String>,
    thresholds: Vec<Rational>,
    edges: Vec<Edge>,
    in_edges: Vec<Vec<usize>>,
}

impl GrnSpace {
    /// Builds and validates a space. `input` is the constant-input gene
    /// (threshold must be negative); `genes` are the remaining genes in
    /// declaration order (the canonical state order follows it).
    pub fn new(
        input: (impl Into<String>, Rational),
        genes: Vec<(String, Rational)>,
        edge_defs: Vec<EdgeDef>,
    ) -> Result<Self, ModelError> {
        let mut names: Vec<String> = vec![input.0.into()];
        let mut thresholds: Vec<Rational> = vec![input.1];
        for (name, t) in genes {
            names.push(name);
            thresholds.push(t);
        }
        if names.len() > MAX_GENES {
            return Err(ModelError::InvalidSpace(format!(
                "{} genes exceeds the supported maximum of {MAX_GENES}",
                names.len()
            )));
        }
        let mut index: HashMap<&str, usize> = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(ModelError::InvalidSpace("empty gene name".into()));
            }
            if index.insert(n.as_str(), i).is_some() {
                return Err(ModelError::InvalidSpace(format!("duplicate gene name {n:?}")));
            }
        }
        if !thresholds[0].is_negative() {
            return Err(ModelError::InvalidSpace(format!(
                "input gene {:?} must have a negative threshold, got {}",
                names[0],
                format_rational(&thresholds[0])
            )));
        }
        for (i, t) in thresholds.iter().enumerate().skip(1) {
            if t.is_negative() {
                return Err(ModelError::InvalidSpace(format!(
                    "gene {:?} must have a non-negative threshold, got {}",
                    names[i],
                    format_rational(t)
                )));
            }
        }

        let mut edges = Vec::with_capacity(edge_defs.len());
        let mut seen_pairs: HashMap<(usize, usize), Sign> = HashMap::new();
        for def in edge_defs {
            let from = *index.get(def.from.as_str()).ok_or_else(|| {
                ModelError::InvalidSpace(format!("edge source {:?} is not a gene", def.from))
            })?;
            let to = *index.get(def.to.as_str()).ok_or_else(|| {
                ModelError::InvalidSpace(format!("edge target {:?} is not a gene", def.to))
            })?;
            if to == 0 {
                return Err(ModelError::InvalidSpace(format!(
                    "input gene {:?} cannot be regulated",
                    names[0]
                )));
            }
            if def.w_max.is_negative() {
                return Err(ModelError::InvalidSpace(format!(
                    "edge {}->{} has negative w_max",
                    def.from, def.to
                )));
            }
            if def.length == 0 {
                return Err(ModelError::InvalidSpace(format!(
                    "edge {}->{} must have length >= 1",
                    def.from, def.to
                )));
            }
            if seen_pairs.insert((from, to), def.sign).is_some() {
                return Err(ModelError::InvalidSpace(format!(
                    "duplicate edge {}->{} (activation and repression are disjoint)",
                    def.from, def.to
                )));
            }
            if from == 0 && def.sign == Sign::Repress {
                return Err(ModelError::InvalidSpace(
                    "the input gene only activates".into(),
                ));
            }
            edges.push(Edge {
                from,
                to,
                sign: def.sign,
                w_max: def.w_max,
                length: def.length,
            });
        }
        for g in 1..names.len() {
            if seen_pairs.get(&(0, g)) != Some(&Sign::Activate) {
                return Err(ModelError::InvalidSpace(format!(
                    "input gene {:?} must activate every gene; missing edge to {:?}",
                    names[0], names[g]
                )));
            }
        }

        let mut in_edges = vec![Vec::new(); names.len()];
        for (e, edge) in edges.iter().enumerate() {
            in_edges[edge.to].push(e);
        }

        Ok(GrnSpace {
            genes: names,
            thresholds,
            edges,
            in_edges,
        })
    }

    /// Number of genes, including the input gene.
    pub fn gene_count(&self) -> usize {
        self.genes.len()
    }

    /// Gene names in declaration order; index 0 is the input gene.
    pub fn gene_names(&self) -> &[String] {
        &self.genes
    }

    /// Looks a gene up by name.
    pub fn gene_index(&self, name: &str) -> Option<usize> {
        self.genes.iter().position(|g| g == name)
    }

    /// The gene's activation threshold.
    pub fn threshold(&self, gene: usize) -> &Rational {
        &self.thresholds[gene]
    }

    /// All edges, in declaration order. Edge indices double as the
    /// constraint-variable indices of the parametrized transition system.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Indices of the edges regulating `gene`.
    pub fn in_edges(&self, gene: usize) -> &[usize] {
        &self.in_edges[gene]
    }

    /// Index of the edge `from -> to`, if present.
    pub fn edge_index(&self, from: usize, to: usize) -> Option<usize> {
        self.edges.iter().position(|e| e.from == from && e.to == to)
    }

    /// Canonical constraint-variable name for an edge: `w_<from>_<to>`.
    pub fn edge_var_name(&self, edge: usize) -> String {
        let e = &self.edges[edge];
        format!("w_{}_{}", self.genes[e.from], self.genes[e.to])
    }

    /// The weight function taking every edge to its maximum weight.
    pub fn max_weights(&self) -> WeightFunction {
        WeightFunction {
            weights: self.edges.iter().map(|e| e.w_max.clone()).collect(),
        }
    }

    /// A state with only the input gene active.
    pub fn input_only_state(&self) -> GrnState {
        GrnState { bits: 1 }
    }

    /// Builds a state from the names of the active genes (the input gene is
    /// implicitly active).
    pub fn state_of(&self, active: &[&str]) -> Result<GrnState, ModelError> {
        let mut bits = 1u32;
        for name in active {
            let g = self
                .gene_index(name)
                .ok_or_else(|| ModelError::InvalidState(format!("unknown gene {name:?}")))?;
            bits |= 1 << g;
        }
        Ok(GrnState { bits })
    }

    /// Checks that a state only refers to this space's genes and keeps the
    /// input gene active.
    pub fn validate_state(&self, s: GrnState) -> Result<(), ModelError> {
        if s.bits & 1 == 0 {
            return Err(ModelError::InvalidState("input gene must be active".into()));
        }
        if s.bits >> self.genes.len() != 0 {
            return Err(ModelError::InvalidState(
                "state refers to genes outside the space".into(),
            ));
        }
        Ok(())
    }

    /// Checks that a weight function has this space's edge domain and respects
    /// the `0 <= w <= w_max` box.
    pub fn validate_weights(&self, w: &WeightFunction) -> Result<(), ModelError> {
        if w.weights.len() != self.edges.len() {
            return Err(ModelError::InvalidWeights(format!(
                "expected {} edge weights, got {}",
                self.edges.len(),
                w.weights.len()
            )));
        }
        for (e, edge) in self.edges.iter().enumerate() {
            let v = &w.weights[e];
            if v.is_negative() || *v > edge.w_max {
                return Err(ModelError::InvalidWeights(format!(
                    "weight {} for {} outside [0, {}]",
                    format_rational(v),
                    self.edge_var_name(e),
                    format_rational(&edge.w_max)
                )));
            }
        }
        Ok(())
    }

    /// All `2^(d-1)` states with the input gene active, in the canonical
    /// lexicographic order over the declared gene order (state `i` activates
    /// gene `j >= 1` iff bit `d-1-j` of `i` is set, so earlier genes vary
    /// slowest).
    pub fn enumerate_states(&self) -> Vec<GrnState> {
        let d = self.genes.len();
        let n = 1u32 << (d - 1);
        (0..n)
            .map(|i| {
                let mut bits = 1u32;
                for g in 1..d {
                    if (i >> (d - 1 - g)) & 1 == 1 {
                        bits |= 1 << g;
                    }
                }
                GrnState { bits }
            })
            .collect()
    }

    /// One synchronous update: gene `g'` is next active iff the weighted sum
    /// of its active activators minus its active repressors strictly exceeds
    /// its threshold. The input gene always stays active.
    pub fn step(&self, w: &WeightFunction, s: GrnState) -> Result<GrnState, ModelError> {
        self.validate_weights(w)?;
        self.validate_state(s)?;
        Ok(self.step_unchecked(w, s))
    }

    pub(crate) fn step_unchecked(&self, w: &WeightFunction, s: GrnState) -> GrnState {
        let mut bits = 1u32;
        for g in 1..self.genes.len() {
            let mut sum = Rational::zero();
            for &e in &self.in_edges[g] {
                let edge = &self.edges[e];
                if s.is_active(edge.from) {
                    match edge.sign {
                        Sign::Activate => sum += &w.weights[e],
                        Sign::Repress => sum -= &w.weights[e],
                    }
                }
            }
            if sum > self.thresholds[g] {
                bits |= 1 << g;
            }
        }
        GrnState { bits }
    }

    /// Iterates [`GrnSpace::step`] from `s0` until a state repeats, returning
    /// the run in lasso form. Termination is guaranteed by the finite state
    /// space; the result has at most `2^(d-1)` states.
    pub fn run_to_lasso(
        &self,
        w: &WeightFunction,
        s0: GrnState,
    ) -> Result<LassoRun, ModelError> {
        self.validate_weights(w)?;
        self.validate_state(s0)?;
        let mut seen: HashMap<GrnState, usize> = HashMap::new();
        let mut states = Vec::new();
        let mut cur = s0;
        loop {
            if let Some(&i) = seen.get(&cur) {
                return Ok(LassoRun {
                    states,
                    loop_start: i,
                });
            }
            seen.insert(cur, states.len());
            states.push(cur);
            cur = self.step_unchecked(w, cur);
        }
    }

    /// The per-edge lattice of weights reachable by mutation.
    pub fn quantized_grid(&self) -> QuantizedGrid {
        let values = self
            .edges
            .iter()
            .map(|e| {
                let l = rat_int(e.length as i64);
                (0..=e.length)
                    .map(|k| &e.w_max * (rat_int(1) - rat_int(k as i64) / &l))
                    .collect()
            })
            .collect();
        QuantizedGrid { values }
    }

    /// Renders a state as the set of active gene names.
    pub fn display_state(&self, s: GrnState) -> String {
        let active: Vec<&str> = (0..self.genes.len())
            .filter(|&g| s.is_active(g))
            .map(|g| self.genes[g].as_str())
            .collect();
        format!("{{{}}}", active.join(","))
    }
}

/// One concrete assignment of edge weights, indexed like [`GrnSpace::edges`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightFunction {
    weights: Vec<Rational>,
}

impl WeightFunction {
    /// Validates the weights against the space's edge box.
    pub fn new(space: &GrnSpace, weights: Vec<Rational>) -> Result<Self, ModelError> {
        let w = WeightFunction { weights };
        space.validate_weights(&w)?;
        Ok(w)
    }

    /// Weight of edge `e`.
    pub fn get(&self, e: usize) -> &Rational {
        &self.weights[e]
    }

    /// All weights in edge order.
    pub fn values(&self) -> &[Rational] {
        &self.weights
    }

    /// Number of edges covered.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    /// True when the function covers no edges.
    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// A network state as a bitset over gene indices. Bit 0 (the input gene) is
/// set in every valid state.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GrnState {
    bits: u32,
}

impl GrnState {
    /// Whether `gene` is active.
    pub fn is_active(&self, gene: usize) -> bool {
        (self.bits >> gene) & 1 == 1
    }

    /// Copy of this state with `gene` set to `active`. Deactivating gene 0 is
    /// rejected at validation time, not here.
    pub fn with(&self, gene: usize, active: bool) -> GrnState {
        let mask = 1u32 << gene;
        GrnState {
            bits: if active { self.bits | mask } else { self.bits & !mask },
        }
    }

    /// Raw bit pattern (bit `i` = gene `i`).
    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// State from a raw bit pattern.
    pub fn from_bits(bits: u32) -> GrnState {
        GrnState { bits }
    }
}

impl fmt::Debug for GrnState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GrnState({:#b})", self.bits)
    }
}

/// A finitely represented infinite run: `states[0..loop_start]` is the prefix,
/// `states[loop_start..]` repeats forever.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LassoRun {
    /// Prefix followed by one period of the loop.
    pub states: Vec<GrnState>,
    /// Index where the loop begins.
    pub loop_start: usize,
}

impl LassoRun {
    /// Number of stored states (prefix + one loop period).
    pub fn len(&self) -> usize {
        self.states.len()
    }

    /// True when no states are stored (never produced by `run_to_lasso`).
    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Loop period length.
    pub fn loop_len(&self) -> usize {
        self.states.len() - self.loop_start
    }

    /// State at unrolled position `pos` of the infinite run.
    pub fn state_at(&self, pos: usize) -> GrnState {
        if pos < self.states.len() {
            self.states[pos]
        } else {
            let k = (pos - self.loop_start) % self.loop_len();
            self.states[self.loop_start + k]
        }
    }

    /// Successor position in the folded representation.
    pub fn succ(&self, pos: usize) -> usize {
        if pos + 1 < self.states.len() {
            pos + 1
        } else {
            self.loop_start
        }
    }
}

/// The finite lattice of weight functions reachable by mutation:
/// `value(e, k) = w_max(e) * (1 - k / length(e))` for `k` mutated nucleotides.
#[derive(Debug, Clone)]
pub struct QuantizedGrid {
    values: Vec<Vec<Rational>>,
}

impl QuantizedGrid {
    /// Number of grid levels per edge (`length + 1` each).
    pub fn radices(&self) -> Vec<usize> {
        self.values.iter().map(|v| v.len()).collect()
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        self.values.len()
    }

    /// Weight of edge `e` under `k` mutations.
    pub fn value(&self, e: usize, k: usize) -> &Rational {
        &self.values[e][k]
    }

    /// All grid levels of edge `e`, from `w_max` down to `0`.
    pub fn edge_values(&self, e: usize) -> &[Rational] {
        &self.values[e]
    }

    /// Total number of grid points, if it fits in a `u64`.
    pub fn total_points(&self) -> Option<u64> {
        self.values
            .iter()
            .try_fold(1u64, |acc, v| acc.checked_mul(v.len() as u64))
    }

    /// Materializes the weight function for a vector of mutation counts.
    pub fn weight_function(&self, counts: &[u32]) -> WeightFunction {
        assert_eq!(counts.len(), self.values.len(), "count vector arity");
        WeightFunction {
            weights: counts
                .iter()
                .zip(&self.values)
                .map(|(&k, vals)| vals[k as usize].clone())
                .collect(),
        }
    }

    /// Whether every weight of `w` lies on this grid.
    pub fn contains(&self, w: &WeightFunction) -> bool {
        w.values().len() == self.values.len()
            && w.values()
                .iter()
                .zip(&self.values)
                .all(|(v, vals)| vals.contains(v))
    }

    /// Calls `f` for every grid point in mixed-radix order (last edge varies
    /// fastest). Intended for exhaustive sweeps of small grids.
    pub fn for_each_point(&self, mut f: impl FnMut(&[u32])) {
        let radices = self.radices();
        let mut counts = vec![0u32; radices.len()];
        loop {
            f(&counts);
            let mut i = radices.len();
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                counts[i] += 1;
                if (counts[i] as usize) < radices[i] {
                    break;
                }
                counts[i] = 0;
            }
        }
    }

    /// Decodes a linear point index (mixed radix, last edge fastest).
    pub fn decode_index(&self, mut idx: u64) -> Vec<u32> {
        let radices = self.radices();
        let mut counts = vec![0u32; radices.len()];
        for i in (0..radices.len()).rev() {
            let r = radices[i] as u64;
            counts[i] = (idx % r) as u32;
            idx /= r;
        }
        counts
    }

    /// Advances a count vector to the next grid point; returns false on wrap.
    pub fn advance(&self, counts: &mut [u32]) -> bool {
        let radices = self.radices();
        let mut i = radices.len();
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            counts[i] += 1;
            if (counts[i] as usize) < radices[i] {
                return true;
            }
            counts[i] = 0;
        }
    }
}

// ---------------------------------------------------------------------------
// Model file schema
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct GeneFile {
    name: String,
    threshold: String,
}

#[derive(Serialize, Deserialize)]
struct EdgeFile {
    from: String,
    to: String,
    sign: Sign,
    w_max: String,
    length: u32,
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    genes: Vec<GeneFile>,
    input_gene: GeneFile,
    edges: Vec<EdgeFile>,
}

impl GrnSpace {
    /// Parses the GRN-space JSON schema. Rationals are strings like `"3/5"`.
    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let file: ModelFile =
            serde_json::from_str(text).map_err(|e| ModelError::File(e.to_string()))?;
        let input_t = parse_rational(&file.input_gene.threshold)
            .map_err(|e| ModelError::File(e.to_string()))?;
        let mut genes = Vec::with_capacity(file.genes.len());
        for g in file.genes {
            let t = parse_rational(&g.threshold).map_err(|e| ModelError::File(e.to_string()))?;
            genes.push((g.name, t));
        }
        let mut edges = Vec::with_capacity(file.edges.len());
        for e in file.edges {
            edges.push(EdgeDef {
                from: e.from,
                to: e.to,
                sign: e.sign,
                w_max: parse_rational(&e.w_max).map_err(|e| ModelError::File(e.to_string()))?,
                length: e.length,
            });
        }
        GrnSpace::new((file.input_gene.name, input_t), genes, edges)
    }

    /// Serializes back to the GRN-space JSON schema.
    pub fn to_json(&self) -> String {
        let file = ModelFile {
            genes: self
                .genes
                .iter()
                .zip(&self.thresholds)
                .skip(1)
                .map(|(name, t)| GeneFile {
                    name: name.clone(),
                    threshold: format_rational(t),
                })
                .collect(),
            input_gene: GeneFile {
                name: self.genes[0].clone(),
                threshold: format_rational(&self.thresholds[0]),
            },
            edges: self
                .edges
                .iter()
                .map(|e| EdgeFile {
                    from: self.genes[e.from].clone(),
                    to: self.genes[e.to].clone(),
                    sign: e.sign,
                    w_max: format_rational(&e.w_max),
                    length: e.length,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("model serialization cannot fail")
    }

    /// Parses a weights file: a flat JSON object mapping `w_<from>_<to>` names
    /// to rational strings. Every edge of the space must be covered.
    pub fn weights_from_json(&self, text: &str) -> Result<WeightFunction, ModelError> {
        let map: HashMap<String, String> =
            serde_json::from_str(text).map_err(|e| ModelError::File(e.to_string()))?;
        let mut by_name: HashMap<String, usize> = HashMap::new();
        for e in 0..self.edges.len() {
            by_name.insert(self.edge_var_name(e), e);
        }
        for k in map.keys() {
            if !by_name.contains_key(k) {
                return Err(ModelError::File(format!("unknown edge variable {k:?}")));
            }
        }
        let mut weights = vec![Rational::zero(); self.edges.len()];
        for (name, e) in &by_name {
            let raw = map
                .get(name)
                .ok_or_else(|| ModelError::File(format!("missing weight for {name:?}")))?;
            weights[*e] = parse_rational(raw).map_err(|e| ModelError::File(e.to_string()))?;
        }
        WeightFunction::new(self, weights)
    }

    /// Serializes a weight function as the flat weights-file object.
    pub fn weights_to_json(&self, w: &WeightFunction) -> String {
        let map: serde_json::Map<String, serde_json::Value> = (0..self.edges.len())
            .map(|e| {
                (
                    self.edge_var_name(e),
                    serde_json::Value::String(format_rational(w.get(e))),
                )
            })
            .collect();
        serde_json::to_string_pretty(&serde_json::Value::Object(map)).expect("weights serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    /// The mutually inhibiting pair with self-activation loops: thresholds
    /// 3/5, interaction maxima 3/10, input maxima 2/3, 13 grid levels per
    /// edge.
    pub(crate) fn bistable_space() -> GrnSpace {
        let act = |from: &str, to: &str, w: Rational| EdgeDef {
            from: from.into(),
            to: to.into(),
            sign: Sign::Activate,
            w_max: w,
            length: 12,
        };
        let rep = |from: &str, to: &str, w: Rational| EdgeDef {
            from: from.into(),
            to: to.into(),
            sign: Sign::Repress,
            w_max: w,
            length: 12,
        };
        GrnSpace::new(
            ("IN", rat_int(-1)),
            vec![("A".into(), rat(3, 5)), ("B".into(), rat(3, 5))],
            vec![
                act("IN", "A", rat(2, 3)),
                act("IN", "B", rat(2, 3)),
                act("A", "A", rat(3, 10)),
                act("B", "B", rat(3, 10)),
                rep("A", "B", rat(3, 10)),
                rep("B", "A", rat(3, 10)),
            ],
        )
        .unwrap()
    }

    fn weights_at(space: &GrnSpace, i_a: Rational, i_b: Rational) -> WeightFunction {
        let mut w = Vec::new();
        for e in space.edges() {
            if e.from == 0 {
                w.push(if e.to == 1 { i_a.clone() } else { i_b.clone() });
            } else {
                w.push(rat(3, 10));
            }
        }
        WeightFunction::new(space, w).unwrap()
    }

    #[test]
    fn bistable_fixed_points_at_reference_parameters() {
        let space = bistable_space();
        let w = weights_at(&space, rat(2, 3), rat(2, 3));
        let a_on = space.state_of(&["A"]).unwrap();
        let b_on = space.state_of(&["B"]).unwrap();
        assert_eq!(space.step(&w, a_on).unwrap(), a_on);
        assert_eq!(space.step(&w, b_on).unwrap(), b_on);
    }

    #[test]
    fn weak_input_collapses_the_b_state() {
        // With the B input weakened to 1/4 the activation 1/4 + 3/10 no longer
        // exceeds 3/5 and the B-only state decays to all-off.
        let space = bistable_space();
        let w = weights_at(&space, rat(2, 3), rat(1, 4));
        let b_on = space.state_of(&["B"]).unwrap();
        assert_eq!(space.step(&w, b_on).unwrap(), space.input_only_state());
    }

    #[test]
    fn low_input_turns_everything_off() {
        let space = GrnSpace::new(
            ("IN", rat_int(-1)),
            vec![("A".into(), rat_int(2))],
            vec![EdgeDef {
                from: "IN".into(),
                to: "A".into(),
                sign: Sign::Activate,
                w_max: rat_int(1),
                length: 3,
            }],
        )
        .unwrap();
        let w = space.max_weights();
        let s = space.state_of(&["A"]).unwrap();
        assert_eq!(space.step(&w, s).unwrap(), space.input_only_state());
    }

    #[test]
    fn lasso_of_a_fixed_point_is_trivial() {
        let space = bistable_space();
        let w = weights_at(&space, rat(2, 3), rat(2, 3));
        let a_on = space.state_of(&["A"]).unwrap();
        let run = space.run_to_lasso(&w, a_on).unwrap();
        assert_eq!(run.states, vec![a_on]);
        assert_eq!(run.loop_start, 0);
    }

    #[test]
    fn enumerate_states_is_lexicographic() {
        let space = bistable_space();
        let states = space.enumerate_states();
        assert_eq!(states.len(), 4);
        let as_pairs: Vec<(bool, bool)> = states
            .iter()
            .map(|s| (s.is_active(1), s.is_active(2)))
            .collect();
        assert_eq!(
            as_pairs,
            vec![(false, false), (false, true), (true, false), (true, true)]
        );
        assert!(states.iter().all(|s| s.is_active(0)));
    }

    #[test]
    fn state_count_for_single_gene() {
        let space = GrnSpace::new(
            ("IN", rat_int(-1)),
            vec![("A".into(), rat_int(0))],
            vec![EdgeDef {
                from: "IN".into(),
                to: "A".into(),
                sign: Sign::Activate,
                w_max: rat_int(1),
                length: 1,
            }],
        )
        .unwrap();
        assert_eq!(space.enumerate_states().len(), 2);
    }

    #[test]
    fn three_gene_space_has_eight_states() {
        let space = crate::catalog::find("osc3").unwrap().space().unwrap();
        assert_eq!(space.enumerate_states().len(), 8);
    }

    #[test]
    fn rejects_missing_input_edge() {
        let err = GrnSpace::new(
            ("IN", rat_int(-1)),
            vec![("A".into(), rat_int(0)), ("B".into(), rat_int(0))],
            vec![EdgeDef {
                from: "IN".into(),
                to: "A".into(),
                sign: Sign::Activate,
                w_max: rat_int(1),
                length: 1,
            }],
        )
        .unwrap_err();
        assert!(matches!(err, ModelError::InvalidSpace(_)));
    }

    #[test]
    fn rejects_non_negative_input_threshold() {
        let err = GrnSpace::new(
            ("IN", rat_int(0)),
            vec![],
            vec![],
        )
        .unwrap_err();
        assert!(matches!(err, ModelError::InvalidSpace(_)));
    }

    #[test]
    fn rejects_out_of_box_weights() {
        let space = bistable_space();
        let mut vals: Vec<Rational> =
            space.edges().iter().map(|e| e.w_max.clone()).collect();
        vals[0] = rat_int(2);
        assert!(WeightFunction::new(&space, vals).is_err());
    }

    #[test]
    fn quantized_grid_spans_the_edge_box() {
        let space = bistable_space();
        let grid = space.quantized_grid();
        assert_eq!(grid.radices(), vec![13; 6]);
        assert_eq!(grid.total_points(), Some(13u64.pow(6)));
        assert_eq!(*grid.value(0, 0), rat(2, 3));
        assert_eq!(*grid.value(0, 12), rat_int(0));
        assert_eq!(*grid.value(0, 3), rat(1, 2));
        assert!(grid.contains(&space.max_weights()));
    }

    #[test]
    fn model_json_round_trips() {
        let space = bistable_space();
        let json = space.to_json();
        let parsed = GrnSpace::from_json(&json).unwrap();
        assert_eq!(space, parsed);
        assert_eq!(json, parsed.to_json());
    }

    #[test]
    fn weights_json_round_trips() {
        let space = bistable_space();
        let w = space.max_weights();
        let json = space.weights_to_json(&w);
        assert_eq!(space.weights_from_json(&json).unwrap(), w);
    }
}
