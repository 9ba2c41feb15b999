//! Bundled benchmark networks with their reference LTL properties.
//!
//! `bistable` carries the published parameter values. The feed-forward-loop
//! motifs and the three-gene repressor ring have published topologies and
//! properties but no published numeric parameters; their thresholds and
//! weight maxima here are illustrative choices under which the full-weight
//! individual exhibits the motif's characteristic behaviour.

use crate::logic::{parse_ltl, LtlFormula, LtlParseError};
use crate::model::{GrnSpace, ModelError};

/// One bundled network: model JSON plus its reference property.
#[derive(Debug, Clone, Copy)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    /// GRN-space JSON, identical to what `catalog export` writes.
    pub model_json: &'static str,
    /// Reference property in the LTL text grammar.
    pub property: &'static str,
}

const ENTRIES: &[CatalogEntry] = &[
    CatalogEntry {
        name: "bistable",
        description: "mutually inhibiting pair with self-activation; the state \
                      with one gene expressed must persist",
        model_json: include_str!("catalog/bistable.json"),
        property: "(A & !B -> G (A & !B)) & (!A & B -> G (!A & B))",
    },
    CatalogEntry {
        name: "ffl-coherent",
        description: "coherent type-I feed-forward loop; sign-sensitive delay: \
                      the output eventually follows the input on, and drops \
                      immediately when the input is off",
        model_json: include_str!("catalog/ffl_coherent.json"),
        property: "(A & !C -> F C) & (!A & C -> X !C)",
    },
    CatalogEntry {
        name: "ffl-incoherent",
        description: "incoherent type-I feed-forward loop; pulse generator: \
                      under input the output rises at once and later falls",
        model_json: include_str!("catalog/ffl_incoherent.json"),
        property: "!B -> ((A & !C -> X C) & (A & C -> F !C))",
    },
    CatalogEntry {
        name: "osc3",
        description: "three-gene repression ring (repressilator); every gene \
                      keeps alternating between expressed and silent",
        model_json: include_str!("catalog/osc3.json"),
        property: "(A -> F !A) & (!A -> F A) & (B -> F !B) & (!B -> F B) & (C -> F !C) & (!C -> F C)",
    },
];

/// All bundled networks.
pub fn entries() -> &'static [CatalogEntry] {
    ENTRIES
}

/// Looks an entry up by name.
pub fn find(name: &str) -> Option<&'static CatalogEntry> {
    ENTRIES.iter().find(|e| e.name == name)
}

impl CatalogEntry {
    /// Parses the bundled model.
    pub fn space(&self) -> Result<GrnSpace, ModelError> {
        GrnSpace::from_json(self.model_json)
    }

    /// Parses the bundled property.
    pub fn ltl(&self) -> Result<LtlFormula, LtlParseError> {
        parse_ltl(self.property)
    }
}
