//! JSON interchange for state sets and reports.

use serde::{Deserialize, Serialize};

use crate::constructions::{ConstructionSpec, Family};
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::oplm::{CycloMatrix, OplmReport};
use crate::states::{LocalFactor, ProductState, StateSet};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorDocument {
    /// Nonzero amplitudes as `(basis index, cyclotomic literal)`.
    pub terms: Vec<(usize, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateDocument {
    pub label: String,
    pub factors: Vec<FactorDocument>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProvenanceDocument {
    pub family: Family,
    pub dims: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateSetDocument {
    pub schema_version: String,
    pub dims: Vec<usize>,
    pub ambient_order: u32,
    pub states: Vec<StateDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<ProvenanceDocument>,
}

impl StateSetDocument {
    pub fn from_set(set: &StateSet) -> Self {
        let states = set
            .states()
            .iter()
            .map(|s| StateDocument {
                label: s.label.clone(),
                factors: s
                    .factors
                    .iter()
                    .map(|f| FactorDocument {
                        terms: f.terms().into_iter().map(|(i, c)| (i, c.to_literal())).collect(),
                    })
                    .collect(),
            })
            .collect();
        StateSetDocument {
            schema_version: SCHEMA_VERSION.into(),
            dims: set.dims().to_vec(),
            ambient_order: set.ambient_order(),
            states,
            provenance: set.provenance().map(|p| ProvenanceDocument {
                family: p.family,
                dims: p.dims.clone(),
            }),
        }
    }

    /// Rebuilds the set; structure is validated but orthogonality is not
    /// (callers decide how to report a non-orthogonal input).
    pub fn to_set(&self) -> Result<StateSet> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Document(format!(
                "unsupported schema_version {:?}",
                self.schema_version
            )));
        }
        let order = self.ambient_order;
        if order == 0 {
            return Err(Error::Document("ambient_order must be positive".into()));
        }
        let mut states = Vec::with_capacity(self.states.len());
        for s in &self.states {
            if s.factors.len() != self.dims.len() {
                return Err(Error::Document(format!(
                    "state {} has {} factors for {} parties",
                    s.label,
                    s.factors.len(),
                    self.dims.len()
                )));
            }
            let factors = s
                .factors
                .iter()
                .zip(&self.dims)
                .map(|(f, &dim)| {
                    let terms = f
                        .terms
                        .iter()
                        .map(|(i, lit)| Ok((*i, Cyclotomic::parse_literal(lit, order)?)))
                        .collect::<Result<Vec<_>>>()?;
                    LocalFactor::build(dim, &terms, order)
                })
                .collect::<Result<Vec<_>>>()?;
            states.push(ProductState::new(s.label.clone(), factors));
        }
        let provenance = self
            .provenance
            .as_ref()
            .map(|p| ConstructionSpec::new(p.family, p.dims.clone()));
        StateSet::from_parts(self.dims.clone(), order, states, provenance)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

pub fn set_to_json(set: &StateSet) -> String {
    StateSetDocument::from_set(set).to_json()
}

pub fn set_from_json(text: &str) -> Result<StateSet> {
    StateSetDocument::from_json(text)?.to_set()
}

/// Matrix as nested rows of literals.
pub fn matrix_literals(m: &CycloMatrix) -> Vec<Vec<String>> {
    (0..m.dim())
        .map(|r| (0..m.dim()).map(|c| m.get(r, c).to_literal()).collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceView {
    pub unknown: (usize, usize),
    pub pair: (String, String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OplmReportView {
    pub party_group: Vec<usize>,
    pub ambient_order: u32,
    pub unknown_dim: usize,
    pub solution_dim: usize,
    pub trivial: bool,
    pub basis: Vec<Vec<Vec<String>>>,
    pub witness: Option<Vec<Vec<String>>>,
    pub trace: Vec<TraceView>,
}

impl OplmReportView {
    pub fn new(report: &OplmReport) -> Self {
        OplmReportView {
            party_group: report.party_group.clone(),
            ambient_order: report.basis[0].order(),
            unknown_dim: report.unknown_dim,
            solution_dim: report.solution_dim,
            trivial: report.trivial,
            basis: report.basis.iter().map(matrix_literals).collect(),
            witness: report.witness.as_ref().map(|w| matrix_literals(w.matrix())),
            trace: report
                .trace
                .iter()
                .map(|t| TraceView {
                    unknown: t.unknown,
                    pair: t.pair.clone(),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::gen_type2_tripartite;

    #[test]
    fn round_trip_generated_set() {
        let set = gen_type2_tripartite(3, 4, 5).unwrap();
        let text = set_to_json(&set);
        let back = set_from_json(&text).unwrap();
        assert_eq!(back, set);
        assert_eq!(set_to_json(&back), text);
        assert!(text.contains("\"schema_version\": \"1\""));
        assert!(text.contains("\"family\": \"type2-tripartite\""));
    }

    #[test]
    fn rejects_bad_documents() {
        let set = gen_type2_tripartite(3, 3, 3).unwrap();
        let mut doc = StateSetDocument::from_set(&set);
        doc.schema_version = "2".into();
        assert!(doc.to_set().is_err());
        let mut doc = StateSetDocument::from_set(&set);
        doc.states[0].factors[0].terms[0].0 = 99;
        assert!(doc.to_set().is_err());
        let mut doc = StateSetDocument::from_set(&set);
        doc.states[0].factors.pop();
        assert!(doc.to_set().is_err());
        assert!(set_from_json("{not json").is_err());
    }
}
