//! JSON files for geometries, correlations and hypermaps.

use serde::{Deserialize, Serialize};
use thiserror::Error;
use trigeom_core::harness::Hypermap;
use trigeom_core::incidence::{Correlation, CorrelationError, IncidenceError, IncidenceSystem};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("element ids must be dense from 0; found {found} at position {position}")]
    SparseIds { position: usize, found: usize },
    #[error("element {id} has unknown type {type_label:?}")]
    UnknownType { id: usize, type_label: String },
    #[error(transparent)]
    Incidence(#[from] IncidenceError),
    #[error(transparent)]
    Correlation(#[from] CorrelationError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementRecord {
    pub id: usize,
    #[serde(rename = "type")]
    pub type_label: String,
    pub label: String,
}

/// `{"types":[...], "elements":[{"id","type","label"}], "incidences":[[a,b],...]}`
/// with optional `name` and `components` annotations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometryFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub types: Vec<String>,
    pub elements: Vec<ElementRecord>,
    pub incidences: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<usize>,
}

impl GeometryFile {
    pub fn from_system(sys: &IncidenceSystem, name: Option<String>) -> Self {
        let elements = (0..sys.len())
            .map(|x| ElementRecord {
                id: x,
                type_label: sys.types()[sys.type_of(x)].clone(),
                label: sys.label(x).to_string(),
            })
            .collect();
        GeometryFile {
            name,
            types: sys.types().to_vec(),
            elements,
            incidences: sys.edges().map(|(a, b)| [a, b]).collect(),
            components: None,
        }
    }

    pub fn to_system(&self) -> Result<IncidenceSystem, FormatError> {
        let mut type_of = Vec::with_capacity(self.elements.len());
        let mut labels = Vec::with_capacity(self.elements.len());
        for (position, e) in self.elements.iter().enumerate() {
            if e.id != position {
                return Err(FormatError::SparseIds {
                    position,
                    found: e.id,
                });
            }
            let t = self
                .types
                .iter()
                .position(|t| *t == e.type_label)
                .ok_or_else(|| FormatError::UnknownType {
                    id: e.id,
                    type_label: e.type_label.clone(),
                })?;
            type_of.push(t);
            labels.push(e.label.clone());
        }
        Ok(IncidenceSystem::new(
            self.types.clone(),
            type_of,
            labels,
            self.incidences.iter().map(|&[a, b]| (a, b)),
        )?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("geometry serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }
}

pub fn read_geometry(text: &str) -> Result<IncidenceSystem, FormatError> {
    GeometryFile::from_json(text)?.to_system()
}

pub fn write_correlation(c: &Correlation) -> String {
    serde_json::to_string(c).expect("correlation serializes")
}

/// Parses `{"perm":[...], "type_perm":[...]}` and re-verifies it on `sys`.
pub fn read_correlation(sys: &IncidenceSystem, text: &str) -> Result<Correlation, FormatError> {
    let c: Correlation = serde_json::from_str(text)?;
    c.verify(sys)?;
    Ok(c)
}

/// Hypermap JSON: the three dart permutations, counts and the summary line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypermapFile {
    pub summary: String,
    #[serde(flatten)]
    pub hypermap: Hypermap,
}

impl HypermapFile {
    pub fn new(hypermap: Hypermap) -> Self {
        HypermapFile {
            summary: hypermap.summary(),
            hypermap,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("hypermap serializes")
    }
}
