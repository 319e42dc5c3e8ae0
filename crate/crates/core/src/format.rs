//! JSON file formats for circuits, IDS instances and reduction manifests.
//!
//! Circuit: `{"vertices": [{"id", "class"}], "edges": [{"id", "tail",
//! "out_port", "head", "in_port"}], "classes": [[vertex ids]]}` with
//! 1-based class numbers indexing `classes`.
//!
//! IDS instance: `{"n", "pi": [images], "generators": [[[x, y], ...], ...],
//! "k"}`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{CircuitError, Edge, EdgeId, PolarizedCircuit, Polarization, SwitchingCircuit, VertexId};
use crate::perm::{IdsGeneratorSet, PermError, Permutation, Transposition};
use crate::reduction::{IdsDistanceInstance, ReductionError};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("vertex {vertex} claims class {claimed} but is listed in class {listed}")]
    ClassMismatch { vertex: VertexId, claimed: usize, listed: usize },
    #[error("vertex {vertex} claims class {claimed}, which does not exist")]
    UnknownClass { vertex: VertexId, claimed: usize },
    #[error("n = {n} but pi has {len} images")]
    PiLength { n: usize, len: usize },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexEntry {
    pub id: VertexId,
    pub class: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub id: EdgeId,
    pub tail: VertexId,
    pub out_port: u32,
    pub head: VertexId,
    pub in_port: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitFile {
    pub vertices: Vec<VertexEntry>,
    pub edges: Vec<EdgeEntry>,
    pub classes: Vec<Vec<VertexId>>,
}

impl CircuitFile {
    pub fn from_circuit(c: &PolarizedCircuit) -> Self {
        let vertices = c.circuit().vertices().iter().map(|&id| VertexEntry { id, class: c.class_of(id) + 1 }).collect();
        let edges = c
            .edges()
            .iter()
            .map(|e| EdgeEntry { id: e.id, tail: e.tail, out_port: e.out_port, head: e.head, in_port: e.in_port })
            .collect();
        CircuitFile { vertices, edges, classes: c.polarization().classes().to_vec() }
    }

    pub fn to_circuit(&self) -> Result<PolarizedCircuit, FormatError> {
        let vertex_ids: Vec<VertexId> = self.vertices.iter().map(|v| v.id).collect();
        let edges = self
            .edges
            .iter()
            .map(|e| Edge { id: e.id, tail: e.tail, out_port: e.out_port, head: e.head, in_port: e.in_port })
            .collect();
        let pc = PolarizedCircuit::new(
            SwitchingCircuit::new(vertex_ids.clone(), edges),
            Polarization::new(self.classes.clone()),
        )?;
        // validation has made class membership a partition of the vertices
        for v in &self.vertices {
            if v.class == 0 || v.class > self.classes.len() {
                return Err(FormatError::UnknownClass { vertex: v.id, claimed: v.class });
            }
            let listed = pc.class_of(v.id) + 1;
            if listed != v.class {
                return Err(FormatError::ClassMismatch { vertex: v.id, claimed: v.class, listed });
            }
        }
        Ok(pc)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdsFile {
    pub n: usize,
    pub pi: Vec<usize>,
    pub generators: Vec<Vec<[usize; 2]>>,
    pub k: usize,
}

impl IdsFile {
    pub fn from_instance(inst: &IdsDistanceInstance) -> Self {
        IdsFile {
            n: inst.degree(),
            pi: inst.pi().images(),
            generators: inst.ids().generators().iter().map(|g| g.iter().map(|t| [t.x(), t.y()]).collect()).collect(),
            k: inst.bound_k(),
        }
    }

    pub fn to_instance(&self) -> Result<IdsDistanceInstance, FormatError> {
        if self.pi.len() != self.n {
            return Err(FormatError::PiLength { n: self.n, len: self.pi.len() });
        }
        let pi = Permutation::from_images(&self.pi)?;
        let generators = self
            .generators
            .iter()
            .map(|g| g.iter().map(|&[x, y]| Transposition::new(x, y)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let ids = IdsGeneratorSet::new(self.n, generators)?;
        Ok(IdsDistanceInstance::new(ids, pi, self.k)?)
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn parse_circuit_json(text: &str) -> Result<PolarizedCircuit, FormatError> {
    serde_json::from_str::<CircuitFile>(text)?.to_circuit()
}

pub fn circuit_to_json(c: &PolarizedCircuit) -> String {
    to_json_string(&CircuitFile::from_circuit(c))
}

pub fn parse_ids_json(text: &str) -> Result<IdsDistanceInstance, FormatError> {
    serde_json::from_str::<IdsFile>(text)?.to_instance()
}

pub fn ids_to_json(inst: &IdsDistanceInstance) -> String {
    to_json_string(&IdsFile::from_instance(inst))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadget::{build_a, IdAllocator};
    use crate::sat::Literal;

    const I_CIRCUIT: &str = r#"{
        "vertices": [{"id": 1, "class": 1}],
        "edges": [
            {"id": 1, "tail": 1, "out_port": 1, "head": 1, "in_port": 2},
            {"id": 2, "tail": 1, "out_port": 2, "head": 1, "in_port": 1}
        ],
        "classes": [[1]]
    }"#;

    #[test]
    fn circuit_round_trip() {
        let pc = parse_circuit_json(I_CIRCUIT).unwrap();
        assert_eq!(pc.num_edges(), 2);
        let text = circuit_to_json(&pc);
        assert_eq!(circuit_to_json(&parse_circuit_json(&text).unwrap()), text);

        let a = build_a(Literal::positive(1), Literal::negative(2), Literal::positive(3), &mut IdAllocator::new()).unwrap().polarized().unwrap();
        let file = CircuitFile::from_circuit(&a);
        assert_eq!(file.classes.len(), 3);
        assert_eq!(serde_json::from_str::<CircuitFile>(&circuit_to_json(&a)).unwrap(), file);
    }

    #[test]
    fn circuit_class_field_must_agree() {
        let wrong = I_CIRCUIT.replace(r#""class": 1"#, r#""class": 2"#);
        assert!(matches!(parse_circuit_json(&wrong), Err(FormatError::UnknownClass { vertex: 1, claimed: 2 })));
        let missing = I_CIRCUIT.replace(r#""classes": [[1]]"#, r#""classes": []"#);
        assert!(matches!(parse_circuit_json(&missing), Err(FormatError::Circuit(_))));
        let extra = I_CIRCUIT.replace(r#""classes""#, r#""colour": 3, "classes""#);
        assert!(matches!(parse_circuit_json(&extra), Err(FormatError::Json(_))));
    }

    #[test]
    fn empty_circuit_is_rejected() {
        let empty = r#"{"vertices": [], "edges": [], "classes": []}"#;
        assert!(matches!(parse_circuit_json(empty), Err(FormatError::Circuit(CircuitError::Empty))));
    }

    #[test]
    fn ids_round_trip() {
        let text = r#"{"n": 4, "pi": [2, 3, 4, 1], "generators": [[[1, 2], [3, 4]]], "k": 1}"#;
        let inst = parse_ids_json(text).unwrap();
        assert_eq!(inst.ids().width(), 2);
        assert_eq!(inst.bound_k(), 1);
        let out = ids_to_json(&inst);
        assert_eq!(parse_ids_json(&out).unwrap(), inst);
    }

    #[test]
    fn ids_errors() {
        let short = r#"{"n": 3, "pi": [1, 2], "generators": [], "k": 0}"#;
        assert!(matches!(parse_ids_json(short), Err(FormatError::PiLength { n: 3, len: 2 })));
        let overlap = r#"{"n": 3, "pi": [1, 2, 3], "generators": [[[1, 2]], [[2, 3]]], "k": 0}"#;
        assert!(matches!(parse_ids_json(overlap), Err(FormatError::Perm(PermError::IdsViolation { point: 2 }))));
        let big_k = r#"{"n": 2, "pi": [1, 2], "generators": [], "k": 3}"#;
        assert!(matches!(parse_ids_json(big_k), Err(FormatError::Reduction(ReductionError::BoundTooLarge { .. }))));
        assert!(matches!(parse_ids_json("{"), Err(FormatError::Json(_))));
    }
}
