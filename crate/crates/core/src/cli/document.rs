//! JSON wire format for pairs, splits and generator truth.

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::field::{FieldElement, FieldKind, FieldSpec};
use crate::gen::{ConstructionKind, GeneratedInstance, Truth};
use crate::linalg::{Matrix, SubspaceBasis};
use crate::pair::SplitDecomposition;

pub type ScalarRows = Vec<Vec<String>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FieldJson {
    Q,
    GF { p: u64 },
}

impl FieldJson {
    pub fn from_spec(spec: FieldSpec) -> Self {
        match spec.kind() {
            FieldKind::Rationals => FieldJson::Q,
            FieldKind::PrimeField => FieldJson::GF { p: spec.order().unwrap_or(0) },
        }
    }

    pub fn to_spec(self) -> Result<FieldSpec, CliError> {
        match self {
            FieldJson::Q => Ok(FieldSpec::rationals()),
            FieldJson::GF { p } => FieldSpec::prime(p).map_err(|e| CliError::Parse(e.to_string())),
        }
    }
}

/// A split decomposition on the wire: each subspace is a list of basis rows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitJson {
    pub theta: Vec<String>,
    pub theta_star: Vec<String>,
    pub subspaces: Vec<ScalarRows>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruthJson {
    pub kind: ConstructionKind,
    pub base: ConstructionKind,
    pub seed: u64,
    pub split: SplitJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjugator: Option<ScalarRows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<ScalarRows>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DocumentJson {
    pub field: FieldJson,
    #[serde(rename = "A")]
    pub a: ScalarRows,
    #[serde(rename = "Astar")]
    pub astar: ScalarRows,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truth: Option<TruthJson>,
}

/// A parsed and validated document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairDocument {
    pub field: FieldSpec,
    pub a: Matrix,
    pub astar: Matrix,
    pub truth: Option<Truth>,
}

pub fn scalars_to_json(xs: &[FieldElement]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

pub fn matrix_to_json(m: &Matrix) -> ScalarRows {
    (0..m.rows()).map(|i| scalars_to_json(m.row(i))).collect()
}

pub fn subspace_to_json(s: &SubspaceBasis) -> ScalarRows {
    s.basis().iter().map(|v| scalars_to_json(v)).collect()
}

pub fn split_to_json(s: &SplitDecomposition) -> SplitJson {
    SplitJson {
        theta: scalars_to_json(&s.theta),
        theta_star: scalars_to_json(&s.theta_star),
        subspaces: s.subspaces.iter().map(subspace_to_json).collect(),
    }
}

pub fn instance_to_json(inst: &GeneratedInstance) -> DocumentJson {
    let t = &inst.truth;
    DocumentJson {
        field: FieldJson::from_spec(inst.a.spec()),
        a: matrix_to_json(&inst.a),
        astar: matrix_to_json(&inst.astar),
        truth: Some(TruthJson {
            kind: t.kind,
            base: t.base,
            seed: t.seed,
            split: split_to_json(&t.split),
            conjugator: t.conjugator.as_ref().map(matrix_to_json),
            witness: t.witness.as_ref().map(subspace_to_json),
        }),
    }
}

fn parse_scalars(spec: FieldSpec, xs: &[String], what: &str) -> Result<Vec<FieldElement>, CliError> {
    xs.iter()
        .map(|s| FieldElement::parse(spec, s).map_err(|e| CliError::Parse(format!("{what}: {s:?}: {e}"))))
        .collect()
}

fn parse_square(spec: FieldSpec, rows: &ScalarRows, what: &str) -> Result<Matrix, CliError> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(CliError::Parse(format!("{what} must be a nonempty square matrix")));
    }
    let parsed = rows
        .iter()
        .map(|r| parse_scalars(spec, r, what))
        .collect::<Result<Vec<_>, _>>()?;
    Matrix::from_rows(spec, parsed).map_err(|e| CliError::Parse(format!("{what}: {e}")))
}

fn parse_subspace(spec: FieldSpec, n: usize, rows: &ScalarRows, what: &str) -> Result<SubspaceBasis, CliError> {
    if rows.iter().any(|r| r.len() != n) {
        return Err(CliError::Parse(format!("{what}: basis vectors must have length {n}")));
    }
    let vecs = rows
        .iter()
        .map(|r| parse_scalars(spec, r, what))
        .collect::<Result<Vec<_>, _>>()?;
    SubspaceBasis::span(spec, n, vecs).map_err(|e| CliError::Parse(format!("{what}: {e}")))
}

/// Parses a candidate split in the space `spec^n`. Bases are re-spanned, so
/// any basis of each subspace is accepted.
pub fn parse_split(spec: FieldSpec, n: usize, s: &SplitJson) -> Result<SplitDecomposition, CliError> {
    Ok(SplitDecomposition {
        subspaces: s
            .subspaces
            .iter()
            .enumerate()
            .map(|(i, rows)| parse_subspace(spec, n, rows, &format!("U_{i}")))
            .collect::<Result<_, _>>()?,
        theta: parse_scalars(spec, &s.theta, "theta")?,
        theta_star: parse_scalars(spec, &s.theta_star, "theta_star")?,
    })
}

impl DocumentJson {
    pub fn validate(&self) -> Result<PairDocument, CliError> {
        let field = self.field.to_spec()?;
        let a = parse_square(field, &self.a, "A")?;
        let astar = parse_square(field, &self.astar, "Astar")?;
        if a.rows() != astar.rows() {
            return Err(CliError::Parse(format!("A is {0}x{0} but Astar is {1}x{1}", a.rows(), astar.rows())));
        }
        let n = a.rows();
        let truth = self
            .truth
            .as_ref()
            .map(|t| -> Result<Truth, CliError> {
                Ok(Truth {
                    kind: t.kind,
                    base: t.base,
                    split: parse_split(field, n, &t.split)?,
                    conjugator: t.conjugator.as_ref().map(|m| parse_square(field, m, "conjugator")).transpose()?,
                    witness: t.witness.as_ref().map(|w| parse_subspace(field, n, w, "witness")).transpose()?,
                    seed: t.seed,
                })
            })
            .transpose()?;
        Ok(PairDocument { field, a, astar, truth })
    }
}

pub fn parse_document(text: &str) -> Result<PairDocument, CliError> {
    let raw: DocumentJson = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    raw.validate()
}
