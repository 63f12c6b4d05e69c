//! JSON document schemas for group inputs and certificates.
//!
//! Rationals are serialized as reduced `p/q` strings and floating entries as
//! shortest round-trip decimal strings, so documents survive
//! parse(serialize(c)) = c without precision loss.

use kahler_core::decide::{
    CheckResult, ComplexStructure, Decision, KahlerCertificate, NonexistenceWitness,
    VerificationReport,
};
use kahler_core::exactlin::{Rational, RationalMatrix};
use kahler_core::matgroup::{BilinearForm, FiniteMatrixGroup, FormKind, GroupError};
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::str::FromStr;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DocError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("certificate is internally inconsistent: {0}")]
    Inconsistent(String),
    #[error("group error: {0}")]
    Group(#[from] GroupError),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Input document: the integer matrix generators of the finite group.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroupInputDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dimension: usize,
    pub generators: Vec<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_order: Option<usize>,
}

impl GroupInputDocument {
    pub fn from_group(group: &FiniteMatrixGroup, name: Option<String>) -> Self {
        Self {
            name,
            dimension: group.dimension(),
            generators: group
                .generators()
                .iter()
                .map(|g| int_matrix_to_rows(g).expect("generators are small integers"))
                .collect(),
            max_order: None,
        }
    }

    pub fn to_group(&self, max_order: usize) -> Result<Arc<FiniteMatrixGroup>, DocError> {
        if self.generators.is_empty() {
            return Err(DocError::Schema("at least one generator required".into()));
        }
        let n = self.dimension;
        let mut gens = Vec::with_capacity(self.generators.len());
        for (idx, rows) in self.generators.iter().enumerate() {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(DocError::Schema(format!(
                    "generator {idx} is not {n}x{n} as declared"
                )));
            }
            gens.push(RationalMatrix::from_fn(n, n, |i, j| {
                Rational::from_integer(BigInt::from(rows[i][j]))
            }));
        }
        Ok(FiniteMatrixGroup::close_group(gens, max_order)?)
    }
}

fn int_matrix_to_rows(m: &RationalMatrix) -> Result<Vec<Vec<i64>>, DocError> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    let e = m.at(i, j);
                    if !e.is_integer() {
                        return Err(DocError::Schema("expected an integer matrix".into()));
                    }
                    e.to_integer()
                        .to_i64()
                        .ok_or_else(|| DocError::Schema("integer entry out of i64 range".into()))
                })
                .collect()
        })
        .collect()
}

fn rows_to_int_matrix(rows: &[Vec<i64>]) -> Result<RationalMatrix, DocError> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(DocError::Schema("matrix is not square".into()));
    }
    Ok(RationalMatrix::from_fn(n, n, |i, j| {
        Rational::from_integer(BigInt::from(rows[i][j]))
    }))
}

fn rational_matrix_to_strings(m: &RationalMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.at(i, j).to_string()).collect())
        .collect()
}

fn strings_to_rational_matrix(rows: &[Vec<String>]) -> Result<RationalMatrix, DocError> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(DocError::Schema("matrix is not square".into()));
    }
    let mut out = RationalMatrix::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            let v = Rational::from_str(s)
                .map_err(|e| DocError::Schema(format!("bad rational '{s}': {e}")))?;
            out.set(i, j, v);
        }
    }
    Ok(out)
}

fn float_matrix_to_strings(m: &DMatrix<f64>) -> Vec<Vec<String>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].to_string()).collect())
        .collect()
}

fn strings_to_float_matrix(rows: &[Vec<String>]) -> Result<DMatrix<f64>, DocError> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(DocError::Schema("matrix is not square".into()));
    }
    let mut out = DMatrix::<f64>::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            out[(i, j)] =
                f64::from_str(s).map_err(|e| DocError::Schema(format!("bad float '{s}': {e}")))?;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct StructureDocument {
    /// "exact" or "float".
    pub grade: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    /// Decimal strings, shortest round-trip representation.
    pub entries: Vec<Vec<String>>,
    /// Reduced p/q strings, present for exact-grade structures.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_entries: Option<Vec<Vec<String>>>,
}

impl StructureDocument {
    pub fn from_structure(j: &ComplexStructure) -> Self {
        match j {
            ComplexStructure::Exact(m) => Self {
                grade: "exact".into(),
                tolerance: None,
                entries: float_matrix_to_strings(&j.to_float()),
                exact_entries: Some(rational_matrix_to_strings(m)),
            },
            ComplexStructure::Float { matrix, tolerance } => Self {
                grade: "float".into(),
                tolerance: Some(*tolerance),
                entries: float_matrix_to_strings(matrix),
                exact_entries: None,
            },
        }
    }

    pub fn to_structure(&self) -> Result<ComplexStructure, DocError> {
        match self.grade.as_str() {
            "exact" => {
                let rows = self
                    .exact_entries
                    .as_ref()
                    .ok_or_else(|| DocError::Schema("exact grade requires exact_entries".into()))?;
                Ok(ComplexStructure::Exact(strings_to_rational_matrix(rows)?))
            }
            "float" => Ok(ComplexStructure::Float {
                matrix: strings_to_float_matrix(&self.entries)?,
                tolerance: self.tolerance.unwrap_or(1e-9),
            }),
            other => Err(DocError::Schema(format!("unknown grade '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessDocument {
    OddDimension {
        dimension: usize,
    },
    ZeroInvariantAlternatingSpace,
    GenericDegeneracy {
        probes: u32,
        exact: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        log2_failure_bound: Option<i32>,
    },
}

impl WitnessDocument {
    fn from_witness(w: &NonexistenceWitness) -> Self {
        match w {
            NonexistenceWitness::OddDimension { dimension } => Self::OddDimension {
                dimension: *dimension,
            },
            NonexistenceWitness::ZeroInvariantAlternatingSpace => {
                Self::ZeroInvariantAlternatingSpace
            }
            NonexistenceWitness::GenericDegeneracy {
                probes,
                exact,
                log2_failure_bound,
            } => Self::GenericDegeneracy {
                probes: *probes,
                exact: *exact,
                log2_failure_bound: *log2_failure_bound,
            },
        }
    }

    fn to_witness(&self) -> NonexistenceWitness {
        match self {
            Self::OddDimension { dimension } => NonexistenceWitness::OddDimension {
                dimension: *dimension,
            },
            Self::ZeroInvariantAlternatingSpace => {
                NonexistenceWitness::ZeroInvariantAlternatingSpace
            }
            Self::GenericDegeneracy {
                probes,
                exact,
                log2_failure_bound,
            } => NonexistenceWitness::GenericDegeneracy {
                probes: *probes,
                exact: *exact,
                log2_failure_bound: *log2_failure_bound,
            },
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CheckDocument {
    pub check: String,
    pub residual: f64,
    pub exact: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct Provenance {
    pub seed: u64,
    pub tool_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

/// The serialized witness bundle.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CertificateDocument {
    pub decision: String,
    pub dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<StructureDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjugator: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nonexistence_witness: Option<WitnessDocument>,
    pub verification: Vec<CheckDocument>,
    pub provenance: Provenance,
}

/// Timestamp comes only from SOURCE_DATE_EPOCH so that reruns with the same
/// seed stay byte-identical.
pub fn reproducible_timestamp() -> Option<String> {
    std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .map(|epoch| format!("{epoch} (epoch seconds)"))
}

impl CertificateDocument {
    pub fn from_certificate(cert: &KahlerCertificate, dimension: usize) -> Result<Self, DocError> {
        Ok(Self {
            decision: match cert.decision {
                Decision::Kahler => "kahler".into(),
                Decision::NotKahler => "not_kahler".into(),
            },
            dimension,
            omega: cert
                .omega
                .as_ref()
                .map(|f| int_matrix_to_rows(&f.matrix))
                .transpose()?,
            s: cert
                .s
                .as_ref()
                .map(|f| int_matrix_to_rows(&f.matrix))
                .transpose()?,
            j: cert.j.as_ref().map(StructureDocument::from_structure),
            conjugator: cert.conjugator.as_ref().map(rational_matrix_to_strings),
            signature: cert.signature,
            nonexistence_witness: cert.witness.as_ref().map(WitnessDocument::from_witness),
            verification: cert
                .verification
                .checks
                .iter()
                .map(|c| CheckDocument {
                    check: c.name.clone(),
                    residual: c.residual,
                    exact: c.exact,
                    pass: c.pass,
                })
                .collect(),
            provenance: Provenance {
                seed: cert.seed,
                tool_version: env!("CARGO_PKG_VERSION").into(),
                timestamp: reproducible_timestamp(),
            },
        })
    }

    /// Rebuild the in-memory certificate. Shape violations are schema
    /// errors; a form whose entries contradict its declared symmetry kind is
    /// reported as an inconsistency (the certificate is well-formed JSON but
    /// cannot be valid).
    pub fn to_certificate(&self) -> Result<KahlerCertificate, DocError> {
        let decision = match self.decision.as_str() {
            "kahler" => Decision::Kahler,
            "not_kahler" => Decision::NotKahler,
            other => return Err(DocError::Schema(format!("unknown decision '{other}'"))),
        };
        let omega = self
            .omega
            .as_ref()
            .map(|rows| {
                let m = rows_to_int_matrix(rows)?;
                BilinearForm::new(m, FormKind::Alternating)
                    .map_err(|_| DocError::Inconsistent("omega is not alternating".into()))
            })
            .transpose()?;
        let s = self
            .s
            .as_ref()
            .map(|rows| {
                let m = rows_to_int_matrix(rows)?;
                BilinearForm::new(m, FormKind::Symmetric)
                    .map_err(|_| DocError::Inconsistent("s is not symmetric".into()))
            })
            .transpose()?;
        let j = self.j.as_ref().map(|d| d.to_structure()).transpose()?;
        let conjugator = self
            .conjugator
            .as_ref()
            .map(|rows| strings_to_rational_matrix(rows))
            .transpose()?;
        Ok(KahlerCertificate {
            decision,
            omega,
            s,
            j,
            conjugator,
            signature: self.signature,
            witness: self
                .nonexistence_witness
                .as_ref()
                .map(WitnessDocument::to_witness),
            verification: VerificationReport {
                checks: self
                    .verification
                    .iter()
                    .map(|c| CheckResult {
                        name: c.check.clone(),
                        residual: c.residual,
                        exact: c.exact,
                        pass: c.pass,
                    })
                    .collect(),
            },
            seed: self.provenance.seed,
        })
    }
}

/// Output of the `cm` subcommand: the cyclotomic group together with its
/// closed-form structure and the cross-check against the decision pipeline.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CmDocument {
    pub order: u32,
    pub dimension: usize,
    pub cm_type: Vec<u32>,
    pub group: GroupInputDocument,
    pub j: StructureDocument,
    /// Exact presentation `coeff / sqrt(surd)` when available (orders 3, 4, 6):
    /// coefficient matrix as p/q strings plus the surd scale.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surd_presentation: Option<SurdDocument>,
    pub cross_check: CrossCheckDocument,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SurdDocument {
    pub coeff: Vec<Vec<String>>,
    pub surd: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CrossCheckDocument {
    pub decider_decision: String,
    pub both_kahler: bool,
    pub decider_signature: Option<(usize, usize)>,
    pub cm_signature: Option<(usize, usize)>,
    pub signatures_agree: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub siegel_distance: Option<f64>,
}

pub fn surd_document(coeff: &RationalMatrix, surd: u32) -> SurdDocument {
    SurdDocument {
        coeff: rational_matrix_to_strings(coeff),
        surd,
    }
}
