//! JSON interchange schema: structure files for symmetric and cyclic
//! compositions, semilinear isotopy files, and deterministic reports.
//!
//! Serialization is canonical: objects are emitted with sorted keys (the
//! default serde_json value representation), coefficients as plain integer
//! arrays, pretty-printed with a trailing newline. Canonical files
//! round-trip byte-identically.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;
use thiserror::Error;
use trialab_core::cyclic::DIM;
use trialab_core::{
    make_extension, CubicCyclicExtension, CyclicComposition, FieldElement, FiniteField, Mat,
    SemilinearIsotopy, SymmetricComposition, Tensor3,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: parse error at line {line}, column {column}: {msg}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("unsupported schema version {0}")]
    Version(u32),
    #[error("invalid field descriptor: {0}")]
    Field(#[from] trialab_core::FieldError),
    #[error("invalid structure: {0}")]
    Invalid(String),
    #[error("extension mismatch: {0}")]
    Extension(String),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FieldDesc {
    pub p: u64,
    pub k: usize,
    pub modulus: Vec<u64>,
}

impl FieldDesc {
    pub fn of(field: &FiniteField) -> FieldDesc {
        FieldDesc {
            p: field.characteristic(),
            k: field.degree(),
            modulus: field.modulus().to_vec(),
        }
    }

    pub fn to_field(&self) -> Result<FiniteField, SchemaError> {
        Ok(FiniteField::with_modulus(self.p, self.k, &self.modulus)?)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExtensionDesc {
    pub base: FieldDesc,
}

/// On-disk form of a symmetric or cyclic composition: field descriptor,
/// quadratic-form matrix, and dense structure tensor, all with coefficients
/// as coordinate-vector integer arrays.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StructureFile {
    pub schema_version: u32,
    /// "symmetric" or "cyclic".
    pub kind: String,
    /// Coefficient field: F for symmetric structures, L for cyclic ones.
    pub field: FieldDesc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension: Option<ExtensionDesc>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub induced_basis: bool,
    pub gram: Vec<Vec<Vec<u64>>>,
    pub tensor: Vec<Vec<Vec<Vec<u64>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IsotopyFile {
    pub schema_version: u32,
    /// Always "semilinear-isotopy".
    pub kind: String,
    /// The coefficient field L of the composition the map acts on.
    pub field: FieldDesc,
    pub aut_power: u8,
    pub map: Vec<Vec<Vec<u64>>>,
    pub multiplier: Vec<u64>,
}

/// Deterministic machine-readable command report.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub checks: Vec<ReportCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scalars: Option<BTreeMap<String, Vec<u64>>>,
    /// Present only when timing is requested; excluded from the
    /// bit-determinism contract.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportCheck {
    pub name: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Report {
    pub fn new(command: &str, seed: u64) -> Report {
        Report {
            command: command.to_string(),
            seed,
            checks: Vec::new(),
            scalars: None,
            timing_ms: None,
        }
    }

    pub fn absorb(&mut self, report: &trialab_core::CheckReport) {
        for c in &report.checks {
            self.checks.push(ReportCheck {
                name: c.name.clone(),
                status: if c.passed { "pass" } else { "fail" }.to_string(),
                witness: c.witness.clone(),
            });
        }
    }

    pub fn push(&mut self, name: &str, passed: bool, witness: Option<String>) {
        self.checks.push(ReportCheck {
            name: name.to_string(),
            status: if passed { "pass" } else { "fail" }.to_string(),
            witness,
        });
    }

    pub fn scalar(&mut self, name: &str, coeffs: Vec<u64>) {
        self.scalars
            .get_or_insert_with(BTreeMap::new)
            .insert(name.to_string(), coeffs);
    }
}

// ---------------------------------------------------------------------------
// Canonical serialization.
// ---------------------------------------------------------------------------

/// Canonical JSON: sorted object keys, two-space indent, trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable value");
    let mut s = serde_json::to_string_pretty(&v).expect("valid json value");
    s.push('\n');
    s
}

pub fn write_canonical<T: Serialize>(path: &Path, value: &T) -> Result<(), SchemaError> {
    std::fs::write(path, to_canonical_json(value)).map_err(|source| SchemaError::Write {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, SchemaError> {
    let text = std::fs::read_to_string(path).map_err(|source| SchemaError::Read {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| SchemaError::Parse {
        path: path.display().to_string(),
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })
}

// ---------------------------------------------------------------------------
// Conversions between files and core values.
// ---------------------------------------------------------------------------

fn encode_element(field: &FiniteField, e: &FieldElement) -> Vec<u64> {
    e.coeffs(field.degree())
}

fn decode_element(field: &FiniteField, coeffs: &[u64]) -> Result<FieldElement, SchemaError> {
    if coeffs.len() != field.degree() {
        return Err(SchemaError::Invalid(format!(
            "coefficient vector has length {}, expected {}",
            coeffs.len(),
            field.degree()
        )));
    }
    if coeffs.iter().any(|&c| c >= field.characteristic()) {
        return Err(SchemaError::Invalid(
            "coefficient not reduced mod p".to_string(),
        ));
    }
    Ok(field.from_coeffs(coeffs))
}

fn encode_mat(field: &FiniteField, m: &Mat) -> Vec<Vec<Vec<u64>>> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| encode_element(field, &m[(i, j)]))
                .collect()
        })
        .collect()
}

fn decode_mat(field: &FiniteField, data: &[Vec<Vec<u64>>]) -> Result<Mat, SchemaError> {
    if data.len() != DIM || data.iter().any(|r| r.len() != DIM) {
        return Err(SchemaError::Invalid("matrix must be 8x8".to_string()));
    }
    let mut m = Mat::zeros(DIM, DIM);
    for (i, row) in data.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            m[(i, j)] = decode_element(field, entry)?;
        }
    }
    Ok(m)
}

fn encode_tensor(field: &FiniteField, t: &Tensor3) -> Vec<Vec<Vec<Vec<u64>>>> {
    (0..DIM)
        .map(|i| {
            (0..DIM)
                .map(|j| {
                    t.product(i, j)
                        .iter()
                        .map(|e| encode_element(field, e))
                        .collect()
                })
                .collect()
        })
        .collect()
}

fn decode_tensor(
    field: &FiniteField,
    data: &[Vec<Vec<Vec<u64>>>],
) -> Result<Tensor3, SchemaError> {
    if data.len() != DIM
        || data
            .iter()
            .any(|r| r.len() != DIM || r.iter().any(|p| p.len() != DIM))
    {
        return Err(SchemaError::Invalid("tensor must be 8x8x8".to_string()));
    }
    let mut t = Tensor3::zeros(DIM);
    for (i, plane) in data.iter().enumerate() {
        for (j, prod) in plane.iter().enumerate() {
            for (k, entry) in prod.iter().enumerate() {
                t.set(i, j, k, decode_element(field, entry)?);
            }
        }
    }
    Ok(t)
}

pub fn symmetric_to_file(
    sigma: &SymmetricComposition,
    provenance: Option<String>,
) -> StructureFile {
    let f = sigma.field();
    StructureFile {
        schema_version: SCHEMA_VERSION,
        kind: "symmetric".to_string(),
        field: FieldDesc::of(f),
        extension: None,
        induced_basis: false,
        gram: encode_mat(f, sigma.gram()),
        tensor: encode_tensor(f, sigma.star_tensor()),
        provenance,
    }
}

pub fn cyclic_to_file(gamma: &CyclicComposition, provenance: Option<String>) -> StructureFile {
    let top = gamma.top();
    StructureFile {
        schema_version: SCHEMA_VERSION,
        kind: "cyclic".to_string(),
        field: FieldDesc::of(top),
        extension: Some(ExtensionDesc {
            base: FieldDesc::of(gamma.ext().base()),
        }),
        induced_basis: gamma.is_induced_basis(),
        gram: encode_mat(top, gamma.gram()),
        tensor: encode_tensor(top, gamma.star_tensor()),
        provenance,
    }
}

pub fn symmetric_from_file(file: &StructureFile) -> Result<SymmetricComposition, SchemaError> {
    if file.schema_version != SCHEMA_VERSION {
        return Err(SchemaError::Version(file.schema_version));
    }
    if file.kind != "symmetric" {
        return Err(SchemaError::Invalid(format!(
            "expected kind \"symmetric\", found \"{}\"",
            file.kind
        )));
    }
    let field = file.field.to_field()?;
    let gram = decode_mat(&field, &file.gram)?;
    let tensor = decode_tensor(&field, &file.tensor)?;
    Ok(SymmetricComposition::from_parts(field, gram, tensor))
}

/// Rebuild the cyclic composition together with its extension. The extension
/// is reconstructed deterministically from the base descriptor and must
/// agree with the file's top-field descriptor.
pub fn cyclic_from_file(
    file: &StructureFile,
) -> Result<(CubicCyclicExtension, CyclicComposition), SchemaError> {
    if file.schema_version != SCHEMA_VERSION {
        return Err(SchemaError::Version(file.schema_version));
    }
    if file.kind != "cyclic" {
        return Err(SchemaError::Invalid(format!(
            "expected kind \"cyclic\", found \"{}\"",
            file.kind
        )));
    }
    let ext_desc = file
        .extension
        .as_ref()
        .ok_or_else(|| SchemaError::Invalid("cyclic file lacks extension descriptor".into()))?;
    let base = ext_desc.base.to_field()?;
    let ext = make_extension(&base)
        .map_err(|e| SchemaError::Extension(e.to_string()))?;
    let declared = file.field.to_field()?;
    if &declared != ext.top() {
        return Err(SchemaError::Extension(
            "top field descriptor does not match the deterministic extension of the base"
                .to_string(),
        ));
    }
    let top = ext.top().clone();
    let gram = decode_mat(&top, &file.gram)?;
    let tensor = decode_tensor(&top, &file.tensor)?;
    let gamma = CyclicComposition::from_parts(ext.clone(), gram, tensor, file.induced_basis);
    Ok((ext, gamma))
}

pub fn isotopy_to_file(gamma: &CyclicComposition, t: &SemilinearIsotopy) -> IsotopyFile {
    let top = gamma.top();
    IsotopyFile {
        schema_version: SCHEMA_VERSION,
        kind: "semilinear-isotopy".to_string(),
        field: FieldDesc::of(top),
        aut_power: t.aut_power,
        map: encode_mat(top, &t.map),
        multiplier: encode_element(top, &t.multiplier),
    }
}

pub fn isotopy_from_file(
    gamma: &CyclicComposition,
    file: &IsotopyFile,
) -> Result<SemilinearIsotopy, SchemaError> {
    if file.schema_version != SCHEMA_VERSION {
        return Err(SchemaError::Version(file.schema_version));
    }
    if file.kind != "semilinear-isotopy" {
        return Err(SchemaError::Invalid(format!(
            "expected kind \"semilinear-isotopy\", found \"{}\"",
            file.kind
        )));
    }
    let top = gamma.top();
    let declared = file.field.to_field()?;
    if &declared != top {
        return Err(SchemaError::Extension(
            "isotopy field does not match the composition's coefficient field".to_string(),
        ));
    }
    Ok(SemilinearIsotopy {
        aut_power: file.aut_power % 3,
        map: decode_mat(top, &file.map)?,
        multiplier: decode_element(top, &file.multiplier)?,
    })
}

/// Encode a field element of the given field for the scalar audit chain.
pub fn scalar_coeffs(field: &FiniteField, e: &FieldElement) -> Vec<u64> {
    encode_element(field, e)
}
