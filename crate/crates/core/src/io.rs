//! JSON file formats and atomic save/load. Complex scalars are serialized as
//! `[re, im]` pairs.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dft::PeriodicSequence;
use crate::error::{Error, Result};
use crate::frame::FrameCertificate;
use crate::linalg::{CMatrix, CVector, Subspace, Tolerances};
use crate::recovery::{RecoveryReport, ResidueLimits};
use crate::samples::SampleMatrix;
use crate::system::{SourceSignal, SystemInstance};

pub type JsonComplex = [f64; 2];

pub fn complex_to_json(z: Complex64) -> JsonComplex {
    [z.re, z.im]
}

pub fn complex_from_json(p: JsonComplex) -> Complex64 {
    Complex64::new(p[0], p[1])
}

pub fn vector_to_json(v: &CVector) -> Vec<JsonComplex> {
    v.iter().map(|&z| complex_to_json(z)).collect()
}

pub fn vector_from_json(row: &[JsonComplex]) -> CVector {
    CVector::from_iterator(row.len(), row.iter().map(|&p| complex_from_json(p)))
}

/// Row-major matrix serialization.
pub fn matrix_to_json(m: &CMatrix) -> Vec<Vec<JsonComplex>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| complex_to_json(m[(r, c)])).collect())
        .collect()
}

pub fn matrix_from_json(rows: &[Vec<JsonComplex>]) -> Result<CMatrix> {
    if rows.is_empty() {
        return Err(Error::InvalidParameter("empty matrix".into()));
    }
    let ncols = rows[0].len();
    for r in rows {
        if r.len() != ncols {
            return Err(Error::DimensionMismatch {
                expected: ncols,
                got: r.len(),
            });
        }
    }
    Ok(CMatrix::from_fn(rows.len(), ncols, |r, c| {
        complex_from_json(rows[r][c])
    }))
}

/// On-disk description of a [`SystemInstance`].
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct InstanceFile {
    pub dim: usize,
    pub period: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<JsonComplex>>,
    #[serde(rename = "W_basis")]
    pub w_basis: Vec<Vec<JsonComplex>>,
    #[serde(rename = "G")]
    pub g: Vec<Vec<JsonComplex>>,
    pub seed: u64,
}

impl InstanceFile {
    pub fn from_instance(inst: &SystemInstance) -> Self {
        Self {
            dim: inst.dim(),
            period: inst.period(),
            a: matrix_to_json(inst.a()),
            w_basis: (0..inst.dim())
                .map(|r| {
                    (0..inst.subspace().dim())
                        .map(|c| complex_to_json(inst.subspace().basis()[(r, c)]))
                        .collect()
                })
                .collect(),
            g: inst.sampling_vectors().iter().map(vector_to_json).collect(),
            seed: inst.seed(),
        }
    }

    /// Validate and build the instance; contractivity and basis orthonormality
    /// are re-checked on load.
    pub fn to_instance(&self, tol: Tolerances) -> Result<SystemInstance> {
        let a = matrix_from_json(&self.a)?;
        if a.nrows() != self.dim || a.ncols() != self.dim {
            return Err(Error::InvalidParameter(
                "A does not match declared dimension".into(),
            ));
        }
        let m = self.w_basis.first().map_or(0, |r| r.len());
        let basis = if m == 0 {
            CMatrix::zeros(self.dim, 0)
        } else {
            let b = matrix_from_json(&self.w_basis)?;
            if b.nrows() != self.dim {
                return Err(Error::InvalidParameter(
                    "W_basis does not match declared dimension".into(),
                ));
            }
            b
        };
        let w = Subspace::from_orthonormal_basis(basis, tol.tol_ortho.max(1e-10))?;
        let g = self.g.iter().map(|row| vector_from_json(row)).collect();
        SystemInstance::new(a, w, g, self.period, self.seed, tol)
    }
}

/// Planted source and initial state produced alongside an instance.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SourceFile {
    pub period: usize,
    pub values: Vec<Vec<JsonComplex>>,
    pub x0: Vec<JsonComplex>,
}

impl SourceFile {
    pub fn from_parts(w: &SourceSignal, x0: &CVector) -> Self {
        Self {
            period: w.period(),
            values: w.values().samples().iter().map(vector_to_json).collect(),
            x0: vector_to_json(x0),
        }
    }

    pub fn to_parts(&self, inst: &SystemInstance) -> Result<(SourceSignal, CVector)> {
        if self.period != self.values.len() {
            return Err(Error::InvalidParameter(
                "source period does not match value count".into(),
            ));
        }
        let seq = PeriodicSequence::new(self.values.iter().map(|r| vector_from_json(r)).collect())?;
        let w = SourceSignal::new(seq, inst.subspace(), inst.tolerances())?;
        Ok((w, vector_from_json(&self.x0)))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SampleFile {
    pub period: usize,
    pub noise_level: f64,
    pub seed: u64,
    pub rows: Vec<Vec<JsonComplex>>,
}

impl SampleFile {
    pub fn from_samples(y: &SampleMatrix) -> Self {
        Self {
            period: y.period(),
            noise_level: y.noise_level(),
            seed: y.seed(),
            rows: y.rows().iter().map(vector_to_json).collect(),
        }
    }

    pub fn to_samples(&self) -> Result<SampleMatrix> {
        SampleMatrix::new(
            self.period,
            self.rows.iter().map(|r| vector_from_json(r)).collect(),
            self.noise_level,
            self.seed,
        )
    }
}

/// Resolved configuration echoed into every report so each number is
/// reproducible from the file alone.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Default)]
pub struct ConfigEcho {
    pub command: String,
    pub instance_path: Option<String>,
    pub source_path: Option<String>,
    pub samples_path: Option<String>,
    pub steps: Option<usize>,
    pub noise: Option<f64>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub trials: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertifyReportFile {
    pub version: String,
    /// The only non-deterministic field.
    pub timestamp_unix: u64,
    pub config: ConfigEcho,
    pub certificate: FrameCertificate,
}

/// Serializable convergence diagnostics for one residue class.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResidueDiagnostics {
    pub frequency: usize,
    pub last_delta: f64,
    pub convergence_rate: Option<f64>,
    pub non_geometric: bool,
}

pub fn residue_diagnostics(limits: &ResidueLimits) -> Vec<ResidueDiagnostics> {
    limits
        .classes
        .iter()
        .enumerate()
        .map(|(s, c)| ResidueDiagnostics {
            frequency: s,
            last_delta: c.last_delta,
            convergence_rate: c.convergence_rate,
            non_geometric: c.non_geometric,
        })
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessSummary {
    pub frequency: usize,
    pub lambda_min: f64,
    pub predicted_sample_gap: f64,
    pub source_separation: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecoverReportFile {
    pub version: String,
    pub timestamp_unix: u64,
    pub config: ConfigEcho,
    pub certificate: FrameCertificate,
    pub w_hat: Option<Vec<Vec<JsonComplex>>>,
    pub x_p_hat: Option<Vec<Vec<JsonComplex>>>,
    pub truncation_bound: Option<f64>,
    pub spectral_residuals: Option<Vec<f64>>,
    pub projection_residual: Option<f64>,
    pub convergence: Option<Vec<ResidueDiagnostics>>,
    pub oracle_gap: Option<f64>,
    /// Present when recovery was refused and a witness could be produced.
    pub witness: Option<WitnessSummary>,
}

impl RecoverReportFile {
    pub fn success(
        version: &str,
        timestamp_unix: u64,
        config: ConfigEcho,
        report: &RecoveryReport,
    ) -> Self {
        Self {
            version: version.to_string(),
            timestamp_unix,
            config,
            certificate: report.certificate.clone(),
            w_hat: Some(
                report
                    .w_hat
                    .values()
                    .samples()
                    .iter()
                    .map(vector_to_json)
                    .collect(),
            ),
            x_p_hat: Some(report.x_p_hat.samples().iter().map(vector_to_json).collect()),
            truncation_bound: Some(report.truncation_bound),
            spectral_residuals: Some(report.spectral_residuals.clone()),
            projection_residual: Some(report.projection_residual),
            convergence: Some(residue_diagnostics(&report.limits)),
            oracle_gap: report.oracle_gap,
            witness: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleReportFile {
    pub version: String,
    pub timestamp_unix: u64,
    pub config: ConfigEcho,
    pub w: Vec<Vec<JsonComplex>>,
    pub x0: Vec<JsonComplex>,
    pub residual: f64,
    pub condition_ratio: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessReportFile {
    pub version: String,
    pub timestamp_unix: u64,
    pub config: ConfigEcho,
    pub summary: WitnessSummary,
    pub base_source: Vec<Vec<JsonComplex>>,
    pub base_x0: Vec<JsonComplex>,
    pub alt_source: Vec<Vec<JsonComplex>>,
    pub alt_x0: Vec<JsonComplex>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReportFile {
    pub version: String,
    pub timestamp_unix: u64,
    pub config: ConfigEcho,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

/// Write pretty JSON atomically: temp file in the same directory, then rename.
pub fn save_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let bytes = serde_json::to_vec_pretty(value)?;
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, &bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

pub fn load_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let bytes = std::fs::read(path)?;
    Ok(serde_json::from_slice(&bytes)?)
}
