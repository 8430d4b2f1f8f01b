//! Space-time sample matrices: rows indexed by time, columns by the sampling
//! vector index j, with the sup-of-row-l2-norms norm.

use crate::error::{Error, Result};
use crate::linalg::CVector;

#[derive(Debug, Clone)]
pub struct SampleMatrix {
    period: usize,
    rows: Vec<CVector>,
    noise_level: f64,
    seed: u64,
}

impl SampleMatrix {
    pub fn new(period: usize, rows: Vec<CVector>, noise_level: f64, seed: u64) -> Result<Self> {
        if period == 0 {
            return Err(Error::InvalidParameter("period must be at least 1".into()));
        }
        if rows.len() < period {
            return Err(Error::TooFewRows {
                rows: rows.len(),
                needed: period,
            });
        }
        let j = rows[0].len();
        for r in &rows {
            if r.len() != j {
                return Err(Error::DimensionMismatch {
                    expected: j,
                    got: r.len(),
                });
            }
            if r.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::InvalidParameter("non-finite sample entry".into()));
            }
        }
        Ok(Self {
            period,
            rows,
            noise_level,
            seed,
        })
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.rows[0].len()
    }

    pub fn row(&self, n: usize) -> &CVector {
        &self.rows[n]
    }

    pub fn rows(&self) -> &[CVector] {
        &self.rows
    }

    pub fn noise_level(&self) -> f64 {
        self.noise_level
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of complete period blocks present.
    pub fn full_blocks(&self) -> usize {
        self.rows.len() / self.period
    }

    /// Entrywise difference of two sample matrices of the same shape.
    pub fn difference(&self, other: &SampleMatrix) -> Result<SampleMatrix> {
        if self.n_rows() != other.n_rows() || self.n_cols() != other.n_cols() {
            return Err(Error::DimensionMismatch {
                expected: self.n_rows(),
                got: other.n_rows(),
            });
        }
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a - b)
            .collect();
        SampleMatrix::new(self.period, rows, 0.0, self.seed)
    }
}

/// The B(l2, l-inf) norm: supremum over rows of the row l2 norm.
pub fn op_norm_l2_linf(y: &SampleMatrix) -> f64 {
    y.rows().iter().map(|r| r.norm()).fold(0.0, f64::max)
}
