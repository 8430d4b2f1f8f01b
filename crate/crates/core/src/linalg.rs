//! Dense complex linear algebra over the ambient space C^d: inner products,
//! spectral norms, orthonormal subspace bases, projections, solves and
//! Hermitian eigenvalue ranges.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CVector = DVector<Complex64>;
pub type CMatrix = DMatrix<Complex64>;

/// Relative tolerances used throughout the crate.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct Tolerances {
    /// Rank decisions and basis orthonormality.
    pub tol_ortho: f64,
    /// Linear-solve singularity threshold and residual checks.
    pub tol_residual: f64,
    /// Frame verdict: lower > tol_frame_rel * upper.
    pub tol_frame_rel: f64,
    /// Target for the geometric transient remainder in recovery.
    pub tol_recovery: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol_ortho: 1e-12,
            tol_residual: 1e-12,
            tol_frame_rel: 1e-10,
            tol_recovery: 1e-12,
        }
    }
}

/// Sesquilinear inner product, conjugate-linear in the second slot:
/// `inner(u, v) = sum_i u_i * conj(v_i)`.
pub fn inner(u: &CVector, v: &CVector) -> Result<Complex64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            got: v.len(),
        });
    }
    // dotc conjugates its receiver, so v.dotc(u) = sum conj(v_i) u_i.
    Ok(v.dotc(u))
}

/// Largest singular value of `M`.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}

/// A subspace of C^d stored by an orthonormal basis (d x m, m may be 0).
#[derive(Debug, Clone)]
pub struct Subspace {
    basis: CMatrix,
}

impl Subspace {
    /// Wrap an already-orthonormal basis; checked against `tol_ortho`.
    pub fn from_orthonormal_basis(basis: CMatrix, tol_ortho: f64) -> Result<Self> {
        let m = basis.ncols();
        let gram = basis.adjoint() * &basis;
        let dev = (&gram - CMatrix::identity(m, m)).norm();
        if dev > tol_ortho * (1.0 + m as f64) {
            return Err(Error::InvalidParameter(format!(
                "basis is not orthonormal (Gram deviation {dev:.3e})"
            )));
        }
        Ok(Self { basis })
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            basis: CMatrix::zeros(ambient_dim, 0),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self {
            basis: CMatrix::identity(ambient_dim, ambient_dim),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    /// Coordinates of `v` in the basis, i.e. `B^H v`.
    pub fn coords(&self, v: &CVector) -> Result<CVector> {
        if v.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                got: v.len(),
            });
        }
        Ok(self.basis.adjoint() * v)
    }

    /// Embed basis coordinates back into the ambient space.
    pub fn embed(&self, coords: &CVector) -> CVector {
        &self.basis * coords
    }
}

/// Orthonormal basis for the column space of `V`. Rank is decided by singular
/// values above `tol_rank` times the largest.
pub fn orthonormalize(v: &CMatrix, tol_rank: f64) -> Subspace {
    let d = v.nrows();
    if v.ncols() == 0 || v.iter().all(|z| z.norm() == 0.0) {
        return Subspace::zero(d);
    }
    let svd = v.clone().svd(true, false);
    let u = svd.u.expect("svd with u requested");
    let sv = &svd.singular_values;
    let smax = sv.max();
    let rank = sv.iter().filter(|&&s| s > tol_rank * smax).count();
    Subspace {
        basis: u.columns(0, rank).into_owned(),
    }
}

/// Orthogonal projection of `v` onto `s`: `B (B^H v)`.
pub fn project(s: &Subspace, v: &CVector) -> Result<CVector> {
    Ok(s.embed(&s.coords(v)?))
}

/// Projection as a d x d matrix, `B B^H`.
pub fn projector(s: &Subspace) -> CMatrix {
    s.basis() * s.basis().adjoint()
}

/// Solve `M x = b` for square `M` via SVD, failing when the smallest singular
/// value is below `tol_singular` times the largest.
pub fn solve(m: &CMatrix, b: &CVector, tol_singular: f64) -> Result<CVector> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            got: m.ncols(),
        });
    }
    if b.len() != m.nrows() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            got: b.len(),
        });
    }
    let svd = m.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smax == 0.0 || smin <= tol_singular * smax {
        return Err(Error::Singular {
            ratio: if smax == 0.0 { 0.0 } else { smin / smax },
        });
    }
    svd.solve(b, 0.0)
        .map_err(|e| Error::InvalidParameter(e.to_string()))
}

/// Inverse of a square nonsingular matrix, same singularity threshold as [`solve`].
pub fn invert(m: &CMatrix, tol_singular: f64) -> Result<CMatrix> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            got: m.ncols(),
        });
    }
    let svd = m.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smax == 0.0 || smin <= tol_singular * smax {
        return Err(Error::Singular {
            ratio: if smax == 0.0 { 0.0 } else { smin / smax },
        });
    }
    svd.pseudo_inverse(0.0)
        .map_err(|e| Error::InvalidParameter(e.to_string()))
}

/// Smallest and largest eigenvalue of a Hermitian matrix.
pub fn hermitian_eigenrange(m: &CMatrix, tol_hermitian: f64) -> Result<(f64, f64)> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            got: m.ncols(),
        });
    }
    if m.is_empty() {
        return Err(Error::InvalidParameter("empty matrix".into()));
    }
    let dev = (m - m.adjoint()).norm();
    let scale = 1.0 + m.norm();
    if dev > tol_hermitian * scale {
        return Err(Error::NotHermitian { deviation: dev });
    }
    // Symmetrize to kill rounding asymmetry before the eigen solve.
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let min = eig.eigenvalues.min();
    let max = eig.eigenvalues.max();
    Ok((min, max))
}
