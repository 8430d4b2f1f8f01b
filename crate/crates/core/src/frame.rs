//! Frame-theoretic certification of the sampling system: per-frequency
//! projected systems, frame bounds, canonical dual frames, Bessel bounds and
//! the equivalence cross-check between the two projected formulations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, Subspace};
use crate::system::{build_resolvents, ResolventFamily, SystemInstance};

/// Which of the two equivalent projected systems is being analyzed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    /// `{P_W(T_s^* g_j)}_j` measured in `W`.
    Condition2,
    /// `{P_{W_s}(g_j)}_j` measured in `W_s = T_s(W)`.
    Condition3,
}

/// The projected sampling vectors at one frequency, together with the
/// subspace they are a candidate frame of.
#[derive(Debug, Clone)]
pub struct ProjectedSystem {
    pub frequency: usize,
    pub vectors: Vec<CVector>,
    pub subspace: Subspace,
    pub variant: Variant,
}

pub fn projected_system(
    inst: &SystemInstance,
    resolvents: &ResolventFamily,
    s: usize,
    variant: Variant,
) -> Result<ProjectedSystem> {
    if s >= inst.period() {
        return Err(Error::InvalidParameter(format!(
            "frequency {s} out of range 0..{}",
            inst.period()
        )));
    }
    let tol = inst.tolerances();
    match variant {
        Variant::Condition2 => {
            let t_adj = resolvents.resolvent(s).adjoint();
            let vectors = inst
                .sampling_vectors()
                .iter()
                .map(|g| linalg::project(inst.subspace(), &(&t_adj * g)))
                .collect::<Result<Vec<_>>>()?;
            Ok(ProjectedSystem {
                frequency: s,
                vectors,
                subspace: inst.subspace().clone(),
                variant,
            })
        }
        Variant::Condition3 => {
            let mapped = resolvents.resolvent(s) * inst.subspace().basis();
            let w_s = linalg::orthonormalize(&mapped, tol.tol_ortho);
            let vectors = inst
                .sampling_vectors()
                .iter()
                .map(|g| linalg::project(&w_s, g))
                .collect::<Result<Vec<_>>>()?;
            Ok(ProjectedSystem {
                frequency: s,
                vectors,
                subspace: w_s,
                variant,
            })
        }
    }
}

/// Frame operator of the projected system in basis coordinates:
/// `S = sum_j c_j c_j^H` with `c_j = B^H v_j`.
fn frame_operator_coords(ps: &ProjectedSystem) -> Result<CMatrix> {
    let m = ps.subspace.dim();
    let mut op = CMatrix::zeros(m, m);
    for v in &ps.vectors {
        let c = ps.subspace.coords(v)?;
        op += &c * c.adjoint();
    }
    Ok(op)
}

/// Optimal frame bounds as the eigenvalue range of the frame operator.
///
/// A zero-dimensional subspace passes vacuously; both bounds are reported as
/// positive infinity.
pub fn frame_bounds(ps: &ProjectedSystem) -> Result<(f64, f64)> {
    if ps.subspace.dim() == 0 {
        return Ok((f64::INFINITY, f64::INFINITY));
    }
    let op = frame_operator_coords(ps)?;
    linalg::hermitian_eigenrange(&op, 1e-10)
}

/// Canonical dual vectors `f_j = S^{-1} v_j`, expressed in the ambient space.
///
/// `threshold` is an absolute floor on the lower frame bound; callers derive
/// it from `tol_frame_rel` times a Bessel-bound scale so that a one-vector
/// system with a vanishing bound is still rejected.
pub fn canonical_dual(ps: &ProjectedSystem, threshold: f64) -> Result<Vec<CVector>> {
    if ps.subspace.dim() == 0 {
        let d = ps.subspace.ambient_dim();
        return Ok(vec![CVector::zeros(d); ps.vectors.len()]);
    }
    let (lower, _) = frame_bounds(ps)?;
    if !(lower > threshold) {
        return Err(Error::NotAFrame {
            frequency: ps.frequency,
            lower,
        });
    }
    let op = frame_operator_coords(ps)?;
    let inv = linalg::invert(&op, 1e-14)?;
    ps.vectors
        .iter()
        .map(|v| Ok(ps.subspace.embed(&(&inv * ps.subspace.coords(v)?))))
        .collect()
}

/// Optimal Bessel bound of a vector family: largest eigenvalue of
/// `sum_j g_j g_j^H`.
pub fn bessel_bound(g: &[CVector]) -> Result<f64> {
    if g.is_empty() {
        return Err(Error::InvalidParameter("empty vector family".into()));
    }
    let d = g[0].len();
    let mut op = CMatrix::zeros(d, d);
    for v in g {
        if v.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: v.len(),
            });
        }
        op += v * v.adjoint();
    }
    let (_, max) = linalg::hermitian_eigenrange(&op, 1e-10)?;
    Ok(max)
}

/// Canonical dual frames of the condition-3 systems, one family per
/// frequency. These are the synthesis vectors used by the recovery operator.
#[derive(Debug, Clone)]
pub struct DualFrameFamily {
    duals: Vec<Vec<CVector>>,
}

impl DualFrameFamily {
    pub fn period(&self) -> usize {
        self.duals.len()
    }

    pub fn at(&self, s: usize) -> &[CVector] {
        &self.duals[s]
    }

    /// `max_s` of the optimal Bessel bound of the dual family at `s`; the
    /// constant in the boundedness estimate for the limit operator Q.
    pub fn max_bessel_bound(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for fam in &self.duals {
            if fam.iter().all(|f| f.norm() == 0.0) {
                continue; // vacuous frequency
            }
            worst = worst.max(bessel_bound(fam)?);
        }
        Ok(worst)
    }
}

pub fn dual_frame_family(
    inst: &SystemInstance,
    resolvents: &ResolventFamily,
) -> Result<DualFrameFamily> {
    let scale = bessel_bound(inst.sampling_vectors())?;
    let duals = (0..inst.period())
        .map(|s| {
            let ps = projected_system(inst, resolvents, s, Variant::Condition3)?;
            canonical_dual(&ps, inst.tolerances().tol_frame_rel * scale)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DualFrameFamily { duals })
}

/// Per-frequency certification record.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrequencyCertificate {
    pub frequency: usize,
    /// Bounds of `{P_W(T_s^* g_j)}` in `W`; `None` when the subspace is trivial.
    pub bounds_condition2: Option<(f64, f64)>,
    /// Bounds of `{P_{W_s} g_j}` in `W_s`; `None` when the subspace is trivial.
    pub bounds_condition3: Option<(f64, f64)>,
    pub is_frame: bool,
    pub vacuous: bool,
    pub condition_number: Option<f64>,
    pub resolvent_norm: f64,
    pub resolvent_inverse_norm: f64,
}

/// The full Theorem-style verdict over all frequencies.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrameCertificate {
    pub period: usize,
    pub frequencies: Vec<FrequencyCertificate>,
    pub verdict: bool,
    pub bessel_bound_g: f64,
    /// `max_s ||T_s^{-1}||`, the norm of the diagonal spectrum-correction block.
    pub u_norm: f64,
    /// `||U|| * max_s sqrt(upper/lower)` over certified frequencies; the
    /// reported noise amplification of the recovery map.
    pub amplification: Option<f64>,
}

impl FrameCertificate {
    pub fn failed_frequencies(&self) -> Vec<usize> {
        self.frequencies
            .iter()
            .filter(|f| !f.is_frame)
            .map(|f| f.frequency)
            .collect()
    }
}

/// Certify the instance: compute both projected-system formulations at every
/// frequency, check that their verdicts and quantitative bounds are mutually
/// consistent, and fold the per-frequency verdicts into one.
pub fn certify(inst: &SystemInstance) -> Result<FrameCertificate> {
    let tol = inst.tolerances();
    let resolvents = build_resolvents(inst.a(), inst.period(), tol)?;
    let bessel_g = bessel_bound(inst.sampling_vectors())?;
    let mut frequencies = Vec::with_capacity(inst.period());
    let mut u_norm: f64 = 0.0;
    let mut amplification_factor: f64 = 0.0;
    let mut any_nonvacuous = false;

    for s in 0..inst.period() {
        let ps2 = projected_system(inst, &resolvents, s, Variant::Condition2)?;
        let ps3 = projected_system(inst, &resolvents, s, Variant::Condition3)?;
        let vacuous = ps2.subspace.dim() == 0;
        let t_norm = linalg::spectral_norm(resolvents.resolvent(s));
        // ||T_s^{-1}|| is the norm of the shifted matrix itself.
        let t_inv_norm = linalg::spectral_norm(resolvents.inverse(s));
        u_norm = u_norm.max(t_norm);

        let (bounds2, bounds3, is_frame, condition_number) = if vacuous {
            (None, None, true, None)
        } else {
            let (lo2, up2) = frame_bounds(&ps2)?;
            let (lo3, up3) = frame_bounds(&ps3)?;
            // Verdict thresholds are scaled by the Bessel bound of G (and
            // ||T_s||^2 for the adjoint-side system, which that factor
            // inflates), not by the projected upper bound: a single projected
            // vector always has lower == upper, so a relative-to-upper test
            // could never fail.
            let frame2 = lo2 > tol.tol_frame_rel * bessel_g * t_norm * t_norm;
            let frame3 = lo3 > tol.tol_frame_rel * bessel_g;
            let scale = 1.0 + up2.max(up3);
            let slack = 1e-9 * scale;
            let quantitative_ok = lo3 + slack >= lo2 / (t_norm * t_norm)
                && lo2 + slack >= lo3 / (t_inv_norm * t_inv_norm);
            if frame2 != frame3 || !quantitative_ok {
                return Err(Error::EquivalenceViolation {
                    frequency: s,
                    lower2: lo2,
                    lower3: lo3,
                    cond2: if lo2 > 0.0 { up2 / lo2 } else { f64::INFINITY },
                    cond3: if lo3 > 0.0 { up3 / lo3 } else { f64::INFINITY },
                });
            }
            // Finite only when the lower bound is positive; keeps reports
            // free of non-finite reals.
            let cond = if lo3 > 0.0 { Some(up3 / lo3) } else { None };
            if frame3 {
                any_nonvacuous = true;
                amplification_factor = amplification_factor.max((up3 / lo3).sqrt());
            }
            (Some((lo2, up2)), Some((lo3, up3)), frame3, cond)
        };

        frequencies.push(FrequencyCertificate {
            frequency: s,
            bounds_condition2: bounds2,
            bounds_condition3: bounds3,
            is_frame,
            vacuous,
            condition_number,
            resolvent_norm: t_norm,
            resolvent_inverse_norm: t_inv_norm,
        });
    }

    let verdict = frequencies.iter().all(|f| f.is_frame);
    let amplification = if verdict && any_nonvacuous {
        Some(u_norm * amplification_factor)
    } else if verdict {
        Some(0.0) // zero subspace: nothing to amplify
    } else {
        None
    };
    Ok(FrameCertificate {
        period: inst.period(),
        frequencies,
        verdict,
        bessel_bound_g: bessel_bound(inst.sampling_vectors())?,
        u_norm,
        amplification,
    })
}
