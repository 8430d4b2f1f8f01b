//! Seeded random instance generation.

use num_complex::Complex64;

use crate::dft::PeriodicSequence;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, Tolerances};
use crate::rng;
use crate::system::{SourceSignal, SystemInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    /// Complex Gaussian rescaled to the requested spectral norm.
    Gaussian,
    /// A scaled random unitary; normal, so every mode decays at exactly the
    /// requested rate.
    ScaledUnitary,
}

#[derive(Debug, Clone)]
pub struct GenParams {
    pub dim: usize,
    pub period: usize,
    pub n_samplers: usize,
    pub subspace_dim: usize,
    pub norm_a: f64,
    pub seed: u64,
    pub operator: OperatorKind,
    pub tol: Tolerances,
}

impl GenParams {
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidParameter("dim must be at least 1".into()));
        }
        if self.subspace_dim > self.dim {
            return Err(Error::InvalidParameter(format!(
                "subspace_dim {} exceeds dim {}",
                self.subspace_dim, self.dim
            )));
        }
        if self.period == 0 {
            return Err(Error::InvalidParameter("period must be at least 1".into()));
        }
        if self.n_samplers == 0 {
            return Err(Error::InvalidParameter(
                "need at least one sampling vector".into(),
            ));
        }
        if !(self.norm_a > 0.0 && self.norm_a < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "norm_a must be in (0, 1), got {}",
                self.norm_a
            )));
        }
        Ok(())
    }
}

/// Generate an instance plus a planted source and initial state, fully
/// determined by the seed.
pub fn gen_instance(params: &GenParams) -> Result<(SystemInstance, SourceSignal, CVector)> {
    params.validate()?;
    let d = params.dim;

    let mut rng_a = rng::stream(params.seed, "gen-A");
    let raw = CMatrix::from_fn(d, d, |_, _| rng::complex_normal(&mut rng_a));
    let a = match params.operator {
        OperatorKind::Gaussian => {
            let scale = params.norm_a / linalg::spectral_norm(&raw);
            &raw * Complex64::new(scale, 0.0)
        }
        OperatorKind::ScaledUnitary => {
            let q = linalg::orthonormalize(&raw, params.tol.tol_ortho);
            q.basis() * Complex64::new(params.norm_a, 0.0)
        }
    };

    let mut rng_w = rng::stream(params.seed, "gen-W");
    let w_raw = CMatrix::from_fn(d, params.subspace_dim, |_, _| {
        rng::complex_normal(&mut rng_w)
    });
    let w_sub = linalg::orthonormalize(&w_raw, params.tol.tol_ortho);
    if w_sub.dim() != params.subspace_dim {
        return Err(Error::InvalidParameter(
            "random subspace draw was rank deficient".into(),
        ));
    }

    let mut rng_g = rng::stream(params.seed, "gen-G");
    let g: Vec<CVector> = (0..params.n_samplers)
        .map(|_| CVector::from_fn(d, |_, _| rng::complex_normal(&mut rng_g)))
        .collect();

    let inst = SystemInstance::new(a, w_sub, g, params.period, params.seed, params.tol)?;

    let mut rng_src = rng::stream(params.seed, "gen-source");
    let values: Vec<CVector> = (0..params.period)
        .map(|_| {
            let raw = CVector::from_fn(d, |_, _| rng::complex_normal(&mut rng_src));
            linalg::project(inst.subspace(), &raw)
        })
        .collect::<Result<Vec<_>>>()?;
    let w = SourceSignal::new(
        PeriodicSequence::new(values)?,
        inst.subspace(),
        inst.tolerances(),
    )?;

    let mut rng_x0 = rng::stream(params.seed, "gen-x0");
    let x0 = CVector::from_fn(d, |_, _| rng::complex_normal(&mut rng_x0));

    Ok((inst, w, x0))
}
