//! The driven system x(n+1) = A x(n) + w(n): resolvent family, the unique
//! periodic solution, the general solution with its tail constant, trajectory
//! simulation and space-time sample generation.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::dft::{dft, idft, PeriodicSequence, SpectrumVector};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, Subspace, Tolerances};
use crate::rng;
use crate::samples::SampleMatrix;

/// Above this norm the transient decays slowly enough that required sample
/// lengths become impractical; callers should surface a warning.
pub const NEAR_UNIT_NORM: f64 = 0.99;

/// A fully specified problem instance: evolution operator, source subspace,
/// sampling system and period.
#[derive(Debug, Clone)]
pub struct SystemInstance {
    dim: usize,
    a: CMatrix,
    a_norm: f64,
    w: Subspace,
    g: Vec<CVector>,
    period: usize,
    seed: u64,
    tol: Tolerances,
}

impl SystemInstance {
    pub fn new(
        a: CMatrix,
        w: Subspace,
        g: Vec<CVector>,
        period: usize,
        seed: u64,
        tol: Tolerances,
    ) -> Result<Self> {
        let dim = a.nrows();
        if a.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: a.ncols(),
            });
        }
        let a_norm = linalg::spectral_norm(&a);
        if !(a_norm < 1.0) {
            return Err(Error::NotContractive { norm: a_norm });
        }
        if w.ambient_dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: w.ambient_dim(),
            });
        }
        if g.is_empty() {
            return Err(Error::InvalidParameter(
                "sampling system must contain at least one vector".into(),
            ));
        }
        for v in &g {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: v.len(),
                });
            }
        }
        if period == 0 {
            return Err(Error::InvalidParameter("period must be at least 1".into()));
        }
        Ok(Self {
            dim,
            a,
            a_norm,
            w,
            g,
            period,
            seed,
            tol,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn a(&self) -> &CMatrix {
        &self.a
    }

    pub fn a_norm(&self) -> f64 {
        self.a_norm
    }

    pub fn subspace(&self) -> &Subspace {
        &self.w
    }

    pub fn sampling_vectors(&self) -> &[CVector] {
        &self.g
    }

    pub fn n_samplers(&self) -> usize {
        self.g.len()
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn near_unit_norm(&self) -> bool {
        self.a_norm > NEAR_UNIT_NORM
    }
}

/// The matrices T_s = (I e^{2 pi i s / N} - A)^{-1}, s = 0..N-1.
#[derive(Debug, Clone)]
pub struct ResolventFamily {
    resolvents: Vec<CMatrix>,
    inverses: Vec<CMatrix>,
}

impl ResolventFamily {
    pub fn period(&self) -> usize {
        self.resolvents.len()
    }

    pub fn resolvent(&self, s: usize) -> &CMatrix {
        &self.resolvents[s]
    }

    /// The matrix `I e^{2 pi i s / N} - A` itself.
    pub fn inverse(&self, s: usize) -> &CMatrix {
        &self.inverses[s]
    }
}

pub fn build_resolvents(a: &CMatrix, period: usize, tol: &Tolerances) -> Result<ResolventFamily> {
    let norm = linalg::spectral_norm(a);
    if !(norm < 1.0) {
        return Err(Error::NotContractive { norm });
    }
    if period == 0 {
        return Err(Error::InvalidParameter("period must be at least 1".into()));
    }
    let d = a.nrows();
    let mut resolvents = Vec::with_capacity(period);
    let mut inverses = Vec::with_capacity(period);
    for s in 0..period {
        let phase = Complex64::from_polar(1.0, TAU * s as f64 / period as f64);
        let shifted = CMatrix::identity(d, d) * phase - a;
        resolvents.push(linalg::invert(&shifted, tol.tol_residual)?);
        inverses.push(shifted);
    }
    Ok(ResolventFamily {
        resolvents,
        inverses,
    })
}

/// An N-periodic source confined to the subspace W.
#[derive(Debug, Clone)]
pub struct SourceSignal {
    values: PeriodicSequence,
}

impl SourceSignal {
    /// Values must already lie in `w` (checked against the projection).
    pub fn new(values: PeriodicSequence, w: &Subspace, tol: &Tolerances) -> Result<Self> {
        for v in values.samples() {
            let p = linalg::project(w, v)?;
            let drift = (v - &p).norm();
            if drift > 1e-8 * (1.0 + v.norm()) + tol.tol_residual {
                return Err(Error::InvalidParameter(format!(
                    "source value leaves the subspace (distance {drift:.3e})"
                )));
            }
        }
        Ok(Self { values })
    }

    pub fn period(&self) -> usize {
        self.values.period()
    }

    pub fn values(&self) -> &PeriodicSequence {
        &self.values
    }

    pub fn at(&self, n: i64) -> &CVector {
        self.values.at(n)
    }

    pub fn max_norm(&self) -> f64 {
        self.values
            .samples()
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }
}

/// The unique N-periodic solution: x_p = idft(k -> T_k w_hat(k)).
pub fn periodic_solution(inst: &SystemInstance, w: &SourceSignal) -> Result<PeriodicSequence> {
    if w.period() != inst.period() {
        return Err(Error::InvalidParameter(format!(
            "source period {} does not match instance period {}",
            w.period(),
            inst.period()
        )));
    }
    let resolvents = build_resolvents(inst.a(), inst.period(), inst.tolerances())?;
    let w_hat = dft(w.values());
    let xp_hat: Vec<CVector> = (0..inst.period())
        .map(|k| resolvents.resolvent(k) * w_hat.coeff(k))
        .collect();
    Ok(idft(&SpectrumVector::new(xp_hat)?))
}

/// The transient coefficient c in x(n) = A^n c + x_p(n).
#[derive(Debug, Clone)]
pub struct TailConstant {
    pub c: CVector,
    pub truncation_k: usize,
    pub bound: f64,
}

/// c = x0 - sum_{j=0}^{K} A^j w(-1-j), truncated once the geometric remainder
/// `||A||^{K+1} / (1 - ||A||) * max_r ||w(r)||` drops below `tol`.
pub fn tail_constant(
    inst: &SystemInstance,
    w: &SourceSignal,
    x0: &CVector,
    tol: f64,
) -> Result<TailConstant> {
    if tol <= 0.0 {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    if x0.len() != inst.dim() {
        return Err(Error::DimensionMismatch {
            expected: inst.dim(),
            got: x0.len(),
        });
    }
    let a_norm = inst.a_norm();
    let w_max = w.max_norm();
    let mut c = x0.clone();
    let mut power = CMatrix::identity(inst.dim(), inst.dim());
    let mut k = 0usize;
    loop {
        c -= &power * w.at(-1 - k as i64);
        let remainder = if w_max == 0.0 {
            0.0
        } else {
            a_norm.powi(k as i32 + 1) / (1.0 - a_norm) * w_max
        };
        if remainder <= tol {
            return Ok(TailConstant {
                c,
                truncation_k: k,
                bound: remainder,
            });
        }
        power = &power * inst.a();
        k += 1;
    }
}

/// A simulated state trajectory x(0..=n_max).
#[derive(Debug, Clone)]
pub struct Trajectory {
    states: Vec<CVector>,
}

impl Trajectory {
    pub fn state(&self, n: usize) -> &CVector {
        &self.states[n]
    }

    pub fn states(&self) -> &[CVector] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// Iterate the recurrence x(n+1) = A x(n) + w(n) from x(0) = x0.
pub fn simulate(
    inst: &SystemInstance,
    w: &SourceSignal,
    x0: &CVector,
    n_max: usize,
) -> Result<Trajectory> {
    if x0.len() != inst.dim() {
        return Err(Error::DimensionMismatch {
            expected: inst.dim(),
            got: x0.len(),
        });
    }
    let mut states = Vec::with_capacity(n_max + 1);
    states.push(x0.clone());
    for n in 0..n_max {
        let next = inst.a() * &states[n] + w.at(n as i64);
        states.push(next);
    }
    Ok(Trajectory { states })
}

/// Closed form x(n) = A^n c + x_p(n mod N).
pub fn closed_form_state(
    inst: &SystemInstance,
    w: &SourceSignal,
    x0: &CVector,
    n: usize,
) -> Result<CVector> {
    let tail = tail_constant(inst, w, x0, inst.tolerances().tol_residual)?;
    let xp = periodic_solution(inst, w)?;
    let mut power_c = tail.c.clone();
    for _ in 0..n {
        power_c = inst.a() * power_c;
    }
    Ok(power_c + xp.at(n as i64))
}

/// Space-time samples y_{n,j} = <x(n), g_j> for n = 0..n_max-1, with optional
/// additive complex Gaussian noise of standard deviation `noise_level`.
pub fn generate_samples(
    inst: &SystemInstance,
    w: &SourceSignal,
    x0: &CVector,
    n_max: usize,
    noise_level: f64,
) -> Result<SampleMatrix> {
    if n_max < inst.period() {
        return Err(Error::TooFewRows {
            rows: n_max,
            needed: inst.period(),
        });
    }
    if noise_level < 0.0 {
        return Err(Error::InvalidParameter(
            "noise level must be nonnegative".into(),
        ));
    }
    let traj = simulate(inst, w, x0, n_max.saturating_sub(1))?;
    let mut noise_rng = rng::stream(inst.seed(), "sample-noise");
    let rows: Vec<CVector> = (0..n_max)
        .map(|n| {
            let x = traj.state(n);
            let mut row = CVector::from_iterator(
                inst.n_samplers(),
                inst.sampling_vectors()
                    .iter()
                    .map(|g| linalg::inner(x, g).expect("dims checked")),
            );
            if noise_level > 0.0 {
                for z in row.iter_mut() {
                    *z += rng::complex_normal(&mut noise_rng) * noise_level;
                }
            }
            row
        })
        .collect();
    SampleMatrix::new(inst.period(), rows, noise_level, inst.seed())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64 as C;

    fn scalar(x: f64) -> CMatrix {
        CMatrix::from_element(1, 1, C::new(x, 0.0))
    }

    fn sv(x: f64) -> CVector {
        CVector::from_element(1, C::new(x, 0.0))
    }

    fn scalar_instance(a: f64, period: usize) -> SystemInstance {
        SystemInstance::new(
            scalar(a),
            Subspace::full(1),
            vec![sv(1.0)],
            period,
            0,
            Tolerances::default(),
        )
        .unwrap()
    }

    fn scalar_source(values: &[f64], inst: &SystemInstance) -> SourceSignal {
        SourceSignal::new(
            PeriodicSequence::new(values.iter().map(|&v| sv(v)).collect()).unwrap(),
            inst.subspace(),
            inst.tolerances(),
        )
        .unwrap()
    }

    #[test]
    fn rejects_non_contractive_operator() {
        let err = SystemInstance::new(
            scalar(1.0),
            Subspace::full(1),
            vec![sv(1.0)],
            1,
            0,
            Tolerances::default(),
        );
        assert!(matches!(err, Err(Error::NotContractive { .. })));
    }

    #[test]
    fn resolvents_of_zero_operator() {
        let a = CMatrix::zeros(3, 3);
        let fam = build_resolvents(&a, 4, &Tolerances::default()).unwrap();
        for s in 0..4 {
            let phase = C::from_polar(1.0, -TAU * s as f64 / 4.0);
            let expect = CMatrix::identity(3, 3) * phase;
            assert!((fam.resolvent(s) - expect).norm() < 1e-13);
        }
    }

    #[test]
    fn scalar_resolvents() {
        let fam = build_resolvents(&scalar(0.5), 1, &Tolerances::default()).unwrap();
        assert_relative_eq!(fam.resolvent(0)[(0, 0)].re, 2.0, max_relative = 1e-12);

        let fam = build_resolvents(&scalar(0.5), 2, &Tolerances::default()).unwrap();
        assert_relative_eq!(fam.resolvent(1)[(0, 0)].re, -2.0 / 3.0, max_relative = 1e-12);
        assert!(fam.resolvent(1)[(0, 0)].im.abs() < 1e-14);
    }

    #[test]
    fn resolvent_defining_identity() {
        let mut rng = crate::rng::stream(17, "system-test");
        for _ in 0..20 {
            let d = 4;
            let raw = CMatrix::from_fn(d, d, |_, _| crate::rng::complex_normal(&mut rng));
            let a = &raw * C::new(0.6 / linalg::spectral_norm(&raw), 0.0);
            let n_per = 3;
            let fam = build_resolvents(&a, n_per, &Tolerances::default()).unwrap();
            for s in 0..n_per {
                let dev = (fam.inverse(s) * fam.resolvent(s) - CMatrix::identity(d, d)).norm();
                assert!(dev < 1e-10);
            }
        }
    }

    #[test]
    fn periodic_solution_scalar_fixed_point() {
        let inst = scalar_instance(0.5, 1);
        let w = scalar_source(&[1.0], &inst);
        let xp = periodic_solution(&inst, &w).unwrap();
        assert_relative_eq!(xp.at(0)[0].re, 2.0, max_relative = 1e-12);
    }

    #[test]
    fn periodic_solution_scalar_alternating() {
        // Oracle: solve the 2x2 periodic-orbit system x1 = a x0 + w0, x0 = a x1 + w1.
        let a = 0.5;
        let (w0, w1) = (1.0, -1.0);
        let x0 = (a * w0 + w1) / (1.0 - a * a);
        let x1 = (a * w1 + w0) / (1.0 - a * a);
        assert_relative_eq!(x0, -2.0 / 3.0, max_relative = 1e-14);
        assert_relative_eq!(x1, 2.0 / 3.0, max_relative = 1e-14);

        let inst = scalar_instance(a, 2);
        let w = scalar_source(&[w0, w1], &inst);
        let xp = periodic_solution(&inst, &w).unwrap();
        assert_relative_eq!(xp.at(0)[0].re, x0, max_relative = 1e-12);
        assert_relative_eq!(xp.at(1)[0].re, x1, max_relative = 1e-12);
    }

    #[test]
    fn periodic_solution_zero_operator_is_delay() {
        let inst = SystemInstance::new(
            CMatrix::zeros(2, 2),
            Subspace::full(2),
            vec![CVector::from_vec(vec![C::new(1.0, 0.0), C::new(0.0, 0.0)])],
            3,
            0,
            Tolerances::default(),
        )
        .unwrap();
        let mut rng = crate::rng::stream(5, "system-test");
        let vals: Vec<CVector> = (0..3)
            .map(|_| CVector::from_fn(2, |_, _| crate::rng::complex_normal(&mut rng)))
            .collect();
        let w = SourceSignal::new(
            PeriodicSequence::new(vals.clone()).unwrap(),
            inst.subspace(),
            inst.tolerances(),
        )
        .unwrap();
        let xp = periodic_solution(&inst, &w).unwrap();
        for n in 0..3i64 {
            assert!((xp.at(n) - w.at(n - 1)).norm() < 1e-12);
        }
    }

    #[test]
    fn periodic_solution_satisfies_recurrence() {
        let mut rng = crate::rng::stream(23, "system-test");
        for trial in 0..20 {
            let d = 3;
            let n_per = 1 + trial % 4;
            let raw = CMatrix::from_fn(d, d, |_, _| crate::rng::complex_normal(&mut rng));
            let a = &raw * C::new(0.7 / linalg::spectral_norm(&raw), 0.0);
            let inst = SystemInstance::new(
                a,
                Subspace::full(d),
                vec![CVector::from_fn(d, |_, _| crate::rng::complex_normal(&mut rng))],
                n_per,
                0,
                Tolerances::default(),
            )
            .unwrap();
            let w = SourceSignal::new(
                PeriodicSequence::new(
                    (0..n_per)
                        .map(|_| CVector::from_fn(d, |_, _| crate::rng::complex_normal(&mut rng)))
                        .collect(),
                )
                .unwrap(),
                inst.subspace(),
                inst.tolerances(),
            )
            .unwrap();
            let xp = periodic_solution(&inst, &w).unwrap();
            let scale = 1.0 + xp.norm();
            for n in 0..n_per as i64 {
                let residual = (xp.at(n + 1) - (inst.a() * xp.at(n) + w.at(n))).norm();
                assert!(residual / scale < 1e-10);
            }
        }
    }

    #[test]
    fn tail_constant_zero_operator() {
        let inst = scalar_instance(0.0, 2);
        let w = scalar_source(&[3.0, 7.0], &inst);
        let t = tail_constant(&inst, &w, &sv(5.0), 1e-12).unwrap();
        // Only the j=0 term survives: c = x0 - w(N-1).
        assert_relative_eq!(t.c[0].re, 5.0 - 7.0, max_relative = 1e-14);
    }

    #[test]
    fn tail_constant_zero_source() {
        let inst = scalar_instance(0.5, 1);
        let w = scalar_source(&[0.0], &inst);
        let t = tail_constant(&inst, &w, &sv(4.0), 1e-12).unwrap();
        assert_relative_eq!(t.c[0].re, 4.0, max_relative = 1e-14);
    }

    #[test]
    fn tail_constant_geometric_series() {
        let inst = scalar_instance(0.5, 1);
        let w = scalar_source(&[1.0], &inst);
        let t = tail_constant(&inst, &w, &sv(5.0), 1e-13).unwrap();
        assert_relative_eq!(t.c[0].re, 3.0, max_relative = 1e-11);
        // Anchoring identity: c + x_p(0) = x0.
        let xp = periodic_solution(&inst, &w).unwrap();
        assert_relative_eq!(t.c[0].re + xp.at(0)[0].re, 5.0, max_relative = 1e-11);
    }

    #[test]
    fn simulate_fixed_point() {
        let inst = scalar_instance(0.5, 1);
        let w = scalar_source(&[1.0], &inst);
        let traj = simulate(&inst, &w, &sv(2.0), 10).unwrap();
        for n in 0..=10 {
            assert_relative_eq!(traj.state(n)[0].re, 2.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn simulate_zero_operator_is_delay() {
        let inst = scalar_instance(0.0, 2);
        let w = scalar_source(&[1.0, -1.0], &inst);
        let traj = simulate(&inst, &w, &sv(9.0), 6).unwrap();
        for n in 1..=6 {
            let expect = w.at(n as i64 - 1)[0].re;
            assert_relative_eq!(traj.state(n)[0].re, expect, max_relative = 1e-14);
        }
    }

    #[test]
    fn closed_form_matches_simulation() {
        let mut rng = crate::rng::stream(31, "system-test");
        for trial in 0..20 {
            let d = 3;
            let n_per = 1 + trial % 3;
            let raw = CMatrix::from_fn(d, d, |_, _| crate::rng::complex_normal(&mut rng));
            let a = &raw * C::new(0.5 / linalg::spectral_norm(&raw), 0.0);
            let inst = SystemInstance::new(
                a,
                Subspace::full(d),
                vec![CVector::from_fn(d, |_, _| crate::rng::complex_normal(&mut rng))],
                n_per,
                0,
                Tolerances::default(),
            )
            .unwrap();
            let w = SourceSignal::new(
                PeriodicSequence::new(
                    (0..n_per)
                        .map(|_| CVector::from_fn(d, |_, _| crate::rng::complex_normal(&mut rng)))
                        .collect(),
                )
                .unwrap(),
                inst.subspace(),
                inst.tolerances(),
            )
            .unwrap();
            let x0 = CVector::from_fn(d, |_, _| crate::rng::complex_normal(&mut rng));
            let traj = simulate(&inst, &w, &x0, 60).unwrap();
            for &n in &[0usize, 1, 7, 23, 60] {
                let cf = closed_form_state(&inst, &w, &x0, n).unwrap();
                let dev = (traj.state(n) - cf).norm() / (1.0 + traj.state(n).norm());
                assert!(dev < 1e-9, "trial {trial} n {n}: deviation {dev:.3e}");
            }
        }
    }

    #[test]
    fn closed_form_anchors_at_x0() {
        let inst = scalar_instance(0.5, 2);
        let w = scalar_source(&[1.0, -1.0], &inst);
        let x = closed_form_state(&inst, &w, &sv(3.25), 0).unwrap();
        assert_relative_eq!(x[0].re, 3.25, max_relative = 1e-10);
    }

    #[test]
    fn samples_with_standard_basis_read_coordinates() {
        let d = 2;
        let g: Vec<CVector> = (0..d)
            .map(|i| CVector::from_fn(d, |k, _| C::new(if k == i { 1.0 } else { 0.0 }, 0.0)))
            .collect();
        let mut a = CMatrix::zeros(2, 2);
        a[(0, 1)] = C::new(0.5, 0.0);
        a[(1, 0)] = C::new(-0.5, 0.0);
        let inst =
            SystemInstance::new(a, Subspace::full(d), g, 2, 0, Tolerances::default()).unwrap();
        let mut rng = crate::rng::stream(8, "system-test");
        let w = SourceSignal::new(
            PeriodicSequence::new(
                (0..2)
                    .map(|_| CVector::from_fn(d, |_, _| crate::rng::complex_normal(&mut rng)))
                    .collect(),
            )
            .unwrap(),
            inst.subspace(),
            inst.tolerances(),
        )
        .unwrap();
        let x0 = CVector::from_fn(d, |_, _| crate::rng::complex_normal(&mut rng));
        let traj = simulate(&inst, &w, &x0, 5).unwrap();
        let y = generate_samples(&inst, &w, &x0, 6, 0.0).unwrap();
        for n in 0..6 {
            for j in 0..d {
                assert!((y.row(n)[j] - traj.state(n)[j]).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn zero_everything_gives_zero_samples() {
        let inst = scalar_instance(0.5, 1);
        let w = scalar_source(&[0.0], &inst);
        let y = generate_samples(&inst, &w, &sv(0.0), 8, 0.0).unwrap();
        assert_eq!(crate::samples::op_norm_l2_linf(&y), 0.0);
    }

    #[test]
    fn periodic_start_alternates() {
        let inst = scalar_instance(0.5, 2);
        let w = scalar_source(&[1.0, -1.0], &inst);
        let xp = periodic_solution(&inst, &w).unwrap();
        let y = generate_samples(&inst, &w, xp.at(0), 8, 0.0).unwrap();
        for n in 0..8 {
            let expect = if n % 2 == 0 { -2.0 / 3.0 } else { 2.0 / 3.0 };
            assert_relative_eq!(y.row(n)[0].re, expect, max_relative = 1e-10);
        }
    }

    #[test]
    fn trajectories_contract_toward_each_other() {
        let mut rng = crate::rng::stream(41, "system-test");
        let d = 3;
        let raw = CMatrix::from_fn(d, d, |_, _| crate::rng::complex_normal(&mut rng));
        let a = &raw * C::new(0.5 / linalg::spectral_norm(&raw), 0.0);
        let inst = SystemInstance::new(
            a,
            Subspace::full(d),
            vec![CVector::from_fn(d, |_, _| crate::rng::complex_normal(&mut rng))],
            2,
            0,
            Tolerances::default(),
        )
        .unwrap();
        let w = SourceSignal::new(
            PeriodicSequence::new(
                (0..2)
                    .map(|_| CVector::from_fn(d, |_, _| crate::rng::complex_normal(&mut rng)))
                    .collect(),
            )
            .unwrap(),
            inst.subspace(),
            inst.tolerances(),
        )
        .unwrap();
        let x0 = CVector::from_fn(d, |_, _| crate::rng::complex_normal(&mut rng));
        let x0b = CVector::from_fn(d, |_, _| crate::rng::complex_normal(&mut rng));
        let t1 = simulate(&inst, &w, &x0, 30).unwrap();
        let t2 = simulate(&inst, &w, &x0b, 30).unwrap();
        let gap0 = (&x0 - &x0b).norm();
        for n in 0..=30 {
            let gap = (t1.state(n) - t2.state(n)).norm();
            assert!(gap <= inst.a_norm().powi(n as i32) * gap0 * (1.0 + 1e-10));
        }
    }

    #[test]
    fn generate_samples_needs_full_period() {
        let inst = scalar_instance(0.5, 4);
        let w = scalar_source(&[1.0, 0.0, 0.0, 0.0], &inst);
        assert!(matches!(
            generate_samples(&inst, &w, &sv(0.0), 3, 0.0),
            Err(Error::TooFewRows { .. })
        ));
    }
}
