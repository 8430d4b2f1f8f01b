//! Discrete Fourier transform for vector-valued N-periodic sequences, with the
//! unitary 1/sqrt(N) normalization, plus the explicit block action of the
//! Fourier matrix F_N.
//!
//! Direct O(N^2 d) summation; the period is small by construction.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector};

/// One full period of an N-periodic sequence with values in C^d.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicSequence {
    samples: Vec<CVector>,
}

/// Fourier coefficients of a [`PeriodicSequence`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumVector {
    coeffs: Vec<CVector>,
}

fn check_uniform(vectors: &[CVector]) -> Result<()> {
    if vectors.is_empty() {
        return Err(Error::InvalidParameter("period must be at least 1".into()));
    }
    let d = vectors[0].len();
    for v in vectors {
        if v.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: v.len(),
            });
        }
    }
    Ok(())
}

impl PeriodicSequence {
    pub fn new(samples: Vec<CVector>) -> Result<Self> {
        check_uniform(&samples)?;
        Ok(Self { samples })
    }

    pub fn period(&self) -> usize {
        self.samples.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.samples[0].len()
    }

    /// Value at any integer time, extended by periodicity.
    pub fn at(&self, n: i64) -> &CVector {
        let period = self.samples.len() as i64;
        &self.samples[n.rem_euclid(period) as usize]
    }

    pub fn samples(&self) -> &[CVector] {
        &self.samples
    }

    /// Squared H^N norm: sum of squared vector norms over one period.
    pub fn norm_sq(&self) -> f64 {
        self.samples.iter().map(|v| v.norm_squared()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }
}

impl SpectrumVector {
    pub fn new(coeffs: Vec<CVector>) -> Result<Self> {
        check_uniform(&coeffs)?;
        Ok(Self { coeffs })
    }

    pub fn period(&self) -> usize {
        self.coeffs.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.coeffs[0].len()
    }

    pub fn coeff(&self, k: usize) -> &CVector {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[CVector] {
        &self.coeffs
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|v| v.norm_squared()).sum()
    }
}

fn phase(k: f64) -> Complex64 {
    Complex64::from_polar(1.0, k)
}

/// Forward transform: `q_hat(k) = (1/sqrt(N)) sum_n q(n) e^{-2 pi i n k / N}`.
pub fn dft(q: &PeriodicSequence) -> SpectrumVector {
    let n_per = q.period();
    let scale = 1.0 / (n_per as f64).sqrt();
    let coeffs = (0..n_per)
        .map(|k| {
            let mut acc = CVector::zeros(q.ambient_dim());
            for (n, v) in q.samples().iter().enumerate() {
                acc += v * (phase(-TAU * (n * k) as f64 / n_per as f64) * scale);
            }
            acc
        })
        .collect();
    SpectrumVector { coeffs }
}

/// Inverse transform: `q(n) = (1/sqrt(N)) sum_k q_hat(k) e^{2 pi i k n / N}`.
pub fn idft(spectrum: &SpectrumVector) -> PeriodicSequence {
    let n_per = spectrum.period();
    let scale = 1.0 / (n_per as f64).sqrt();
    let samples = (0..n_per)
        .map(|n| {
            let mut acc = CVector::zeros(spectrum.ambient_dim());
            for (k, v) in spectrum.coeffs().iter().enumerate() {
                acc += v * (phase(TAU * (n * k) as f64 / n_per as f64) * scale);
            }
            acc
        })
        .collect();
    PeriodicSequence { samples }
}

/// The unitary N x N Fourier matrix, entries `(1/sqrt(N)) e^{-2 pi i k s / N}`.
pub fn fourier_matrix(n_per: usize) -> CMatrix {
    let scale = 1.0 / (n_per as f64).sqrt();
    CMatrix::from_fn(n_per, n_per, |k, s| {
        phase(-TAU * (k * s) as f64 / n_per as f64) * scale
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Apply F_N (or its adjoint) blockwise to a stack of N vectors in C^d.
///
/// Same map as [`dft`]/[`idft`], realized through the explicit matrix so the
/// operator form `R = F_N^{-1} U F_N Q` has a concrete counterpart.
pub fn fourier_block_apply(direction: Direction, blocks: &[CVector]) -> Result<Vec<CVector>> {
    check_uniform(blocks)?;
    let n_per = blocks.len();
    let d = blocks[0].len();
    let f = match direction {
        Direction::Forward => fourier_matrix(n_per),
        Direction::Inverse => fourier_matrix(n_per).adjoint(),
    };
    Ok((0..n_per)
        .map(|row| {
            let mut acc = CVector::zeros(d);
            for (col, b) in blocks.iter().enumerate() {
                acc += b * f[(row, col)];
            }
            acc
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{complex_normal, stream};
    use num_complex::Complex64 as C;

    fn random_seq(n_per: usize, d: usize, seed: u64) -> PeriodicSequence {
        let mut rng = stream(seed, "dft-test");
        PeriodicSequence::new(
            (0..n_per)
                .map(|_| CVector::from_fn(d, |_, _| complex_normal(&mut rng)))
                .collect(),
        )
        .unwrap()
    }

    /// Independent naive oracle with explicitly written exponentials.
    fn dft_oracle(q: &PeriodicSequence) -> Vec<CVector> {
        let n_per = q.period();
        (0..n_per)
            .map(|k| {
                let mut acc = CVector::zeros(q.ambient_dim());
                for n in 0..n_per {
                    let angle = -TAU * (n as f64) * (k as f64) / (n_per as f64);
                    let e = C::new(angle.cos(), angle.sin());
                    acc += q.samples()[n].clone() * e;
                }
                acc / C::new((n_per as f64).sqrt(), 0.0)
            })
            .collect()
    }

    #[test]
    fn constant_sequence_concentrates_at_zero() {
        let v = CVector::from_vec(vec![C::new(1.0, 2.0), C::new(-3.0, 0.5)]);
        let q = PeriodicSequence::new(vec![v.clone(), v.clone()]).unwrap();
        let s = dft(&q);
        assert!((s.coeff(0) - v * C::new(2f64.sqrt(), 0.0)).norm() < 1e-14);
        assert!(s.coeff(1).norm() < 1e-14);
    }

    #[test]
    fn period_one_is_identity() {
        let v = CVector::from_vec(vec![C::new(0.3, -0.7)]);
        let q = PeriodicSequence::new(vec![v.clone()]).unwrap();
        assert!((dft(&q).coeff(0) - v).norm() < 1e-15);
    }

    #[test]
    fn matches_naive_oracle() {
        let q = random_seq(5, 4, 21);
        let s = dft(&q);
        let oracle = dft_oracle(&q);
        for k in 0..5 {
            assert!((s.coeff(k) - &oracle[k]).norm() < 1e-13);
        }
    }

    #[test]
    fn idft_of_constant_spectrum() {
        let v = CVector::from_vec(vec![C::new(1.0, 0.0)]);
        let s = SpectrumVector::new(vec![v.clone() * C::new(2f64.sqrt(), 0.0), v.clone() * C::new(0.0, 0.0)])
            .unwrap();
        let q = idft(&s);
        assert!((q.at(0) - &v).norm() < 1e-14);
        assert!((q.at(1) - &v).norm() < 1e-14);
    }

    #[test]
    fn pure_tone() {
        let n_per = 4;
        let d = 3;
        let mut rng = stream(2, "dft-test");
        let v = CVector::from_fn(d, |_, _| complex_normal(&mut rng));
        let s_idx = 3;
        let coeffs: Vec<CVector> = (0..n_per)
            .map(|k| {
                if k == s_idx {
                    v.clone()
                } else {
                    CVector::zeros(d)
                }
            })
            .collect();
        let q = idft(&SpectrumVector::new(coeffs).unwrap());
        for n in 0..n_per {
            let expect =
                &v * (phase(TAU * (s_idx * n) as f64 / n_per as f64) / C::new((n_per as f64).sqrt(), 0.0));
            assert!((q.at(n as i64) - expect).norm() < 1e-13);
        }
    }

    #[test]
    fn round_trip_identity() {
        let q = random_seq(7, 3, 8);
        let back = idft(&dft(&q));
        for n in 0..7 {
            let rel = (q.at(n) - back.at(n)).norm() / (1.0 + q.at(n).norm());
            assert!(rel < 1e-12);
        }
    }

    #[test]
    fn block_apply_agrees_with_dft_and_idft() {
        for trial in 0..50 {
            let n_per = 1 + (trial % 6);
            let q = random_seq(n_per, 3, 100 + trial as u64);
            let s = dft(&q);
            let fwd = fourier_block_apply(Direction::Forward, q.samples()).unwrap();
            let inv = fourier_block_apply(Direction::Inverse, s.coeffs()).unwrap();
            for k in 0..n_per {
                assert!((s.coeff(k) - &fwd[k]).norm() < 1e-13);
                assert!((q.samples()[k].clone() - &inv[k]).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn fourier_matrix_is_unitary() {
        for n_per in 1..=8 {
            let f = fourier_matrix(n_per);
            let dev = (f.adjoint() * &f - CMatrix::identity(n_per, n_per)).norm();
            assert!(dev < 1e-13);
        }
    }

    #[test]
    fn shift_property() {
        // p(n) = q(n+1) implies p_hat(k) = q_hat(k) e^{2 pi i k / N}.
        let n_per = 6;
        let q = random_seq(n_per, 2, 33);
        let p = PeriodicSequence::new(
            (0..n_per).map(|n| q.at(n as i64 + 1).clone()).collect(),
        )
        .unwrap();
        let qs = dft(&q);
        let ps = dft(&p);
        for k in 0..n_per {
            let expect = qs.coeff(k) * phase(TAU * k as f64 / n_per as f64);
            assert!((ps.coeff(k) - expect).norm() < 1e-12);
        }
    }
}
