//! FFT helpers on the periodic θ-grid `θ_m = m / M`, `m = 0..M`.

use std::sync::Arc;

use num_complex::Complex;
use num_traits::Zero;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::scalar::{i_unit, two_pi, Real};

/// Forward/inverse transforms for one grid size.
///
/// Coefficients follow `f(θ) = Σ_k f_k e^{2πikθ}`, so `forward` divides by `M`.
#[derive(Clone)]
pub struct ThetaGrid<T: Real> {
    m: usize,
    fwd: Arc<dyn Fft<T>>,
    inv: Arc<dyn Fft<T>>,
}

impl<T: Real> std::fmt::Debug for ThetaGrid<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ThetaGrid").field("m", &self.m).finish()
    }
}

impl<T: Real> ThetaGrid<T> {
    pub fn new(m: usize) -> Result<Self> {
        if m < 2 || !m.is_power_of_two() {
            return Err(Error::InvalidInput(format!(
                "θ-grid size {m} must be a power of two >= 2"
            )));
        }
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(m);
        let inv = planner.plan_fft_inverse(m);
        Ok(Self { m, fwd, inv })
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn theta(&self, idx: usize) -> T {
        T::from_index(idx) / T::from_index(self.m)
    }

    /// Signed wavenumber of FFT bin `idx`, in `[-M/2, M/2)`.
    pub fn wavenumber(&self, idx: usize) -> i64 {
        let m = self.m as i64;
        let k = idx as i64;
        if k < m / 2 {
            k
        } else {
            k - m
        }
    }

    /// FFT bin holding wavenumber `k` (periodic wrap).
    pub fn bin(&self, k: i64) -> usize {
        k.rem_euclid(self.m as i64) as usize
    }

    pub fn forward(&self, samples: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(samples.len(), self.m);
        let mut buf = samples.to_vec();
        self.fwd.process(&mut buf);
        let scale = T::one() / T::from_index(self.m);
        buf.iter_mut().for_each(|z| *z = *z * scale);
        buf
    }

    pub fn inverse(&self, coeffs: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(coeffs.len(), self.m);
        let mut buf = coeffs.to_vec();
        self.inv.process(&mut buf);
        buf
    }

    /// Fourier coefficient `f_k` for `|k| <= M/2`; the Nyquist bin is split evenly
    /// between `k = ±M/2`, and wavenumbers beyond that wrap periodically.
    pub fn coefficient(&self, coeffs: &[Complex<T>], k: i64) -> Complex<T> {
        let half = (self.m / 2) as i64;
        let v = coeffs[self.bin(k)];
        if k.abs() == half {
            v * T::lit(0.5)
        } else {
            v
        }
    }

    /// Spectral derivative `d^order/dθ^order` of periodic samples.
    pub fn derivative(&self, samples: &[Complex<T>], order: u32) -> Vec<Complex<T>> {
        if order == 0 {
            return samples.to_vec();
        }
        let mut coeffs = self.forward(samples);
        let half = self.m / 2;
        for (idx, z) in coeffs.iter_mut().enumerate() {
            if idx == half && order % 2 == 1 {
                *z = Complex::zero();
                continue;
            }
            let k = T::from_int(self.wavenumber(idx));
            let factor = (i_unit::<T>() * (two_pi::<T>() * k)).powu(order);
            *z = *z * factor;
        }
        self.inverse(&coeffs)
    }

    /// Sample index of `-θ_m` on the grid.
    pub fn reflect(&self, idx: usize) -> usize {
        (self.m - idx) % self.m
    }
}
