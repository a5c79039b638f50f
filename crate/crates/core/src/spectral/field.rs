use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::modes::{HarmonicIndex, Parity};

const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Triangular array of spherical-harmonic coefficients a_{n,m} for a real
/// scalar field, 0 <= m <= n <= N. Negative orders are implied by conjugate
/// symmetry. Coefficients are stored order-major (m outer, n inner) so the
/// transforms can walk contiguous runs per zonal wavenumber.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralScalar {
    n_trunc: u32,
    coeffs: Vec<Complex64>,
}

impl SpectralScalar {
    pub fn zeros(n_trunc: u32) -> Self {
        let len = coeff_count(n_trunc);
        Self {
            n_trunc,
            coeffs: vec![Complex64::new(0.0, 0.0); len],
        }
    }

    pub fn n_trunc(&self) -> u32 {
        self.n_trunc
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Packed index of (n, m); m-major layout.
    #[inline]
    pub fn index(&self, n: u32, m: u32) -> usize {
        debug_assert!(m <= n && n <= self.n_trunc);
        let nt = self.n_trunc as usize;
        let m = m as usize;
        m * (nt + 1) - m * (m.saturating_sub(1)) / 2 + (n as usize - m)
    }

    #[inline]
    pub fn get(&self, n: u32, m: u32) -> Complex64 {
        self.coeffs[self.index(n, m)]
    }

    #[inline]
    pub fn set(&mut self, n: u32, m: u32, value: Complex64) {
        let i = self.index(n, m);
        self.coeffs[i] = value;
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// (n, m) pair for a packed index; inverse of `index`.
    pub fn degree_order(&self, packed: usize) -> (u32, u32) {
        let nt = self.n_trunc as usize;
        let mut m = 0usize;
        let mut offset = 0usize;
        loop {
            let run = nt + 1 - m;
            if packed < offset + run {
                return ((m + packed - offset) as u32, m as u32);
            }
            offset += run;
            m += 1;
        }
    }

    /// Add `amount` to the real-basis coefficient of `mode`.
    ///
    /// Real modes are sqrt(2) Re/Im combinations of the complex harmonics, so
    /// the cos channel lives in the real part of a_{n,m} and the sin channel
    /// in (minus) the imaginary part.
    pub fn add_real_mode(&mut self, mode: HarmonicIndex, amount: f64) {
        let i = self.index(mode.n, mode.m);
        if mode.m == 0 {
            self.coeffs[i].re += amount;
        } else {
            match mode.parity {
                Parity::Cos => self.coeffs[i].re += amount / SQRT_2,
                Parity::Sin => self.coeffs[i].im -= amount / SQRT_2,
            }
        }
    }

    /// Real-basis coefficient of `mode`.
    pub fn real_mode(&self, mode: HarmonicIndex) -> f64 {
        let c = self.get(mode.n, mode.m);
        if mode.m == 0 {
            c.re
        } else {
            match mode.parity {
                Parity::Cos => SQRT_2 * c.re,
                Parity::Sin => -SQRT_2 * c.im,
            }
        }
    }

    /// Copy into a (possibly different) truncation, dropping or zero-padding
    /// degrees beyond the overlap.
    pub fn with_truncation(&self, n_trunc: u32) -> Self {
        let mut out = Self::zeros(n_trunc);
        let n_copy = self.n_trunc.min(n_trunc);
        for m in 0..=n_copy {
            for n in m..=n_copy {
                let v = self.get(n, m);
                out.set(n, m, v);
            }
        }
        out
    }

    pub fn scale(&mut self, factor: f64) {
        for c in &mut self.coeffs {
            *c *= factor;
        }
    }

    /// self += factor * other (equal truncations).
    pub fn axpy(&mut self, factor: f64, other: &Self) {
        debug_assert_eq!(self.n_trunc, other.n_trunc);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += factor * b;
        }
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Largest coefficient magnitude (sup over the triangle).
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient magnitude among orders m > 0.
    pub fn max_abs_nonzonal(&self) -> f64 {
        let nt = self.n_trunc as usize;
        if self.coeffs.len() <= nt + 1 {
            return 0.0;
        }
        self.coeffs[nt + 1..]
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Require |a_00| <= tol; errors otherwise.
    pub fn check_mean_free(&self, tol: f64) -> Result<()> {
        let a00 = self.get(0, 0).norm();
        if a00 > tol {
            return Err(Error::NotMeanFree(a00));
        }
        Ok(())
    }
}

pub fn coeff_count(n_trunc: u32) -> usize {
    let n = n_trunc as usize;
    (n + 1) * (n + 2) / 2
}

/// Real values on a Gauss grid, row-major latitude x longitude.
#[derive(Debug, Clone, PartialEq)]
pub struct GridScalar {
    pub nlat: usize,
    pub nlon: usize,
    pub values: Vec<f64>,
}

impl GridScalar {
    pub fn zeros(nlat: usize, nlon: usize) -> Self {
        Self {
            nlat,
            nlon,
            values: vec![0.0; nlat * nlon],
        }
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.nlon..(i + 1) * self.nlon]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.values[i * self.nlon..(i + 1) * self.nlon]
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }
}
