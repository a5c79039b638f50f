use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::spectral::field::{coeff_count, GridScalar, SpectralScalar};
use crate::spectral::grid::{make_grid, GaussGrid};
use crate::spectral::legendre::fill_plm_row;

/// Precomputed spherical-harmonic transform plan for one grid.
///
/// The plan is immutable after construction and safely shareable across
/// threads. Legendre tables extend one degree past the design truncation so
/// meridional-derivative fields (degree N+1) synthesize on the same grid.
pub struct Transform {
    n_field: u32,
    n_table: u32,
    grid: GaussGrid,
    plm: Vec<f64>,
    fft_fwd: Arc<dyn Fft<f64>>,
    fft_inv: Arc<dyn Fft<f64>>,
}

/// Reusable per-thread buffers for `synthesize_into` / `analyze_into`.
pub struct TransformScratch {
    row: Vec<Complex64>,
    fft: Vec<Complex64>,
}

impl TransformScratch {
    pub fn new(t: &Transform) -> Self {
        let fft_len = t
            .fft_fwd
            .get_inplace_scratch_len()
            .max(t.fft_inv.get_inplace_scratch_len());
        Self {
            row: vec![Complex64::new(0.0, 0.0); t.grid.nlon],
            fft: vec![Complex64::new(0.0, 0.0); fft_len],
        }
    }
}

impl Transform {
    /// Plan for fields of degree `n_field` on the smallest dealiased grid
    /// (scaled by `oversample`).
    pub fn new(n_field: u32, oversample: f64) -> Result<Self> {
        let grid = make_grid(n_field, oversample)?;
        Self::with_grid(n_field, grid)
    }

    pub fn with_grid(n_field: u32, grid: GaussGrid) -> Result<Self> {
        if n_field < 1 {
            return Err(Error::InvalidTruncation(n_field));
        }
        let n_table = n_field + 1;
        let t_len = coeff_count(n_table);
        let mut plm = vec![0.0; grid.nlat * t_len];
        for (i, &mu) in grid.nodes.iter().enumerate() {
            fill_plm_row(n_table, mu, &mut plm[i * t_len..(i + 1) * t_len]);
        }
        let mut planner = FftPlanner::new();
        let fft_fwd = planner.plan_fft_forward(grid.nlon);
        let fft_inv = planner.plan_fft_inverse(grid.nlon);
        Ok(Self {
            n_field,
            n_table,
            grid,
            plm,
            fft_fwd,
            fft_inv,
        })
    }

    pub fn n_field(&self) -> u32 {
        self.n_field
    }

    pub fn n_table(&self) -> u32 {
        self.n_table
    }

    pub fn grid(&self) -> &GaussGrid {
        &self.grid
    }

    /// Offset of order m in the packed triangle at truncation `n_trunc`.
    #[inline]
    fn offset(n_trunc: u32, m: u32) -> usize {
        let nt = n_trunc as usize;
        let m = m as usize;
        m * (nt + 1) - m * m.saturating_sub(1) / 2
    }

    /// Pointwise evaluation of the field on the plan's grid.
    pub fn synthesize(&self, s: &SpectralScalar) -> Result<GridScalar> {
        let mut out = GridScalar::zeros(self.grid.nlat, self.grid.nlon);
        let mut scratch = TransformScratch::new(self);
        self.synthesize_into(s, &mut out, &mut scratch)?;
        Ok(out)
    }

    pub fn synthesize_into(
        &self,
        s: &SpectralScalar,
        out: &mut GridScalar,
        scratch: &mut TransformScratch,
    ) -> Result<()> {
        let ns = s.n_trunc();
        if ns > self.n_table {
            return Err(Error::Dimension(format!(
                "field truncation {ns} exceeds plan table degree {}",
                self.n_table
            )));
        }
        if out.nlat != self.grid.nlat || out.nlon != self.grid.nlon {
            return Err(Error::Dimension(format!(
                "grid {}x{} does not match plan {}x{}",
                out.nlat, out.nlon, self.grid.nlat, self.grid.nlon
            )));
        }
        let nlon = self.grid.nlon;
        let t_len = coeff_count(self.n_table);
        let coeffs = s.coeffs();
        for i in 0..self.grid.nlat {
            let plm_row = &self.plm[i * t_len..(i + 1) * t_len];
            let row = &mut scratch.row;
            row.fill(Complex64::new(0.0, 0.0));
            for m in 0..=ns {
                let run = (ns - m + 1) as usize;
                let so = Self::offset(ns, m);
                let to = Self::offset(self.n_table, m);
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..run {
                    acc += coeffs[so + k] * plm_row[to + k];
                }
                if m == 0 {
                    row[0] = Complex64::new(acc.re, 0.0);
                } else {
                    row[m as usize] = acc;
                    row[nlon - m as usize] = acc.conj();
                }
            }
            self.fft_inv.process_with_scratch(row, &mut scratch.fft);
            for (o, c) in out.row_mut(i).iter_mut().zip(row.iter()) {
                *o = c.re;
            }
        }
        Ok(())
    }

    /// Quadrature projection onto the orthonormal harmonics up to `n_out`.
    /// Exact for band-limited inputs on a dealiased grid.
    pub fn analyze(&self, g: &GridScalar, n_out: u32) -> Result<SpectralScalar> {
        let mut out = SpectralScalar::zeros(n_out);
        let mut scratch = TransformScratch::new(self);
        self.analyze_into(g, &mut out, &mut scratch)?;
        Ok(out)
    }

    pub fn analyze_into(
        &self,
        g: &GridScalar,
        out: &mut SpectralScalar,
        scratch: &mut TransformScratch,
    ) -> Result<()> {
        let n_out = out.n_trunc();
        if n_out > self.n_table {
            return Err(Error::Dimension(format!(
                "analysis truncation {n_out} exceeds plan table degree {}",
                self.n_table
            )));
        }
        if g.nlat != self.grid.nlat || g.nlon != self.grid.nlon {
            return Err(Error::Dimension(format!(
                "grid {}x{} does not match plan {}x{}",
                g.nlat, g.nlon, self.grid.nlat, self.grid.nlon
            )));
        }
        let nlon = self.grid.nlon;
        let t_len = coeff_count(self.n_table);
        let lon_factor = 2.0 * std::f64::consts::PI / nlon as f64;
        for c in out.coeffs_mut() {
            *c = Complex64::new(0.0, 0.0);
        }
        let coeffs = out.coeffs_mut();
        for i in 0..self.grid.nlat {
            let plm_row = &self.plm[i * t_len..(i + 1) * t_len];
            let row = &mut scratch.row;
            for (c, &v) in row.iter_mut().zip(g.row(i)) {
                *c = Complex64::new(v, 0.0);
            }
            self.fft_fwd.process_with_scratch(row, &mut scratch.fft);
            let w = self.grid.weights[i] * lon_factor;
            for m in 0..=n_out {
                let f = row[m as usize] * w;
                let run = (n_out - m + 1) as usize;
                let oo = Self::offset(n_out, m);
                let to = Self::offset(self.n_table, m);
                for k in 0..run {
                    coeffs[oo + k] += plm_row[to + k] * f;
                }
            }
        }
        // Reality of the field: zonal coefficients carry no imaginary part.
        for c in coeffs.iter_mut().take(n_out as usize + 1) {
            c.im = 0.0;
        }
        Ok(())
    }

    /// Check that this plan's grid dealiases quadratic products at `n`.
    pub fn check_dealias(&self, n: u32) -> Result<()> {
        self.grid.check_dealias(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::modes::{HarmonicIndex, Parity};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_field(n: u32, rng: &mut StdRng) -> SpectralScalar {
        let mut s = SpectralScalar::zeros(n);
        for m in 0..=n {
            for deg in m..=n {
                let re = rng.random::<f64>() - 0.5;
                let im = if m == 0 { 0.0 } else { rng.random::<f64>() - 0.5 };
                s.set(deg, m, Complex64::new(re, im));
            }
        }
        s
    }

    #[test]
    fn constant_field_analysis() {
        let t = Transform::new(5, 1.0).unwrap();
        let g = GridScalar {
            nlat: t.grid().nlat,
            nlon: t.grid().nlon,
            values: vec![1.0; t.grid().nlat * t.grid().nlon],
        };
        let s = t.analyze(&g, 5).unwrap();
        let expect = (4.0 * std::f64::consts::PI).sqrt();
        assert!((s.get(0, 0).re - expect).abs() < 1e-13);
        for m in 0..=5u32 {
            for n in m.max(1)..=5 {
                assert!(s.get(n, m).norm() < 1e-13, "a_{n}{m} should vanish");
            }
        }
    }

    #[test]
    fn sin_latitude_is_pure_y10() {
        let t = Transform::new(4, 1.0).unwrap();
        let mut g = GridScalar::zeros(t.grid().nlat, t.grid().nlon);
        for i in 0..t.grid().nlat {
            let mu = t.grid().nodes[i];
            for v in g.row_mut(i) {
                *v = mu;
            }
        }
        let s = t.analyze(&g, 4).unwrap();
        let expect = (4.0 * std::f64::consts::PI / 3.0).sqrt();
        assert!((s.get(1, 0).re - expect).abs() < 1e-13);
        assert!(s.get(0, 0).norm() < 1e-14);
        assert!(s.get(2, 0).norm() < 1e-13);
    }

    #[test]
    fn synthesis_of_unit_mean_mode_is_one() {
        let t = Transform::new(3, 1.0).unwrap();
        let mut s = SpectralScalar::zeros(3);
        s.set(0, 0, Complex64::new((4.0 * std::f64::consts::PI).sqrt(), 0.0));
        let g = t.synthesize(&s).unwrap();
        for v in &g.values {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_synthesizes_to_zero() {
        let t = Transform::new(3, 1.0).unwrap();
        let g = t.synthesize(&SpectralScalar::zeros(3)).unwrap();
        assert_eq!(g.max_abs(), 0.0);
    }

    #[test]
    fn roundtrip_spectral_grid_spectral() {
        let mut rng = StdRng::seed_from_u64(11);
        for n in [1u32, 5, 13, 21] {
            let t = Transform::new(n, 1.0).unwrap();
            let s = random_field(n, &mut rng);
            let g = t.synthesize(&s).unwrap();
            let s2 = t.analyze(&g, n).unwrap();
            let mut worst = 0.0_f64;
            for (a, b) in s.coeffs().iter().zip(s2.coeffs()) {
                worst = worst.max((a - b).norm());
            }
            let scale = s.max_abs();
            assert!(worst / scale < 1e-12, "n={n}: relative error {}", worst / scale);
        }
    }

    #[test]
    fn roundtrip_grid_spectral_grid() {
        let mut rng = StdRng::seed_from_u64(17);
        let n = 9u32;
        let t = Transform::new(n, 1.0).unwrap();
        // Band-limited grid field: synthesize a random spectrum first.
        let g = t.synthesize(&random_field(n, &mut rng)).unwrap();
        let g2 = t.synthesize(&t.analyze(&g, n).unwrap()).unwrap();
        let scale = g.max_abs();
        for (a, b) in g.values.iter().zip(&g2.values) {
            assert!((a - b).abs() / scale < 1e-12);
        }
    }

    #[test]
    fn oversampled_grid_roundtrips_too() {
        let mut rng = StdRng::seed_from_u64(23);
        let n = 7u32;
        let t = Transform::new(n, 1.7).unwrap();
        let s = random_field(n, &mut rng);
        let s2 = t.analyze(&t.synthesize(&s).unwrap(), n).unwrap();
        let scale = s.max_abs();
        for (a, b) in s.coeffs().iter().zip(s2.coeffs()) {
            assert!((a - b).norm() / scale < 1e-12);
        }
    }

    #[test]
    fn real_mode_fields_match_trig_formulas() {
        let t = Transform::new(4, 1.0).unwrap();
        let mut s = SpectralScalar::zeros(4);
        s.add_real_mode(HarmonicIndex::new(2, 1, Parity::Sin).unwrap(), 1.0);
        let g = t.synthesize(&s).unwrap();
        let four_pi = 4.0 * std::f64::consts::PI;
        for i in 0..t.grid().nlat {
            let mu = t.grid().nodes[i];
            let q21 = (15.0 / (2.0 * four_pi)).sqrt() * mu * (1.0 - mu * mu).sqrt();
            for j in 0..t.grid().nlon {
                let lam = t.grid().longitude(j);
                let expect = 2f64.sqrt() * q21 * lam.sin();
                assert!((g.row(i)[j] - expect).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let t = Transform::new(5, 1.0).unwrap();
        let g = GridScalar::zeros(4, 10);
        assert!(t.analyze(&g, 5).is_err());
        let s = SpectralScalar::zeros(9);
        assert!(t.synthesize(&s).is_err());
    }
}
