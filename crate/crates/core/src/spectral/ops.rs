//! Scalar operators on spectral fields and the H-space bookkeeping for
//! velocity fields represented by mean-free streamfunctions.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::field::{GridScalar, SpectralScalar};
use crate::spectral::legendre::{cos_phi_d_phi, d_lambda};
use crate::spectral::modes::ModeOrdering;
use crate::spectral::transform::{Transform, TransformScratch};

/// Sobolev order selector for `spectral_norm`: exponent of lambda_n in the
/// coefficient sum (1 for H = L^2 velocity, 2 for V = H^1, 3 for H^2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormOrder {
    H,
    V,
    H2,
}

impl NormOrder {
    fn exponent(self) -> i32 {
        match self {
            NormOrder::H => 1,
            NormOrder::V => 2,
            NormOrder::H2 => 3,
        }
    }
}

#[inline]
pub fn eigenvalue(n: u32) -> f64 {
    (n as u64 * (n as u64 + 1)) as f64
}

/// Multiply coefficient (n, m) by -n(n+1).
pub fn apply_laplacian(s: &SpectralScalar) -> SpectralScalar {
    let mut out = s.clone();
    let nt = out.n_trunc();
    for m in 0..=nt {
        for n in m..=nt {
            let i = out.index(n, m);
            out.coeffs_mut()[i] *= -eigenvalue(n);
        }
    }
    out
}

/// Divide coefficient (n, m) by -n(n+1) for n >= 1; requires a mean-free input.
pub fn invert_laplacian(s: &SpectralScalar) -> Result<SpectralScalar> {
    s.check_mean_free(1e-12)?;
    let mut out = s.clone();
    let nt = out.n_trunc();
    for m in 0..=nt {
        for n in m..=nt {
            let i = out.index(n, m);
            if n == 0 {
                out.coeffs_mut()[i] = Complex64::new(0.0, 0.0);
            } else {
                out.coeffs_mut()[i] /= -eigenvalue(n);
            }
        }
    }
    Ok(out)
}

/// Weighted coefficient inner product sum over n >= 1 with weight lambda^p:
/// a_0 b_0 + 2 sum_{m>0} Re(a conj(b)) per degree, times lambda_n^p.
pub fn weighted_inner(a: &SpectralScalar, b: &SpectralScalar, p: i32) -> f64 {
    debug_assert_eq!(a.n_trunc(), b.n_trunc());
    let nt = a.n_trunc();
    let mut total = 0.0;
    for m in 0..=nt {
        let weight = if m == 0 { 1.0 } else { 2.0 };
        for n in m.max(1)..=nt {
            let i = a.index(n, m);
            let ca = a.coeffs()[i];
            let cb = b.coeffs()[i];
            let dot = ca.re * cb.re + ca.im * cb.im;
            total += weight * eigenvalue(n).powi(p) * dot;
        }
    }
    total
}

/// Norm of the velocity field u = n x grad(psi) for a streamfunction `s`:
/// sqrt(sum lambda^p |a_{n,m}|^2) with p = 1 (H), 2 (V), 3 (H^2).
pub fn spectral_norm(s: &SpectralScalar, order: NormOrder) -> f64 {
    weighted_inner(s, s, order.exponent()).sqrt()
}

/// H inner product of two velocity fields given by streamfunctions.
pub fn h_inner(a: &SpectralScalar, b: &SpectralScalar) -> f64 {
    weighted_inner(a, b, 1)
}

/// Low/high selector for the spectral projections P_N and Q_N = I - P_N.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectPart {
    Low,
    High,
}

/// Keep modes j <= cutoff of the H basis ordering (low) or the complement
/// (high). The degree-0 coefficient stays put in the low part.
pub fn project_modes(
    s: &SpectralScalar,
    cutoff: usize,
    part: ProjectPart,
) -> Result<SpectralScalar> {
    let ordering = ModeOrdering::new(s.n_trunc().max(1))?;
    if cutoff > ordering.len() {
        return Err(Error::ModeIndex {
            index: cutoff,
            max: ordering.len(),
        });
    }
    let mut low = SpectralScalar::zeros(s.n_trunc());
    low.set(0, 0, s.get(0, 0));
    for j in 1..=cutoff {
        let h = ordering.mode(j)?;
        low.add_real_mode(h, s.real_mode(h));
    }
    match part {
        ProjectPart::Low => Ok(low),
        ProjectPart::High => {
            let mut high = s.clone();
            high.axpy(-1.0, &low);
            Ok(high)
        }
    }
}

/// Streamfunction of the j-th H-orthonormal basis velocity field:
/// the real harmonic at ModeOrdering(j), scaled by lambda_j^{-1/2}.
pub fn mode_field(j: usize, n_trunc: u32) -> Result<SpectralScalar> {
    let ordering = ModeOrdering::new(n_trunc)?;
    let h = ordering.mode(j)?;
    let mut s = SpectralScalar::zeros(n_trunc);
    s.add_real_mode(h, 1.0 / h.eigenvalue().sqrt());
    Ok(s)
}

/// Spherical Jacobian J(a, b) = (1/cos phi)(a_lambda b_phi - b_lambda a_phi),
/// computed by the transform method and truncated to the inputs' degree.
pub fn jacobian(a: &SpectralScalar, b: &SpectralScalar, t: &Transform) -> Result<SpectralScalar> {
    if a.n_trunc() != b.n_trunc() {
        return Err(Error::Dimension(format!(
            "jacobian arguments have truncations {} and {}",
            a.n_trunc(),
            b.n_trunc()
        )));
    }
    t.check_dealias(a.n_trunc())?;
    let mut scratch = TransformScratch::new(t);
    let mut out = SpectralScalar::zeros(a.n_trunc());
    jacobian_into(a, b, t, &mut out, &mut scratch)?;
    Ok(out)
}

pub fn jacobian_into(
    a: &SpectralScalar,
    b: &SpectralScalar,
    t: &Transform,
    out: &mut SpectralScalar,
    scratch: &mut TransformScratch,
) -> Result<()> {
    let grid = t.grid();
    let mut a_lam = GridScalar::zeros(grid.nlat, grid.nlon);
    let mut b_lam = GridScalar::zeros(grid.nlat, grid.nlon);
    let mut a_mu = GridScalar::zeros(grid.nlat, grid.nlon);
    let mut b_mu = GridScalar::zeros(grid.nlat, grid.nlon);
    t.synthesize_into(&d_lambda(a), &mut a_lam, scratch)?;
    t.synthesize_into(&d_lambda(b), &mut b_lam, scratch)?;
    t.synthesize_into(&cos_phi_d_phi(a), &mut a_mu, scratch)?;
    t.synthesize_into(&cos_phi_d_phi(b), &mut b_mu, scratch)?;
    // J = (a_lam * cosphi b_phi - b_lam * cosphi a_phi) / cos^2 phi
    let mut j = a_lam;
    for i in 0..grid.nlat {
        let cos2 = 1.0 - grid.nodes[i] * grid.nodes[i];
        let row_bmu = &b_mu.values[i * grid.nlon..(i + 1) * grid.nlon];
        let row_blam = &b_lam.values[i * grid.nlon..(i + 1) * grid.nlon];
        let row_amu = &a_mu.values[i * grid.nlon..(i + 1) * grid.nlon];
        let row = j.row_mut(i);
        for k in 0..grid.nlon {
            row[k] = (row[k] * row_bmu[k] - row_blam[k] * row_amu[k]) / cos2;
        }
    }
    t.analyze_into(&j, out, scratch)
}

/// Norm of the velocity field whose vorticity is `omega` (= Delta psi):
/// the lambda exponent shifts by -2 relative to the streamfunction form.
pub fn velocity_norm(omega: &SpectralScalar, order: NormOrder) -> f64 {
    weighted_inner(omega, omega, order.exponent() - 2).sqrt()
}

/// H inner product of two velocity fields given by their vorticities.
pub fn velocity_h_inner(omega_a: &SpectralScalar, omega_b: &SpectralScalar) -> f64 {
    weighted_inner(omega_a, omega_b, -1)
}

/// H coordinate <u, e_j> of the velocity field with vorticity `omega`.
pub fn velocity_coordinate(omega: &SpectralScalar, ordering: &ModeOrdering, j: usize) -> Result<f64> {
    let h = ordering.mode(j)?;
    Ok(-omega.real_mode(h) / h.eigenvalue().sqrt())
}

/// Add `amount * e_j` (velocity space) to the vorticity field `omega`:
/// the vorticity coefficient at the mode's harmonic moves by -amount*sqrt(lambda).
pub fn add_velocity_mode(
    omega: &mut SpectralScalar,
    ordering: &ModeOrdering,
    j: usize,
    amount: f64,
) -> Result<()> {
    let h = ordering.mode(j)?;
    omega.add_real_mode(h, -amount * h.eigenvalue().sqrt());
    Ok(())
}

/// Grid values of the velocity components (u_phi, u_lambda) of u = n x grad(psi).
pub fn velocity_grids(
    psi: &SpectralScalar,
    t: &Transform,
    scratch: &mut TransformScratch,
) -> Result<(GridScalar, GridScalar)> {
    let grid = t.grid();
    let mut u_phi = GridScalar::zeros(grid.nlat, grid.nlon);
    let mut u_lam = GridScalar::zeros(grid.nlat, grid.nlon);
    t.synthesize_into(&d_lambda(psi), &mut u_phi, scratch)?;
    t.synthesize_into(&cos_phi_d_phi(psi), &mut u_lam, scratch)?;
    for i in 0..grid.nlat {
        let cos_phi = (1.0 - grid.nodes[i] * grid.nodes[i]).sqrt();
        for v in u_phi.row_mut(i) {
            *v /= cos_phi;
        }
        for v in u_lam.row_mut(i) {
            *v = -*v / cos_phi;
        }
    }
    Ok((u_phi, u_lam))
}
