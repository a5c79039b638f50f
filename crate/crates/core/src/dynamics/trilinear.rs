//! The trilinear form b(u, v, w) of the Navier-Stokes nonlinearity and the
//! Coriolis pairings used by the verification suites.
//!
//! The bilinear term is polarized rotationally, B(u, v) = curl_n u x v, which
//! reduces to the advection nonlinearity on the diagonal (the gradient part
//! is dropped by the divergence-free projection). With streamfunctions this
//! is pointwise b(u, v, w) = integral of Delta(psi_u) * ((n x v) . w): every
//! factor is band-limited, so the cubic product integrates exactly on a grid
//! one truncation step finer than the fields.

use crate::error::{Error, Result};
use crate::spectral::field::{GridScalar, SpectralScalar};
use crate::spectral::legendre::{cos_phi_d_phi, d_lambda};
use crate::spectral::ops::{apply_laplacian, eigenvalue};
use crate::spectral::transform::{Transform, TransformScratch};

/// Plan sized for the cubic products of fields at truncation `n_trunc`.
pub fn trilinear_plan(n_trunc: u32) -> Result<Transform> {
    Transform::new(n_trunc + 1, 1.0)
}

fn require_plan(t: &Transform, n_trunc: u32) -> Result<()> {
    if t.n_field() < n_trunc + 1 {
        return Err(Error::Dimension(format!(
            "plan truncation {} too small for trilinear products at {} (need {})",
            t.n_field(),
            n_trunc,
            n_trunc + 1
        )));
    }
    Ok(())
}

/// Trilinear form b(u, v, w) = <B(u, v), w> with B(u, v) = curl_n u x v, for
/// divergence-free fields given by their streamfunctions (equal truncations).
/// Pointwise: Delta(psi_u) * (v_lam w_phi - v_phi w_lam).
pub fn trilinear(
    psi_u: &SpectralScalar,
    psi_v: &SpectralScalar,
    psi_w: &SpectralScalar,
    t: &Transform,
) -> Result<f64> {
    let n = psi_u.n_trunc();
    if psi_v.n_trunc() != n || psi_w.n_trunc() != n {
        return Err(Error::Dimension(format!(
            "trilinear arguments have truncations {}, {}, {}",
            n,
            psi_v.n_trunc(),
            psi_w.n_trunc()
        )));
    }
    require_plan(t, n)?;
    let mut scratch = TransformScratch::new(t);
    let grid = t.grid();

    let mut vort_u = GridScalar::zeros(grid.nlat, grid.nlon);
    t.synthesize_into(&apply_laplacian(psi_u), &mut vort_u, &mut scratch)?;
    let v = velocity_frame(psi_v, t, &mut scratch)?;
    let w = velocity_frame(psi_w, t, &mut scratch)?;

    let mut integrand = GridScalar::zeros(grid.nlat, grid.nlon);
    for i in 0..grid.nlat {
        for j in 0..grid.nlon {
            // (n x v) . w = v_lam w_phi - v_phi w_lam
            let cross = v.1.row(i)[j] * w.0.row(i)[j] - v.0.row(i)[j] * w.1.row(i)[j];
            integrand.row_mut(i)[j] = vort_u.row(i)[j] * cross;
        }
    }
    Ok(grid.integrate(&integrand.values))
}

/// Streamfunction of A^r u (A acts as -Delta, i.e. coefficient * lambda^r).
pub fn stokes_power(psi: &SpectralScalar, r: u32) -> SpectralScalar {
    let mut out = psi.clone();
    let nt = out.n_trunc();
    for m in 0..=nt {
        for n in m..=nt {
            let i = out.index(n, m);
            out.coeffs_mut()[i] *= eigenvalue(n).powi(r as i32);
        }
    }
    out
}

/// Coriolis pairing <l n x u, A^r u> with l = 2 Omega sin(phi); vanishes
/// identically for all r >= 0.
pub fn coriolis_inner(
    psi_u: &SpectralScalar,
    r: u32,
    rotation: f64,
    t: &Transform,
) -> Result<f64> {
    require_plan(t, psi_u.n_trunc())?;
    if rotation == 0.0 {
        return Ok(0.0);
    }
    let mut scratch = TransformScratch::new(t);
    let grid = t.grid();
    let u = velocity_frame(psi_u, t, &mut scratch)?;
    let w = velocity_frame(&stokes_power(psi_u, r), t, &mut scratch)?;
    let mut integrand = GridScalar::zeros(grid.nlat, grid.nlon);
    for i in 0..grid.nlat {
        let l = 2.0 * rotation * grid.nodes[i];
        for j in 0..grid.nlon {
            // (n x u) . w = u_lam w_phi - u_phi w_lam
            let cross = u.1.row(i)[j] * w.0.row(i)[j] - u.0.row(i)[j] * w.1.row(i)[j];
            integrand.row_mut(i)[j] = l * cross;
        }
    }
    Ok(grid.integrate(&integrand.values))
}

fn velocity_frame(
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

/// For zonal u: the pair (b(u, v, Av), b(v, u, Av)); both vanish identically.
pub fn zonal_trilinear_checks(
    psi_u_zonal: &SpectralScalar,
    psi_v: &SpectralScalar,
    t: &Transform,
) -> Result<(f64, f64)> {
    let worst = psi_u_zonal.max_abs_nonzonal();
    if worst > 1e-14 * psi_u_zonal.max_abs().max(1.0) {
        return Err(Error::NotZonal(worst));
    }
    let psi_av = stokes_power(psi_v, 1);
    let b_uv = trilinear(psi_u_zonal, psi_v, &psi_av, t)?;
    let b_vu = trilinear(psi_v, psi_u_zonal, &psi_av, t)?;
    Ok((b_uv, b_vu))
}

#[cfg(test)]
mod probe { #[allow(unused)]
    use crate::dynamics::trilinear::*;
    use crate::spectral::field::SpectralScalar;
    use num_complex::Complex64;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn probe_zonal_classes() {
        let n = 8u32;
        let t = trilinear_plan(n).unwrap();
        let mut rng = StdRng::seed_from_u64(53);
        let mut rand_sf = |zonal: bool| {
            let mut s = SpectralScalar::zeros(n);
            for m in 0..=(if zonal { 0 } else { n }) {
                for deg in m.max(1)..=n {
                    let damp = 1.0 / (1.0 + (deg * deg) as f64);
                    let re = (rng.random::<f64>() - 0.5) * damp;
                    let im = if m == 0 { 0.0 } else { (rng.random::<f64>() - 0.5) * damp };
                    s.set(deg, m, Complex64::new(re, im));
                }
            }
            s
        };
        for trial in 0..4 {
            let u_gen = rand_sf(true);
            let v = rand_sf(false);
            let av = stokes_power(&v, 1);
            let b1 = trilinear(&u_gen, &v, &av, &t).unwrap();
            let b2 = trilinear(&v, &u_gen, &av, &t).unwrap();
            // solid-body zonal u
            let mut u1 = SpectralScalar::zeros(n);
            u1.set(1, 0, Complex64::new(0.5 + trial as f64, 0.0));
            let c1 = trilinear(&u1, &v, &av, &t).unwrap();
            let c2 = trilinear(&v, &u1, &av, &t).unwrap();
            println!("trial {trial}: general-zonal b(u,v,Av)={b1:+.3e} b(v,u,Av)={b2:+.3e} | solid-body b(u,v,Av)={c1:+.3e} b(v,u,Av)={c2:+.3e}");
        }
    }
}
