//! Orthonormal associated Legendre functions and their recurrences.
//!
//! `q_n^m` here is normalized so that Y_n^m = q_n^m(mu) e^{im lambda} has unit
//! L2 norm over the unit sphere: the integral of q_n^m(mu)^2 over [-1, 1] is
//! 1/(2 pi). No Condon-Shortley phase.

use num_complex::Complex64;

use crate::spectral::field::SpectralScalar;

/// Coupling coefficient eps_{n,m} = sqrt((n^2 - m^2) / (4 n^2 - 1)).
#[inline]
pub fn eps(n: u32, m: u32) -> f64 {
    let n2 = (n as f64) * (n as f64);
    let m2 = (m as f64) * (m as f64);
    ((n2 - m2) / (4.0 * n2 - 1.0)).sqrt()
}

/// Fill one latitude row of q_n^m(mu) values for all 0 <= m <= n <= n_max,
/// in the same m-major packing as `SpectralScalar` at truncation n_max.
pub fn fill_plm_row(n_max: u32, mu: f64, out: &mut [f64]) {
    let nt = n_max as usize;
    debug_assert_eq!(out.len(), (nt + 1) * (nt + 2) / 2);
    let sin_theta = (1.0 - mu * mu).sqrt();
    let q00 = 0.25_f64 / std::f64::consts::PI;
    let mut qmm = q00.sqrt();
    let mut offset = 0usize;
    for m in 0..=n_max {
        if m > 0 {
            let mf = m as f64;
            qmm *= ((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * sin_theta;
        }
        out[offset] = qmm;
        if m < n_max {
            out[offset + 1] = (2.0 * m as f64 + 3.0).sqrt() * mu * qmm;
            let mut p_prev = qmm;
            let mut p_curr = out[offset + 1];
            for n in (m + 2)..=n_max {
                let nf = n as f64;
                let mf = m as f64;
                let a = ((4.0 * nf * nf - 1.0) / (nf * nf - mf * mf)).sqrt();
                let b = ((2.0 * nf + 1.0) / (2.0 * nf - 3.0)
                    * ((nf - 1.0) * (nf - 1.0) - mf * mf)
                    / (nf * nf - mf * mf))
                    .sqrt();
                let p_next = a * mu * p_curr - b * p_prev;
                out[offset + (n - m) as usize] = p_next;
                p_prev = p_curr;
                p_curr = p_next;
            }
        }
        offset += (n_max - m + 1) as usize;
    }
}

/// Longitudinal derivative: coefficient (n, m) multiplied by i m.
pub fn d_lambda(s: &SpectralScalar) -> SpectralScalar {
    let mut out = SpectralScalar::zeros(s.n_trunc());
    d_lambda_into(s, &mut out);
    out
}

/// In-place variant of [`d_lambda`]; `out` must share the input truncation.
pub fn d_lambda_into(s: &SpectralScalar, out: &mut SpectralScalar) {
    let nt = s.n_trunc();
    debug_assert_eq!(out.n_trunc(), nt);
    for m in 0..=nt {
        for n in m..=nt {
            let i = s.index(n, m);
            let c = s.coeffs()[i];
            out.coeffs_mut()[i] = Complex64::new(-(m as f64) * c.im, (m as f64) * c.re);
        }
    }
}

/// Meridional operator cos(phi) d/d(phi) = (1 - mu^2) d/d(mu), applied in
/// spectral space. Couples degree n to n +- 1 at fixed order, so the output
/// truncation is one degree higher than the input.
pub fn cos_phi_d_phi(s: &SpectralScalar) -> SpectralScalar {
    let mut out = SpectralScalar::zeros(s.n_trunc() + 1);
    cos_phi_d_phi_into(s, &mut out);
    out
}

/// In-place variant of [`cos_phi_d_phi`]; `out` is one degree higher.
pub fn cos_phi_d_phi_into(s: &SpectralScalar, out: &mut SpectralScalar) {
    let nt = s.n_trunc();
    debug_assert_eq!(out.n_trunc(), nt + 1);
    for m in 0..=nt {
        for k in m..=(nt + 1) {
            let mut v = Complex64::new(0.0, 0.0);
            if k + 1 <= nt && k + 1 >= m + 1 {
                v += (k as f64 + 2.0) * eps(k + 1, m) * s.get(k + 1, m);
            }
            if k >= 1 && k - 1 >= m && k - 1 <= nt {
                v -= (k as f64 - 1.0) * eps(k, m) * s.get(k - 1, m);
            }
            out.set(k, m, v);
        }
    }
    // The added top degree has no m = nt+1 content from a degree-nt field.
    out.set(nt + 1, nt + 1, Complex64::new(0.0, 0.0));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::field::coeff_count;

    fn plm(n_max: u32, mu: f64) -> Vec<f64> {
        let mut row = vec![0.0; coeff_count(n_max)];
        fill_plm_row(n_max, mu, &mut row);
        row
    }

    #[test]
    fn low_degree_closed_forms() {
        let four_pi = 4.0 * std::f64::consts::PI;
        for &mu in &[-0.9, -0.3, 0.0, 0.55, 0.99] {
            let s = SpectralScalar::zeros(3);
            let row = plm(3, mu);
            let q00 = (1.0 / four_pi).sqrt();
            let q10 = (3.0 / four_pi).sqrt() * mu;
            let q11 = (3.0 / (2.0 * four_pi)).sqrt() * (1.0 - mu * mu).sqrt();
            let q20 = (5.0 / four_pi).sqrt() * 0.5 * (3.0 * mu * mu - 1.0);
            let q21 = (15.0 / (2.0 * four_pi)).sqrt() * mu * (1.0 - mu * mu).sqrt();
            let q22 = (15.0 / (8.0 * four_pi)).sqrt() * (1.0 - mu * mu);
            for (n, m, expect) in [
                (0, 0, q00),
                (1, 0, q10),
                (1, 1, q11),
                (2, 0, q20),
                (2, 1, q21),
                (2, 2, q22),
            ] {
                let got = row[s.index(n, m)];
                assert!(
                    (got - expect).abs() < 1e-14 * expect.abs().max(1.0),
                    "q_{n}^{m}({mu}): got {got}, expected {expect}"
                );
            }
        }
    }

    #[test]
    fn rows_are_orthonormal_under_gauss_quadrature() {
        use crate::spectral::grid::gauss_legendre;
        let n_max = 6u32;
        let (nodes, weights) = gauss_legendre(8);
        let rows: Vec<Vec<f64>> = nodes.iter().map(|&mu| plm(n_max, mu)).collect();
        let s = SpectralScalar::zeros(n_max);
        let two_pi = 2.0 * std::f64::consts::PI;
        for m in 0..=2u32 {
            for n1 in m..=n_max.min(m + 4) {
                for n2 in m..=n_max.min(m + 4) {
                    let dot: f64 = rows
                        .iter()
                        .zip(&weights)
                        .map(|(row, w)| w * row[s.index(n1, m)] * row[s.index(n2, m)])
                        .sum();
                    let expect = if n1 == n2 { 1.0 / two_pi } else { 0.0 };
                    assert!(
                        (dot - expect).abs() < 1e-14,
                        "<q_{n1}^{m}, q_{n2}^{m}> = {dot}, expected {expect}"
                    );
                }
            }
        }
    }

    #[test]
    fn meridional_operator_matches_finite_differences() {
        let mut s = SpectralScalar::zeros(5);
        s.set(1, 0, Complex64::new(0.8, 0.0));
        s.set(3, 2, Complex64::new(0.4, -0.2));
        s.set(5, 4, Complex64::new(-0.1, 0.05));
        let ds = cos_phi_d_phi(&s);
        // Evaluate both sides at a few latitudes for a few orders.
        for &mu in &[-0.65, 0.1, 0.72] {
            let h = 1e-6;
            let row_p = plm(6, mu + h);
            let row_m = plm(6, mu - h);
            let row_d = plm(6, mu);
            let probe = SpectralScalar::zeros(6);
            for m in 0..=4u32 {
                let mut f_p = Complex64::new(0.0, 0.0);
                let mut f_m = Complex64::new(0.0, 0.0);
                let mut g = Complex64::new(0.0, 0.0);
                for n in m..=5 {
                    let c = s.get(n, m);
                    f_p += c * row_p[probe.index(n, m)];
                    f_m += c * row_m[probe.index(n, m)];
                }
                for n in m..=6 {
                    g += ds.get(n, m) * row_d[probe.index(n, m)];
                }
                let fd = (f_p - f_m) / (2.0 * h) * (1.0 - mu * mu);
                assert!(
                    (fd - g).norm() < 1e-7,
                    "m={m}, mu={mu}: fd={fd}, spectral={g}"
                );
            }
        }
    }
}
