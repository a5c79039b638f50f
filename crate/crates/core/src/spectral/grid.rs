use crate::error::{Error, Result};

/// Gauss-Legendre latitude x uniform longitude grid on the unit sphere.
///
/// `nodes` are the sin-latitude values mu_i (roots of the Legendre polynomial
/// P_nlat), stored south to north, with quadrature weights summing to 2.
#[derive(Debug, Clone)]
pub struct GaussGrid {
    pub nlat: usize,
    pub nlon: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussGrid {
    /// Longitude of column index j.
    pub fn longitude(&self, j: usize) -> f64 {
        2.0 * std::f64::consts::PI * j as f64 / self.nlon as f64
    }

    /// Surface integral of grid values by Gauss-Legendre x trapezoid quadrature.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.nlat * self.nlon);
        let lon_weight = 2.0 * std::f64::consts::PI / self.nlon as f64;
        let mut total = 0.0;
        for i in 0..self.nlat {
            let row = &values[i * self.nlon..(i + 1) * self.nlon];
            let s: f64 = row.iter().sum();
            total += self.weights[i] * s;
        }
        total * lon_weight
    }

    /// Smallest latitude/longitude counts that dealias quadratic products at
    /// truncation n.
    pub fn dealias_requirement(n_trunc: u32) -> (usize, usize) {
        let three_n = 3 * n_trunc as usize + 1;
        (three_n.div_ceil(2), three_n)
    }

    pub fn check_dealias(&self, n_trunc: u32) -> Result<()> {
        let (need_lat, need_lon) = Self::dealias_requirement(n_trunc);
        if self.nlat < need_lat || self.nlon < need_lon {
            return Err(Error::Dealiasing {
                trunc: n_trunc,
                nlat: self.nlat,
                nlon: self.nlon,
                need_lat,
                need_lon,
            });
        }
        Ok(())
    }
}

/// Build the smallest grid that dealiases quadratic products at truncation
/// `n_trunc`, scaled by `oversample` (>= 1). The longitude count is rounded up
/// to a 5-smooth integer so the FFT stays in fast mixed-radix kernels.
pub fn make_grid(n_trunc: u32, oversample: f64) -> Result<GaussGrid> {
    if n_trunc < 1 {
        return Err(Error::InvalidTruncation(n_trunc));
    }
    if !(oversample >= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "oversample factor must be >= 1 (got {oversample})"
        )));
    }
    let (min_lat, min_lon) = GaussGrid::dealias_requirement(n_trunc);
    let nlat = (min_lat as f64 * oversample).ceil() as usize;
    let nlon = next_5_smooth((min_lon as f64 * oversample).ceil() as usize);
    let (nodes, weights) = gauss_legendre(nlat);
    Ok(GaussGrid {
        nlat,
        nlon,
        nodes,
        weights,
    })
}

/// Smallest integer >= x whose prime factors are all in {2, 3, 5}.
fn next_5_smooth(x: usize) -> usize {
    let mut n = x.max(1);
    loop {
        let mut r = n;
        for p in [2, 3, 5] {
            while r % p == 0 {
                r /= p;
            }
        }
        if r == 1 {
            return n;
        }
        n += 1;
    }
}

/// Nodes (ascending) and weights of the n-point Gauss-Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev initial guess, refined by Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                let (p2, d2) = legendre_and_derivative(n, x);
                dp = d2;
                x -= p2 / d2;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Guess enumerates from the north; store ascending in mu.
        nodes[i] = -x;
        weights[i] = w;
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[m - 1] = 0.0;
        let (_, d) = legendre_and_derivative(n, 0.0);
        weights[m - 1] = 2.0 / (d * d);
    }
    (nodes, weights)
}

/// Legendre polynomial P_n(x) and derivative P_n'(x) by three-term recurrence.
fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    // P_n'(x) = n (x P_n - P_{n-1}) / (x^2 - 1)
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
