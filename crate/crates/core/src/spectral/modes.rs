use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Real-harmonic component selector. `Sin` is forbidden for m = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Cos,
    Sin,
}

/// One real spherical-harmonic mode (degree n, order m, cos/sin component).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HarmonicIndex {
    pub n: u32,
    pub m: u32,
    pub parity: Parity,
}

impl HarmonicIndex {
    pub fn new(n: u32, m: u32, parity: Parity) -> Result<Self> {
        if m > n {
            return Err(Error::InvalidArgument(format!(
                "harmonic order m={m} exceeds degree n={n}"
            )));
        }
        if m == 0 && parity == Parity::Sin {
            return Err(Error::InvalidArgument(
                "sin component does not exist for m = 0".into(),
            ));
        }
        Ok(Self { n, m, parity })
    }

    /// Eigenvalue n(n+1) of the Stokes operator on this mode.
    pub fn eigenvalue(&self) -> f64 {
        (self.n as u64 * (self.n as u64 + 1)) as f64
    }
}

/// Enumeration of the H-orthonormal basis for truncation N: all (n, m, parity)
/// with 1 <= n <= N, sorted degree-major, order-minor, cos before sin.
///
/// Indices are 1-based: j = 1..=J with J = N(N+2). The degree-0 mode is
/// excluded; streamfunctions are mean-free.
#[derive(Debug, Clone)]
pub struct ModeOrdering {
    n_trunc: u32,
    modes: Vec<HarmonicIndex>,
}

impl ModeOrdering {
    pub fn new(n_trunc: u32) -> Result<Self> {
        if n_trunc < 1 {
            return Err(Error::InvalidTruncation(n_trunc));
        }
        let mut modes = Vec::with_capacity((n_trunc * (n_trunc + 2)) as usize);
        for n in 1..=n_trunc {
            modes.push(HarmonicIndex {
                n,
                m: 0,
                parity: Parity::Cos,
            });
            for m in 1..=n {
                modes.push(HarmonicIndex {
                    n,
                    m,
                    parity: Parity::Cos,
                });
                modes.push(HarmonicIndex {
                    n,
                    m,
                    parity: Parity::Sin,
                });
            }
        }
        debug_assert_eq!(modes.len(), (n_trunc * (n_trunc + 2)) as usize);
        Ok(Self { n_trunc, modes })
    }

    pub fn n_trunc(&self) -> u32 {
        self.n_trunc
    }

    /// Number of modes J = N(N+2).
    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Mode at 1-based index j.
    pub fn mode(&self, j: usize) -> Result<HarmonicIndex> {
        if j < 1 || j > self.modes.len() {
            return Err(Error::ModeIndex {
                index: j,
                max: self.modes.len(),
            });
        }
        Ok(self.modes[j - 1])
    }

    /// Eigenvalue lambda_j = n_j(n_j+1) of mode j (1-based).
    pub fn eigenvalue(&self, j: usize) -> Result<f64> {
        Ok(self.mode(j)?.eigenvalue())
    }

    pub fn iter(&self) -> impl Iterator<Item = &HarmonicIndex> {
        self.modes.iter()
    }
}
