use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::modes::ModeOrdering;
use crate::spectral::ops::mode_field;
use crate::spectral::SpectralScalar;

/// Temporal profile of one forcing term; 1-periodic by construction
/// (`harmonic` is an integer number of cycles per period).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TemporalProfile {
    Constant,
    Cos { harmonic: u32, phase: f64 },
    Sin { harmonic: u32, phase: f64 },
}

impl TemporalProfile {
    /// Evaluate at phase `t_frac` within the period (t mod 1).
    pub fn eval(&self, t_frac: f64) -> f64 {
        let two_pi = 2.0 * std::f64::consts::PI;
        match *self {
            TemporalProfile::Constant => 1.0,
            TemporalProfile::Cos { harmonic, phase } => {
                (two_pi * harmonic as f64 * t_frac + phase).cos()
            }
            TemporalProfile::Sin { harmonic, phase } => {
                (two_pi * harmonic as f64 * t_frac + phase).sin()
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let q = match *self {
            TemporalProfile::Constant => return Ok(()),
            TemporalProfile::Cos { harmonic, .. } | TemporalProfile::Sin { harmonic, .. } => {
                harmonic
            }
        };
        if q < 1 {
            return Err(Error::InvalidArgument(
                "temporal harmonic must be >= 1".into(),
            ));
        }
        Ok(())
    }
}

/// One mode of the deterministic force: `amplitude * profile(t) * e_mode`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ForcingTerm {
    /// 1-based index into the H basis ordering.
    pub mode: usize,
    pub amplitude: f64,
    #[serde(default = "default_profile")]
    pub temporal: TemporalProfile,
}

fn default_profile() -> TemporalProfile {
    TemporalProfile::Constant
}

/// Time-periodic deterministic force with period 1, expressed on the
/// H-orthonormal mode basis.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ForcingSpec {
    #[serde(default)]
    pub terms: Vec<ForcingTerm>,
}

impl ForcingSpec {
    pub fn empty() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn validate(&self, ordering: &ModeOrdering) -> Result<()> {
        for term in &self.terms {
            if term.mode < 1 || term.mode > ordering.len() {
                return Err(Error::ModeIndex {
                    index: term.mode,
                    max: ordering.len(),
                });
            }
            if !term.amplitude.is_finite() {
                return Err(Error::InvalidArgument("forcing amplitude not finite".into()));
            }
            term.temporal.validate()?;
        }
        Ok(())
    }

    /// All terms act on zonal (m = 0) modes.
    pub fn is_zonal(&self, ordering: &ModeOrdering) -> Result<bool> {
        for term in &self.terms {
            if ordering.mode(term.mode)?.m != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// f - g as a forcing spec (term lists concatenated with negated g).
    pub fn difference(&self, other: &ForcingSpec) -> ForcingSpec {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().map(|t| ForcingTerm {
            mode: t.mode,
            amplitude: -t.amplitude,
            temporal: t.temporal,
        }));
        ForcingSpec { terms }
    }

    /// f + scale * (g - f), used for threshold scans.
    pub fn blend(&self, other: &ForcingSpec, scale: f64) -> ForcingSpec {
        let mut terms: Vec<ForcingTerm> = self
            .terms
            .iter()
            .map(|t| ForcingTerm {
                mode: t.mode,
                amplitude: t.amplitude * (1.0 - scale),
                temporal: t.temporal,
            })
            .collect();
        terms.extend(other.terms.iter().map(|t| ForcingTerm {
            mode: t.mode,
            amplitude: t.amplitude * scale,
            temporal: t.temporal,
        }));
        // blend(f, g, s) = (1-s) f + s g = f + s (g - f)
        ForcingSpec { terms }
    }

    /// Streamfunction of f at time t (reduced mod 1).
    pub fn eval(&self, t: f64, n_trunc: u32) -> Result<SpectralScalar> {
        self.eval_phase(t - t.floor(), n_trunc)
    }

    /// Streamfunction of f at phase `t_frac` within the period.
    pub fn eval_phase(&self, t_frac: f64, n_trunc: u32) -> Result<SpectralScalar> {
        let mut psi = SpectralScalar::zeros(n_trunc);
        for term in &self.terms {
            let base = mode_field(term.mode, n_trunc)?;
            psi.axpy(term.amplitude * term.temporal.eval(t_frac), &base);
        }
        Ok(psi)
    }

    /// ||f(t)||_H at phase t_frac: mode amplitudes add coherently per mode,
    /// orthogonal modes add in quadrature.
    pub fn h_norm_at(&self, t_frac: f64) -> f64 {
        let mut modes: Vec<(usize, f64)> = Vec::with_capacity(self.terms.len());
        for term in &self.terms {
            let a = term.amplitude * term.temporal.eval(t_frac);
            match modes.iter_mut().find(|(j, _)| *j == term.mode) {
                Some((_, acc)) => *acc += a,
                None => modes.push((term.mode, a)),
            }
        }
        modes.iter().map(|(_, a)| a * a).sum::<f64>().sqrt()
    }

    /// Sup over one period of ||f(t)||_H: dense sampling (2048 points)
    /// followed by golden-section refinement around the best sample.
    pub fn sup_norm(&self) -> f64 {
        if self.terms.is_empty() {
            return 0.0;
        }
        const SAMPLES: usize = 2048;
        let mut best_t = 0.0;
        let mut best = -1.0;
        for i in 0..SAMPLES {
            let t = i as f64 / SAMPLES as f64;
            let v = self.h_norm_at(t);
            if v > best {
                best = v;
                best_t = t;
            }
        }
        let h = 1.0 / SAMPLES as f64;
        let (mut lo, mut hi) = (best_t - h, best_t + h);
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        let mut x1 = hi - phi * (hi - lo);
        let mut x2 = lo + phi * (hi - lo);
        let mut f1 = self.h_norm_at(x1 - x1.floor());
        let mut f2 = self.h_norm_at(x2 - x2.floor());
        for _ in 0..80 {
            if f1 < f2 {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + phi * (hi - lo);
                f2 = self.h_norm_at(x2 - x2.floor());
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - phi * (hi - lo);
                f1 = self.h_norm_at(x1 - x1.floor());
            }
        }
        best.max(f1).max(f2)
    }
}
