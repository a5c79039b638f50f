use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::forcing::{ForcingSpec, TemporalProfile};
use crate::error::{Error, Result};
use crate::spectral::field::{GridScalar, SpectralScalar};
use crate::spectral::legendre::{cos_phi_d_phi_into, d_lambda_into};
use crate::spectral::modes::ModeOrdering;
use crate::spectral::ops::{eigenvalue, velocity_norm, NormOrder};
use crate::spectral::transform::{Transform, TransformScratch};

/// Parameters of the deterministic flow.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SolverParams {
    /// Viscosity (> 0).
    pub nu: f64,
    /// Rotation rate Omega; the Coriolis coefficient is 2 Omega sin(phi).
    pub omega: f64,
    /// Spectral truncation degree.
    pub n_trunc: u32,
    /// Fixed steps per unit forcing period; dt = 1 / steps_per_period.
    pub steps_per_period: u32,
    /// Test hook: drop the Jacobian term, leaving the diagonal linear flow.
    #[serde(default)]
    pub disable_nonlinear: bool,
}

impl SolverParams {
    pub fn validate(&self) -> Result<()> {
        // nu = 0 is admitted here for the inviscid conservation oracles; the
        // config layer is stricter and demands nu > 0 for production runs.
        if !(self.nu >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "nu must be >= 0 (got {})",
                self.nu
            )));
        }
        if self.omega < 0.0 || !self.omega.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "omega must be finite and >= 0 (got {})",
                self.omega
            )));
        }
        if self.n_trunc < 1 {
            return Err(Error::InvalidTruncation(self.n_trunc));
        }
        if self.steps_per_period < 1 {
            return Err(Error::InvalidArgument(
                "steps_per_period must be >= 1".into(),
            ));
        }
        Ok(())
    }

    pub fn dt(&self) -> f64 {
        1.0 / self.steps_per_period as f64
    }
}

/// State of the deterministic flow: spectral vorticity plus time held as
/// (whole periods, steps within the period) so kick instants land exactly on
/// integers and re-running a span is bitwise reproducible.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    pub omega_hat: SpectralScalar,
    period: u64,
    step: u32,
}

impl FlowState {
    pub fn rest(n_trunc: u32) -> Self {
        Self {
            omega_hat: SpectralScalar::zeros(n_trunc),
            period: 0,
            step: 0,
        }
    }

    /// State at t = 0 from a mean-free vorticity field.
    pub fn from_vorticity(omega_hat: SpectralScalar) -> Result<Self> {
        omega_hat.check_mean_free(1e-12)?;
        Ok(Self {
            omega_hat,
            period: 0,
            step: 0,
        })
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn step_in_period(&self) -> u32 {
        self.step
    }

    pub(crate) fn set_clock(&mut self, period: u64, step: u32) {
        self.period = period;
        self.step = step;
    }

    /// Current time in units of the forcing period.
    pub fn t(&self, dt: f64) -> f64 {
        self.period as f64 + self.step as f64 * dt
    }

    /// Total dt-steps taken since t = 0.
    pub fn total_steps(&self, steps_per_period: u32) -> u64 {
        self.period * steps_per_period as u64 + self.step as u64
    }

    /// True at integer times (kick instants).
    pub fn at_integer_time(&self) -> bool {
        self.step == 0
    }
}

/// Norms along a computed trajectory, one row per step (first row is the
/// initial state). Snapshots are stored only when requested.
#[derive(Debug, Clone, Default)]
pub struct TrajectoryRecord {
    pub times: Vec<f64>,
    pub h: Vec<f64>,
    pub v: Vec<f64>,
    pub h2: Vec<f64>,
    pub snapshots: Vec<(f64, SpectralScalar)>,
}

impl TrajectoryRecord {
    fn push(&mut self, t: f64, omega: &SpectralScalar) {
        self.times.push(t);
        self.h.push(velocity_norm(omega, NormOrder::H));
        self.v.push(velocity_norm(omega, NormOrder::V));
        self.h2.push(velocity_norm(omega, NormOrder::H2));
    }
}

struct ForcingSource {
    packed_index: usize,
    /// Vorticity-space coefficient increment per unit amplitude: the velocity
    /// mode e_j contributes -sqrt(lambda_j) at its harmonic, split into the
    /// cos/sin channels of the complex coefficient.
    unit: Complex64,
    amplitude: f64,
    temporal: TemporalProfile,
}

/// Time stepper owning the per-thread scratch for one flow. The transform
/// plan is shared (immutable) between steppers; a `FlowState` is owned by
/// exactly one stepper call at a time.
pub struct Stepper {
    params: SolverParams,
    plan: Arc<Transform>,
    exp_full: Vec<f64>,
    exp_half: Vec<f64>,
    /// d omega/dt += i * coriolis[j] * omega[j]  (zero on zonal and n=0 entries)
    coriolis: Vec<f64>,
    /// -1/lambda_n (0 at n = 0), mapping vorticity to streamfunction.
    inv_neg_lambda: Vec<f64>,
    forcing: Vec<ForcingSource>,
    // Scratch
    k1: SpectralScalar,
    k2: SpectralScalar,
    k3: SpectralScalar,
    k4: SpectralScalar,
    stage: Option<SpectralScalar>,
    psi: SpectralScalar,
    deriv_lo: SpectralScalar,
    deriv_hi: SpectralScalar,
    g_psi_lam: GridScalar,
    g_psi_mu: GridScalar,
    g_omega_lam: GridScalar,
    g_omega_mu: GridScalar,
    tscratch: TransformScratch,
}

impl Stepper {
    pub fn new(params: SolverParams, plan: Arc<Transform>, forcing: &ForcingSpec) -> Result<Self> {
        params.validate()?;
        if plan.n_field() < params.n_trunc {
            return Err(Error::Dimension(format!(
                "plan truncation {} below solver truncation {}",
                plan.n_field(),
                params.n_trunc
            )));
        }
        plan.check_dealias(params.n_trunc)?;
        let ordering = ModeOrdering::new(params.n_trunc)?;
        forcing.validate(&ordering)?;

        let probe = SpectralScalar::zeros(params.n_trunc);
        let len = probe.len();
        let mut exp_full = vec![0.0; len];
        let mut exp_half = vec![0.0; len];
        let mut coriolis = vec![0.0; len];
        let mut inv_neg_lambda = vec![0.0; len];
        let dt = params.dt();
        for m in 0..=params.n_trunc {
            for n in m..=params.n_trunc {
                let i = probe.index(n, m);
                let lam = eigenvalue(n);
                exp_full[i] = (-params.nu * lam * dt).exp();
                exp_half[i] = (-params.nu * lam * dt * 0.5).exp();
                if n >= 1 {
                    inv_neg_lambda[i] = -1.0 / lam;
                    coriolis[i] = 2.0 * params.omega * m as f64 / lam;
                }
            }
        }

        let mut sources = Vec::with_capacity(forcing.terms.len());
        for term in &forcing.terms {
            let h = ordering.mode(term.mode)?;
            let scale = -h.eigenvalue().sqrt();
            let unit = if h.m == 0 {
                Complex64::new(scale, 0.0)
            } else {
                match h.parity {
                    crate::spectral::modes::Parity::Cos => {
                        Complex64::new(scale / std::f64::consts::SQRT_2, 0.0)
                    }
                    crate::spectral::modes::Parity::Sin => {
                        Complex64::new(0.0, -scale / std::f64::consts::SQRT_2)
                    }
                }
            };
            sources.push(ForcingSource {
                packed_index: probe.index(h.n, h.m),
                unit,
                amplitude: term.amplitude,
                temporal: term.temporal,
            });
        }

        let grid = plan.grid();
        let tscratch = TransformScratch::new(&plan);
        Ok(Self {
            params,
            k1: probe.clone(),
            k2: probe.clone(),
            k3: probe.clone(),
            k4: probe.clone(),
            stage: Some(probe.clone()),
            psi: probe.clone(),
            deriv_lo: SpectralScalar::zeros(params.n_trunc),
            deriv_hi: SpectralScalar::zeros(params.n_trunc + 1),
            g_psi_lam: GridScalar::zeros(grid.nlat, grid.nlon),
            g_psi_mu: GridScalar::zeros(grid.nlat, grid.nlon),
            g_omega_lam: GridScalar::zeros(grid.nlat, grid.nlon),
            g_omega_mu: GridScalar::zeros(grid.nlat, grid.nlon),
            exp_full,
            exp_half,
            coriolis,
            inv_neg_lambda,
            forcing: sources,
            plan,
            tscratch,
        })
    }

    pub fn params(&self) -> &SolverParams {
        &self.params
    }

    pub fn plan(&self) -> &Arc<Transform> {
        &self.plan
    }

    /// Stiff-free part of d omega/dt: -J(psi, omega) - 2 Omega psi_lambda + g_omega(t).
    /// Diffusion is applied exactly by the integrating factor in `step`.
    fn explicit_rhs(&mut self, omega: &SpectralScalar, t_frac: f64, slot: usize) -> Result<()> {
        // psi = Delta^{-1} omega
        for (p, (&o, &f)) in self
            .psi
            .coeffs_mut()
            .iter_mut()
            .zip(omega.coeffs().iter().zip(&self.inv_neg_lambda))
        {
            *p = o * f;
        }

        let out = match slot {
            0 => &mut self.k1,
            1 => &mut self.k2,
            2 => &mut self.k3,
            _ => &mut self.k4,
        };

        if self.params.disable_nonlinear {
            for c in out.coeffs_mut() {
                *c = Complex64::new(0.0, 0.0);
            }
        } else {
            // Jacobian by the transform method on the dealiased grid.
            d_lambda_into(&self.psi, &mut self.deriv_lo);
            self.plan
                .synthesize_into(&self.deriv_lo, &mut self.g_psi_lam, &mut self.tscratch)?;
            d_lambda_into(omega, &mut self.deriv_lo);
            self.plan
                .synthesize_into(&self.deriv_lo, &mut self.g_omega_lam, &mut self.tscratch)?;
            cos_phi_d_phi_into(&self.psi, &mut self.deriv_hi);
            self.plan
                .synthesize_into(&self.deriv_hi, &mut self.g_psi_mu, &mut self.tscratch)?;
            cos_phi_d_phi_into(omega, &mut self.deriv_hi);
            self.plan
                .synthesize_into(&self.deriv_hi, &mut self.g_omega_mu, &mut self.tscratch)?;
            let grid = self.plan.grid();
            for i in 0..grid.nlat {
                let inv_cos2 = 1.0 / (1.0 - grid.nodes[i] * grid.nodes[i]);
                let psi_lam = self.g_psi_lam.row(i);
                let omega_mu = self.g_omega_mu.row(i);
                let omega_lam = self.g_omega_lam.row(i);
                // J accumulates into the psi_mu buffer (last use of this row).
                let row = self.g_psi_mu.row_mut(i);
                for k in 0..grid.nlon {
                    row[k] =
                        (psi_lam[k] * omega_mu[k] - omega_lam[k] * row[k]) * inv_cos2;
                }
            }
            self.plan
                .analyze_into(&self.g_psi_mu, out, &mut self.tscratch)?;
            // rhs = -J(psi, omega) + ...
            for c in out.coeffs_mut() {
                *c = -*c;
            }
        }

        // Coriolis: -2 Omega d_lambda psi = +i (2 Omega m / lambda) omega.
        if self.params.omega != 0.0 {
            for ((c, &f), &o) in out
                .coeffs_mut()
                .iter_mut()
                .zip(&self.coriolis)
                .zip(omega.coeffs())
            {
                c.re -= f * o.im;
                c.im += f * o.re;
            }
        }

        for src in &self.forcing {
            let a = src.amplitude * src.temporal.eval(t_frac);
            out.coeffs_mut()[src.packed_index] += src.unit * a;
        }
        Ok(())
    }

    /// One fixed step of integrating-factor RK4. Diffusion enters through the
    /// exact per-mode factors; the Jacobian, Coriolis and forcing terms are
    /// integrated classically in the transformed variable.
    pub fn step(&mut self, state: &mut FlowState) -> Result<()> {
        if state.omega_hat.n_trunc() != self.params.n_trunc {
            return Err(Error::Dimension(format!(
                "state truncation {} does not match solver truncation {}",
                state.omega_hat.n_trunc(),
                self.params.n_trunc
            )));
        }
        let dt = self.params.dt();
        let t0 = state.step as f64 * dt;

        self.explicit_rhs(&state.omega_hat, t0, 0)?;
        let mut stage = self.stage.take().expect("stage buffer in use");
        // stage = E_half (omega + dt/2 k1)
        for i in 0..stage.len() {
            stage.coeffs_mut()[i] =
                (state.omega_hat.coeffs()[i] + 0.5 * dt * self.k1.coeffs()[i]) * self.exp_half[i];
        }
        if let Err(e) = self.explicit_rhs(&stage, t0 + 0.5 * dt, 1) {
            self.stage = Some(stage);
            return Err(e);
        }
        // stage = E_half omega + dt/2 k2
        for i in 0..stage.len() {
            stage.coeffs_mut()[i] = state.omega_hat.coeffs()[i] * self.exp_half[i]
                + 0.5 * dt * self.k2.coeffs()[i];
        }
        if let Err(e) = self.explicit_rhs(&stage, t0 + 0.5 * dt, 2) {
            self.stage = Some(stage);
            return Err(e);
        }
        // stage = E_full omega + dt E_half k3
        for i in 0..stage.len() {
            stage.coeffs_mut()[i] = state.omega_hat.coeffs()[i] * self.exp_full[i]
                + dt * self.k3.coeffs()[i] * self.exp_half[i];
        }
        let last = self.explicit_rhs(&stage, t0 + dt, 3);
        self.stage = Some(stage);
        last?;

        for i in 0..state.omega_hat.len() {
            let acc = state.omega_hat.coeffs()[i] * self.exp_full[i]
                + (dt / 6.0)
                    * (self.k1.coeffs()[i] * self.exp_full[i]
                        + 2.0 * (self.k2.coeffs()[i] + self.k3.coeffs()[i]) * self.exp_half[i]
                        + self.k4.coeffs()[i]);
            state.omega_hat.coeffs_mut()[i] = acc;
        }

        state.step += 1;
        if state.step == self.params.steps_per_period {
            state.step = 0;
            state.period += 1;
        }

        if !state.omega_hat.is_finite() {
            return Err(Error::BlowUp {
                step: state.total_steps(self.params.steps_per_period),
                t: state.t(dt),
                chain: None,
            });
        }
        Ok(())
    }

    /// Advance by whole periods, recording norms at every step.
    pub fn advance_periods(
        &mut self,
        state: &mut FlowState,
        periods: u64,
    ) -> Result<TrajectoryRecord> {
        self.advance_steps(state, periods * self.params.steps_per_period as u64, None)
    }

    /// Advance to an aligned target time (a whole number of dt-steps ahead).
    pub fn advance_to(&mut self, state: &mut FlowState, t_target: f64) -> Result<TrajectoryRecord> {
        let dt = self.params.dt();
        let from = state.t(dt);
        if t_target < from - 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "target time {t_target} precedes current time {from}"
            )));
        }
        let steps_f = (t_target - from) / dt;
        let steps = steps_f.round();
        if (steps_f - steps).abs() > 1e-6 {
            return Err(Error::Misaligned {
                target: t_target,
                from,
                dt,
            });
        }
        self.advance_steps(state, steps as u64, None)
    }

    /// Advance by dt-steps; `snapshot_every` stores the state every k steps
    /// (and at the end).
    pub fn advance_steps(
        &mut self,
        state: &mut FlowState,
        steps: u64,
        snapshot_every: Option<u64>,
    ) -> Result<TrajectoryRecord> {
        let dt = self.params.dt();
        let mut record = TrajectoryRecord::default();
        record.push(state.t(dt), &state.omega_hat);
        if snapshot_every.is_some() {
            record.snapshots.push((state.t(dt), state.omega_hat.clone()));
        }
        for i in 0..steps {
            self.step(state)?;
            record.push(state.t(dt), &state.omega_hat);
            if let Some(every) = snapshot_every {
                if (i + 1) % every == 0 || i + 1 == steps {
                    record
                        .snapshots
                        .push((state.t(dt), state.omega_hat.clone()));
                }
            }
        }
        Ok(record)
    }

    /// Full tendency d omega/dt = -J(psi, omega) - 2 Omega psi_lambda
    /// + nu Delta omega + g_omega(t), at the state's current time.
    pub fn vorticity_rhs(&mut self, state: &FlowState) -> Result<SpectralScalar> {
        let t_frac = state.step as f64 * self.params.dt();
        self.explicit_rhs(&state.omega_hat, t_frac, 0)?;
        let mut out = self.k1.clone();
        let nt = self.params.n_trunc;
        for m in 0..=nt {
            for n in m..=nt {
                let i = out.index(n, m);
                let c = state.omega_hat.coeffs()[i];
                out.coeffs_mut()[i] -= self.params.nu * eigenvalue(n) * c;
            }
        }
        Ok(out)
    }
}
