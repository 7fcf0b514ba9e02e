use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::params::ModelParams;
use super::stepper::Stepper;
use crate::diagnostics::energy::{energy, EnergyLedger, LedgerRow};
use crate::error::{Error, Result};
use crate::state::StatePair;

/// Runs are aborted once `‖ξ‖_E` exceeds this.
pub const DIVERGENCE_NORM: f64 = 1e8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegratorMeta {
    pub dt: f64,
    pub steps: usize,
    pub sample_stride: usize,
    pub scheme: String,
    pub order: u32,
    pub dealiasing: String,
}

/// Samples of one run of the discrete semigroup.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub params: ModelParams,
    pub initial: StatePair,
    pub times: Vec<f64>,
    /// Sampled states aligned with `times` (empty when states were not kept).
    pub states: Vec<StatePair>,
    pub ledger: EnergyLedger,
    pub meta: IntegratorMeta,
    pub final_state: StatePair,
}

impl TrajectoryRecord {
    pub fn final_time(&self) -> f64 {
        self.final_state.time
    }

    /// Indices of samples with `a ≤ t ≤ b` (with a small slack for rounding).
    pub fn window(&self, a: f64, b: f64) -> Vec<usize> {
        let slack = 1e-9 * (1.0 + b.abs());
        (0..self.times.len()).filter(|&i| self.times[i] >= a - slack && self.times[i] <= b + slack).collect()
    }
}

/// A run that blew up, with everything recorded before the blow-up.
#[derive(Debug, Clone)]
pub struct Diverged {
    pub time: f64,
    pub reason: String,
    pub partial: Box<TrajectoryRecord>,
}

impl std::fmt::Display for Diverged {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "diverged at t = {}: {}", self.time, self.reason)
    }
}

impl std::error::Error for Diverged {}

impl From<Diverged> for Error {
    fn from(d: Diverged) -> Self {
        Error::Divergence { time: d.time, reason: d.reason }
    }
}

/// Reusable integrator: step coefficients and norm weights are computed once.
#[derive(Debug, Clone)]
pub struct Integrator {
    stepper: Stepper,
    stride: usize,
    keep_states: bool,
    w_energy: Vec<f64>,
    w_alpha: Vec<f64>,
    w_gamma: Vec<f64>,
}

impl Integrator {
    pub fn new(params: &ModelParams, dt: f64) -> Result<Self> {
        let stepper = Stepper::new(params, dt)?;
        let g = params.grid();
        let w = g.parseval_weight();
        let lam = g.eigenvalues();
        Ok(Self {
            stepper,
            stride: 1,
            keep_states: true,
            w_energy: lam.iter().map(|l| w * (1.0 + l)).collect(),
            w_alpha: vec![params.alpha * w; lam.len()],
            w_gamma: lam.iter().map(|l| params.gamma * w * l.powf(params.theta)).collect(),
        })
    }

    pub fn stride(mut self, stride: usize) -> Self {
        self.stride = stride.max(1);
        self
    }

    pub fn keep_states(mut self, keep: bool) -> Self {
        self.keep_states = keep;
        self
    }

    pub fn dt(&self) -> f64 {
        self.stepper.dt()
    }

    pub fn params(&self) -> &ModelParams {
        self.stepper.params()
    }

    fn energy_norm_sq(&self, xi: &StatePair) -> f64 {
        let u: f64 = xi.u.coeffs().iter().zip(&self.w_energy).map(|(c, w)| w * c.norm_sqr()).sum();
        let v: f64 = xi.v.coeffs().iter().map(|c| c.norm_sqr()).sum::<f64>() * xi.grid().parseval_weight();
        u + v
    }

    fn rates(&self, xi: &StatePair) -> (f64, f64) {
        let mut a = 0.0;
        let mut g = 0.0;
        for ((c, wa), wg) in xi.v.coeffs().iter().zip(&self.w_alpha).zip(&self.w_gamma) {
            let m = c.norm_sqr();
            a += wa * m;
            g += wg * m;
        }
        (a, g)
    }

    /// Advances `xi0` (projected onto the active band) for `round(T/dt)` steps.
    pub fn run(&self, xi0: &StatePair, t_final: f64) -> std::result::Result<TrajectoryRecord, Diverged> {
        let dt = self.dt();
        let params = self.params().clone();
        let n_steps = if t_final > 0.0 { (t_final / dt).round() as usize } else { 0 };
        let y0 = xi0.active_projection();
        let t0 = y0.time;
        let mut rec = TrajectoryRecord {
            params: params.clone(),
            initial: y0.clone(),
            times: vec![t0],
            states: if self.keep_states { vec![y0.clone()] } else { Vec::new() },
            ledger: EnergyLedger { rows: vec![energy(&y0, &params)] },
            meta: IntegratorMeta {
                dt,
                steps: n_steps,
                sample_stride: self.stride,
                scheme: "ETD2RK (exact linear propagator, explicit nonlinear part)".into(),
                order: 2,
                dealiasing: "3x-padded products, 2/3-band projection".into(),
            },
            final_state: y0.clone(),
        };
        let mut y = y0;
        let (mut ra, mut rg) = self.rates(&y);
        let (mut ca, mut cg) = (0.0, 0.0);
        for n in 1..=n_steps {
            let next = match self.stepper.step(&y) {
                Ok(s) => s,
                Err(e) => {
                    rec.final_state = y.clone();
                    return Err(Diverged { time: t0 + n as f64 * dt, reason: e.to_string(), partial: Box::new(rec) });
                }
            };
            y = next;
            y.time = t0 + n as f64 * dt;
            let norm = self.energy_norm_sq(&y).sqrt();
            if !(norm <= DIVERGENCE_NORM) {
                rec.final_state = y.clone();
                return Err(Diverged {
                    time: y.time,
                    reason: format!("energy norm {norm:e} exceeds {DIVERGENCE_NORM:e}"),
                    partial: Box::new(rec),
                });
            }
            let (na, ng) = self.rates(&y);
            ca += 0.5 * dt * (ra + na);
            cg += 0.5 * dt * (rg + ng);
            ra = na;
            rg = ng;
            if n % self.stride == 0 || n == n_steps {
                let row = LedgerRow { cum_diss_alpha: ca, cum_diss_gamma: cg, ..energy(&y, &params) };
                rec.times.push(y.time);
                rec.ledger.rows.push(row);
                if self.keep_states {
                    rec.states.push(y.clone());
                }
            }
        }
        rec.final_state = y;
        Ok(rec)
    }
}

/// `S(T)ξ₀` sampled every `stride` steps, with the energy ledger filled at each sample.
pub fn integrate(
    xi0: &StatePair,
    t_final: f64,
    dt: f64,
    stride: usize,
    params: &ModelParams,
) -> std::result::Result<TrajectoryRecord, Diverged> {
    let integ = Integrator::new(params, dt).map_err(|e| Diverged {
        time: xi0.time,
        reason: e.to_string(),
        partial: Box::new(empty_record(xi0, params, dt)),
    })?;
    integ.stride(stride).run(xi0, t_final)
}

fn empty_record(xi0: &StatePair, params: &ModelParams, dt: f64) -> TrajectoryRecord {
    TrajectoryRecord {
        params: params.clone(),
        initial: xi0.clone(),
        times: vec![],
        states: vec![],
        ledger: EnergyLedger::default(),
        meta: IntegratorMeta {
            dt,
            steps: 0,
            sample_stride: 1,
            scheme: String::new(),
            order: 2,
            dealiasing: String::new(),
        },
        final_state: xi0.clone(),
    }
}

/// Runs several initial states in parallel with one shared integrator.
pub fn integrate_ensemble(
    integ: &Integrator,
    ics: &[StatePair],
    t_final: f64,
) -> Vec<std::result::Result<TrajectoryRecord, Diverged>> {
    ics.par_iter().map(|xi| integ.run(xi, t_final)).collect()
}

/// Convenience: `S(t)ξ` only.
pub fn evolve(xi: &StatePair, t: f64, integ: &Integrator) -> Result<StatePair> {
    let st = integ.clone().keep_states(false).stride(usize::MAX);
    Ok(st.run(xi, t)?.final_state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::SpectralField;
    use crate::grid::GridSpec;
    use crate::random::{random_field, SpectrumSpec};

    fn setup() -> (ModelParams, StatePair) {
        let g = GridSpec::torus(1, 32).unwrap();
        let p = ModelParams::standard(g).with_forcing(SpectralField::mode(g, &[1], 0.5).unwrap());
        let u = random_field(g, &SpectrumSpec::new(5, -2.0).amplitude(0.3));
        let v = random_field(g, &SpectrumSpec::new(6, -1.0).amplitude(0.3));
        (p, StatePair::new(u, v).unwrap())
    }

    #[test]
    fn zero_horizon_keeps_only_initial_state() {
        let (p, xi) = setup();
        let rec = integrate(&xi, 0.0, 0.01, 1, &p).unwrap();
        assert_eq!(rec.times, vec![0.0]);
        assert_eq!(rec.states.len(), 1);
    }

    #[test]
    fn semigroup_composition_is_bit_identical() {
        let (p, xi) = setup();
        let whole = integrate(&xi, 1.0, 0.01, 10, &p).unwrap();
        let half = integrate(&xi, 0.5, 0.01, 10, &p).unwrap();
        let again = integrate(&half.final_state, 0.5, 0.01, 10, &p).unwrap();
        assert_eq!(whole.final_state.u, again.final_state.u);
        assert_eq!(whole.final_state.v, again.final_state.v);
    }

    #[test]
    fn cumulative_dissipation_is_monotone() {
        let (p, xi) = setup();
        let rec = integrate(&xi, 1.0, 0.01, 5, &p).unwrap();
        for w in rec.ledger.rows.windows(2) {
            assert!(w[1].cum_diss() >= w[0].cum_diss());
            assert!(w[1].time > w[0].time);
        }
        assert_eq!(rec.times.len(), rec.ledger.len());
    }

    #[test]
    fn blow_up_returns_partial_record() {
        let g = GridSpec::torus(1, 32).unwrap();
        let p = ModelParams::standard(g);
        let u = SpectralField::mode(g, &[1], 50.0).unwrap();
        let xi = StatePair::new(u, SpectralField::zeros(g)).unwrap();
        let err = integrate(&xi, 1.0, 0.05, 1, &p).unwrap_err();
        assert!(err.time > 0.0);
        assert!(!err.partial.times.is_empty());
    }
}
