//! Finite samples of the attractor and the set distances used to probe it.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::dynamics::io::{read_states, write_states};
use crate::dynamics::{evolve, Integrator, ModelParams, TrajectoryRecord};
use crate::error::{Error, Result};
use crate::state::{EnergyLevel, StatePair};

/// `sup_{a∈A} inf_{b∈B} ‖a − b‖_E` over finite sets.
pub fn hausdorff_semidist(a: &[StatePair], b: &[StatePair]) -> Result<f64> {
    hausdorff_semidist_in(a, b, EnergyLevel::E0)
}

pub fn hausdorff_semidist_in(a: &[StatePair], b: &[StatePair], level: EnergyLevel) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Domain("Hausdorff semidistance of an empty set".into()));
    }
    let mut sup: f64 = 0.0;
    for x in a {
        let inf = b.iter().map(|y| x.sub(y).norm_sq(level)).fold(f64::INFINITY, f64::min);
        sup = sup.max(inf);
    }
    Ok(sup.sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AbsorbingReport {
    /// `max_i sup_{t ≥ T_i/2} ‖ξ_i(t)‖_{E₁}`, inflated by the margin.
    pub radius: f64,
    pub tail_radii: Vec<f64>,
    /// First sample time after which each trajectory stays inside the ball.
    pub entry_times: Vec<f64>,
    pub margin: f64,
}

/// Absorbing ball in `E₁` read off the tails of an ensemble.
pub fn absorbing_radius(records: &[TrajectoryRecord], margin: f64) -> Result<AbsorbingReport> {
    if records.is_empty() {
        return Err(Error::Domain("empty ensemble".into()));
    }
    let mut tails = Vec::new();
    let mut norms = Vec::new();
    for r in records {
        if r.states.is_empty() {
            return Err(Error::Domain("record has no stored states".into()));
        }
        let n: Vec<f64> = r.states.iter().map(|s| s.norm(EnergyLevel::E1)).collect();
        if !n.iter().all(|x| x.is_finite()) {
            return Err(Error::Domain("unbounded trajectory in ensemble".into()));
        }
        let half = 0.5 * (r.times[0] + r.final_time());
        tails.push(r.states.iter().zip(&n).filter(|(s, _)| s.time >= half).map(|(_, x)| *x).fold(0.0, f64::max));
        norms.push(n);
    }
    let radius = (1.0 + margin) * tails.iter().cloned().fold(0.0, f64::max);
    let entry_times = records
        .iter()
        .zip(&norms)
        .map(|(r, n)| match n.iter().rposition(|x| *x > radius) {
            None => r.times[0],
            Some(j) => r.times[(j + 1).min(r.times.len() - 1)],
        })
        .collect();
    Ok(AbsorbingReport { radius, tail_radii: tails, entry_times, margin })
}

/// States harvested from long runs after a burn-in: a sample-based
/// approximation of the attractor, not a verified invariant set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttractorSample {
    pub params: ModelParams,
    pub states: Vec<StatePair>,
    pub burn_in: f64,
    /// Time between harvested states of one trajectory.
    pub spacing: f64,
}

impl AttractorSample {
    /// Runs each IC to `burn_in + duration` and keeps every state at
    /// `t ≥ burn_in` that falls on the `spacing` grid.
    pub fn harvest(integ: &Integrator, ics: &[StatePair], burn_in: f64, duration: f64, spacing: f64) -> Result<Self> {
        let stride = ((spacing / integ.dt()).round() as usize).max(1);
        let local = integ.clone().stride(stride).keep_states(true);
        let mut states = Vec::new();
        for ic in ics {
            let start = evolve(ic, burn_in, integ)?;
            let rec = local.run(&start, duration)?;
            states.extend(rec.states);
        }
        Ok(Self { params: integ.params().clone(), states, burn_in, spacing: stride as f64 * integ.dt() })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn max_norm(&self, level: EnergyLevel) -> f64 {
        self.states.iter().map(|s| s.norm(level)).fold(0.0, f64::max)
    }

    /// `dist_E(S(t)·sample, sample)`: small when the sample is (nearly) invariant.
    pub fn semi_invariance_defect(&self, integ: &Integrator, t: f64) -> Result<f64> {
        let moved = self.states.iter().map(|s| evolve(s, t, integ)).collect::<Result<Vec<_>>>()?;
        hausdorff_semidist(&moved, &self.states)
    }

    /// Stored in the trajectory coefficient-dump format.
    pub fn write_to<W: Write>(&self, w: W) -> Result<()> {
        write_states(w, &self.states)
    }

    pub fn read_from<R: Read>(r: R, params: ModelParams, burn_in: f64, spacing: f64) -> Result<Self> {
        Ok(Self { params, states: read_states(r)?, burn_in, spacing })
    }
}

/// `dist_E(S(t)·ics, sample)` at each requested time (times increasing).
pub fn attraction_profile(ics: &[StatePair], sample: &[StatePair], integ: &Integrator, times: &[f64]) -> Result<Vec<f64>> {
    let mut current: Vec<StatePair> = ics.to_vec();
    let mut now = 0.0;
    let mut out = Vec::new();
    for &t in times {
        if t < now {
            return Err(Error::Domain("times must be increasing".into()));
        }
        current = current.iter().map(|s| evolve(s, t - now, integ)).collect::<Result<Vec<_>>>()?;
        now = t;
        out.push(hausdorff_semidist(&current, sample)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::integrate;
    use crate::field::SpectralField;
    use crate::grid::GridSpec;
    use crate::nonlinearity::NonlinearitySpec;

    fn st(g: GridSpec, a: f64) -> StatePair {
        StatePair::new(SpectralField::mode(g, &[1], a).unwrap(), SpectralField::zeros(g)).unwrap()
    }

    #[test]
    fn semidistance_examples() {
        let g = GridSpec::torus(1, 8).unwrap();
        let (z, x) = (StatePair::zeros(g), st(g, 1.0));
        assert_eq!(hausdorff_semidist(std::slice::from_ref(&x), std::slice::from_ref(&x)).unwrap(), 0.0);
        assert!((hausdorff_semidist(std::slice::from_ref(&z), std::slice::from_ref(&x)).unwrap() - x.energy_norm()).abs() < 1e-14);
        let ab = hausdorff_semidist(&[z.clone(), x.clone()], std::slice::from_ref(&z)).unwrap();
        let ba = hausdorff_semidist(std::slice::from_ref(&z), &[z.clone(), x.clone()]).unwrap();
        assert!(ab > 0.0 && ba == 0.0);
        assert!(hausdorff_semidist(&[], &[z]).is_err());
    }

    #[test]
    fn linear_radius_is_the_particular_solution() {
        // f = 0, g = G cos x: u_p = G cos x / 1, ‖(u_p, 0)‖_{E₁}.
        let g = GridSpec::torus(1, 16).unwrap();
        let forcing = SpectralField::mode(g, &[1], 0.7).unwrap();
        let p = ModelParams::standard(g).with_nonlinearity(NonlinearitySpec::zero()).with_forcing(forcing.clone());
        let recs: Vec<_> =
            [0.0, 3.0].iter().map(|a| integrate(&st(g, *a), 40.0, 0.01, 10, &p).unwrap()).collect();
        let rep = absorbing_radius(&recs, 0.0).unwrap();
        let want = StatePair::new(forcing, SpectralField::zeros(g)).unwrap().norm(EnergyLevel::E1);
        assert!((rep.radius - want).abs() < 1e-6 * want, "{} vs {want}", rep.radius);
    }

    #[test]
    fn sample_roundtrips_through_dump() {
        let g = GridSpec::torus(1, 16).unwrap();
        let p = ModelParams::standard(g);
        let integ = Integrator::new(&p, 0.01).unwrap();
        let s = AttractorSample::harvest(&integ, &[st(g, 0.5)], 1.0, 1.0, 0.25).unwrap();
        assert_eq!(s.len(), 5);
        let mut buf = Vec::new();
        s.write_to(&mut buf).unwrap();
        let back = AttractorSample::read_from(&buf[..], p, s.burn_in, s.spacing).unwrap();
        assert_eq!(back.states, s.states);
    }
}
