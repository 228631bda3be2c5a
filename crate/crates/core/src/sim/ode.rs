use crate::model::Model;

use super::compiled::Compiled;
use super::{require_valid, sample_times, Sample, SimConfig, SimError, Trajectory};

const BLOWUP: f64 = 1e300;

/// Classic fourth-order Runge-Kutta with fixed step `cfg.dt`.
///
/// Every interval between consecutive stops (sample times and event
/// times) is split into equal steps no longer than `dt`, so the integrator
/// lands exactly on each stop. Events fire before the sample at their time
/// is recorded.
pub fn simulate_ode(model: &Model, cfg: &SimConfig) -> Result<Trajectory, SimError> {
    cfg.check_common()?;
    if !(cfg.dt.is_finite() && cfg.dt > 0.0) {
        return Err(SimError::InvalidConfig(format!("dt must be positive, got {}", cfg.dt)));
    }
    let every = cfg.output_every.unwrap_or(cfg.dt);
    if cfg.dt > every {
        return Err(SimError::InvalidConfig(format!(
            "dt {} exceeds output_every {every}",
            cfg.dt
        )));
    }
    require_valid(model)?;
    let c = Compiled::new(model)?;

    let samples = sample_times(cfg.t_end, every);
    let mut stops: Vec<f64> = samples.clone();
    stops.extend(c.events.iter().map(|e| e.time).filter(|&t| t > 0.0 && t < cfg.t_end));
    stops.sort_by(f64::total_cmp);
    stops.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs().max(1.0));

    let mut x = c.initial.clone();
    let mut p = c.params.clone();
    let mut next_event = 0;
    let mut next_sample = 0;
    let mut rows = Vec::with_capacity(samples.len());
    let mut t = 0.0;
    let mut rk = Rk4::new(x.len());

    for &stop in &stops {
        if stop > t {
            let n = (((stop - t) / cfg.dt) - 1e-9).ceil().max(1.0) as usize;
            let h = (stop - t) / n as f64;
            for k in 0..n {
                let tk = t + k as f64 * h;
                rk.step(&c, &mut x, &p, h);
                if x.iter().any(|v| v.is_nan() || v.abs() > BLOWUP) {
                    return Err(SimError::NumericalBlowup { time: tk + h });
                }
            }
            t = stop;
        }
        while next_event < c.events.len() && c.events[next_event].time <= t + 1e-12 * t.abs().max(1.0) {
            c.fire(&c.events[next_event], &mut x, &mut p, |v| v);
            next_event += 1;
        }
        while next_sample < samples.len() && samples[next_sample] <= t + 1e-12 * t.abs().max(1.0) {
            rows.push(Sample {
                time: samples[next_sample],
                amounts: x.clone(),
            });
            next_sample += 1;
        }
    }
    Ok(Trajectory {
        species: c.species,
        rows,
    })
}

struct Rk4 {
    k: [Vec<f64>; 4],
    tmp: Vec<f64>,
}

impl Rk4 {
    fn new(n: usize) -> Self {
        Rk4 {
            k: std::array::from_fn(|_| vec![0.0; n]),
            tmp: vec![0.0; n],
        }
    }

    fn step(&mut self, c: &Compiled, x: &mut [f64], p: &[f64], h: f64) {
        let weights = [0.0, 0.5, 0.5, 1.0];
        for (stage, w) in weights.into_iter().enumerate() {
            if stage == 0 {
                self.tmp.copy_from_slice(x);
            } else {
                for (i, t) in self.tmp.iter_mut().enumerate() {
                    *t = x[i] + w * h * self.k[stage - 1][i];
                }
            }
            let k = &mut self.k[stage];
            k.iter_mut().for_each(|v| *v = 0.0);
            for r in &c.reactions {
                let rate = r.law.eval(&self.tmp, p);
                for &(i, d) in &r.delta {
                    k[i] += d * rate;
                }
            }
        }
        for (i, xi) in x.iter_mut().enumerate() {
            *xi += h / 6.0 * (self.k[0][i] + 2.0 * self.k[1][i] + 2.0 * self.k[2][i] + self.k[3][i]);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_model;

    fn decay() -> Model {
        parse_model("d = 1.0; r = d * A; A = (r,1) << A; A[100]").unwrap()
    }

    #[test]
    fn decay_matches_exponential() {
        let traj = simulate_ode(&decay(), &SimConfig::new(1.0).with_dt(0.001)).unwrap();
        let a = traj.final_amount("A").unwrap();
        assert!((a - 100.0 * (-1f64).exp()).abs() < 1e-3, "{a}");
        assert_eq!(traj.rows.len(), 1001);
    }

    #[test]
    fn sampling_contract() {
        let traj = simulate_ode(&decay(), &SimConfig::new(1.0).with_output_every(0.5)).unwrap();
        let times: Vec<f64> = traj.rows.iter().map(|r| r.time).collect();
        assert_eq!(times, [0.0, 0.5, 1.0]);
    }

    #[test]
    fn zero_rate_keeps_initial_state() {
        let m = parse_model("r = 0; A = (r,1) << A; A[7]").unwrap();
        let traj = simulate_ode(&m, &SimConfig::new(2.0).with_output_every(0.5)).unwrap();
        assert!(traj.rows.iter().all(|r| r.amounts == [7.0]));
    }

    #[test]
    fn event_applies_before_sample_at_same_time() {
        let m = parse_model("r = 0; A = (r,1) << A; event e at 0.5 { A = 3 } A[7]").unwrap();
        let traj = simulate_ode(&m, &SimConfig::new(1.0).with_output_every(0.5)).unwrap();
        let a: Vec<f64> = traj.rows.iter().map(|r| r.amounts[0]).collect();
        assert_eq!(a, [7.0, 3.0, 3.0]);
    }

    #[test]
    fn growth_blows_up() {
        let m = parse_model("r = A * A; A = (r,1) >> A; A[10]").unwrap();
        let err = simulate_ode(&m, &SimConfig::new(10.0).with_dt(0.01)).unwrap_err();
        assert!(
            matches!(err, SimError::NumericalBlowup { time } if time > 0.0 && time < 10.0),
            "{err:?}"
        );
    }

    #[test]
    fn bad_configs_are_rejected() {
        let m = decay();
        assert!(matches!(
            simulate_ode(&m, &SimConfig::new(1.0).with_dt(0.1).with_output_every(0.05)),
            Err(SimError::InvalidConfig(_))
        ));
        let invalid = parse_model("r = k * A; A = (r,1) << A; A[1]").unwrap();
        assert!(matches!(
            simulate_ode(&invalid, &SimConfig::new(1.0)),
            Err(SimError::ValidationFailed(_))
        ));
    }
}
