use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::model::Model;

use super::compiled::Compiled;
use super::{require_valid, sample_times, Sample, SimConfig, SimError, Trajectory};

/// Gillespie direct method, one trajectory per replicate, in replicate
/// order.
///
/// A propensity is 0 when its law is negative (or NaN) or a reactant has
/// fewer individuals than its stoichiometry. Values assigned to species by
/// events are rounded to the nearest integer and clamped at 0.
pub fn simulate_ssa(model: &Model, cfg: &SimConfig) -> Result<Vec<Trajectory>, SimError> {
    cfg.check_common()?;
    require_valid(model)?;
    for inst in &model.system {
        let a = inst.amount();
        if a.fract() != 0.0 || a < 0.0 {
            return Err(SimError::NonIntegerInitialAmount {
                species: inst.global_id(),
                amount: a,
            });
        }
    }
    let c = Compiled::new(model)?;
    let samples = sample_times(cfg.t_end, cfg.output_every.unwrap_or(cfg.t_end / 1000.0));
    (0..cfg.replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(r as u64);
            replicate(&c, &samples, cfg.t_end, &mut rng)
        })
        .collect()
}

fn event_value(v: f64) -> f64 {
    v.round().max(0.0)
}

fn replicate(c: &Compiled, samples: &[f64], t_end: f64, rng: &mut ChaCha8Rng) -> Result<Trajectory, SimError> {
    let mut x = c.initial.clone();
    let mut p = c.params.clone();
    let mut a = vec![0.0; c.reactions.len()];
    let mut rows = Vec::with_capacity(samples.len());
    let mut next_sample = 0;
    let mut next_event = 0;
    let mut t = 0.0;

    let record = |rows: &mut Vec<Sample>, next_sample: &mut usize, x: &[f64], before: f64, inclusive: bool| {
        while *next_sample < samples.len() {
            let s = samples[*next_sample];
            if s < before || (inclusive && s <= before) {
                rows.push(Sample {
                    time: s,
                    amounts: x.to_vec(),
                });
                *next_sample += 1;
            } else {
                break;
            }
        }
    };

    loop {
        while next_event < c.events.len() && c.events[next_event].time <= t {
            c.fire(&c.events[next_event], &mut x, &mut p, event_value);
            next_event += 1;
        }
        let boundary = c.events.get(next_event).map(|e| e.time).filter(|&te| te <= t_end);

        let mut a0 = 0.0;
        for (aj, r) in a.iter_mut().zip(&c.reactions) {
            let enough = r.needs.iter().all(|&(i, k)| x[i] >= k);
            let v = if enough { r.law.eval(&x, &p) } else { 0.0 };
            if v.is_infinite() && v > 0.0 {
                return Err(SimError::NumericalBlowup { time: t });
            }
            *aj = if v > 0.0 { v } else { 0.0 };
            a0 += *aj;
        }
        let tau = if a0 > 0.0 {
            let u: f64 = 1.0 - rng.random::<f64>();
            -u.ln() / a0
        } else {
            f64::INFINITY
        };
        let t_next = t + tau;

        if let Some(te) = boundary {
            if t_next >= te {
                record(&mut rows, &mut next_sample, &x, te, false);
                t = te;
                continue;
            }
        }
        if t_next > t_end {
            record(&mut rows, &mut next_sample, &x, t_end, true);
            break;
        }
        record(&mut rows, &mut next_sample, &x, t_next, false);

        let target = rng.random::<f64>() * a0;
        let mut acc = 0.0;
        let mut chosen = None;
        for (j, &aj) in a.iter().enumerate() {
            if aj > 0.0 {
                acc += aj;
                chosen = Some(j);
                if target < acc {
                    break;
                }
            }
        }
        let j = chosen.expect("a0 > 0 means some propensity is positive");
        for &(i, d) in &c.reactions[j].delta {
            x[i] = (x[i] + d).max(0.0);
        }
        t = t_next;
    }
    Ok(Trajectory {
        species: c.species.clone(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_model;

    #[test]
    fn same_seed_same_runs() {
        let m = parse_model("d = 1.0; r = d * A; A = (r,1) << A; A[100]").unwrap();
        let cfg = SimConfig::new(1.0).with_replicates(4).with_seed(7);
        let a = simulate_ssa(&m, &cfg).unwrap();
        assert_eq!(a, simulate_ssa(&m, &cfg).unwrap());
        assert_ne!(a[0], a[1], "replicates use different streams");
    }

    #[test]
    fn no_reactions_gives_flat_rows() {
        let m = parse_model("A = (); A[3]").unwrap();
        let runs = simulate_ssa(&m, &SimConfig::new(1.0).with_output_every(0.25)).unwrap();
        assert_eq!(runs[0].rows.len(), 5);
        assert!(runs[0].rows.iter().all(|r| r.amounts == [3.0]));
        assert_eq!(runs[0].last().time, 1.0);
    }

    #[test]
    fn fractional_initial_amount_is_refused() {
        let m = parse_model("r = 1; A = (r,1) << A; A[2.5]").unwrap();
        assert!(matches!(
            simulate_ssa(&m, &SimConfig::new(1.0)),
            Err(SimError::NonIntegerInitialAmount { .. })
        ));
    }

    #[test]
    fn adversarial_law_never_goes_negative() {
        let m = parse_model("r = 5 - A * 0; A = (r,2) << A; A[3]").unwrap();
        let runs = simulate_ssa(&m, &SimConfig::new(10.0).with_replicates(20)).unwrap();
        for run in runs {
            assert!(run.rows.iter().all(|r| r.amounts[0] >= 0.0));
            assert_eq!(run.last().amounts[0], 1.0);
        }
    }

    #[test]
    fn events_round_and_clamp() {
        let m =
            parse_model("r = 0; A = (r,1) << A; B = (r,1) << B; event e at 0.5 { A = 2.6, B = 0 - 4 } A[1] <*> B[1]")
                .unwrap();
        let runs = simulate_ssa(&m, &SimConfig::new(1.0).with_output_every(0.5)).unwrap();
        assert_eq!(runs[0].rows[1].amounts, [3.0, 0.0]);
    }
}
