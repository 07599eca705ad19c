use std::collections::HashSet;

use chrono::NaiveDate;
use rand_distr::{Distribution, Gamma, Poisson};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::seed::rng_for;

/// Completions accepted by one developer on one day.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ABObservation {
    pub developer_id: String,
    pub day: NaiveDate,
    pub completions_accepted: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ABResult {
    pub mean_control: f64,
    pub mean_experiment: f64,
    pub std_control: f64,
    pub std_experiment: f64,
    /// (control, experiment).
    pub unique_developers: (usize, usize),
    pub improvement: f64,
    pub p_value: f64,
    pub t_statistic: f64,
    pub degrees_of_freedom: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WelchTest {
    pub t: f64,
    pub df: f64,
    pub p_value: f64,
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

/// Two-sided Welch unequal-variance t-test of `b` against `a`.
pub fn welch_test(a: &[f64], b: &[f64]) -> Result<WelchTest> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::Invalid("Welch test needs at least two observations per group".into()));
    }
    let (ma, va) = mean_var(a);
    let (mb, vb) = mean_var(b);
    let (sa, sb) = (va / a.len() as f64, vb / b.len() as f64);
    let se2 = sa + sb;
    if se2 == 0.0 {
        return Ok(if ma == mb {
            WelchTest { t: 0.0, df: f64::NAN, p_value: 1.0 }
        } else {
            WelchTest {
                t: (mb - ma).signum() * f64::INFINITY,
                df: f64::NAN,
                p_value: 0.0,
            }
        });
    }
    let t = (mb - ma) / se2.sqrt();
    let df = se2 * se2 / (sa * sa / (a.len() as f64 - 1.0) + sb * sb / (b.len() as f64 - 1.0));
    let dist = StudentsT::new(0.0, 1.0, df).map_err(|e| Error::Invalid(e.to_string()))?;
    let p = (2.0 * dist.sf(t.abs())).clamp(0.0, 1.0);
    Ok(WelchTest { t, df, p_value: p })
}

/// `(experiment − control) / control`.
pub fn improvement(mean_control: f64, mean_experiment: f64) -> f64 {
    (mean_experiment - mean_control) / mean_control
}

fn check_unique(obs: &[ABObservation], side: &str) -> Result<usize> {
    let mut keys = HashSet::new();
    for o in obs {
        if !keys.insert((o.developer_id.as_str(), o.day)) {
            return Err(Error::Invalid(format!(
                "{side}: duplicate observation for {} on {}",
                o.developer_id, o.day
            )));
        }
    }
    Ok(obs.iter().map(|o| o.developer_id.as_str()).collect::<HashSet<_>>().len())
}

pub fn ab_compare(control: &[ABObservation], experiment: &[ABObservation]) -> Result<ABResult> {
    if control.is_empty() || experiment.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let dc = check_unique(control, "control")?;
    let de = check_unique(experiment, "experiment")?;
    let xs = |o: &[ABObservation]| o.iter().map(|o| o.completions_accepted as f64).collect::<Vec<_>>();
    let (c, e) = (xs(control), xs(experiment));
    let w = welch_test(&c, &e)?;
    let (mc, vc) = mean_var(&c);
    let (me, ve) = mean_var(&e);
    if mc == 0.0 {
        return Err(Error::Invalid("control mean is zero; improvement undefined".into()));
    }
    Ok(ABResult {
        mean_control: mc,
        mean_experiment: me,
        std_control: vc.sqrt(),
        std_experiment: ve.sqrt(),
        unique_developers: (dc, de),
        improvement: improvement(mc, me),
        p_value: w.p_value,
        t_statistic: w.t,
        degrees_of_freedom: w.df,
    })
}

/// True iff the result is significant at `level` (e.g. 0.95).
pub fn significance_gate(result: &ABResult, level: f64) -> bool {
    result.p_value <= 1.0 - level
}

/// Synthetic usage log: each developer has a Gamma-distributed daily
/// acceptance rate; each (developer, day) count is Poisson around it, scaled
/// by `1 + uplift` in the experiment arm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbSimulation {
    pub developers_per_arm: usize,
    pub days: usize,
    pub mean_rate: f64,
    /// Gamma shape of the per-developer rate; larger is more homogeneous.
    pub rate_shape: f64,
    pub uplift: f64,
}

impl Default for AbSimulation {
    fn default() -> Self {
        AbSimulation {
            developers_per_arm: 500,
            days: 14,
            mean_rate: 18.0,
            rate_shape: 4.0,
            uplift: 0.0,
        }
    }
}

pub fn simulate_ab(sim: &AbSimulation, seed: u64) -> Result<(Vec<ABObservation>, Vec<ABObservation>)> {
    if sim.mean_rate <= 0.0 || sim.rate_shape <= 0.0 || sim.uplift <= -1.0 {
        return Err(Error::Invalid("simulation rates must be positive".into()));
    }
    let mut rng = rng_for(seed, "ab-simulation");
    let gamma = Gamma::new(sim.rate_shape, sim.mean_rate / sim.rate_shape).map_err(|e| Error::Invalid(e.to_string()))?;
    let start = NaiveDate::from_ymd_opt(2021, 3, 1).expect("valid date");
    let mut arm = |name: &str, scale: f64| -> Result<Vec<ABObservation>> {
        let mut out = Vec::with_capacity(sim.developers_per_arm * sim.days);
        for d in 0..sim.developers_per_arm {
            let rate = gamma.sample(&mut rng) * scale;
            let pois = Poisson::new(rate.max(1e-9)).map_err(|e| Error::Invalid(e.to_string()))?;
            for day in 0..sim.days {
                out.push(ABObservation {
                    developer_id: format!("{name}-{d:04}"),
                    day: start + chrono::Days::new(day as u64),
                    completions_accepted: pois.sample(&mut rng) as u64,
                });
            }
        }
        Ok(out)
    };
    let control = arm("control", 1.0)?;
    let experiment = arm("experiment", 1.0 + sim.uplift)?;
    Ok((control, experiment))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obs(xs: &[u64]) -> Vec<ABObservation> {
        let day = NaiveDate::from_ymd_opt(2021, 3, 1).unwrap();
        xs.iter()
            .enumerate()
            .map(|(i, &x)| ABObservation {
                developer_id: format!("d{i}"),
                day,
                completions_accepted: x,
            })
            .collect()
    }

    #[test]
    fn identical_groups() {
        let r = ab_compare(&obs(&[3, 5, 7]), &obs(&[3, 5, 7])).unwrap();
        assert_eq!(r.improvement, 0.0);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn constant_groups() {
        let r = ab_compare(&obs(&[4, 4]), &obs(&[4, 4])).unwrap();
        assert_eq!(r.p_value, 1.0);
        let r = ab_compare(&obs(&[4, 4]), &obs(&[5, 5])).unwrap();
        assert_eq!(r.p_value, 0.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ab_compare(&[], &obs(&[1, 2])).is_err());
        let mut dup = obs(&[1, 2]);
        dup[1].developer_id = "d0".into();
        assert!(ab_compare(&dup, &obs(&[1, 2])).is_err());
    }

    #[test]
    fn gate_threshold() {
        let mut r = ab_compare(&obs(&[1, 2, 3]), &obs(&[2, 3, 4])).unwrap();
        for (p, want) in [(0.0238, true), (0.0494, true), (0.05, true), (0.06, false)] {
            r.p_value = p;
            assert_eq!(significance_gate(&r, 0.95), want, "p={p}");
        }
    }

    #[test]
    fn simulation_is_deterministic() {
        let sim = AbSimulation { developers_per_arm: 10, days: 3, ..Default::default() };
        assert_eq!(simulate_ab(&sim, 4).unwrap(), simulate_ab(&sim, 4).unwrap());
        let (c, _) = simulate_ab(&sim, 4).unwrap();
        assert_eq!(c.len(), 30);
    }
}
