//! Seeded regret experiments.
//!
//! A run plays one learner against one payoff stream for `T` rounds and
//! records realised static and dynamic regret at log-spaced checkpoints.
//! Runs over many seeds are aggregated into per-checkpoint means and
//! `[.05, .95]` empirical quantiles of `R(t)/t` and `D(t)/t`.

pub mod cli;
pub mod config;
pub mod csv;

use std::collections::BTreeMap;
use std::path::PathBuf;

use rayon::prelude::*;

use crate::adversary::{best_fixed, per_round_max, AdversaryKind, PayoffStream};
use crate::cover::BoxDomain;
use crate::engine::{
    hew_dynamic_preset, hew_preset, GridExp3, Hda, HdaConfig, Learner, PointSampling, Schedule, MAX_DEPTH,
};
use crate::error::{Error, Result};
use crate::estimate::EstimatorKind;
use crate::seed::{mix, run_seed};
use crate::simplex::RegularizerKind;

pub use config::{Algorithm, EstimatorChoice, RunConfig};

// learner streams are decorrelated from adversary streams sharing a run seed
const LEARNER_STREAM: u64 = 0x004C_4541_524E_4552;

/// One checkpoint of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct TracePoint {
    pub t: u64,
    /// `R(t) = sum_{s<=t} u_s(x*) - u_s(x_s)`.
    pub static_regret: f64,
    /// `D(t) = sum_{s<=t} max u_s - u_s(x_s)`.
    pub dynamic_regret: f64,
    pub cumulative_reward: f64,
    /// Leaves (or arms) used at round `t`.
    pub leaves: usize,
}

/// Regret trajectory of one seeded run.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretTrace {
    pub algorithm: String,
    pub adversary: String,
    pub seed_index: u64,
    /// Oracle resolution bound: grid cell diameter times the declared
    /// Lipschitz constant (zero for closed-form oracles).
    pub grid_error: f64,
    pub points: Vec<TracePoint>,
}

impl RegretTrace {
    pub fn at(&self, t: u64) -> Option<&TracePoint> {
        self.points.iter().find(|p| p.t == t)
    }
}

/// One round of a logged run.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord {
    pub t: u64,
    pub point: Vec<f64>,
    pub leaf: usize,
    pub reward: f64,
}

/// Checkpoint rounds: `n` geometrically spaced rounds in `[1, T]`, every
/// power of ten up to `T`, and `T` itself.
pub fn checkpoint_rounds(horizon: u64, n: usize) -> Vec<u64> {
    let horizon = horizon.max(1);
    let mut rounds = vec![horizon];
    if n > 1 {
        let log_t = (horizon as f64).ln();
        rounds.extend((0..n).map(|i| {
            let t = (log_t * i as f64 / (n - 1) as f64).exp().round() as u64;
            t.clamp(1, horizon)
        }));
    }
    let mut p = 1u64;
    while p <= horizon {
        rounds.push(p);
        p = p.saturating_mul(10);
    }
    rounds.sort_unstable();
    rounds.dedup();
    rounds
}

/// Resolved learner parameters for an HDA-family run in dimension `d`.
pub fn resolve_hda(config: &RunConfig, domain: BoxDomain, seed: u64) -> Result<HdaConfig> {
    let d = domain.dim();
    let mut preset = match config.rho {
        Some(rho) => hew_dynamic_preset(d, rho)?,
        None => hew_preset(d),
    };
    if let Some(p) = config.p {
        preset.schedule.p = p;
    }
    if let Some(a) = config.a {
        preset.schedule.a = a;
    }
    if let Some(g) = config.gamma0 {
        preset.schedule.gamma0 = g;
    }
    let schedule = Schedule::new(preset.schedule.p, preset.schedule.gamma0, preset.schedule.a)?;
    let (regularizer, estimator) = match config.algorithm {
        Algorithm::Hew => (RegularizerKind::Negentropy, EstimatorKind::Iwe { bound: 1.0 }),
        Algorithm::Hda => (
            config.regularizer,
            match config.estimator {
                EstimatorChoice::Iwe => EstimatorKind::Iwe { bound: 1.0 },
                EstimatorChoice::Iwe3 => EstimatorKind::Iwe3 {
                    scale: config.gamma_e,
                    decay: config.gamma_decay,
                },
            },
        ),
        Algorithm::Grid => {
            return Err(Error::config("algo", "grid runs have no HDA schedule"));
        }
    };
    Ok(HdaConfig {
        domain,
        schedule,
        regularizer,
        estimator,
        sampling: PointSampling::Uniform,
        initial_depth: 0,
        seed,
    })
}

fn build_learner(config: &RunConfig, stream: &dyn PayoffStream, seed: u64) -> Result<Box<dyn Learner>> {
    let domain = stream.domain().clone();
    match config.algorithm {
        Algorithm::Grid => Ok(Box::new(GridExp3::new(
            &domain,
            config.arms,
            config.gamma0.unwrap_or(1.0),
            stream.bound(),
            seed,
        )?)),
        Algorithm::Hew | Algorithm::Hda => {
            let mut hda = resolve_hda(config, domain, seed)?;
            if let EstimatorKind::Iwe { bound } = &mut hda.estimator {
                *bound = stream.bound();
            }
            if crate::engine::depth_at(config.horizon, hda.schedule.a) > MAX_DEPTH {
                return Err(Error::config(
                    "a",
                    format!("schedule needs more than 2^{MAX_DEPTH} leaves by round {}", config.horizon),
                ));
            }
            Ok(Box::new(Hda::new(hda)?))
        }
    }
}

fn grid_error(stream: &dyn PayoffStream, grid_n: usize) -> f64 {
    if stream.analytic_best_fixed(1).is_some() {
        return 0.0;
    }
    let dom = stream.domain();
    let cell = dom
        .lo()
        .iter()
        .zip(dom.hi())
        .map(|(l, h)| ((h - l) / (grid_n - 1) as f64).powi(2))
        .sum::<f64>()
        .sqrt();
    cell * stream.lipschitz()
}

/// Plays one seeded run.
pub fn run_one(config: &RunConfig, seed_index: u64) -> Result<RegretTrace> {
    simulate(config, seed_index, None)
}

/// Plays one seeded run and also returns every round's action and reward.
pub fn run_one_logged(config: &RunConfig, seed_index: u64) -> Result<(RegretTrace, Vec<RoundRecord>)> {
    let mut log = Vec::with_capacity(config.horizon as usize);
    let trace = simulate(config, seed_index, Some(&mut log))?;
    Ok((trace, log))
}

/// Plays one seeded run against an explicit payoff stream instead of the
/// configured adversary.
pub fn run_against(config: &RunConfig, stream: &dyn PayoffStream, seed_index: u64) -> Result<RegretTrace> {
    config.validate()?;
    simulate_stream(config, stream, seed_index, None)
}

fn simulate(config: &RunConfig, seed_index: u64, log: Option<&mut Vec<RoundRecord>>) -> Result<RegretTrace> {
    config.validate()?;
    let seed = run_seed(config.base_seed, seed_index);
    let stream = config.adversary.build(config.adversary_seed, seed)?;
    simulate_stream(config, stream.as_ref(), seed_index, log)
}

fn simulate_stream(
    config: &RunConfig,
    stream: &dyn PayoffStream,
    seed_index: u64,
    mut log: Option<&mut Vec<RoundRecord>>,
) -> Result<RegretTrace> {
    let seed = run_seed(config.base_seed, seed_index);
    let mut learner = build_learner(config, stream, mix(seed, LEARNER_STREAM))?;
    let grid_n = config.oracle_grid_for(stream.domain().dim());

    let horizon = config.horizon;
    let best = best_fixed(stream, horizon, grid_n)?;
    let stationary = stream.is_stationary();
    let stationary_max = if stationary {
        Some(per_round_max(stream, 1, grid_n)?.value)
    } else {
        None
    };

    let checkpoints = checkpoint_rounds(horizon, config.checkpoints);
    let mut next = checkpoints.iter().copied().peekable();
    let mut points = Vec::with_capacity(checkpoints.len());
    let (mut cum_reward, mut cum_best, mut cum_max) = (0.0, 0.0, 0.0);

    for t in 1..=horizon {
        let action = learner.act()?;
        let leaves = learner.leaves();
        let reward = crate::adversary::evaluate(stream, t, &action.point)?;
        let best_reward = if stationary { best.value } else { stream.value(t, &best.point) };
        let max_reward = match stationary_max {
            Some(v) => v,
            None => per_round_max(stream, t, grid_n)?.value,
        };
        cum_reward += reward;
        cum_best += best_reward;
        cum_max += max_reward;
        learner.update(reward)?;

        if let Some(log) = log.as_deref_mut() {
            log.push(RoundRecord {
                t,
                point: action.point,
                leaf: action.leaf,
                reward,
            });
        }
        if next.peek() == Some(&t) {
            next.next();
            points.push(TracePoint {
                t,
                static_regret: cum_best - cum_reward,
                dynamic_regret: cum_max - cum_reward,
                cumulative_reward: cum_reward,
                leaves,
            });
        }
    }

    Ok(RegretTrace {
        algorithm: config.algorithm.label().to_string(),
        adversary: stream.name().to_string(),
        seed_index,
        grid_error: grid_error(stream, grid_n),
        points,
    })
}

/// Runs every seed of `config`, in parallel when `config.parallel` is set.
pub fn run_traces(config: &RunConfig) -> Result<Vec<RegretTrace>> {
    config.validate()?;
    let seeds: Vec<u64> = (0..config.seeds as u64).collect();
    if config.parallel {
        seeds.par_iter().map(|&i| run_one(config, i)).collect()
    } else {
        seeds.iter().map(|&i| run_one(config, i)).collect()
    }
}

/// Runs every seed and aggregates the traces.
pub fn run_many(config: &RunConfig) -> Result<AggregateReport> {
    Ok(aggregate(&run_traces(config)?))
}

/// Aggregated metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Metric {
    DynamicRegretOverT,
    Leaves,
    StaticRegretOverT,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::DynamicRegretOverT, Metric::Leaves, Metric::StaticRegretOverT];

    pub fn label(self) -> &'static str {
        match self {
            Metric::StaticRegretOverT => "static_regret_over_t",
            Metric::DynamicRegretOverT => "dynamic_regret_over_t",
            Metric::Leaves => "leaves",
        }
    }

    pub fn parse(s: &str) -> Option<Metric> {
        Metric::ALL.into_iter().find(|m| m.label() == s)
    }

    fn of(self, p: &TracePoint) -> f64 {
        match self {
            Metric::StaticRegretOverT => p.static_regret / p.t as f64,
            Metric::DynamicRegretOverT => p.dynamic_regret / p.t as f64,
            Metric::Leaves => p.leaves as f64,
        }
    }
}

/// One CSV row: a metric at one checkpoint across seeds.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub t: u64,
    pub algorithm: String,
    pub adversary: String,
    pub metric: Metric,
    pub mean: f64,
    pub q05: f64,
    pub q95: f64,
    pub n_seeds: usize,
}

/// Cross-seed summary, rows sorted by `(algorithm, metric, t, adversary)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AggregateReport {
    pub rows: Vec<ReportRow>,
}

impl AggregateReport {
    pub fn merge(mut self, other: AggregateReport) -> AggregateReport {
        self.rows.extend(other.rows);
        self.sort();
        self
    }

    pub fn sort(&mut self) {
        self.rows.sort_by(|a, b| {
            (&a.algorithm, a.metric.label(), a.t, &a.adversary).cmp(&(&b.algorithm, b.metric.label(), b.t, &b.adversary))
        });
    }

    pub fn row(&self, algorithm: &str, metric: Metric, t: u64) -> Option<&ReportRow> {
        self.rows
            .iter()
            .find(|r| r.algorithm == algorithm && r.metric == metric && r.t == t)
    }
}

/// Empirical quantile with linear interpolation between order statistics.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of an empty sample");
    let h = (sorted.len() - 1) as f64 * q.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Aggregates traces grouped by `(algorithm, adversary)` over the
/// checkpoints shared by every trace of the group.
pub fn aggregate(traces: &[RegretTrace]) -> AggregateReport {
    let mut groups: BTreeMap<(&str, &str), Vec<&RegretTrace>> = BTreeMap::new();
    for tr in traces {
        groups
            .entry((tr.algorithm.as_str(), tr.adversary.as_str()))
            .or_default()
            .push(tr);
    }
    let mut report = AggregateReport::default();
    for ((algorithm, adversary), group) in groups {
        let common: Vec<u64> = group[0]
            .points
            .iter()
            .map(|p| p.t)
            .filter(|t| group.iter().all(|tr| tr.at(*t).is_some()))
            .collect();
        for t in common {
            for metric in Metric::ALL {
                let mut values: Vec<f64> = group.iter().map(|tr| metric.of(tr.at(t).unwrap())).collect();
                let mean = values.iter().sum::<f64>() / values.len() as f64;
                values.sort_by(f64::total_cmp);
                report.rows.push(ReportRow {
                    t,
                    algorithm: algorithm.to_string(),
                    adversary: adversary.to_string(),
                    metric,
                    mean,
                    q05: quantile(&values, 0.05),
                    q95: quantile(&values, 0.95),
                    n_seeds: values.len(),
                });
            }
        }
    }
    report.sort();
    report
}

/// Default output directory: `$HDAB_OUT`, else `hdab_out`.
pub fn default_out_dir() -> PathBuf {
    std::env::var_os("HDAB_OUT")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("hdab_out"))
}

impl AdversaryKind {
    /// Default oracle grid: 4096 points for `d = 1`, 512 per axis for `d = 2`.
    pub fn default_oracle_grid(self) -> usize {
        default_oracle_grid(self.dim())
    }
}

pub(crate) fn default_oracle_grid(d: usize) -> usize {
    match d {
        1 => 4096,
        2 => 512,
        _ => 64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checkpoints_include_powers_of_ten_and_horizon() {
        let c = checkpoint_rounds(100_000, 100);
        assert_eq!(c.first(), Some(&1));
        assert_eq!(c.last(), Some(&100_000));
        for p in [10, 100, 1000, 10_000, 100_000] {
            assert!(c.contains(&p));
        }
        assert!(c.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(checkpoint_rounds(1, 100), vec![1]);
        assert_eq!(checkpoint_rounds(50, 1), vec![1, 10, 50]);
    }

    #[test]
    fn quantiles_interpolate() {
        let v = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(quantile(&v, 0.0), 1.0);
        assert_eq!(quantile(&v, 0.5), 3.0);
        assert_eq!(quantile(&v, 1.0), 5.0);
        assert!((quantile(&v, 0.05) - 1.2).abs() < 1e-12);
        assert_eq!(quantile(&[7.0], 0.95), 7.0);
    }

    fn point(t: u64, r: f64) -> TracePoint {
        TracePoint {
            t,
            static_regret: r,
            dynamic_regret: r,
            cumulative_reward: 0.0,
            leaves: 1,
        }
    }

    #[test]
    fn aggregate_uses_common_checkpoints() {
        let mk = |seed, pts| RegretTrace {
            algorithm: "hew".into(),
            adversary: "sine1d".into(),
            seed_index: seed,
            grid_error: 0.0,
            points: pts,
        };
        let traces = vec![
            mk(0, vec![point(1, 1.0), point(10, 2.0)]),
            mk(1, vec![point(1, 0.0), point(5, 1.0), point(10, 4.0)]),
        ];
        let report = aggregate(&traces);
        assert_eq!(report.rows.len(), 2 * Metric::ALL.len());
        let r = report.row("hew", Metric::StaticRegretOverT, 10).unwrap();
        assert!((r.mean - 0.3).abs() < 1e-15);
        assert_eq!(r.n_seeds, 2);
        assert!(r.q05 <= r.q95);
        assert!(report.row("hew", Metric::StaticRegretOverT, 5).is_none());
    }
}
