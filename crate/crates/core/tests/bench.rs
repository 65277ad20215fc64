use hdab::adversary::{best_fixed, per_round_max, AdversaryKind, ConstantStream, PayoffStream};
use hdab::bench::csv::{parse_report, read_trace, report_to_string, write_trace};
use hdab::bench::{
    aggregate, run_against, run_many, run_one, run_one_logged, run_traces, Algorithm, AggregateReport, Metric,
    ReportRow, RunConfig,
};
use hdab::cover::BoxDomain;
use hdab::engine::leaves_at;
use hdab::seed::run_seed;
use std::path::Path;

fn config(algorithm: Algorithm, adversary: AdversaryKind, horizon: u64, seeds: usize) -> RunConfig {
    RunConfig {
        algorithm,
        adversary,
        horizon,
        seeds,
        ..RunConfig::default()
    }
}

#[test]
fn constant_payoff_has_zero_regret() {
    let stream = ConstantStream::new(BoxDomain::cube(2, 0.0, 1.0).unwrap(), 0.6, 1.0).unwrap();
    for algorithm in [Algorithm::Hew, Algorithm::Grid] {
        let cfg = config(algorithm, AdversaryKind::Sine2d, 2000, 1);
        let trace = run_against(&cfg, &stream, 3).unwrap();
        assert_eq!(trace.adversary, "constant");
        for p in &trace.points {
            assert_eq!(p.static_regret, 0.0);
            assert_eq!(p.dynamic_regret, 0.0);
        }
    }
}

#[test]
fn single_round_horizon() {
    let cfg = config(Algorithm::Hew, AdversaryKind::Sine1d, 1, 1);
    let (trace, log) = run_one_logged(&cfg, 0).unwrap();
    assert_eq!(trace.points.len(), 1);
    let stream = AdversaryKind::Sine1d.build(cfg.adversary_seed, run_seed(0, 0)).unwrap();
    let best = best_fixed(stream.as_ref(), 1, 4096).unwrap();
    let expected = stream.value(1, &best.point) - stream.value(1, &log[0].point);
    assert_eq!(trace.points[0].t, 1);
    assert_eq!(trace.points[0].static_regret, expected);
    assert_eq!(trace.points[0].leaves, 1);
}

#[test]
fn sine1d_regret_per_round_decays() {
    let cfg = config(Algorithm::Hew, AdversaryKind::Sine1d, 1000, 1);
    let trace = run_one(&cfg, 0).unwrap();
    let r100 = trace.at(100).unwrap().static_regret / 100.0;
    let r1000 = trace.at(1000).unwrap().static_regret / 1000.0;
    assert!(r1000 < r100, "R/t went from {r100} to {r1000}");
}

/// Recomputes both regrets from a stored action log.
fn naive_regrets(cfg: &RunConfig, seed_index: u64, log: &[hdab::bench::RoundRecord]) -> Vec<(u64, f64, f64)> {
    let stream = cfg.adversary.build(cfg.adversary_seed, run_seed(cfg.base_seed, seed_index)).unwrap();
    let stream: &dyn PayoffStream = stream.as_ref();
    let grid = cfg.oracle_grid_for(stream.domain().dim());
    let best = best_fixed(stream, cfg.horizon, grid).unwrap();
    let (mut got, mut best_sum, mut max_sum) = (0.0, 0.0, 0.0);
    log.iter()
        .map(|r| {
            assert_eq!(stream.value(r.t, &r.point), r.reward);
            got += r.reward;
            best_sum += stream.value(r.t, &best.point);
            max_sum += per_round_max(stream, r.t, grid).unwrap().value;
            (r.t, best_sum - got, max_sum - got)
        })
        .collect()
}

#[test]
fn regret_matches_naive_recomputation() {
    for adversary in [AdversaryKind::Sine1d, AdversaryKind::Sine2d, AdversaryKind::Gauss1d, AdversaryKind::Gauss2d] {
        for algorithm in [Algorithm::Hew, Algorithm::Grid] {
            let cfg = config(algorithm, adversary, 100, 1);
            let (trace, log) = run_one_logged(&cfg, 5).unwrap();
            assert_eq!(log.len(), 100);
            let naive = naive_regrets(&cfg, 5, &log);
            for p in &trace.points {
                let (t, r, d) = naive[p.t as usize - 1];
                assert_eq!(t, p.t);
                assert_eq!(p.static_regret, r, "{adversary} {algorithm:?} t={t}");
                assert_eq!(p.dynamic_regret, d, "{adversary} {algorithm:?} t={t}");
            }
        }
    }
}

#[test]
fn dynamic_regret_dominates_and_grows() {
    for adversary in [AdversaryKind::Sine1d, AdversaryKind::Sine2d, AdversaryKind::Gauss1d, AdversaryKind::Gauss2d] {
        let cfg = config(Algorithm::Hew, adversary, 5000, 1);
        let trace = run_one(&cfg, 1).unwrap();
        for p in &trace.points {
            assert!(p.dynamic_regret >= p.static_regret - 1e-9, "{adversary} t={}", p.t);
        }
        for w in trace.points.windows(2) {
            assert!(w[1].dynamic_regret >= w[0].dynamic_regret - 1e-9);
            if !adversary.label().starts_with("gauss") {
                // best response to a fixed function: regret can only shrink by grid error
                let slack = trace.grid_error * (w[1].t - w[0].t) as f64 + 1e-9;
                assert!(w[1].static_regret >= w[0].static_regret - slack);
            }
        }
    }
}

#[test]
fn leaves_follow_the_scheduler() {
    for (adversary, rho) in [(AdversaryKind::Sine1d, None), (AdversaryKind::Sine2d, None), (AdversaryKind::Gauss1d, Some(0.5))] {
        let mut cfg = config(Algorithm::Hew, adversary, 20_000, 1);
        cfg.rho = rho;
        let d = adversary.dim();
        let a = match rho {
            Some(rho) => (1.0 - rho) * d as f64 / (d as f64 + 3.0),
            None => d as f64 / (d as f64 + 2.0),
        };
        let trace = run_one(&cfg, 0).unwrap();
        for p in &trace.points {
            assert_eq!(p.leaves, leaves_at(p.t, a), "{adversary} t={}", p.t);
        }
    }
}

#[test]
fn grid_runs_report_arm_count() {
    let mut cfg = config(Algorithm::Grid, AdversaryKind::Sine2d, 100, 1);
    cfg.arms = 50;
    let trace = run_one(&cfg, 0).unwrap();
    assert!(trace.points.iter().all(|p| p.leaves == 64));
}

#[test]
fn parallel_and_serial_reports_match() {
    let mut cfg = config(Algorithm::Hew, AdversaryKind::Gauss1d, 3000, 6);
    cfg.parallel = true;
    let par = report_to_string(&run_many(&cfg).unwrap());
    cfg.parallel = false;
    let ser = report_to_string(&run_many(&cfg).unwrap());
    assert_eq!(par, ser);
}

#[test]
fn seeds_are_independent_and_reproducible() {
    for adversary in [AdversaryKind::Sine1d, AdversaryKind::Gauss1d] {
        let cfg = config(Algorithm::Hew, adversary, 2000, 1);
        let a = run_one(&cfg, 0).unwrap();
        let b = run_one(&cfg, 1).unwrap();
        let again = run_one(&cfg, 0).unwrap();
        assert_ne!(a.points, b.points);
        assert_eq!(a, again);
    }
    let a = run_one(&config(Algorithm::Hew, AdversaryKind::Sine1d, 2000, 1), 0).unwrap();
    let mut shifted = config(Algorithm::Hew, AdversaryKind::Sine1d, 2000, 1);
    shifted.base_seed = 1;
    assert_ne!(a.points, run_one(&shifted, 0).unwrap().points);
}

#[test]
fn identical_runs_give_degenerate_quantiles() {
    let cfg = config(Algorithm::Hew, AdversaryKind::Sine1d, 1000, 1);
    let t = run_one(&cfg, 0).unwrap();
    let report = aggregate(&[t.clone(), t]);
    assert!(!report.rows.is_empty());
    for r in &report.rows {
        assert_eq!(r.q05, r.q95);
        assert_eq!(r.n_seeds, 2);
    }
}

#[test]
fn sweep_produces_one_group_per_algorithm() {
    let dir = tempfile::tempdir().unwrap();
    let mut sweep = hdab::bench::config::Sweep {
        algorithms: vec![Algorithm::Hew, Algorithm::Grid],
        ..Default::default()
    };
    sweep.base.horizon = 500;
    sweep.base.seeds = 3;
    sweep.base.out_dir = dir.path().to_path_buf();
    let path = hdab::bench::cli::execute(&sweep).unwrap();
    assert_eq!(path.file_name().unwrap(), "hew-grid_sine1d.csv");
    let report = hdab::bench::csv::read_csv(&path).unwrap();
    for algo in ["hew", "grid"] {
        for metric in Metric::ALL {
            assert!(report.row(algo, metric, 500).is_some(), "{algo} {metric:?}");
        }
    }
    assert_eq!(std::fs::read_dir(dir.path().join("traces")).unwrap().count(), 6);
}

#[test]
fn report_rows_are_sorted_and_schema_is_exact() {
    let mut cfg = config(Algorithm::Grid, AdversaryKind::Sine1d, 20_000, 2);
    let mut traces = run_traces(&cfg).unwrap();
    cfg.algorithm = Algorithm::Hew;
    traces.extend(run_traces(&cfg).unwrap());
    let report = aggregate(&traces);
    let text = report_to_string(&report);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,algorithm,adversary,metric,mean,q05,q95,n_seeds"));
    let keys: Vec<(String, String, u64)> = lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            assert_eq!(f.len(), 8);
            assert!(Metric::parse(f[3]).is_some());
            (f[1].to_string(), f[3].to_string(), f[0].parse().unwrap())
        })
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(report.row("hew", Metric::StaticRegretOverT, 10_000).is_some());
    for r in &report.rows {
        assert!(r.q05 <= r.q95);
    }
}

fn sig10(x: f64) -> f64 {
    format!("{x:.9e}").parse().unwrap()
}

#[test]
fn csv_round_trip_at_ten_digits() {
    let cfg = config(Algorithm::Hew, AdversaryKind::Gauss2d, 3000, 4);
    let report = run_many(&cfg).unwrap();
    let back = parse_report(Path::new("mem.csv"), &report_to_string(&report)).unwrap();
    assert_eq!(back.rows.len(), report.rows.len());
    for (a, b) in report.rows.iter().zip(&back.rows) {
        assert_eq!((a.t, &a.algorithm, &a.adversary, a.metric, a.n_seeds), (b.t, &b.algorithm, &b.adversary, b.metric, b.n_seeds));
        assert_eq!(sig10(a.mean), b.mean);
        assert_eq!(sig10(a.q05), b.q05);
        assert_eq!(sig10(a.q95), b.q95);
    }
}

#[test]
fn small_reports() {
    assert_eq!(report_to_string(&AggregateReport::default()).lines().count(), 1);
    let one = AggregateReport {
        rows: vec![ReportRow {
            t: 10,
            algorithm: "hew".into(),
            adversary: "sine1d".into(),
            metric: Metric::Leaves,
            mean: 2.0,
            q05: 2.0,
            q95: 2.0,
            n_seeds: 1,
        }],
    };
    assert_eq!(report_to_string(&one), "t,algorithm,adversary,metric,mean,q05,q95,n_seeds\n10,hew,sine1d,leaves,2,2,2,1\n");
}

#[test]
fn traces_round_trip_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(Algorithm::Hew, AdversaryKind::Sine2d, 4000, 3);
    let traces = run_traces(&cfg).unwrap();
    for t in &traces {
        let path = dir.path().join(hdab::bench::csv::trace_file_name(t));
        write_trace(t, &path).unwrap();
        assert_eq!(&read_trace(&path).unwrap(), t);
    }
    let back = hdab::bench::csv::read_traces(dir.path()).unwrap();
    assert_eq!(report_to_string(&aggregate(&back)), report_to_string(&aggregate(&traces)));
}

#[test]
fn invalid_configs_are_rejected() {
    let mut cfg = config(Algorithm::Hew, AdversaryKind::Sine1d, 0, 1);
    assert!(run_one(&cfg, 0).unwrap_err().is_config());
    cfg.horizon = 10;
    cfg.p = Some(1.5);
    assert!(run_many(&cfg).unwrap_err().is_config());
    cfg.p = None;
    cfg.a = Some(1.0);
    cfg.horizon = 1 << 30;
    // 2^30 rounds at a = 1 would need more than the leaf cap
    assert!(run_one(&cfg, 0).unwrap_err().is_config());
}
