//! Command-line front end of the `hdab` binary.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::config::Sweep;
use super::csv::{read_traces, trace_file_name, write_csv, write_trace};
use super::{aggregate, default_out_dir, run_traces, Metric};
use crate::error::{Error, Result};

/// Exit status for configuration errors (including argument errors).
pub const EXIT_CONFIG: i32 = 1;
/// Exit status for failures while running.
pub const EXIT_RUNTIME: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "hdab", version, about = "Regret benchmarks for dual-averaging bandits on continuous domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run seeded experiments and write an aggregate CSV.
    Run(Box<RunArgs>),
    /// Aggregate a directory of per-run trace files.
    Report(ReportArgs),
    /// Run a quick numerical self-check.
    Selftest,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Algorithms, comma separated: hew, hda, grid.
    #[arg(long)]
    algo: Option<String>,
    /// sine1d, sine2d, gauss1d or gauss2d.
    #[arg(long)]
    adversary: Option<String>,
    #[arg(long)]
    horizon: Option<String>,
    #[arg(long)]
    seeds: Option<String>,
    #[arg(long)]
    base_seed: Option<String>,
    #[arg(long)]
    adversary_seed: Option<String>,
    /// Learning-rate exponent, in (0, 1).
    #[arg(long, allow_negative_numbers = true)]
    p: Option<String>,
    /// Scheduler exponent, in [0, 1].
    #[arg(long, allow_negative_numbers = true)]
    a: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    gamma0: Option<String>,
    /// Use the dynamic-regret tuning with this rho in [0, 1).
    #[arg(long, allow_negative_numbers = true)]
    rho: Option<String>,
    /// Arms of the grid baseline.
    #[arg(long)]
    arms: Option<String>,
    /// negentropy or logbarrier (hda only).
    #[arg(long)]
    regularizer: Option<String>,
    /// iwe or iwe3 (hda only).
    #[arg(long)]
    estimator: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    gamma_e: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    gamma_decay: Option<String>,
    /// Oracle grid points per axis.
    #[arg(long)]
    oracle_grid: Option<String>,
    /// Number of log-spaced checkpoints.
    #[arg(long)]
    checkpoints: Option<String>,
    /// Run seeds one after another.
    #[arg(long)]
    serial: bool,
    /// Output directory (default: $HDAB_OUT or ./hdab_out).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Config file of `key = value` lines; its values override flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// Directory of trace CSV files.
    #[arg(long)]
    traces: PathBuf,
    /// Output CSV (default: <out dir>/report.csv).
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn sweep(&self) -> Result<Sweep> {
        let mut sweep = Sweep::default();
        let flags = [
            ("algo", &self.algo),
            ("adversary", &self.adversary),
            ("horizon", &self.horizon),
            ("seeds", &self.seeds),
            ("base_seed", &self.base_seed),
            ("adversary_seed", &self.adversary_seed),
            ("p", &self.p),
            ("a", &self.a),
            ("gamma0", &self.gamma0),
            ("rho", &self.rho),
            ("arms", &self.arms),
            ("regularizer", &self.regularizer),
            ("estimator", &self.estimator),
            ("gamma_e", &self.gamma_e),
            ("gamma_decay", &self.gamma_decay),
            ("oracle_grid", &self.oracle_grid),
            ("checkpoints", &self.checkpoints),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                sweep.set(key, v)?;
            }
        }
        if self.serial {
            sweep.base.parallel = false;
        }
        if let Some(out) = &self.out {
            sweep.base.out_dir = out.clone();
        }
        if let Some(path) = &self.config {
            sweep.apply_file(path)?;
        }
        sweep.validate()?;
        Ok(sweep)
    }
}

/// Runs a sweep, writing traces and the aggregate CSV; returns the CSV path.
pub fn execute(sweep: &Sweep) -> Result<PathBuf> {
    sweep.validate()?;
    let out_dir = &sweep.base.out_dir;
    let trace_dir = out_dir.join("traces");
    let mut all = Vec::new();
    for config in sweep.configs() {
        let traces = run_traces(&config)?;
        for tr in &traces {
            write_trace(tr, &trace_dir.join(trace_file_name(tr)))?;
        }
        all.extend(traces);
    }
    let report = aggregate(&all);
    let path = out_dir.join(format!("{}.csv", sweep.label()));
    write_csv(&report, &path)?;

    let horizon = sweep.base.horizon;
    let mut stdout = std::io::stdout().lock();
    for algo in &sweep.algorithms {
        let r = report.row(algo.label(), Metric::StaticRegretOverT, horizon);
        let d = report.row(algo.label(), Metric::DynamicRegretOverT, horizon);
        if let (Some(r), Some(d)) = (r, d) {
            let _ = writeln!(
                stdout,
                "{} {} T={} seeds={}: R/T={:.6} [{:.6}, {:.6}]  D/T={:.6}",
                algo.label(),
                sweep.base.adversary.label(),
                horizon,
                r.n_seeds,
                r.mean,
                r.q05,
                r.q95,
                d.mean
            );
        }
    }
    let _ = writeln!(stdout, "wrote {}", path.display());
    Ok(path)
}

fn report(args: &ReportArgs) -> Result<PathBuf> {
    let traces = read_traces(&args.traces)?;
    let out = args.out.clone().unwrap_or_else(|| default_out_dir().join("report.csv"));
    write_csv(&aggregate(&traces), &out)?;
    println!("aggregated {} traces into {}", traces.len(), out.display());
    Ok(out)
}

fn selftest() -> i32 {
    let checks = crate::selftest::run();
    let mut failed = 0;
    for c in &checks {
        println!("{} {} ({})", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        failed += usize::from(!c.passed);
    }
    println!("{} checks, {} failed", checks.len(), failed);
    if failed == 0 {
        0
    } else {
        EXIT_RUNTIME
    }
}

fn exit_code(err: &Error) -> i32 {
    if err.is_config() {
        EXIT_CONFIG
    } else {
        EXIT_RUNTIME
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { 0 };
        }
    };
    let result = match &cli.command {
        Command::Run(args) => args.sweep().and_then(|s| execute(&s)).map(|_| ()),
        Command::Report(args) => report(args).map(|_| ()),
        Command::Selftest => return selftest(),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn help_exits_zero_and_bad_flags_exit_one() {
        assert_eq!(main_with_args(["hdab", "--help"]), 0);
        assert_eq!(main_with_args(["hdab", "run", "--bogus"]), EXIT_CONFIG);
        assert_eq!(main_with_args(["hdab", "run", "--p", "1.5"]), EXIT_CONFIG);
        assert_eq!(main_with_args(["hdab", "run", "--horizon", "x"]), EXIT_CONFIG);
    }

    #[test]
    fn config_file_overrides_flags() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("c.toml");
        std::fs::write(&cfg, "[run]\nhorizon = 50\nseeds = 2\n").unwrap();
        let cli = Cli::try_parse_from([
            "hdab",
            "run",
            "--horizon",
            "10",
            "--config",
            cfg.to_str().unwrap(),
        ])
        .unwrap();
        let Command::Run(args) = cli.command else { unreachable!() };
        let sweep = args.sweep().unwrap();
        assert_eq!(sweep.base.horizon, 50);
        assert_eq!(sweep.base.seeds, 2);
    }
}
