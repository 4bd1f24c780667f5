//! `pinch` — solve single instances, run Monte-Carlo sweeps, and cross-check
//! the solvers against their oracles from the command line.

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use pinch_core::geometry::Deployment;
use pinch_core::harness::{
    self, dbm_to_watts, run_oracle_checks, write_results, ScenarioConfig, Scheme, SweepResult,
};
use pinch_core::qos::Solution;
use pinch_core::seed;

#[derive(Parser)]
#[command(
    name = "pinch",
    version,
    about = "Uplink NOMA pinching-antenna optimizer and experiment driver"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one randomly deployed instance and print the solution per scheme
    Solve(SolveArgs),
    /// Sweep the per-user power budget (dBm) and persist averaged results
    SweepPmax(SweepArgs),
    /// Sweep the per-user rate floor (bits/s/Hz) and persist averaged results
    SweepRmin(SweepArgs),
    /// Run randomized oracle cross-checks and report pass/fail per check
    OracleCheck(OracleArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// JSON config file; individual flags override its keys
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed override
    #[arg(long)]
    seed: Option<u64>,
    /// Number of users override
    #[arg(long)]
    users: Option<usize>,
    /// Grid resolution override for the exhaustive schemes, m
    #[arg(long)]
    grid_step: Option<f64>,
    /// Comma-separated subset of: noma_pso, noma_exhaustive, noma_fixed,
    /// tdma_exhaustive
    #[arg(long, value_delimiter = ',')]
    schemes: Option<Vec<Scheme>>,
}

impl CommonArgs {
    fn resolve(&self) -> Result<ScenarioConfig> {
        let mut config = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading config {}", path.display()))?;
                serde_json::from_str(&text)
                    .with_context(|| format!("parsing config {}", path.display()))?
            }
            None => ScenarioConfig::default(),
        };
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(users) = self.users {
            config.users = users;
        }
        if let Some(step) = self.grid_step {
            config.grid_step_m = step;
        }
        if let Some(schemes) = &self.schemes {
            config.schemes = schemes.clone();
        }
        config.validate()?;
        Ok(config)
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Per-user power budget, dBm (defaults to the config's fixed value)
    #[arg(long)]
    pmax_dbm: Option<f64>,
    /// Common rate floor, bits/s/Hz (defaults to the config's fixed value)
    #[arg(long)]
    rmin: Option<f64>,
    /// Emit the solutions as JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Realizations per sweep point override
    #[arg(long)]
    realizations: Option<usize>,
    /// Existing directory for the CSV and manifest files
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random instances per check
    #[arg(long, default_value_t = 200)]
    trials: usize,
}

fn main() -> Result<()> {
    // Die quietly when the consumer of a pipe goes away (e.g. `pinch ... | head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match Cli::parse().command {
        Command::Solve(args) => solve(args),
        Command::SweepPmax(args) => sweep(args, harness::sweep_pmax),
        Command::SweepRmin(args) => sweep(args, harness::sweep_rmin),
        Command::OracleCheck(args) => oracle_check(args),
    }
}

fn solve(args: SolveArgs) -> Result<()> {
    let config = args.common.resolve()?;
    let params = config.system_params()?;
    let p_max_w = dbm_to_watts(args.pmax_dbm.unwrap_or(config.fixed_p_max_dbm));
    let r_min = args.rmin.unwrap_or(config.fixed_r_min);
    let realization_seed = seed::derive(config.seed, 0);
    let mut dep = Deployment::sample(realization_seed, config.users, &params, p_max_w, r_min);
    if let Some(per_user) = &config.r_min_per_user {
        dep = Deployment::new(dep.users().to_vec(), dep.p_max().to_vec(), per_user.clone())?;
    }

    let mut solved: Vec<(Scheme, Solution)> = Vec::new();
    for &scheme in &config.schemes {
        let solution = harness::run_realization(&dep, &config, scheme, realization_seed);
        solved.push((scheme, solution));
    }
    if args.json {
        let value = serde_json::json!({
            "seed": realization_seed,
            "users": dep.users(),
            "solutions": solved
                .iter()
                .map(|(scheme, solution)| serde_json::json!({
                    "scheme": scheme.label(),
                    "solution": solution,
                }))
                .collect::<Vec<_>>(),
        });
        println!("{}", serde_json::to_string_pretty(&value)?);
        return Ok(());
    }
    println!("deployment (seed {realization_seed}):");
    for (index, user) in dep.users().iter().enumerate() {
        println!(
            "  user {index}: x = {:8.3} m, y = {:8.3} m, p_max = {:.6} W, r_min = {:.3} bits/s/Hz",
            user.x,
            user.y,
            dep.p_max()[index],
            dep.r_min()[index],
        );
    }
    for (scheme, solution) in &solved {
        println!();
        println!("scheme {scheme}:");
        println!("  antenna position  {:.6} m", solution.x_pin);
        println!("  sum rate          {:.6} bits/s/Hz", solution.sum_rate);
        println!("  feasible          {}", solution.feasible);
        if solution.outer_iterations > 0 {
            println!("  outer iterations  {}", solution.outer_iterations);
        }
        for (index, (power, rate)) in solution.powers.iter().zip(&solution.rates).enumerate() {
            println!("  user {index}: power = {power:.6} W, rate = {rate:.6} bits/s/Hz");
        }
    }
    Ok(())
}

fn sweep(
    args: SweepArgs,
    runner: fn(&ScenarioConfig) -> Result<SweepResult, harness::HarnessError>,
) -> Result<()> {
    let mut config = args.common.resolve()?;
    if let Some(realizations) = args.realizations {
        config.realizations = realizations;
        config.validate()?;
    }
    let started = Instant::now();
    let result = runner(&config)?;
    let elapsed = started.elapsed();
    let files = write_results(&result, &args.out_dir)?;

    println!(
        "{} sweep: {} points x {} schemes x {} realizations in {elapsed:.2?}",
        result.axis.label(),
        result.points.len(),
        config.schemes.len(),
        config.realizations,
    );
    print!("{:>12}", result.axis.label());
    for scheme in &config.schemes {
        print!("{:>22}", scheme.label());
    }
    println!();
    for point in &result.points {
        print!("{:>12.3}", point.value);
        for scheme_point in &point.per_scheme {
            print!(
                "{:>15.4} ({:>3})",
                scheme_point.mean_sum_rate, scheme_point.outages
            );
        }
        println!();
    }
    println!("(mean sum rate in bits/s/Hz, outage count in parentheses)");
    println!("raw:       {}", files.raw_csv.display());
    println!("aggregate: {}", files.aggregate_csv.display());
    println!("manifest:  {}", files.manifest.display());
    Ok(())
}

fn oracle_check(args: OracleArgs) -> Result<()> {
    let outcomes = run_oracle_checks(args.seed, args.trials);
    let mut all_passed = true;
    for outcome in &outcomes {
        println!(
            "{}: {} ({}/{} trials ok, worst rel gap {:.3e})",
            outcome.name,
            if outcome.passed { "PASS" } else { "FAIL" },
            outcome.trials - outcome.failures,
            outcome.trials,
            outcome.worst,
        );
        all_passed &= outcome.passed;
    }
    if !all_passed {
        bail!("oracle checks failed");
    }
    Ok(())
}
