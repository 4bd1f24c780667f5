//! Randomized cross-checks between independent solution routes, runnable
//! from the CLI. Each check pits a production path against an oracle: the
//! telescoped sum rate against summed per-user rates, closed-form minimum
//! powers against the rates they induce, the greedy allocation against the
//! exact LP, and the swarm search against a dense grid.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::baselines::{exhaustive_search, GridSpec};
use crate::geometry::{placement_objective, Deployment, SystemParams};
use crate::power::{allocation_objective, greedy_residual_allocation, lp_oracle, min_powers};
use crate::pso::{pso_minimize_seeded, search_bounds, PsoConfig};
use crate::rate::{noma_rates, noma_sum_rate_closed_form};
use crate::seed;

/// Result of one randomized check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub trials: usize,
    pub failures: usize,
    /// Largest relative discrepancy observed.
    pub worst: f64,
    pub passed: bool,
}

impl CheckOutcome {
    fn new(name: &'static str, trials: usize, failures: usize, worst: f64) -> Self {
        Self {
            name,
            trials,
            failures,
            worst,
            passed: failures == 0,
        }
    }
}

/// Random channels sorted descending, floors in `[0, 2]`, caps in `[0.5, 2]`.
fn random_allocation_instance(
    rng: &mut ChaCha8Rng,
    max_users: usize,
    floor_scale: f64,
) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let m = rng.random_range(1..=max_users);
    let mut channels: Vec<f64> = (0..m).map(|_| rng.random_range(0.5..50.0)).collect();
    channels.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let r_min: Vec<f64> = (0..m).map(|_| rng.random_range(0.0..floor_scale)).collect();
    let p_max: Vec<f64> = (0..m).map(|_| rng.random_range(0.5..2.0)).collect();
    (channels, r_min, p_max)
}

/// Per-user rates must telescope into the closed-form sum.
pub fn check_telescoping(seed: u64, trials: usize) -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(seed, 1));
    let mut failures = 0;
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let m = rng.random_range(1..=10);
        let powers: Vec<f64> = (0..m).map(|_| rng.random_range(0.0..5.0)).collect();
        let channels: Vec<f64> = (0..m).map(|_| rng.random_range(0.01..100.0)).collect();
        let summed: f64 = noma_rates(&powers, &channels).iter().sum();
        let closed = noma_sum_rate_closed_form(&powers, &channels);
        let error = (summed - closed).abs() / closed.abs().max(1e-15);
        worst = worst.max(error);
        if error > 1e-9 {
            failures += 1;
        }
    }
    CheckOutcome::new("telescoping sum rate", trials, failures, worst)
}

/// Minimum powers must reproduce the rate floors exactly through the rate
/// model.
pub fn check_min_power_consistency(seed: u64, trials: usize) -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(seed, 2));
    let mut failures = 0;
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let (channels, r_min, _) = random_allocation_instance(&mut rng, 10, 3.0);
        let powers = min_powers(&channels, &r_min);
        let rates = noma_rates(&powers, &channels);
        for (rate, floor) in rates.iter().zip(&r_min) {
            let error = (rate - floor).abs() / floor.abs().max(1e-15);
            worst = worst.max(error);
            if error > 1e-9 {
                failures += 1;
            }
        }
    }
    CheckOutcome::new("minimum powers hit their floors", trials, failures, worst)
}

/// Greedy allocation must match the exact LP objective on feasible instances
/// and agree on infeasibility verdicts.
pub fn check_greedy_vs_lp(seed: u64, trials: usize) -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(seed, 3));
    let mut failures = 0;
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let (channels, r_min, p_max) = random_allocation_instance(&mut rng, 5, 2.0);
        let greedy = greedy_residual_allocation(&channels, &r_min, &p_max);
        let oracle = lp_oracle(&channels, &r_min, &p_max);
        if greedy.feasible != oracle.feasible {
            failures += 1;
            continue;
        }
        if greedy.feasible {
            let a = allocation_objective(&greedy.powers, &channels);
            let b = allocation_objective(&oracle.powers, &channels);
            let error = (a - b).abs() / b.abs().max(1e-15);
            worst = worst.max(error);
            if error > 1e-9 {
                failures += 1;
            }
        }
    }
    CheckOutcome::new("greedy allocation equals exact LP", trials, failures, worst)
}

/// The swarm search must land within 1% of a dense grid on random placement
/// instances.
pub fn check_pso_vs_grid(seed: u64, trials: usize) -> CheckOutcome {
    let params = SystemParams::default();
    let mut failures = 0;
    let mut worst = 0.0f64;
    for k in 0..trials {
        let instance_seed = seed::derive(seed, 4000 + k as u64);
        let dep = Deployment::sample(instance_seed, 3, &params, 1.0, 0.0);
        let powers = dep.p_max().to_vec();
        let bounds = search_bounds(&dep, params.waveguide_len);
        let objective = |x: f64| -placement_objective(&dep, &powers, x, &params);
        let warm: Vec<f64> = dep.users().iter().map(|u| u.x).collect();
        let pso = pso_minimize_seeded(
            objective,
            bounds,
            &PsoConfig::default().with_seed(instance_seed),
            &warm,
        );
        let grid_value = match GridSpec::new(1e-3, bounds) {
            Ok(grid) => exhaustive_search(objective, &grid).1,
            Err(_) => objective(bounds.lower),
        };
        let gap = (pso.value - grid_value) / grid_value.abs().max(1e-15);
        worst = worst.max(gap);
        if gap > 0.01 {
            failures += 1;
        }
    }
    CheckOutcome::new("swarm within 1% of dense grid", trials, failures, worst)
}

/// Runs every check with `trials` random instances each.
pub fn run_oracle_checks(seed: u64, trials: usize) -> Vec<CheckOutcome> {
    vec![
        check_telescoping(seed, trials),
        check_min_power_consistency(seed, trials),
        check_greedy_vs_lp(seed, trials),
        check_pso_vs_grid(seed, trials.min(200)),
    ]
}
