//! Bounded one-dimensional particle swarm minimizer.
//!
//! Velocities follow the classic inertia / cognitive / social update, positions
//! advance by one velocity step and are clamped into the search interval, and
//! the run stops once the swarm-best value stalls for two consecutive
//! iterations (after a short guard window) or the iteration cap is reached.
//! Warm-start positions let callers seed particles at known good points, e.g.
//! the users' own coordinates for antenna placement.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{placement_objective, Deployment, SystemParams};
use crate::rate::{meets_rate_floor, noma_rates, sort_users_by_channel, ABS_FLOOR, QOS_REL_TOL};

/// Iterations that must elapse before the stall rule may fire; prevents the
/// relative-change test from triggering at t = 1 when the swarm best has not
/// moved yet.
pub const STALL_GUARD_ITERATIONS: usize = 10;

/// Consecutive iteration pairs whose relative best-value change must stay
/// below tolerance before the run stops. The stall signal is each iteration's
/// best value, not the running best: the running best is a record sequence
/// that pauses for long stretches mid-flight, while the per-iteration best
/// keeps fluctuating until the swarm has genuinely collapsed.
pub const STALL_WINDOW: usize = 10;

/// Swarm hyperparameters. `seed` fixes the whole trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsoConfig {
    /// Number of particles.
    pub swarm_size: usize,
    /// Hard iteration cap.
    pub max_iterations: usize,
    /// Inertia weight, in [0, 1].
    pub inertia: f64,
    /// Cognitive acceleration (pull toward a particle's own best).
    pub cognitive: f64,
    /// Social acceleration (pull toward the swarm best).
    pub social: f64,
    /// Relative stall threshold on the swarm-best value.
    pub tolerance: f64,
    /// RNG seed.
    pub seed: u64,
    /// Velocity clamp as a fraction of the search-interval width, in (0, 1].
    pub velocity_cap: f64,
}

impl Default for PsoConfig {
    /// Standard constriction-style defaults: 30 particles, 100 iterations,
    /// w = 0.729, c1 = c2 = 1.49445.
    fn default() -> Self {
        Self {
            swarm_size: 30,
            max_iterations: 100,
            inertia: 0.729,
            cognitive: 1.49445,
            social: 1.49445,
            tolerance: 1e-8,
            seed: 0,
            velocity_cap: 0.5,
        }
    }
}

impl PsoConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.swarm_size < 2 {
            return Err(format!("swarm_size must be >= 2, got {}", self.swarm_size));
        }
        if self.max_iterations < 1 {
            return Err("max_iterations must be >= 1".into());
        }
        if !self.tolerance.is_finite() || self.tolerance <= 0.0 {
            return Err(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            ));
        }
        if !self.velocity_cap.is_finite() || self.velocity_cap <= 0.0 || self.velocity_cap > 1.0 {
            return Err(format!(
                "velocity_cap must be in (0, 1], got {}",
                self.velocity_cap
            ));
        }
        if !(0.0..=1.0).contains(&self.inertia) {
            return Err(format!("inertia must be in [0, 1], got {}", self.inertia));
        }
        if self.cognitive < 0.0 || self.social < 0.0 {
            return Err("acceleration coefficients must be non-negative".into());
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Closed search interval for the antenna position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchBounds {
    pub lower: f64,
    pub upper: f64,
}

impl SearchBounds {
    pub fn new(lower: f64, upper: f64) -> Self {
        assert!(
            lower <= upper,
            "bounds must satisfy lower <= upper, got [{lower}, {upper}]"
        );
        Self { lower, upper }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lower, self.upper)
    }
}

/// Search interval implied by the deployment: positions left of the leftmost
/// user or right of the rightmost one only lengthen every link, so the
/// interval is `[min_m x_m, max_m x_m]` clipped to the waveguide.
pub fn search_bounds(dep: &Deployment, waveguide_len: f64) -> SearchBounds {
    let mut min_x = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    for user in dep.users() {
        min_x = min_x.min(user.x);
        max_x = max_x.max(user.x);
    }
    SearchBounds::new(min_x.min(waveguide_len), max_x.min(waveguide_len))
}

/// One velocity update: inertia plus random pulls toward the personal and
/// swarm bests, clamped to `velocity_cap` times the interval width.
#[allow(clippy::too_many_arguments)]
pub fn updated_velocity(
    config: &PsoConfig,
    bounds: SearchBounds,
    velocity: f64,
    position: f64,
    pbest: f64,
    gbest: f64,
    r1: f64,
    r2: f64,
) -> f64 {
    let raw = config.inertia * velocity
        + config.cognitive * r1 * (pbest - position)
        + config.social * r2 * (gbest - position);
    let cap = config.velocity_cap * bounds.width();
    raw.clamp(-cap, cap)
}

/// One position update: advance by the already-updated velocity, then clamp
/// back into the search interval.
pub fn advance_position(position: f64, velocity: f64, bounds: SearchBounds) -> f64 {
    bounds.clamp(position + velocity)
}

/// Swarm state: particle positions and velocities, per-particle bests, and
/// the swarm best. Exposed so callers can drive iterations manually.
#[derive(Debug, Clone)]
pub struct Swarm {
    config: PsoConfig,
    bounds: SearchBounds,
    rng: ChaCha8Rng,
    positions: Vec<f64>,
    velocities: Vec<f64>,
    pbest_positions: Vec<f64>,
    pbest_values: Vec<f64>,
    gbest_position: f64,
    gbest_value: f64,
    iteration_best_value: f64,
    iteration: usize,
}

impl Swarm {
    /// Initializes the swarm: the first `min(warm_starts.len(), swarm_size)`
    /// particles sit at the warm-start points (clamped into bounds), the rest
    /// are uniform over the interval; all velocities start uniform within the
    /// clamp range.
    pub fn new<F: FnMut(f64) -> f64>(
        bounds: SearchBounds,
        config: &PsoConfig,
        warm_starts: &[f64],
        objective: &mut F,
    ) -> Self {
        config.validate().expect("invalid PSO configuration");
        let n = config.swarm_size;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut positions = Vec::with_capacity(n);
        for &w in warm_starts.iter().take(n) {
            positions.push(bounds.clamp(w));
        }
        while positions.len() < n {
            positions.push(rng.random_range(bounds.lower..=bounds.upper));
        }
        let cap = config.velocity_cap * bounds.width();
        let velocities: Vec<f64> = if cap > 0.0 {
            (0..n).map(|_| rng.random_range(-cap..=cap)).collect()
        } else {
            vec![0.0; n]
        };
        let pbest_values: Vec<f64> = positions.iter().map(|&x| objective(x)).collect();
        let mut gbest_index = 0;
        for (i, &v) in pbest_values.iter().enumerate() {
            if v < pbest_values[gbest_index] {
                gbest_index = i;
            }
        }
        Self {
            config: *config,
            bounds,
            rng,
            pbest_positions: positions.clone(),
            gbest_position: positions[gbest_index],
            gbest_value: pbest_values[gbest_index],
            iteration_best_value: pbest_values[gbest_index],
            positions,
            velocities,
            pbest_values,
            iteration: 0,
        }
    }

    /// Runs one synchronous iteration: all particles move using the previous
    /// iteration's bests, then the bests are refreshed from the new values.
    pub fn step<F: FnMut(f64) -> f64>(&mut self, objective: &mut F) {
        for i in 0..self.positions.len() {
            let r1: f64 = self.rng.random();
            let r2: f64 = self.rng.random();
            let v = updated_velocity(
                &self.config,
                self.bounds,
                self.velocities[i],
                self.positions[i],
                self.pbest_positions[i],
                self.gbest_position,
                r1,
                r2,
            );
            self.velocities[i] = v;
            self.positions[i] = advance_position(self.positions[i], v, self.bounds);
        }
        self.iteration_best_value = f64::INFINITY;
        for i in 0..self.positions.len() {
            let value = objective(self.positions[i]);
            self.iteration_best_value = self.iteration_best_value.min(value);
            if value < self.pbest_values[i] {
                self.pbest_values[i] = value;
                self.pbest_positions[i] = self.positions[i];
            }
            if value < self.gbest_value {
                self.gbest_value = value;
                self.gbest_position = self.positions[i];
            }
        }
        self.iteration += 1;
    }

    pub fn gbest(&self) -> (f64, f64) {
        (self.gbest_position, self.gbest_value)
    }

    pub fn gbest_value(&self) -> f64 {
        self.gbest_value
    }

    /// Best objective value among the particles of the most recent iteration
    /// (not the running best). This is the stall signal: it keeps moving while
    /// the swarm still explores and settles only once the swarm has collapsed.
    pub fn iteration_best_value(&self) -> f64 {
        self.iteration_best_value
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn velocities(&self) -> &[f64] {
        &self.velocities
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }
}

/// Best position and value found, plus the number of iterations run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsoOutcome {
    pub position: f64,
    pub value: f64,
    pub iterations: usize,
}

/// Minimizes `objective` over `bounds`. Deterministic given
/// `(config.seed, objective, bounds)`; heuristic, so no optimality guarantee.
pub fn pso_minimize<F: FnMut(f64) -> f64>(
    objective: F,
    bounds: SearchBounds,
    config: &PsoConfig,
) -> PsoOutcome {
    pso_minimize_seeded(objective, bounds, config, &[])
}

/// [`pso_minimize`] with warm-start particle positions.
pub fn pso_minimize_seeded<F: FnMut(f64) -> f64>(
    mut objective: F,
    bounds: SearchBounds,
    config: &PsoConfig,
    warm_starts: &[f64],
) -> PsoOutcome {
    let mut swarm = Swarm::new(bounds, config, warm_starts, &mut objective);
    let mut previous = swarm.iteration_best_value();
    let mut iterations = 0;
    let mut stalled = 0;
    for t in 1..=config.max_iterations {
        swarm.step(&mut objective);
        iterations = t;
        let current = swarm.iteration_best_value();
        let change = (previous - current).abs() / previous.abs().max(ABS_FLOOR);
        if change < config.tolerance {
            stalled += 1;
            if t >= STALL_GUARD_ITERATIONS && stalled >= STALL_WINDOW {
                break;
            }
        } else {
            stalled = 0;
        }
        previous = current;
    }
    let (position, value) = swarm.gbest();
    PsoOutcome {
        position,
        value,
        iterations,
    }
}

/// Penalty factor large enough that a single rate-floor violation outweighs
/// the whole attainable position objective, which is bounded by
/// `sum_m P_m^max / height^2`.
pub fn default_penalty_factor(dep: &Deployment, params: &SystemParams) -> f64 {
    1e4 * dep.p_max().iter().sum::<f64>() / (params.height * params.height)
}

/// Position objective with rate-floor penalties, in minimization form:
/// `lambda * violations - sum_m powers[m] / distance_m^2`.
///
/// `powers` is indexed by original user; rates are evaluated under the decode
/// order induced by `x_pin`, so the violation count tracks the antenna as it
/// moves.
pub fn penalized_objective(
    dep: &Deployment,
    powers: &[f64],
    x_pin: f64,
    params: &SystemParams,
    lambda: f64,
) -> f64 {
    let order = sort_users_by_channel(dep, x_pin, params);
    let channels: Vec<f64> = order
        .iter()
        .map(|&u| crate::geometry::effective_channel(&dep.users()[u], x_pin, params))
        .collect();
    let decode_powers: Vec<f64> = order.iter().map(|&u| powers[u]).collect();
    let rates = noma_rates(&decode_powers, &channels);
    let violations = order
        .iter()
        .zip(&rates)
        .filter(|(&u, &rate)| !meets_rate_floor(rate, dep.r_min()[u], QOS_REL_TOL))
        .count();
    lambda * violations as f64 - placement_objective(dep, powers, x_pin, params)
}
