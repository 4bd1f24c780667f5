//! Joint antenna placement and power control for uplink NOMA over a
//! pinching-antenna waveguide.
//!
//! A single radiating point slides along a waveguide above a field of users
//! that transmit simultaneously and are separated by successive interference
//! cancellation. The crate provides:
//!
//! - [`geometry`]: system constants, user deployments, line-of-sight channels;
//! - [`rate`]: decode ordering, per-user rates, the telescoped sum rate, and
//!   the time-shared rate model;
//! - [`pso`]: a bounded one-dimensional particle swarm minimizer with a
//!   penalty-augmented placement objective;
//! - [`power`]: closed-form minimum powers, greedy residual allocation, and
//!   an exact LP cross-check;
//! - [`qos`]: the unconstrained solver and the alternating solver with
//!   per-user rate floors;
//! - [`baselines`]: grid search, the fixed-antenna reference, and the optimal
//!   time-division scheme;
//! - [`harness`]: reproducible Monte-Carlo sweeps over power budgets and rate
//!   floors, CSV/manifest output, and randomized oracle checks.

pub mod baselines;
pub mod geometry;
pub mod harness;
pub mod power;
pub mod pso;
pub mod qos;
pub mod rate;
pub mod seed;

pub use baselines::{
    exhaustive_search, fixed_antenna_solution, noma_exhaustive_solution, optimal_slot_fractions,
    tdma_exhaustive, GridSpec,
};
pub use geometry::{
    effective_channel, path_gain_eta, placement_objective, squared_distance, Deployment,
    SystemParams, UserPosition, SPEED_OF_LIGHT,
};
pub use harness::{
    run_oracle_checks, run_realization, sweep_pmax, sweep_rmin, write_results, OutagePolicy,
    ScenarioConfig, Scheme, SweepResult,
};
pub use power::{
    allocate_at_position, check_feasibility, greedy_residual_allocation, lp_oracle, min_powers,
    AllocationResult, PositionedAllocation,
};
pub use pso::{
    default_penalty_factor, penalized_objective, pso_minimize, pso_minimize_seeded, search_bounds,
    PsoConfig, PsoOutcome, SearchBounds, Swarm,
};
pub use qos::{feasibility_restore, solve_no_qos, solve_with_qos, Solution};
pub use rate::{
    noma_rates, noma_sum_rate_closed_form, qos_satisfied, sort_users_by_channel, tdma_rates,
    RateVector,
};
