//! Joint antenna placement and power control.
//!
//! Without rate floors the problem separates: every user transmits at its cap
//! and only the antenna position is searched. With floors, power allocation
//! (fixed position) and penalized position search (fixed powers) alternate
//! until the position step stops improving.

use serde::{Deserialize, Serialize};

use crate::geometry::{placement_objective, Deployment, SystemParams};
use crate::power::{allocate_at_position, check_feasibility, min_powers};
use crate::pso::{
    default_penalty_factor, penalized_objective, pso_minimize_seeded, search_bounds, PsoConfig,
};
use crate::rate::{
    noma_rates, noma_sum_rate_closed_form, qos_satisfied, sort_users_by_channel, RateVector,
    ABS_FLOOR,
};
use crate::seed;

/// Outer-iteration cap for the alternating solver.
pub const MAX_OUTER_ITERATIONS: usize = 20;

/// Relative improvement in the penalized objective below which the
/// alternation counts a position step as "no improvement" and stops.
pub const OUTER_IMPROVEMENT_TOL: f64 = 1e-8;

/// A solved instance. Powers and rates are indexed by original user.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    /// Antenna position along the waveguide, m.
    pub x_pin: f64,
    /// Per-user transmit powers, W.
    pub powers: Vec<f64>,
    /// Per-user achievable rates, bits/s/Hz.
    pub rates: Vec<f64>,
    /// Sum of the per-user rates, bits/s/Hz.
    pub sum_rate: f64,
    /// False when no position satisfied every rate floor within the caps.
    pub feasible: bool,
    /// Outer alternation iterations executed (0 for single-shot solvers).
    pub outer_iterations: usize,
}

/// Builds a [`Solution`] at a fixed position and per-user power vector,
/// recomputing the decode order and rates there.
pub(crate) fn assemble_solution(
    dep: &Deployment,
    params: &SystemParams,
    x_pin: f64,
    powers: Vec<f64>,
    feasible: bool,
    outer_iterations: usize,
) -> Solution {
    let order = sort_users_by_channel(dep, x_pin, params);
    let all_channels = dep.channels_at(x_pin, params);
    let channels: Vec<f64> = order.iter().map(|&u| all_channels[u]).collect();
    let decode_powers: Vec<f64> = order.iter().map(|&u| powers[u]).collect();
    let rates = RateVector::new(noma_rates(&decode_powers, &channels), order);
    let sum_rate = noma_sum_rate_closed_form(&decode_powers, &channels);
    Solution {
        x_pin,
        powers,
        rates: rates.by_user(),
        sum_rate,
        feasible,
        outer_iterations,
    }
}

/// Clamped warm-start positions: one particle per user coordinate, so the
/// swarm is never worse than parking the antenna over the best single user.
fn user_warm_starts(dep: &Deployment) -> Vec<f64> {
    dep.users().iter().map(|u| u.x).collect()
}

/// Sum-rate maximization without rate floors: full power for everyone, then a
/// swarm search of the position objective over the user span.
pub fn solve_no_qos(dep: &Deployment, params: &SystemParams, pso: &PsoConfig) -> Solution {
    let bounds = search_bounds(dep, params.waveguide_len);
    let powers = dep.p_max().to_vec();
    let config = pso.with_seed(seed::derive(pso.seed, 1));
    let outcome = pso_minimize_seeded(
        |x| -placement_objective(dep, &powers, x, params),
        bounds,
        &config,
        &user_warm_starts(dep),
    );
    assemble_solution(dep, params, outcome.position, powers, true, 0)
}

/// Sum-rate maximization with per-user rate floors, by alternating greedy
/// power allocation and penalized position search.
///
/// The position found without floors seeds the alternation. Each round
/// re-sorts users at the current position, re-allocates power, then lets the
/// swarm move the antenna under a penalty that makes any floor violation
/// dominate the objective. When a position step fails to improve the
/// incumbent penalized value the incumbent is kept and the loop ends.
pub fn solve_with_qos(dep: &Deployment, params: &SystemParams, pso: &PsoConfig) -> Solution {
    let bounds = search_bounds(dep, params.waveguide_len);
    let lambda = default_penalty_factor(dep, params);
    let warm = user_warm_starts(dep);
    let mut x_pin = solve_no_qos(dep, params, pso).x_pin;
    let mut incumbent: Option<(f64, Vec<f64>, f64)> = None;
    let mut outer = 0;
    for k in 0..MAX_OUTER_ITERATIONS {
        outer = k + 1;
        let mut allocation = allocate_at_position(dep, x_pin, params);
        if !allocation.result.feasible {
            match feasibility_restore(dep, params, pso, x_pin) {
                Some(restored) => {
                    x_pin = restored;
                    allocation = allocate_at_position(dep, x_pin, params);
                }
                None => return infeasible_solution(dep, params, x_pin, outer),
            }
        }
        let powers = allocation.powers_by_user();
        let value = -placement_objective(dep, &powers, x_pin, params);
        incumbent = Some((x_pin, powers.clone(), value));

        let config = pso.with_seed(seed::derive(pso.seed, (k + 1) as u64));
        let outcome = pso_minimize_seeded(
            |x| penalized_objective(dep, &powers, x, params, lambda),
            bounds,
            &config,
            &warm,
        );
        let improvement = (value - outcome.value) / value.abs().max(ABS_FLOOR);
        if improvement < OUTER_IMPROVEMENT_TOL {
            break;
        }
        x_pin = outcome.position;
    }
    let (x_pin, powers, _) = incumbent.expect("at least one outer iteration runs");
    let solution = assemble_solution(dep, params, x_pin, powers, true, outer);
    debug_assert!(qos_satisfied(&solution.rates, dep.r_min()));
    solution
}

fn infeasible_solution(
    dep: &Deployment,
    params: &SystemParams,
    x_pin: f64,
    outer: usize,
) -> Solution {
    let allocation = allocate_at_position(dep, x_pin, params);
    let powers: Vec<f64> = allocation
        .powers_by_user()
        .iter()
        .zip(dep.p_max())
        .map(|(&p, &cap)| p.min(cap))
        .collect();
    assemble_solution(dep, params, x_pin, powers, false, outer)
}

/// Searches for a position where the minimum powers fit inside the caps,
/// maximizing the worst normalized power margin
/// `min_m (P_m^max - P_m^min(x)) / P_m^max`.
///
/// Returns `current_x` unchanged when it is already feasible, a restored
/// position when the swarm finds one, and `None` when even the best margin
/// stays negative.
pub fn feasibility_restore(
    dep: &Deployment,
    params: &SystemParams,
    pso: &PsoConfig,
    current_x: f64,
) -> Option<f64> {
    let feasible_at = |x: f64| {
        let order = sort_users_by_channel(dep, x, params);
        let all = dep.channels_at(x, params);
        let channels: Vec<f64> = order.iter().map(|&u| all[u]).collect();
        let r_min: Vec<f64> = order.iter().map(|&u| dep.r_min()[u]).collect();
        let p_max: Vec<f64> = order.iter().map(|&u| dep.p_max()[u]).collect();
        check_feasibility(&min_powers(&channels, &r_min), &p_max)
    };
    if feasible_at(current_x) {
        return Some(current_x);
    }
    let bounds = search_bounds(dep, params.waveguide_len);
    let worst_margin = |x: f64| {
        let order = sort_users_by_channel(dep, x, params);
        let all = dep.channels_at(x, params);
        let channels: Vec<f64> = order.iter().map(|&u| all[u]).collect();
        let r_min: Vec<f64> = order.iter().map(|&u| dep.r_min()[u]).collect();
        let lows = min_powers(&channels, &r_min);
        order
            .iter()
            .zip(&lows)
            .map(|(&u, &low)| (dep.p_max()[u] - low) / dep.p_max()[u])
            .fold(f64::INFINITY, f64::min)
    };
    let config = pso.with_seed(seed::derive(pso.seed, 0x5EED));
    let outcome = pso_minimize_seeded(
        |x| -worst_margin(x),
        bounds,
        &config,
        &user_warm_starts(dep),
    );
    feasible_at(outcome.position).then_some(outcome.position)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::UserPosition;

    fn desk_deployment(
        params: &SystemParams,
        spots: &[(f64, f64)],
        p_max: f64,
        r_min: f64,
    ) -> Deployment {
        let users = spots
            .iter()
            .map(|&(x, y)| UserPosition::new(x, y, params).unwrap())
            .collect();
        Deployment::new(users, vec![p_max; spots.len()], vec![r_min; spots.len()]).unwrap()
    }

    #[test]
    fn single_user_antenna_parks_overhead() {
        let params = SystemParams::default();
        let dep = desk_deployment(&params, &[(10.0, 2.0)], 1.0, 0.0);
        let sol = solve_no_qos(&dep, &params, &PsoConfig::default());
        assert!((sol.x_pin - 10.0).abs() < 1e-3);
        assert_eq!(sol.powers, vec![1.0]);
        assert!(sol.feasible);
    }

    #[test]
    fn sum_rate_is_definitionally_consistent() {
        let params = SystemParams::default();
        let dep = desk_deployment(&params, &[(12.0, -3.0), (41.0, 6.0), (27.0, 0.5)], 1.0, 0.0);
        let sol = solve_no_qos(&dep, &params, &PsoConfig::default());
        let received: f64 = dep
            .channels_at(sol.x_pin, &params)
            .iter()
            .zip(&sol.powers)
            .map(|(h, p)| h * p)
            .sum();
        assert!((sol.sum_rate - (1.0 + received).log2()).abs() < 1e-12);
        let summed: f64 = sol.rates.iter().sum();
        assert!((sol.sum_rate - summed).abs() / sol.sum_rate < 1e-9);
    }

    #[test]
    fn mirrored_users_give_symmetric_objective() {
        let params = SystemParams::default();
        let dep = desk_deployment(&params, &[(20.0, 0.0), (40.0, 0.0)], 1.0, 0.0);
        let powers = [1.0, 1.0];
        for delta in [1.0, 5.0, 9.0] {
            let left = placement_objective(&dep, &powers, 30.0 - delta, &params);
            let right = placement_objective(&dep, &powers, 30.0 + delta, &params);
            assert!((left - right).abs() / left < 1e-12);
        }
        let sol = solve_no_qos(&dep, &params, &PsoConfig::default());
        // Grid reference over the user span.
        let mut best = f64::NEG_INFINITY;
        let mut x = 20.0;
        while x <= 40.0 {
            best = best.max(placement_objective(&dep, &powers, x, &params));
            x += 1e-3;
        }
        let found = placement_objective(&dep, &powers, sol.x_pin, &params);
        assert!(found >= best * (1.0 - 1e-3));
    }

    #[test]
    fn zero_floors_reduce_to_unconstrained_solver() {
        let params = SystemParams::default();
        let dep = desk_deployment(&params, &[(8.0, 1.0), (33.0, -4.0), (52.0, 7.0)], 1.0, 0.0);
        let pso = PsoConfig::default().with_seed(77);
        let unconstrained = solve_no_qos(&dep, &params, &pso);
        let constrained = solve_with_qos(&dep, &params, &pso);
        assert_eq!(unconstrained.x_pin.to_bits(), constrained.x_pin.to_bits());
        assert_eq!(
            unconstrained.sum_rate.to_bits(),
            constrained.sum_rate.to_bits()
        );
        assert_eq!(unconstrained.powers, constrained.powers);
    }

    #[test]
    fn impossible_floors_are_flagged_infeasible() {
        let params = SystemParams::default();
        let dep = desk_deployment(&params, &[(10.0, 0.0), (50.0, 0.0)], 1.0, 100.0);
        let sol = solve_with_qos(&dep, &params, &PsoConfig::default());
        assert!(!sol.feasible);
    }

    #[test]
    fn qos_solution_respects_floors_and_boxes() {
        let params = SystemParams::default();
        let dep = desk_deployment(&params, &[(10.0, 0.0), (50.0, 0.0)], 1.0, 2.0);
        let sol = solve_with_qos(&dep, &params, &PsoConfig::default());
        assert!(sol.feasible);
        assert!(qos_satisfied(&sol.rates, dep.r_min()));
        for (p, cap) in sol.powers.iter().zip(dep.p_max()) {
            assert!(*p >= 0.0 && *p <= cap * (1.0 + 1e-12));
        }
        assert!(sol.x_pin >= 0.0 && sol.x_pin <= params.waveguide_len);
        assert!(sol.outer_iterations >= 1 && sol.outer_iterations <= MAX_OUTER_ITERATIONS);
    }

    #[test]
    fn restore_returns_current_when_floors_are_zero() {
        let params = SystemParams::default();
        let dep = desk_deployment(&params, &[(10.0, 0.0), (50.0, 0.0)], 1.0, 0.0);
        let restored = feasibility_restore(&dep, &params, &PsoConfig::default(), 17.0);
        assert_eq!(restored, Some(17.0));
    }

    #[test]
    fn restore_finds_a_feasible_position() {
        // Tight floors: feasible only with the antenna near the users, not at
        // the x = 0 end of the waveguide.
        let params = SystemParams::default();
        let dep = desk_deployment(&params, &[(45.0, 0.0), (55.0, 0.0)], 0.002, 2.0);
        let feasible_at = |x: f64| {
            let order = sort_users_by_channel(&dep, x, &params);
            let all = dep.channels_at(x, &params);
            let channels: Vec<f64> = order.iter().map(|&u| all[u]).collect();
            let r_min: Vec<f64> = order.iter().map(|&u| dep.r_min()[u]).collect();
            let p_max: Vec<f64> = order.iter().map(|&u| dep.p_max()[u]).collect();
            check_feasibility(&min_powers(&channels, &r_min), &p_max)
        };
        assert!(!feasible_at(0.0), "instance must start infeasible");
        let restored = feasibility_restore(&dep, &params, &PsoConfig::default(), 0.0)
            .expect("a feasible position exists near the users");
        assert!(feasible_at(restored));
    }

    #[test]
    fn restore_gives_up_on_globally_infeasible_instances() {
        let params = SystemParams::default();
        let dep = desk_deployment(&params, &[(10.0, 0.0), (50.0, 0.0)], 1.0, 100.0);
        assert_eq!(
            feasibility_restore(&dep, &params, &PsoConfig::default(), 30.0),
            None
        );
    }
}
