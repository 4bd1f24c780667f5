//! Benchmark schemes: dense grid search, the fixed-antenna reference, and
//! time-division access with per-slot antenna repositioning.
//!
//! The grid search is the oracle side of the solver pairings: it brackets the
//! swarm search on the same objective at a configurable resolution.

use thiserror::Error;

use crate::geometry::{effective_channel, Deployment, SystemParams};
use crate::power::{allocate_at_position, allocation_objective};
use crate::pso::{search_bounds, SearchBounds};
use crate::qos::{assemble_solution, Solution};
use crate::rate::tdma_rates;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BaselineError {
    #[error("grid step must be positive, got {step}")]
    NonPositiveStep { step: f64 },
    #[error("grid over [{lower}, {upper}] with step {step} has fewer than two points")]
    DegenerateGrid { lower: f64, upper: f64, step: f64 },
}

/// A uniform grid over a closed interval. The upper endpoint is always
/// included even when the width is not a multiple of the step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub step: f64,
    pub bounds: SearchBounds,
}

impl GridSpec {
    pub fn new(step: f64, bounds: SearchBounds) -> Result<Self, BaselineError> {
        if !step.is_finite() || step <= 0.0 {
            return Err(BaselineError::NonPositiveStep { step });
        }
        let spec = Self { step, bounds };
        if spec.num_points() < 2 {
            return Err(BaselineError::DegenerateGrid {
                lower: bounds.lower,
                upper: bounds.upper,
                step,
            });
        }
        Ok(spec)
    }

    fn num_inner(&self) -> usize {
        (self.bounds.width() / self.step + 1e-9).floor() as usize
    }

    pub fn num_points(&self) -> usize {
        let last_inner = self.bounds.lower + self.num_inner() as f64 * self.step;
        if last_inner < self.bounds.upper {
            self.num_inner() + 2
        } else {
            self.num_inner() + 1
        }
    }

    /// Grid points in ascending order.
    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        let inner = self.num_inner();
        let last_inner = self.bounds.lower + inner as f64 * self.step;
        let tail = (last_inner < self.bounds.upper).then_some(self.bounds.upper);
        (0..=inner)
            .map(move |k| self.bounds.lower + k as f64 * self.step)
            .chain(tail)
    }
}

/// Minimizes `objective` by evaluating every grid point; ties keep the
/// smallest position. Exact up to the grid resolution, so it bounds what any
/// heuristic can achieve on the same objective.
pub fn exhaustive_search<F: FnMut(f64) -> f64>(mut objective: F, grid: &GridSpec) -> (f64, f64) {
    let mut best_x = grid.bounds.lower;
    let mut best_value = f64::INFINITY;
    for x in grid.points() {
        let value = objective(x);
        if value < best_value {
            best_value = value;
            best_x = x;
        }
    }
    (best_x, best_value)
}

/// Evaluates `objective` over the deployment's search interval, falling back
/// to the single bound point when the interval is degenerate.
fn minimize_over_span<F: FnMut(f64) -> f64>(
    mut objective: F,
    bounds: SearchBounds,
    step: f64,
) -> (f64, f64) {
    match GridSpec::new(step, bounds) {
        Ok(grid) => exhaustive_search(objective, &grid),
        Err(_) => {
            let x = bounds.lower;
            (x, objective(x))
        }
    }
}

/// Antenna frozen at `x = 0`: full power without floors, greedy allocation
/// with them. The reference every movable-antenna scheme is compared against.
pub fn fixed_antenna_solution(dep: &Deployment, params: &SystemParams, with_qos: bool) -> Solution {
    let x_pin = 0.0;
    if !with_qos {
        return assemble_solution(dep, params, x_pin, dep.p_max().to_vec(), true, 0);
    }
    let allocation = allocate_at_position(dep, x_pin, params);
    let feasible = allocation.result.feasible;
    let powers: Vec<f64> = allocation
        .powers_by_user()
        .iter()
        .zip(dep.p_max())
        .map(|(&p, &cap)| p.min(cap))
        .collect();
    assemble_solution(dep, params, x_pin, powers, feasible, 0)
}

/// Joint optimum by grid search: at every candidate position the power
/// subproblem is solved exactly, and the best feasible position wins. This is
/// the upper-bound scheme for the NOMA solvers, accurate to the grid step.
pub fn noma_exhaustive_solution(dep: &Deployment, params: &SystemParams, step: f64) -> Solution {
    let bounds = search_bounds(dep, params.waveguide_len);
    let (best_x, best_value) = minimize_over_span(
        |x| {
            let allocation = allocate_at_position(dep, x, params);
            if !allocation.result.feasible {
                return f64::INFINITY;
            }
            let all = dep.channels_at(x, params);
            let channels: Vec<f64> = allocation.order.iter().map(|&u| all[u]).collect();
            -allocation_objective(&allocation.result.powers, &channels)
        },
        bounds,
        step,
    );
    if best_value.is_infinite() {
        // No grid point admits a feasible allocation.
        let allocation = allocate_at_position(dep, bounds.lower, params);
        let powers: Vec<f64> = allocation
            .powers_by_user()
            .iter()
            .zip(dep.p_max())
            .map(|(&p, &cap)| p.min(cap))
            .collect();
        return assemble_solution(dep, params, bounds.lower, powers, false, 0);
    }
    let allocation = allocate_at_position(dep, best_x, params);
    assemble_solution(dep, params, best_x, allocation.powers_by_user(), true, 0)
}

/// Splits the frame into per-user slot fractions: every user gets just enough
/// time for its rate floor and the whole residual goes to the fastest user
/// (the objective is linear in the fractions, so a vertex is optimal).
///
/// Returns the fractions and the index of the residual user, or `None` when
/// the floors alone exceed the frame.
pub fn optimal_slot_fractions(full_rates: &[f64], r_min: &[f64]) -> Option<(Vec<f64>, usize)> {
    assert_eq!(full_rates.len(), r_min.len());
    let mut fractions: Vec<f64> = full_rates
        .iter()
        .zip(r_min)
        .map(|(&rate, &floor)| if floor > 0.0 { floor / rate } else { 0.0 })
        .collect();
    let used: f64 = fractions.iter().sum();
    if used > 1.0 + 1e-12 {
        return None;
    }
    let best = full_rates
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, _)| i)
        .unwrap_or(0);
    fractions[best] += 1.0 - used;
    Some((fractions, best))
}

/// Optimal time-division benchmark: the antenna serves one user per slot from
/// the grid position maximizing that user's channel, each user transmits at
/// full power in its own slot, and slot fractions are optimized under the
/// rate floors.
pub fn tdma_exhaustive(dep: &Deployment, params: &SystemParams, step: f64) -> Solution {
    let bounds = search_bounds(dep, params.waveguide_len);
    let m = dep.num_users();
    let mut slots = Vec::with_capacity(m);
    let mut full_rates = Vec::with_capacity(m);
    for (user, &p_max) in dep.users().iter().zip(dep.p_max()) {
        let (slot, neg_h) =
            minimize_over_span(|x| -effective_channel(user, x, params), bounds, step);
        slots.push(slot);
        full_rates.push((1.0 - p_max * neg_h).log2());
    }
    match optimal_slot_fractions(&full_rates, dep.r_min()) {
        Some((fractions, best)) => {
            let rates = tdma_rates(dep, &fractions, &slots, params)
                .expect("optimal fractions lie on the simplex");
            let sum_rate = rates.iter().sum();
            Solution {
                x_pin: slots[best],
                powers: dep.p_max().to_vec(),
                rates,
                sum_rate,
                feasible: true,
                outer_iterations: 0,
            }
        }
        None => {
            // Floors exceed the frame even with every slot at its best
            // position: report the floor-proportional rates and flag outage.
            let rates: Vec<f64> = full_rates
                .iter()
                .zip(dep.r_min())
                .map(|(&rate, &floor)| if floor > 0.0 { rate.min(floor) } else { 0.0 })
                .collect();
            Solution {
                x_pin: slots[0],
                powers: dep.p_max().to_vec(),
                sum_rate: rates.iter().sum(),
                rates,
                feasible: false,
                outer_iterations: 0,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{placement_objective, UserPosition};
    use crate::pso::{pso_minimize, PsoConfig};

    #[test]
    fn grid_counts_points_and_includes_upper() {
        let grid = GridSpec::new(1e-3, SearchBounds::new(0.0, 60.0)).unwrap();
        assert_eq!(grid.num_points(), 60_001);
        let points: Vec<f64> = grid.points().collect();
        assert_eq!(points.len(), 60_001);
        assert_eq!(points[0], 0.0);
        assert_eq!(*points.last().unwrap(), 60.0);
        let ragged = GridSpec::new(0.4, SearchBounds::new(0.0, 1.0)).unwrap();
        let points: Vec<f64> = ragged.points().collect();
        assert_eq!(points.len(), 4); // 0.0, 0.4, 0.8, 1.0
        assert_eq!(*points.last().unwrap(), 1.0);
    }

    #[test]
    fn grid_rejects_bad_specs() {
        assert!(GridSpec::new(0.0, SearchBounds::new(0.0, 1.0)).is_err());
        assert!(GridSpec::new(1e-3, SearchBounds::new(5.0, 5.0)).is_err());
    }

    #[test]
    fn search_finds_quadratic_minimum() {
        let grid = GridSpec::new(1e-3, SearchBounds::new(0.0, 10.0)).unwrap();
        let (x, _) = exhaustive_search(|x| (x - 3.0) * (x - 3.0), &grid);
        assert!((x - 3.0).abs() <= 1e-3);
    }

    #[test]
    fn search_ties_resolve_to_smallest_x() {
        let grid = GridSpec::new(0.5, SearchBounds::new(2.0, 6.0)).unwrap();
        let (x, value) = exhaustive_search(|_| 1.0, &grid);
        assert_eq!(x, 2.0);
        assert_eq!(value, 1.0);
    }

    #[test]
    fn grid_brackets_the_swarm_on_bell_sums() {
        let params = SystemParams::default();
        for seed in 0..10u64 {
            let dep = Deployment::sample(seed, 5, &params, 1.0, 0.0);
            let powers = dep.p_max().to_vec();
            let bounds = search_bounds(&dep, params.waveguide_len);
            let objective = |x: f64| -placement_objective(&dep, &powers, x, &params);
            let pso = pso_minimize(objective, bounds, &PsoConfig::default().with_seed(seed));
            let (_, grid_value) = minimize_over_span(objective, bounds, 1e-3);
            assert!(
                grid_value <= pso.value + 1e-3 * pso.value.abs(),
                "grid {grid_value} vs swarm {} (seed {seed})",
                pso.value
            );
        }
    }

    #[test]
    fn fixed_antenna_matches_full_power_at_origin() {
        let params = SystemParams::default();
        let users = vec![
            UserPosition::new(12.0, 3.0, &params).unwrap(),
            UserPosition::new(44.0, -6.0, &params).unwrap(),
        ];
        let dep = Deployment::new(users, vec![1.0, 1.0], vec![0.0, 0.0]).unwrap();
        let sol = fixed_antenna_solution(&dep, &params, false);
        assert_eq!(sol.x_pin, 0.0);
        let received: f64 = dep
            .channels_at(0.0, &params)
            .iter()
            .zip(dep.p_max())
            .map(|(h, p)| h * p)
            .sum();
        assert!((sol.sum_rate - (1.0 + received).log2()).abs() < 1e-12);
    }

    #[test]
    fn fixed_antenna_never_beats_the_exhaustive_optimum() {
        let params = SystemParams::default();
        for seed in 0..10u64 {
            let dep = Deployment::sample(100 + seed, 3, &params, 1.0, 0.5);
            let fixed = fixed_antenna_solution(&dep, &params, true);
            let moved = noma_exhaustive_solution(&dep, &params, 1e-3);
            if fixed.feasible {
                assert!(moved.feasible);
                assert!(moved.sum_rate >= fixed.sum_rate * (1.0 - 1e-9));
            }
        }
    }

    #[test]
    fn noma_dominates_tdma_without_floors() {
        // With no floors the time-division optimum serves only its best user,
        // while the shared-channel optimum collects every user's power at a
        // position at least as good as that slot.
        let params = SystemParams::default();
        for seed in 0..10u64 {
            let dep = Deployment::sample(200 + seed, 3, &params, 1.0, 0.0);
            let noma = noma_exhaustive_solution(&dep, &params, 1e-3);
            let tdma = tdma_exhaustive(&dep, &params, 1e-3);
            assert!(
                noma.sum_rate >= tdma.sum_rate,
                "seed {seed}: noma {} < tdma {}",
                noma.sum_rate,
                tdma.sum_rate
            );
        }
    }

    #[test]
    fn fixed_antenna_is_optimal_for_a_user_at_origin() {
        let params = SystemParams::default();
        let dep = Deployment::new(
            vec![UserPosition::new(0.0, 0.0, &params).unwrap()],
            vec![1.0],
            vec![0.0],
        )
        .unwrap();
        let fixed = fixed_antenna_solution(&dep, &params, false);
        let moved = noma_exhaustive_solution(&dep, &params, 1e-3);
        assert!((fixed.sum_rate - moved.sum_rate).abs() < 1e-12);
    }

    #[test]
    fn slot_fractions_hand_value() {
        let (fractions, best) = optimal_slot_fractions(&[4.0, 2.0], &[1.0, 1.0]).unwrap();
        assert_eq!(best, 0);
        assert!((fractions[0] - 0.5).abs() < 1e-12);
        assert!((fractions[1] - 0.5).abs() < 1e-12);
        let sum: f64 = fractions
            .iter()
            .zip([4.0, 2.0])
            .map(|(&tau, r)| tau * r)
            .sum();
        assert!((sum - 3.0).abs() < 1e-12);
    }

    #[test]
    fn slot_fractions_without_floors_serve_only_the_best() {
        let (fractions, best) = optimal_slot_fractions(&[2.0, 5.0, 3.0], &[0.0; 3]).unwrap();
        assert_eq!(best, 1);
        assert_eq!(fractions, vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn slot_fractions_detect_overcommitted_floors() {
        assert!(optimal_slot_fractions(&[2.0, 2.0], &[1.5, 1.5]).is_none());
    }

    #[test]
    fn equal_rates_make_the_split_irrelevant() {
        for r_min in [0.0, 0.5, 1.0] {
            let (fractions, _) = optimal_slot_fractions(&[3.0; 3], &[r_min; 3]).unwrap();
            let sum: f64 = fractions.iter().map(|&tau| tau * 3.0).sum();
            assert!((sum - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn slot_fractions_match_a_simplex_grid_search() {
        // Linear objective over the simplex: the vertex rule must match a fine
        // grid search over feasible fraction vectors (three users).
        let full_rates = [5.0, 3.5, 2.0];
        let r_min = [0.8, 0.6, 0.4];
        let (fractions, _) = optimal_slot_fractions(&full_rates, &r_min).unwrap();
        let vertex_value: f64 = fractions
            .iter()
            .zip(full_rates)
            .map(|(&tau, r)| tau * r)
            .sum();
        let tau_min: Vec<f64> = full_rates
            .iter()
            .zip(r_min)
            .map(|(&r, floor)| floor / r)
            .collect();
        let mut best_grid = f64::NEG_INFINITY;
        let steps = 400;
        for i in 0..=steps {
            let tau0 = tau_min[0] + (1.0 - tau_min[0]) * i as f64 / steps as f64;
            for j in 0..=steps {
                let tau1 = tau_min[1] + (1.0 - tau_min[1]) * j as f64 / steps as f64;
                let tau2 = 1.0 - tau0 - tau1;
                if tau2 < tau_min[2] {
                    continue;
                }
                best_grid = best_grid
                    .max(tau0 * full_rates[0] + tau1 * full_rates[1] + tau2 * full_rates[2]);
            }
        }
        assert!(vertex_value >= best_grid - 1e-9);
    }

    #[test]
    fn tdma_parks_each_slot_over_its_user() {
        let params = SystemParams::default();
        let users = vec![
            UserPosition::new(15.0, 2.0, &params).unwrap(),
            UserPosition::new(40.0, -1.0, &params).unwrap(),
        ];
        let dep = Deployment::new(users, vec![1.0, 1.0], vec![0.5, 0.5]).unwrap();
        let sol = tdma_exhaustive(&dep, &params, 1e-3);
        assert!(sol.feasible);
        assert!(crate::rate::qos_satisfied(&sol.rates, dep.r_min()));
        // Residual goes to one user; the other sits exactly on its floor.
        let slack: Vec<f64> = sol
            .rates
            .iter()
            .zip(dep.r_min())
            .map(|(r, floor)| r - floor)
            .collect();
        assert!(slack.iter().filter(|s| **s > 1e-6).count() == 1);
    }

    #[test]
    fn tdma_without_floors_serves_only_the_best_user() {
        let params = SystemParams::default();
        let dep = Deployment::sample(5, 3, &params, 1.0, 0.0);
        let sol = tdma_exhaustive(&dep, &params, 1e-3);
        let nonzero: Vec<&f64> = sol.rates.iter().filter(|r| **r > 0.0).collect();
        assert_eq!(nonzero.len(), 1);
        assert!((sol.sum_rate - *nonzero[0]).abs() < 1e-12);
    }

    #[test]
    fn tdma_flags_overcommitted_floors() {
        let params = SystemParams::default();
        let users = vec![
            UserPosition::new(10.0, 0.0, &params).unwrap(),
            UserPosition::new(50.0, 0.0, &params).unwrap(),
        ];
        let dep = Deployment::new(users, vec![1.0, 1.0], vec![12.0, 12.0]).unwrap();
        let sol = tdma_exhaustive(&dep, &params, 1e-3);
        assert!(!sol.feasible);
    }
}
