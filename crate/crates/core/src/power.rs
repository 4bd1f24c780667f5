//! Power control at a fixed antenna position: closed-form minimum powers,
//! feasibility, greedy residual allocation, and an exact LP cross-check.
//!
//! All slices here are aligned in decode order (channels non-increasing).
//! The greedy is the production path; the LP solves the same problem by
//! enumerating basic feasible points and exists to validate the greedy, never
//! to back it.

use crate::geometry::{Deployment, SystemParams};
use crate::rate::{sort_users_by_channel, ABS_FLOOR, QOS_REL_TOL};

/// Outcome of a power-allocation solve, in decode order.
#[derive(Debug, Clone, PartialEq)]
pub struct AllocationResult {
    /// Per-user transmit powers, W. For infeasible instances these are the
    /// minimum powers, reported for diagnostics.
    pub powers: Vec<f64>,
    pub feasible: bool,
    /// Decode index at which the residual sweep stopped early because a
    /// previously served user's rate floor became binding.
    pub binding_user: Option<usize>,
    /// Set when rounding forced a power below its closed-form minimum and it
    /// was clamped back up.
    pub tolerance_breach: bool,
}

/// Smallest powers meeting every rate floor exactly, built from the last
/// decoded user (interference-free) backwards: each user must overcome the
/// minimum powers of everyone decoded after it.
pub fn min_powers(channels: &[f64], r_min: &[f64]) -> Vec<f64> {
    assert_eq!(channels.len(), r_min.len());
    let m = channels.len();
    let mut powers = vec![0.0; m];
    let mut floor_sum = 0.0; // sum of rate floors of users decoded after k
    for k in (0..m).rev() {
        let gamma = f64::exp2(r_min[k]) - 1.0;
        powers[k] = f64::exp2(floor_sum) * gamma / channels[k];
        floor_sum += r_min[k];
    }
    powers
}

/// True when every minimum power fits its cap (small relative slack for
/// rounding).
pub fn check_feasibility(p_min: &[f64], p_max: &[f64]) -> bool {
    assert_eq!(p_min.len(), p_max.len());
    p_min
        .iter()
        .zip(p_max)
        .all(|(&lo, &cap)| lo <= cap + cap.abs() * QOS_REL_TOL + ABS_FLOOR)
}

/// Sum-rate-optimal allocation under per-user caps and rate floors.
///
/// Starts from the minimum powers, then pours the residual budget into users
/// in decode order: the first user takes its full cap (its power interferes
/// with nobody), and each later user takes as much as every earlier user's
/// rate floor allows. Once a floor becomes binding the sweep stops; users
/// after the stop stay at their minimum powers.
pub fn greedy_residual_allocation(
    channels: &[f64],
    r_min: &[f64],
    p_max: &[f64],
) -> AllocationResult {
    let m = channels.len();
    assert_eq!(m, r_min.len());
    assert_eq!(m, p_max.len());
    let p_min = min_powers(channels, r_min);
    if !check_feasibility(&p_min, p_max) {
        return AllocationResult {
            powers: p_min,
            feasible: false,
            binding_user: None,
            tolerance_breach: false,
        };
    }
    let mut powers = p_min.clone();
    let mut binding_user = None;
    let mut tolerance_breach = false;
    powers[0] = p_max[0];
    for idx in 1..m {
        // Largest power user `idx` may take without breaking any earlier
        // user's floor, given the already-fixed powers before it and minimum
        // powers after it.
        let mut cap = f64::INFINITY;
        for j in 0..idx {
            let gamma = f64::exp2(r_min[j]) - 1.0;
            if gamma <= 0.0 {
                continue;
            }
            let mut budget = powers[j] * channels[j] / gamma - 1.0;
            for n in (j + 1)..m {
                if n == idx {
                    continue;
                }
                let p_n = if n < idx { powers[n] } else { p_min[n] };
                budget -= p_n * channels[n];
            }
            cap = cap.min(budget / channels[idx]);
        }
        if cap < p_max[idx] {
            if cap < p_min[idx] {
                tolerance_breach = true;
                powers[idx] = p_min[idx];
            } else {
                powers[idx] = cap;
            }
            binding_user = Some(idx);
            break;
        }
        powers[idx] = p_max[idx];
    }
    AllocationResult {
        powers,
        feasible: true,
        binding_user,
        tolerance_breach,
    }
}

/// Received-power objective `sum_k powers[k] * channels[k]` of an allocation.
pub fn allocation_objective(powers: &[f64], channels: &[f64]) -> f64 {
    powers.iter().zip(channels).map(|(&p, &h)| p * h).sum()
}

/// Exact reference solver for the same allocation problem, used in tests and
/// oracle checks.
///
/// The problem is linear once the floors are rewritten as received-power
/// inequalities, so its optimum sits on a basic feasible point: enumerate all
/// choices of `m` active constraints out of the `2m` (caps and floors), solve
/// the resulting square systems, and keep the best candidate that satisfies
/// everything. Intended for small `m`; cost grows as `C(2m, m)`.
pub fn lp_oracle(channels: &[f64], r_min: &[f64], p_max: &[f64]) -> AllocationResult {
    let m = channels.len();
    assert_eq!(m, r_min.len());
    assert_eq!(m, p_max.len());
    assert!(m <= 12, "the LP oracle enumerates vertices; m is capped");
    let gammas: Vec<f64> = r_min.iter().map(|&r| f64::exp2(r) - 1.0).collect();

    // Constraint rows over powers p: index k in [0, m) is the cap
    // p_k <= p_max[k]; index m + k is the floor
    // h_k p_k - gamma_k sum_{n>k} h_n p_n >= gamma_k.
    let total = 2 * m;
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in 0u32..(1u32 << total) {
        if mask.count_ones() as usize != m {
            continue;
        }
        let mut matrix = vec![vec![0.0; m]; m];
        let mut rhs = vec![0.0; m];
        let mut row = 0;
        for k in 0..total {
            if mask & (1 << k) == 0 {
                continue;
            }
            if k < m {
                matrix[row][k] = 1.0;
                rhs[row] = p_max[k];
            } else {
                let u = k - m;
                matrix[row][u] = channels[u];
                for n in (u + 1)..m {
                    matrix[row][n] = -gammas[u] * channels[n];
                }
                rhs[row] = gammas[u];
            }
            row += 1;
        }
        let Some(candidate) = solve_dense(&mut matrix, &mut rhs) else {
            continue;
        };
        if !satisfies_all(&candidate, channels, &gammas, p_max) {
            continue;
        }
        let objective = allocation_objective(&candidate, channels);
        match &best {
            Some((incumbent, _)) if objective <= *incumbent => {}
            _ => best = Some((objective, candidate)),
        }
    }
    match best {
        Some((_, powers)) => AllocationResult {
            powers,
            feasible: true,
            binding_user: None,
            tolerance_breach: false,
        },
        None => AllocationResult {
            powers: min_powers(channels, r_min),
            feasible: false,
            binding_user: None,
            tolerance_breach: false,
        },
    }
}

/// Gaussian elimination with partial pivoting; `None` when singular.
fn solve_dense(matrix: &mut [Vec<f64>], rhs: &mut [f64]) -> Option<Vec<f64>> {
    let n = rhs.len();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&a, &b| {
                matrix[a][col]
                    .abs()
                    .partial_cmp(&matrix[b][col].abs())
                    .unwrap()
            })
            .unwrap();
        if matrix[pivot_row][col].abs() < 1e-12 {
            return None;
        }
        matrix.swap(col, pivot_row);
        rhs.swap(col, pivot_row);
        let pivot = matrix[col].clone();
        for row in (col + 1)..n {
            let factor = matrix[row][col] / pivot[col];
            if factor == 0.0 {
                continue;
            }
            for (entry, p) in matrix[row][col..].iter_mut().zip(&pivot[col..]) {
                *entry -= factor * p;
            }
            rhs[row] -= factor * rhs[col];
        }
    }
    let mut solution = vec![0.0; n];
    for row in (0..n).rev() {
        let mut value = rhs[row];
        for col in (row + 1)..n {
            value -= matrix[row][col] * solution[col];
        }
        solution[row] = value / matrix[row][row];
    }
    Some(solution)
}

fn satisfies_all(powers: &[f64], channels: &[f64], gammas: &[f64], p_max: &[f64]) -> bool {
    let m = powers.len();
    for k in 0..m {
        let slack = QOS_REL_TOL * p_max[k].abs().max(1.0) + ABS_FLOOR;
        if powers[k] > p_max[k] + slack {
            return false;
        }
    }
    for k in 0..m {
        let interference: f64 = ((k + 1)..m).map(|n| powers[n] * channels[n]).sum();
        let lhs = powers[k] * channels[k];
        let required = gammas[k] * (interference + 1.0);
        let scale = lhs.abs().max(required.abs()).max(1.0);
        if lhs < required - QOS_REL_TOL * scale {
            return false;
        }
    }
    true
}

/// Decode order plus the allocation computed at a fixed antenna position.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionedAllocation {
    /// `order[k]` is the original index of the user decoded k-th.
    pub order: Vec<usize>,
    pub result: AllocationResult,
}

impl PositionedAllocation {
    /// Powers rearranged to original user order.
    pub fn powers_by_user(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.order.len()];
        for (k, &user) in self.order.iter().enumerate() {
            out[user] = self.result.powers[k];
        }
        out
    }
}

/// Sorts users by channel at `x_pin` and runs the greedy allocation in that
/// order.
pub fn allocate_at_position(
    dep: &Deployment,
    x_pin: f64,
    params: &SystemParams,
) -> PositionedAllocation {
    let order = sort_users_by_channel(dep, x_pin, params);
    let channels: Vec<f64> = {
        let all = dep.channels_at(x_pin, params);
        order.iter().map(|&u| all[u]).collect()
    };
    let r_min: Vec<f64> = order.iter().map(|&u| dep.r_min()[u]).collect();
    let p_max: Vec<f64> = order.iter().map(|&u| dep.p_max()[u]).collect();
    PositionedAllocation {
        result: greedy_residual_allocation(&channels, &r_min, &p_max),
        order,
    }
}
