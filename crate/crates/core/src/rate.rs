//! NOMA decoding order, per-user achievable rates, the telescoped sum rate,
//! rate-floor checks, and the time-shared (TDMA) rate model.
//!
//! Decode order convention: users are decoded strongest effective channel
//! first, so the user at decode index 0 is interfered by everyone decoded
//! after it and the last user sees a clean channel. Because the decode order
//! depends on the antenna position, it must be recomputed whenever the
//! position changes. The sum of the per-user rates collapses to
//! `log2(1 + sum_m P_m h_m)` and is independent of the order.

use std::cmp::Ordering;

use thiserror::Error;

use crate::geometry::{effective_channel, Deployment, SystemParams};

/// Relative tolerance used for rate and power comparisons.
pub const QOS_REL_TOL: f64 = 1e-9;

/// Absolute floor below which relative comparisons degenerate.
pub const ABS_FLOOR: f64 = 1e-15;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RateError {
    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("slot fraction {value} for user {index} is negative")]
    NegativeFraction { index: usize, value: f64 },
    #[error("slot fractions sum to {sum}, expected 1")]
    FractionsOffSimplex { sum: f64 },
}

/// Per-user rates in decode order, plus the permutation back to user indices.
#[derive(Debug, Clone, PartialEq)]
pub struct RateVector {
    rates: Vec<f64>,
    decode_order: Vec<usize>,
}

impl RateVector {
    /// `decode_order[k]` is the original index of the user decoded k-th.
    pub fn new(rates: Vec<f64>, decode_order: Vec<usize>) -> Self {
        assert_eq!(rates.len(), decode_order.len());
        Self {
            rates,
            decode_order,
        }
    }

    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }

    pub fn in_decode_order(&self) -> &[f64] {
        &self.rates
    }

    pub fn decode_order(&self) -> &[usize] {
        &self.decode_order
    }

    /// Rates rearranged to original user order.
    pub fn by_user(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.rates.len()];
        for (k, &user) in self.decode_order.iter().enumerate() {
            out[user] = self.rates[k];
        }
        out
    }
}

/// Decode permutation at `x_pin`: effective channels non-increasing along the
/// result, ties broken by ascending original index.
pub fn sort_users_by_channel(dep: &Deployment, x_pin: f64, params: &SystemParams) -> Vec<usize> {
    let channels: Vec<f64> = dep
        .users()
        .iter()
        .map(|u| effective_channel(u, x_pin, params))
        .collect();
    let mut order: Vec<usize> = (0..channels.len()).collect();
    order.sort_by(|&a, &b| {
        channels[b]
            .partial_cmp(&channels[a])
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(&b))
    });
    order
}

/// Per-user achievable rates under successive interference cancellation.
///
/// `powers` and `channels` are aligned in decode order; the user at index k
/// is interfered by users k+1.. and the last user sees no interference.
pub fn noma_rates(powers: &[f64], channels: &[f64]) -> Vec<f64> {
    assert_eq!(powers.len(), channels.len());
    let mut rates = vec![0.0; powers.len()];
    let mut interference = 0.0;
    for k in (0..powers.len()).rev() {
        let signal = powers[k] * channels[k];
        rates[k] = (1.0 + signal / (interference + 1.0)).log2();
        interference += signal;
    }
    rates
}

/// Telescoped sum rate `log2(1 + sum_m P_m h_m)`.
///
/// Equals the sum of [`noma_rates`] for any decode order.
pub fn noma_sum_rate_closed_form(powers: &[f64], channels: &[f64]) -> f64 {
    assert_eq!(powers.len(), channels.len());
    let received: f64 = powers.iter().zip(channels).map(|(&p, &h)| p * h).sum();
    (1.0 + received).log2()
}

/// True when `rate` meets `floor` up to a relative tolerance.
pub fn meets_rate_floor(rate: f64, floor: f64, rel_tol: f64) -> bool {
    rate >= floor - floor.abs() * rel_tol - ABS_FLOOR
}

/// Checks every rate against its floor at the default tolerance.
pub fn qos_satisfied(rates: &[f64], r_min: &[f64]) -> bool {
    qos_satisfied_with_tol(rates, r_min, QOS_REL_TOL)
}

pub fn qos_satisfied_with_tol(rates: &[f64], r_min: &[f64], rel_tol: f64) -> bool {
    assert_eq!(rates.len(), r_min.len());
    rates
        .iter()
        .zip(r_min)
        .all(|(&rate, &floor)| meets_rate_floor(rate, floor, rel_tol))
}

/// Time-shared rates: user m is served alone for a fraction of the frame with
/// the antenna parked at its own slot position, at full power.
///
/// `fractions` must lie on the unit simplex (tolerance 1e-9 on the sum).
pub fn tdma_rates(
    dep: &Deployment,
    fractions: &[f64],
    slot_positions: &[f64],
    params: &SystemParams,
) -> Result<Vec<f64>, RateError> {
    let m = dep.num_users();
    for got in [fractions.len(), slot_positions.len()] {
        if got != m {
            return Err(RateError::LengthMismatch { expected: m, got });
        }
    }
    let mut sum = 0.0;
    for (index, &tau) in fractions.iter().enumerate() {
        if tau < 0.0 {
            return Err(RateError::NegativeFraction { index, value: tau });
        }
        sum += tau;
    }
    if (sum - 1.0).abs() > 1e-9 {
        return Err(RateError::FractionsOffSimplex { sum });
    }
    Ok(dep
        .users()
        .iter()
        .enumerate()
        .map(|(m_idx, user)| {
            let h = effective_channel(user, slot_positions[m_idx], params);
            fractions[m_idx] * (1.0 + dep.p_max()[m_idx] * h).log2()
        })
        .collect())
}
