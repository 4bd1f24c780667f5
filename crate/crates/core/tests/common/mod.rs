//! Shared generators for the property and acceptance suites.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Channels sorted descending in `[0.5, 50)`, floors in `[0, floor_max)`,
/// caps in `[0.5, 2)`.
pub fn random_allocation_instance(
    rng: &mut ChaCha8Rng,
    max_users: usize,
    floor_max: f64,
) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let m = rng.random_range(1..=max_users);
    let mut channels: Vec<f64> = (0..m).map(|_| rng.random_range(0.5..50.0)).collect();
    channels.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let r_min: Vec<f64> = (0..m).map(|_| rng.random_range(0.0..floor_max)).collect();
    let p_max: Vec<f64> = (0..m).map(|_| rng.random_range(0.5..2.0)).collect();
    (channels, r_min, p_max)
}

pub fn relative_gap(value: f64, reference: f64) -> f64 {
    (value - reference).abs() / reference.abs().max(1e-15)
}
