//! Benchmark fixtures shared by the criterion targets.

use pinch_core::geometry::{Deployment, SystemParams};

/// A reproducible three-user scenario at the default physics.
pub fn reference_instance(seed: u64, r_min: f64) -> (SystemParams, Deployment) {
    let params = SystemParams::default();
    let dep = Deployment::sample(seed, 3, &params, 1.0, r_min);
    (params, dep)
}
