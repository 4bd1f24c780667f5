//! Physical constants, service-area geometry, and effective uplink channels.
//!
//! The antenna radiates from a single point that can slide along a waveguide
//! mounted parallel to the x-axis at height `height`. Users sit on the ground
//! plane inside a `region_len` x `region_width` rectangle centered on the
//! waveguide axis. Links are pure line-of-sight free-space paths; the channel
//! gain of a user is the path gain over the squared 3-D distance, normalized
//! by the receiver noise power.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default propagation speed, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("{name} must be strictly positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("user x = {x} m lies outside [0, {region_len}]")]
    UserOutsideRegionX { x: f64, region_len: f64 },
    #[error("user y = {y} m lies outside [-{half_width}, {half_width}]")]
    UserOutsideRegionY { y: f64, half_width: f64 },
    #[error("deployment needs one entry per user: {users} users, {p_max} power caps, {r_min} rate floors")]
    LengthMismatch {
        users: usize,
        p_max: usize,
        r_min: usize,
    },
    #[error("deployment must contain at least one user")]
    Empty,
    #[error("power cap for user {index} must be positive, got {value}")]
    NonPositivePowerCap { index: usize, value: f64 },
    #[error("rate floor for user {index} must be non-negative, got {value}")]
    NegativeRateFloor { index: usize, value: f64 },
}

/// Carrier, geometry, and noise constants shared by every solver.
///
/// All values are SI: Hz, m, W. dBm conversions happen at the config/CLI
/// boundary, never here.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Carrier frequency, Hz.
    pub carrier_hz: f64,
    /// Antenna height above the user plane, m.
    pub height: f64,
    /// Receiver noise power, W.
    pub noise_w: f64,
    /// Waveguide length: the antenna may sit anywhere in `[0, waveguide_len]`, m.
    pub waveguide_len: f64,
    /// Service region extent along the waveguide axis, m.
    pub region_len: f64,
    /// Service region width across the waveguide axis, m.
    pub region_width: f64,
    /// Propagation speed, m/s.
    pub light_speed: f64,
}

impl SystemParams {
    pub fn new(
        carrier_hz: f64,
        height: f64,
        noise_w: f64,
        waveguide_len: f64,
        region_len: f64,
        region_width: f64,
    ) -> Result<Self, GeometryError> {
        let params = Self {
            carrier_hz,
            height,
            noise_w,
            waveguide_len,
            region_len,
            region_width,
            light_speed: SPEED_OF_LIGHT,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_light_speed(mut self, light_speed: f64) -> Result<Self, GeometryError> {
        self.light_speed = light_speed;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        let fields = [
            ("carrier_hz", self.carrier_hz),
            ("height", self.height),
            ("noise_w", self.noise_w),
            ("waveguide_len", self.waveguide_len),
            ("region_len", self.region_len),
            ("region_width", self.region_width),
            ("light_speed", self.light_speed),
        ];
        for (name, value) in fields {
            if !value.is_finite() || value <= 0.0 {
                return Err(GeometryError::NonPositive { name, value });
            }
        }
        Ok(())
    }
}

impl Default for SystemParams {
    /// 28 GHz carrier, 3 m antenna height, -90 dBm noise, 60 m x 20 m region,
    /// waveguide spanning the full region length.
    fn default() -> Self {
        Self {
            carrier_hz: 28e9,
            height: 3.0,
            noise_w: 1e-12,
            waveguide_len: 60.0,
            region_len: 60.0,
            region_width: 20.0,
            light_speed: SPEED_OF_LIGHT,
        }
    }
}

/// Free-space path gain `c^2 / (16 pi^2 f^2)`, m^2.
pub fn path_gain_eta(params: &SystemParams) -> f64 {
    let c = params.light_speed;
    let f = params.carrier_hz;
    c * c / (16.0 * std::f64::consts::PI.powi(2) * f * f)
}

/// A user location on the ground plane, m.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UserPosition {
    pub x: f64,
    pub y: f64,
}

impl UserPosition {
    pub fn new(x: f64, y: f64, params: &SystemParams) -> Result<Self, GeometryError> {
        if !(0.0..=params.region_len).contains(&x) {
            return Err(GeometryError::UserOutsideRegionX {
                x,
                region_len: params.region_len,
            });
        }
        let half_width = params.region_width / 2.0;
        if !(-half_width..=half_width).contains(&y) {
            return Err(GeometryError::UserOutsideRegionY { y, half_width });
        }
        Ok(Self { x, y })
    }
}

/// Squared 3-D distance from the antenna at `(x_pin, 0, height)` to a user, m^2.
///
/// Never below `height^2`; the minimum is attained directly overhead.
pub fn squared_distance(user: &UserPosition, x_pin: f64, params: &SystemParams) -> f64 {
    let dx = x_pin - user.x;
    dx * dx + user.y * user.y + params.height * params.height
}

/// Noise-normalized channel gain `eta / (distance^2 * noise)`, 1/W.
pub fn effective_channel(user: &UserPosition, x_pin: f64, params: &SystemParams) -> f64 {
    path_gain_eta(params) / (squared_distance(user, x_pin, params) * params.noise_w)
}

/// Sum of received power densities `sum_m powers[m] / distance_m^2` at `x_pin`.
///
/// This is the position objective of the placement solvers: maximizing it is
/// equivalent to maximizing the sum rate because the channel-normalization
/// constants factor out.
pub fn placement_objective(
    dep: &Deployment,
    powers: &[f64],
    x_pin: f64,
    params: &SystemParams,
) -> f64 {
    dep.users()
        .iter()
        .zip(powers)
        .map(|(user, &p)| p / squared_distance(user, x_pin, params))
        .sum()
}

/// A set of users with their per-user power caps (W) and rate floors (bits/s/Hz).
///
/// Vectors are indexed by original user index; decode-order views are produced
/// by the rate module when an antenna position is fixed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Deployment {
    users: Vec<UserPosition>,
    p_max: Vec<f64>,
    r_min: Vec<f64>,
}

impl Deployment {
    pub fn new(
        users: Vec<UserPosition>,
        p_max: Vec<f64>,
        r_min: Vec<f64>,
    ) -> Result<Self, GeometryError> {
        if users.is_empty() {
            return Err(GeometryError::Empty);
        }
        if users.len() != p_max.len() || users.len() != r_min.len() {
            return Err(GeometryError::LengthMismatch {
                users: users.len(),
                p_max: p_max.len(),
                r_min: r_min.len(),
            });
        }
        for (index, &value) in p_max.iter().enumerate() {
            if !value.is_finite() || value <= 0.0 {
                return Err(GeometryError::NonPositivePowerCap { index, value });
            }
        }
        for (index, &value) in r_min.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(GeometryError::NegativeRateFloor { index, value });
            }
        }
        Ok(Self {
            users,
            p_max,
            r_min,
        })
    }

    /// Draws `m` users uniformly over the service region with a common power
    /// cap and rate floor.
    ///
    /// The generator is ChaCha8 seeded from `seed`, so the same seed yields
    /// the same deployment on every platform.
    pub fn sample(seed: u64, m: usize, params: &SystemParams, p_max: f64, r_min: f64) -> Self {
        assert!(m >= 1, "deployment needs at least one user");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let half_width = params.region_width / 2.0;
        let users = (0..m)
            .map(|_| UserPosition {
                x: rng.random_range(0.0..=params.region_len),
                y: rng.random_range(-half_width..=half_width),
            })
            .collect();
        Self {
            users,
            p_max: vec![p_max; m],
            r_min: vec![r_min; m],
        }
    }

    pub fn num_users(&self) -> usize {
        self.users.len()
    }

    pub fn users(&self) -> &[UserPosition] {
        &self.users
    }

    pub fn p_max(&self) -> &[f64] {
        &self.p_max
    }

    pub fn r_min(&self) -> &[f64] {
        &self.r_min
    }

    /// True when at least one user has a positive rate floor.
    pub fn has_rate_floors(&self) -> bool {
        self.r_min.iter().any(|&r| r > 0.0)
    }

    /// Effective channels of all users at `x_pin`, in original user order.
    pub fn channels_at(&self, x_pin: f64, params: &SystemParams) -> Vec<f64> {
        self.users
            .iter()
            .map(|u| effective_channel(u, x_pin, params))
            .collect()
    }
}
