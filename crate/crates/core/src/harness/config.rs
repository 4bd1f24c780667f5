//! Scenario configuration for the Monte-Carlo experiment driver.
//!
//! Configs are plain JSON; every field has a default matching the reference
//! scenario (28 GHz carrier, 3 m antenna height, -90 dBm noise, 3 users in a
//! 60 m x 20 m region, 100 realizations). dBm values convert to watts here,
//! at the config boundary; the core math is all SI.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::geometry::{GeometryError, SystemParams, SPEED_OF_LIGHT};
use crate::pso::PsoConfig;

use super::HarnessError;

/// Converts a dBm level to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

/// Converts watts to dBm.
pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * watts.log10() + 30.0
}

/// The four benchmark schemes the harness can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Swarm placement with greedy power control.
    NomaPso,
    /// Grid placement with greedy power control (upper bound).
    NomaExhaustive,
    /// Antenna frozen at the waveguide feed point.
    NomaFixed,
    /// Time division with per-slot grid placement.
    TdmaExhaustive,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [
        Scheme::NomaPso,
        Scheme::NomaExhaustive,
        Scheme::NomaFixed,
        Scheme::TdmaExhaustive,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Scheme::NomaPso => "noma_pso",
            Scheme::NomaExhaustive => "noma_exhaustive",
            Scheme::NomaFixed => "noma_fixed",
            Scheme::TdmaExhaustive => "tdma_exhaustive",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "noma_pso" => Ok(Scheme::NomaPso),
            "noma_exhaustive" => Ok(Scheme::NomaExhaustive),
            "noma_fixed" => Ok(Scheme::NomaFixed),
            "tdma_exhaustive" => Ok(Scheme::TdmaExhaustive),
            other => Err(format!(
                "unknown scheme '{other}' (expected one of noma_pso, noma_exhaustive, noma_fixed, tdma_exhaustive)"
            )),
        }
    }
}

/// What to do with realizations where a scheme cannot meet every rate floor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum OutagePolicy {
    /// Drop the realization from that scheme's average (outages still counted).
    #[default]
    Exclude,
    /// Keep it in the average as zero sum rate.
    CountZero,
}

/// Full experiment description: physics, population, sweeps, solver settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Carrier frequency, Hz.
    pub carrier_hz: f64,
    /// Antenna height, m.
    pub antenna_height_m: f64,
    /// Noise power, dBm.
    pub noise_dbm: f64,
    /// Service region length along the waveguide, m.
    pub region_len_m: f64,
    /// Service region width, m.
    pub region_width_m: f64,
    /// Waveguide length, m; defaults to the region length.
    pub waveguide_len_m: Option<f64>,
    /// Propagation speed, m/s.
    pub light_speed: f64,
    /// Users per realization.
    pub users: usize,
    /// Independent random realizations per sweep point.
    pub realizations: usize,
    /// Master seed; realization k draws its deployment from a seed derived
    /// from this, identically across schemes and sweep points.
    pub seed: u64,
    /// Power-budget sweep values, dBm per user.
    pub p_max_dbm: Vec<f64>,
    /// Rate-floor sweep values, bits/s/Hz per user.
    pub r_min: Vec<f64>,
    /// Power budget held fixed while sweeping the rate floor, dBm.
    pub fixed_p_max_dbm: f64,
    /// Rate floor held fixed while sweeping the power budget, bits/s/Hz.
    pub fixed_r_min: f64,
    /// Per-user rate floors for single-instance solves; overrides the common
    /// floor when set.
    pub r_min_per_user: Option<Vec<f64>>,
    /// Schemes to run, in output order.
    pub schemes: Vec<Scheme>,
    /// Swarm settings shared by all realizations (the seed field is
    /// re-derived per realization).
    pub pso: PsoConfig,
    /// Grid resolution for the exhaustive schemes, m.
    pub grid_step_m: f64,
    pub outage_policy: OutagePolicy,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            carrier_hz: 28e9,
            antenna_height_m: 3.0,
            noise_dbm: -90.0,
            region_len_m: 60.0,
            region_width_m: 20.0,
            waveguide_len_m: None,
            light_speed: SPEED_OF_LIGHT,
            users: 3,
            realizations: 100,
            seed: 1,
            p_max_dbm: vec![10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0],
            r_min: vec![0.5, 0.7, 0.9, 1.1, 1.3, 1.5],
            fixed_p_max_dbm: 30.0,
            fixed_r_min: 0.5,
            r_min_per_user: None,
            schemes: Scheme::ALL.to_vec(),
            pso: PsoConfig::default(),
            grid_step_m: 1e-3,
            outage_policy: OutagePolicy::Exclude,
        }
    }
}

impl ScenarioConfig {
    /// Physical parameters in SI units (noise converted from dBm).
    pub fn system_params(&self) -> Result<SystemParams, GeometryError> {
        let params = SystemParams {
            carrier_hz: self.carrier_hz,
            height: self.antenna_height_m,
            noise_w: dbm_to_watts(self.noise_dbm),
            waveguide_len: self.waveguide_len_m.unwrap_or(self.region_len_m),
            region_len: self.region_len_m,
            region_width: self.region_width_m,
            light_speed: self.light_speed,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        self.system_params()?;
        if self.users < 1 {
            return Err(HarnessError::Invalid("users must be >= 1".into()));
        }
        if self.realizations < 1 {
            return Err(HarnessError::Invalid("realizations must be >= 1".into()));
        }
        if self.p_max_dbm.is_empty() {
            return Err(HarnessError::Invalid("p_max_dbm sweep is empty".into()));
        }
        if self.r_min.is_empty() {
            return Err(HarnessError::Invalid("r_min sweep is empty".into()));
        }
        if self
            .r_min
            .iter()
            .chain(&self.r_min_per_user.clone().unwrap_or_default())
            .any(|&r| r < 0.0)
        {
            return Err(HarnessError::Invalid("rate floors must be >= 0".into()));
        }
        if self.fixed_r_min < 0.0 {
            return Err(HarnessError::Invalid("fixed_r_min must be >= 0".into()));
        }
        if let Some(per_user) = &self.r_min_per_user {
            if per_user.len() != self.users {
                return Err(HarnessError::Invalid(format!(
                    "r_min_per_user has {} entries for {} users",
                    per_user.len(),
                    self.users
                )));
            }
        }
        if self.schemes.is_empty() {
            return Err(HarnessError::Invalid("no schemes selected".into()));
        }
        if !self.grid_step_m.is_finite() || self.grid_step_m <= 0.0 {
            return Err(HarnessError::Invalid(format!(
                "grid_step_m must be positive, got {}",
                self.grid_step_m
            )));
        }
        self.pso
            .validate()
            .map_err(|message| HarnessError::Invalid(format!("pso: {message}")))?;
        Ok(())
    }
}
