use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::controller::HvacState;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("invalid threshold configuration: {0}")]
pub struct ThresholdError(String);

/// Two-stage heating and two-stage cooling thermostat bands, in °C.
///
/// The printed bands leave (17, 18) and (22, 23) unassigned; they are closed
/// by extending heat-normal up to the start of the off band and off up to the
/// start of the cool-normal band. Cool-normal likewise extends to `cool_max_above`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdConfig {
    pub heat_max_below: f64,
    pub heat_normal_range: (f64, f64),
    pub off_range: (f64, f64),
    pub cool_normal_range: (f64, f64),
    pub cool_max_above: f64,
}

impl Default for ThresholdConfig {
    fn default() -> Self {
        Self {
            heat_max_below: 15.0,
            heat_normal_range: (15.0, 17.0),
            off_range: (18.0, 22.0),
            cool_normal_range: (23.0, 25.0),
            cool_max_above: 25.0,
        }
    }
}

impl ThresholdConfig {
    pub fn validate(&self) -> Result<(), ThresholdError> {
        let points = [
            self.heat_max_below,
            self.heat_normal_range.0,
            self.heat_normal_range.1,
            self.off_range.0,
            self.off_range.1,
            self.cool_normal_range.0,
            self.cool_normal_range.1,
            self.cool_max_above,
        ];
        if points.iter().any(|p| !p.is_finite()) {
            return Err(ThresholdError("thresholds must be finite".into()));
        }
        if points.windows(2).any(|w| w[0] > w[1]) {
            return Err(ThresholdError(format!(
                "bands must be ordered and non-overlapping, got {points:?}"
            )));
        }
        if self.off_range.0 >= self.cool_normal_range.0 {
            return Err(ThresholdError("off band must start below the cool-normal band".into()));
        }
        if self.heat_max_below >= self.off_range.0 {
            return Err(ThresholdError("heat-max threshold must lie below the off band".into()));
        }
        Ok(())
    }

    /// Temperature band that `state` occupies, e.g. `15..18` or `>25`.
    pub fn band_label(&self, state: HvacState) -> String {
        match state {
            HvacState::HeatMax => format!("<{}", self.heat_max_below),
            HvacState::HeatNormal => format!("{}..{}", self.heat_max_below, self.off_range.0),
            HvacState::Off => format!("{}..{}", self.off_range.0, self.cool_normal_range.0),
            HvacState::CoolNormal => {
                format!("{}..={}", self.cool_normal_range.0, self.cool_max_above)
            }
            HvacState::CoolMax => format!(">{}", self.cool_max_above),
        }
    }
}

/// Threshold thermostat decision for one indoor temperature.
pub fn baseline_decide(indoor_temp: f64, cfg: &ThresholdConfig) -> HvacState {
    let t = indoor_temp;
    if t < cfg.heat_max_below {
        HvacState::HeatMax
    } else if t < cfg.off_range.0 {
        HvacState::HeatNormal
    } else if t < cfg.cool_normal_range.0 {
        HvacState::Off
    } else if t <= cfg.cool_max_above {
        HvacState::CoolNormal
    } else {
        HvacState::CoolMax
    }
}
