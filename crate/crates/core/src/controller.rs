use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::Registry;
use crate::defuzz::{defuzzify_centroid, DEFAULT_CENTROID_STEP};
use crate::error::FuzzyError;
use crate::variable::{FuzzyValue, LinguisticVariable};

pub const HUMIDITY: &str = "humidity";
pub const OUTDOOR: &str = "outdoor";
pub const APPARENT: &str = "apparent";
pub const INDOOR: &str = "indoor";
pub const ACTION: &str = "action";
pub const APPARENT_RULES: &str = "apparent_temperature";
pub const ACTION_RULES: &str = "action";

/// The five discrete HVAC states, heating to cooling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HvacState {
    HeatMax,
    HeatNormal,
    Off,
    CoolNormal,
    CoolMax,
}

impl HvacState {
    pub const ALL: [HvacState; 5] = [
        HvacState::HeatMax,
        HvacState::HeatNormal,
        HvacState::Off,
        HvacState::CoolNormal,
        HvacState::CoolMax,
    ];

    /// Preference when two states are equally supported: less energy first.
    const TIE_ORDER: [HvacState; 5] = [
        HvacState::Off,
        HvacState::HeatNormal,
        HvacState::CoolNormal,
        HvacState::HeatMax,
        HvacState::CoolMax,
    ];

    /// Name of the matching term in the action variable.
    pub fn action_term(self) -> &'static str {
        match self {
            HvacState::HeatMax => "heat_max",
            HvacState::HeatNormal => "heat_normal",
            HvacState::Off => "no_system",
            HvacState::CoolNormal => "cool_normal",
            HvacState::CoolMax => "cool_max",
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            HvacState::HeatMax => "heat_max",
            HvacState::HeatNormal => "heat_normal",
            HvacState::Off => "off",
            HvacState::CoolNormal => "cool_normal",
            HvacState::CoolMax => "cool_max",
        }
    }

    pub fn is_heating(self) -> bool {
        matches!(self, HvacState::HeatMax | HvacState::HeatNormal)
    }

    pub fn is_cooling(self) -> bool {
        matches!(self, HvacState::CoolMax | HvacState::CoolNormal)
    }

    pub fn is_max_power(self) -> bool {
        matches!(self, HvacState::HeatMax | HvacState::CoolMax)
    }
}

impl fmt::Display for HvacState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for HvacState {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        HvacState::ALL
            .into_iter()
            .find(|st| st.as_str() == s)
            .ok_or_else(|| format!("unknown HVAC state `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClimateInputs {
    pub outdoor_temp: f64,
    pub outdoor_humidity: f64,
    pub indoor_temp: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApparentTemperature {
    pub crisp: f64,
    /// Rule-base output before defuzzification.
    pub degrees: FuzzyValue,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HvacCommand {
    pub state: HvacState,
    pub action_value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decision {
    pub apparent: ApparentTemperature,
    pub command: HvacCommand,
}

/// Maps a crisp action value to the state whose action term has the highest
/// membership there. Ties go to the state using less energy.
pub fn command_from_action(action: &LinguisticVariable, value: f64) -> HvacState {
    const TIE_EPS: f64 = 1e-12;
    let (value, _) = action.clamp(value);
    let degree = |st: HvacState| {
        action
            .term(st.action_term())
            .map_or(0.0, |t| t.mf.membership(value))
    };
    let best = HvacState::ALL.into_iter().map(degree).fold(0.0, f64::max);
    HvacState::TIE_ORDER
        .into_iter()
        .find(|&st| degree(st) >= best - TIE_EPS)
        .unwrap_or(HvacState::Off)
}

/// Two-stage fuzzy controller: outdoor conditions to apparent temperature,
/// then apparent and indoor temperature to an HVAC action.
///
/// The apparent temperature crosses between stages as a crisp centroid and
/// is fuzzified again for the second rule base.
#[derive(Debug, Clone)]
pub struct ClimateController {
    registry: Registry,
    step: f64,
}

impl ClimateController {
    pub fn new(registry: Registry) -> Result<Self, FuzzyError> {
        Self::with_step(registry, DEFAULT_CENTROID_STEP)
    }

    pub fn with_step(registry: Registry, step: f64) -> Result<Self, FuzzyError> {
        if !(step.is_finite() && step > 0.0) {
            return Err(FuzzyError::InvalidStep(step));
        }
        for name in [HUMIDITY, OUTDOOR, APPARENT, INDOOR, ACTION] {
            registry.variable(name)?;
        }
        let expect = |rb: &str, inputs: &[&str], output: &str| -> Result<(), FuzzyError> {
            let base = registry.rulebase(rb)?;
            let mut got: Vec<&str> = base.inputs().iter().map(String::as_str).collect();
            got.sort_unstable();
            let mut want = inputs.to_vec();
            want.sort_unstable();
            if got != want || base.output() != output {
                return Err(FuzzyError::InvalidRule {
                    rulebase: rb.to_string(),
                    reason: format!("expected inputs {inputs:?} and output `{output}`"),
                });
            }
            Ok(())
        };
        expect(APPARENT_RULES, &[HUMIDITY, OUTDOOR], APPARENT)?;
        expect(ACTION_RULES, &[INDOOR, APPARENT], ACTION)?;
        let action = registry.variable(ACTION)?;
        for st in HvacState::ALL {
            if !action.has_term(st.action_term()) {
                return Err(FuzzyError::UnknownTerm {
                    variable: ACTION.to_string(),
                    term: st.action_term().to_string(),
                });
            }
        }
        Ok(Self { registry, step })
    }

    /// Controller over the bundled configuration.
    pub fn bundled() -> Self {
        Self::new(Registry::bundled()).expect("bundled configuration drives the controller")
    }

    pub fn registry(&self) -> &Registry {
        &self.registry
    }

    pub fn centroid_step(&self) -> f64 {
        self.step
    }

    fn var(&self, name: &str) -> &LinguisticVariable {
        self.registry.variable(name).expect("checked at construction")
    }

    pub fn compute_apparent_temperature(
        &self,
        outdoor_temp: f64,
        humidity: f64,
    ) -> Result<ApparentTemperature, FuzzyError> {
        let inputs = HashMap::from([
            (HUMIDITY.to_string(), self.var(HUMIDITY).fuzzify(humidity)),
            (OUTDOOR.to_string(), self.var(OUTDOOR).fuzzify(outdoor_temp)),
        ]);
        let degrees = self.registry.rulebase(APPARENT_RULES)?.evaluate(&inputs)?;
        let crisp = defuzzify_centroid(self.var(APPARENT), &degrees, self.step)?;
        Ok(ApparentTemperature { crisp, degrees })
    }

    pub fn decide_action(
        &self,
        apparent: &ApparentTemperature,
        indoor_temp: f64,
    ) -> Result<HvacCommand, FuzzyError> {
        let inputs = HashMap::from([
            (APPARENT.to_string(), self.var(APPARENT).fuzzify(apparent.crisp)),
            (INDOOR.to_string(), self.var(INDOOR).fuzzify(indoor_temp)),
        ]);
        let degrees = self.registry.rulebase(ACTION_RULES)?.evaluate(&inputs)?;
        let action_value = defuzzify_centroid(self.var(ACTION), &degrees, self.step)?;
        Ok(HvacCommand {
            state: self.command_from_action(action_value),
            action_value,
        })
    }

    pub fn command_from_action(&self, action_value: f64) -> HvacState {
        command_from_action(self.var(ACTION), action_value)
    }

    pub fn evaluate(&self, inputs: &ClimateInputs) -> Result<Decision, FuzzyError> {
        let apparent =
            self.compute_apparent_temperature(inputs.outdoor_temp, inputs.outdoor_humidity)?;
        let command = self.decide_action(&apparent, inputs.indoor_temp)?;
        Ok(Decision { apparent, command })
    }
}
