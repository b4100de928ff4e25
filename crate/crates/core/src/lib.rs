//! Fuzzy HVAC control from outdoor conditions.
//!
//! Outdoor humidity and temperature are combined by a Mamdani rule base into
//! an apparent temperature; a second rule base weighs it against the indoor
//! temperature to pick one of five heating/cooling states. The crate also
//! ships a threshold thermostat baseline, day-file and IoT feed ingestion,
//! actuator routing, and an open-loop replay harness comparing the two.
//!
//! ```
//! use fuzzclime::{ClimateController, ClimateInputs, HvacState};
//!
//! let ctrl = ClimateController::bundled();
//! let decision = ctrl
//!     .evaluate(&ClimateInputs { outdoor_temp: 20.0, outdoor_humidity: 55.0, indoor_temp: 20.0 })
//!     .unwrap();
//! assert_eq!(decision.command.state, HvacState::Off);
//! ```

pub mod actuator;
pub mod baseline;
pub mod config;
pub mod controller;
pub mod defuzz;
pub mod error;
pub mod ingest;
pub mod membership;
pub mod rules;
pub mod sim;
pub mod variable;

pub use baseline::{baseline_decide, ThresholdConfig};
pub use config::{parse_config, Registry};
pub use controller::{
    command_from_action, ApparentTemperature, ClimateController, ClimateInputs, Decision,
    HvacCommand, HvacState,
};
pub use defuzz::{defuzzify_centroid, DEFAULT_CENTROID_STEP};
pub use error::FuzzyError;
pub use ingest::{load_day_csv, ClimateReading, TimeOfDay};
pub use membership::PiecewiseLinearMF;
pub use rules::{Clause, Rule, RuleBase};
pub use sim::{compare, emit_report, run_simulation, Policy, ReportFormat, SavingsSummary, ScheduleReport};
pub use variable::{FuzzyValue, LinguisticVariable, Term};
