//! Open-loop day replay: every reading is scored on its own and commands
//! never feed back into the recorded indoor temperature.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use thiserror::Error;

use crate::actuator::ActuatorRouter;
use crate::baseline::{baseline_decide, ThresholdConfig};
use crate::controller::{ClimateController, ClimateInputs, HvacState};
use crate::error::FuzzyError;
use crate::ingest::{ClimateReading, TimeOfDay};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("no readings to simulate")]
    Empty,
    #[error("at {time}: {source}")]
    Controller {
        time: TimeOfDay,
        #[source]
        source: FuzzyError,
    },
    #[error("schedules diverge at entry {index}: baseline {baseline}, fuzzy {fuzzy}")]
    Mismatch {
        index: usize,
        baseline: String,
        fuzzy: String,
    },
    #[error("actuator sink failed: {0}")]
    Sink(#[from] std::io::Error),
}

/// Which controller produced a schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ControllerKind {
    Fuzzy,
    Baseline,
}

impl ControllerKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ControllerKind::Fuzzy => "fuzzy",
            ControllerKind::Baseline => "baseline",
        }
    }
}

impl fmt::Display for ControllerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A controller ready to score readings.
#[derive(Debug, Clone, Copy)]
pub enum Policy<'a> {
    Fuzzy(&'a ClimateController),
    Baseline(&'a ThresholdConfig),
}

impl Policy<'_> {
    pub fn kind(&self) -> ControllerKind {
        match self {
            Policy::Fuzzy(_) => ControllerKind::Fuzzy,
            Policy::Baseline(_) => ControllerKind::Baseline,
        }
    }

    pub fn decide(&self, r: &ClimateReading) -> Result<ScheduleEntry, SimError> {
        let (state, detail) = match self {
            Policy::Fuzzy(ctrl) => {
                let decision = ctrl
                    .evaluate(&ClimateInputs {
                        outdoor_temp: r.outdoor_temp,
                        outdoor_humidity: r.humidity,
                        indoor_temp: r.indoor_temp,
                    })
                    .map_err(|source| SimError::Controller {
                        time: r.time,
                        source,
                    })?;
                (
                    decision.command.state,
                    EntryDetail::Fuzzy {
                        apparent: decision.apparent.crisp,
                        action_value: decision.command.action_value,
                    },
                )
            }
            Policy::Baseline(cfg) => {
                let state = baseline_decide(r.indoor_temp, cfg);
                (state, EntryDetail::Band(cfg.band_label(state)))
            }
        };
        Ok(ScheduleEntry {
            time: r.time,
            state,
            detail,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum EntryDetail {
    Fuzzy { apparent: f64, action_value: f64 },
    Band(String),
}

impl EntryDetail {
    /// Action value to three decimals for fuzzy entries, the threshold band
    /// for baseline entries.
    pub fn action_cell(&self) -> String {
        match self {
            EntryDetail::Fuzzy { action_value, .. } => format!("{action_value:.3}"),
            EntryDetail::Band(band) => band.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleEntry {
    pub time: TimeOfDay,
    pub state: HvacState,
    pub detail: EntryDetail,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleReport {
    pub controller: ControllerKind,
    pub entries: Vec<ScheduleEntry>,
}

impl ScheduleReport {
    pub fn hours(&self) -> SystemHours {
        let count = |f: fn(HvacState) -> bool| self.entries.iter().filter(|e| f(e.state)).count();
        SystemHours {
            heating_on: count(HvacState::is_heating),
            heating_max: count(|s| s == HvacState::HeatMax),
            cooling_on: count(HvacState::is_cooling),
            cooling_max: count(|s| s == HvacState::CoolMax),
        }
    }

    pub fn states(&self) -> impl Iterator<Item = HvacState> + '_ {
        self.entries.iter().map(|e| e.state)
    }
}

/// Each reading counts as one hour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SystemHours {
    pub heating_on: usize,
    pub heating_max: usize,
    pub cooling_on: usize,
    pub cooling_max: usize,
}

impl SystemHours {
    pub fn total_on(&self) -> usize {
        self.heating_on + self.cooling_on
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SavingsSummary {
    pub baseline: SystemHours,
    pub fuzzy: SystemHours,
    /// `None` when the baseline never ran that system.
    pub heating_saving_pct: Option<f64>,
    pub cooling_saving_pct: Option<f64>,
    pub combined_saving_pct: Option<f64>,
}

/// `(base - fuzzy) / base` as a percentage, undefined for `base == 0`.
pub fn saving_pct(base_on: usize, fuzzy_on: usize) -> Option<f64> {
    (base_on > 0).then(|| 100.0 * (base_on as f64 - fuzzy_on as f64) / base_on as f64)
}

/// Two decimals with trailing zeros trimmed: `27.27%`, `62.5%`, `0%`.
pub fn format_pct(pct: Option<f64>) -> String {
    match pct {
        None => "n/a".to_string(),
        Some(p) => {
            let s = format!("{p:.2}");
            let s = s.trim_end_matches('0').trim_end_matches('.');
            let s = if s == "-0" { "0" } else { s };
            format!("{s}%")
        }
    }
}

pub fn run_simulation(readings: &[ClimateReading], policy: Policy<'_>) -> Result<ScheduleReport, SimError> {
    if readings.is_empty() {
        return Err(SimError::Empty);
    }
    let entries = readings
        .iter()
        .map(|r| policy.decide(r))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ScheduleReport {
        controller: policy.kind(),
        entries,
    })
}

/// Like [`run_simulation`] but also pushes every state through `router`.
pub fn run_with_actuators(
    readings: &[ClimateReading],
    policy: Policy<'_>,
    router: &mut ActuatorRouter<'_>,
) -> Result<ScheduleReport, SimError> {
    let report = run_simulation(readings, policy)?;
    for e in &report.entries {
        router.dispatch(&e.time.to_string(), e.state)?;
    }
    Ok(report)
}

pub fn compare(base: &ScheduleReport, fuzzy: &ScheduleReport) -> Result<SavingsSummary, SimError> {
    let n = base.entries.len().max(fuzzy.entries.len());
    for i in 0..n {
        let b = base.entries.get(i).map(|e| e.time);
        let f = fuzzy.entries.get(i).map(|e| e.time);
        if b != f {
            let show = |t: Option<TimeOfDay>| t.map_or("<none>".to_string(), |t| t.to_string());
            return Err(SimError::Mismatch {
                index: i,
                baseline: show(b),
                fuzzy: show(f),
            });
        }
    }
    let bh = base.hours();
    let fh = fuzzy.hours();
    Ok(SavingsSummary {
        baseline: bh,
        fuzzy: fh,
        heating_saving_pct: saving_pct(bh.heating_on, fh.heating_on),
        cooling_saving_pct: saving_pct(bh.cooling_on, fh.cooling_on),
        combined_saving_pct: saving_pct(bh.total_on(), fh.total_on()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(ReportFormat::Text),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(format!("unknown format `{other}` (expected text or csv)")),
        }
    }
}

pub const REPORT_CSV_HEADER: &str = "time,controller,state,action_value";

/// Renders schedules and, when given, the savings summary.
///
/// CSV output carries one row per schedule entry and no summary, ready for
/// plotting. Text output lists each schedule followed by the on-hour table.
pub fn emit_report(
    summary: Option<&SavingsSummary>,
    schedules: &[&ScheduleReport],
    format: ReportFormat,
) -> String {
    let mut out = String::new();
    match format {
        ReportFormat::Csv => {
            let _ = writeln!(out, "{REPORT_CSV_HEADER}");
            for s in schedules {
                for e in &s.entries {
                    let _ = writeln!(
                        out,
                        "{},{},{},{}",
                        e.time,
                        s.controller,
                        e.state,
                        e.detail.action_cell()
                    );
                }
            }
        }
        ReportFormat::Text => {
            for s in schedules {
                let _ = writeln!(out, "controller: {}", s.controller);
                let _ = writeln!(out, "{:<6} {:<12} action", "time", "state");
                for e in &s.entries {
                    let _ = writeln!(out, "{:<6} {:<12} {}", e.time.to_string(), e.state.as_str(), e.detail.action_cell());
                }
                let h = s.hours();
                let _ = writeln!(
                    out,
                    "heating on {} h (max {} h), cooling on {} h (max {} h)",
                    h.heating_on, h.heating_max, h.cooling_on, h.cooling_max
                );
                out.push('\n');
            }
            if let Some(sum) = summary {
                let _ = writeln!(out, "{:<16} {:>8} {:>8} {:>8}", "on-hours", "baseline", "fuzzy", "saving");
                let rows = [
                    ("heating", sum.baseline.heating_on, sum.fuzzy.heating_on, Some(sum.heating_saving_pct)),
                    ("heating at max", sum.baseline.heating_max, sum.fuzzy.heating_max, None),
                    ("cooling", sum.baseline.cooling_on, sum.fuzzy.cooling_on, Some(sum.cooling_saving_pct)),
                    ("cooling at max", sum.baseline.cooling_max, sum.fuzzy.cooling_max, None),
                    ("combined", sum.baseline.total_on(), sum.fuzzy.total_on(), Some(sum.combined_saving_pct)),
                ];
                for (label, b, f, pct) in rows {
                    let pct = pct.map(format_pct).unwrap_or_default();
                    let _ = writeln!(out, "{label:<16} {b:>8} {f:>8} {pct:>8}");
                }
            }
        }
    }
    out
}
