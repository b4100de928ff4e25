//! Routes HVAC states to actuators. The reference actuator is a panel of five
//! LEDs: two red (heating), one blue (idle) and two yellow (cooling).

use std::io::Write;

use crate::controller::HvacState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ActuatorState {
    pub yellow_leds_on: u8,
    pub red_leds_on: u8,
    pub blue_led_on: bool,
}

pub fn route(state: HvacState) -> ActuatorState {
    let (yellow, red, blue) = match state {
        HvacState::CoolMax => (2, 0, false),
        HvacState::CoolNormal => (1, 0, false),
        HvacState::Off => (0, 0, true),
        HvacState::HeatNormal => (0, 1, false),
        HvacState::HeatMax => (0, 2, false),
    };
    ActuatorState {
        yellow_leds_on: yellow,
        red_leds_on: red,
        blue_led_on: blue,
    }
}

/// One routed command as seen by a sink.
#[derive(Debug, Clone, PartialEq)]
pub struct Dispatch {
    pub timestamp: String,
    pub state: HvacState,
    pub actuators: ActuatorState,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ack {
    Changed,
    Unchanged,
}

/// Receives dispatches sequentially from a single thread. Applying the same
/// actuator state twice must leave the actuators as they were.
pub trait ActuatorSink {
    fn apply(&mut self, dispatch: &Dispatch) -> std::io::Result<Ack>;
}

/// Writes `<timestamp> <state> yellow=<n> red=<n> blue=<0|1>` per dispatch.
pub struct LogSink<W> {
    out: W,
    current: Option<ActuatorState>,
}

impl<W: Write> LogSink<W> {
    pub fn new(out: W) -> Self {
        Self { out, current: None }
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

pub fn log_line(d: &Dispatch) -> String {
    format!(
        "{} {} yellow={} red={} blue={}",
        d.timestamp,
        d.state,
        d.actuators.yellow_leds_on,
        d.actuators.red_leds_on,
        u8::from(d.actuators.blue_led_on)
    )
}

impl<W: Write> ActuatorSink for LogSink<W> {
    fn apply(&mut self, d: &Dispatch) -> std::io::Result<Ack> {
        writeln!(self.out, "{}", log_line(d))?;
        self.out.flush()?;
        let ack = if self.current == Some(d.actuators) {
            Ack::Unchanged
        } else {
            Ack::Changed
        };
        self.current = Some(d.actuators);
        Ok(ack)
    }
}

/// Keeps every dispatch in memory.
#[derive(Debug, Default)]
pub struct RecordingSink {
    pub dispatches: Vec<Dispatch>,
}

impl RecordingSink {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn current(&self) -> Option<ActuatorState> {
        self.dispatches.last().map(|d| d.actuators)
    }
}

impl ActuatorSink for RecordingSink {
    fn apply(&mut self, d: &Dispatch) -> std::io::Result<Ack> {
        let ack = if self.current() == Some(d.actuators) {
            Ack::Unchanged
        } else {
            Ack::Changed
        };
        self.dispatches.push(d.clone());
        Ok(ack)
    }
}

/// Fans each state out to every registered sink, in registration order.
#[derive(Default)]
pub struct ActuatorRouter<'a> {
    sinks: Vec<&'a mut dyn ActuatorSink>,
}

impl<'a> ActuatorRouter<'a> {
    pub fn new() -> Self {
        Self { sinks: Vec::new() }
    }

    pub fn with_sink(mut self, sink: &'a mut dyn ActuatorSink) -> Self {
        self.sinks.push(sink);
        self
    }

    pub fn dispatch(&mut self, timestamp: &str, state: HvacState) -> std::io::Result<Vec<Ack>> {
        let d = Dispatch {
            timestamp: timestamp.to_string(),
            state,
            actuators: route(state),
        };
        self.sinks.iter_mut().map(|s| s.apply(&d)).collect()
    }
}
