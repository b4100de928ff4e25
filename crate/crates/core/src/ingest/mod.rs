//! Data collection: recorded day files, IoT feed documents and live polling.

mod day;
mod feeds;
mod poll;

pub use day::{load_day_csv, read_day_csv, write_day_csv, DAY_CSV_HEADER};
pub use feeds::{parse_midgar_json, parse_thingspeak_json, FeedSample};
pub use poll::{
    spawn_feed, FeedEvent, FeedKind, FeedSource, Fetch, FileReplay, HttpFetcher, LiveReading,
    Polled, Poller, Quantity, ReadingAssembler, DEFAULT_MAX_FAILURES, HTTP_TIMEOUT,
};

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("cannot read {path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("unexpected header `{found}`, expected `{DAY_CSV_HEADER}`")]
    Header { found: String },
    #[error("line {line}: {message}")]
    Row { line: u64, message: String },
    #[error("no data rows")]
    NoRows,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FeedError {
    #[error("invalid JSON document: {0}")]
    InvalidJson(String),
    #[error("feed has no entries")]
    EmptyFeed,
    #[error("missing field `{0}`")]
    MissingField(String),
    #[error("field `{field}` is not numeric: `{value}`")]
    NonNumeric { field: String, value: String },
    #[error("request to {endpoint} failed: {message}")]
    Http { endpoint: String, message: String },
    #[error("{0}")]
    Source(String),
    #[error("{failures} consecutive poll failures, last: {last}")]
    GaveUp { failures: u32, last: Box<FeedError> },
}

/// Wall-clock time of day, minutes resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TimeOfDay {
    hour: u8,
    minute: u8,
}

impl TimeOfDay {
    pub fn new(hour: u8, minute: u8) -> Option<Self> {
        (hour < 24 && minute < 60).then_some(Self { hour, minute })
    }

    pub fn hour(self) -> u8 {
        self.hour
    }

    pub fn minute(self) -> u8 {
        self.minute
    }

    /// Accepts `hh:mm` or an ISO-8601 date-time such as `2016-05-01T07:30:00Z`.
    pub fn from_timestamp(s: &str) -> Option<Self> {
        let s = s.trim();
        let clock = match s.split_once('T') {
            Some((_, rest)) => rest,
            None => s,
        };
        let mut parts = clock.splitn(3, ':');
        let hour = parts.next()?;
        let minute = parts.next()?;
        let minute = &minute[..minute.len().min(2)];
        if hour.len() != 2 || minute.len() != 2 {
            return None;
        }
        Self::new(hour.parse().ok()?, minute.parse().ok()?)
    }
}

impl fmt::Display for TimeOfDay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:02}:{:02}", self.hour, self.minute)
    }
}

impl FromStr for TimeOfDay {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::from_timestamp(s).ok_or_else(|| format!("invalid time `{s}`, expected hh:mm"))
    }
}

/// One hourly sample of the three controller inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClimateReading {
    pub time: TimeOfDay,
    /// Outdoor relative humidity, %.
    pub humidity: f64,
    /// °C
    pub outdoor_temp: f64,
    /// °C
    pub indoor_temp: f64,
}

impl ClimateReading {
    /// Clamps humidity into [0, 100], logging when a value had to move.
    /// Fails when a temperature is not finite.
    pub fn normalized(self) -> Result<Self, String> {
        if !self.humidity.is_finite() {
            return Err(format!("humidity {} is not finite", self.humidity));
        }
        if !self.outdoor_temp.is_finite() || !self.indoor_temp.is_finite() {
            return Err("temperatures must be finite".into());
        }
        let humidity = normalize_humidity(self.humidity);
        Ok(Self { humidity, ..self })
    }
}

pub(crate) fn normalize_humidity(h: f64) -> f64 {
    let c = h.clamp(0.0, 100.0);
    if c != h {
        log::warn!("humidity {h} outside [0, 100], clamped to {c}");
    }
    c
}
