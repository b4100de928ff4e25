use std::path::Path;
use std::str::FromStr;
use std::sync::mpsc::Sender;
use std::thread::{self, JoinHandle};
use std::time::Duration;

use super::feeds::{parse_midgar_json, parse_thingspeak_json, FeedSample};
use super::{load_day_csv, normalize_humidity, ClimateReading, FeedError, TimeOfDay};

pub const HTTP_TIMEOUT: Duration = Duration::from_secs(5);
pub const DEFAULT_MAX_FAILURES: u32 = 3;
/// Missed polls after which a reused value is flagged stale.
const STALE_AFTER: u32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeedKind {
    ThingSpeak,
    Midgar,
    File,
}

impl FromStr for FeedKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "thingspeak" => Ok(FeedKind::ThingSpeak),
            "midgar" => Ok(FeedKind::Midgar),
            "file" => Ok(FeedKind::File),
            other => Err(format!(
                "unknown feed kind `{other}` (expected thingspeak, midgar or file)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeedSource {
    pub kind: FeedKind,
    /// URL for network kinds, path for files.
    pub endpoint: String,
    /// JSON field (thingspeak) or CSV column (file) carrying the value.
    pub field: String,
    pub poll_interval: Duration,
}

impl FeedSource {
    pub fn new(
        kind: FeedKind,
        endpoint: impl Into<String>,
        field: impl Into<String>,
        poll_interval: Duration,
    ) -> Result<Self, FeedError> {
        if kind != FeedKind::File && poll_interval.is_zero() {
            return Err(FeedError::Source(
                "poll interval must be positive for network feeds".into(),
            ));
        }
        Ok(Self {
            kind,
            endpoint: endpoint.into(),
            field: field.into(),
            poll_interval,
        })
    }

    /// Builds the fetcher matching the source kind.
    pub fn fetcher(&self) -> Result<Box<dyn Fetch>, FeedError> {
        Ok(match self.kind {
            FeedKind::File => Box::new(FileReplay::open(&self.endpoint, &self.field)?),
            _ => Box::new(HttpFetcher::new(self)?),
        })
    }

    pub fn poller(&self) -> Result<Poller<Box<dyn Fetch>>, FeedError> {
        Ok(Poller::new(self.fetcher()?, self.poll_interval))
    }
}

/// One poll attempt. `Ok(None)` means the source is exhausted.
pub trait Fetch: Send {
    fn fetch(&mut self) -> Result<Option<FeedSample>, FeedError>;
}

impl<F: Fetch + ?Sized> Fetch for Box<F> {
    fn fetch(&mut self) -> Result<Option<FeedSample>, FeedError> {
        (**self).fetch()
    }
}

pub struct HttpFetcher {
    client: reqwest::blocking::Client,
    kind: FeedKind,
    endpoint: String,
    field: String,
}

impl HttpFetcher {
    pub fn new(source: &FeedSource) -> Result<Self, FeedError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(HTTP_TIMEOUT)
            .build()
            .map_err(|e| FeedError::Http {
                endpoint: source.endpoint.clone(),
                message: e.to_string(),
            })?;
        Ok(Self {
            client,
            kind: source.kind,
            endpoint: source.endpoint.clone(),
            field: source.field.clone(),
        })
    }
}

impl Fetch for HttpFetcher {
    fn fetch(&mut self) -> Result<Option<FeedSample>, FeedError> {
        let http = |e: reqwest::Error| FeedError::Http {
            endpoint: self.endpoint.clone(),
            message: e.to_string(),
        };
        let body = self
            .client
            .get(&self.endpoint)
            .send()
            .and_then(|r| r.error_for_status())
            .and_then(|r| r.text())
            .map_err(http)?;
        let sample = match self.kind {
            FeedKind::ThingSpeak => parse_thingspeak_json(&body, &self.field)?,
            FeedKind::Midgar => parse_midgar_json(&body)?,
            FeedKind::File => unreachable!("file sources use FileReplay"),
        };
        Ok(Some(sample))
    }
}

/// Replays one column of a day file, one row per poll.
pub struct FileReplay {
    samples: std::vec::IntoIter<FeedSample>,
}

impl FileReplay {
    pub fn open(path: impl AsRef<Path>, column: &str) -> Result<Self, FeedError> {
        let readings = load_day_csv(path).map_err(|e| FeedError::Source(e.to_string()))?;
        Self::from_readings(&readings, column)
    }

    pub fn from_readings(readings: &[ClimateReading], column: &str) -> Result<Self, FeedError> {
        let pick: fn(&ClimateReading) -> f64 = match column {
            "humidity" => |r| r.humidity,
            "temp_outdoor" | "outdoor" => |r| r.outdoor_temp,
            "temp_indoor" | "indoor" => |r| r.indoor_temp,
            other => return Err(FeedError::MissingField(other.to_string())),
        };
        let samples: Vec<FeedSample> = readings
            .iter()
            .map(|r| FeedSample {
                timestamp: r.time.to_string(),
                value: pick(r),
            })
            .collect();
        Ok(Self {
            samples: samples.into_iter(),
        })
    }
}

impl Fetch for FileReplay {
    fn fetch(&mut self) -> Result<Option<FeedSample>, FeedError> {
        Ok(self.samples.next())
    }
}

/// What a poll tick produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Polled {
    pub sample: FeedSample,
    /// The fetch failed and the last known value was reused.
    pub reused: bool,
    /// Reused for at least two consecutive missed polls.
    pub stale: bool,
}

/// Polls a fetcher on a fixed interval, one item per tick.
///
/// A failed fetch reuses the last known value; after `max_failures`
/// consecutive failures the error is yielded and polling stops. The wait
/// after a failure doubles with every consecutive miss.
pub struct Poller<F> {
    fetcher: F,
    interval: Duration,
    max_failures: u32,
    sleep: Box<dyn FnMut(Duration) + Send>,
    started: bool,
    failures: u32,
    last: Option<FeedSample>,
    done: bool,
}

impl<F: Fetch> Poller<F> {
    pub fn new(fetcher: F, interval: Duration) -> Self {
        Self {
            fetcher,
            interval,
            max_failures: DEFAULT_MAX_FAILURES,
            sleep: Box::new(thread::sleep),
            started: false,
            failures: 0,
            last: None,
            done: false,
        }
    }

    pub fn max_failures(mut self, n: u32) -> Self {
        self.max_failures = n.max(1);
        self
    }

    /// Replaces the sleep between ticks, e.g. to record delays in tests.
    pub fn with_sleep(mut self, sleep: impl FnMut(Duration) + Send + 'static) -> Self {
        self.sleep = Box::new(sleep);
        self
    }

    fn next_delay(&self) -> Duration {
        self.interval * 2u32.saturating_pow(self.failures)
    }
}

impl<F: Fetch> Iterator for Poller<F> {
    type Item = Result<Polled, FeedError>;

    fn next(&mut self) -> Option<Self::Item> {
        while !self.done {
            if self.started {
                let delay = self.next_delay();
                if !delay.is_zero() {
                    (self.sleep)(delay);
                }
            }
            self.started = true;

            match self.fetcher.fetch() {
                Ok(Some(sample)) => {
                    self.failures = 0;
                    self.last = Some(sample.clone());
                    return Some(Ok(Polled {
                        sample,
                        reused: false,
                        stale: false,
                    }));
                }
                Ok(None) => self.done = true,
                Err(err) => {
                    self.failures += 1;
                    log::warn!("poll failed ({} in a row): {err}", self.failures);
                    if self.failures >= self.max_failures {
                        self.done = true;
                        return Some(Err(FeedError::GaveUp {
                            failures: self.failures,
                            last: Box::new(err),
                        }));
                    }
                    if let Some(sample) = self.last.clone() {
                        return Some(Ok(Polled {
                            sample,
                            reused: true,
                            stale: self.failures >= STALE_AFTER,
                        }));
                    }
                }
            }
        }
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    Humidity,
    OutdoorTemp,
    IndoorTemp,
}

impl FromStr for Quantity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "humidity" => Ok(Quantity::Humidity),
            "outdoor" | "temp_outdoor" => Ok(Quantity::OutdoorTemp),
            "indoor" | "temp_indoor" => Ok(Quantity::IndoorTemp),
            other => Err(format!(
                "unknown quantity `{other}` (expected humidity, outdoor or indoor)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeedEvent {
    pub quantity: Quantity,
    pub result: Result<Polled, FeedError>,
}

/// Runs `poller` on its own thread, forwarding every tick into `tx`. The
/// channel is the single ordered queue all feeds share.
pub fn spawn_feed<I>(quantity: Quantity, poller: I, tx: Sender<FeedEvent>) -> JoinHandle<()>
where
    I: Iterator<Item = Result<Polled, FeedError>> + Send + 'static,
{
    thread::spawn(move || {
        for result in poller {
            if tx.send(FeedEvent { quantity, result }).is_err() {
                break;
            }
        }
    })
}

/// A complete set of controller inputs assembled from live feeds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiveReading {
    pub reading: ClimateReading,
    /// At least one component is a stale reuse.
    pub stale: bool,
}

/// Merges per-quantity samples into complete readings. Each new sample,
/// once all three quantities have been seen, produces a reading that pairs
/// it with the latest value of the other two.
#[derive(Debug, Default)]
pub struct ReadingAssembler {
    humidity: Option<(f64, bool)>,
    outdoor: Option<(f64, bool)>,
    indoor: Option<(f64, bool)>,
}

impl ReadingAssembler {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, quantity: Quantity, polled: &Polled) -> Option<LiveReading> {
        let value = polled.sample.value;
        if !value.is_finite() {
            log::warn!("dropping non-finite {quantity:?} sample");
            return None;
        }
        let slot = match quantity {
            Quantity::Humidity => {
                self.humidity = Some((normalize_humidity(value), polled.stale));
                return self.emit(&polled.sample.timestamp);
            }
            Quantity::OutdoorTemp => &mut self.outdoor,
            Quantity::IndoorTemp => &mut self.indoor,
        };
        *slot = Some((value, polled.stale));
        self.emit(&polled.sample.timestamp)
    }

    fn emit(&self, timestamp: &str) -> Option<LiveReading> {
        let (humidity, s1) = self.humidity?;
        let (outdoor_temp, s2) = self.outdoor?;
        let (indoor_temp, s3) = self.indoor?;
        let time = TimeOfDay::from_timestamp(timestamp).unwrap_or_else(|| {
            log::warn!("unparseable timestamp `{timestamp}`, using 00:00");
            TimeOfDay::new(0, 0).expect("midnight")
        });
        Some(LiveReading {
            reading: ClimateReading {
                time,
                humidity,
                outdoor_temp,
                indoor_temp,
            },
            stale: s1 || s2 || s3,
        })
    }
}
