use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::mpsc;
use std::time::Duration;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use fuzzclime::actuator::{ActuatorRouter, LogSink};
use fuzzclime::ingest::{spawn_feed, FeedKind, FeedSource, Quantity, ReadingAssembler};
use fuzzclime::sim::{compare, emit_report, run_simulation, Policy, ReportFormat};
use fuzzclime::{load_day_csv, parse_config, ClimateController, ClimateInputs, Registry, ThresholdConfig};

const USAGE: u8 = 1;
const DATA: u8 = 2;
const FEED: u8 = 3;

#[derive(Parser)]
#[command(name = "fuzzclime", version, about = "Fuzzy HVAC controller and day-replay harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replay a day of hourly readings through one or both controllers.
    Simulate(SimulateArgs),
    /// Poll live feeds and stream decisions to the actuator log.
    Poll(PollArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Fuzzy,
    Baseline,
    Compare,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Source {
    Thingspeak,
    Midgar,
    File,
}

#[derive(clap::Args)]
struct SimulateArgs {
    /// Day CSV with columns time,humidity,temp_outdoor,temp_indoor.
    #[arg(long)]
    data: PathBuf,
    /// Rule file; the bundled rules are used when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "compare")]
    mode: Mode,
    /// Write the report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long, default_value_t = fuzzclime::DEFAULT_CENTROID_STEP)]
    centroid_step: f64,
    /// TOML file overriding the baseline thermostat bands.
    #[arg(long)]
    thresholds: Option<PathBuf>,
}

#[derive(clap::Args)]
struct PollArgs {
    #[arg(long, value_enum)]
    source: Source,
    /// URL or CSV path. Prefix with `humidity=`, `outdoor=` or `indoor=` to
    /// give one quantity its own endpoint.
    #[arg(long, required = true)]
    endpoint: Vec<String>,
    /// JSON field or CSV column, optionally prefixed like --endpoint.
    #[arg(long)]
    field: Vec<String>,
    /// Seconds between polls.
    #[arg(long, default_value_t = 15.0)]
    interval: f64,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = fuzzclime::DEFAULT_CENTROID_STEP)]
    centroid_step: f64,
    /// Stop after this many decisions.
    #[arg(long)]
    limit: Option<usize>,
}

struct Failure {
    code: u8,
    error: anyhow::Error,
}

trait ExitWith<T> {
    fn exit_with(self, code: u8) -> Result<T, Failure>;
}

impl<T, E: Into<anyhow::Error>> ExitWith<T> for Result<T, E> {
    fn exit_with(self, code: u8) -> Result<T, Failure> {
        self.map_err(|e| Failure {
            code,
            error: e.into(),
        })
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Simulate(args) => simulate(args),
        Command::Poll(args) => poll(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn load_controller(config: Option<&Path>, step: f64) -> anyhow::Result<ClimateController> {
    let registry = match config {
        None => Registry::bundled(),
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            parse_config(&text).with_context(|| format!("in {}", path.display()))?
        }
    };
    Ok(ClimateController::with_step(registry, step)?)
}

fn load_thresholds(path: Option<&Path>) -> anyhow::Result<ThresholdConfig> {
    let Some(path) = path else {
        return Ok(ThresholdConfig::default());
    };
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let cfg: ThresholdConfig =
        toml::from_str(&text).with_context(|| format!("in {}", path.display()))?;
    cfg.validate()?;
    Ok(cfg)
}

fn simulate(args: SimulateArgs) -> Result<(), Failure> {
    let readings = load_day_csv(&args.data).exit_with(DATA)?;
    let format = match args.format {
        Format::Text => ReportFormat::Text,
        Format::Csv => ReportFormat::Csv,
    };
    let needs_fuzzy = !matches!(args.mode, Mode::Baseline);
    let needs_base = !matches!(args.mode, Mode::Fuzzy);

    let ctrl = if needs_fuzzy {
        Some(load_controller(args.config.as_deref(), args.centroid_step).exit_with(DATA)?)
    } else {
        None
    };
    let thresholds = load_thresholds(args.thresholds.as_deref()).exit_with(DATA)?;

    let base = if needs_base {
        Some(run_simulation(&readings, Policy::Baseline(&thresholds)).exit_with(DATA)?)
    } else {
        None
    };
    let fuzzy = match &ctrl {
        Some(c) => Some(run_simulation(&readings, Policy::Fuzzy(c)).exit_with(DATA)?),
        None => None,
    };
    let summary = match (&base, &fuzzy) {
        (Some(b), Some(f)) => Some(compare(b, f).exit_with(DATA)?),
        _ => None,
    };
    let schedules: Vec<_> = base.iter().chain(fuzzy.iter()).collect();
    let report = emit_report(summary.as_ref(), &schedules, format);

    match &args.report {
        Some(path) => fs::write(path, report)
            .with_context(|| format!("writing {}", path.display()))
            .exit_with(DATA),
        None => io::stdout().write_all(report.as_bytes()).exit_with(DATA),
    }
}

const QUANTITIES: [(Quantity, &str); 3] = [
    (Quantity::Humidity, "humidity"),
    (Quantity::OutdoorTemp, "outdoor"),
    (Quantity::IndoorTemp, "indoor"),
];

/// Picks the value for `quantity` from `quantity=value` entries, falling
/// back to an unprefixed entry.
fn pick<'a>(values: &'a [String], quantity: &str) -> anyhow::Result<Option<&'a str>> {
    let mut shared = None;
    let mut own = None;
    for v in values {
        let prefix = v
            .split_once('=')
            .filter(|(q, _)| !q.is_empty() && q.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'));
        match prefix {
            Some((q, rest)) if QUANTITIES.iter().any(|(_, name)| *name == q) => {
                if q == quantity {
                    own = Some(rest);
                }
            }
            Some(_) => bail!("unknown quantity in `{v}`; expected humidity=, outdoor= or indoor="),
            None => shared = Some(v.as_str()),
        }
    }
    Ok(own.or(shared))
}

fn default_field(kind: FeedKind, quantity: Quantity) -> &'static str {
    match (kind, quantity) {
        (FeedKind::Midgar, _) => "value",
        (FeedKind::File, Quantity::Humidity) => "humidity",
        (FeedKind::File, Quantity::OutdoorTemp) => "temp_outdoor",
        (FeedKind::File, Quantity::IndoorTemp) => "temp_indoor",
        (FeedKind::ThingSpeak, Quantity::Humidity) => "field1",
        (FeedKind::ThingSpeak, Quantity::OutdoorTemp) => "field2",
        (FeedKind::ThingSpeak, Quantity::IndoorTemp) => "field3",
    }
}

fn feed_sources(args: &PollArgs) -> anyhow::Result<Vec<(Quantity, FeedSource)>> {
    let kind = match args.source {
        Source::Thingspeak => FeedKind::ThingSpeak,
        Source::Midgar => FeedKind::Midgar,
        Source::File => FeedKind::File,
    };
    if !(args.interval.is_finite() && args.interval >= 0.0) {
        bail!("interval must be a non-negative number of seconds");
    }
    let interval = Duration::from_secs_f64(args.interval);
    QUANTITIES
        .iter()
        .map(|&(q, name)| {
            let endpoint = pick(&args.endpoint, name)?
                .ok_or_else(|| anyhow!("no endpoint for {name}"))?;
            let field = pick(&args.field, name)?.unwrap_or(default_field(kind, q));
            Ok((q, FeedSource::new(kind, endpoint, field, interval)?))
        })
        .collect()
}

fn poll(args: PollArgs) -> Result<(), Failure> {
    let ctrl = load_controller(args.config.as_deref(), args.centroid_step).exit_with(DATA)?;
    let sources = feed_sources(&args).exit_with(USAGE)?;

    let (tx, rx) = mpsc::channel();
    for (q, src) in &sources {
        let poller = src.poller().exit_with(FEED)?;
        spawn_feed(*q, poller, tx.clone());
    }
    drop(tx);

    let stdout = io::stdout();
    let mut sink = LogSink::new(stdout.lock());
    let mut router = ActuatorRouter::new().with_sink(&mut sink);
    let mut assembler = ReadingAssembler::new();
    let mut decisions = 0;
    for event in rx {
        let polled = event
            .result
            .with_context(|| format!("{} feed", quantity_name(event.quantity)))
            .exit_with(FEED)?;
        let Some(live) = assembler.push(event.quantity, &polled) else {
            continue;
        };
        if live.stale {
            log::warn!("deciding on stale input at {}", live.reading.time);
        }
        let r = live.reading;
        let decision = ctrl
            .evaluate(&ClimateInputs {
                outdoor_temp: r.outdoor_temp,
                outdoor_humidity: r.humidity,
                indoor_temp: r.indoor_temp,
            })
            .exit_with(DATA)?;
        router
            .dispatch(&r.time.to_string(), decision.command.state)
            .exit_with(DATA)?;
        decisions += 1;
        if args.limit.is_some_and(|n| decisions >= n) {
            break;
        }
    }
    Ok(())
}

fn quantity_name(q: Quantity) -> &'static str {
    QUANTITIES.iter().find(|(x, _)| *x == q).map_or("unknown", |(_, n)| n)
}
