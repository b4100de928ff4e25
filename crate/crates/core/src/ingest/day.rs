use std::fs::File;
use std::io::{self, Read, Write};
use std::path::Path;

use super::{ClimateReading, DataError, TimeOfDay};

pub const DAY_CSV_HEADER: &str = "time,humidity,temp_outdoor,temp_indoor";

pub fn load_day_csv(path: impl AsRef<Path>) -> Result<Vec<ClimateReading>, DataError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| DataError::Io {
        path: path.display().to_string(),
        source,
    })?;
    read_day_csv(file)
}

/// Reads `time,humidity,temp_outdoor,temp_indoor` rows in file order.
pub fn read_day_csv<R: Read>(reader: R) -> Result<Vec<ClimateReading>, DataError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let mut records = rdr.records();

    let header = match records.next() {
        None => return Err(DataError::NoRows),
        Some(rec) => rec.map_err(|e| row_error(&e, 1))?,
    };
    let found = header.iter().collect::<Vec<_>>().join(",");
    if found != DAY_CSV_HEADER {
        return Err(DataError::Header { found });
    }

    let mut readings = Vec::new();
    for rec in records {
        let rec = rec.map_err(|e| row_error(&e, 0))?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.iter().all(str::is_empty) {
            continue;
        }
        if rec.len() != 4 {
            return Err(DataError::Row {
                line,
                message: format!("expected 4 fields, found {}", rec.len()),
            });
        }
        let time: TimeOfDay = rec[0]
            .parse()
            .map_err(|message| DataError::Row { line, message })?;
        let num = |i: usize, name: &str| -> Result<f64, DataError> {
            rec[i]
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| DataError::Row {
                    line,
                    message: format!("{name} `{}` is not a finite number", &rec[i]),
                })
        };
        let reading = ClimateReading {
            time,
            humidity: num(1, "humidity")?,
            outdoor_temp: num(2, "temp_outdoor")?,
            indoor_temp: num(3, "temp_indoor")?,
        }
        .normalized()
        .map_err(|message| DataError::Row { line, message })?;
        readings.push(reading);
    }

    if readings.is_empty() {
        return Err(DataError::NoRows);
    }
    if readings.len() != 24 {
        log::warn!("day file has {} rows, expected 24 hourly rows", readings.len());
    }
    Ok(readings)
}

fn row_error(e: &csv::Error, fallback_line: u64) -> DataError {
    DataError::Row {
        line: e.position().map_or(fallback_line, |p| p.line()),
        message: e.to_string(),
    }
}

/// Writes readings back in the day-file schema.
pub fn write_day_csv<W: Write>(mut w: W, readings: &[ClimateReading]) -> io::Result<()> {
    writeln!(w, "{DAY_CSV_HEADER}")?;
    for r in readings {
        writeln!(
            w,
            "{},{},{},{}",
            r.time, r.humidity, r.outdoor_temp, r.indoor_temp
        )?;
    }
    Ok(())
}
