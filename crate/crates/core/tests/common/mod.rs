//! Test-only reference data and a brute-force centroid oracle. Nothing here
//! calls into the crate's membership or defuzzification code.
#![allow(dead_code)]

use std::path::PathBuf;

pub const TEMPERATURE_TERMS: [&str; 7] = [
    "extremely_low",
    "very_low",
    "low",
    "normal",
    "high",
    "very_high",
    "extremely_high",
];
pub const HUMIDITY_TERMS: [&str; 5] = ["very_low", "low", "normal", "high", "very_high"];

/// (a, b, c, d) per term, shoulders written out as the universe bound.
pub const TEMPERATURE_SHAPES: [[f64; 4]; 7] = [
    [-15.0, -15.0, -7.0, -5.0],
    [-7.0, -5.0, 0.0, 3.0],
    [0.0, 3.0, 14.0, 18.0],
    [14.0, 18.0, 22.0, 24.0],
    [22.0, 24.0, 28.0, 30.0],
    [28.0, 30.0, 35.0, 38.0],
    [35.0, 38.0, 50.0, 50.0],
];
pub const HUMIDITY_SHAPES: [[f64; 4]; 5] = [
    [0.0, 0.0, 30.0, 40.0],
    [30.0, 40.0, 50.0, 60.0],
    [50.0, 60.0, 60.0, 70.0],
    [60.0, 70.0, 75.0, 80.0],
    [75.0, 80.0, 100.0, 100.0],
];
pub const ACTION_TERMS: [&str; 5] = ["heat_max", "heat_normal", "no_system", "cool_normal", "cool_max"];
pub const ACTION_SHAPES: [[f64; 4]; 5] = [
    [0.0, 0.0, 10.0, 15.0],
    [10.0, 15.0, 18.0, 20.0],
    [18.0, 20.0, 20.0, 22.0],
    [20.0, 22.0, 25.0, 30.0],
    [25.0, 30.0, 40.0, 40.0],
];

/// Apparent temperature table: rows humidity (very_low..very_high), columns
/// outdoor temperature (extremely_low..extremely_high).
pub const APPARENT_TABLE: [[&str; 7]; 5] = [
    ["extremely_low", "very_low", "very_low", "normal", "normal", "high", "very_high"],
    ["extremely_low", "very_low", "low", "normal", "high", "very_high", "extremely_high"],
    ["extremely_low", "very_low", "low", "normal", "very_high", "extremely_high", "extremely_high"],
    ["very_low", "low", "low", "normal", "very_high", "extremely_high", "extremely_high"],
    ["low", "low", "normal", "normal", "extremely_high", "extremely_high", "extremely_high"],
];

const HM: &str = "heat_max";
const HN: &str = "heat_normal";
const OF: &str = "no_system";
const CN: &str = "cool_normal";
const CM: &str = "cool_max";

/// Action table: rows indoor temperature, columns apparent temperature.
pub const ACTION_TABLE: [[&str; 7]; 7] = [
    [HM, HM, HM, HM, HM, HM, HM],
    [HM, HM, HM, HM, HM, HM, HM],
    [HM, HM, HM, HN, HN, HN, HN],
    [HN, HN, HN, OF, OF, OF, CN],
    [OF, OF, OF, OF, CN, CN, CM],
    [CN, CN, CN, CN, CM, CM, CM],
    [CM, CM, CM, CM, CM, CM, CM],
];

/// Fine-grid centroids computed with the oracle below at
/// step 0.001 before the crate existed.
pub const ORACLE_APPARENT_26C_77PCT: f64 = 38.245_202_270_829_64;
pub const ORACLE_APPARENT_M15C_0PCT: f64 = -10.481_732_514_860_285;
pub const ORACLE_APPARENT_20C_55PCT: f64 = 19.235_294_117_647_058;
pub const ORACLE_ACTION_HALF_HEAT_HALF_OFF: f64 = 16.353_658_536_585_368;

pub fn trapezoid(shape: [f64; 4], x: f64) -> f64 {
    let [a, b, c, d] = shape;
    if x < a || x > d {
        return 0.0;
    }
    if x >= b && x <= c {
        return 1.0;
    }
    if x < b {
        (x - a) / (b - a)
    } else {
        (d - x) / (d - c)
    }
}

/// Centroid of `max_t min(degree_t, mu_t(x))` by brute-force summation.
pub fn oracle_centroid(shapes: &[[f64; 4]], degrees: &[f64], lo: f64, hi: f64, step: f64) -> f64 {
    let n = ((hi - lo) / step).round() as usize;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..=n {
        let x = lo + i as f64 * step;
        let mu = shapes
            .iter()
            .zip(degrees)
            .map(|(s, d)| d.min(trapezoid(*s, x)))
            .fold(0.0, f64::max);
        num += x * mu;
        den += mu;
    }
    num / den
}

pub fn plateau_midpoint(shape: [f64; 4]) -> f64 {
    0.5 * (shape[1] + shape[2])
}

pub fn fixture_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/day.csv")
}

pub fn config_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("config/climate.fz")
}
