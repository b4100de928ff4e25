//! Acceptance criteria, one test each. Every test prints a single
//! `[PASS]`/`[FAIL]` line and then asserts, so a failing criterion fails
//! its test.

mod common;

use std::collections::HashMap;
use std::io::Write;
use std::time::{Duration, Instant};

use common::*;
use fuzzclime::sim::{compare, emit_report, format_pct, run_simulation, Policy, ReportFormat};
use fuzzclime::{
    defuzzify_centroid, load_day_csv, parse_config, ApparentTemperature, ClimateController,
    FuzzyValue, Registry, ThresholdConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const REPLAY_BUDGET: Duration = Duration::from_secs(1);
const CENTROID_TOLERANCE: f64 = 0.05;
const SAVING_BAND_PCT: (f64, f64) = (35.0, 50.0);
const ROUNDOFF: f64 = 1e-9;

// Written straight to the process stdout so the line shows up even when
// the harness captures output of passing tests.
fn verdict(name: &str, ok: bool, detail: &str) {
    let line = format!("[{}] {name}: {detail}\n", if ok { "PASS" } else { "FAIL" });
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
}

#[test]
fn a1_baseline_exactness() {
    let rows = load_day_csv(fixture_path()).unwrap();
    let cfg = ThresholdConfig::default();
    let start = Instant::now();
    let rep = run_simulation(&rows, Policy::Baseline(&cfg)).unwrap();
    let elapsed = start.elapsed();
    let h = rep.hours();
    let ok = h.heating_on == 11
        && h.heating_max == 4
        && h.cooling_on == 8
        && h.cooling_max == 4
        && elapsed < REPLAY_BUDGET;
    verdict(
        "baseline exactness",
        ok,
        &format!(
            "heating {} h (max {}), cooling {} h (max {}), {:?}; want 11/4/8/4 under 1 s",
            h.heating_on, h.heating_max, h.cooling_on, h.cooling_max, elapsed
        ),
    );
    assert!(ok);
}

#[test]
fn a2_fuzzy_replay_bands() {
    let rows = load_day_csv(fixture_path()).unwrap();
    let ctrl = ClimateController::bundled();
    let start = Instant::now();
    let rep = run_simulation(&rows, Policy::Fuzzy(&ctrl)).unwrap();
    let elapsed = start.elapsed();
    let h = rep.hours();
    let heating_ok = (7..=9).contains(&h.heating_on);
    let cooling_ok = (2..=4).contains(&h.cooling_on);
    let max_ok = h.cooling_max == 0;
    let time_ok = elapsed < REPLAY_BUDGET;
    let ok = heating_ok && cooling_ok && max_ok && time_ok;
    verdict(
        "fuzzy replay bands",
        ok,
        &format!(
            "heating {} h in [7,9]: {heating_ok}; cooling {} h in [2,4]: {cooling_ok}; \
             cooling max {} h == 0: {max_ok}; {elapsed:?} < 1 s: {time_ok}",
            h.heating_on, h.cooling_on, h.cooling_max
        ),
    );
    assert!(ok);
}

#[test]
fn a3_savings() {
    let rows = load_day_csv(fixture_path()).unwrap();
    let ctrl = ClimateController::bundled();
    let base = run_simulation(&rows, Policy::Baseline(&ThresholdConfig::default())).unwrap();
    let fuzzy = run_simulation(&rows, Policy::Fuzzy(&ctrl)).unwrap();
    let s = compare(&base, &fuzzy).unwrap();
    let combined = s.combined_saving_pct.unwrap_or(f64::NAN);
    let band_ok = (SAVING_BAND_PCT.0..=SAVING_BAND_PCT.1).contains(&combined);

    // the per-system figures must print exactly when the hour counts match
    let text = emit_report(Some(&s), &[&base, &fuzzy], ReportFormat::Text);
    let exact_ok = if s.fuzzy.heating_on == 8 && s.fuzzy.cooling_on == 3 {
        text.contains("27.27%") && text.contains("62.5%")
    } else {
        true
    };
    let ok = band_ok && exact_ok;
    verdict(
        "savings",
        ok,
        &format!(
            "combined {} in [35%, 50%]: {band_ok}; heating {}, cooling {}; exact-print check: {exact_ok}",
            format_pct(s.combined_saving_pct),
            format_pct(s.heating_saving_pct),
            format_pct(s.cooling_saving_pct),
        ),
    );
    assert!(ok);
}

#[test]
fn a4_rule_table_golden() {
    let reg = Registry::bundled();
    let ctrl = ClimateController::bundled();
    let mut failures = Vec::new();

    let humidity = reg.variable("humidity").unwrap();
    let outdoor = reg.variable("outdoor").unwrap();
    let apparent_rules = reg.rulebase("apparent_temperature").unwrap();
    for (r, h_shape) in HUMIDITY_SHAPES.iter().enumerate() {
        for (c, t_shape) in TEMPERATURE_SHAPES.iter().enumerate() {
            let out = apparent_rules
                .evaluate(&HashMap::from([
                    ("humidity".to_string(), humidity.fuzzify(plateau_midpoint(*h_shape))),
                    ("outdoor".to_string(), outdoor.fuzzify(plateau_midpoint(*t_shape))),
                ]))
                .unwrap();
            let want = APPARENT_TABLE[r][c];
            if !is_strict_max(&out, want) {
                failures.push(format!("apparent[{}][{}] want {want}", HUMIDITY_TERMS[r], TEMPERATURE_TERMS[c]));
            }
        }
    }

    let indoor = reg.variable("indoor").unwrap();
    let apparent = reg.variable("apparent").unwrap();
    let action_rules = reg.rulebase("action").unwrap();
    for (r, i_shape) in TEMPERATURE_SHAPES.iter().enumerate() {
        for (c, a_shape) in TEMPERATURE_SHAPES.iter().enumerate() {
            let (i_mid, a_mid) = (plateau_midpoint(*i_shape), plateau_midpoint(*a_shape));
            let out = action_rules
                .evaluate(&HashMap::from([
                    ("indoor".to_string(), indoor.fuzzify(i_mid)),
                    ("apparent".to_string(), apparent.fuzzify(a_mid)),
                ]))
                .unwrap();
            let want = ACTION_TABLE[r][c];
            let cmd = ctrl
                .decide_action(
                    &ApparentTemperature {
                        crisp: a_mid,
                        degrees: FuzzyValue::default(),
                    },
                    i_mid,
                )
                .unwrap();
            if !is_strict_max(&out, want) || cmd.state.action_term() != want {
                failures.push(format!(
                    "action[{}][{}] want {want}, state {}",
                    TEMPERATURE_TERMS[r], TEMPERATURE_TERMS[c], cmd.state
                ));
            }
        }
    }

    let ok = failures.is_empty();
    verdict(
        "rule-table golden tests",
        ok,
        &format!("35 + 49 entries checked, {} mismatches {:?}", failures.len(), failures),
    );
    assert!(ok);
}

fn is_strict_max(fv: &FuzzyValue, term: &str) -> bool {
    let d = fv.degree(term);
    d > 0.0 && fv.iter().all(|(t, x)| t == term || x < d)
}

#[test]
fn a5_centroid_oracle() {
    let reg = Registry::bundled();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_cafe);
    let mut worst: f64 = 0.0;
    let mut worst_var = "";
    let mut checked = 0;
    for var in reg.variables() {
        let (lo, hi) = var.universe();
        let shapes: Vec<[f64; 4]> = var.terms().iter().map(|t| t.mf.breakpoints()).collect();
        // Reference shapes come from the test tables, not from the crate.
        let reference: &[[f64; 4]] = match var.name() {
            "humidity" => &HUMIDITY_SHAPES,
            "action" => &ACTION_SHAPES,
            _ => &TEMPERATURE_SHAPES,
        };
        assert_eq!(shapes, reference, "{}", var.name());
        for _ in 0..100 {
            let mut degrees: Vec<f64> = (0..shapes.len())
                .map(|_| if rng.gen_bool(0.3) { 0.0 } else { rng.gen::<f64>() })
                .collect();
            if degrees.iter().all(|d| *d == 0.0) {
                let k = rng.gen_range(0..degrees.len());
                degrees[k] = rng.gen_range(0.01..=1.0);
            }
            let fv = FuzzyValue::new(
                var.term_names().zip(degrees.iter().copied()),
            )
            .unwrap();
            let got = defuzzify_centroid(var, &fv, 0.1).unwrap();
            let want = oracle_centroid(reference, &degrees, lo, hi, 0.001);
            if (got - want).abs() > worst {
                worst = (got - want).abs();
                worst_var = var.name();
            }
            checked += 1;
        }
    }
    let ok = worst < CENTROID_TOLERANCE;
    verdict(
        "centroid oracle",
        ok,
        &format!("{checked} random values over {} variables, max |step 0.1 - step 0.001| = {worst:.5} ({worst_var}) < 0.05", reg.variables().len()),
    );
    assert!(ok);
}

#[test]
fn a6_property_suite() {
    let reg = Registry::bundled();
    let ctrl = ClimateController::bundled();

    // coverage at 0.1 sampling
    let mut uncovered = Vec::new();
    for var in reg.variables() {
        let (lo, hi) = var.universe();
        let n = ((hi - lo) / 0.1).round() as usize;
        for i in 0..=n {
            let x = lo + i as f64 * 0.1;
            let max = var
                .terms()
                .iter()
                .map(|t| trapezoid(t.mf.breakpoints(), x))
                .fold(0.0, f64::max);
            if max <= 0.0 {
                uncovered.push(format!("{}@{x:.1}", var.name()));
            }
        }
    }
    let coverage_ok = uncovered.is_empty();

    // action value non-decreasing in indoor temperature
    let mut decreases = Vec::new();
    for app in [-10.0, 0.0, 10.0, 20.0, 30.0, 40.0] {
        let a = ApparentTemperature {
            crisp: app,
            degrees: FuzzyValue::default(),
        };
        let values: Vec<f64> = (-15..=50)
            .map(|t| ctrl.decide_action(&a, f64::from(t)).unwrap().action_value)
            .collect();
        assert_eq!(values.len(), 66);
        for (k, w) in values.windows(2).enumerate() {
            if w[1] < w[0] - ROUNDOFF {
                decreases.push(format!("apparent {app}: indoor {}->{} drops {:.3}", k as i32 - 15, k as i32 - 14, w[0] - w[1]));
            }
        }
    }
    let monotone_ok = decreases.is_empty();

    // extreme rows
    let mut extreme_bad = 0;
    for app in (-150..=500).step_by(5).map(|v| f64::from(v) / 10.0) {
        let a = ApparentTemperature {
            crisp: app,
            degrees: FuzzyValue::default(),
        };
        for t in (-150..=-70).step_by(5).map(|v| f64::from(v) / 10.0) {
            if ctrl.decide_action(&a, t).unwrap().state != fuzzclime::HvacState::HeatMax {
                extreme_bad += 1;
            }
        }
        for t in (380..=500).step_by(5).map(|v| f64::from(v) / 10.0) {
            if ctrl.decide_action(&a, t).unwrap().state != fuzzclime::HvacState::CoolMax {
                extreme_bad += 1;
            }
        }
    }
    let extremes_ok = extreme_bad == 0;

    // parser round trip
    let text = reg.to_config_string();
    let round_trip_ok = parse_config(&text).map(|r| r == reg).unwrap_or(false);

    // byte-identical reports
    let rows = load_day_csv(fixture_path()).unwrap();
    let report = || {
        let c = ClimateController::bundled();
        let base = run_simulation(&rows, Policy::Baseline(&ThresholdConfig::default())).unwrap();
        let fuzzy = run_simulation(&rows, Policy::Fuzzy(&c)).unwrap();
        let s = compare(&base, &fuzzy).unwrap();
        emit_report(Some(&s), &[&base, &fuzzy], ReportFormat::Csv)
    };
    let deterministic_ok = report().as_bytes() == report().as_bytes();

    let ok = coverage_ok && monotone_ok && extremes_ok && round_trip_ok && deterministic_ok;
    verdict(
        "property suite",
        ok,
        &format!(
            "coverage: {coverage_ok}; monotone action: {monotone_ok} {decreases:?}; \
             extreme rows: {extremes_ok}; round trip: {round_trip_ok}; byte-identical reports: {deterministic_ok}"
        ),
    );
    assert!(ok);
}
