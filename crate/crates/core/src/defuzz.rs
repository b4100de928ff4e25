use crate::error::FuzzyError;
use crate::variable::{FuzzyValue, LinguisticVariable};

/// Default sampling step for centroid defuzzification, in universe units.
pub const DEFAULT_CENTROID_STEP: f64 = 0.1;

/// Clipped aggregate membership at `x`: max over terms of
/// `min(degree(term), membership(term, x))`.
pub fn aggregate_membership(var: &LinguisticVariable, fv: &FuzzyValue, x: f64) -> f64 {
    var.terms()
        .iter()
        .map(|t| fv.degree(&t.name).min(t.mf.membership(x)))
        .fold(0.0, f64::max)
}

/// Centre of gravity of the clipped aggregate, sampled at
/// `lo, lo + step, ..., hi`.
pub fn defuzzify_centroid(
    var: &LinguisticVariable,
    fv: &FuzzyValue,
    step: f64,
) -> Result<f64, FuzzyError> {
    if !(step.is_finite() && step > 0.0) {
        return Err(FuzzyError::InvalidStep(step));
    }
    if fv.is_all_zero() {
        return Err(FuzzyError::NoRuleFired(var.name().to_string()));
    }
    let (lo, hi) = var.universe();
    let mut weighted = 0.0;
    let mut mass = 0.0;
    for x in sample_points(lo, hi, step) {
        let mu = aggregate_membership(var, fv, x);
        weighted += x * mu;
        mass += mu;
    }
    if mass <= 0.0 {
        // Only reachable when the step skips over every non-zero region.
        return Err(FuzzyError::NoRuleFired(var.name().to_string()));
    }
    Ok((weighted / mass).clamp(lo, hi))
}

fn sample_points(lo: f64, hi: f64, step: f64) -> impl Iterator<Item = f64> {
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    let last = lo + n as f64 * step;
    let tail = (hi - last > 1e-9 * step.max(1.0)).then_some(hi);
    (0..=n)
        .map(move |i| (lo + i as f64 * step).min(hi))
        .chain(tail)
}
