use std::collections::HashSet;

use crate::error::FuzzyError;
use crate::membership::PiecewiseLinearMF;

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub name: String,
    pub mf: PiecewiseLinearMF,
}

/// A named universe `[lo, hi]` with an ordered list of fuzzy terms.
///
/// Construction checks that term names are unique, every support lies inside
/// the universe and every point of the universe belongs to at least one term
/// with a non-zero degree.
#[derive(Debug, Clone, PartialEq)]
pub struct LinguisticVariable {
    name: String,
    lo: f64,
    hi: f64,
    terms: Vec<Term>,
}

impl LinguisticVariable {
    pub fn new(
        name: impl Into<String>,
        lo: f64,
        hi: f64,
        terms: Vec<Term>,
    ) -> Result<Self, FuzzyError> {
        let name = name.into();
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(FuzzyError::InvalidUniverse { variable: name, lo, hi });
        }
        if terms.is_empty() {
            return Err(FuzzyError::NoTerms(name));
        }
        let mut seen = HashSet::new();
        for term in &terms {
            if !seen.insert(term.name.as_str()) {
                return Err(FuzzyError::DuplicateTerm {
                    variable: name,
                    term: term.name.clone(),
                });
            }
            let (a, d) = term.mf.support();
            if a < lo || d > hi {
                return Err(FuzzyError::OutsideUniverse {
                    variable: name,
                    term: term.name.clone(),
                    a,
                    d,
                    lo,
                    hi,
                });
            }
        }
        let var = Self { name, lo, hi, terms };
        if let Some(x) = var.first_uncovered_point() {
            return Err(FuzzyError::Uncovered { variable: var.name, x });
        }
        Ok(var)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn universe(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn term(&self, name: &str) -> Option<&Term> {
        self.terms.iter().find(|t| t.name == name)
    }

    pub fn has_term(&self, name: &str) -> bool {
        self.term(name).is_some()
    }

    pub fn term_names(&self) -> impl Iterator<Item = &str> {
        self.terms.iter().map(|t| t.name.as_str())
    }

    /// Highest membership of any term at `x`.
    pub fn max_membership(&self, x: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.mf.membership(x))
            .fold(0.0, f64::max)
    }

    /// Clamps `x` into the universe. The flag is set when clamping changed the value.
    pub fn clamp(&self, x: f64) -> (f64, bool) {
        let c = x.clamp(self.lo, self.hi);
        (c, c != x)
    }

    /// Degrees of truth of every term at `x`. Values outside the universe are
    /// clamped to the nearest bound with a logged warning.
    pub fn fuzzify(&self, x: f64) -> FuzzyValue {
        let (x, clamped) = self.clamp(x);
        if clamped {
            log::warn!(
                "{}: input outside universe [{}, {}], clamped to {}",
                self.name,
                self.lo,
                self.hi,
                x
            );
        }
        FuzzyValue {
            degrees: self
                .terms
                .iter()
                .map(|t| (t.name.clone(), t.mf.membership(x)))
                .collect(),
        }
    }

    // Positivity of the max-membership is constant between consecutive
    // breakpoints, so checking every breakpoint and every gap midpoint is exact.
    fn first_uncovered_point(&self) -> Option<f64> {
        let mut points: Vec<f64> = self
            .terms
            .iter()
            .flat_map(|t| t.mf.breakpoints())
            .chain([self.lo, self.hi])
            .filter(|x| (self.lo..=self.hi).contains(x))
            .collect();
        points.sort_by(f64::total_cmp);
        points.dedup();
        let mids: Vec<f64> = points.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        points
            .into_iter()
            .chain(mids)
            .find(|&x| self.max_membership(x) <= 0.0)
    }
}

/// Degree of truth per term name, in the owning variable's term order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FuzzyValue {
    degrees: Vec<(String, f64)>,
}

impl FuzzyValue {
    pub fn new<I, S>(degrees: I) -> Result<Self, FuzzyError>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        let mut out = Self::default();
        for (term, degree) in degrees {
            let term = term.into();
            if !(0.0..=1.0).contains(&degree) {
                return Err(FuzzyError::InvalidDegree { term, degree });
            }
            out.set(term, degree);
        }
        Ok(out)
    }

    /// Builds a value with every term of `var` at zero.
    pub fn zeros(var: &LinguisticVariable) -> Self {
        Self {
            degrees: var.term_names().map(|t| (t.to_string(), 0.0)).collect(),
        }
    }

    pub(crate) fn set(&mut self, term: String, degree: f64) {
        match self.degrees.iter_mut().find(|(t, _)| *t == term) {
            Some(slot) => slot.1 = degree,
            None => self.degrees.push((term, degree)),
        }
    }

    pub(crate) fn raise(&mut self, term: &str, degree: f64) {
        match self.degrees.iter_mut().find(|(t, _)| t == term) {
            Some(slot) => slot.1 = slot.1.max(degree),
            None => self.degrees.push((term.to_string(), degree)),
        }
    }

    /// Degree of `term`, 0 when the term is absent.
    pub fn degree(&self, term: &str) -> f64 {
        self.degrees
            .iter()
            .find(|(t, _)| t == term)
            .map_or(0.0, |(_, d)| *d)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.degrees.iter().map(|(t, d)| (t.as_str(), *d))
    }

    pub fn max_degree(&self) -> f64 {
        self.degrees.iter().map(|(_, d)| *d).fold(0.0, f64::max)
    }

    pub fn is_all_zero(&self) -> bool {
        self.max_degree() <= 0.0
    }

    /// Term with the highest degree; the earliest term wins ties.
    pub fn top_term(&self) -> Option<(&str, f64)> {
        let mut best: Option<(&str, f64)> = None;
        for (t, d) in self.iter() {
            if best.is_none_or(|(_, bd)| d > bd) {
                best = Some((t, d));
            }
        }
        best
    }
}
