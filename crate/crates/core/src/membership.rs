use std::fmt;

use crate::error::FuzzyError;

/// Piecewise-linear membership function described by four breakpoints.
///
/// Covers trapezoids (`a < b <= c < d`), triangles (`b == c`) and shoulders
/// (`a == b` at the lower universe bound or `c == d` at the upper one).
/// Membership is 0 outside `[a, d]`, rises linearly on `[a, b]`, is 1 on
/// `[b, c]` and falls linearly on `[c, d]`. A degenerate rise or fall takes
/// the plateau value at its breakpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PiecewiseLinearMF {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl PiecewiseLinearMF {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self, FuzzyError> {
        if ![a, b, c, d].iter().all(|v| v.is_finite()) {
            return Err(FuzzyError::InvalidShape {
                breakpoints: [a, b, c, d],
                reason: "breakpoints must be finite",
            });
        }
        if !(a <= b && b <= c && c <= d) {
            return Err(FuzzyError::InvalidShape {
                breakpoints: [a, b, c, d],
                reason: "breakpoints must satisfy a <= b <= c <= d",
            });
        }
        Ok(Self { a, b, c, d })
    }

    pub fn triangle(a: f64, peak: f64, d: f64) -> Result<Self, FuzzyError> {
        Self::new(a, peak, peak, d)
    }

    pub fn breakpoints(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn support(&self) -> (f64, f64) {
        (self.a, self.d)
    }

    pub fn plateau(&self) -> (f64, f64) {
        (self.b, self.c)
    }

    /// Degree of membership of `x`, always in `[0, 1]`.
    pub fn membership(&self, x: f64) -> f64 {
        let Self { a, b, c, d } = *self;
        if x < a || x > d {
            0.0
        } else if x >= b && x <= c {
            1.0
        } else if x < b {
            // a < b here, otherwise x >= b would have matched
            ((x - a) / (b - a)).clamp(0.0, 1.0)
        } else {
            ((d - x) / (d - c)).clamp(0.0, 1.0)
        }
    }
}

impl fmt::Display for PiecewiseLinearMF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.a, self.b, self.c, self.d)
    }
}
