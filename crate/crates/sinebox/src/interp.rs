//! Monotone piecewise-cubic interpolation (Fritsch-Carlson).
//!
//! Used for the optimal-length curve, where a plain polynomial fit
//! would oscillate between samples and extrapolate wildly. The
//! Fritsch-Carlson slope limiter keeps the interpolant monotone on
//! every interval where the data are monotone.

use crate::error::Error;

/// Cubic Hermite interpolant through `(x_i, y_i)` with Fritsch-Carlson
/// slopes. Evaluation outside the sampled range extrapolates linearly
/// using the boundary slope.
#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    /// Builds the interpolant. `xs` must be strictly increasing and finite,
    /// with at least two points.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self, Error> {
        if xs.len() != ys.len() {
            return Err(Error::InvalidInput(format!(
                "got {} abscissae but {} ordinates",
                xs.len(),
                ys.len()
            )));
        }
        if xs.len() < 2 {
            return Err(Error::InvalidInput(
                "need at least two points to interpolate".into(),
            ));
        }
        if xs.iter().chain(ys.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite interpolation data".into()));
        }
        if xs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(
                "abscissae must be strictly increasing".into(),
            ));
        }

        let n = xs.len();
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let d: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();

        let mut slopes = vec![0.0; n];
        for i in 1..n - 1 {
            if d[i - 1] * d[i] <= 0.0 {
                slopes[i] = 0.0;
            } else {
                // Weighted harmonic mean of the adjacent secants; this is the
                // classic shape-preserving choice.
                let w1 = 2.0 * h[i] + h[i - 1];
                let w2 = h[i] + 2.0 * h[i - 1];
                slopes[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
            }
        }
        slopes[0] = edge_slope(h[0], h.get(1).copied(), d[0], d.get(1).copied());
        slopes[n - 1] = edge_slope(
            h[n - 2],
            (n >= 3).then(|| h[n - 3]),
            d[n - 2],
            (n >= 3).then(|| d[n - 3]),
        );

        Ok(Self { xs, ys, slopes })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0] + self.slopes[0] * (x - self.xs[0]);
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1] + self.slopes[n - 1] * (x - self.xs[n - 1]);
        }
        let i = self.xs.partition_point(|&v| v <= x) - 1;
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let t2 = t * t;
        let omt = 1.0 - t;
        let h00 = (1.0 + 2.0 * t) * omt * omt;
        let h10 = t * omt * omt;
        let h01 = t2 * (3.0 - 2.0 * t);
        let h11 = t2 * (t - 1.0);
        h00 * self.ys[i] + h10 * h * self.slopes[i] + h01 * self.ys[i + 1] + h11 * h * self.slopes[i + 1]
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }
}

/// One-sided three-point slope estimate at a boundary, clamped so the
/// interpolant cannot overshoot the first interval (Fritsch-Carlson
/// endpoint rule). With only two points it degenerates to the secant.
fn edge_slope(h0: f64, h1: Option<f64>, d0: f64, d1: Option<f64>) -> f64 {
    let (h1, d1) = match (h1, d1) {
        (Some(h1), Some(d1)) => (h1, d1),
        _ => return d0,
    };
    let mut m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m * d0 <= 0.0 {
        m = 0.0;
    } else if d0 * d1 <= 0.0 && m.abs() > 3.0 * d0.abs() {
        m = 3.0 * d0;
    }
    m
}
