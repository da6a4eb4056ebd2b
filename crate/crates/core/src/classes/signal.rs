use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniformly sampled signal on `[0, T)`, `T = dt · len`, zero elsewhere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TraceJson", into = "TraceJson")]
pub struct SignalTrace {
    dt: f64,
    samples: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct TraceJson {
    dt: f64,
    samples: Vec<f64>,
}

impl TryFrom<TraceJson> for SignalTrace {
    type Error = Error;
    fn try_from(j: TraceJson) -> Result<Self> {
        SignalTrace::new(j.dt, j.samples)
    }
}

impl From<SignalTrace> for TraceJson {
    fn from(t: SignalTrace) -> Self {
        TraceJson {
            dt: t.dt,
            samples: t.samples,
        }
    }
}

impl SignalTrace {
    pub fn new(dt: f64, samples: Vec<f64>) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::DegenerateInput(format!("dt = {dt} must be finite and > 0")));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::DegenerateInput("trace has a non-finite sample".into()));
        }
        Ok(Self { dt, samples })
    }

    /// Samples `f(k·dt)` for `k = 0..n`.
    pub fn from_fn(dt: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(dt, (0..n).map(|k| f(k as f64 * dt)).collect())
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn horizon(&self) -> f64 {
        self.dt * self.samples.len() as f64
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            dt: self.dt,
            samples: self.samples.iter().map(|&v| f(v)).collect(),
        }
    }

    /// `α·self + β·other`.
    pub fn combine(&self, alpha: f64, other: &SignalTrace, beta: f64) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Self {
            dt: self.dt,
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(x, y)| alpha * x + beta * y)
                .collect(),
        })
    }

    pub fn check_compatible(&self, other: &SignalTrace) -> Result<()> {
        if self.samples.len() != other.samples.len() || self.dt != other.dt {
            return Err(Error::LengthMismatch(format!(
                "traces of {} samples at dt = {} and {} samples at dt = {}",
                self.samples.len(),
                self.dt,
                other.samples.len(),
                other.dt
            )));
        }
        Ok(())
    }

    /// Trapezoidal `∫ x y dt` of the linear interpolants.
    pub fn inner(&self, other: &SignalTrace) -> Result<f64> {
        self.check_compatible(other)?;
        Ok(trapezoid_dot(self.dt, &self.samples, &other.samples))
    }

    pub fn norm(&self) -> f64 {
        trapezoid_dot(self.dt, &self.samples, &self.samples).sqrt()
    }
}

pub(crate) fn trapezoid_dot(dt: f64, x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    if n == 0 {
        return 0.0;
    }
    let interior: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    dt * (interior - 0.5 * (x[0] * y[0] + x[n - 1] * y[n - 1]))
}
