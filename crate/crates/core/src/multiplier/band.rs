use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slope restriction `a ≤ (Δ(x₁) − Δ(x₂))/(x₁ − x₂) ≤ b` with `0 ≤ a < b ≤ ∞`.
///
/// `(0, ∞)` is the plain monotone class. In JSON, `b = ∞` is written as `null`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BandJson", into = "BandJson")]
pub struct SlopeBand {
    a: f64,
    b: f64,
}

#[derive(Serialize, Deserialize)]
struct BandJson {
    a: f64,
    b: Option<f64>,
}

impl TryFrom<BandJson> for SlopeBand {
    type Error = Error;
    fn try_from(j: BandJson) -> Result<Self> {
        SlopeBand::new(j.a, j.b.unwrap_or(f64::INFINITY))
    }
}

impl From<SlopeBand> for BandJson {
    fn from(band: SlopeBand) -> Self {
        BandJson {
            a: band.a,
            b: band.b.is_finite().then_some(band.b),
        }
    }
}

impl SlopeBand {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && a >= 0.0) {
            return Err(Error::InvalidBand(format!("a = {a} must be finite and >= 0")));
        }
        if b.is_nan() || b <= a || b == f64::NEG_INFINITY {
            return Err(Error::InvalidBand(format!("b = {b} must exceed a = {a}")));
        }
        Ok(Self { a, b })
    }

    pub fn monotone() -> Self {
        Self {
            a: 0.0,
            b: f64::INFINITY,
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// `b⁻¹`, zero for `b = ∞`.
    pub fn b_inv(&self) -> f64 {
        if self.b.is_finite() {
            1.0 / self.b
        } else {
            0.0
        }
    }

    /// `a⁻¹`, `+∞` for `a = 0`.
    pub fn a_inv(&self) -> f64 {
        if self.a > 0.0 {
            1.0 / self.a
        } else {
            f64::INFINITY
        }
    }

    pub fn is_monotone(&self) -> bool {
        self.a == 0.0 && self.b.is_infinite()
    }

    /// The real segment `[b⁻¹, a⁻¹]` a Nyquist curve must avoid.
    pub fn forbidden_segment(&self) -> (f64, f64) {
        (self.b_inv(), self.a_inv())
    }
}
