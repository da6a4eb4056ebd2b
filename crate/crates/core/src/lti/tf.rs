use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::Frequency;
use super::poly::Polynomial;
use crate::error::{Error, Result};

/// Relative threshold below which `|den(jω)|` counts as a pole on the axis.
pub const POLE_ON_AXIS_REL_TOL: f64 = 1e-12;

/// SISO real-rational transfer function `num(s) / den(s)`.
///
/// The denominator is normalized to unit leading coefficient on
/// construction (the numerator is scaled by the same factor).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TfJson", into = "TfJson")]
pub struct RationalTF {
    num: Polynomial,
    den: Polynomial,
}

#[derive(Serialize, Deserialize)]
struct TfJson {
    num: Vec<f64>,
    den: Vec<f64>,
}

impl TryFrom<TfJson> for RationalTF {
    type Error = Error;
    fn try_from(j: TfJson) -> Result<Self> {
        RationalTF::from_coeffs(&j.num, &j.den)
    }
}

impl From<RationalTF> for TfJson {
    fn from(tf: RationalTF) -> Self {
        TfJson {
            num: tf.num.coeffs().to_vec(),
            den: tf.den.coeffs().to_vec(),
        }
    }
}

impl RationalTF {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DegenerateInput("denominator is identically zero".into()));
        }
        if !num.is_finite() || !den.is_finite() {
            return Err(Error::DegenerateInput("non-finite coefficient".into()));
        }
        let lead = den.leading();
        Ok(Self {
            num: num.scale(1.0 / lead),
            den: den.scale(1.0 / lead),
        })
    }

    pub fn from_coeffs(num: &[f64], den: &[f64]) -> Result<Self> {
        Self::new(Polynomial::new(num.to_vec()), Polynomial::new(den.to_vec()))
    }

    pub fn constant(c: f64) -> Self {
        Self {
            num: Polynomial::constant(c),
            den: Polynomial::constant(1.0),
        }
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_proper(&self) -> bool {
        self.num.is_zero() || self.num.degree() <= self.den.degree()
    }

    pub fn is_strictly_proper(&self) -> bool {
        self.num.is_zero() || self.num.degree() < self.den.degree()
    }

    /// Value of `lim_{ω→∞} tf(jω)`.
    pub fn feedthrough(&self) -> Result<f64> {
        if !self.is_proper() {
            return Err(Error::Improper {
                num: self.num.degree(),
                den: self.den.degree(),
            });
        }
        if self.is_strictly_proper() {
            Ok(0.0)
        } else {
            Ok(self.num.leading() / self.den.leading())
        }
    }

    /// Evaluates at an arbitrary complex point, with no pole check.
    pub fn eval_s(&self, s: Complex64) -> Complex64 {
        self.num.eval(s) / self.den.eval(s)
    }

    /// `tf(jω)`, or the feedthrough limit at `ω = ∞`.
    pub fn evaluate(&self, omega: Frequency) -> Result<Complex64> {
        match omega {
            Frequency::Infinity => Ok(Complex64::new(self.feedthrough()?, 0.0)),
            Frequency::Finite(w) => {
                let s = Complex64::new(0.0, w);
                let d = self.den.eval(s);
                if d.norm() < POLE_ON_AXIS_REL_TOL * self.den.max_abs_coeff() {
                    return Err(Error::PoleOnAxis { omega: w });
                }
                Ok(self.num.eval(s) / d)
            }
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, k: f64) -> Self {
        Self {
            num: self.num.scale(k),
            den: self.den.clone(),
        }
    }

    /// `tf + c` for a real constant.
    pub fn add_constant(&self, c: f64) -> Self {
        Self {
            num: &self.num + &self.den.scale(c),
            den: self.den.clone(),
        }
    }

    /// Characteristic polynomial `den − k·num` of the positive-feedback loop
    /// closed around the static gain `k`.
    pub fn positive_feedback_char_poly(&self, k: f64) -> Polynomial {
        &self.den - &self.num.scale(k)
    }
}
