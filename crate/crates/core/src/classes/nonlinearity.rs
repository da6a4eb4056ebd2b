use serde::{Deserialize, Serialize};

use super::signal::SignalTrace;
use crate::error::{Error, Result};

/// Tolerance for `Δ(0) = 0` and for the odd-symmetry comparison, relative
/// to the largest breakpoint value.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Continuous piecewise-linear `Δ: ℝ → ℝ` through `(breakpoints[i], values[i])`,
/// continued linearly beyond the outer breakpoints with the end-segment slopes.
///
/// `Δ(0) = 0` always holds. Monotonicity and oddness are computed from the
/// data; optional claims in the JSON form are checked against them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NonlinearityJson", into = "NonlinearityJson")]
pub struct StaticNonlinearity {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct NonlinearityJson {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    claims_monotone: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    claims_odd: Option<bool>,
}

impl TryFrom<NonlinearityJson> for StaticNonlinearity {
    type Error = Error;
    fn try_from(j: NonlinearityJson) -> Result<Self> {
        let nl = StaticNonlinearity::new(j.breakpoints, j.values)?;
        if let Some(claim) = j.claims_monotone {
            if claim != nl.is_monotone() {
                return Err(Error::InvalidNonlinearity(format!(
                    "claims_monotone = {claim} contradicts the data"
                )));
            }
        }
        if let Some(claim) = j.claims_odd {
            if claim != nl.is_odd() {
                return Err(Error::InvalidNonlinearity(format!(
                    "claims_odd = {claim} contradicts the data"
                )));
            }
        }
        Ok(nl)
    }
}

impl From<StaticNonlinearity> for NonlinearityJson {
    fn from(nl: StaticNonlinearity) -> Self {
        NonlinearityJson {
            breakpoints: nl.breakpoints,
            values: nl.values,
            claims_monotone: None,
            claims_odd: None,
        }
    }
}

impl StaticNonlinearity {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() != values.len() {
            return Err(Error::InvalidNonlinearity(format!(
                "{} breakpoints but {} values",
                breakpoints.len(),
                values.len()
            )));
        }
        if breakpoints.len() < 2 {
            return Err(Error::InvalidNonlinearity("need at least two breakpoints".into()));
        }
        if !breakpoints.iter().chain(&values).all(|v| v.is_finite()) {
            return Err(Error::InvalidNonlinearity("non-finite breakpoint or value".into()));
        }
        if breakpoints.windows(2).any(|p| p[1] <= p[0]) {
            return Err(Error::InvalidNonlinearity("breakpoints must be strictly increasing".into()));
        }
        let nl = Self { breakpoints, values };
        let scale = nl.value_scale();
        let at_zero = nl.eval(0.0);
        if at_zero.abs() > SYMMETRY_TOL * scale {
            return Err(Error::InvalidNonlinearity(format!("Δ(0) = {at_zero}, must be 0")));
        }
        Ok(nl)
    }

    /// `Δ(x) = kx`.
    pub fn linear(k: f64) -> Self {
        Self::new(vec![-1.0, 1.0], vec![-k, k]).expect("linear map is valid")
    }

    pub fn identity() -> Self {
        Self::linear(1.0)
    }

    /// Unit saturation: `x` clipped to `[−1, 1]`.
    pub fn saturation() -> Self {
        Self::new(vec![-2.0, -1.0, 1.0, 2.0], vec![-1.0, -1.0, 1.0, 1.0]).expect("saturation is valid")
    }

    /// Zero on `[−width, width]`, slope `slope` outside.
    pub fn deadzone(width: f64, slope: f64) -> Result<Self> {
        if !(width > 0.0) {
            return Err(Error::InvalidNonlinearity(format!("deadzone width {width} must be > 0")));
        }
        Self::new(
            vec![-width - 1.0, -width, width, width + 1.0],
            vec![-slope, 0.0, 0.0, slope],
        )
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn value_scale(&self) -> f64 {
        self.values.iter().fold(1.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn eval(&self, x: f64) -> f64 {
        let bp = &self.breakpoints;
        let n = bp.len();
        // segment index k covers [bp[k], bp[k+1]], clamped to the end segments
        let k = match bp.partition_point(|&b| b <= x) {
            0 => 0,
            i => (i - 1).min(n - 2),
        };
        let slope = (self.values[k + 1] - self.values[k]) / (bp[k + 1] - bp[k]);
        self.values[k] + slope * (x - bp[k])
    }

    pub fn apply(&self, x: &SignalTrace) -> SignalTrace {
        x.map(|v| self.eval(v))
    }

    /// Segment slopes in breakpoint order; the first and last also hold on
    /// the unbounded end pieces.
    pub fn slopes(&self) -> Vec<f64> {
        self.breakpoints
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(b, v)| (v[1] - v[0]) / (b[1] - b[0]))
            .collect()
    }

    /// `(min, max)` of all difference quotients. For a piecewise-linear map
    /// these are the extreme segment slopes.
    pub fn slope_range(&self) -> (f64, f64) {
        self.slopes()
            .into_iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| (lo.min(s), hi.max(s)))
    }

    pub fn is_monotone(&self) -> bool {
        self.slope_range().0 >= 0.0
    }

    /// `Δ(−x) = −Δ(x)` at every breakpoint, every mirrored breakpoint, and
    /// one point beyond them (which pins the end slopes).
    pub fn is_odd(&self) -> bool {
        let tol = SYMMETRY_TOL * self.value_scale();
        let reach = self.breakpoints.iter().fold(0.0_f64, |m, b| m.max(b.abs())) + 1.0;
        self.breakpoints
            .iter()
            .copied()
            .chain(std::iter::once(reach))
            .all(|x| (self.eval(-x) + self.eval(x)).abs() <= tol)
    }

    /// `θΔ + (1 − θ)a·x`, the homotopy from the linear gain `a` to `Δ`.
    pub fn blend_with_linear(&self, theta: f64, a: f64) -> Self {
        let values = self
            .breakpoints
            .iter()
            .zip(&self.values)
            .map(|(&x, &v)| theta * v + (1.0 - theta) * a * x)
            .collect();
        Self {
            breakpoints: self.breakpoints.clone(),
            values,
        }
    }

    /// The map `x̄ ↦ ȳ` with `x̄ = x − b⁻¹Δ(x)`, `ȳ = −ax + Δ(x)`.
    ///
    /// It maps the band `[a, b]` onto the monotone class. Fails when `x̄` is
    /// not strictly increasing in `x` (some slope `≥ b`), since `ȳ` is then
    /// not a function of `x̄`.
    pub fn loop_transform(&self, a: f64, b_inv: f64) -> Result<Self> {
        let xbar: Vec<f64> = self
            .breakpoints
            .iter()
            .zip(&self.values)
            .map(|(&x, &v)| x - b_inv * v)
            .collect();
        let ybar: Vec<f64> = self
            .breakpoints
            .iter()
            .zip(&self.values)
            .map(|(&x, &v)| -a * x + v)
            .collect();
        if xbar.windows(2).any(|p| p[1] <= p[0]) {
            return Err(Error::InvalidNonlinearity(
                "x - Δ(x)/b is not strictly increasing; the transformed map is not a function".into(),
            ));
        }
        Self::new(xbar, ybar)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn saturation_values() {
        let sat = StaticNonlinearity::saturation();
        let x = SignalTrace::new(1.0, vec![-2.0, 0.5, 3.0]).unwrap();
        assert_eq!(sat.apply(&x).samples(), &[-1.0, 0.5, 1.0]);
        assert_eq!(sat.eval(-10.0), -1.0);
        assert!(sat.is_monotone() && sat.is_odd());
        assert_eq!(sat.slope_range(), (0.0, 1.0));
    }

    #[test]
    fn end_slopes_extend() {
        let nl = StaticNonlinearity::new(vec![-1.0, 0.0, 2.0], vec![-3.0, 0.0, 1.0]).unwrap();
        assert_eq!(nl.eval(-2.0), -6.0);
        assert_eq!(nl.eval(4.0), 2.0);
        assert_eq!(nl.eval(1.0), 0.5);
        assert!(nl.is_monotone());
        assert!(!nl.is_odd());
    }

    #[test]
    fn rejects_bad_data() {
        assert!(StaticNonlinearity::new(vec![0.0], vec![0.0]).is_err());
        assert!(StaticNonlinearity::new(vec![1.0, 0.0], vec![0.0, 0.0]).is_err());
        assert!(StaticNonlinearity::new(vec![-1.0, 1.0], vec![0.0, 1.0]).is_err());
        assert!(StaticNonlinearity::new(vec![-1.0, 1.0], vec![0.0]).is_err());
    }

    #[test]
    fn oddness_needs_matching_end_slopes() {
        // odd at every breakpoint, but the end slopes differ
        let nl = StaticNonlinearity::new(vec![-1.0, 0.0, 1.0, 2.0], vec![-1.0, 0.0, 1.0, 3.0]).unwrap();
        assert!(!nl.is_odd());
        assert!(StaticNonlinearity::linear(-2.0).is_odd());
        assert!(!StaticNonlinearity::linear(-2.0).is_monotone());
    }

    #[test]
    fn json_claims_are_checked() {
        let ok: StaticNonlinearity =
            serde_json::from_str(r#"{"breakpoints":[-1,1],"values":[-2,2],"claims_monotone":true}"#).unwrap();
        assert_eq!(ok, StaticNonlinearity::linear(2.0));
        let lie = serde_json::from_str::<StaticNonlinearity>(
            r#"{"breakpoints":[-1,1],"values":[1,-1],"claims_monotone":true}"#,
        );
        assert!(lie.is_err());
    }

    #[test]
    fn loop_transform_of_linear_gain() {
        // Δ = kx with a < k < b maps to the gain (k − a)/(1 − k/b)
        let t = StaticNonlinearity::linear(1.0).loop_transform(0.5, 0.5).unwrap();
        assert!((t.eval(1.0) - 1.0).abs() < 1e-15);
        assert!(StaticNonlinearity::linear(2.0).loop_transform(0.5, 0.5).is_err());
    }
}
