use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A frequency on the extended axis. `∞` stays symbolic; in JSON it is the
/// string `"inf"` and finite values are plain numbers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FrequencyJson", into = "FrequencyJson")]
pub enum Frequency {
    Finite(f64),
    Infinity,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum FrequencyJson {
    Number(f64),
    Symbol(String),
}

impl TryFrom<FrequencyJson> for Frequency {
    type Error = Error;
    fn try_from(j: FrequencyJson) -> Result<Self> {
        match j {
            FrequencyJson::Number(w) => Ok(Frequency::Finite(w)),
            FrequencyJson::Symbol(s) if s == "inf" => Ok(Frequency::Infinity),
            FrequencyJson::Symbol(s) => Err(Error::InvalidGrid(format!("unknown frequency {s:?}"))),
        }
    }
}

impl From<Frequency> for FrequencyJson {
    fn from(f: Frequency) -> Self {
        match f {
            Frequency::Finite(w) => FrequencyJson::Number(w),
            Frequency::Infinity => FrequencyJson::Symbol("inf".into()),
        }
    }
}

impl Frequency {
    pub fn finite(self) -> Option<f64> {
        match self {
            Frequency::Finite(w) => Some(w),
            Frequency::Infinity => None,
        }
    }
}

impl std::fmt::Display for Frequency {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Frequency::Finite(w) => write!(f, "{w}"),
            Frequency::Infinity => write!(f, "inf"),
        }
    }
}

pub const DEFAULT_GRID_POINTS: usize = 2000;
pub const DEFAULT_OMEGA_MIN: f64 = 1e-3;
pub const DEFAULT_OMEGA_MAX: f64 = 1e3;

/// Sorted finite frequencies (rad/s) plus an optional symbolic `ω = ∞` point.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    omegas: Vec<f64>,
    include_infinity: bool,
}

impl FrequencyGrid {
    pub fn new(omegas: Vec<f64>, include_infinity: bool) -> Result<Self> {
        if let Some(w) = omegas.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidGrid(format!(
                "frequency {w} is not finite and nonnegative"
            )));
        }
        if omegas.windows(2).any(|p| p[1] <= p[0]) {
            return Err(Error::InvalidGrid("frequencies must be strictly increasing".into()));
        }
        Ok(Self {
            omegas,
            include_infinity,
        })
    }

    /// `{0} ∪ logspace(lo, hi, points)`, with `∞` when requested.
    pub fn logarithmic(lo: f64, hi: f64, points: usize, include_infinity: bool) -> Result<Self> {
        if !(lo > 0.0 && hi > lo && lo.is_finite() && hi.is_finite()) {
            return Err(Error::InvalidGrid(format!("bad log range [{lo}, {hi}]")));
        }
        let mut omegas = Vec::with_capacity(points + 1);
        omegas.push(0.0);
        omegas.extend(logspace(lo, hi, points));
        Self::new(omegas, include_infinity)
    }

    /// 2000 log points over `[1e-3, 1e3]`, plus `0` and `∞`.
    pub fn default_search() -> Self {
        Self::with_points(DEFAULT_GRID_POINTS)
    }

    pub fn with_points(points: usize) -> Self {
        Self::logarithmic(DEFAULT_OMEGA_MIN, DEFAULT_OMEGA_MAX, points, true)
            .expect("default range is valid")
    }

    /// Inserts `factor − 1` points inside every interval: geometric spacing
    /// between positive neighbours, linear spacing next to `ω = 0`.
    /// The result contains every original point.
    pub fn refine(&self, factor: usize) -> Self {
        let factor = factor.max(1);
        let mut omegas = Vec::with_capacity(self.omegas.len() * factor);
        for pair in self.omegas.windows(2) {
            let (w0, w1) = (pair[0], pair[1]);
            omegas.push(w0);
            for k in 1..factor {
                let t = k as f64 / factor as f64;
                let w = if w0 > 0.0 {
                    w0 * (w1 / w0).powf(t)
                } else {
                    w0 + (w1 - w0) * t
                };
                if w > *omegas.last().unwrap() && w < w1 {
                    omegas.push(w);
                }
            }
        }
        if let Some(&last) = self.omegas.last() {
            omegas.push(last);
        }
        Self {
            omegas,
            include_infinity: self.include_infinity,
        }
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn include_infinity(&self) -> bool {
        self.include_infinity
    }

    pub fn len(&self) -> usize {
        self.omegas.len() + usize::from(self.include_infinity)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Finite points in order, then `∞` if included.
    pub fn points(&self) -> impl Iterator<Item = Frequency> + '_ {
        self.omegas
            .iter()
            .map(|&w| Frequency::Finite(w))
            .chain(self.include_infinity.then_some(Frequency::Infinity))
    }

    /// True when every point of `other` also appears here (relative tolerance 1e-12).
    pub fn contains_grid(&self, other: &FrequencyGrid) -> bool {
        if other.include_infinity && !self.include_infinity {
            return false;
        }
        let mut i = 0;
        for &w in &other.omegas {
            while i < self.omegas.len() && self.omegas[i] < w * (1.0 - 1e-12) - 1e-300 {
                i += 1;
            }
            if i == self.omegas.len() || (self.omegas[i] - w).abs() > 1e-12 * w.abs().max(1e-300) {
                return false;
            }
        }
        true
    }
}

pub fn logspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![(lo * hi).sqrt()],
        _ => {
            let (l0, l1) = (lo.log10(), hi.log10());
            (0..points)
                .map(|k| 10f64.powf(l0 + (l1 - l0) * k as f64 / (points - 1) as f64))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_shape() {
        let g = FrequencyGrid::default_search();
        assert_eq!(g.omegas().len(), 2001);
        assert_eq!(g.omegas()[0], 0.0);
        assert!((g.omegas()[1] - 1e-3).abs() < 1e-15);
        assert!((g.omegas()[2000] - 1e3).abs() < 1e-9);
        assert_eq!(g.points().last(), Some(Frequency::Infinity));
        assert_eq!(g.len(), 2002);
    }

    #[test]
    fn rejects_unsorted_or_negative() {
        assert!(FrequencyGrid::new(vec![1.0, 0.5], false).is_err());
        assert!(FrequencyGrid::new(vec![1.0, 1.0], false).is_err());
        assert!(FrequencyGrid::new(vec![-1.0], false).is_err());
        assert!(FrequencyGrid::new(vec![f64::INFINITY], false).is_err());
    }

    #[test]
    fn refine_is_superset() {
        let g = FrequencyGrid::with_points(50);
        let r = g.refine(10);
        assert!(r.contains_grid(&g));
        assert!(!g.contains_grid(&r));
        assert_eq!(r.omegas().len(), (g.omegas().len() - 1) * 10 + 1);
        assert!(FrequencyGrid::new(r.omegas().to_vec(), true).is_ok());
    }
}
