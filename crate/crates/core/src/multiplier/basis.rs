use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lti::{logspace, Frequency};

pub const DEFAULT_RATE_MIN: f64 = 1e-2;
pub const DEFAULT_RATE_MAX: f64 = 1e2;
pub const DEFAULT_RATE_COUNT: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Causal,
    Anticausal,
}

impl Side {
    pub fn mirrored(self) -> Self {
        match self {
            Side::Causal => Side::Anticausal,
            Side::Anticausal => Side::Causal,
        }
    }
}

/// Unit-mass exponential kernel: `λe^{−λt}·1(t ≥ 0)` or its mirror image.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelElement {
    pub rate: f64,
    pub side: Side,
}

impl KernelElement {
    /// `λ/(λ + jω)` for causal, `λ/(λ − jω)` for anticausal; `0` at `ω = ∞`.
    pub fn transform(&self, omega: Frequency) -> Complex64 {
        match omega {
            Frequency::Infinity => Complex64::new(0.0, 0.0),
            Frequency::Finite(w) => {
                let jw = match self.side {
                    Side::Causal => w,
                    Side::Anticausal => -w,
                };
                Complex64::new(self.rate, 0.0) / Complex64::new(self.rate, jw)
            }
        }
    }

    /// Kernel value `z_i(t)`.
    pub fn time_value(&self, t: f64) -> f64 {
        let t = match self.side {
            Side::Causal => t,
            Side::Anticausal => -t,
        };
        if t < 0.0 {
            0.0
        } else {
            self.rate * (-self.rate * t).exp()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelBasis {
    elements: Vec<KernelElement>,
}

impl KernelBasis {
    pub fn new(elements: Vec<KernelElement>) -> Result<Self> {
        if let Some(e) = elements.iter().find(|e| !(e.rate > 0.0 && e.rate.is_finite())) {
            return Err(Error::InvalidBasis(format!(
                "rate {} must be positive and finite",
                e.rate
            )));
        }
        Ok(Self { elements })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Mirrored pairs (causal, anticausal) at `rate_count` log-spaced rates.
    pub fn log_mirrored(rate_count: usize, lo: f64, hi: f64) -> Result<Self> {
        if !(lo > 0.0 && hi >= lo) {
            return Err(Error::InvalidBasis(format!("bad rate range [{lo}, {hi}]")));
        }
        let rates = if rate_count == 1 || lo == hi {
            vec![(lo * hi).sqrt(); rate_count.min(1)]
        } else {
            logspace(lo, hi, rate_count)
        };
        Self::new(
            rates
                .into_iter()
                .flat_map(|rate| {
                    [Side::Causal, Side::Anticausal].map(|side| KernelElement { rate, side })
                })
                .collect(),
        )
    }

    /// The first `size` elements of the mirrored log basis with
    /// `⌈size/2⌉` rates over `[1e-2, 1e2]`. Size 20 is the default basis.
    pub fn with_size(size: usize) -> Self {
        let mut b = Self::log_mirrored(size.div_ceil(2), DEFAULT_RATE_MIN, DEFAULT_RATE_MAX)
            .expect("default rate range is valid");
        b.elements.truncate(size);
        b
    }

    /// Prefix of a fixed mirrored sequence whose rates follow a base-2
    /// van der Corput ordering of `log10 λ` over `[-2, 2]`, so that
    /// `nested(n)` is contained in `nested(n + 1)`.
    pub fn nested(size: usize) -> Self {
        let (l0, l1) = (DEFAULT_RATE_MIN.log10(), DEFAULT_RATE_MAX.log10());
        let elements = (1..)
            .map(|k| 10f64.powf(l0 + (l1 - l0) * van_der_corput(k)))
            .flat_map(|rate| [Side::Causal, Side::Anticausal].map(|side| KernelElement { rate, side }))
            .take(size)
            .collect();
        Self { elements }
    }

    pub fn elements(&self) -> &[KernelElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Every element with its side flipped.
    pub fn mirrored(&self) -> Self {
        Self {
            elements: self
                .elements
                .iter()
                .map(|e| KernelElement {
                    rate: e.rate,
                    side: e.side.mirrored(),
                })
                .collect(),
        }
    }

    pub fn description(&self) -> String {
        if self.elements.is_empty() {
            return "empty basis (z = 0)".into();
        }
        let (lo, hi) = self
            .elements
            .iter()
            .fold((f64::INFINITY, 0.0_f64), |(lo, hi), e| (lo.min(e.rate), hi.max(e.rate)));
        let causal = self.elements.iter().filter(|e| e.side == Side::Causal).count();
        format!(
            "{} unit-mass exponential kernels ({} causal, {} anticausal), rates in [{lo:e}, {hi:e}]",
            self.elements.len(),
            causal,
            self.elements.len() - causal
        )
    }
}

impl Default for KernelBasis {
    fn default() -> Self {
        Self::log_mirrored(DEFAULT_RATE_COUNT, DEFAULT_RATE_MIN, DEFAULT_RATE_MAX)
            .expect("default rate range is valid")
    }
}

fn van_der_corput(mut k: u64) -> f64 {
    let mut x = 0.0;
    let mut scale = 0.5;
    while k > 0 {
        if k & 1 == 1 {
            x += scale;
        }
        k >>= 1;
        scale /= 2.0;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_basis_has_twenty_mirrored_elements() {
        let b = KernelBasis::default();
        assert_eq!(b.len(), 20);
        assert!((b.elements()[0].rate - 1e-2).abs() < 1e-15);
        assert!((b.elements()[19].rate - 1e2).abs() < 1e-12);
        assert_eq!(b.elements()[0].side, Side::Causal);
        assert_eq!(b.elements()[1].side, Side::Anticausal);
        assert_eq!(KernelBasis::with_size(20), b);
    }

    #[test]
    fn nested_prefixes() {
        let big = KernelBasis::nested(40);
        for n in 0..40 {
            assert_eq!(KernelBasis::nested(n).elements(), &big.elements()[..n]);
        }
        assert!((big.elements()[0].rate - 1.0).abs() < 1e-12);
        let mut rates: Vec<f64> = big.elements().iter().map(|e| e.rate).collect();
        rates.dedup();
        assert_eq!(rates.len(), 20);
        assert!(rates.iter().all(|&r| r > 1e-2 && r < 1e2));
    }

    #[test]
    fn transform_closed_form() {
        let e = KernelElement {
            rate: 1.0,
            side: Side::Causal,
        };
        let z = e.transform(Frequency::Finite(1.0));
        assert!((z - Complex64::new(0.5, -0.5)).norm() < 1e-15);
        let m = KernelElement {
            rate: 1.0,
            side: Side::Anticausal,
        };
        assert!((m.transform(Frequency::Finite(1.0)) - z.conj()).norm() < 1e-15);
        assert_eq!(e.transform(Frequency::Infinity), Complex64::new(0.0, 0.0));
        assert_eq!(e.transform(Frequency::Finite(0.0)), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn rejects_bad_rates() {
        let bad = KernelElement {
            rate: 0.0,
            side: Side::Causal,
        };
        assert!(KernelBasis::new(vec![bad]).is_err());
    }
}
