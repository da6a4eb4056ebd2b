use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::basis::{KernelBasis, KernelElement, Side};
use crate::error::{Error, Result};
use crate::lti::Frequency;

/// Absolute slack allowed on `Σ(c⁺ + c⁻) ≤ 1` before a budget is rejected.
pub const BUDGET_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `z ≥ 0`: the monotone class.
    #[serde(rename = "nonneg")]
    NonNeg,
    /// Signed `z`: the odd-monotone class.
    Signed,
}

/// `z = Σ (c⁺ᵢ − c⁻ᵢ) zᵢ` over a kernel basis.
///
/// In [`Mode::NonNeg`] all `c⁻` are zero and `Σ c⁺ = ‖z‖₁` exactly. In
/// [`Mode::Signed`] `Σ(c⁺ + c⁻)` is only the triangle-inequality upper bound
/// on `‖z‖₁`, so budgets (and failed searches) are conservative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CandidateJson", into = "CandidateJson")]
pub struct MultiplierCandidate {
    basis: KernelBasis,
    mode: Mode,
    cpos: Vec<f64>,
    cneg: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct CandidateJson {
    mode: Mode,
    rates: Vec<f64>,
    sides: Vec<Side>,
    cpos: Vec<f64>,
    cneg: Vec<f64>,
}

impl TryFrom<CandidateJson> for MultiplierCandidate {
    type Error = Error;
    fn try_from(j: CandidateJson) -> Result<Self> {
        if j.rates.len() != j.sides.len() {
            return Err(Error::InvalidBasis(format!(
                "{} rates but {} sides",
                j.rates.len(),
                j.sides.len()
            )));
        }
        let basis = KernelBasis::new(
            j.rates
                .iter()
                .zip(&j.sides)
                .map(|(&rate, &side)| KernelElement { rate, side })
                .collect(),
        )?;
        MultiplierCandidate::new(basis, j.mode, j.cpos, j.cneg)
    }
}

impl From<MultiplierCandidate> for CandidateJson {
    fn from(c: MultiplierCandidate) -> Self {
        CandidateJson {
            mode: c.mode,
            rates: c.basis.elements().iter().map(|e| e.rate).collect(),
            sides: c.basis.elements().iter().map(|e| e.side).collect(),
            cpos: c.cpos,
            cneg: c.cneg,
        }
    }
}

impl MultiplierCandidate {
    pub fn new(basis: KernelBasis, mode: Mode, cpos: Vec<f64>, cneg: Vec<f64>) -> Result<Self> {
        let n = basis.len();
        if cpos.len() != n || cneg.len() != n {
            return Err(Error::InvalidBasis(format!(
                "basis has {n} elements but got {} c+ and {} c- coefficients",
                cpos.len(),
                cneg.len()
            )));
        }
        if let Some(c) = cpos.iter().chain(&cneg).find(|c| !(c.is_finite() && **c >= 0.0)) {
            return Err(Error::InvalidBasis(format!("coefficient {c} must be finite and >= 0")));
        }
        if mode == Mode::NonNeg && cneg.iter().any(|&c| c != 0.0) {
            return Err(Error::InvalidBasis("nonneg mode requires c- = 0".into()));
        }
        Ok(Self {
            basis,
            mode,
            cpos,
            cneg,
        })
    }

    pub fn zero(basis: KernelBasis, mode: Mode) -> Self {
        let n = basis.len();
        Self {
            basis,
            mode,
            cpos: vec![0.0; n],
            cneg: vec![0.0; n],
        }
    }

    pub fn basis(&self) -> &KernelBasis {
        &self.basis
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn cpos(&self) -> &[f64] {
        &self.cpos
    }

    pub fn cneg(&self) -> &[f64] {
        &self.cneg
    }

    /// Net coefficient `c⁺ᵢ − c⁻ᵢ` per element.
    pub fn net_coeffs(&self) -> impl Iterator<Item = f64> + '_ {
        self.cpos.iter().zip(&self.cneg).map(|(p, n)| p - n)
    }

    /// `Σ(c⁺ + c⁻)`: exact `‖z‖₁` in nonneg mode, an upper bound otherwise.
    pub fn l1_budget(&self) -> f64 {
        self.cpos.iter().chain(&self.cneg).sum()
    }

    pub fn check_budget(&self) -> Result<()> {
        let budget = self.l1_budget();
        if budget > 1.0 + BUDGET_SLACK {
            return Err(Error::BudgetExceeded { budget });
        }
        Ok(())
    }

    /// `Z(jω)`, the Fourier transform of the kernel; `0` at `ω = ∞`.
    pub fn z_transform(&self, omega: Frequency) -> Complex64 {
        self.basis
            .elements()
            .iter()
            .zip(self.net_coeffs())
            .filter(|(_, c)| *c != 0.0)
            .map(|(e, c)| e.transform(omega) * c)
            .sum()
    }

    /// `M(jω) = 1 − Z(jω)`.
    pub fn m_value(&self, omega: Frequency) -> Complex64 {
        Complex64::new(1.0, 0.0) - self.z_transform(omega)
    }

    /// Kernel value `z(t)`.
    pub fn kernel_value(&self, t: f64) -> f64 {
        self.basis
            .elements()
            .iter()
            .zip(self.net_coeffs())
            .map(|(e, c)| c * e.time_value(t))
            .sum()
    }

    /// The time-reversed kernel `z(−t)`, whose transform is `Z(jω)*`.
    pub fn reflected(&self) -> Self {
        Self {
            basis: self.basis.mirrored(),
            mode: self.mode,
            cpos: self.cpos.clone(),
            cneg: self.cneg.clone(),
        }
    }
}
