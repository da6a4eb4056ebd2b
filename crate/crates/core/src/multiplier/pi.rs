use num_complex::Complex64;

use super::band::SlopeBand;
use super::candidate::MultiplierCandidate;
use crate::error::{Error, Result};
use crate::lti::{Frequency, FrequencyGrid};

pub type Mat2 = [[Complex64; 2]; 2];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PiForm {
    /// `[[0, M*], [M, 0]]`.
    AntiDiagonal,
    /// `[[−a(M+M*), ab⁻¹M + M*], [ab⁻¹M* + M, −b⁻¹(M+M*)]]`.
    Slope { a: f64, b_inv: f64 },
}

/// Frequency-indexed Hermitian multiplier matrix built from `M = 1 − Z`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiMatrix {
    cand: MultiplierCandidate,
    form: PiForm,
}

pub fn build_pi_monotone(cand: &MultiplierCandidate) -> Result<PiMatrix> {
    cand.check_budget()?;
    Ok(PiMatrix {
        cand: cand.clone(),
        form: PiForm::AntiDiagonal,
    })
}

pub fn build_pi_slope(cand: &MultiplierCandidate, band: &SlopeBand) -> Result<PiMatrix> {
    cand.check_budget()?;
    if !band.b().is_finite() {
        return Err(Error::InfiniteB);
    }
    Ok(PiMatrix {
        cand: cand.clone(),
        form: PiForm::Slope {
            a: band.a(),
            b_inv: band.b_inv(),
        },
    })
}

impl PiMatrix {
    /// The anti-diagonal form for `[0, ∞]`, otherwise the slope form with
    /// `b⁻¹ = 0` allowed for an infinite upper slope.
    pub fn for_band(cand: &MultiplierCandidate, band: &SlopeBand) -> Result<PiMatrix> {
        cand.check_budget()?;
        let form = if band.is_monotone() {
            PiForm::AntiDiagonal
        } else {
            PiForm::Slope {
                a: band.a(),
                b_inv: band.b_inv(),
            }
        };
        Ok(PiMatrix {
            cand: cand.clone(),
            form,
        })
    }

    pub fn form(&self) -> PiForm {
        self.form
    }

    pub fn candidate(&self) -> &MultiplierCandidate {
        &self.cand
    }

    pub fn at(&self, omega: Frequency) -> Mat2 {
        let m = self.cand.m_value(omega);
        let zero = Complex64::new(0.0, 0.0);
        match self.form {
            PiForm::AntiDiagonal => [[zero, m.conj()], [m, zero]],
            PiForm::Slope { a, b_inv } => {
                let herm = m + m.conj();
                [
                    [-herm * a, m * (a * b_inv) + m.conj()],
                    [m.conj() * (a * b_inv) + m, -herm * b_inv],
                ]
            }
        }
    }

    /// `v* Π(jω) v`. Real up to rounding since `Π` is Hermitian.
    pub fn quadratic_form(&self, v: [Complex64; 2], omega: Frequency) -> f64 {
        let p = self.at(omega);
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                acc += v[i].conj() * p[i][j] * v[j];
            }
        }
        acc.re
    }

    /// Spectral norm of `Π(jω)` (largest absolute eigenvalue of a Hermitian 2×2).
    pub fn norm_at(&self, omega: Frequency) -> f64 {
        let p = self.at(omega);
        let (d1, d2) = (p[0][0].re, p[1][1].re);
        let mid = 0.5 * (d1 + d2);
        let rad = (0.5 * (d1 - d2)).hypot(p[0][1].norm());
        (mid + rad).abs().max((mid - rad).abs())
    }

    /// `sup_ω ‖Π(jω)‖` over the grid.
    pub fn sup_norm(&self, grid: &FrequencyGrid) -> f64 {
        grid.points().map(|w| self.norm_at(w)).fold(0.0, f64::max)
    }
}
