use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::lti::{check_rh_inf, Frequency, FrequencyGrid, RationalTF};

/// `Δ̂` counts as constant when every grid value is within this distance
/// (relative to `max(1, |Δ̂(first)|)`) of the first.
pub const CONSTANT_TOL: f64 = 1e-9;

/// A bounded causal LTI `Δ` given by its transfer function.
#[derive(Debug, Clone, PartialEq)]
pub struct LtiUncertainty {
    tf: RationalTF,
}

impl LtiUncertainty {
    pub fn new(tf: RationalTF) -> Result<Self> {
        check_rh_inf(&tf)?;
        Ok(Self { tf })
    }

    pub fn tf(&self) -> &RationalTF {
        &self.tf
    }
}

/// Which branch of the case analysis on `Δ̂(jω) = α + jβ` produced a witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WitnessCase {
    /// `ω = 0`, `α < 0`: any `τ`.
    NegativeDc,
    /// `β = 0`, `α < 0`: `ωτ = π/2`, value `α`.
    NegativeReal,
    /// `α = 0`, `β ≠ 0`: `ωτ = ±π/2` with the sign of `β`, value `−|β|`.
    Imaginary,
    /// `α, β ≠ 0`: `tan(ωτ/2) = (α + 1)/β`, value `−2cos²(ωτ/2)`.
    TanBranch,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LtiWitness {
    pub omega: f64,
    pub tau: f64,
    pub alpha: f64,
    pub beta: f64,
    pub case: WitnessCase,
    /// `Re{Δ̂(jω)(1 + e^{jωτ})}` at the witness.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LtiReport {
    pub member: bool,
    pub constant: bool,
    /// Smallest sampled `Re{Δ̂(jω)(1 + e^{jωτ})}` and where it occurs.
    pub min_sampled: f64,
    pub min_sampled_at: (f64, f64),
    /// Most negative analytic witness over `ω > 0`, else the DC witness.
    pub witness: Option<LtiWitness>,
}

/// `Re{Δ̂(jω)(1 + e^{jωτ})}`.
pub fn shift_condition(value: Complex64, omega: f64, tau: f64) -> f64 {
    (value * (Complex64::new(1.0, 0.0) + Complex64::from_polar(1.0, omega * tau))).re
}

/// Analytic violation at one frequency, following the case analysis.
pub fn analytic_witness(value: Complex64, omega: f64) -> Option<LtiWitness> {
    let (alpha, beta) = (value.re, value.im);
    let witness = |case, tau: f64| LtiWitness {
        omega,
        tau,
        alpha,
        beta,
        case,
        value: shift_condition(value, omega, tau),
    };
    if omega == 0.0 {
        return (alpha < 0.0).then(|| witness(WitnessCase::NegativeDc, 0.0));
    }
    match (alpha == 0.0, beta == 0.0) {
        (_, true) => (alpha < 0.0).then(|| witness(WitnessCase::NegativeReal, FRAC_PI_2 / omega)),
        (true, false) => Some(witness(WitnessCase::Imaginary, FRAC_PI_2.copysign(beta) / omega)),
        (false, false) => Some(witness(
            WitnessCase::TanBranch,
            2.0 * ((alpha + 1.0) / beta).atan() / omega,
        )),
    }
}

/// Samples `Re{Δ̂(jω)(1 + e^{jωτ})} ≥ 0` over the finite grid frequencies
/// and `tau_samples` phases `ωτ ∈ [0, 2π)`.
///
/// Members are exactly the nonnegative constants: the verdict requires
/// `Δ̂` constant across the grid (including `ω = ∞`) and no sampled or
/// analytic violation.
pub fn lti_membership_test(u: &LtiUncertainty, grid: &FrequencyGrid, tau_samples: usize) -> Result<LtiReport> {
    let values: Vec<(Frequency, Complex64)> = grid
        .points()
        .map(|w| Ok((w, u.tf.evaluate(w)?)))
        .collect::<Result<_>>()?;

    let reference = values.first().map_or(Complex64::new(0.0, 0.0), |v| v.1);
    let tol = CONSTANT_TOL * reference.norm().max(1.0);
    let constant = values.iter().all(|(_, v)| (v - reference).norm() <= tol);

    let phases = tau_samples.max(1);
    let mut min_sampled = f64::INFINITY;
    let mut min_sampled_at = (0.0, 0.0);
    let mut witness: Option<LtiWitness> = None;
    let mut dc_witness: Option<LtiWitness> = None;
    for &(w, value) in &values {
        let Frequency::Finite(omega) = w else { continue };
        for k in 0..phases {
            let phase = 2.0 * PI * k as f64 / phases as f64;
            let tau = if omega > 0.0 { phase / omega } else { 0.0 };
            let v = shift_condition(value, omega, tau);
            if v < min_sampled {
                min_sampled = v;
                min_sampled_at = (omega, tau);
            }
            if omega == 0.0 {
                break;
            }
        }
        if let Some(c) = analytic_witness(value, omega) {
            if omega == 0.0 {
                dc_witness = Some(c);
            } else if witness.is_none_or(|best| c.value < best.value) {
                witness = Some(c);
            }
        }
    }
    let witness = witness.or(dc_witness);

    let violated = witness.is_some_and(|w| w.value < 0.0) || min_sampled < 0.0;
    Ok(LtiReport {
        member: constant && !violated,
        constant,
        min_sampled,
        min_sampled_at,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> FrequencyGrid {
        FrequencyGrid::with_points(200)
    }

    #[test]
    fn nonnegative_constant_is_member() {
        let u = LtiUncertainty::new(RationalTF::constant(2.0)).unwrap();
        let r = lti_membership_test(&u, &grid(), 16).unwrap();
        assert!(r.member && r.constant && r.witness.is_none());
        assert!(r.min_sampled >= 0.0);
    }

    #[test]
    fn negative_constant_witness() {
        let u = LtiUncertainty::new(RationalTF::constant(-1.0)).unwrap();
        let r = lti_membership_test(&u, &grid(), 16).unwrap();
        assert!(!r.member && r.constant);
        let w = r.witness.unwrap();
        assert_eq!(w.case, WitnessCase::NegativeReal);
        assert!((w.omega * w.tau - FRAC_PI_2).abs() < 1e-12);
        assert!((w.value + 1.0).abs() < 1e-12);
    }

    #[test]
    fn first_order_lag_tan_branch() {
        let u = LtiUncertainty::new(RationalTF::from_coeffs(&[1.0], &[1.0, 1.0]).unwrap()).unwrap();
        let r = lti_membership_test(&u, &grid(), 16).unwrap();
        assert!(!r.member && !r.constant);
        let w = r.witness.unwrap();
        assert_eq!(w.case, WitnessCase::TanBranch);
        assert!(((w.omega * w.tau / 2.0).tan() - (w.alpha + 1.0) / w.beta).abs() < 1e-9);
        let half = w.omega * w.tau / 2.0;
        assert!((w.value + 2.0 * half.cos().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn imaginary_case() {
        let w = analytic_witness(Complex64::new(0.0, -0.5), 2.0).unwrap();
        assert_eq!(w.case, WitnessCase::Imaginary);
        assert!((w.value + 0.5).abs() < 1e-15);
        assert!(analytic_witness(Complex64::new(3.0, 0.0), 2.0).is_none());
        assert_eq!(analytic_witness(Complex64::new(-1.0, 0.0), 0.0).unwrap().case, WitnessCase::NegativeDc);
    }
}
