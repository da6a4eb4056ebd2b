//! Finite-dimensional Zames-Falb kernels and the multiplier matrices.
//!
//! A kernel `z ∈ L1(−∞, ∞)` is a nonnegative (or signed) combination of
//! unit-mass exponentials `λe^{−λt}` supported on `t ≥ 0` (causal) or its
//! mirror on `t ≤ 0` (anticausal). Their transforms `λ/(λ ± jω)` are exact,
//! so every constraint built from a candidate is affine in its coefficients.
//!
//! There is no impulsive part in `z`: the only delta is the explicit `1` in
//! `M = 1 − Z`.

mod basis;
mod band;
mod candidate;
mod pi;

pub use band::SlopeBand;
pub use basis::{KernelBasis, KernelElement, Side, DEFAULT_RATE_COUNT, DEFAULT_RATE_MAX, DEFAULT_RATE_MIN};
pub use candidate::{Mode, MultiplierCandidate, BUDGET_SLACK};
pub use pi::{build_pi_monotone, build_pi_slope, PiForm, PiMatrix};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lti::{check_rh_inf, Frequency, FrequencyGrid, RationalTF};

/// `K(ω) = (G − b⁻¹)(a·G* − 1)`, the plant factor of the certification
/// condition `Re{(1 − Z)K} ≥ ε`. With `a = 0, b = ∞` this is `−G`.
pub fn condition_kernel(g: &RationalTF, band: &SlopeBand, omega: Frequency) -> Result<Complex64> {
    let gv = g.evaluate(omega)?;
    Ok((gv - band.b_inv()) * (gv.conj() * band.a() - 1.0))
}

/// `Re{(1 − Z(jω)) K(ω)}` at every grid point, in grid order.
pub fn condition_values(
    g: &RationalTF,
    cand: &MultiplierCandidate,
    band: &SlopeBand,
    grid: &FrequencyGrid,
) -> Result<Vec<(Frequency, f64)>> {
    check_rh_inf(g)?;
    cand.check_budget()?;
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    grid.points()
        .map(|w| {
            let k = condition_kernel(g, band, w)?;
            Ok((w, (cand.m_value(w) * k).re))
        })
        .collect()
}

/// Minimum over the grid (including `∞` when present) of
/// `Re{(1 − Z)(G − b⁻¹)(aG* − 1)}`; positive certifies the condition at
/// grid resolution with that margin.
pub fn condition_margin(
    g: &RationalTF,
    cand: &MultiplierCandidate,
    band: &SlopeBand,
    grid: &FrequencyGrid,
) -> Result<f64> {
    Ok(condition_values(g, cand, band, grid)?
        .into_iter()
        .fold(f64::INFINITY, |m, (_, v)| m.min(v)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn monotone() -> SlopeBand {
        SlopeBand::monotone()
    }

    #[test]
    fn margin_of_biproper_plant_with_zero_multiplier() {
        let g = RationalTF::from_coeffs(&[-1.0, -2.0], &[1.0, 1.0]).unwrap();
        let cand = MultiplierCandidate::zero(KernelBasis::default(), Mode::NonNeg);
        let m = condition_margin(&g, &cand, &monotone(), &FrequencyGrid::default_search()).unwrap();
        // (2 + ω²)/(1 + ω²) has infimum 1, attained at ω = ∞
        assert!((m - 1.0).abs() < 1e-15);
    }

    #[test]
    fn margin_of_negative_unity() {
        let g = RationalTF::constant(-1.0);
        let cand = MultiplierCandidate::zero(KernelBasis::empty(), Mode::NonNeg);
        let m = condition_margin(&g, &cand, &monotone(), &FrequencyGrid::default_search()).unwrap();
        assert_eq!(m, 1.0);
    }

    #[test]
    fn margin_rejects_unstable_plant_and_excess_budget() {
        let bad = RationalTF::from_coeffs(&[1.0], &[1.0, -1.0]).unwrap();
        let cand = MultiplierCandidate::zero(KernelBasis::empty(), Mode::NonNeg);
        let grid = FrequencyGrid::default_search();
        assert!(matches!(
            condition_margin(&bad, &cand, &monotone(), &grid),
            Err(Error::NotInRhInf(_))
        ));
        let basis = KernelBasis::default();
        let over = MultiplierCandidate::new(basis.clone(), Mode::NonNeg, vec![0.1; 20], vec![0.0; 20])
            .unwrap();
        let g = RationalTF::constant(-1.0);
        assert!(matches!(
            condition_margin(&g, &over, &monotone(), &grid),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn slope_kernel_reduces_to_minus_g() {
        let g = RationalTF::from_coeffs(&[1.0, 3.0], &[1.0, 2.0, 5.0]).unwrap();
        for w in [0.0, 0.3, 2.0, 40.0] {
            let k = condition_kernel(&g, &monotone(), Frequency::Finite(w)).unwrap();
            let minus_g = -g.evaluate(Frequency::Finite(w)).unwrap();
            assert!((k - minus_g).norm() < 1e-15);
        }
    }
}
