use num_complex::Complex64;
use proptest::prelude::*;
use zfcert::lti::Frequency;
use zfcert::multiplier::{KernelBasis, KernelElement, Mode, MultiplierCandidate, Side};

mod common;
use common::gauss;

/// Rates in [0.5, 20], so the kernel is below e⁻³⁰ past |t| = 60.
fn test_basis() -> KernelBasis {
    let elements = [0.5, 1.3, 4.0, 20.0]
        .into_iter()
        .flat_map(|rate| [Side::Causal, Side::Anticausal].map(|side| KernelElement { rate, side }))
        .collect();
    KernelBasis::new(elements).unwrap()
}

fn candidate(mode: Mode, cpos: &[f64], cneg: &[f64]) -> MultiplierCandidate {
    MultiplierCandidate::new(test_basis(), mode, cpos.to_vec(), cneg.to_vec()).unwrap()
}

fn fourier_by_quadrature(cand: &MultiplierCandidate, omega: f64) -> Complex64 {
    // split at t = 0, where the kernel jumps
    let f = |t: f64| Complex64::from_polar(cand.kernel_value(t), -omega * t);
    gauss(-60.0, 0.0, 6000, f) + gauss(0.0, 60.0, 6000, f)
}

#[test]
fn z_transform_matches_quadrature() {
    let signed = candidate(
        Mode::Signed,
        &[0.1, 0.0, 0.2, 0.05, 0.0, 0.1, 0.0, 0.05],
        &[0.0, 0.15, 0.0, 0.0, 0.1, 0.0, 0.1, 0.0],
    );
    let nonneg = candidate(Mode::NonNeg, &[0.3, 0.1, 0.0, 0.2, 0.05, 0.05, 0.1, 0.2], &[0.0; 8]);
    for cand in [signed, nonneg] {
        for omega in [0.0, 0.1, 0.7, 2.0, 9.0] {
            let exact = cand.z_transform(Frequency::Finite(omega));
            let quad = fourier_by_quadrature(&cand, omega);
            assert!((exact - quad).norm() <= 1e-6, "ω = {omega}: {exact} vs {quad}");
        }
        assert_eq!(cand.z_transform(Frequency::Infinity), Complex64::new(0.0, 0.0));
    }
}

#[test]
fn l1_norm_matches_quadrature() {
    let nonneg = candidate(Mode::NonNeg, &[0.3, 0.1, 0.0, 0.2, 0.05, 0.05, 0.1, 0.2], &[0.0; 8]);
    let f = |t: f64| nonneg.kernel_value(t).abs();
    let l1 = gauss(-60.0, 0.0, 6000, f) + gauss(0.0, 60.0, 6000, f);
    assert!((l1 - nonneg.l1_budget()).abs() <= 1e-8, "{l1} vs {}", nonneg.l1_budget());

    // cancellation can only lower ‖z‖₁ below the coefficient budget
    let signed = candidate(Mode::Signed, &[0.2, 0.0, 0.3, 0.0, 0.0, 0.0, 0.0, 0.0], &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    let mixed = MultiplierCandidate::new(
        test_basis(),
        Mode::Signed,
        vec![0.2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.3, 0.0, 0.0, 0.0, 0.0, 0.0],
    )
    .unwrap();
    for cand in [signed, mixed] {
        let f = |t: f64| cand.kernel_value(t).abs();
        let l1 = gauss(-60.0, 0.0, 6000, f) + gauss(0.0, 60.0, 6000, f);
        assert!(l1 <= cand.l1_budget() + 1e-8, "{l1} vs {}", cand.l1_budget());
    }
}

proptest! {
    #[test]
    fn z_is_bounded_by_the_budget(
        raw in proptest::collection::vec((0.0..1.0f64, 0.0..1.0f64), 8),
        budget in 0.0..=1.0f64,
        omega in 0.0..1e3f64,
    ) {
        let total: f64 = raw.iter().map(|(p, n)| p + n).sum();
        let s = if total > 0.0 { budget / total } else { 0.0 };
        let cpos: Vec<f64> = raw.iter().map(|(p, _)| p * s).collect();
        let cneg: Vec<f64> = raw.iter().map(|(_, n)| n * s).collect();
        let cand = MultiplierCandidate::new(test_basis(), Mode::Signed, cpos, cneg).unwrap();
        let z = cand.z_transform(Frequency::Finite(omega));
        prop_assert!(z.norm() <= cand.l1_budget() + 1e-12);
        // M = 1 − Z stays in the right half plane
        prop_assert!(cand.m_value(Frequency::Finite(omega)).re >= 1.0 - cand.l1_budget() - 1e-12);
    }
}
