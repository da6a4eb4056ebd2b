use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::iqc::{iqc_inner_product, random_candidate, random_trace};
use super::nonlinearity::StaticNonlinearity;
use crate::error::{Error, Result};
use crate::multiplier::{KernelBasis, Mode, SlopeBand};

/// Spot-check traces: `TRIAL_SAMPLES` samples at `TRIAL_DT`.
pub const TRIAL_DT: f64 = 1e-2;
pub const TRIAL_SAMPLES: usize = 1000;
/// Spot checks fail below `−IQC_TOL · ‖x‖ · ‖y‖`.
pub const IQC_TOL: f64 = 1e-4;
/// Spot checks per homotopy step.
pub const HOMOTOPY_TRIALS: usize = 4;
/// Relative slack on the band edges; slopes recomputed from breakpoints
/// carry rounding of a few ulps.
pub const SLOPE_TOL: f64 = 1e-12;

/// A segment whose slope leaves the band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeWitness {
    pub x1: f64,
    pub x2: f64,
    pub quotient: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StaticReport {
    pub member: bool,
    pub slope_range: (f64, f64),
    /// `min(s_min − a, b − s_max)`; negative outside the band, up to
    /// `SLOPE_TOL` rounding at an edge.
    pub slope_margin: f64,
    pub witness: Option<SlopeWitness>,
    pub trials: usize,
    /// Smallest `⟨x − b⁻¹y, (1 − Z)(−ax + y)⟩ / (‖x‖‖y‖)` over the spot checks.
    pub worst_iqc: Option<f64>,
}

/// Exact difference-quotient check plus `trials` randomized IQC spot checks
/// with nonneg candidates over the default basis.
///
/// Trial `i` draws from a ChaCha8 stream `i` seeded with `seed`, so the
/// report depends only on the inputs.
pub fn membership_test_static(nl: &StaticNonlinearity, band: &SlopeBand, trials: usize, seed: u64) -> StaticReport {
    let slope_range = nl.slope_range();
    let (a, b) = (band.a(), band.b());
    let slope_margin = (slope_range.0 - a).min(b - slope_range.1);
    let tol = SLOPE_TOL * (1.0 + a.abs().max(if b.is_finite() { b.abs() } else { 0.0 }));

    let witness = nl
        .breakpoints()
        .windows(2)
        .zip(nl.slopes())
        .map(|(p, s)| (p[0], p[1], s))
        .filter(|&(_, _, s)| s < a - tol || s > b + tol)
        .max_by(|l, r| band_excess(l.2, a, b).total_cmp(&band_excess(r.2, a, b)))
        .map(|(x1, x2, quotient)| SlopeWitness { x1, x2, quotient });

    let basis = KernelBasis::default();
    let mut worst_iqc: Option<f64> = None;
    for i in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let x = random_trace(&mut rng, TRIAL_DT, TRIAL_SAMPLES);
        let y = nl.apply(&x);
        let cand = random_candidate(&mut rng, &basis, Mode::NonNeg);
        let scale = x.norm() * y.norm();
        let value = iqc_inner_product(&x, &y, &cand, band).expect("traces share dt and length");
        let normalized = if scale > 0.0 { value / scale } else { 0.0 };
        worst_iqc = Some(worst_iqc.map_or(normalized, |w| w.min(normalized)));
    }

    let member = witness.is_none() && worst_iqc.is_none_or(|w| w >= -IQC_TOL);
    StaticReport {
        member,
        slope_range,
        slope_margin,
        witness,
        trials,
        worst_iqc,
    }
}

fn band_excess(s: f64, a: f64, b: f64) -> f64 {
    (a - s).max(s - b)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomotopyStep {
    pub theta: f64,
    pub member: bool,
    pub slope_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomotopyReport {
    pub all_members: bool,
    pub steps: Vec<HomotopyStep>,
}

/// Membership of `θΔ + (1 − θ)a·x` for `θ = k / theta_steps`, `k = 0..=theta_steps`.
pub fn homotopy_sweep(nl: &StaticNonlinearity, band: &SlopeBand, theta_steps: usize) -> Result<HomotopyReport> {
    if !membership_test_static(nl, band, 0, 0).member {
        return Err(Error::PreconditionViolation(
            "homotopy_sweep needs a member of the band".into(),
        ));
    }
    let steps = theta_steps.max(1);
    let steps: Vec<HomotopyStep> = (0..=steps)
        .map(|k| {
            let theta = k as f64 / steps as f64;
            let r = membership_test_static(&nl.blend_with_linear(theta, band.a()), band, HOMOTOPY_TRIALS, k as u64);
            HomotopyStep {
                theta,
                member: r.member,
                slope_margin: r.slope_margin,
            }
        })
        .collect();
    Ok(HomotopyReport {
        all_members: steps.iter().all(|s| s.member),
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn saturation_in_unit_band() {
        let band = SlopeBand::new(0.0, 1.0).unwrap();
        let r = membership_test_static(&StaticNonlinearity::saturation(), &band, 5, 11);
        assert!(r.member);
        assert_eq!(r.slope_margin, 0.0);
        assert!(r.worst_iqc.unwrap() >= -IQC_TOL);
    }

    #[test]
    fn negative_gain_is_not_monotone() {
        let r = membership_test_static(&StaticNonlinearity::linear(-1.0), &SlopeBand::monotone(), 3, 0);
        assert!(!r.member);
        assert_eq!(r.witness.unwrap().quotient, -1.0);
    }

    #[test]
    fn deadzone_violates_lower_slope() {
        let dz = StaticNonlinearity::deadzone(0.5, 1.0).unwrap();
        let r = membership_test_static(&dz, &SlopeBand::new(0.5, 2.0).unwrap(), 0, 0);
        assert!(!r.member);
        assert_eq!(r.witness.unwrap().quotient, 0.0);
        assert_eq!(r.slope_margin, -0.5);
    }

    #[test]
    fn deterministic_reports() {
        let band = SlopeBand::monotone();
        let nl = StaticNonlinearity::saturation();
        assert_eq!(
            membership_test_static(&nl, &band, 3, 5),
            membership_test_static(&nl, &band, 3, 5)
        );
    }

    #[test]
    fn homotopy_of_saturation() {
        let band = SlopeBand::new(0.0, 1.0).unwrap();
        let sat = StaticNonlinearity::saturation();
        let r = homotopy_sweep(&sat, &band, 4).unwrap();
        assert!(r.all_members);
        assert_eq!(r.steps.len(), 5);
        assert_eq!(sat.blend_with_linear(0.0, 0.0).values(), &[0.0; 4]);
        assert_eq!(sat.blend_with_linear(1.0, 0.0), sat);
        assert!(homotopy_sweep(&StaticNonlinearity::linear(-1.0), &band, 4).is_err());
    }
}
