//! Real-rational SISO transfer functions and the frequency-domain analysis
//! every certification condition is built on.
//!
//! Stability is decided from companion-matrix eigenvalues, and frequency
//! sweeps always carry the `ω = ∞` feedthrough limit as a symbolic point.

mod grid;
mod poly;
mod tf;

pub use grid::{
    logspace, Frequency, FrequencyGrid, DEFAULT_GRID_POINTS, DEFAULT_OMEGA_MAX, DEFAULT_OMEGA_MIN,
};
pub use poly::Polynomial;
pub use tf::{RationalTF, POLE_ON_AXIS_REL_TOL};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Roots must satisfy `Re(root) < -HURWITZ_TOL`.
pub const HURWITZ_TOL: f64 = 1e-9;

/// True iff every root of `p` has real part below `-tol`.
pub fn is_hurwitz(p: &Polynomial, tol: f64) -> Result<bool> {
    Ok(p.roots()?.iter().all(|r| r.re < -tol))
}

/// Proper with a Hurwitz denominator.
pub fn in_rh_inf(tf: &RationalTF) -> bool {
    tf.is_proper() && matches!(is_hurwitz(tf.den(), HURWITZ_TOL), Ok(true))
}

/// Like [`in_rh_inf`], but names the violated condition.
pub fn check_rh_inf(tf: &RationalTF) -> Result<()> {
    if !tf.is_proper() {
        return Err(Error::NotInRhInf(format!(
            "improper: numerator degree {} exceeds denominator degree {}",
            tf.num().degree(),
            tf.den().degree()
        )));
    }
    let roots = tf.den().roots()?;
    if let Some(r) = roots.iter().find(|r| r.re >= -HURWITZ_TOL) {
        return Err(Error::NotInRhInf(format!(
            "denominator has a root at {} {:+}j in the closed right half plane",
            r.re, r.im
        )));
    }
    Ok(())
}

pub fn nyquist_samples(tf: &RationalTF, grid: &FrequencyGrid) -> Result<Vec<Complex64>> {
    check_rh_inf(tf)?;
    grid.points().map(|w| tf.evaluate(w)).collect()
}

/// Distance from the real point set `[lo, hi]` to `z`. `hi` may be `+∞`.
fn distance_to_segment(z: Complex64, lo: f64, hi: f64) -> f64 {
    let dx = if z.re < lo {
        lo - z.re
    } else if z.re > hi {
        z.re - hi
    } else {
        0.0
    };
    dx.hypot(z.im)
}

/// Minimum distance from the sampled Nyquist curve to the real segment
/// `[lo, hi]` (`hi = +∞` allowed).
///
/// Besides the samples themselves, a sign change of the imaginary part
/// between consecutive samples whose linearly interpolated real crossing lies
/// in the segment counts as an intersection (clearance 0).
pub fn interval_clearance(tf: &RationalTF, grid: &FrequencyGrid, lo: f64, hi: f64) -> Result<f64> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if lo.is_nan() || hi.is_nan() || lo > hi {
        return Err(Error::InvalidBand(format!("segment [{lo}, {hi}] is empty")));
    }
    let samples: Vec<Complex64> = grid.points().map(|w| tf.evaluate(w)).collect::<Result<_>>()?;
    let mut clearance = f64::INFINITY;
    for z in &samples {
        clearance = clearance.min(distance_to_segment(*z, lo, hi));
    }
    for pair in samples.windows(2) {
        let (z0, z1) = (pair[0], pair[1]);
        if z0.im * z1.im < 0.0 {
            let t = z0.im / (z0.im - z1.im);
            let x = z0.re + (z1.re - z0.re) * t;
            if x >= lo && x <= hi {
                clearance = 0.0;
            }
        }
    }
    Ok(clearance)
}

/// Grid estimate of `‖tf‖∞`: the largest sampled magnitude (including the
/// feedthrough), refined by golden-section search on the bracket around the
/// best finite sample. A lower bound on the true norm.
pub fn hinf_norm_estimate(tf: &RationalTF, grid: &FrequencyGrid) -> Result<f64> {
    check_rh_inf(tf)?;
    let mut best = tf.feedthrough()?.abs();
    let omegas = grid.omegas();
    if omegas.is_empty() {
        return Ok(best);
    }
    let mags: Vec<f64> = omegas
        .iter()
        .map(|&w| tf.evaluate(Frequency::Finite(w)).map(|v| v.norm()))
        .collect::<Result<_>>()?;
    let (k, &kmax) = mags
        .iter()
        .enumerate()
        .fold((0, &f64::NEG_INFINITY), |acc, x| if *x.1 > *acc.1 { x } else { acc });
    best = best.max(kmax);
    let lo = omegas[k.saturating_sub(1)];
    let hi = omegas[(k + 1).min(omegas.len() - 1)];
    if hi > lo {
        let mag = |w: f64| tf.eval_s(Complex64::new(0.0, w)).norm();
        best = best.max(golden_max(mag, lo, hi, lo > 0.0));
    }
    Ok(best)
}

/// Golden-section maximization of a unimodal function on `[lo, hi]`,
/// in `log ω` when `log_scale` is set.
fn golden_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, log_scale: bool) -> f64 {
    let to = |u: f64| if log_scale { u.exp() } else { u };
    let (mut a, mut b) = if log_scale { (lo.ln(), hi.ln()) } else { (lo, hi) };
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(to(c)), f(to(d)));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-15 * (a.abs() + b.abs()).max(1e-300) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(to(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(to(d));
        }
    }
    fc.max(fd).max(f(lo)).max(f(hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hurwitz_basics() {
        assert!(is_hurwitz(&Polynomial::new(vec![1.0, 1.0]), HURWITZ_TOL).unwrap());
        assert!(!is_hurwitz(&Polynomial::new(vec![1.0, -1.0]), HURWITZ_TOL).unwrap());
        assert!(is_hurwitz(&Polynomial::constant(2.0), HURWITZ_TOL).unwrap());
        assert!(matches!(
            is_hurwitz(&Polynomial::constant(0.0), HURWITZ_TOL),
            Err(Error::DegenerateInput(_))
        ));
        // marginal roots are rejected
        assert!(!is_hurwitz(&Polynomial::new(vec![1.0, 0.0, 1.0]), HURWITZ_TOL).unwrap());
    }

    #[test]
    fn rh_inf_membership() {
        assert!(in_rh_inf(&RationalTF::from_coeffs(&[1.0], &[1.0, 1.0]).unwrap()));
        assert!(!in_rh_inf(&RationalTF::from_coeffs(&[1.0, 0.0], &[1.0, -1.0]).unwrap()));
        assert!(!in_rh_inf(&RationalTF::from_coeffs(&[1.0, 0.0, 0.0], &[1.0, 1.0]).unwrap()));
        let err = check_rh_inf(&RationalTF::from_coeffs(&[1.0, 0.0], &[1.0, -1.0]).unwrap());
        assert!(matches!(err, Err(Error::NotInRhInf(m)) if m.contains("right half plane")));
    }

    #[test]
    fn clearance_of_constant() {
        let tf = RationalTF::constant(-1.0);
        let g = FrequencyGrid::default_search();
        assert_eq!(interval_clearance(&tf, &g, 0.0, f64::INFINITY).unwrap(), 1.0);
        assert!(interval_clearance(&tf, &FrequencyGrid::new(vec![], false).unwrap(), 0.0, 1.0)
            .is_err_and(|e| e == Error::EmptyGrid));
    }

    #[test]
    fn clearance_detects_dc_intersection() {
        let tf = RationalTF::from_coeffs(&[2.0], &[1.0, 1.0]).unwrap();
        let g = FrequencyGrid::default_search();
        assert_eq!(interval_clearance(&tf, &g, 1.0, 3.0).unwrap(), 0.0);
    }

    #[test]
    fn clearance_detects_crossing_between_samples() {
        // -1/(s+1)^3 crosses the positive real axis at ω = √3 (value 1/8);
        // the coarse grid straddles it without sampling it.
        let den = Polynomial::new(vec![1.0, 1.0]).pow(3);
        let tf = RationalTF::new(Polynomial::constant(-1.0), den).unwrap();
        let g = FrequencyGrid::new(vec![1.0, 3.0], false).unwrap();
        assert_eq!(interval_clearance(&tf, &g, 0.0, 0.2).unwrap(), 0.0);
    }

    #[test]
    fn hinf_of_lag_and_constant() {
        let g = FrequencyGrid::default_search();
        let lag = RationalTF::from_coeffs(&[1.0], &[1.0, 1.0]).unwrap();
        assert!((hinf_norm_estimate(&lag, &g).unwrap() - 1.0).abs() < 1e-15);
        let c = RationalTF::constant(-3.5);
        assert_eq!(hinf_norm_estimate(&c, &g).unwrap(), 3.5);
    }
}
