//! Time-domain evaluation of `⟨x − b⁻¹y, (1 − Z)(−ax + y)⟩`.
//!
//! Samples are read as a continuous piecewise-linear signal on
//! `[0, (n−1)·dt]`, zero elsewhere. Convolution with each exponential kernel
//! is then exact at the sample instants via a one-step recursion, and the
//! final inner product is trapezoidal.

use rand::Rng;

use super::signal::{trapezoid_dot, SignalTrace};
use crate::error::Result;
use crate::multiplier::{KernelBasis, Mode, MultiplierCandidate, Side, SlopeBand};

/// One-step weights for `λe^{−λt}` over a step `h` with `x = λh`:
/// `E = e^{−x}`, `A = 1 − E`, `B = (1 − E(1 + x))/x`.
fn step_weights(x: f64) -> (f64, f64, f64) {
    let e = (-x).exp();
    let a = -(-x).exp_m1();
    let b = if x < 1e-4 {
        x * (0.5 - x * (1.0 / 3.0 - x / 8.0))
    } else {
        a / x - e
    };
    (e, a, b)
}

/// `w(t) = ∫ λe^{−λ|t−s|} v(s) ds` over `s ≤ t` (causal) or `s ≥ t`
/// (anticausal), at every sample instant.
fn exponential_filter(rate: f64, side: Side, dt: f64, v: &[f64]) -> Vec<f64> {
    let n = v.len();
    let mut w = vec![0.0; n];
    if n < 2 {
        return w;
    }
    let (e, a, b) = step_weights(rate * dt);
    let (near, far) = (a - b, b);
    match side {
        Side::Causal => {
            for k in 0..n - 1 {
                w[k + 1] = e * w[k] + near * v[k + 1] + far * v[k];
            }
        }
        Side::Anticausal => {
            for k in (0..n - 1).rev() {
                w[k] = e * w[k + 1] + near * v[k] + far * v[k + 1];
            }
        }
    }
    w
}

/// `(z ∗ v)` at the sample instants.
pub fn convolve(cand: &MultiplierCandidate, dt: f64, v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; v.len()];
    for (el, c) in cand.basis().elements().iter().zip(cand.net_coeffs()) {
        if c == 0.0 {
            continue;
        }
        let w = exponential_filter(el.rate, el.side, dt, v);
        for (o, wi) in out.iter_mut().zip(w) {
            *o += c * wi;
        }
    }
    out
}

/// `⟨x − b⁻¹y, (1 − Z)(−ax + y)⟩`. With `a = 0, b = ∞` this is `⟨x, (1 − Z)y⟩`.
pub fn iqc_inner_product(
    x: &SignalTrace,
    y: &SignalTrace,
    cand: &MultiplierCandidate,
    band: &SlopeBand,
) -> Result<f64> {
    let u = x.combine(1.0, y, -band.b_inv())?;
    let v = x.combine(-band.a(), y, 1.0)?;
    let zv = convolve(cand, x.dt(), v.samples());
    let mv: Vec<f64> = v.samples().iter().zip(&zv).map(|(a, b)| a - b).collect();
    Ok(trapezoid_dot(x.dt(), u.samples(), &mv))
}

/// Random smooth trace that vanishes at both ends: piecewise-linear knots
/// every 25 samples under a `sin²` window.
pub fn random_trace<R: Rng>(rng: &mut R, dt: f64, n: usize) -> SignalTrace {
    const KNOT: usize = 25;
    let amplitude = rng.gen_range(0.2..3.0);
    let knots: Vec<f64> = (0..n / KNOT + 2).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let span = (n.max(2) - 1) as f64;
    let samples = (0..n)
        .map(|k| {
            let (i, f) = (k / KNOT, (k % KNOT) as f64 / KNOT as f64);
            let base = knots[i] + (knots[i + 1] - knots[i]) * f;
            let window = (std::f64::consts::PI * k as f64 / span).sin().powi(2);
            amplitude * base * window
        })
        .collect();
    SignalTrace::new(dt, samples).expect("finite samples")
}

/// Random candidate over `basis` with `Σ(c⁺ + c⁻)` uniform in `(0, 1]`.
pub fn random_candidate<R: Rng>(rng: &mut R, basis: &KernelBasis, mode: Mode) -> MultiplierCandidate {
    let n = basis.len();
    let mut cpos: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
    let mut cneg: Vec<f64> = match mode {
        Mode::NonNeg => vec![0.0; n],
        Mode::Signed => (0..n).map(|_| rng.gen_range(0.0..1.0)).collect(),
    };
    let total: f64 = cpos.iter().chain(&cneg).sum();
    let budget = 1.0 - rng.gen_range(0.0..1.0);
    if total > 0.0 {
        let s = budget / total;
        cpos.iter_mut().chain(cneg.iter_mut()).for_each(|c| *c *= s);
    }
    MultiplierCandidate::new(basis.clone(), mode, cpos, cneg).expect("valid random candidate")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiplier::KernelElement;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn single(rate: f64, side: Side) -> MultiplierCandidate {
        let basis = KernelBasis::new(vec![KernelElement { rate, side }]).unwrap();
        MultiplierCandidate::new(basis, Mode::NonNeg, vec![1.0], vec![0.0]).unwrap()
    }

    #[test]
    fn filters_are_exact_for_constant_input() {
        let (dt, n) = (0.05, 201);
        let ones = vec![1.0; n];
        let end = (n - 1) as f64 * dt;
        for rate in [1e-3, 0.3, 5.0] {
            let c = convolve(&single(rate, Side::Causal), dt, &ones);
            let ac = convolve(&single(rate, Side::Anticausal), dt, &ones);
            for k in 0..n {
                let t = k as f64 * dt;
                assert!((c[k] - (1.0 - (-rate * t).exp())).abs() < 1e-13);
                assert!((ac[k] - (1.0 - (-rate * (end - t)).exp())).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn filter_is_exact_for_ramp() {
        // ∫₀ᵗ e^{−(t−s)} s ds = t − 1 + e^{−t}
        let dt = 0.1;
        let ramp: Vec<f64> = (0..50).map(|k| k as f64 * dt).collect();
        let w = convolve(&single(1.0, Side::Causal), dt, &ramp);
        for (k, wk) in w.iter().enumerate() {
            let t = k as f64 * dt;
            assert!((wk - (t - 1.0 + (-t).exp())).abs() < 1e-13);
        }
    }

    #[test]
    fn trivial_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = random_trace(&mut rng, 0.01, 500);
        let zero = x.map(|_| 0.0);
        let cand = random_candidate(&mut rng, &KernelBasis::default(), Mode::NonNeg);
        let band = SlopeBand::monotone();
        assert_eq!(iqc_inner_product(&x, &zero, &cand, &band).unwrap(), 0.0);
        let z0 = MultiplierCandidate::zero(KernelBasis::empty(), Mode::NonNeg);
        let v = iqc_inner_product(&x, &x, &z0, &band).unwrap();
        assert!((v - x.norm().powi(2)).abs() < 1e-12 && v > 0.0);
    }

    #[test]
    fn random_trace_is_windowed() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let x = random_trace(&mut rng, 0.01, 1000);
        assert_eq!(x.samples()[0], 0.0);
        assert!(x.samples()[999].abs() < 1e-12);
        assert!(x.norm() > 0.0);
    }

    #[test]
    fn random_candidate_budget() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let c = random_candidate(&mut rng, &KernelBasis::default(), Mode::Signed);
            assert!(c.l1_budget() <= 1.0 + 1e-12 && c.l1_budget() > 0.0);
        }
    }
}
