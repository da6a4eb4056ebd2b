//! Block signals that falsify membership of a static `Δ` in the monotone
//! and odd-monotone classes.
//!
//! A block signal takes level `p` on `[0,1), [2,3), …, [2L, 2L+1)` and `q`
//! on `[1,2), …, [2L+1, 2L+2)`, zero afterwards. It is compared with its
//! unit shift: `S = ∫ x(t)Δ(x(t+1)) dt` against `U = ∫ x(t)Δ(x(t)) dt`.

use serde::Serialize;

use super::nonlinearity::StaticNonlinearity;
use super::signal::SignalTrace;
use crate::error::{Error, Result};

pub const BLOCK_DT: f64 = 1e-2;
/// Samples per unit block.
pub const BLOCK_SAMPLES: usize = 100;
/// Magnitude grid size for the odd-class search, on top of the breakpoints.
pub const ODD_SEARCH_POINTS: usize = 64;

/// Sampled block signal with `2L + 2` unit blocks.
pub fn block_trace(p: f64, q: f64, l: usize) -> SignalTrace {
    let samples = (0..2 * l + 2)
        .flat_map(|k| std::iter::repeat_n(if k % 2 == 0 { p } else { q }, BLOCK_SAMPLES))
        .collect();
    SignalTrace::new(BLOCK_DT, samples).expect("finite levels")
}

/// `(S, U)` by left Riemann sums on a sampled trace, exact for block signals.
pub fn sampled_shift_integrals(nl: &StaticNonlinearity, x: &SignalTrace) -> (f64, f64) {
    let s = x.samples();
    let dy: Vec<f64> = s.iter().map(|&v| nl.eval(v)).collect();
    let shifted: f64 = s
        .iter()
        .enumerate()
        .map(|(k, &v)| v * dy.get(k + BLOCK_SAMPLES).copied().unwrap_or(0.0))
        .sum();
    let unshifted: f64 = s.iter().zip(&dy).map(|(v, d)| v * d).sum();
    (x.dt() * shifted, x.dt() * unshifted)
}

/// Closed-form `(S, U)` for the block signal with levels `p, q`.
pub fn block_integrals(nl: &StaticNonlinearity, p: f64, q: f64, l: usize) -> (f64, f64) {
    let (dp, dq) = (nl.eval(p), nl.eval(q));
    let n = l as f64;
    let shifted = (n + 1.0) * p * dq + n * q * dp;
    let unshifted = (n + 1.0) * (p * dp + q * dq);
    (shifted, unshifted)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonmonotoneWitness {
    pub x1: f64,
    pub x2: f64,
    pub l: usize,
    pub shifted: f64,
    pub unshifted: f64,
    /// `shifted − unshifted`; positive beyond rounding means the monotone
    /// class is violated.
    pub gap: f64,
    /// Smallest `L` with a positive gap for this pair.
    pub min_l: usize,
    #[serde(skip)]
    pub trace: SignalTrace,
}

impl NonmonotoneWitness {
    pub fn violates(&self) -> bool {
        self.gap > 1e-9 * (1.0 + self.shifted.abs() + self.unshifted.abs())
    }
}

/// First segment, in breakpoint order, on which `Δ` decreases.
pub fn decreasing_pair(nl: &StaticNonlinearity) -> Result<(f64, f64)> {
    nl.breakpoints()
        .windows(2)
        .zip(nl.slopes())
        .find(|(_, s)| *s < 0.0)
        .map(|(p, _)| (p[0], p[1]))
        .ok_or(Error::NoDecreasingPair)
}

pub fn falsify_nonmonotone(nl: &StaticNonlinearity, l: usize) -> Result<NonmonotoneWitness> {
    let (x1, x2) = decreasing_pair(nl)?;
    falsify_nonmonotone_with_pair(nl, x1, x2, l)
}

/// Block witness for a given pair `x₁ < x₂` with `Δ(x₁) > Δ(x₂)`.
///
/// `S − U = L(x₂ − x₁)(Δ(x₁) − Δ(x₂)) + x₁Δ(x₂) − x₁Δ(x₁) − x₂Δ(x₂)`, so the
/// gap grows linearly in `L` and `min_l` follows in closed form.
pub fn falsify_nonmonotone_with_pair(nl: &StaticNonlinearity, x1: f64, x2: f64, l: usize) -> Result<NonmonotoneWitness> {
    let (d1, d2) = (nl.eval(x1), nl.eval(x2));
    if !(x1 < x2 && d1 > d2) {
        return Err(Error::PreconditionViolation(format!(
            "({x1}, {x2}) is not a decreasing pair"
        )));
    }
    let rate = (x2 - x1) * (d1 - d2);
    let offset = x1 * d2 - x1 * d1 - x2 * d2;
    let min_l = if offset > 0.0 {
        0
    } else {
        (-offset / rate).floor() as usize + 1
    };
    let trace = block_trace(x1, x2, l);
    let (shifted, unshifted) = sampled_shift_integrals(nl, &trace);
    Ok(NonmonotoneWitness {
        x1,
        x2,
        l,
        shifted,
        unshifted,
        gap: shifted - unshifted,
        min_l,
        trace,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OddConstruction {
    /// Levels `x₁` then `−x₂`.
    LowThenNegHigh,
    /// Levels `x₂` then `−x₁`.
    HighThenNegLow,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OddWitness {
    pub x1: f64,
    pub x2: f64,
    pub construction: OddConstruction,
    pub shifted: f64,
    pub unshifted: f64,
    /// `unshifted − |shifted|`; negative means the odd class is violated.
    pub margin: f64,
    #[serde(skip)]
    pub trace: SignalTrace,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OddReport {
    pub violation: bool,
    pub l: usize,
    pub pairs_tested: usize,
    pub worst_margin: f64,
    pub witness: OddWitness,
}

/// Searches magnitude pairs `0 < x₁ < x₂` (breakpoint magnitudes plus a
/// uniform grid) for a block signal with `|S| > U`.
pub fn falsify_noneven_odd(nl: &StaticNonlinearity, l: usize) -> Result<OddReport> {
    if !nl.is_monotone() {
        return Err(Error::PreconditionViolation(
            "the odd-class test needs a monotone nonlinearity; use falsify_nonmonotone first".into(),
        ));
    }
    let reach = nl.breakpoints().iter().fold(0.0_f64, |m, b| m.max(b.abs()));
    let reach = if reach > 0.0 { 1.5 * reach } else { 1.0 };
    let mut mags: Vec<f64> = (1..=ODD_SEARCH_POINTS)
        .map(|k| reach * k as f64 / ODD_SEARCH_POINTS as f64)
        .chain(nl.breakpoints().iter().map(|b| b.abs()).filter(|&b| b > 0.0))
        .collect();
    mags.sort_by(f64::total_cmp);
    mags.dedup();

    let mut best: Option<(f64, f64, f64, OddConstruction)> = None;
    let mut pairs = 0;
    for (i, &x1) in mags.iter().enumerate() {
        for &x2 in &mags[i + 1..] {
            pairs += 1;
            for construction in [OddConstruction::LowThenNegHigh, OddConstruction::HighThenNegLow] {
                let (p, q) = levels(construction, x1, x2);
                let (s, u) = block_integrals(nl, p, q, l);
                let margin = u - s.abs();
                if best.is_none_or(|b| margin < b.2) {
                    best = Some((x1, x2, margin, construction));
                }
            }
        }
    }
    let (x1, x2, _, construction) = best.expect("at least two magnitudes");
    let (p, q) = levels(construction, x1, x2);
    let trace = block_trace(p, q, l);
    let (shifted, unshifted) = sampled_shift_integrals(nl, &trace);
    let margin = unshifted - shifted.abs();
    let tol = 1e-9 * (1.0 + unshifted.abs());
    Ok(OddReport {
        violation: margin < -tol,
        l,
        pairs_tested: pairs,
        worst_margin: margin,
        witness: OddWitness {
            x1,
            x2,
            construction,
            shifted,
            unshifted,
            margin,
            trace,
        },
    })
}

fn levels(c: OddConstruction, x1: f64, x2: f64) -> (f64, f64) {
    match c {
        OddConstruction::LowThenNegHigh => (x1, -x2),
        OddConstruction::HighThenNegLow => (x2, -x1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn asymmetric() -> StaticNonlinearity {
        // x for x ≥ 0, 2x for x < 0
        StaticNonlinearity::new(vec![-1.0, 0.0, 1.0], vec![-2.0, 0.0, 1.0]).unwrap()
    }

    #[test]
    fn negative_identity_gap() {
        let nl = StaticNonlinearity::linear(-1.0);
        let w = falsify_nonmonotone_with_pair(&nl, 1.0, 2.0, 50).unwrap();
        assert!((w.gap - 53.0).abs() < 1e-9);
        assert!(w.violates());
        assert_eq!(w.min_l, 0);
        assert_eq!(w.trace.len(), 102 * BLOCK_SAMPLES);
    }

    #[test]
    fn threshold_for_small_l() {
        // pair (1, 2) with Δ = 5, 4: gap = L − 9, first positive at L = 10
        let nl = StaticNonlinearity::new(vec![-1.0, 0.0, 1.0, 2.0], vec![-1.0, 0.0, 5.0, 4.0]).unwrap();
        let w = falsify_nonmonotone(&nl, 0).unwrap();
        assert_eq!((w.x1, w.x2), (1.0, 2.0));
        assert!(!w.violates());
        assert_eq!(w.min_l, 10);
        assert!(!falsify_nonmonotone(&nl, 9).unwrap().violates());
        assert!(falsify_nonmonotone(&nl, 10).unwrap().violates());
    }

    #[test]
    fn monotone_has_no_decreasing_pair() {
        assert_eq!(
            falsify_nonmonotone(&StaticNonlinearity::saturation(), 10).unwrap_err(),
            Error::NoDecreasingPair
        );
    }

    #[test]
    fn closed_form_matches_sampled() {
        let nl = asymmetric();
        for (p, q) in [(0.3, -1.2), (1.1, -0.4), (2.0, 0.5)] {
            let (s, u) = block_integrals(&nl, p, q, 7);
            let (s2, u2) = sampled_shift_integrals(&nl, &block_trace(p, q, 7));
            assert!((s - s2).abs() < 1e-9 && (u - u2).abs() < 1e-9);
        }
    }

    #[test]
    fn odd_test() {
        let r = falsify_noneven_odd(&asymmetric(), 50).unwrap();
        assert!(r.violation);
        assert!(r.worst_margin < 0.0);
        for nl in [StaticNonlinearity::identity(), StaticNonlinearity::saturation()] {
            let r = falsify_noneven_odd(&nl, 50).unwrap();
            assert!(!r.violation, "{r:?}");
        }
        assert!(falsify_noneven_odd(&StaticNonlinearity::linear(-1.0), 5).is_err());
    }
}
