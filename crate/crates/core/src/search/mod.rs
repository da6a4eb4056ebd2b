//! Multiplier synthesis by linear programming, dense-grid re-verification,
//! and the uniform closed-loop gain bound.
//!
//! For a fixed kernel basis the condition `Re{(1 − Z(jω)) K(ω)} ≥ ε` is
//! affine in the coefficients `(c⁺, c⁻)` and in `ε`, so imposing it at every
//! grid frequency and maximizing `ε` under `Σ(c⁺ + c⁻) ≤ 1` is an LP.
//!
//! A positive optimum is only trusted after re-checking the candidate on a
//! 10× denser grid. A nonpositive optimum is reported as
//! [`Status::InfeasibleAtBasis`]: evidence about this basis and grid, never
//! a proof that no multiplier exists.

mod simplex;

pub use simplex::{maximize, LpSolution};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lti::{check_rh_inf, hinf_norm_estimate, is_hurwitz, Frequency, FrequencyGrid, RationalTF, HURWITZ_TOL};
use crate::multiplier::{
    condition_kernel, condition_values, KernelBasis, Mode, MultiplierCandidate, PiMatrix, SlopeBand,
};

/// LP optima at or below this value are reported as infeasible.
pub const MIN_CERTIFIED_MARGIN: f64 = 1e-10;
/// Density factor of the default verification grid and of the local
/// refinement around the worst frequency.
pub const VERIFY_REFINEMENT: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchProblem {
    pub plant: RationalTF,
    pub band: SlopeBand,
    pub basis: KernelBasis,
    pub mode: Mode,
    pub grid: FrequencyGrid,
    pub verify_grid: FrequencyGrid,
}

impl SearchProblem {
    /// Default search grid and its 10× refinement as the verification grid.
    pub fn new(plant: RationalTF, band: SlopeBand, basis: KernelBasis, mode: Mode) -> Self {
        let grid = FrequencyGrid::default_search();
        Self {
            plant,
            band,
            basis,
            mode,
            verify_grid: grid.refine(VERIFY_REFINEMENT),
            grid,
        }
    }

    /// Replaces the search grid; the verification grid becomes its 10× refinement.
    pub fn with_grid(mut self, grid: FrequencyGrid) -> Self {
        self.verify_grid = grid.refine(VERIFY_REFINEMENT);
        self.grid = grid;
        self
    }

    pub fn with_grids(mut self, grid: FrequencyGrid, verify_grid: FrequencyGrid) -> Self {
        self.grid = grid;
        self.verify_grid = verify_grid;
        self
    }

    pub fn with_basis(mut self, basis: KernelBasis) -> Self {
        self.basis = basis;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_rh_inf(&self.plant)?;
        if self.grid.is_empty() {
            return Err(Error::EmptyGrid);
        }
        if !self.verify_grid.contains_grid(&self.grid) {
            return Err(Error::PreconditionViolation(
                "verification grid must contain every search-grid frequency".into(),
            ));
        }
        check_loop_stable(&self.plant, self.band.a())
    }
}

/// Stability of `[G, a]` under the positive-feedback convention: the
/// characteristic polynomial `den − a·num` must be Hurwitz.
pub fn check_loop_stable(plant: &RationalTF, a: f64) -> Result<()> {
    if a == 0.0 {
        return Ok(());
    }
    let chi = plant.positive_feedback_char_poly(a);
    if chi.is_zero() || !is_hurwitz(&chi, HURWITZ_TOL)? {
        return Err(Error::PreconditionViolation(format!(
            "the loop [G, a] with a = {a} is unstable (den - a*num is not Hurwitz)"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Feasible,
    InfeasibleAtBasis,
    VerificationFailed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub search_grid_points: usize,
    pub verify_grid_points: usize,
    pub omega_min: f64,
    pub omega_max: f64,
    pub include_infinity: bool,
    pub basis: String,
    pub basis_size: usize,
    pub solver_iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub status: Status,
    /// LP optimum: the margin on the search grid.
    pub epsilon: f64,
    /// Margin of the candidate on the verification grid plus local refinement.
    pub verified_epsilon: Option<f64>,
    /// Frequency where the verified margin is attained.
    pub worst_omega: Option<Frequency>,
    /// Condition value at `ω = ∞`, reported separately from the finite grid.
    pub infinity_value: Option<f64>,
    pub gain_bound: Option<f64>,
    pub candidate: Option<MultiplierCandidate>,
    pub plant: RationalTF,
    pub band: SlopeBand,
    pub mode: Mode,
    pub provenance: Provenance,
    pub caveats: Vec<String>,
}

/// Raw LP result for one basis.
#[derive(Debug, Clone, PartialEq)]
pub struct LpOutcome {
    pub epsilon: f64,
    pub candidate: MultiplierCandidate,
    pub iterations: usize,
}

/// Solves the margin-maximization LP without verification.
///
/// Variables are `δ, c⁺, c⁻` with `ε = ε₀ + δ`, where `ε₀` is the margin of
/// `z = 0`. Since `z = 0` is feasible, `δ ≥ 0` loses nothing and makes the
/// origin a feasible starting vertex.
pub fn solve_lp(prob: &SearchProblem) -> Result<LpOutcome> {
    let n = prob.basis.len();
    let signed = prob.mode == Mode::Signed;
    let nvars = 1 + n + if signed { n } else { 0 };

    let mut kernel_rows = Vec::with_capacity(prob.grid.len());
    for w in prob.grid.points() {
        let k = condition_kernel(&prob.plant, &prob.band, w)?;
        let coeffs: Vec<f64> = prob
            .basis
            .elements()
            .iter()
            .map(|e| (e.transform(w) * k).re)
            .collect();
        kernel_rows.push((k.re, coeffs));
    }
    let baseline = kernel_rows
        .iter()
        .fold(f64::INFINITY, |m, (r, _)| m.min(*r));

    let mut rows = Vec::with_capacity(kernel_rows.len() + 1);
    let mut rhs = Vec::with_capacity(kernel_rows.len() + 1);
    for (r, coeffs) in &kernel_rows {
        // Re K − Σ (c⁺ − c⁻) Re(φK) ≥ ε₀ + δ
        let mut row = Vec::with_capacity(nvars);
        row.push(1.0);
        row.extend(coeffs.iter().copied());
        if signed {
            row.extend(coeffs.iter().map(|c| -c));
        }
        rows.push(row);
        rhs.push(r - baseline);
    }
    let mut budget = vec![0.0];
    budget.extend(std::iter::repeat_n(1.0, nvars - 1));
    rows.push(budget);
    rhs.push(1.0);

    let mut objective = vec![0.0; nvars];
    objective[0] = 1.0;
    let sol = maximize(&objective, &rows, &rhs)?;

    // Pivoting can leave the budget a few ulps above 1 or a coefficient
    // slightly negative; project back, then report the margin of what is
    // actually returned.
    let mut coeffs: Vec<f64> = sol.x[1..].iter().map(|c| c.max(0.0)).collect();
    let total: f64 = coeffs.iter().sum();
    if total > 1.0 {
        coeffs.iter_mut().for_each(|c| *c /= total);
    }
    let (cpos, cneg) = if signed {
        (coeffs[..n].to_vec(), coeffs[n..].to_vec())
    } else {
        (coeffs, vec![0.0; n])
    };
    let epsilon = kernel_rows
        .iter()
        .map(|(r, phi)| r - phi.iter().zip(cpos.iter().zip(&cneg)).map(|(f, (p, m))| f * (p - m)).sum::<f64>())
        .fold(f64::INFINITY, f64::min);
    let candidate = MultiplierCandidate::new(prob.basis.clone(), prob.mode, cpos, cneg)?;
    Ok(LpOutcome {
        epsilon,
        candidate,
        iterations: sol.iterations,
    })
}

fn provenance(prob: &SearchProblem, iterations: usize) -> Provenance {
    let positive: Vec<f64> = prob.grid.omegas().iter().copied().filter(|&w| w > 0.0).collect();
    Provenance {
        search_grid_points: prob.grid.len(),
        verify_grid_points: prob.verify_grid.len(),
        omega_min: positive.first().copied().unwrap_or(0.0),
        omega_max: positive.last().copied().unwrap_or(0.0),
        include_infinity: prob.grid.include_infinity(),
        basis: prob.basis.description(),
        basis_size: prob.basis.len(),
        solver_iterations: iterations,
    }
}

fn caveats(prob: &SearchProblem) -> Vec<String> {
    let mut out = vec![
        format!(
            "the condition is enforced on {} grid frequencies and re-checked on {}; it is not proven between grid points",
            prob.grid.len(),
            prob.verify_grid.len()
        ),
        format!(
            "finite kernel basis ({}); an infeasible search rules out this basis only, not all multipliers",
            prob.basis.description()
        ),
        "completeness of the truncated kernel family is not assessed".to_string(),
        "the gain bound uses grid estimates of the H-infinity norm of G and of sup |Pi|".to_string(),
    ];
    if prob.mode == Mode::Signed {
        out.push(
            "signed mode bounds the L1 norm of z by sum(c+ + c-) (triangle inequality); the search is conservative"
                .to_string(),
        );
    }
    out
}

/// Solves the LP, re-verifies a positive optimum on the dense grid, and
/// attaches the uniform gain bound to verified certificates.
pub fn synthesize(prob: &SearchProblem) -> Result<Certificate> {
    prob.validate()?;
    let lp = solve_lp(prob)?;
    let infinity_value = if prob.grid.include_infinity() {
        let k = condition_kernel(&prob.plant, &prob.band, Frequency::Infinity)?;
        Some((lp.candidate.m_value(Frequency::Infinity) * k).re)
    } else {
        None
    };
    let feasible = lp.epsilon > MIN_CERTIFIED_MARGIN;
    let cert = Certificate {
        status: if feasible {
            Status::Feasible
        } else {
            Status::InfeasibleAtBasis
        },
        epsilon: lp.epsilon,
        verified_epsilon: None,
        worst_omega: None,
        infinity_value,
        gain_bound: None,
        candidate: feasible.then_some(lp.candidate),
        plant: prob.plant.clone(),
        band: prob.band,
        mode: prob.mode,
        provenance: provenance(prob, lp.iterations),
        caveats: caveats(prob),
    };
    if !feasible {
        return Ok(cert);
    }
    let mut cert = verify(&cert, prob)?;
    if cert.status == Status::Feasible {
        let margin = cert.verified_epsilon.unwrap_or(cert.epsilon).min(cert.epsilon);
        let cand = cert.candidate.as_ref().expect("feasible certificate carries a candidate");
        cert.gain_bound = Some(gain_bound(margin, &prob.plant, cand, &prob.band, &prob.verify_grid)?);
    }
    Ok(cert)
}

/// Frequencies 10× denser than the verification grid around `w`.
fn local_refinement(grid: &FrequencyGrid, w: Frequency) -> Vec<Frequency> {
    let omegas = grid.omegas();
    let steps = 2 * VERIFY_REFINEMENT;
    match w {
        Frequency::Infinity => match omegas.last() {
            Some(&top) if top > 0.0 => (1..=steps)
                .map(|k| Frequency::Finite(top * 10f64.powf(k as f64 / VERIFY_REFINEMENT as f64)))
                .collect(),
            _ => Vec::new(),
        },
        Frequency::Finite(x) => {
            let Some(k) = omegas.iter().position(|&o| o == x) else {
                return Vec::new();
            };
            let lo = omegas[k.saturating_sub(1)];
            let hi = omegas[(k + 1).min(omegas.len() - 1)];
            if hi <= lo {
                return Vec::new();
            }
            (1..steps)
                .map(|i| {
                    let t = i as f64 / steps as f64;
                    Frequency::Finite(if lo > 0.0 {
                        lo * (hi / lo).powf(t)
                    } else {
                        lo + (hi - lo) * t
                    })
                })
                .collect()
        }
    }
}

/// Re-checks a feasible certificate's candidate on the verification grid
/// plus a 10× refinement around its worst frequency, downgrading it to
/// [`Status::VerificationFailed`] when the margin drops below `epsilon / 2`.
pub fn verify(cert: &Certificate, prob: &SearchProblem) -> Result<Certificate> {
    if cert.status != Status::Feasible {
        return Err(Error::PreconditionViolation(format!(
            "verify needs a Feasible certificate, got {:?}",
            cert.status
        )));
    }
    let cand = cert
        .candidate
        .as_ref()
        .ok_or_else(|| Error::PreconditionViolation("feasible certificate without a candidate".into()))?;
    let values = condition_values(&prob.plant, cand, &prob.band, &prob.verify_grid)?;
    let (mut worst_w, mut worst) = values
        .iter()
        .copied()
        .fold((Frequency::Infinity, f64::INFINITY), |acc, (w, v)| if v < acc.1 { (w, v) } else { acc });
    for w in local_refinement(&prob.verify_grid, worst_w) {
        let k = condition_kernel(&prob.plant, &prob.band, w)?;
        let v = (cand.m_value(w) * k).re;
        if v < worst {
            worst = v;
            worst_w = w;
        }
    }
    let mut out = cert.clone();
    out.verified_epsilon = Some(worst);
    out.worst_omega = Some(worst_w);
    if !(worst >= cert.epsilon / 2.0) {
        out.status = Status::VerificationFailed;
        out.gain_bound = None;
    }
    Ok(out)
}

/// Uniform bound on `sup ‖[G, Δ]‖` over the certified class.
///
/// Follows the chain of inequalities of the sufficiency argument:
/// the condition gives `⟨ν₁, Πν₁⟩ ≤ −ε̂‖ν₁‖²` on the graph of `G` with
/// `ε̂ = 2ε / (1 + ‖G‖∞²)`; with `‖Π‖ = sup_ω ‖Π(jω)‖`,
/// `(ε̂/2)‖ν₁‖² ≤ (‖Π‖ + 2‖Π‖²/ε̂)‖ν₂ − ν₁‖²`, i.e. `‖ν₁‖² ≤ C‖ν₂ − ν₁‖²`
/// with `C = 2(‖Π‖ + 2‖Π‖²/ε̂)/ε̂`; then `‖ν₂‖² ≤ 2‖ν₂ − ν₁‖² + 2‖ν₁‖²`
/// gives `γ(‖ν₁‖² + ‖ν₂‖²) ≤ ‖ν₂ − ν₁‖²` with `γ = 1/(3C + 2)`, and the
/// closed-loop gain is at most `1/√γ`.
///
/// `‖G‖∞` and `‖Π‖` are estimated on `grid`.
pub fn gain_bound(
    epsilon: f64,
    plant: &RationalTF,
    cand: &MultiplierCandidate,
    band: &SlopeBand,
    grid: &FrequencyGrid,
) -> Result<f64> {
    if !(epsilon > 0.0) {
        return Err(Error::NonpositiveMargin(epsilon));
    }
    let g_norm = hinf_norm_estimate(plant, grid)?;
    let eps_hat = 2.0 * epsilon / (1.0 + g_norm * g_norm);
    let pi_norm = PiMatrix::for_band(cand, band)?.sup_norm(grid);
    let c = 2.0 * (pi_norm + 2.0 * pi_norm * pi_norm / eps_hat) / eps_hat;
    let gamma = 1.0 / (3.0 * c + 2.0);
    Ok(1.0 / gamma.sqrt())
}

/// LP optima for nested bases of size `0, 2, 4, …, max_basis`.
///
/// Bases are prefixes of [`KernelBasis::nested`], so the sequence is
/// nondecreasing up to solver rounding.
pub fn infeasibility_report(prob: &SearchProblem, max_basis: usize) -> Result<Vec<(usize, f64)>> {
    prob.validate()?;
    (0..=max_basis)
        .step_by(2)
        .map(|size| {
            let p = prob.clone().with_basis(KernelBasis::nested(size));
            Ok((size, solve_lp(&p)?.epsilon))
        })
        .collect()
}

/// One row of the per-frequency constraint dump.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstraintRow {
    pub omega: Frequency,
    pub g: (f64, f64),
    pub m: (f64, f64),
    pub value: f64,
}

pub fn constraint_table(
    prob: &SearchProblem,
    cand: &MultiplierCandidate,
    grid: &FrequencyGrid,
) -> Result<Vec<ConstraintRow>> {
    grid.points()
        .map(|w| {
            let g = prob.plant.evaluate(w)?;
            let m = cand.m_value(w);
            let k = condition_kernel(&prob.plant, &prob.band, w)?;
            Ok(ConstraintRow {
                omega: w,
                g: (g.re, g.im),
                m: (m.re, m.im),
                value: (m * k).re,
            })
        })
        .collect()
}
