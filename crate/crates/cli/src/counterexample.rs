//! Plants for which every constant gain in the class is stabilizing, yet the
//! multiplier search finds nothing at any basis size tried.
//!
//! With `P(s) = s² + 2ξs + 1`:
//! - monotone: `G = −s²/P² − ε`, whose Nyquist curve avoids `[0, ∞)`;
//! - slope `[a, b]`: `G = ((b⁻¹ − ε)P² − a⁻¹ξ²s²) / ((1 − aε)P² − ξ²s²)`,
//!   chosen so that `(G − b⁻¹)/(aG − 1) = a⁻¹ξ²s²/P² + ε`.

use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use zfcert::lti::{in_rh_inf, interval_clearance, FrequencyGrid, Polynomial, RationalTF};
use zfcert::multiplier::{KernelBasis, Mode, SlopeBand};
use zfcert::search::{check_loop_stable, infeasibility_report, SearchProblem};
use zfcert::Error;

use crate::config::{DEFAULT_EPS, DEFAULT_GRID_POINTS, DEFAULT_MAX_BASIS, DEFAULT_SLOPE_A, DEFAULT_SLOPE_B, DEFAULT_XI, GRID_POINTS_ENV};
use crate::io::{parse_bound, to_json, write_atomic};
use crate::{EXIT_INFEASIBLE, EXIT_OK};

/// Largest admissible damping ratio.
pub const XI_MAX: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CounterexampleName {
    OsheaMonotone,
    OsheaSlope,
}

#[derive(Debug, Clone, Args)]
pub struct CounterexampleArgs {
    #[arg(value_enum)]
    pub name: CounterexampleName,
    /// Damping ratio in (0, 0.25].
    #[arg(long, default_value_t = DEFAULT_XI)]
    pub xi: f64,
    /// Offset ε > 0.
    #[arg(long, default_value_t = DEFAULT_EPS)]
    pub eps: f64,
    /// Lower slope bound (slope case only), 0 < a < b.
    #[arg(long, default_value_t = DEFAULT_SLOPE_A)]
    pub a: f64,
    /// Upper slope bound (slope case only), finite.
    #[arg(long, default_value_t = DEFAULT_SLOPE_B, value_parser = parse_bound)]
    pub b: f64,
    /// Largest basis in the ladder; sizes 0, 2, ..., max.
    #[arg(long, default_value_t = DEFAULT_MAX_BASIS)]
    pub max_basis: usize,
    #[arg(long, env = GRID_POINTS_ENV, default_value_t = DEFAULT_GRID_POINTS)]
    pub grid_points: usize,
    /// Report JSON path; printed to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LadderStep {
    pub basis_size: usize,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleReport {
    pub name: CounterexampleName,
    pub xi: f64,
    pub eps: f64,
    pub band: SlopeBand,
    pub plant: RationalTF,
    pub in_rh_inf: bool,
    /// `den − a·num` Hurwitz; always true for the monotone case.
    pub loop_stable: bool,
    pub segment: (Option<f64>, Option<f64>),
    pub clearance: f64,
    /// Largest identity residual over the grid (slope case only).
    pub identity_residual: Option<f64>,
    pub mode: Mode,
    pub ladder: Vec<LadderStep>,
    pub gap_reproduced: bool,
    pub verdict: String,
}

fn damping_poly(xi: f64) -> Polynomial {
    Polynomial::new(vec![1.0, 2.0 * xi, 1.0])
}

fn check_xi_eps(xi: f64, eps: f64) -> Result<(), Error> {
    if !(xi > 0.0 && xi <= XI_MAX) {
        return Err(Error::ParameterOutOfRange(format!("xi = {xi} must lie in (0, {XI_MAX}]")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::ParameterOutOfRange(format!("eps = {eps} must lie in (0, 1)")));
    }
    Ok(())
}

/// `G = −s²/P² − ε`.
pub fn oshea_monotone_plant(xi: f64, eps: f64) -> Result<RationalTF, Error> {
    check_xi_eps(xi, eps)?;
    let p = damping_poly(xi);
    let p2 = &p * &p;
    let num = &Polynomial::new(vec![-1.0, 0.0, 0.0]) - &p2.scale(eps);
    RationalTF::new(num, p2)
}

/// `G = ((b⁻¹ − ε)P² − a⁻¹ξ²s²) / ((1 − aε)P² − ξ²s²)`.
pub fn oshea_slope_plant(xi: f64, eps: f64, a: f64, b: f64) -> Result<RationalTF, Error> {
    check_xi_eps(xi, eps)?;
    if !(a > 0.0 && b > a && b.is_finite()) {
        return Err(Error::ParameterOutOfRange(format!("need 0 < a < b < inf, got a = {a}, b = {b}")));
    }
    if a * eps >= 1.0 {
        return Err(Error::ParameterOutOfRange(format!("a*eps = {} must be < 1", a * eps)));
    }
    let p = damping_poly(xi);
    let p2 = &p * &p;
    let s2 = Polynomial::new(vec![xi * xi, 0.0, 0.0]);
    let num = &p2.scale(1.0 / b - eps) - &s2.scale(1.0 / a);
    let den = &p2.scale(1.0 - a * eps) - &s2;
    RationalTF::new(num, den)
}

/// `max_ω |(G − b⁻¹)(aG − 1)⁻¹ − (a⁻¹ξ²(jω)²/P(jω)² + ε)|` over the finite grid.
pub fn slope_identity_residual(g: &RationalTF, xi: f64, eps: f64, a: f64, b: f64, grid: &FrequencyGrid) -> f64 {
    let p = damping_poly(xi);
    grid.omegas()
        .iter()
        .map(|&w| {
            let s = Complex64::new(0.0, w);
            let gv = g.eval_s(s);
            let lhs = (gv - 1.0 / b) / (gv * a - 1.0);
            let pv = p.eval(s);
            let rhs = s * s * (xi * xi / a) / (pv * pv) + eps;
            (lhs - rhs).norm()
        })
        .fold(0.0, f64::max)
}

pub fn run_counterexample(args: &CounterexampleArgs) -> Result<CounterexampleReport> {
    if args.grid_points == 0 {
        anyhow::bail!("--grid-points must be at least 1");
    }
    let grid = FrequencyGrid::with_points(args.grid_points);
    let (plant, band, residual) = match args.name {
        CounterexampleName::OsheaMonotone => (oshea_monotone_plant(args.xi, args.eps)?, SlopeBand::monotone(), None),
        CounterexampleName::OsheaSlope => {
            let g = oshea_slope_plant(args.xi, args.eps, args.a, args.b)?;
            let r = slope_identity_residual(&g, args.xi, args.eps, args.a, args.b, &grid);
            (g, SlopeBand::new(args.a, args.b)?, Some(r))
        }
    };
    let rh = in_rh_inf(&plant);
    let loop_stable = check_loop_stable(&plant, band.a()).is_ok();
    let (lo, hi) = band.forbidden_segment();
    let clearance = interval_clearance(&plant, &grid, lo, hi)?;

    // Signed mode: its feasible set contains the nonneg one, so a failed
    // signed search is the stronger statement.
    let mode = Mode::Signed;
    let prob = SearchProblem::new(plant.clone(), band, KernelBasis::empty(), mode).with_grid(grid);
    let ladder: Vec<LadderStep> = infeasibility_report(&prob, args.max_basis)?
        .into_iter()
        .map(|(basis_size, margin)| LadderStep { basis_size, margin })
        .collect();

    let all_nonpositive = ladder.iter().all(|s| s.margin <= 0.0);
    let gap_reproduced = rh && loop_stable && clearance > 0.0 && all_nonpositive;
    let verdict = if gap_reproduced {
        format!(
            "uniformly stable over the LTI class at grid resolution (clearance {clearance:e}), yet no finite-basis multiplier found up to {} elements",
            args.max_basis
        )
    } else {
        "gap not reproduced at these settings; see the individual checks".to_string()
    };
    Ok(CounterexampleReport {
        name: args.name,
        xi: args.xi,
        eps: args.eps,
        band,
        plant,
        in_rh_inf: rh,
        loop_stable,
        segment: (finite(lo), finite(hi)),
        clearance,
        identity_residual: residual,
        mode,
        ladder,
        gap_reproduced,
        verdict,
    })
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

/// Exit 0 when the gap is reproduced, 2 otherwise.
pub fn cmd_counterexample(args: &CounterexampleArgs) -> Result<(i32, CounterexampleReport)> {
    let report = run_counterexample(args)?;
    let text = to_json(&report)?;
    match &args.out {
        Some(p) => write_atomic(p, text.as_bytes())?,
        None => print!("{text}"),
    }
    let code = if report.gap_reproduced { EXIT_OK } else { EXIT_INFEASIBLE };
    Ok((code, report))
}
