use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use zfcert::lti::{Frequency, FrequencyGrid, RationalTF};
use zfcert::multiplier::{KernelBasis, Mode, MultiplierCandidate, SlopeBand};
use zfcert::search::{constraint_table, synthesize, Certificate, SearchProblem, Status};

use crate::config::{DEFAULT_BASIS_SIZE, DEFAULT_GRID_POINTS, GRID_POINTS_ENV};
use crate::io::{fmt_num, parse_bound, read_json, to_json, write_atomic};
use crate::{EXIT_INFEASIBLE, EXIT_OK, EXIT_VERIFICATION_FAILED};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Nonnegative kernels: the monotone class.
    Nonneg,
    /// Signed kernels: the odd-monotone class.
    Signed,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Nonneg => Mode::NonNeg,
            ModeArg::Signed => Mode::Signed,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CertifyArgs {
    /// Plant JSON {"num": [...], "den": [...]}, descending powers of s.
    #[arg(long)]
    pub plant: PathBuf,
    /// Lower slope bound a >= 0.
    #[arg(long, default_value_t = 0.0)]
    pub a: f64,
    /// Upper slope bound b > a, or "inf".
    #[arg(long, default_value = "inf", value_parser = parse_bound)]
    pub b: f64,
    #[arg(long, default_value_t = DEFAULT_BASIS_SIZE)]
    pub basis_size: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Nonneg)]
    pub mode: ModeArg,
    /// Log-spaced search frequencies over [1e-3, 1e3]; 0 and inf are always added.
    #[arg(long, env = GRID_POINTS_ENV, default_value_t = DEFAULT_GRID_POINTS)]
    pub grid_points: usize,
    /// Certificate JSON path.
    #[arg(long)]
    pub out: PathBuf,
    /// Per-frequency CSV path; defaults to the --out path with a .csv extension.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

pub fn exit_code(status: Status) -> i32 {
    match status {
        Status::Feasible => EXIT_OK,
        Status::InfeasibleAtBasis => EXIT_INFEASIBLE,
        Status::VerificationFailed => EXIT_VERIFICATION_FAILED,
    }
}

pub fn build_problem(args: &CertifyArgs) -> Result<SearchProblem> {
    let plant: RationalTF = read_json(&args.plant, "plant")?;
    let band = SlopeBand::new(args.a, args.b)?;
    if args.grid_points == 0 {
        anyhow::bail!("--grid-points must be at least 1");
    }
    let prob = SearchProblem::new(plant, band, KernelBasis::with_size(args.basis_size), args.mode.into())
        .with_grid(FrequencyGrid::with_points(args.grid_points));
    prob.validate()
        .with_context(|| format!("plant {} fails a precondition", args.plant.display()))?;
    Ok(prob)
}

/// Synthesizes and verifies, writes the certificate JSON and the
/// per-frequency CSV, and returns the exit code with the certificate.
pub fn cmd_certify(args: &CertifyArgs) -> Result<(i32, Certificate)> {
    let prob = build_problem(args)?;
    let cert = synthesize(&prob)?;
    write_atomic(&args.out, to_json(&cert)?.as_bytes())?;
    let csv_path = args.csv.clone().unwrap_or_else(|| args.out.with_extension("csv"));
    write_atomic(&csv_path, constraint_csv(&prob, &cert)?.as_bytes())?;
    Ok((exit_code(cert.status), cert))
}

/// Columns `omega,g_re,g_im,m_re,m_im,value` on the verification grid, where
/// `value = Re{M(jω)K(ω)}`. Uses the certified candidate, or `z = 0` when
/// the certificate carries none.
pub fn constraint_csv(prob: &SearchProblem, cert: &Certificate) -> Result<String> {
    let zero = MultiplierCandidate::zero(KernelBasis::empty(), prob.mode);
    let cand = cert.candidate.as_ref().unwrap_or(&zero);
    let rows = constraint_table(prob, cand, &prob.verify_grid)?;
    let mut out = String::from("omega,g_re,g_im,m_re,m_im,value\n");
    for r in rows {
        let omega = match r.omega {
            Frequency::Finite(w) => fmt_num(w),
            Frequency::Infinity => "inf".into(),
        };
        writeln!(out, "{omega},{},{},{},{},{}", r.g.0, r.g.1, r.m.0, r.m.1, r.value)?;
    }
    Ok(out)
}
