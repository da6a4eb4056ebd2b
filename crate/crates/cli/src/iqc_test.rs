use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use serde::Serialize;
use zfcert::classes::{
    falsify_noneven_odd, falsify_nonmonotone, lti_membership_test, membership_test_static, LtiReport,
    LtiUncertainty, NonmonotoneWitness, OddReport, StaticNonlinearity, StaticReport,
};
use zfcert::lti::{FrequencyGrid, RationalTF};
use zfcert::multiplier::SlopeBand;

use crate::config::{DEFAULT_BLOCKS, DEFAULT_LTI_GRID_POINTS, DEFAULT_SEED, DEFAULT_TAU_SAMPLES, DEFAULT_TRIALS};
use crate::io::{parse_bound, read_json, to_json, write_atomic};
use crate::{EXIT_INFEASIBLE, EXIT_OK};

#[derive(Debug, Clone, Args)]
pub struct IqcTestArgs {
    /// Piecewise-linear nonlinearity JSON {"breakpoints": [...], "values": [...]}.
    #[arg(long, required_unless_present = "lti", conflicts_with = "lti")]
    pub nonlinearity: Option<PathBuf>,
    /// LTI uncertainty given as a plant JSON {"num": [...], "den": [...]}.
    #[arg(long)]
    pub lti: Option<PathBuf>,
    #[arg(long, default_value_t = 0.0)]
    pub a: f64,
    #[arg(long, default_value = "inf", value_parser = parse_bound)]
    pub b: f64,
    /// Randomized IQC spot checks (static case).
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    pub trials: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Block length L for the falsification signals.
    #[arg(long, default_value_t = DEFAULT_BLOCKS)]
    pub blocks: usize,
    /// Also run the odd-class construction (monotone inputs only).
    #[arg(long)]
    pub odd: bool,
    /// Phase samples per frequency (LTI case).
    #[arg(long, default_value_t = DEFAULT_TAU_SAMPLES)]
    pub tau_samples: usize,
    /// Frequencies for the LTI case.
    #[arg(long, default_value_t = DEFAULT_LTI_GRID_POINTS)]
    pub grid_points: usize,
    /// Report JSON path; printed to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[allow(clippy::large_enum_variant)] // built once per run
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IqcTestReport {
    Static {
        band: SlopeBand,
        membership: StaticReport,
        /// Present when the nonlinearity is not monotone.
        nonmonotone: Option<NonmonotoneWitness>,
        /// Present with `--odd` on a monotone nonlinearity.
        odd: Option<OddReport>,
        member: bool,
    },
    Lti {
        report: LtiReport,
        member: bool,
    },
}

impl IqcTestReport {
    pub fn member(&self) -> bool {
        match self {
            IqcTestReport::Static { member, .. } | IqcTestReport::Lti { member, .. } => *member,
        }
    }
}

pub fn run_iqc_test(args: &IqcTestArgs) -> Result<IqcTestReport> {
    if let Some(path) = &args.lti {
        let tf: RationalTF = read_json(path, "LTI uncertainty")?;
        let u = LtiUncertainty::new(tf)?;
        if args.grid_points == 0 {
            anyhow::bail!("--grid-points must be at least 1");
        }
        let grid = FrequencyGrid::with_points(args.grid_points);
        let report = lti_membership_test(&u, &grid, args.tau_samples)?;
        let member = report.member;
        return Ok(IqcTestReport::Lti { report, member });
    }
    let path = args.nonlinearity.as_ref().expect("clap enforces one subject");
    let nl: StaticNonlinearity = read_json(path, "nonlinearity")?;
    let band = SlopeBand::new(args.a, args.b)?;
    let membership = membership_test_static(&nl, &band, args.trials, args.seed);
    let nonmonotone = if nl.is_monotone() {
        None
    } else {
        Some(falsify_nonmonotone(&nl, args.blocks)?)
    };
    let odd = if args.odd && nl.is_monotone() {
        Some(falsify_noneven_odd(&nl, args.blocks)?)
    } else {
        None
    };
    let member = membership.member;
    Ok(IqcTestReport::Static {
        band,
        membership,
        nonmonotone,
        odd,
        member,
    })
}

/// Exit 0 for a member, 2 otherwise.
pub fn cmd_iqc_test(args: &IqcTestArgs) -> Result<(i32, IqcTestReport)> {
    let report = run_iqc_test(args)?;
    let text = to_json(&report)?;
    match &args.out {
        Some(p) => write_atomic(p, text.as_bytes())?,
        None => print!("{text}"),
    }
    let code = if report.member() { EXIT_OK } else { EXIT_INFEASIBLE };
    Ok((code, report))
}
