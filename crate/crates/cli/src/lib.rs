//! The `zfcert` command line.
//!
//! Exit codes: 0 success or member, 1 usage/IO/precondition error,
//! 2 infeasible at the basis or non-member, 3 verification failed.

pub mod certify;
pub mod config;
pub mod counterexample;
pub mod io;
pub mod iqc_test;
pub mod nyquist;

use anyhow::Result;
use clap::{Parser, Subcommand};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_VERIFICATION_FAILED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "zfcert", version, about = "Zames-Falb multiplier search and stability certificates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Search for a multiplier and write a certificate.
    ///
    /// Writes the certificate JSON to --out and a CSV with columns
    /// omega,g_re,g_im,m_re,m_im,value, one row per verification frequency,
    /// where value = Re{M(jw)(G - 1/b)(aG* - 1)}. Exit 0 feasible,
    /// 2 infeasible at this basis, 3 verification failed.
    Certify(certify::CertifyArgs),
    /// Rebuild a known plant where the finite-basis search fails.
    ///
    /// Reports Nyquist clearance, loop stability and the LP margin for each
    /// basis size 0, 2, ..., --max-basis. Exit 0 when the gap is reproduced.
    Counterexample(counterexample::CounterexampleArgs),
    /// Plot the Nyquist curve against the forbidden segment [1/b, 1/a].
    ///
    /// Writes an SVG to --out and a CSV with columns omega,re,im.
    Nyquist(nyquist::NyquistArgs),
    /// Test membership of a nonlinearity or LTI uncertainty in a class.
    ///
    /// Exit 0 for a member, 2 otherwise.
    IqcTest(iqc_test::IqcTestArgs),
}

pub fn run(cli: &Cli) -> Result<i32> {
    Ok(match &cli.command {
        Command::Certify(args) => {
            let (code, cert) = certify::cmd_certify(args)?;
            eprintln!(
                "status {:?}, epsilon {:e}, certificate {}",
                cert.status,
                cert.epsilon,
                args.out.display()
            );
            code
        }
        Command::Counterexample(args) => counterexample::cmd_counterexample(args)?.0,
        Command::Nyquist(args) => nyquist::cmd_nyquist(args)?.0,
        Command::IqcTest(args) => iqc_test::cmd_iqc_test(args)?.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn iqc_test_needs_exactly_one_subject() {
        assert!(Cli::try_parse_from(["zfcert", "iqc-test"]).is_err());
        assert!(Cli::try_parse_from(["zfcert", "iqc-test", "--nonlinearity", "a", "--lti", "b"]).is_err());
        assert!(Cli::try_parse_from(["zfcert", "iqc-test", "--lti", "b"]).is_ok());
    }
}
