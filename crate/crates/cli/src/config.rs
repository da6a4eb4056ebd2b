//! Every default the commands use, in one place. All are overridable by flags.

/// Search-grid size when neither `--grid-points` nor the env var is set.
pub const DEFAULT_GRID_POINTS: usize = zfcert::lti::DEFAULT_GRID_POINTS;
/// Fallback for `--grid-points`.
pub const GRID_POINTS_ENV: &str = "ZF_CERTIFY_GRID_POINTS";
/// 10 rates × 2 sides.
pub const DEFAULT_BASIS_SIZE: usize = 20;
/// Largest basis in the counterexample ladder.
pub const DEFAULT_MAX_BASIS: usize = 40;
pub const DEFAULT_XI: f64 = 0.25;
pub const DEFAULT_EPS: f64 = 1e-3;
pub const DEFAULT_SLOPE_A: f64 = 0.5;
pub const DEFAULT_SLOPE_B: f64 = 2.0;
/// Randomized IQC spot checks per static membership test.
pub const DEFAULT_TRIALS: usize = 20;
pub const DEFAULT_SEED: u64 = 0;
/// Block-signal length parameter for the falsification constructions.
pub const DEFAULT_BLOCKS: usize = 50;
/// Phase samples `ωτ ∈ [0, 2π)` per frequency in the LTI test.
pub const DEFAULT_TAU_SAMPLES: usize = 64;
/// Grid size for the LTI test, which needs no verification grid.
pub const DEFAULT_LTI_GRID_POINTS: usize = 400;
