//! Exact numerical stability criteria for vector bundles on comb curves:
//! tooth inequalities, feasible polarization regions, restriction
//! classification and kernel bundles of generated pairs.
//!
//! All arithmetic is exact over `Q`; no verdict depends on floating point.

pub mod error;
pub mod interval;
pub mod kernel;
pub mod model;
pub mod oracle;
pub mod polarization;
pub mod rational;
pub mod restriction;
pub mod selftest;

pub use error::{Error, Result};
pub use interval::{pick_simplest_rational, Endpoint, IntervalQ};
pub use kernel::{
    characterize, kernel_data, kernel_polarization, kernel_report, strong_unstability, validate_pair, Assumptions,
    Branch, Characterization, GeneratedPairData, KernelReport, StrongUnstability, StrongUnstabilityVerdict,
};
pub use model::{
    component_euler, slope, total_euler, validate_polarization, BundleData, CombCurve, Polarization,
    SubsheafProfile,
};
pub use polarization::{
    feasible_region, necessary_check, strictly_satisfies, synthesize_polarization, FeasibleRegion, NecessaryVerdict,
};
pub use rational::Rational;
pub use restriction::{classify, Destabilizer, RestrictionCase, RestrictionVerdict};
pub use selftest::{run_selftest, Execution, SelftestConfig, SelftestReport};
