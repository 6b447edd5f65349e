//! toruslab: numerical growth analysis of entire holomorphic curves in the
//! algebraic torus.
//!
//! A curve f = [1 : e^{g_1} : ... : e^{g_n}] with polynomial exponents g_i is
//! represented exactly by its coefficient lists. The library computes the
//! Fubini-Study derivative density |df|^2 stably in the log domain, radial
//! growth statistics (circle maxima, growth exponent, the Shimizu-Ahlfors
//! characteristic and its order), angular level-set measures with their decay
//! bounds, and Schwarz-formula coefficient recovery from boundary samples.
//! The `verify` module bundles the whole property suite behind one call.

pub mod asymptotics;
pub mod curve;
pub mod error;
pub mod exact;
pub mod fs;
pub mod level_sets;
pub mod numerics;
pub mod recovery;
pub mod report;
pub mod verify;

pub use asymptotics::{
    characteristic_direct, characteristic_jensen, characteristic_profile, circle_max_norm,
    growth_exponent, order_estimate, polynomial_bound_constant, ExponentEstimate, RadialProfile,
};
pub use curve::{ExpPolyCurve, Polynomial};
pub use error::{Error, Result};
pub use fs::{component_norm, fs_density, fs_norm, log_fs_density};
pub use level_sets::{level_set_measure, level_set_report, LevelSetReport, QuadConfig};
pub use recovery::{
    circle_log_samples, detect_degree, recover_polynomial, schwarz_coefficient, theorem1_verify,
    CircleSamples, RecoveredPolynomial,
};
pub use report::{CurveSpec, ReportEnvelope};
pub use verify::{run_verification, CheckResult, VerifyConfig};
