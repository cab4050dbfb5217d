//! Analytic and brute-force oracles plus the invariant certification suite.
//!
//! * [`erf`]: dependency-free error function (series + continued fraction).
//! * [`neumann`]: one-phase similarity oracle for the front trajectory and
//!   the classical-Stefan setup builder.
//! * [`physical`]: physical-coordinate reference solvers used to validate
//!   the front-fixing transformation, including the derived crust advection
//!   coefficient.
//! * [`mms`]: manufactured solutions with frozen front for order checks.
//! * [`convergence`]: observed-order extraction and self-convergence against
//!   4×-refined reference runs.
//! * [`battery`]: seeded random admissible setups for the certificate suite.
//! * [`certify`]: pass/fail evaluation of the run-level invariants.

pub mod battery;
pub mod certify;
pub mod convergence;
pub mod erf;
pub mod mms;
pub mod neumann;
pub mod physical;

pub use battery::{seeded_battery, BatteryCase};
pub use certify::{
    certify_run, hypotheses_of, CertStatus, Certificate, CertificationConfig,
    CertificationReport, Hypotheses,
};
pub use convergence::{
    heat_mms_orders, moisture_mms_orders, observed_orders, self_convergence, MmsOrders,
    OrderEstimate, SelfConvergence,
};
pub use erf::{erf, erfc};
pub use mms::{HeatMms, MoistureMms};
pub use neumann::{
    classical_stefan_config, compare_front_to_oracle, neumann_lambda, neumann_mapping,
    ClassicalStefanConfig, NeumannOracle, OracleComparison,
};
pub use physical::{heat_reference, moisture_reference, PhysicalField};
