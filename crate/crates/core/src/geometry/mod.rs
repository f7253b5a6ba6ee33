//! Enclosing balls, sketch discrepancy, and checks of the margin and radius
//! inequalities on measured quantities.

mod bounds;
mod discrepancy;
mod meb;

pub use bounds::{
    headline_ratio_multiplier, margin_multiplier, verify_combined_bound, verify_margin_bound, verify_radius_bound,
    BoundCheck, RadiusCheck, BOUND_REL_SLACK,
};
pub use discrepancy::{data_discrepancy, spectral_discrepancy, DiscrepancyResult, ORTHONORMAL_TOL};
pub use meb::{min_enclosing_ball, MebResult, DEFAULT_APPROX_DELTA};
