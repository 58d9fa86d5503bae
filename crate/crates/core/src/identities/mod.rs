//! Numerical checks of the Lelong–Jensen, Littlewood–Paley and
//! change-of-variables identities and of the subordination, logarithmic and
//! mean-value inequalities.

mod plane;
mod report;
mod verify;

pub use plane::{plane_integral, PlaneRule};
pub use report::{format_table, write_reports_csv, IdentityMode, IdentityPoint, IdentityReport};
pub use verify::{
    verify_change_of_variables, verify_lelong_jensen, verify_littlewood_paley, verify_log_bound, verify_mean_value,
    verify_proper_pushforward, verify_subordination, Budgets,
};
