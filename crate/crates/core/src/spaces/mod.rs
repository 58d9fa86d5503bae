//! Hardy and weighted Bergman norms, point evaluations and Carleson windows.

mod carleson;
mod norms;

pub use carleson::{carleson_window, CarlesonOptions, CarlesonReport, ExponentFit};
pub use norms::{
    bergman_norm, hardy_norm, point_eval_bound, radial_panels, weighted_radial_integral, NormOptions,
    NormResult, PointEvalBound, RadialIntegral,
};
