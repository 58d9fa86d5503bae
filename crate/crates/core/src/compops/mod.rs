//! Composition-operator diagnostics for maps into the unit disk: deficiency
//! profiles, boundedness and compactness classification, necessity ratios,
//! the counting-function norm formula and the quadratic sharpness sweep.

mod deficiency;
mod necessity;
mod norm;
mod sharpness;

pub use deficiency::{
    boundedness_diagnostic, deficiency_profile, Classification, DeficiencyReport, DiagnosticOptions, ExcludedSample,
    RatioSample, Trend, DIAGNOSTIC_RADII,
};
pub use necessity::{necessity_family, necessity_ratio, NecessityOptions, NecessityRatio};
pub use norm::compfnorm_via_counting;
pub use sharpness::{
    quadratic_sharpness_sweep, write_sharpness_csv, ExponentEstimate, SharpnessOptions, SharpnessTable,
    ThresholdCheck, SHARPNESS_RADII,
};
