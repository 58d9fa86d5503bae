//! Level-measure Hardy and weighted Bergman norms, Nevanlinna counting
//! functions and composition-operator diagnostics on the unit disk, the unit
//! ball of `C²` and the bidisk.

pub mod error;
pub mod exec;
pub mod geometry;
pub mod quad;
pub mod roots;
pub mod special;

pub use error::{Error, Result};
pub use geometry::*;
pub use special::{gamma_alpha, sigma_alpha};
pub mod measures;
pub mod spaces;
pub mod counting;
pub mod random;
pub mod identities;
pub mod fit;
pub mod compops;
