//! Picard groups, class groups and line-bundle cohomology of toric varieties
//! computed from fan combinatorics, together with a finite model of the
//! Picard group and line-bundle cohomology of the perfectoid cover obtained
//! by inverting the `p`-power map.

pub mod cohomology;
pub mod divisor;
pub mod error;
pub mod fan;
pub mod lattice_linalg;
pub mod perfectoid;

pub use error::{Error, Result};
pub use fan::{Cone, Fan, FanReport};
