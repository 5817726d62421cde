//! Exact Voronoi reduction theory for positive-definite quadratic forms,
//! together with the cell-complex, shelling and parabolic combinatorics
//! used to compute cohomology of arithmetic groups.

pub mod complex;
pub mod error;
pub mod exact;
pub mod minvec;
pub mod par;
pub mod parabolics;
pub mod perfect;
pub mod reduce;
pub mod retract_sl2;
pub mod shelling;
pub mod sp4;

pub use error::{Error, Result};
