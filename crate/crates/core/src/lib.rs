//! Exact verification of unramified L-group character identities and
//! Bessel-period computations at small rank.

pub mod bessel;
pub mod campaign;
pub mod error;
pub mod exact;
pub mod lfactors;
pub mod lgroup;
pub mod report;
pub mod wcf;

pub use error::{Error, Result};
