//! Two-qutrit states under local finite-temperature amplitude damping.
//!
//! The crate evolves the Horodecki family `rho_alpha` through six-operator
//! Kraus channels acting on each qutrit, tracks negativity, the realignment
//! (CCNR) value and the smallest partial-transpose eigenvalue along the
//! evolution, and locates distillability sudden death and sudden birth.
//!
//! ```
//! use qutrit_dsd::channel::ChannelVariant;
//! use qutrit_dsd::dynamics::evolve_at;
//! use qutrit_dsd::witnesses::witness_report;
//!
//! let rho = evolve_at(4.3, 0.9, ChannelVariant::AsWritten, 0.05).unwrap();
//! let report = witness_report(&rho).unwrap();
//! assert!(report.is_npt());
//! ```

pub mod channel;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod states;
pub mod validate;
pub mod witnesses;

pub use error::{Error, Result};
