//! Numerical engine for categorical gauge theory on trivial bundles.
//!
//! The crate provides crossed modules and their categorical groups, sampled
//! paths and surfaces, Lie-group ODE stepping, the pathspace connection form
//! built from a pair of connections and a 2-form, horizontal lifts of paths
//! and surfaces, decorated and doubly decorated transport, associated-bundle
//! transport, and exhaustive checks on finite categorical bundles.

pub mod associated;
pub mod bundle;
pub mod checks;
pub mod crossed;
pub mod decorated;
pub mod error;
pub mod finite;
pub mod fixtures;
pub mod forms;
pub mod group;
pub mod lie_ode;
pub mod path;
pub mod scenario;

pub use error::{Error, Result};
