//! Exact engine for global p-nilpotent operators of infinitesimal group schemes:
//! local Jordan types, constant rank detection and kernel bundles on the projective line.

pub mod error;
pub mod field;
pub mod group;
pub mod poly;
pub mod presets;
pub mod rep;
pub mod theta;
pub mod bundle;

pub use error::{Error, Result};
