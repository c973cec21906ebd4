//! Object-oriented source metrics over a resolved class model.

pub mod cfg;
pub mod cohesion;
pub mod complexity;
pub mod coupling;
pub mod error;
pub mod evolution;
pub mod maintainability;
pub mod model;
pub mod mood;
pub mod parser;
pub mod qmood;
pub mod quality;
pub mod record;
pub mod report;

pub use error::{Error, Result};
