//! Design toolkit for bistable hair-clip ribbon mechanisms.
//!
//! The pipeline runs from special functions ([`specfun`]) through the
//! closed-form ribbon solution ([`elastica`]) to actuator metrics
//! ([`metrics`]), with catalogs, sweeps and design search on top and an
//! independent numerical [`oracle`] to check the closed form.

pub mod catalog;
pub mod cli;
pub mod elastica;
pub mod error;
pub mod metrics;
pub mod oracle;
pub mod quadrature;
pub mod search;
pub mod specfun;
pub mod table;

pub use error::{Error, Result};
