//! Ergodic capacity of a dual-hop amplify-and-forward relay with a
//! multi-antenna relay under co-channel interference.
//!
//! Two independent paths are provided: Monte Carlo simulation of the
//! MRC/MRT, ZF/MRT and MMSE/MRT relay schemes ([`mc`]), and closed-form
//! capacity expressions and bounds with their quadrature cross-checks
//! ([`analytic`]). All powers are ratios to the noise power.

pub mod analytic;
pub mod channel;
pub mod error;
pub mod mc;
pub mod precoding;
pub mod quadrature;
pub mod specfun;
pub mod sum;

pub use error::{Error, Result};
