//! Exact and interval-certified verification of the numeric inequality
//! chains behind codimension bounds for Fano complete intersections.

pub mod error;
pub mod dyadic;
pub mod interval;
pub mod exact;
pub mod tuple;
pub mod slopes;
pub mod bounds;
pub mod expr;
pub mod signcert;
pub mod certify;
pub mod analytic;
pub mod report;

pub use num_bigint;
pub use num_rational;
