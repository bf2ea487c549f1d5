//! Exact computation of the sets and measures arising in metric
//! Diophantine approximation by integer polynomials.
//!
//! Everything that decides membership or order is exact: integer
//! polynomials, rational and dyadic numbers, and real roots isolated by
//! dyadic intervals. Floating point is used only as a conservative filter
//! and for reporting.

pub mod error;
pub mod numkit;
pub mod polynomials;
pub mod realroots;
pub mod casework;
pub mod experiments;

pub use error::{Error, Result};
pub use numkit::{
    AlgebraicEndpoint, Direction, Dyadic, DyadicEnclosure, Endpoint, Interval, IntervalUnion, Measure,
    PowerThreshold, RatInterval, Rational, Threshold,
};
pub use polynomials::IntPoly;
