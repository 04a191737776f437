//! Feature engineering and classification kernels for detecting vulnerable
//! road users from 9-channel smartphone inertial streams.
//!
//! The crate is organized as a pipeline of independent stages:
//!
//! - [`ingest`]: parse raw sensor logs, rebuild uniform signals, cut windows
//! - [`timefeat`]: 14 time-domain measures per window per channel
//! - [`embed`]: delay/dimension calibration and time-delay embedding
//! - [`rqa`]: recurrence plots and the six recurrence quantification measures
//! - [`select`]: mutual-information based mRMR feature ranking
//! - [`forest`]: random forest classifier with stratified cross-validation
//! - [`synth`]: deterministic synthetic stream generator for testing
//!
//! Numeric kernels are generic over the scalar type through [`Real`];
//! concrete `f64` aliases for the common types live at the crate root.

pub mod channel;
pub mod embed;
pub mod error;
pub mod forest;
pub mod ingest;
pub mod rqa;
pub mod select;
pub mod synth;
pub mod table;
pub mod timefeat;

pub use channel::{Axis, ChannelId, Mode, Sensor};
pub use error::{Error, Result};

use std::fmt::{Debug, Display};

/// Scalar type the numeric kernels are generic over.
///
/// Implemented by `f32` and `f64` via the blanket impl.
pub trait Real:
    num_traits::Float
    + num_traits::FromPrimitive
    + num_traits::ToPrimitive
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lossless-enough view of the value for count/ratio arithmetic.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Inverse of [`Real::as_f64`], saturating through `from_f64`.
    fn of_f64(v: f64) -> Self {
        Self::from_f64(v).unwrap_or_else(Self::nan)
    }
}

impl<T> Real for T where
    T: num_traits::Float
        + num_traits::FromPrimitive
        + num_traits::ToPrimitive
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

pub type TimeSeries64 = ingest::TimeSeries<f64>;
pub type Window64 = ingest::Window<f64>;
pub type Trajectory64 = embed::EmbeddedTrajectory<f64>;

pub type TimeSeries32 = ingest::TimeSeries<f32>;
pub type Window32 = ingest::Window<f32>;
pub type Trajectory32 = embed::EmbeddedTrajectory<f32>;
