//! Sensor channel and transport mode vocabulary.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Inertial sensor family. Declaration order fixes the channel registry order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sensor {
    Accelerometer,
    Gyroscope,
    RotationVector,
}

impl Sensor {
    pub const ALL: [Sensor; 3] = [
        Sensor::Accelerometer,
        Sensor::Gyroscope,
        Sensor::RotationVector,
    ];

    /// Short code used in log files and feature names.
    pub fn code(self) -> &'static str {
        match self {
            Sensor::Accelerometer => "acc",
            Sensor::Gyroscope => "gyr",
            Sensor::RotationVector => "rot",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn code(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

/// One of the nine sensor channels (sensor family x axis).
///
/// `Ord` follows registry order: acc_x, acc_y, acc_z, gyr_x, ..., rot_z.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ChannelId {
    pub sensor: Sensor,
    pub axis: Axis,
}

impl ChannelId {
    pub const fn new(sensor: Sensor, axis: Axis) -> Self {
        ChannelId { sensor, axis }
    }

    /// All nine channels in registry order.
    pub fn all() -> [ChannelId; 9] {
        let mut out = [ChannelId::new(Sensor::Accelerometer, Axis::X); 9];
        let mut k = 0;
        for sensor in Sensor::ALL {
            for axis in Axis::ALL {
                out[k] = ChannelId::new(sensor, axis);
                k += 1;
            }
        }
        out
    }

    /// Position in registry order (0..9).
    pub fn index(self) -> usize {
        let s = match self.sensor {
            Sensor::Accelerometer => 0,
            Sensor::Gyroscope => 1,
            Sensor::RotationVector => 2,
        };
        let a = match self.axis {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        };
        s * 3 + a
    }

    /// Log-format name, e.g. `acc_x`.
    pub fn name(self) -> &'static str {
        const NAMES: [&str; 9] = [
            "acc_x", "acc_y", "acc_z", "gyr_x", "gyr_y", "gyr_z", "rot_x", "rot_y", "rot_z",
        ];
        NAMES[self.index()]
    }
}

impl fmt::Display for ChannelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChannelId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        ChannelId::all()
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown channel name {s:?}")))
    }
}

/// Transport mode label of one epoch.
///
/// Declaration order matches the five-class scheme: bike, walk, run, bus, car.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Bike,
    Walk,
    Run,
    Bus,
    Car,
}

impl Mode {
    pub const ALL: [Mode; 5] = [Mode::Bike, Mode::Walk, Mode::Run, Mode::Bus, Mode::Car];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Bike => "bike",
            Mode::Walk => "walk",
            Mode::Run => "run",
            Mode::Bus => "bus",
            Mode::Car => "car",
        }
    }

    /// True for the modes without a protective shell.
    pub fn is_vru(self) -> bool {
        matches!(self, Mode::Bike | Mode::Walk | Mode::Run)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Mode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::InvalidLabel(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_channels_in_registry_order() {
        let all = ChannelId::all();
        assert_eq!(all.len(), 9);
        let names: Vec<_> = all.iter().map(|c| c.name()).collect();
        assert_eq!(
            names,
            ["acc_x", "acc_y", "acc_z", "gyr_x", "gyr_y", "gyr_z", "rot_x", "rot_y", "rot_z"]
        );
        for (i, c) in all.iter().enumerate() {
            assert_eq!(c.index(), i);
        }
        let mut sorted = all;
        sorted.sort();
        assert_eq!(sorted, all);
    }

    #[test]
    fn channel_round_trips_through_name() {
        for c in ChannelId::all() {
            assert_eq!(c.name().parse::<ChannelId>().unwrap(), c);
        }
        assert!("gps_x".parse::<ChannelId>().is_err());
    }

    #[test]
    fn mode_round_trips() {
        for m in Mode::ALL {
            assert_eq!(m.as_str().parse::<Mode>().unwrap(), m);
        }
        assert!("tram".parse::<Mode>().is_err());
    }
}
