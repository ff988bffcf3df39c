use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

/// An angle in radians, always held in the principal range (−π, π].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(from = "f64", into = "f64")]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);
    pub const HALF_TURN: Angle = Angle(PI);

    pub fn new(radians: f64) -> Self {
        Angle(reduce(radians))
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn half(self) -> f64 {
        0.5 * self.0
    }

    /// Signed shortest rotation that takes `self` to `to`. A separation of
    /// exactly π resolves to +π.
    pub fn shortest_delta(self, to: Angle) -> f64 {
        reduce(to.0 - self.0)
    }

    /// Angular distance on the circle, in [0, π].
    pub fn distance(self, other: Angle) -> f64 {
        self.shortest_delta(other).abs()
    }
}

fn reduce(x: f64) -> f64 {
    if x > -PI && x <= PI {
        return x;
    }
    let r = x.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

impl From<f64> for Angle {
    fn from(x: f64) -> Self {
        Angle::new(x)
    }
}

impl From<Angle> for f64 {
    fn from(a: Angle) -> f64 {
        a.0
    }
}

impl Add for Angle {
    type Output = Angle;
    fn add(self, rhs: Angle) -> Angle {
        Angle::new(self.0 + rhs.0)
    }
}

impl Sub for Angle {
    type Output = Angle;
    fn sub(self, rhs: Angle) -> Angle {
        Angle::new(self.0 - rhs.0)
    }
}

impl Neg for Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        Angle::new(-self.0)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
