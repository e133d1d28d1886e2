//! Exact half-integer angular momenta stored as twice their value.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

/// An angular momentum or projection quantum number, stored as `2j` so that
/// half-odd values stay exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HalfInt {
    twice: i32,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };

    pub fn from_twice(twice: i32) -> Self {
        HalfInt { twice }
    }

    pub fn from_int(j: i32) -> Self {
        HalfInt { twice: 2 * j }
    }

    pub fn twice(self) -> i32 {
        self.twice
    }

    pub fn value(self) -> f64 {
        f64::from(self.twice) / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    /// Exact integer value; panics on half-odd input.
    pub fn as_int(self) -> i32 {
        assert!(self.is_integer(), "{self} is not an integer");
        self.twice / 2
    }

    pub fn is_negative(self) -> bool {
        self.twice < 0
    }

    pub fn abs(self) -> Self {
        HalfInt { twice: self.twice.abs() }
    }

    /// Multiplet weight `2j + 1`.
    pub fn multiplicity(self) -> i32 {
        self.twice + 1
    }

    /// `ĵ = √(2j + 1)`.
    pub fn hat(self) -> f64 {
        f64::from(self.twice + 1).sqrt()
    }

    /// Whether `m` is a valid projection of this momentum: same parity and
    /// `|m| ≤ j`.
    pub fn holds_projection(self, m: HalfInt) -> bool {
        (self.twice - m.twice) % 2 == 0 && m.twice.abs() <= self.twice
    }

    /// Projections `-j, -j+1, …, +j`.
    pub fn projections(self) -> impl Iterator<Item = HalfInt> {
        (-self.twice..=self.twice).step_by(2).map(HalfInt::from_twice)
    }

    /// `(-1)^(self + other)`; the sum must be an integer.
    pub fn phase_with(self, other: HalfInt) -> f64 {
        let s = self.twice + other.twice;
        assert!(s % 2 == 0, "phase exponent {self}+{other} is not an integer");
        if (s / 2) % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// `(-1)^self`; must be an integer.
    pub fn phase(self) -> f64 {
        self.phase_with(HalfInt::ZERO)
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice + rhs.twice }
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice - rhs.twice }
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt { twice: -self.twice }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// Shorthand for `HalfInt::from_twice`.
pub fn half(twice: i32) -> HalfInt {
    HalfInt::from_twice(twice)
}
