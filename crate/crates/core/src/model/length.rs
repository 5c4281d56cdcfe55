//! Exact lengths of the form `a + b·√2` and the mixed exact/real length type
//! carried by tree edges.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

/// The value `a + b·√2` with integer coefficients.
///
/// Grid trees only ever produce sums of unit axis steps and unit diagonal
/// steps, so every path length in them is representable exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct ExactLength {
    pub a: i64,
    pub b: i64,
}

impl ExactLength {
    pub const ZERO: ExactLength = ExactLength { a: 0, b: 0 };
    pub const ONE: ExactLength = ExactLength { a: 1, b: 0 };
    pub const SQRT2: ExactLength = ExactLength { a: 0, b: 1 };

    pub const fn new(a: i64, b: i64) -> Self {
        ExactLength { a, b }
    }

    pub fn value(self) -> f64 {
        self.a as f64 + self.b as f64 * std::f64::consts::SQRT_2
    }

    pub fn is_zero(self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// Sign of `self` as an exact real number.
    pub fn signum(self) -> Ordering {
        let (a, b) = (self.a as i128, self.b as i128);
        match (a.cmp(&0), b.cmp(&0)) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
            (Ordering::Less, Ordering::Less) => Ordering::Less,
            // a > 0 > b: compare a^2 with 2 b^2
            (Ordering::Greater, Ordering::Less) => (a * a).cmp(&(2 * b * b)),
            (Ordering::Less, Ordering::Greater) => (2 * b * b).cmp(&(a * a)),
        }
    }
}

impl Ord for ExactLength {
    fn cmp(&self, other: &Self) -> Ordering {
        (*self - *other).signum()
    }
}

impl PartialOrd for ExactLength {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for ExactLength {
    type Output = ExactLength;
    fn add(self, rhs: Self) -> Self {
        ExactLength::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl Sub for ExactLength {
    type Output = ExactLength;
    fn sub(self, rhs: Self) -> Self {
        ExactLength::new(self.a - rhs.a, self.b - rhs.b)
    }
}

impl Mul<i64> for ExactLength {
    type Output = ExactLength;
    fn mul(self, k: i64) -> Self {
        ExactLength::new(self.a * k, self.b * k)
    }
}

impl fmt::Display for ExactLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, b) => write!(f, "{b}√2"),
            (a, b) if b < 0 => write!(f, "{a}-{}√2", -b),
            (a, b) => write!(f, "{a}+{b}√2"),
        }
    }
}

/// An edge or path length: exact when every contributing edge was exact.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Length {
    Exact(ExactLength),
    Real(f64),
}

impl Length {
    pub fn value(self) -> f64 {
        match self {
            Length::Exact(e) => e.value(),
            Length::Real(r) => r,
        }
    }

    pub fn exact(self) -> Option<ExactLength> {
        match self {
            Length::Exact(e) => Some(e),
            Length::Real(_) => None,
        }
    }

    pub fn is_positive(self) -> bool {
        match self {
            Length::Exact(e) => e.signum() == Ordering::Greater,
            Length::Real(r) => r > 0.0,
        }
    }
}

impl From<ExactLength> for Length {
    fn from(e: ExactLength) -> Self {
        Length::Exact(e)
    }
}

impl From<f64> for Length {
    fn from(r: f64) -> Self {
        Length::Real(r)
    }
}

impl Add for Length {
    type Output = Length;
    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (Length::Exact(a), Length::Exact(b)) => Length::Exact(a + b),
            (a, b) => Length::Real(a.value() + b.value()),
        }
    }
}

impl PartialOrd for Length {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Length::Exact(a), Length::Exact(b)) => Some(a.cmp(b)),
            (a, b) => a.value().partial_cmp(&b.value()),
        }
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Length::Exact(e) => write!(f, "{e}"),
            Length::Real(r) => write!(f, "{r}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn display() {
        assert_eq!(ExactLength::new(0, 4).to_string(), "4√2");
        assert_eq!(ExactLength::new(12, 5).to_string(), "12+5√2");
        assert_eq!(ExactLength::new(6, 0).to_string(), "6");
    }

    #[test]
    fn close_values_compare_exactly() {
        // 99 vs 70√2 = 98.9949...
        assert!(ExactLength::new(99, 0) > ExactLength::new(0, 70));
        // 3 + 2√2 vs 0 + 4√2 → 5.828 vs 5.657
        assert!(ExactLength::new(3, 2) > ExactLength::new(0, 4));
        assert_eq!(
            ExactLength::new(2, 1).cmp(&ExactLength::new(2, 1)),
            Ordering::Equal
        );
    }

    #[test]
    fn mixed_addition_degrades_to_real() {
        let s = Length::Exact(ExactLength::new(1, 1)) + Length::Real(0.5);
        assert!(matches!(s, Length::Real(v) if (v - (1.5 + std::f64::consts::SQRT_2)).abs() < 1e-12));
    }

    proptest! {
        #[test]
        fn addition_is_componentwise(a1 in -500i64..500, b1 in -500i64..500, a2 in -500i64..500, b2 in -500i64..500) {
            let s = ExactLength::new(a1, b1) + ExactLength::new(a2, b2);
            prop_assert_eq!(s, ExactLength::new(a1 + a2, b1 + b2));
        }

        // Grid paths at m <= 7 have coefficients well below 2^9.
        #[test]
        fn order_agrees_with_float(a1 in 0i64..600, b1 in 0i64..600, a2 in 0i64..600, b2 in 0i64..600) {
            let x = ExactLength::new(a1, b1);
            let y = ExactLength::new(a2, b2);
            let fx = x.value();
            let fy = y.value();
            if (fx - fy).abs() > 1e-9 {
                prop_assert_eq!(x.cmp(&y), fx.partial_cmp(&fy).unwrap());
            }
        }
    }
}
