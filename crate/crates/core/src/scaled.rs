//! Sign / log-magnitude reals.
//!
//! Products of the growing companion function with its derivatives reach
//! `e^{1.6 λ^{5/4}}`, which leaves the `f64` range around λ ≈ 130.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledReal {
    /// -1, 0 or +1.
    pub sign: i8,
    /// Natural log of the magnitude. Meaningless when `sign == 0`.
    pub log_mag: f64,
}

impl ScaledReal {
    pub const ZERO: ScaledReal = ScaledReal { sign: 0, log_mag: f64::NEG_INFINITY };
    pub const ONE: ScaledReal = ScaledReal { sign: 1, log_mag: 0.0 };

    pub fn new(sign: i8, log_mag: f64) -> Self {
        if sign == 0 || log_mag == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            Self { sign: sign.signum(), log_mag }
        }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self { sign: if x > 0.0 { 1 } else { -1 }, log_mag: x.abs().ln() }
        }
    }

    /// `m · e^{shift}`, for a mantissa computed against a known envelope.
    pub fn from_scaled(m: f64, shift: f64) -> Self {
        let s = Self::from_f64(m);
        if s.sign == 0 {
            s
        } else {
            Self { sign: s.sign, log_mag: s.log_mag + shift }
        }
    }

    pub fn to_f64(self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.log_mag.exp(),
        }
    }

    /// Value divided by `e^{shift}`, as an `f64`.
    pub fn unscale(self, shift: f64) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * (self.log_mag - shift).exp(),
        }
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn abs(self) -> Self {
        if self.sign == 0 {
            self
        } else {
            Self { sign: 1, log_mag: self.log_mag }
        }
    }

    pub fn sqrt(self) -> Option<Self> {
        match self.sign {
            0 => Some(self),
            1 => Some(Self { sign: 1, log_mag: 0.5 * self.log_mag }),
            _ => None,
        }
    }

    pub fn scale(self, factor: f64) -> Self {
        self * Self::from_f64(factor)
    }

    /// Compare magnitudes.
    pub fn cmp_abs(self, other: Self) -> Ordering {
        match (self.sign == 0, other.sign == 0) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => self.log_mag.total_cmp(&other.log_mag),
        }
    }
}

impl Default for ScaledReal {
    fn default() -> Self {
        Self::ZERO
    }
}

impl From<f64> for ScaledReal {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

impl Neg for ScaledReal {
    type Output = Self;
    fn neg(self) -> Self {
        Self { sign: -self.sign, log_mag: self.log_mag }
    }
}

impl Mul for ScaledReal {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.sign == 0 || rhs.sign == 0 {
            Self::ZERO
        } else {
            Self { sign: self.sign * rhs.sign, log_mag: self.log_mag + rhs.log_mag }
        }
    }
}

impl Div for ScaledReal {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        assert!(rhs.sign != 0, "ScaledReal division by zero");
        if self.sign == 0 {
            Self::ZERO
        } else {
            Self { sign: self.sign * rhs.sign, log_mag: self.log_mag - rhs.log_mag }
        }
    }
}

impl Add for ScaledReal {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if self.sign == 0 {
            return rhs;
        }
        if rhs.sign == 0 {
            return self;
        }
        let (big, small) = if self.log_mag >= rhs.log_mag { (self, rhs) } else { (rhs, self) };
        let r = (small.log_mag - big.log_mag).exp();
        let m = if big.sign == small.sign { 1.0 + r } else { 1.0 - r };
        if m == 0.0 {
            return Self::ZERO;
        }
        Self { sign: big.sign, log_mag: big.log_mag + m.ln() }
    }
}

impl Sub for ScaledReal {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl fmt::Display for ScaledReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            s => {
                let v = self.to_f64();
                if v.is_finite() && v != 0.0 {
                    write!(f, "{v}")
                } else {
                    write!(f, "{}exp({})", if s < 0 { "-" } else { "" }, self.log_mag)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_handling() {
        assert!(ScaledReal::from_f64(0.0).is_zero());
        assert_eq!(ScaledReal::from_f64(0.0).to_f64(), 0.0);
        assert_eq!((ScaledReal::ZERO + ScaledReal::from_f64(2.0)).to_f64(), 2.0);
        assert!((ScaledReal::from_f64(3.0) - ScaledReal::from_f64(3.0)).is_zero());
    }

    #[test]
    fn beyond_f64_range() {
        let big = ScaledReal::new(1, 1000.0);
        let prod = big * big;
        assert_eq!(prod.log_mag, 2000.0);
        assert_eq!((prod / big / big).to_f64(), 1.0);
        assert!(big.to_f64().is_infinite());
    }

    proptest! {
        #[test]
        fn roundtrip(x in -1e300f64..1e300) {
            let y = ScaledReal::from_f64(x).to_f64();
            prop_assert!((y - x).abs() <= 4.0 * f64::EPSILON * (1.0 + x.abs().ln().abs()) * x.abs());
        }

        #[test]
        fn arithmetic_matches_f64(a in -1e6f64..1e6, b in -1e6f64..1e6) {
            let (sa, sb) = (ScaledReal::from_f64(a), ScaledReal::from_f64(b));
            let tol = 1e-13 * (a.abs() + b.abs()).max(1e-300);
            prop_assert!(((sa + sb).to_f64() - (a + b)).abs() <= tol);
            prop_assert!(((sa - sb).to_f64() - (a - b)).abs() <= tol);
            prop_assert!(((sa * sb).to_f64() - a * b).abs() <= 1e-13 * (a * b).abs());
        }
    }
}
