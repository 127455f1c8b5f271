use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

/// Scalar field used by every evaluator in the crate.
///
/// Two implementations exist: `f64` and [`super::DoubleDouble`]. Functions of
/// the argument in *turns* (`cis_turns`) reduce exactly before scaling by 2π,
/// which is where most of the accuracy in the lattice sums comes from.
pub trait Real:
    Copy
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
{
    const NAME: &'static str;
    /// Unit roundoff, as an f64.
    const EPSILON: f64;

    fn from_f64(x: f64) -> Self;
    /// Value of `hi + lo` where `lo` is a correction below the ulp of `hi`.
    fn from_parts(hi: f64, lo: f64) -> Self;
    fn to_f64(self) -> f64;
    fn pi() -> Self;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    /// `(sin x, cos x)` for `|x| <= pi/4`.
    fn sin_cos_small(self) -> (Self, Self);
    fn floor(self) -> Self;
    fn is_finite(self) -> bool;

    fn from_i64(n: i64) -> Self {
        Self::from_i128(n as i128)
    }

    fn from_i128(n: i128) -> Self {
        let hi = n as f64;
        let lo = (n - hi as i128) as f64;
        Self::from_parts(hi, lo)
    }

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn one() -> Self {
        Self::from_f64(1.0)
    }

    fn two_pi() -> Self {
        Self::pi() * Self::from_f64(2.0)
    }

    fn abs(self) -> Self {
        if self < Self::zero() {
            -self
        } else {
            self
        }
    }

    fn ceil(self) -> Self {
        -(-self).floor()
    }

    /// Nearest integer, ties away from zero.
    fn round(self) -> Self {
        if self < Self::zero() {
            -((-self) + Self::from_f64(0.5)).floor()
        } else {
            (self + Self::from_f64(0.5)).floor()
        }
    }

    fn to_i64(self) -> i64 {
        let f = self.floor();
        let hi = f.to_f64();
        let rest = (f - Self::from_f64(hi)).to_f64();
        hi as i64 + rest as i64
    }

    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    fn powi(self, n: i32) -> Self {
        let mut base = if n < 0 { Self::one() / self } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// `(cos 2πt, sin 2πt)`; `t` is reduced exactly before scaling.
    fn cis_turns(self) -> (Self, Self) {
        let t = self - self.round();
        let k4 = (t * Self::from_f64(4.0)).round();
        let r = t - k4 / Self::from_f64(4.0);
        let (s, c) = (r * Self::two_pi()).sin_cos_small();
        match (k4.to_f64() as i64).rem_euclid(4) {
            0 => (c, s),
            1 => (-s, c),
            2 => (-c, -s),
            _ => (s, -c),
        }
    }

    /// `(sin x, cos x)` for any finite x.
    fn sin_cos(self) -> (Self, Self) {
        let (c, s) = (self / Self::two_pi()).cis_turns();
        (s, c)
    }
}

impl Real for f64 {
    const NAME: &'static str = "double";
    const EPSILON: f64 = f64::EPSILON / 2.0;

    fn from_f64(x: f64) -> Self {
        x
    }
    fn from_parts(hi: f64, lo: f64) -> Self {
        hi + lo
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn sin_cos_small(self) -> (Self, Self) {
        f64::sin_cos(self)
    }
    fn floor(self) -> Self {
        f64::floor(self)
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
    fn round(self) -> Self {
        f64::round(self)
    }
    fn to_i64(self) -> i64 {
        f64::floor(self) as i64
    }
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
    fn sin_cos(self) -> (Self, Self) {
        f64::sin_cos(self)
    }
}
