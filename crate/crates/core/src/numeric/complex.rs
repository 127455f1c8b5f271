use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Serialize, Serializer};

use super::real::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Complex<R> {
    pub re: R,
    pub im: R,
}

pub type ComplexValue<R = f64> = Complex<R>;

impl<R: Real> Complex<R> {
    pub fn new(re: R, im: R) -> Self {
        Complex { re, im }
    }

    pub fn from_f64(re: f64, im: f64) -> Self {
        Complex::new(R::from_f64(re), R::from_f64(im))
    }

    pub fn real(re: R) -> Self {
        Complex::new(re, R::zero())
    }

    pub fn zero() -> Self {
        Complex::real(R::zero())
    }

    pub fn one() -> Self {
        Complex::real(R::one())
    }

    pub fn i() -> Self {
        Complex::new(R::zero(), R::one())
    }

    /// `2πi`.
    pub fn two_pi_i() -> Self {
        Complex::new(R::zero(), R::two_pi())
    }

    pub fn conj(self) -> Self {
        Complex::new(self.re, -self.im)
    }

    pub fn norm_sqr(self) -> R {
        self.re * self.re + self.im * self.im
    }

    pub fn abs(self) -> R {
        let (a, b) = (self.re.abs(), self.im.abs());
        let (big, small) = if a > b { (a, b) } else { (b, a) };
        if big == R::zero() {
            // small is 0 or NaN here
            return big + small;
        }
        let t = small / big;
        big * (R::one() + t * t).sqrt()
    }

    pub fn scale(self, k: R) -> Self {
        Complex::new(self.re * k, self.im * k)
    }

    pub fn inv(self) -> Self {
        Complex::one() / self
    }

    pub fn powi(self, n: i32) -> Self {
        let mut base = if n < 0 { self.inv() } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Complex::one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn to_f64(self) -> Complex<f64> {
        Complex::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn from_c64(z: Complex<f64>) -> Self {
        Complex::from_f64(z.re, z.im)
    }
}

impl<R: Real> fmt::Display for Complex<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im = self.im.to_f64();
        write!(f, "{}{}{}i", self.re.to_f64(), if im < 0.0 { "-" } else { "+" }, im.abs())
    }
}

impl<R: Real> Serialize for Complex<R> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.re.to_f64(), self.im.to_f64()].serialize(s)
    }
}

impl<R: Real> Add for Complex<R> {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        Complex::new(self.re + b.re, self.im + b.im)
    }
}

impl<R: Real> Sub for Complex<R> {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        Complex::new(self.re - b.re, self.im - b.im)
    }
}

impl<R: Real> Mul for Complex<R> {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        Complex::new(self.re * b.re - self.im * b.im, self.re * b.im + self.im * b.re)
    }
}

impl<R: Real> Div for Complex<R> {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        // Smith's algorithm keeps the intermediate products in range.
        if b.re.abs() >= b.im.abs() {
            let t = b.im / b.re;
            let rden = R::one() / (b.re + b.im * t);
            Complex::new((self.re + self.im * t) * rden, (self.im - self.re * t) * rden)
        } else {
            let t = b.re / b.im;
            let rden = R::one() / (b.re * t + b.im);
            Complex::new((self.re * t + self.im) * rden, (self.im * t - self.re) * rden)
        }
    }
}

impl<R: Real> Neg for Complex<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Complex::new(-self.re, -self.im)
    }
}

impl<R: Real> Add<R> for Complex<R> {
    type Output = Self;
    fn add(self, b: R) -> Self {
        Complex::new(self.re + b, self.im)
    }
}

impl<R: Real> Sub<R> for Complex<R> {
    type Output = Self;
    fn sub(self, b: R) -> Self {
        Complex::new(self.re - b, self.im)
    }
}

impl<R: Real> Mul<R> for Complex<R> {
    type Output = Self;
    fn mul(self, b: R) -> Self {
        self.scale(b)
    }
}

impl<R: Real> Div<R> for Complex<R> {
    type Output = Self;
    fn div(self, b: R) -> Self {
        Complex::new(self.re / b, self.im / b)
    }
}

macro_rules! assign_op {
    ($tr:ident, $m:ident, $op:tt, $rhs:ty) => {
        impl<R: Real> $tr<$rhs> for Complex<R> {
            fn $m(&mut self, b: $rhs) {
                *self = *self $op b;
            }
        }
    };
}
assign_op!(AddAssign, add_assign, +, Complex<R>);
assign_op!(SubAssign, sub_assign, -, Complex<R>);
assign_op!(MulAssign, mul_assign, *, Complex<R>);
assign_op!(DivAssign, div_assign, /, Complex<R>);
assign_op!(MulAssign, mul_assign, *, R);
assign_op!(DivAssign, div_assign, /, R);
