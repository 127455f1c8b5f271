//! Unevaluated sum of two doubles, about 106 significant bits.
//!
//! The algorithms follow the usual QD-library constructions: error-free
//! `two_sum` / `two_prod` (fused multiply-add or Dekker splitting), Newton refinement for
//! `sqrt` and `ln`, and a squared-down Taylor series for `exp`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use super::real::Real;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[cfg(target_feature = "fma")]
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

// Without hardware FMA, `mul_add` is a slow libm call; Dekker's splitting is
// exact as long as nothing overflows.
#[cfg(not(target_feature = "fma"))]
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    #[inline]
    fn split(a: f64) -> (f64, f64) {
        const SPLITTER: f64 = 134217729.0; // 2^27 + 1
        if a.abs() > 6.69692879491417e299 {
            let t = SPLITTER * (a * 3.7252902984619140625e-09);
            let hi = t - (t - a * 3.7252902984619140625e-09);
            let lo = a * 3.7252902984619140625e-09 - hi;
            (hi * 268435456.0, lo * 268435456.0)
        } else {
            let t = SPLITTER * a;
            let hi = t - (t - a);
            (hi, a - hi)
        }
    }
    let p = a * b;
    if !p.is_finite() {
        return (p, 0.0);
    }
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    (p, ((ah * bh - p) + ah * bl + al * bh) + al * bl)
}

const LN2: DoubleDouble = DoubleDouble { hi: 6.931471805599452862e-1, lo: 2.319046813846299558e-17 };
const PI: DoubleDouble = DoubleDouble { hi: 3.141592653589793116e0, lo: 1.224646799147353207e-16 };

impl DoubleDouble {
    pub const fn new(hi: f64, lo: f64) -> Self {
        DoubleDouble { hi, lo }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    fn add_f64(self, b: f64) -> Self {
        let (s1, s2) = two_sum(self.hi, b);
        let (hi, lo) = quick_two_sum(s1, s2 + self.lo);
        DoubleDouble { hi, lo }
    }

    fn mul_f64(self, b: f64) -> Self {
        let (p1, p2) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p1, p2 + self.lo * b);
        DoubleDouble { hi, lo }
    }

    fn ldexp(self, k: i32) -> Self {
        let f = 2f64.powi(k);
        DoubleDouble { hi: self.hi * f, lo: self.lo * f }
    }

    fn sqr(self) -> Self {
        self * self
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            o => o,
        }
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == 0.0 {
            write!(f, "{}", self.hi)
        } else {
            write!(f, "{}{:+e}", self.hi, self.lo)
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        DoubleDouble { hi, lo }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        DoubleDouble { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let (p1, p2) = two_prod(self.hi, b.hi);
        let p2 = p2 + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p1, p2);
        DoubleDouble { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        DoubleDouble { hi, lo }.add_f64(q3)
    }
}

macro_rules! assign_op {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for DoubleDouble {
            fn $m(&mut self, b: Self) {
                *self = *self $op b;
            }
        }
    };
}
assign_op!(AddAssign, add_assign, +);
assign_op!(SubAssign, sub_assign, -);
assign_op!(MulAssign, mul_assign, *);
assign_op!(DivAssign, div_assign, /);

impl Real for DoubleDouble {
    const NAME: &'static str = "extended";
    const EPSILON: f64 = 4.93038065763132e-32;

    fn from_f64(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    fn from_parts(hi: f64, lo: f64) -> Self {
        let (hi, lo) = two_sum(hi, lo);
        DoubleDouble { hi, lo }
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    fn pi() -> Self {
        PI
    }

    fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return DoubleDouble { hi: self.hi.sqrt(), lo: 0.0 };
        }
        let x = 1.0 / self.hi.sqrt();
        let ax = self.hi * x;
        let corr = (self - DoubleDouble::from_f64(ax).sqr()).hi * (x * 0.5);
        DoubleDouble::from_f64(ax).add_f64(corr)
    }

    fn exp(self) -> Self {
        if self.hi > 709.0 {
            return DoubleDouble::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return DoubleDouble::from_f64(0.0);
        }
        let k = (self.hi / LN2.hi).round();
        let r = (self - LN2.mul_f64(k)).ldexp(-10);
        // expm1(r) by Taylor; |r| < 3.4e-4 so 12 terms suffice.
        let mut term = r;
        let mut s = r;
        for n in 2..=14 {
            term = term * r / DoubleDouble::from_f64(n as f64);
            s += term;
            if term.hi.abs() < 1e-36 {
                break;
            }
        }
        for _ in 0..10 {
            s = s.mul_f64(2.0) + s.sqr();
        }
        (s.add_f64(1.0)).ldexp(k as i32)
    }

    fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return DoubleDouble::from_f64(f64::NAN);
        }
        let mut y = DoubleDouble::from_f64(self.hi.ln());
        for _ in 0..2 {
            y = y + self * (-y).exp() - DoubleDouble::from_f64(1.0);
        }
        y
    }

    fn sin_cos_small(self) -> (Self, Self) {
        if self.hi == 0.0 {
            return (self, DoubleDouble::from_f64(1.0));
        }
        let x2 = self.sqr();
        let mut s = self;
        let mut c = DoubleDouble::from_f64(1.0);
        let mut ts = self;
        let mut tc = DoubleDouble::from_f64(1.0);
        let mut n = 1.0;
        loop {
            tc = -(tc * x2) / DoubleDouble::from_f64(n * (n + 1.0));
            c += tc;
            ts = -(ts * x2) / DoubleDouble::from_f64((n + 1.0) * (n + 2.0));
            s += ts;
            n += 2.0;
            if ts.hi.abs() < 1e-34 * s.hi.abs().max(1e-300) && tc.hi.abs() < 1e-34 {
                break;
            }
        }
        (s, c)
    }

    fn floor(self) -> Self {
        let fh = self.hi.floor();
        if fh == self.hi {
            let (hi, lo) = quick_two_sum(fh, self.lo.floor());
            DoubleDouble { hi, lo }
        } else {
            DoubleDouble { hi: fh, lo: 0.0 }
        }
    }

    fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dd(x: f64) -> DoubleDouble {
        DoubleDouble::from_f64(x)
    }

    #[test]
    fn arithmetic_is_double_length() {
        let third = dd(1.0) / dd(3.0);
        let back = third * dd(3.0) - dd(1.0);
        assert!(back.to_f64().abs() < 1e-31);
        let s = dd(2.0).sqrt();
        assert!((s * s - dd(2.0)).to_f64().abs() < 1e-31);
    }

    #[test]
    fn transcendental_constants() {
        // ln 2 and e to 32 digits, split as hi + lo by hand.
        let ln2 = dd(2.0).ln();
        assert!((ln2 - LN2).to_f64().abs() < 1e-31, "{ln2}");
        let e = dd(1.0).exp();
        let e_ref = DoubleDouble::new(2.718281828459045091, 1.445646891729250158e-16);
        assert!((e - e_ref).to_f64().abs() < 1e-30, "{e}");
        assert!((dd(2.0).exp().ln() - dd(2.0)).to_f64().abs() < 1e-30);
    }

    #[test]
    fn turns_are_exact_on_rational_angles() {
        let (c, s) = (dd(1.0) / dd(12.0)).cis_turns();
        assert!((c * c + s * s - dd(1.0)).to_f64().abs() < 1e-31);
        assert!((s - dd(0.5)).to_f64().abs() < 1e-31);
        let (c, _) = (dd(1.0) / dd(8.0)).cis_turns();
        assert!((c * c - dd(0.5)).to_f64().abs() < 1e-31);
        let (c, s) = dd(0.75).cis_turns();
        assert!(c.to_f64().abs() < 1e-31 && (s + dd(1.0)).to_f64().abs() < 1e-31);
    }

    #[test]
    fn floor_and_round() {
        let x = DoubleDouble::from_parts(3.0, -1e-20);
        assert_eq!(x.floor().to_f64(), 2.0);
        assert_eq!(x.round().to_f64(), 3.0);
        assert_eq!(dd(-2.5).round().to_f64(), -3.0);
        assert_eq!(x.to_i64(), 2);
    }
}
