//! SL₂(ℤ) matrices acting on τ-like points, rationals and character matrices.

use std::fmt;
use std::ops::Mul;

use num_rational::Ratio;

use crate::error::{domain, Error, Result};
use crate::numeric::{Complex, Real};
use crate::quadratic::QuadraticNumber;
use crate::thetakron::CharVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct UnimodularMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl UnimodularMatrix {
    pub const I: UnimodularMatrix = UnimodularMatrix { a: 1, b: 0, c: 0, d: 1 };
    pub const T: UnimodularMatrix = UnimodularMatrix { a: 1, b: 1, c: 0, d: 1 };
    pub const T_INV: UnimodularMatrix = UnimodularMatrix { a: 1, b: -1, c: 0, d: 1 };
    pub const S: UnimodularMatrix = UnimodularMatrix { a: 0, b: -1, c: 1, d: 0 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = a as i128 * d as i128 - b as i128 * c as i128;
        if det != 1 {
            return domain(format!("({a},{b};{c},{d}) has determinant {det}, not 1"));
        }
        Ok(UnimodularMatrix { a, b, c, d })
    }

    pub fn neg(self) -> Self {
        UnimodularMatrix { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }

    pub fn inverse(self) -> Self {
        UnimodularMatrix { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// j(V; z) = cz + d.
    pub fn j<R: Real>(self, z: Complex<R>) -> Complex<R> {
        z * R::from_i64(self.c) + R::from_i64(self.d)
    }
}

impl Mul for UnimodularMatrix {
    type Output = UnimodularMatrix;
    fn mul(self, o: Self) -> Self {
        UnimodularMatrix {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

impl fmt::Display for UnimodularMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{};{},{})", self.a, self.b, self.c, self.d)
    }
}

/// M = (x⃗; y⃗), the matrix of characters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CharMatrix<R> {
    pub x: CharVector<R>,
    pub y: CharVector<R>,
}

impl<R: Real> CharMatrix<R> {
    pub fn new(x: CharVector<R>, y: CharVector<R>) -> Self {
        CharMatrix { x, y }
    }

    /// From `[x', x, y', y]`.
    pub fn from_f64(v: [f64; 4]) -> Self {
        CharMatrix::new(CharVector::from_f64(v[0], v[1]), CharVector::from_f64(v[2], v[3]))
    }

    pub fn neg(self) -> Self {
        CharMatrix::new(-self.x, -self.y)
    }

    pub fn to_f64(self) -> [f64; 4] {
        [self.x.xp.to_f64(), self.x.x.to_f64(), self.y.xp.to_f64(), self.y.x.to_f64()]
    }
}

pub fn mobius_with_factor<R: Real>(v: UnimodularMatrix, z: Complex<R>) -> Result<(Complex<R>, Complex<R>)> {
    let j = v.j(z);
    if j.abs().to_f64() == 0.0 {
        return Err(Error::Pole(format!("j({v}; z) = 0")));
    }
    let num = z * R::from_i64(v.a) + R::from_i64(v.b);
    Ok((num / j, j))
}

pub fn mobius_quadratic(v: UnimodularMatrix, z: &QuadraticNumber) -> Result<(QuadraticNumber, QuadraticNumber)> {
    let j = z.mul_int(v.c)?.add_int(v.d)?;
    if j.is_zero() {
        return Err(Error::Pole(format!("j({v}; z) = 0")));
    }
    let num = z.mul_int(v.a)?.add_int(v.b)?;
    Ok((num.div(&j)?, j))
}

/// (n(r), d(r)) with gcd 1 and d(r) ≥ 1.
pub fn rational_parts(r: Ratio<i64>) -> (i64, i64) {
    let r = Ratio::new(*r.numer(), *r.denom());
    (*r.numer(), *r.denom())
}

/// (n(Vr), d(Vr), sgn j(V; r)).
pub fn act_rational(v: UnimodularMatrix, r: Ratio<i64>) -> Result<(i64, i64, i64)> {
    let (n, d) = rational_parts(r);
    let jn = v.c * n + v.d * d;
    if jn == 0 {
        return Err(Error::Pole(format!("j({v}; {r}) = 0")));
    }
    let s = jn.signum();
    let (nn, dd) = (s * (v.a * n + v.b * d), s * jn);
    debug_assert!(dd >= 1);
    Ok((nn, dd, s))
}

/// j(V; r) as an exact rational.
pub fn j_rational(v: UnimodularMatrix, r: Ratio<i64>) -> Ratio<i64> {
    r * v.c + v.d
}

pub fn act_char<R: Real>(v: UnimodularMatrix, m: CharMatrix<R>) -> CharMatrix<R> {
    let f = |k: i64| R::from_i64(k);
    CharMatrix::new(m.x * f(v.a) + m.y * f(v.b), m.x * f(v.c) + m.y * f(v.d))
}

/// M ∈ M₂(V): y⃗ ∉ ℤ² and c x⃗ + d y⃗ ∉ ℤ².
pub fn admissible<R: Real>(v: UnimodularMatrix, m: CharMatrix<R>) -> bool {
    let low = m.x * R::from_i64(v.c) + m.y * R::from_i64(v.d);
    !m.y.is_integral() && !low.is_integral()
}

/// M ∈ M₂(r): x⃗ ∉ ℤ² and d(r) x⃗ − n(r) y⃗ ∉ ℤ².
pub fn admissible_r<R: Real>(r: Ratio<i64>, m: CharMatrix<R>) -> bool {
    let (n, d) = rational_parts(r);
    let w = m.x * R::from_i64(d) - m.y * R::from_i64(n);
    !m.x.is_integral() && !w.is_integral()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    T,
    TInv,
    S,
}

impl Generator {
    pub fn matrix(self) -> UnimodularMatrix {
        match self {
            Generator::T => UnimodularMatrix::T,
            Generator::TInv => UnimodularMatrix::T_INV,
            Generator::S => UnimodularMatrix::S,
        }
    }
}

/// Word `[V_1, ..., V_n]` with `V = V_n ··· V_1`, i.e. `word[0]` acts first.
///
/// Euclid on the first column: left multiplication by T^{-q} and S^{-1}
/// until c = 0, leaving ±T^k. A leftover −I is written as one S² block.
/// The length is Σ|q_i| + (number of S) + |k| (+2 for the sign).
pub fn decompose_generators(v: UnimodularMatrix) -> Vec<Generator> {
    // product[0] is the leftmost factor.
    let mut product: Vec<Generator> = Vec::new();
    let mut m = v;
    while m.c != 0 {
        let q = m.a.div_euclid(m.c);
        if q != 0 {
            let g = if q > 0 { Generator::T } else { Generator::TInv };
            product.extend(std::iter::repeat(g).take(q.unsigned_abs() as usize));
            m = UnimodularMatrix { a: m.a - q * m.c, b: m.b - q * m.d, c: m.c, d: m.d };
        }
        m = UnimodularMatrix::S.inverse() * m;
        product.push(Generator::S);
    }
    // m = sign · T^k with sign = m.a
    let k = m.b * m.a;
    let g = if k > 0 { Generator::T } else { Generator::TInv };
    product.extend(std::iter::repeat(g).take(k.unsigned_abs() as usize));
    if m.a < 0 {
        product.extend([Generator::S, Generator::S]);
    }
    product.reverse();
    product
}

pub fn recompose(word: &[Generator]) -> UnimodularMatrix {
    word.iter().fold(UnimodularMatrix::I, |acc, g| g.matrix() * acc)
}
