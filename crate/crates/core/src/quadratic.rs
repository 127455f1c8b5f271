//! Exact arithmetic in ℚ(√D) with i128 coefficients.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;

use crate::error::{domain, Error, Result};
use crate::numeric::Real;

/// (p + q√D)/den, normalized with den > 0 and gcd(p, q, den) = 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticNumber {
    p: i128,
    q: i128,
    d: i128,
    den: i128,
}

fn overflow() -> Error {
    Error::Capacity("quadratic coefficient overflow".into())
}

fn ck(x: Option<i128>) -> Result<i128> {
    x.ok_or_else(overflow)
}

fn is_squarefree(d: i128) -> bool {
    let mut k: i128 = 2;
    while k * k <= d {
        if d % (k * k) == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// (a + b√D)/den as a real, choosing the form without cancellation.
fn surd_to_real<R: Real>(a: i128, b: i128, d: i128, den: i128) -> R {
    let root = R::from_i128(d).sqrt();
    let rden = R::from_i128(den);
    if a == 0 || b == 0 || (a > 0) == (b > 0) {
        return (R::from_i128(a) + R::from_i128(b) * root) / rden;
    }
    // a + b√D = (a² − b²D)/(a − b√D); the denominator has no cancellation.
    match a.checked_mul(a).zip(b.checked_mul(b).and_then(|bb| bb.checked_mul(d))) {
        Some((aa, bbd)) => {
            let num = R::from_i128(aa - bbd);
            num / ((R::from_i128(a) - R::from_i128(b) * root) * rden)
        }
        None => (R::from_i128(a) + R::from_i128(b) * root) / rden,
    }
}

impl QuadraticNumber {
    pub fn new(p: i128, q: i128, d: i128, den: i128) -> Result<Self> {
        if d <= 1 || !is_squarefree(d) {
            return domain(format!("radicand {d} is not squarefree > 1"));
        }
        if den == 0 {
            return domain("zero denominator");
        }
        let s = den.signum();
        let g = p.gcd(&q).gcd(&den);
        Ok(QuadraticNumber { p: s * p / g, q: s * q / g, d, den: s * den / g })
    }

    /// √D.
    pub fn sqrt(d: i128) -> Result<Self> {
        QuadraticNumber::new(0, 1, d, 1)
    }

    /// (1 + √5)/2.
    pub fn golden() -> Self {
        QuadraticNumber { p: 1, q: 1, d: 5, den: 2 }
    }

    pub fn rational(p: i128, den: i128, d: i128) -> Result<Self> {
        QuadraticNumber::new(p, 0, d, den)
    }

    pub fn parts(&self) -> (i128, i128, i128, i128) {
        (self.p, self.q, self.d, self.den)
    }

    pub fn radicand(&self) -> i128 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.p == 0 && self.q == 0
    }

    pub fn is_rational(&self) -> bool {
        self.q == 0
    }

    fn same_field(&self, o: &Self) -> Result<()> {
        if self.d != o.d {
            return domain(format!("mixed radicands {} and {}", self.d, o.d));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.same_field(o)?;
        let p = ck(ck(self.p.checked_mul(o.den))?.checked_add(ck(o.p.checked_mul(self.den))?))?;
        let q = ck(ck(self.q.checked_mul(o.den))?.checked_add(ck(o.q.checked_mul(self.den))?))?;
        QuadraticNumber::new(p, q, self.d, ck(self.den.checked_mul(o.den))?)
    }

    pub fn neg(&self) -> Self {
        QuadraticNumber { p: -self.p, q: -self.q, ..*self }
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.same_field(o)?;
        let pp = ck(self.p.checked_mul(o.p))?;
        let qq = ck(ck(self.q.checked_mul(o.q))?.checked_mul(self.d))?;
        let pq = ck(self.p.checked_mul(o.q))?;
        let qp = ck(self.q.checked_mul(o.p))?;
        QuadraticNumber::new(
            ck(pp.checked_add(qq))?,
            ck(pq.checked_add(qp))?,
            self.d,
            ck(self.den.checked_mul(o.den))?,
        )
    }

    pub fn conj(&self) -> Self {
        QuadraticNumber { q: -self.q, ..*self }
    }

    /// Norm as an exact fraction (numerator, denominator).
    pub fn norm(&self) -> Result<(i128, i128)> {
        let n = ck(ck(self.p.checked_mul(self.p))?.checked_sub(ck(ck(self.q.checked_mul(self.q))?.checked_mul(self.d))?))?;
        let dd = ck(self.den.checked_mul(self.den))?;
        let g = n.gcd(&dd);
        Ok((n / g, dd / g))
    }

    /// Trace as an exact fraction (numerator, denominator).
    pub fn trace(&self) -> (i128, i128) {
        let (n, d) = (2 * self.p, self.den);
        let g = n.gcd(&d);
        (n / g, d / g)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return domain("division by zero in quadratic field");
        }
        // 1/α = den·conj(α_num)/(p² − q²D)
        let n = ck(ck(self.p.checked_mul(self.p))?.checked_sub(ck(ck(self.q.checked_mul(self.q))?.checked_mul(self.d))?))?;
        QuadraticNumber::new(ck(self.den.checked_mul(self.p))?, ck(self.den.checked_mul(-self.q))?, self.d, n)
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        self.same_field(o)?;
        self.mul(&o.inv()?)
    }

    pub fn mul_int(&self, k: i64) -> Result<Self> {
        let k = k as i128;
        QuadraticNumber::new(ck(self.p.checked_mul(k))?, ck(self.q.checked_mul(k))?, self.d, self.den)
    }

    pub fn add_int(&self, k: i64) -> Result<Self> {
        let p = ck(self.p.checked_add(ck((k as i128).checked_mul(self.den))?))?;
        QuadraticNumber::new(p, self.q, self.d, self.den)
    }

    /// Multiply by the fraction num/den.
    pub fn mul_frac(&self, num: i128, den: i128) -> Result<Self> {
        QuadraticNumber::new(
            ck(self.p.checked_mul(num))?,
            ck(self.q.checked_mul(num))?,
            self.d,
            ck(self.den.checked_mul(den))?,
        )
    }

    pub fn powi(&self, n: i32) -> Result<Self> {
        let base = if n < 0 { self.inv()? } else { *self };
        let mut acc = QuadraticNumber::new(1, 0, self.d, 1)?;
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }

    pub fn to_real<R: Real>(&self) -> R {
        surd_to_real(self.p, self.q, self.d, self.den)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_real::<f64>()
    }

    /// ([[nα]], <<nα>>) with the remainder computed from exact integers,
    /// so it keeps full relative accuracy however large n is.
    pub fn split_multiple<R: Real>(&self, n: i64) -> (i64, R) {
        let n = n as i128;
        let approx = (n as f64) * self.to_f64();
        let mut k = approx.round() as i128;
        loop {
            let a = n * self.p - k * self.den;
            let b = n * self.q;
            let f: R = surd_to_real(a, b, self.d, self.den);
            let ff = f.to_f64();
            if ff > 0.5 {
                k += 1;
            } else if ff <= -0.5 {
                k -= 1;
            } else {
                return (k as i64, f);
            }
        }
    }

    /// First `count` partial quotients, exact.
    pub fn cf_expansion(&self, count: usize) -> Result<Vec<i128>> {
        let mut st = CfState::new(self)?;
        Ok((0..count).map(|_| st.next_quotient()).collect())
    }

    /// C with |αl + k| > 1/(C|l|) for all integers k and l ≠ 0.
    ///
    /// A convergent denominator q_n satisfies |q_n α − p_n| > 1/((a_{n+1}+2) q_n),
    /// and convergents are best approximations, so the largest partial quotient
    /// a_n (n ≥ 1) over preperiod and period bounds everything. The result is
    /// doubled for margin.
    pub fn approx_constant(&self) -> Result<f64> {
        let mut st = CfState::new(self)?;
        st.next_quotient();
        let mut seen: HashMap<(i128, i128), usize> = HashMap::new();
        let mut amax: i128 = 0;
        for i in 0..100_000 {
            if seen.insert((st.p, st.q), i).is_some() {
                return Ok(2.0 * (amax as f64 + 2.0));
            }
            amax = amax.max(st.next_quotient());
        }
        Err(Error::Capacity("continued fraction period not found".into()))
    }
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}{:+}√{})/{}", self.p, self.q, self.d, self.den)
    }
}

/// Complete quotient (P + √N)/Q with Q | N − P².
struct CfState {
    p: i128,
    q: i128,
    n: i128,
    root: i128,
}

impl CfState {
    fn new(a: &QuadraticNumber) -> Result<Self> {
        if a.q == 0 {
            return domain("continued fraction of a rational number requested");
        }
        let s = a.q.signum();
        let (mut p, mut q) = (s * a.p, s * a.den);
        let mut n = ck(ck(a.q.checked_mul(a.q))?.checked_mul(a.d))?;
        if (n - p * p) % q != 0 {
            let aq = q.abs();
            p = ck(p.checked_mul(aq))?;
            n = ck(n.checked_mul(ck(q.checked_mul(q))?))?;
            q = ck(q.checked_mul(aq))?;
        }
        Ok(CfState { p, q, n, root: n.isqrt() })
    }

    fn next_quotient(&mut self) -> i128 {
        let a = if self.q > 0 {
            (self.p + self.root).div_euclid(self.q)
        } else {
            -((self.p + self.root).div_euclid(-self.q) + 1)
        };
        let p = a * self.q - self.p;
        self.q = (self.n - p * p) / self.q;
        self.p = p;
        a
    }
}

/// Minimal (a, b) with a, b > 0 and a² − cb² = ±4, together with the sign.
pub fn pell_4(c: i128) -> Result<(i128, i128, i32)> {
    pell_4_capped(c, 1_000_000)
}

pub fn pell_4_capped(c: i128, cap: i128) -> Result<(i128, i128, i32)> {
    if c <= 1 || !is_squarefree(c) {
        return domain(format!("{c} is not squarefree > 1"));
    }
    for b in 1..=cap {
        let cb2 = ck(c.checked_mul(b * b))?;
        for (t, eps) in [(cb2 - 4, -1), (cb2 + 4, 1)] {
            if t > 0 {
                let a = t.isqrt();
                if a * a == t {
                    return Ok((a, b, eps));
                }
            }
        }
    }
    Err(Error::Capacity(format!("no solution of a² − {c}b² = ±4 with b ≤ {cap}")))
}
