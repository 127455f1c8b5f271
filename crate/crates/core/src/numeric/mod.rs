//! Scalars, complex numbers, angle reduction and series bookkeeping.

mod complex;
mod dd;
mod real;

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

pub use complex::{Complex, ComplexValue};
pub use dd::DoubleDouble;
pub use real::Real;

use crate::classical;
use crate::error::{domain, Error, Result};

/// Absolute tolerance for deciding integrality of characters.
pub const INT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    Double,
    Extended,
}

impl std::str::FromStr for Precision {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "double" | "" => Ok(Precision::Double),
            "extended" => Ok(Precision::Extended),
            other => domain(format!("unknown precision mode {other:?}")),
        }
    }
}

static PRECISION: OnceLock<Precision> = OnceLock::new();

/// Process-wide precision mode. Read from `ELLCOT_PRECISION` on first use
/// unless [`set_precision`] ran earlier.
pub fn precision() -> Precision {
    *PRECISION.get_or_init(|| {
        std::env::var("ELLCOT_PRECISION")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(Precision::Double)
    })
}

/// Fix the mode. Fails if a different mode is already in force.
pub fn set_precision(p: Precision) -> Result<()> {
    let got = *PRECISION.get_or_init(|| p);
    if got == p {
        Ok(())
    } else {
        domain(format!("precision already fixed to {got:?}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TruncationPolicy {
    pub max_index: usize,
    pub tail_tol: f64,
    pub theta_terms: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy { max_index: 200, tail_tol: 1e-18, theta_terms: 4 }
    }
}

impl TruncationPolicy {
    /// Defaults with `tail_tol` matched to the unit roundoff of `R`.
    pub fn for_real<R: Real>() -> Self {
        TruncationPolicy { tail_tol: R::EPSILON * 0.01, ..Default::default() }
    }

    pub fn with_max_index(mut self, n: usize) -> Self {
        self.max_index = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_index < 1 {
            return domain("max_index must be at least 1");
        }
        if !(self.tail_tol > 0.0) {
            return domain("tail_tol must be positive");
        }
        if self.theta_terms < 1 {
            return domain("theta_terms must be at least 1");
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesResult<R> {
    pub value: Complex<R>,
    pub est_tail: f64,
    pub terms_used: usize,
}

/// `e(t) = exp(2πit)` for real t.
pub fn e_real<R: Real>(t: R) -> Complex<R> {
    let (c, s) = t.cis_turns();
    Complex::new(c, s)
}

/// `e(z) = exp(2πiz)`.
pub fn cexp2pii<R: Real>(z: Complex<R>) -> Result<Complex<R>> {
    if !z.is_finite() {
        return domain("e(z) of a non-finite argument");
    }
    let m = -R::two_pi() * z.im;
    if m.to_f64() > 700.0 {
        return Err(Error::Range(format!("e(z) overflows at Im z = {}", z.im)));
    }
    Ok(e_real(z.re) * m.exp())
}

/// `([[x]], <<x>>)`: nearest integer and centered remainder in (−1/2, 1/2].
pub fn angle_split<R: Real>(x: R) -> (i64, R) {
    let n = (x - R::from_f64(0.5)).ceil();
    (n.to_i64(), x - n)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FracParts<R> {
    /// `<x>` in (0, 1].
    pub angle: R,
    /// `{x}` in [0, 1).
    pub frac: R,
    pub is_int: bool,
}

pub fn frac_parts_tol<R: Real>(x: R, tol: f64) -> FracParts<R> {
    let f = x - x.floor();
    if f.to_f64() < tol || 1.0 - f.to_f64() < tol {
        FracParts { angle: R::one(), frac: R::zero(), is_int: true }
    } else {
        FracParts { angle: f, frac: f, is_int: false }
    }
}

pub fn frac_parts<R: Real>(x: R) -> FracParts<R> {
    frac_parts_tol(x, INT_TOL)
}

/// Characteristic function of ℤ (with [`INT_TOL`]).
pub fn chi<R: Real>(x: R) -> bool {
    frac_parts(x).is_int
}

pub fn is_integral<R: Real>(x: R) -> bool {
    chi(x)
}

/// Riemann ζ(s) for integer s ≥ 2, by Euler–Maclaurin from N = 20.
pub fn riemann_zeta<R: Real>(s: u32) -> Result<R> {
    if s < 2 {
        return domain(format!("zeta({s}) is outside s >= 2"));
    }
    const N: i64 = 20;
    let si = s as i32;
    let mut acc = R::zero();
    for n in (1..N).rev() {
        acc += R::from_i64(n).powi(-si);
    }
    let nn = R::from_i64(N);
    acc += nn.powi(1 - si) / R::from_i64(s as i64 - 1);
    acc += nn.powi(-si) / R::from_f64(2.0);
    // B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
    let mut rising = R::from_i64(s as i64);
    let mut fact = R::from_f64(2.0);
    let mut npow = nn.powi(-si - 1);
    let n2 = nn * nn;
    for k in 1..=24usize {
        let term = classical::bernoulli_real::<R>(2 * k)? / fact * rising * npow;
        acc += term;
        if term.abs().to_f64() < R::EPSILON * 1e-3 * acc.to_f64().abs() {
            break;
        }
        let sk = s as i64 + 2 * k as i64;
        rising = rising * R::from_i64(sk - 1) * R::from_i64(sk);
        fact = fact * R::from_i64(2 * k as i64 + 1) * R::from_i64(2 * k as i64 + 2);
        npow /= n2;
    }
    Ok(acc)
}

/// Fixed-shape pairwise sum; the result depends only on the input order.
pub fn pairwise_sum<R: Real>(xs: &[Complex<R>]) -> Complex<R> {
    match xs.len() {
        0 => Complex::zero(),
        1 => xs[0],
        n => {
            let (a, b) = xs.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}
