//! Jacobi theta, the Kronecker double series F and elliptic Bernoulli
//! functions.
//!
//! Conventions: `e(z) = exp(2πiz)`, `q = e(τ)`, and
//!
//! ```text
//! θ(x; τ)   = Σ_m e(½(m+½)²τ + (m+½)(x+½))
//! F(x⃗; X; τ) = e(xX) θ'(0) θ(−x' + xτ + X) / (θ(−x' + xτ) θ(X))
//! F(x⃗; X; τ) = Σ_m B_m(x⃗; τ) (2πi)^m / m! · X^{m−1}
//! ```

mod bernoulli;
mod kronecker;
mod theta;

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{domain, Result};
use crate::numeric::{frac_parts, Complex, Real, TruncationPolicy};

pub use bernoulli::{
    eisenstein_bernoulli_oracle, elliptic_bernoulli, elliptic_bernoulli_row, BernoulliRow,
};
pub use kronecker::{
    kronecker_f, kronecker_f_deriv, kronecker_f_deriv_q, reduce_cell, CellPoint, KroneckerF,
};
pub use theta::{theta, theta_prime0};
pub(crate) use kronecker::em1_real;

/// x⃗ = (x', x).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CharVector<R> {
    pub xp: R,
    pub x: R,
}

impl<R: Real> CharVector<R> {
    pub fn new(xp: R, x: R) -> Self {
        CharVector { xp, x }
    }

    pub fn from_f64(xp: f64, x: f64) -> Self {
        CharVector::new(R::from_f64(xp), R::from_f64(x))
    }

    pub fn is_integral(self) -> bool {
        frac_parts(self.xp).is_int && frac_parts(self.x).is_int
    }

    /// Representative with both components in [0, 1).
    pub fn reduced(self) -> Self {
        CharVector::new(self.xp - self.xp.floor(), self.x - self.x.floor())
    }
}

impl<R: Real> Add for CharVector<R> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        CharVector::new(self.xp + o.xp, self.x + o.x)
    }
}

impl<R: Real> Sub for CharVector<R> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        CharVector::new(self.xp - o.xp, self.x - o.x)
    }
}

impl<R: Real> Neg for CharVector<R> {
    type Output = Self;
    fn neg(self) -> Self {
        CharVector::new(-self.xp, -self.x)
    }
}

impl<R: Real> Mul<R> for CharVector<R> {
    type Output = Self;
    fn mul(self, k: R) -> Self {
        CharVector::new(self.xp * k, self.x * k)
    }
}

/// τ with Im τ > 0 and the quantities derived from it.
#[derive(Clone, Copy, Debug)]
pub struct ModularParameter<R> {
    tau: Complex<R>,
    q: Complex<R>,
    q8: Complex<R>,
    theta_p0: Complex<R>,
    lattice_min: R,
    policy: TruncationPolicy,
}

impl<R: Real> ModularParameter<R> {
    pub fn new(tau: Complex<R>) -> Result<Self> {
        Self::with_policy(tau, TruncationPolicy::for_real::<R>())
    }

    pub fn from_f64(re: f64, im: f64) -> Result<Self> {
        Self::new(Complex::from_f64(re, im))
    }

    pub fn with_policy(tau: Complex<R>, policy: TruncationPolicy) -> Result<Self> {
        if !(tau.im > R::zero()) || !tau.is_finite() {
            return domain(format!("τ = {tau} is not in the upper half plane"));
        }
        policy.validate()?;
        let q = crate::numeric::cexp2pii(tau)?;
        let q8 = crate::numeric::cexp2pii(tau / R::from_f64(8.0))?;
        let mut mp = ModularParameter {
            tau,
            q,
            q8,
            theta_p0: Complex::zero(),
            lattice_min: lattice_min(tau),
            policy,
        };
        mp.theta_p0 = theta::theta_prime0_series(&mp)?;
        Ok(mp)
    }

    pub fn tau(&self) -> Complex<R> {
        self.tau
    }

    pub fn q(&self) -> Complex<R> {
        self.q
    }

    pub fn q8(&self) -> Complex<R> {
        self.q8
    }

    pub fn theta_p0(&self) -> Complex<R> {
        self.theta_p0
    }

    /// Distance from 0 to the nearest other point of ℤ + τℤ.
    pub fn lattice_min(&self) -> R {
        self.lattice_min
    }

    pub fn policy(&self) -> &TruncationPolicy {
        &self.policy
    }

    pub(crate) fn tail_tol(&self) -> f64 {
        self.policy.tail_tol
    }
}

fn lattice_min<R: Real>(tau: Complex<R>) -> R {
    let mut best = R::from_f64(f64::INFINITY);
    for m in 0..=12i64 {
        for n in -40..=40i64 {
            if m == 0 && n <= 0 {
                continue;
            }
            let w = tau * R::from_i64(m) + R::from_i64(n);
            best = best.min(w.abs());
        }
    }
    best
}
