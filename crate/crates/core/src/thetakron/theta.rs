use crate::error::Result;
use crate::numeric::{cexp2pii, Complex, Real};

use super::ModularParameter;

/// Sum over m of `weight(m) · e(½(m+½)²τ + (m+½)(x+½))`, walking outward
/// from the largest term until the edge terms drop below the tolerance.
fn theta_sum<R: Real>(
    x: Complex<R>,
    mp: &ModularParameter<R>,
    weight: impl Fn(R) -> Complex<R>,
) -> Result<Complex<R>> {
    let tau = mp.tau();
    let half = R::from_f64(0.5);
    let center = (-(x.im / tau.im) - half).round().to_i64();
    let term = |m: i64| -> Result<Complex<R>> {
        let k = R::from_i64(m) + half;
        let arg = tau * (half * k * k) + (x + half) * k;
        Ok(weight(k) * cexp2pii(arg)?)
    };
    let tol = mp.tail_tol();
    let min_terms = mp.policy().theta_terms as i64;
    let mut acc = term(center)?;
    let mut peak = acc.abs().to_f64();
    for dir in [1i64, -1] {
        let mut m = center;
        loop {
            m += dir;
            let t = term(m)?;
            acc += t;
            let ta = t.abs().to_f64();
            peak = peak.max(ta);
            if (m - center).abs() >= min_terms && ta <= tol * peak {
                break;
            }
            if (m - center).abs() > 10_000 {
                break;
            }
        }
    }
    Ok(acc)
}

pub fn theta<R: Real>(x: Complex<R>, mp: &ModularParameter<R>) -> Result<Complex<R>> {
    theta_sum(x, mp, |_| Complex::one())
}

pub(super) fn theta_prime0_series<R: Real>(mp: &ModularParameter<R>) -> Result<Complex<R>> {
    theta_sum(Complex::zero(), mp, |k| Complex::two_pi_i() * k)
}

/// θ'(0; τ), from the term-wise differentiated series (cached).
pub fn theta_prime0<R: Real>(mp: &ModularParameter<R>) -> Complex<R> {
    mp.theta_p0()
}
