use crate::classical::{bernoulli_poly, factorial};
use crate::error::{domain, Error, Result};
use crate::numeric::{cexp2pii, e_real, frac_parts, Complex, Real, SeriesResult};

use super::kronecker::em1;
use super::{CharVector, ModularParameter};

/// B_0(x⃗), ..., B_max(x⃗) at one character.
#[derive(Clone, Debug)]
pub struct BernoulliRow<R> {
    values: Vec<Complex<R>>,
    /// x⃗ ∈ ℤ², where B_1 and B_2 are undefined.
    singular: bool,
}

impl<R: Real> BernoulliRow<R> {
    pub fn get(&self, m: usize) -> Result<Complex<R>> {
        if self.singular && (m == 1 || m == 2) {
            return domain(format!("B_{m} is discontinuous at characters in ℤ²"));
        }
        self.values
            .get(m)
            .copied()
            .ok_or_else(|| Error::Capacity(format!("B_{m} not in a row of length {}", self.values.len())))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// All B_m(x⃗; τ) for m ≤ max_m from the explicit q-expansion
///
/// ```text
/// B_m = m [ Σ_j (x−j)^{m−1} U_j − Σ_j (x+j)^{m−1} W_j + x^{m−1} Z ] + B_m(x)
/// U_j = e(−xτ)q^j / (e(−x') − e(−xτ)q^j)
/// W_j = e(xτ)q^j / (e(x') − e(xτ)q^j)
/// Z   = e(ξ)/(e(ξ) − 1),  ξ = −x' + xτ
/// ```
///
/// after reducing x into [0, 1). The Z term is left out when x = 0 and m ≥ 2.
pub fn elliptic_bernoulli_row<R: Real>(
    max_m: usize,
    xv: CharVector<R>,
    mp: &ModularParameter<R>,
) -> Result<BernoulliRow<R>> {
    let fx = frac_parts(xv.x);
    let x = fx.frac;
    let xp = xv.xp - xv.xp.floor();
    let singular = fx.is_int && frac_parts(xv.xp).is_int;
    let tau = mp.tau();
    let ep = e_real(xp);
    let emp = e_real(-xp);
    let tol = mp.tail_tol();
    let t = tau.im.to_f64();

    let mut sums = vec![Complex::<R>::zero(); max_m + 1];
    let peak = (max_m as f64) / (2.0 * std::f64::consts::PI * t) + 1.0;
    let q = mp.q();
    let mut u = cexp2pii(tau * (R::one() - x))?;
    let mut w = cexp2pii(tau * (R::one() + x))?;
    let mut j = 0i64;
    loop {
        j += 1;
        let rj = R::from_i64(j);
        if j > 1 {
            u = u * q;
            w = w * q;
        }
        let uj = u / (emp - u);
        let wj = w / (ep - w);
        let (mut pu, mut pw) = (R::one(), R::one());
        let mut settled = true;
        for m in 1..=max_m {
            let term = uj.scale(pu) - wj.scale(pw);
            sums[m] += term;
            if term.to_f64().abs() > tol * sums[m].to_f64().abs().max(1e-300) {
                settled = false;
            }
            pu *= x - rj;
            pw *= x + rj;
        }
        if (settled && (j as f64) > peak) || max_m == 0 {
            break;
        }
        if j > 1_000_000 {
            return Err(Error::Range("elliptic Bernoulli q-series did not settle".into()));
        }
    }
    let z = if singular {
        Complex::zero()
    } else {
        let xi = tau * x - xp;
        cexp2pii(xi)? / em1(xi)
    };
    let mut values = Vec::with_capacity(max_m + 1);
    values.push(Complex::one());
    let mut xpow = R::one();
    for m in 1..=max_m {
        let mut bracket = sums[m];
        if !(fx.is_int && m >= 2) && !singular {
            bracket += z * xpow;
        }
        let v = bracket * R::from_i64(m as i64) + Complex::real(bernoulli_poly(m, x)?);
        values.push(v);
        xpow *= x;
    }
    Ok(BernoulliRow { values, singular })
}

/// B_m(x⃗; τ).
pub fn elliptic_bernoulli<R: Real>(m: usize, xv: CharVector<R>, mp: &ModularParameter<R>) -> Result<Complex<R>> {
    elliptic_bernoulli_row(m, xv, mp)?.get(m)
}

/// −k!/(2πi)^k Σ' e(m'x' + mx)/(τm' + m)^k over the square max(|m'|,|m|) ≤ cutoff.
pub fn eisenstein_bernoulli_oracle<R: Real>(
    k: usize,
    xv: CharVector<R>,
    mp: &ModularParameter<R>,
    cutoff: usize,
) -> Result<SeriesResult<R>> {
    if k < 3 {
        return domain(format!("lattice sum of weight {k} is not absolutely convergent"));
    }
    let tau = mp.tau();
    let n = cutoff as i64;
    let mut acc = Complex::<R>::zero();
    let mut terms = 0usize;
    for shell in 1..=n {
        let mut s = Complex::zero();
        for a in -shell..=shell {
            for b in -shell..=shell {
                if a.abs().max(b.abs()) != shell {
                    continue;
                }
                let w = tau * R::from_i64(a) + R::from_i64(b);
                let ph = e_real(xv.xp * R::from_i64(a) + xv.x * R::from_i64(b));
                s += ph / w.powi(k as i32);
                terms += 1;
            }
        }
        acc += s;
    }
    let pref = -factorial::<R>(k);
    let value = acc * pref / Complex::<R>::two_pi_i().powi(k as i32);
    let est_tail = factorial::<f64>(k) / (2.0 * std::f64::consts::PI).powi(k as i32)
        * 8.0
        * (cutoff as f64).powi(2 - k as i32)
        / (tau.im.to_f64().min(1.0)).powi(k as i32);
    Ok(SeriesResult { value, est_tail, terms_used: terms })
}
