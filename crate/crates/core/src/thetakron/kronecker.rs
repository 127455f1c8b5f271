use crate::classical::{binomial, factorial};
use crate::error::{domain, Error, Result};
use crate::numeric::{angle_split, cexp2pii, e_real, Complex, Real};

use super::bernoulli::elliptic_bernoulli_row;
use super::theta::theta;
use super::{CharVector, ModularParameter};

/// Distance to the lattice below which F is treated as sitting on a pole.
pub const POLE_CUTOFF: f64 = 1e-8;

/// X = (ka + a)τ + (kb + b) with a, b in (−1/2, 1/2].
#[derive(Clone, Copy, Debug)]
pub struct CellPoint<R> {
    pub ka: i64,
    pub kb: i64,
    pub a: R,
    pub b: R,
}

impl<R: Real> CellPoint<R> {
    pub fn reduced(&self, tau: Complex<R>) -> Complex<R> {
        tau * self.a + self.b
    }

    /// Factor relating F(x⃗; X) to F(x⃗; X_reduced): e(x·kb + x'·ka).
    pub fn phase(&self, xv: CharVector<R>) -> Complex<R> {
        e_real(xv.x * R::from_i64(self.kb) + xv.xp * R::from_i64(self.ka))
    }
}

pub fn reduce_cell<R: Real>(x: Complex<R>, tau: Complex<R>) -> CellPoint<R> {
    let a_full = x.im / tau.im;
    let b_full = x.re - a_full * tau.re;
    let (ka, a) = angle_split(a_full);
    let (kb, b) = angle_split(b_full);
    CellPoint { ka, kb, a, b }
}

/// `e(z) − 1` without cancellation near z = 0.
pub(crate) fn em1<R: Real>(z: Complex<R>) -> Complex<R> {
    let y = -R::two_pi() * z.im;
    let em1_real = if y.abs().to_f64() < 0.5 {
        let mut term = y;
        let mut s = y;
        let mut k = 1;
        while term.abs().to_f64() > R::EPSILON * 1e-2 * s.abs().to_f64() {
            k += 1;
            term = term * y / R::from_i64(k);
            s += term;
        }
        s
    } else {
        y.exp() - R::one()
    };
    let (c, s) = z.re.cis_turns();
    let (_, sh) = (z.re / R::from_f64(2.0)).cis_turns();
    // cos 2πu − 1 = −2 sin² πu
    let cm1 = -(sh * sh) * R::from_f64(2.0);
    let g = em1_real + R::one();
    Complex::new(em1_real * c + cm1, g * s)
}

/// `e(f) − 1` for real f.
pub(crate) fn em1_real<R: Real>(f: R) -> Complex<R> {
    em1(Complex::real(f))
}

/// F(x⃗; ·; τ) for a fixed character, with the theta values that do not
/// depend on X precomputed.
#[derive(Clone, Debug)]
pub struct KroneckerF<R> {
    xv: CharVector<R>,
    mp: ModularParameter<R>,
    /// (x representative, θ(−x' + xτ)) for x in [0,1) and x − 1.
    reps: [(R, Complex<R>); 2],
}

impl<R: Real> KroneckerF<R> {
    pub fn new(xv: CharVector<R>, mp: &ModularParameter<R>) -> Result<Self> {
        if xv.is_integral() {
            return domain("F is undefined for characters in ℤ²");
        }
        let r = xv.reduced();
        let xs = [r.x, if r.x > R::zero() { r.x - R::one() } else { r.x }];
        let mut reps = [(R::zero(), Complex::zero()); 2];
        for (slot, &x) in reps.iter_mut().zip(xs.iter()) {
            let xi = mp.tau() * x - r.xp;
            *slot = (x, theta(xi, mp)?);
        }
        Ok(KroneckerF { xv: r, mp: *mp, reps })
    }

    pub fn character(&self) -> CharVector<R> {
        self.xv
    }

    pub fn modular_parameter(&self) -> &ModularParameter<R> {
        &self.mp
    }

    /// F at a reduced point aτ + b, a, b in (−1/2, 1/2].
    pub fn eval_cell(&self, a: R, b: R) -> Result<Complex<R>> {
        let tau = self.mp.tau();
        let x = tau * a + b;
        if x.abs().to_f64() < POLE_CUTOFF {
            return Err(Error::Pole(format!("F evaluated at distance {} from the lattice", x.abs())));
        }
        // Pick the character representative with x·a ≥ 0 so |e(xX)| ≤ 1.
        let (xr, th_xi) = if a < R::zero() { self.reps[1] } else { self.reps[0] };
        let xi = tau * xr - self.xv.xp;
        let num = self.mp.theta_p0() * theta(xi + x, &self.mp)?;
        let den = th_xi * theta(x, &self.mp)?;
        Ok(cexp2pii(x * xr)? * num / den)
    }

    /// Like [`Self::eval_cell`], but near the pole the regular part is taken
    /// from the elliptic Bernoulli expansion instead of failing.
    pub fn eval_cell_split(&self, a: R, b: R) -> Result<Complex<R>> {
        let x = self.mp.tau() * a + b;
        if x.abs().to_f64() >= POLE_CUTOFF {
            return self.eval_cell(a, b);
        }
        if x.abs().to_f64() == 0.0 {
            return Err(Error::Pole("F evaluated on the lattice".into()));
        }
        let row = elliptic_bernoulli_row(3, self.xv, &self.mp)?;
        let tpi = Complex::two_pi_i();
        let mut reg = Complex::zero();
        let mut c = Complex::one();
        for m in 1..=3usize {
            c = c * tpi / R::from_i64(m as i64);
            reg += row.get(m)? * c * x.powi(m as i32 - 1);
        }
        Ok(x.inv() + reg)
    }

    pub fn eval(&self, x: Complex<R>) -> Result<Complex<R>> {
        let p = reduce_cell(x, self.mp.tau());
        Ok(p.phase(self.xv) * self.eval_cell(p.a, p.b)?)
    }
}

/// F(x⃗; X; τ).
pub fn kronecker_f<R: Real>(xv: CharVector<R>, x: Complex<R>, mp: &ModularParameter<R>) -> Result<Complex<R>> {
    KroneckerF::new(xv, mp)?.eval(x)
}

/// (1/2πi)^n ∂ⁿF/∂Xⁿ from the Laurent expansion at X = 0. Only valid for
/// |X| below the distance to the nearest nonzero lattice point.
pub fn kronecker_f_deriv<R: Real>(
    n: usize,
    xv: CharVector<R>,
    x: Complex<R>,
    mp: &ModularParameter<R>,
) -> Result<Complex<R>> {
    if xv.is_integral() {
        return domain("F is undefined for characters in ℤ²");
    }
    let ax = x.abs();
    if !(ax < mp.lattice_min()) {
        return Err(Error::Radius(format!("|X| = {ax} outside the Laurent disc {}", mp.lattice_min())));
    }
    if ax.to_f64() < POLE_CUTOFF {
        return Err(Error::Pole(format!("F^({n}) evaluated at |X| = {ax}")));
    }
    let row = elliptic_bernoulli_row(crate::classical::BERNOULLI_MAX, xv, mp)?;
    let tpi = Complex::<R>::two_pi_i();
    let sign = if n % 2 == 0 { R::one() } else { -R::one() };
    let singular = (x.powi(n as i32 + 1) * tpi.powi(n as i32)).inv() * (factorial::<R>(n) * sign);
    let tol = mp.tail_tol();
    let mut acc = Complex::zero();
    // c = (2πi)^{m+1} X^m / m!
    let mut c = tpi;
    let mut small = 0;
    for m in 0.. {
        let k = m + n + 1;
        if k > crate::classical::BERNOULLI_MAX {
            return Err(Error::Radius(format!("Laurent series at |X| = {ax} did not settle")));
        }
        let term = row.get(k)? * c / R::from_i64(k as i64);
        acc += term;
        if term.abs().to_f64() <= tol * acc.abs().to_f64().max(1.0) {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
        c = c * x * tpi / R::from_i64(m as i64 + 1);
    }
    Ok(singular + acc)
}

/// Coefficients of P_k with D^k g = P_k(g), g = 1/(e(X) − 1), D = (1/2πi) d/dX.
fn cot_derivative_poly(k: usize) -> Vec<i128> {
    // P_0 = g; P_{k+1} = −(g + g²) P_k'
    let mut p = vec![0i128, 1];
    for _ in 0..k {
        let mut next = vec![0i128; p.len() + 1];
        for (i, &c) in p.iter().enumerate().skip(1) {
            let d = c * i as i128; // coefficient of g^{i−1} in P'
            next[i] -= d;
            next[i + 1] -= d;
        }
        p = next;
    }
    p
}

/// (1/2πi)^n ∂ⁿF/∂Xⁿ anywhere off the lattice, from the q-expansion
/// F = e(xX)[π cot πξ + π cot πX − 2πi Σ_{i,j≥1} (e(iξ+jX) − e(−iξ−jX)) q^{ij}]
/// with ξ = −x' + xτ, after reducing X into the centered cell and x into
/// [−1/2, 1/2).
pub fn kronecker_f_deriv_q<R: Real>(
    n: usize,
    xv: CharVector<R>,
    x_arg: Complex<R>,
    mp: &ModularParameter<R>,
) -> Result<Complex<R>> {
    if xv.is_integral() {
        return domain("F is undefined for characters in ℤ²");
    }
    let tau = mp.tau();
    let cell = reduce_cell(x_arg, tau);
    let phase = cell.phase(xv);
    let x_red = cell.reduced(tau);
    if x_red.abs().to_f64() < POLE_CUTOFF {
        return Err(Error::Pole(format!("F^({n}) evaluated at distance {} from the lattice", x_red.abs())));
    }
    let (_, xr) = angle_split(xv.x);
    let xr = if xr.to_f64() == 0.5 { -xr } else { xr };
    let xi = tau * xr - xv.xp;
    let tpi = Complex::<R>::two_pi_i();

    // D^k K for k = 0..=n
    let g = em1(x_red).inv();
    let mut dk = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let poly = cot_derivative_poly(k);
        let mut pv = Complex::zero();
        for &c in poly.iter().rev() {
            pv = pv * g + Complex::real(R::from_i128(c));
        }
        let mut v = tpi * pv;
        if k == 0 {
            let cot_xi = tpi * em1(xi).inv() + tpi * R::from_f64(0.5);
            v = v + tpi * R::from_f64(0.5) + cot_xi;
        }
        dk.push(v);
    }
    let t = tau.im.to_f64();
    let ax = xr.abs().to_f64();
    let aa = cell.a.abs().to_f64();
    let tol = mp.tail_tol();
    let scale = dk.iter().map(|v| v.abs().to_f64()).fold(1.0, f64::max);
    let mut sums = vec![Complex::<R>::zero(); n + 1];
    for i in 1i64.. {
        // |e(±(iξ + jX)) q^{ij}| ≤ exp(−2πT(ij − i|x| − j|a|))
        let bound = |j: i64| (-2.0 * std::f64::consts::PI * t * ((i * j) as f64 - i as f64 * ax - j as f64 * aa)).exp();
        if bound(1) * (n as f64 + 1.0) < tol * scale * 1e-3 && i > 1 {
            break;
        }
        if i > 100_000 {
            return Err(Error::Range("q-expansion of F did not converge".into()));
        }
        for j in 1i64.. {
            let jf = j as f64;
            if bound(j) * jf.powi(n as i32) < tol * scale * 1e-3 && j as f64 > n as f64 / (2.0 * std::f64::consts::PI * t) {
                break;
            }
            let ri = R::from_i64(i);
            let rj = R::from_i64(j);
            let qij = tau * R::from_i64(i * j);
            let up = cexp2pii(xi * ri + x_red * rj + qij)?;
            let dn = cexp2pii(-(xi * ri) - x_red * rj + qij)?;
            let mut jp = R::one();
            let mut mjp = R::one();
            for s in sums.iter_mut() {
                *s += up * jp - dn * mjp;
                jp *= rj;
                mjp *= -rj;
            }
        }
    }
    for (k, s) in sums.into_iter().enumerate() {
        dk[k] -= tpi * s;
    }
    // D^n [e(xX) K] = e(xX) Σ_k C(n,k) x^{n−k} D^k K
    let mut acc = Complex::zero();
    for (k, v) in dk.iter().enumerate() {
        acc += *v * (R::from_i128(binomial(n, k)) * xr.powi((n - k) as i32));
    }
    Ok(phase * cexp2pii(x_red * xr)? * acc)
}
