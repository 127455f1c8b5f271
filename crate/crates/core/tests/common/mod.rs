//! Invariant residuals shared by the property tests and the acceptance run.
//! Every function returns |lhs − rhs| / max(|lhs|, |rhs|, 1).
#![allow(dead_code)]

use ellcot::classical::factorial;
use ellcot::ellsums::{edr_sum, hat_s, taylor00, taylor_radii, EdrParams};
use ellcot::modular::CharMatrix;
use ellcot::numeric::e_real;
use ellcot::quadratic::QuadraticNumber;
use ellcot::series::{gen_cot_h, gen_cot_two_sided};
use ellcot::thetakron::{
    eisenstein_bernoulli_oracle, elliptic_bernoulli, kronecker_f, kronecker_f_deriv, kronecker_f_deriv_q, reduce_cell,
    theta, CharVector, ModularParameter,
};
use ellcot::{Complex, Result, TruncationPolicy};
use num_rational::Ratio;

pub type C = Complex<f64>;
pub type Mp = ModularParameter<f64>;
pub type Cv = CharVector<f64>;

pub fn residual(a: C, b: C) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

/// Distance from X to the nearest point of ℤ + τℤ.
pub fn lattice_dist(x: C, tau: C) -> f64 {
    let p = reduce_cell(x, tau);
    let mut best = f64::INFINITY;
    for i in -1..=1 {
        for j in -1..=1 {
            best = best.min((tau * (p.a - i as f64) + (p.b - j as f64)).abs());
        }
    }
    best
}

pub fn cv(xp: f64, x: f64) -> Cv {
    CharVector::from_f64(xp, x)
}

pub fn theta_shift(x: C, mp: &Mp) -> Result<f64> {
    let t0 = theta(x, mp)?;
    let t1 = theta(x + 1.0, mp)?;
    let tn = theta(-x, mp)?;
    Ok(residual(t1, -t0).max(residual(tn, -t0)))
}

/// X ↦ X + 1 and X ↦ X + τ phases, parity, and integer shifts of the character.
pub fn f_symmetries(xv: Cv, x: C, a: (i64, i64), mp: &Mp) -> Result<f64> {
    let f = kronecker_f(xv, x, mp)?;
    let f1 = kronecker_f(xv, x + 1.0, mp)?;
    let ft = kronecker_f(xv, x + mp.tau(), mp)?;
    let fneg = kronecker_f(-xv, -x, mp)?;
    let fa = kronecker_f(xv + cv(a.0 as f64, a.1 as f64), x, mp)?;
    Ok([
        residual(f1, e_real(xv.x) * f),
        residual(ft, e_real(xv.xp) * f),
        residual(fneg, -f),
        residual(fa, f),
    ]
    .into_iter()
    .fold(0.0, f64::max))
}

pub fn b_symmetries(m: usize, xv: Cv, a: (i64, i64), mp: &Mp) -> Result<f64> {
    let b = elliptic_bernoulli(m, xv, mp)?;
    let bn = elliptic_bernoulli(m, -xv, mp)?;
    let ba = elliptic_bernoulli(m, xv + cv(a.0 as f64, a.1 as f64), mp)?;
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    Ok(residual(bn, b * sign).max(residual(ba, b)))
}

fn sub_characters(c: i64, xv: Cv) -> impl Iterator<Item = (i64, i64, Cv)> {
    let cf = c as f64;
    (0..c).flat_map(move |jp| (0..c).map(move |j| (jp, j, cv((jp as f64 + xv.xp) / cf, (j as f64 + xv.x) / cf))))
}

/// F^{(l)}(x⃗; X + (τi′ + i)/c) against c^{l−1} Σ_{j⃗ mod c} e(i⃗·(j⃗ + x⃗)/c) F^{(l)}((j⃗ + x⃗)/c; cX).
pub fn f_distribution(c: i64, l: usize, xv: Cv, x: C, i: (i64, i64), mp: &Mp) -> Result<f64> {
    let cf = c as f64;
    let lhs = kronecker_f_deriv_q(l, xv, x + (mp.tau() * i.0 as f64 + i.1 as f64) / cf, mp)?;
    let mut rhs = C::zero();
    for (jp, j, u) in sub_characters(c, xv) {
        let ph = e_real((i.0 as f64 * (jp as f64 + xv.xp) + i.1 as f64 * (j as f64 + xv.x)) / cf);
        rhs += ph * kronecker_f_deriv_q(l, u, x * cf, mp)?;
    }
    Ok(residual(lhs, rhs * cf.powi(l as i32 - 1)))
}

pub fn b_distribution(c: i64, m: usize, xv: Cv, mp: &Mp) -> Result<f64> {
    let lhs = elliptic_bernoulli(m, xv, mp)?;
    let mut rhs = C::zero();
    for (_, _, u) in sub_characters(c, xv) {
        rhs += elliptic_bernoulli(m, u, mp)?;
    }
    Ok(residual(lhs, rhs * (c as f64).powi(m as i32 - 2)))
}

/// Ŝ(X + 1, Y) = e(−y)Ŝ(X, Y) and Ŝ(X, Y + 1) = e(x)Ŝ(X, Y).
pub fn hat_periodicity(l: usize, r: Ratio<i64>, m: &CharMatrix<f64>, x: C, y: C, mp: &Mp) -> Result<f64> {
    let s = hat_s(0, l, r, m, x, y, mp)?;
    let sx = hat_s(0, l, r, m, x + 1.0, y, mp)?;
    let sy = hat_s(0, l, r, m, x, y + 1.0, mp)?;
    Ok(residual(sx, e_real(-m.y.x) * s).max(residual(sy, e_real(m.x.x) * s)))
}

/// B_m from the Laurent coefficient of F at X = 0, by a discrete Cauchy
/// integral on |X| = radius. Relative error, or absolute where B_m vanishes.
pub fn cauchy_vs_bernoulli(m: usize, xv: Cv, mp: &Mp, radius: f64, points: usize) -> Result<f64> {
    let mut acc = C::zero();
    for k in 0..points {
        let x = e_real((k as f64 + 0.5) / points as f64) * radius;
        acc += kronecker_f(xv, x, mp)? * x.powi(1 - m as i32);
    }
    let got = acc / points as f64 * factorial::<f64>(m) / C::two_pi_i().powi(m as i32);
    let want = elliptic_bernoulli(m, xv, mp)?;
    Ok((got - want).abs() / if want.abs() > 1e-12 { want.abs() } else { 1.0 })
}

pub fn eisenstein_error(k: usize, xv: Cv, mp: &Mp, cutoff: usize) -> Result<f64> {
    let o = eisenstein_bernoulli_oracle(k, xv, mp, cutoff)?;
    Ok((o.value - elliptic_bernoulli(k, xv, mp)?).abs())
}

/// F^{(1)} against (1/2πi) times a central difference of F with step h.
pub fn derivative_vs_difference(xv: Cv, x: C, mp: &Mp, h: f64) -> Result<f64> {
    let d = (kronecker_f(xv, x + h, mp)? - kronecker_f(xv, x - h, mp)?) / (2.0 * h) / C::two_pi_i();
    Ok(residual(kronecker_f_deriv(1, xv, x, mp)?, d))
}

pub fn gen_cot_paths(s: u32, alpha: &QuadraticNumber, x: f64, y: f64, terms: usize) -> Result<f64> {
    let p = TruncationPolicy::default().with_max_index(terms);
    let a = gen_cot_two_sided::<f64>(s, alpha, x, y, &p)?.value;
    let b = gen_cot_h::<f64>(s, alpha, x, y, &p)?.value;
    Ok((a - b).abs())
}

/// C_{X⁰}C_{Y⁰} Ŝ_{1,l} against (2πi)²[S_{1,l}/l − r^l B_{l+1}(y⃗)/(l(l+1))]. Relative error.
pub fn constant_term_identity(l: usize, r: Ratio<i64>, m: &CharMatrix<f64>, mp: &Mp, points: usize) -> Result<f64> {
    let (rx, ry) = taylor_radii(r, mp);
    let got = taylor00(|x, y| hat_s(0, l, r, m, x, y, mp), rx, ry, points)?;
    let s = edr_sum(&EdrParams { m: 1, n: l, r, mat: *m, mp: *mp })?;
    let b = elliptic_bernoulli(l + 1, m.y, mp)?;
    let rl = (*r.numer() as f64 / *r.denom() as f64).powi(l as i32);
    let tpi = C::two_pi_i();
    let want = tpi * tpi * (s / l as f64 - b * rl / (l * (l + 1)) as f64);
    Ok((got - want).abs() / want.abs())
}
