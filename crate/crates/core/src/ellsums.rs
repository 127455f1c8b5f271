//! Elliptic Dedekind–Rademacher sums and the terms of their reciprocity laws.
//!
//! ```text
//! S_{m,n}(r, M; τ) = (1/d) Σ_{j⃗ mod d} B_m((j⃗+y⃗)/d; τ) B_n(n(j⃗+y⃗)/d − x⃗; τ),   r = n/d
//! R_V(l, z, M; τ)  = (2πi)^{l+1}/(l+1)! Σ_{k=−1}^{l} C(l+1,k+1) (−j(V;z))^k S_{k+1,l−k}(d/c, (−x⃗; y⃗); τ)
//! ```
//!
//! with M = (x⃗; y⃗) = ((x', x); (y', y)).

use num_rational::Ratio;

use crate::classical::{binomial, factorial};
use crate::error::{domain, Error, Result};
use crate::modular::{admissible, rational_parts, CharMatrix, UnimodularMatrix};
use crate::numeric::{Complex, Real};
use crate::thetakron::{elliptic_bernoulli_row, kronecker_f_deriv_q, CharVector, ModularParameter};

/// Inputs of S_{m,n}(r, M; τ).
#[derive(Clone, Debug)]
pub struct EdrParams<R> {
    pub m: usize,
    pub n: usize,
    pub r: Ratio<i64>,
    pub mat: CharMatrix<R>,
    pub mp: ModularParameter<R>,
}

/// S_{m,n}(r, M; τ). Fails with a domain error when a B_1 or B_2 factor
/// would be evaluated on ℤ².
pub fn edr_sum<R: Real>(p: &EdrParams<R>) -> Result<Complex<R>> {
    if *p.r.numer() == 0 {
        return domain("S_{m,n}(r, M; τ) needs r ≠ 0");
    }
    edr_value(p.m, p.n, p.r, &p.mat, &p.mp)
}

/// S_{m,n}(r, M; τ) including r = 0, where the sum has the single term j⃗ = 0.
pub(crate) fn edr_value<R: Real>(
    m: usize,
    n: usize,
    r: Ratio<i64>,
    mat: &CharMatrix<R>,
    mp: &ModularParameter<R>,
) -> Result<Complex<R>> {
    let row = edr_table(m + n, r, mat, mp, Some(m))?;
    row.into_iter().nth(m).unwrap()
}

/// S_{m, total−m}(r, M; τ) for m = 0..=total, or only m = `only` when given.
/// Entries whose factors are undefined hold the corresponding error. r = 0
/// is allowed here (it arises as d/c for c = 1, d = 0).
fn edr_table<R: Real>(
    total: usize,
    r: Ratio<i64>,
    mat: &CharMatrix<R>,
    mp: &ModularParameter<R>,
    only: Option<usize>,
) -> Result<Vec<Result<Complex<R>>>> {
    let (nr, dr) = rational_parts(r);
    let d = R::from_i64(dr);
    let (x, y) = (mat.x, mat.y);
    let mut acc: Vec<Result<Complex<R>>> = (0..=total).map(|_| Ok(Complex::zero())).collect();
    for jp in 0..dr {
        for j in 0..dr {
            let u = CharVector::new((R::from_i64(jp) + y.xp) / d, (R::from_i64(j) + y.x) / d);
            let v = u * R::from_i64(nr) - x;
            let (lo, hi) = match only {
                Some(m) => (m, m),
                None => (0, total),
            };
            let ra = elliptic_bernoulli_row(hi, u, mp)?;
            let rb = elliptic_bernoulli_row(total - lo, v, mp)?;
            for m in lo..=hi {
                if let Ok(s) = acc[m].as_mut() {
                    match (ra.get(m), rb.get(total - m)) {
                        (Ok(a), Ok(b)) => *s += a * b,
                        (Err(e), _) | (_, Err(e)) => acc[m] = Err(e),
                    }
                }
            }
        }
    }
    Ok(acc.into_iter().map(|s| s.map(|v| v / d)).collect())
}

/// R_V(l, ·, M; τ) with its coefficients computed once.
#[derive(Clone, Debug)]
pub struct RPoly<R> {
    v: UnimodularMatrix,
    l: u32,
    /// coefficient of (−j(V;z))^k at index k + 1, k = −1..=l; empty when c = 0
    coeffs: Vec<Complex<R>>,
}

impl<R: Real> RPoly<R> {
    pub fn new(v: UnimodularMatrix, l: u32, mat: &CharMatrix<R>, mp: &ModularParameter<R>) -> Result<Self> {
        if l < 1 {
            return domain("R_V needs l ≥ 1");
        }
        if !admissible(v, *mat) {
            return domain(format!("M is not admissible for V = {v}"));
        }
        let v = if v.c < 0 { v.neg() } else { v };
        if v.c == 0 {
            return Ok(RPoly { v, l, coeffs: Vec::new() });
        }
        let li = l as usize;
        let shifted = CharMatrix::new(-mat.x, mat.y);
        let table = edr_table(li + 1, Ratio::new(v.d, v.c), &shifted, mp, None)?;
        let pref = Complex::<R>::two_pi_i().powi(l as i32 + 1) / factorial::<R>(li + 1);
        let coeffs = table
            .into_iter()
            .enumerate()
            .map(|(m, s)| Ok(pref * s? * R::from_i128(binomial(li + 1, m))))
            .collect::<Result<_>>()?;
        Ok(RPoly { v, l, coeffs })
    }

    pub fn matrix(&self) -> UnimodularMatrix {
        self.v
    }

    pub fn weight(&self) -> u32 {
        self.l
    }

    pub fn eval(&self, z: Complex<R>) -> Result<Complex<R>> {
        if self.coeffs.is_empty() {
            return Ok(Complex::zero());
        }
        let mj = -self.v.j(z);
        if mj.abs().to_f64() == 0.0 {
            return Err(Error::Pole(format!("j(V; z) = 0 at z = {z}")));
        }
        let mut acc = Complex::zero();
        for c in self.coeffs[1..].iter().rev() {
            acc = acc * mj + *c;
        }
        Ok(acc + self.coeffs[0] / mj)
    }
}

/// R_V(l, z, M; τ).
pub fn r_poly<R: Real>(
    v: UnimodularMatrix,
    l: u32,
    mat: &CharMatrix<R>,
    z: Complex<R>,
    mp: &ModularParameter<R>,
) -> Result<Complex<R>> {
    RPoly::new(v, l, mat, mp)?.eval(z)
}

fn fderiv<R: Real>(k: usize, xv: CharVector<R>, x: Complex<R>, mp: &ModularParameter<R>) -> Result<Complex<R>> {
    kronecker_f_deriv_q(k, xv, x, mp)
}

/// Ŝ_{k+1, lmk}(r, M; X, Y; τ) =
/// (1/d) Σ_{j⃗ mod d} F^{(k)}((j⃗+y⃗)/d; nY − dX) F^{(lmk−1)}(n(j⃗+y⃗)/d − x⃗; −Y),
/// r = n/d. For k = 0, lmk = l this is Ŝ_{1,l}.
pub fn hat_s<R: Real>(
    k: usize,
    lmk: usize,
    r: Ratio<i64>,
    mat: &CharMatrix<R>,
    x: Complex<R>,
    y: Complex<R>,
    mp: &ModularParameter<R>,
) -> Result<Complex<R>> {
    if lmk < 1 {
        return domain("Ŝ_{k+1,l−k} needs l − k ≥ 1");
    }
    let (nr, dr) = rational_parts(r);
    let d = R::from_i64(dr);
    let arg1 = y * R::from_i64(nr) - x * d;
    let mut acc = Complex::zero();
    for jp in 0..dr {
        for j in 0..dr {
            let u = CharVector::new((R::from_i64(jp) + mat.y.xp) / d, (R::from_i64(j) + mat.y.x) / d);
            let v = u * R::from_i64(nr) - mat.x;
            acc += fderiv(k, u, arg1, mp)? * fderiv(lmk - 1, v, -y, mp)?;
        }
    }
    Ok(acc / d)
}

/// The term inside R̂_V, taken literally with signed c:
/// (1/c) Σ_{j⃗ mod |c|} F^{(k)}((j⃗+y⃗)/c; −cX − dY) F^{(lmk−1)}(d(j⃗+y⃗)/c + x⃗; Y).
pub fn hat_s_matrix<R: Real>(
    k: usize,
    lmk: usize,
    c: i64,
    d: i64,
    mat: &CharMatrix<R>,
    x: Complex<R>,
    y: Complex<R>,
    mp: &ModularParameter<R>,
) -> Result<Complex<R>> {
    if c == 0 {
        return domain("the R̂ summand needs c ≠ 0");
    }
    if lmk < 1 {
        return domain("Ŝ_{k+1,l−k} needs l − k ≥ 1");
    }
    let rc = R::from_i64(c);
    let rd = R::from_i64(d);
    let arg1 = -(x * rc) - y * rd;
    let mut acc = Complex::zero();
    for jp in 0..c.abs() {
        for j in 0..c.abs() {
            let u = CharVector::new((R::from_i64(jp) + mat.y.xp) / rc, (R::from_i64(j) + mat.y.x) / rc);
            let v = u * rd + mat.x;
            acc += fderiv(k, u, arg1, mp)? * fderiv(lmk - 1, v, y, mp)?;
        }
    }
    Ok(acc / rc)
}

/// R̂_V(l, r, M; X, Y; τ) = (−1)^l Σ_{k=0}^{l−1} C(l−1,k) (−j(V;r))^k Ŝ_{k+1,l−k}(d/c, (−x⃗; y⃗); X, Y; τ),
/// and 0 when c = 0.
pub fn hat_r<R: Real>(
    v: UnimodularMatrix,
    l: u32,
    r: Ratio<i64>,
    mat: &CharMatrix<R>,
    x: Complex<R>,
    y: Complex<R>,
    mp: &ModularParameter<R>,
) -> Result<Complex<R>> {
    if l < 1 {
        return domain("R̂_V needs l ≥ 1");
    }
    if !admissible(v, *mat) {
        return domain(format!("M is not admissible for V = {v}"));
    }
    if v.c == 0 {
        return Ok(Complex::zero());
    }
    let li = l as usize;
    let (rn, rd) = rational_parts(r);
    let j_vr = R::from_i64(v.c * rn + v.d * rd) / R::from_i64(rd);
    let mut acc = Complex::zero();
    let mut pw = R::one();
    for k in 0..li {
        let s = hat_s_matrix(k, li - k, v.c, v.d, mat, x, y, mp)?;
        acc += s * (R::from_i128(binomial(li - 1, k)) * pw);
        pw *= -j_vr;
    }
    Ok(if l % 2 == 0 { acc } else { -acc })
}

/// Torus radii for extracting C_{X⁰}C_{Y⁰} of Ŝ_{1,l}(r, ...): the X circle
/// stays inside the Laurent disc after scaling by d(r), and the Y circle is
/// small enough that the expansion in Y happens first.
pub fn taylor_radii<R: Real>(r: Ratio<i64>, mp: &ModularParameter<R>) -> (f64, f64) {
    let (nr, dr) = rational_parts(r);
    let rx = 0.3 * mp.lattice_min().to_f64() / dr as f64;
    let ry = 0.3 * rx / (nr as f64 / dr as f64).abs().max(1.0);
    (rx, ry)
}

/// C_{X⁰}C_{Y⁰}(f) from a `points` × `points` grid on |X| = rx, |Y| = ry.
pub fn taylor00<R, F>(f: F, rx: f64, ry: f64, points: usize) -> Result<Complex<R>>
where
    R: Real,
    F: Fn(Complex<R>, Complex<R>) -> Result<Complex<R>>,
{
    if points == 0 || !(rx > 0.0) || !(ry > 0.0) {
        return domain("taylor00 needs positive radii and at least one point");
    }
    let p = R::from_i64(points as i64);
    let mut acc = Complex::zero();
    for a in 0..points {
        // Offsetting by half a step keeps the nodes off the real axes.
        let ta = (R::from_i64(a as i64) + R::from_f64(0.5)) / p;
        let xa = crate::numeric::e_real(ta) * R::from_f64(rx);
        let mut row = Complex::zero();
        for b in 0..points {
            let tb = (R::from_i64(b as i64) + R::from_f64(0.25)) / p;
            let yb = crate::numeric::e_real(tb) * R::from_f64(ry);
            row += f(xa, yb)?;
        }
        acc += row;
    }
    Ok(acc / (p * p))
}
