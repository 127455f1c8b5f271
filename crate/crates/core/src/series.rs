//! Cotangent-type Dirichlet series.
//!
//! ```text
//! ξ(s, α)           = Σ_{n≥1} cot(πnα) / n^s
//! H(α, s, x, y)     = Σ e(ny) n^{s−1} e(n<x>α)/(1 − e(nα)) + e(s/2) Σ e(−ny) n^{s−1} e(n<−x>α)/(1 − e(nα))
//! ξ̃(s, α, x, y)     = −H(α, 1−s, −y, x)
//!                   = Σ_{m≠0} e(mx)/m^s · e(αm<−y>)/(e(αm) − 1)        (y ∉ ℤ)
//! ξ̃(l, α, M; τ)     = Σ'_{m',m} e(m'x' + mx)/(τm' + m)^l · F(−y⃗; α(τm' + m); τ)
//! ```
//!
//! `<x>` is the representative of x mod 1 in (0, 1].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::classical::{bernoulli_number, bigrational_to_real, binomial, clausen, factorial};
use crate::error::{domain, Error, Result};
use crate::modular::CharMatrix;
use crate::numeric::{e_real, frac_parts, pairwise_sum, riemann_zeta, Complex, Real, SeriesResult, TruncationPolicy};
use crate::quadratic::QuadraticNumber;
use crate::thetakron::{KroneckerF, ModularParameter};

const CHUNK: usize = 2048;

/// Σ_{n=1}^{count} term(n), chunked so the reduction order is fixed.
fn chunked_sum<R, F>(count: usize, term: F) -> Result<Complex<R>>
where
    R: Real,
    F: Fn(i64) -> Result<Complex<R>> + Sync,
{
    let chunks = count.div_ceil(CHUNK);
    let partial: Vec<Complex<R>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK + 1;
            let hi = ((c + 1) * CHUNK).min(count);
            let mut acc = Complex::zero();
            for n in lo..=hi {
                acc += term(n as i64)?;
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    Ok(pairwise_sum(&partial))
}

fn require_irrational(alpha: &QuadraticNumber) -> Result<()> {
    if alpha.is_rational() {
        return domain(format!("α = {alpha} is rational"));
    }
    Ok(())
}

/// <x> in (0, 1].
pub fn angle_bracket<R: Real>(x: R) -> R {
    let f = frac_parts(x);
    if f.is_int {
        R::one()
    } else {
        f.frac
    }
}

/// Σ_{n>N} n^{-p} ≤ N^{1−p}/(p−1); infinite for p ≤ 1.
fn power_tail(n: usize, p: i64) -> f64 {
    if p <= 1 {
        return f64::INFINITY;
    }
    (n as f64).powi(1 - p as i32) / (p - 1) as f64
}

fn cot_turn<R: Real>(f: R) -> R {
    let (c, s) = (f / R::from_f64(2.0)).cis_turns();
    c / s
}

/// ξ(s, α) = Σ_{n≤N} cot(πnα)/n^s with N = `policy.max_index`.
///
/// `est_tail` bounds the rest by |cot πnα| ≤ C n/π with C from
/// [`QuadraticNumber::approx_constant`].
pub fn cot_dirichlet<R: Real>(s: u32, alpha: &QuadraticNumber, policy: &TruncationPolicy) -> Result<SeriesResult<R>> {
    if s < 2 {
        return domain(format!("ξ(s, α) needs s ≥ 2, got {s}"));
    }
    require_irrational(alpha)?;
    policy.validate()?;
    let n_max = policy.max_index;
    let value = chunked_sum(n_max, |n| {
        let (_, f) = alpha.split_multiple::<R>(n);
        let npow = R::from_i64(n).powi(s as i32);
        Ok(Complex::real(cot_turn(f) / npow))
    })?;
    let c = alpha.approx_constant()?;
    let est_tail = c / std::f64::consts::PI * power_tail(n_max, s as i64 - 1);
    Ok(SeriesResult { value, est_tail, terms_used: n_max })
}

/// Checks α = (a + b√c)/2 with a² − cb² = 4ε.
fn check_pell(alpha: &QuadraticNumber, eps: i32) -> Result<()> {
    if eps != 1 && eps != -1 {
        return domain(format!("ε must be ±1, got {eps}"));
    }
    require_irrational(alpha)?;
    let (p, q, _, den) = alpha.parts();
    if (2 * p) % den != 0 || (2 * q) % den != 0 {
        return domain(format!("2α = 2·{alpha} does not have integer coordinates"));
    }
    let (nn, nd) = alpha.norm()?;
    if nn != eps as i128 * nd {
        return domain(format!("N(α) = {nn}/{nd}, expected ε = {eps}"));
    }
    Ok(())
}

/// (P + Q√D) with exact rational P, Q.
#[derive(Clone, Debug)]
struct Surd {
    p: BigRational,
    q: BigRational,
}

impl Surd {
    fn from_quadratic(a: &QuadraticNumber) -> Self {
        let (p, q, _, den) = a.parts();
        let den = BigInt::from(den);
        Surd {
            p: BigRational::new(BigInt::from(p), den.clone()),
            q: BigRational::new(BigInt::from(q), den),
        }
    }
}

/// ξ(2l−1, α) solved from Berndt's closed form
///
/// ```text
/// (1 − εα^{2l−2}) ξ(2l−1, α) = (−1)^{l−1} (2π)^{2l−1}/(2l)! · Σ_{k=0}^{l} C(2l,2k) α^{2k−1} B_{2k} B_{2l−2k}
/// ```
///
/// for α = (a + b√c)/2 with a² − cb² = 4ε. The sum and the division are done
/// in exact arithmetic. The divisor never vanishes: α^{2l−2} = ε would make
/// α a root of unity times ±1, which is rational.
pub fn berndt_rhs<R: Real>(l: u32, alpha: &QuadraticNumber, eps: i32) -> Result<R> {
    if l < 2 {
        return domain(format!("Berndt's formula needs l ≥ 2, got {l}"));
    }
    check_pell(alpha, eps)?;
    berndt_rhs_unchecked(l, alpha, eps)
}

/// [`berndt_rhs`] without the a² − cb² = 4ε check, for negative controls.
pub fn berndt_rhs_unchecked<R: Real>(l: u32, alpha: &QuadraticNumber, eps: i32) -> Result<R> {
    let li = l as usize;
    let d = alpha.radicand();
    let mut acc = Surd { p: BigRational::zero(), q: BigRational::zero() };
    for k in 0..=li {
        let coef = BigRational::from_integer(BigInt::from(binomial(2 * li, 2 * k)))
            * bernoulli_number(2 * k)?
            * bernoulli_number(2 * li - 2 * k)?;
        if coef.is_zero() {
            continue;
        }
        let pw = Surd::from_quadratic(&alpha.powi(2 * k as i32 - 1)?);
        acc.p += &coef * pw.p;
        acc.q += coef * pw.q;
    }
    // Divide by u + v√D = 1 − εα^{2l−2}.
    let a2 = Surd::from_quadratic(&alpha.powi(2 * l as i32 - 2)?);
    let e = BigRational::from_integer(BigInt::from(eps));
    let u = BigRational::one() - &e * a2.p;
    let v = -e * a2.q;
    let dr = BigRational::from_integer(BigInt::from(d));
    let norm = &u * &u - &dr * &v * &v;
    if norm.is_zero() {
        return Err(Error::Domain("1 − εα^{2l−2} vanishes".into()));
    }
    let p = (&acc.p * &u - &dr * &acc.q * &v) / &norm;
    let q = (&acc.q * &u - &acc.p * &v) / &norm;
    let surd = bigrational_to_real::<R>(&p) + bigrational_to_real::<R>(&q) * R::from_i64(d as i64).sqrt();
    let sign = if l % 2 == 1 { R::one() } else { -R::one() };
    let pref = R::two_pi().powi(2 * l as i32 - 1) / factorial::<R>(2 * li);
    Ok(sign * pref * surd)
}

/// e(θ<x>)/(1 − e(θ)) for θ = nα split as k + f.
fn arakawa_factor<R: Real>(k: i64, f: R, bracket: R) -> Complex<R> {
    let num = e_real(R::from_i64(k) * bracket + f * bracket);
    let den = -crate::thetakron::em1_real(f);
    num / den
}

/// Arakawa's H(α, s, x, y) for integer s < 0, truncated at n ≤ max_index.
pub fn arakawa_h<R: Real>(
    alpha: &QuadraticNumber,
    s: i64,
    x: R,
    y: R,
    policy: &TruncationPolicy,
) -> Result<SeriesResult<R>> {
    if s >= 0 {
        return domain(format!("H(α, s, x, y) is only summed for s < 0, got {s}"));
    }
    require_irrational(alpha)?;
    policy.validate()?;
    let bx = angle_bracket(x);
    let bmx = angle_bracket(-x);
    // e(s/2) = (−1)^s for integer s
    let es2 = if s % 2 == 0 { R::one() } else { -R::one() };
    let p = (1 - s) as i32;
    let n_max = policy.max_index;
    let value = chunked_sum(n_max, |n| {
        let (k, f) = alpha.split_multiple::<R>(n);
        let rn = R::from_i64(n);
        let w = R::one() / rn.powi(p);
        let a = e_real(rn * y) * arakawa_factor(k, f, bx);
        let b = e_real(-(rn * y)) * arakawa_factor(k, f, bmx) * es2;
        Ok((a + b) * w)
    })?;
    // |1 − e(f)| = 2|sin πf| ≥ 4|f| ≥ 4/(Cn)
    let c = alpha.approx_constant()?;
    let est_tail = 2.0 * c / 4.0 * power_tail(n_max, p as i64 - 1);
    Ok(SeriesResult { value, est_tail, terms_used: 2 * n_max })
}

/// ξ̃(s, α, x, y) = −H(α, 1−s, −y, x). Valid for every y.
pub fn gen_cot_h<R: Real>(s: u32, alpha: &QuadraticNumber, x: R, y: R, policy: &TruncationPolicy) -> Result<SeriesResult<R>> {
    if s < 3 {
        return domain(format!("ξ̃(s, α, x, y) needs s ≥ 3, got {s}"));
    }
    let h = arakawa_h(alpha, 1 - s as i64, -y, x, policy)?;
    Ok(SeriesResult { value: -h.value, ..h })
}

/// ξ̃(s, α, x, y) from the two-sided sum over m ≠ 0. Needs y ∉ ℤ.
pub fn gen_cot_two_sided<R: Real>(
    s: u32,
    alpha: &QuadraticNumber,
    x: R,
    y: R,
    policy: &TruncationPolicy,
) -> Result<SeriesResult<R>> {
    if s < 3 {
        return domain(format!("ξ̃(s, α, x, y) needs s ≥ 3, got {s}"));
    }
    if frac_parts(y).is_int {
        return domain("the two-sided form of ξ̃ needs y ∉ ℤ");
    }
    require_irrational(alpha)?;
    policy.validate()?;
    let a = angle_bracket(-y);
    let n_max = policy.max_index;
    let value = chunked_sum(n_max, |n| {
        let mut acc = Complex::zero();
        for m in [n, -n] {
            let (k, f) = alpha.split_multiple::<R>(m);
            let rm = R::from_i64(m);
            let num = e_real(rm * x) * e_real(R::from_i64(k) * a + f * a);
            acc += num / (crate::thetakron::em1_real(f) * rm.powi(s as i32));
        }
        Ok(acc)
    })?;
    let c = alpha.approx_constant()?;
    let est_tail = 2.0 * c / 4.0 * power_tail(n_max, s as i64 - 1);
    Ok(SeriesResult { value, est_tail, terms_used: 2 * n_max })
}

/// ξ̃(s, α, x, y): the two-sided sum when y ∉ ℤ, otherwise through H.
pub fn gen_cot<R: Real>(s: u32, alpha: &QuadraticNumber, x: R, y: R, policy: &TruncationPolicy) -> Result<SeriesResult<R>> {
    if frac_parts(y).is_int {
        gen_cot_h(s, alpha, x, y, policy)
    } else {
        gen_cot_two_sided(s, alpha, x, y, policy)
    }
}

/// Inputs of the elliptic series ξ̃(l, α, M; τ).
#[derive(Clone, Debug)]
pub struct EllipticSeriesParams<R> {
    pub l: u32,
    pub alpha: QuadraticNumber,
    pub m: CharMatrix<R>,
    pub mp: ModularParameter<R>,
    pub policy: TruncationPolicy,
}

impl<R: Real> EllipticSeriesParams<R> {
    pub fn new(l: u32, alpha: QuadraticNumber, m: CharMatrix<R>, mp: ModularParameter<R>) -> Self {
        let policy = *mp.policy();
        EllipticSeriesParams { l, alpha, m, mp, policy }
    }

    pub fn with_max_index(mut self, n: usize) -> Self {
        self.policy.max_index = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.l < 3 {
            return domain(format!("the elliptic series needs l ≥ 3, got {}", self.l));
        }
        if self.m.y.is_integral() {
            return domain("the elliptic series needs y⃗ ∉ ℤ²");
        }
        require_irrational(&self.alpha)?;
        self.policy.validate()
    }
}

/// Im τ / max(1, |τ|), so that |τr' + r| ≥ κ max(|r'|, |r|).
fn lattice_kappa<R: Real>(tau: Complex<R>) -> f64 {
    let t = tau.to_f64();
    t.im / t.abs().max(1.0)
}

/// Bound on |X F(x⃗; X)| over the reduced cell, from the boundary maximum.
fn cell_bound<R: Real>(f: &KroneckerF<R>) -> Result<f64> {
    let tau = f.modular_parameter().tau();
    let half = R::from_f64(0.5);
    let steps = 64;
    let mut best: f64 = 0.0;
    for i in 0..=steps {
        let t = R::from_f64(i as f64 / steps as f64 - 0.5);
        for (a, b) in [(half, t), (-half, t), (t, half), (t, -half)] {
            let x = tau * a + b;
            best = best.max((x * f.eval_cell(a, b)?).abs().to_f64());
        }
    }
    Ok(1.25 * best)
}

/// ξ̃(l, α, M; τ) summed over the square max(|m'|, |m|) ≤ max_index.
///
/// F's argument is moved into the reduced cell with
/// `F(x⃗; X + kaτ + kb) = e(x'ka + x kb) F(x⃗; X)`, and shells are reduced in
/// a fixed order, so the value does not depend on the thread count.
///
/// For l ≥ 4 `est_tail` is the majorant 8·C·C_F·κ^{−l−1}·N^{3−l}/(l−3), with
/// C the approximation constant of α and C_F a bound for |X F| on the cell.
/// At l = 3 that bound diverges, and the size of the last shell times N is
/// reported instead; it is an estimate, not a bound.
pub fn elliptic_gen_cot<R: Real>(params: &EllipticSeriesParams<R>) -> Result<SeriesResult<R>> {
    params.validate()?;
    let n_max = params.policy.max_index as i64;
    let alpha = &params.alpha;
    let mp = &params.mp;
    let tau = mp.tau();
    let xv = params.m.x;
    let char_f = -params.m.y;
    let f = KroneckerF::new(char_f, mp)?;
    let splits: Vec<(i64, R)> = (-n_max..=n_max).map(|n| alpha.split_multiple::<R>(n)).collect();
    let split = |n: i64| splits[(n + n_max) as usize];
    let l = params.l as i32;

    let term = |mp_: i64, m: i64| -> Result<Complex<R>> {
        let (ka, a) = split(mp_);
        let (kb, b) = split(m);
        let phase = R::from_i64(mp_) * xv.xp + R::from_i64(m) * xv.x
            + R::from_i64(ka) * char_f.xp
            + R::from_i64(kb) * char_f.x;
        let w = tau * R::from_i64(mp_) + R::from_i64(m);
        Ok(e_real(phase) * f.eval_cell_split(a, b)? / w.powi(l))
    };

    let shells: Vec<Complex<R>> = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let mut acc = Complex::zero();
            for k in -n..n {
                acc += term(n, k)?;
                acc += term(-n, -k)?;
                acc += term(-k, n)?;
                acc += term(k, -n)?;
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let value = pairwise_sum(&shells);
    let terms_used = (4 * n_max * (n_max + 1)) as usize;

    let est_tail = if l >= 4 {
        let c = alpha.approx_constant()?;
        let cf = cell_bound(&f)?;
        let kappa = lattice_kappa(tau);
        8.0 * c * cf * kappa.powi(-l - 1) * power_tail(n_max as usize, l as i64 - 2)
    } else {
        shells.last().map(|s| s.abs().to_f64()).unwrap_or(0.0) * n_max as f64
    };
    Ok(SeriesResult { value, est_tail, terms_used })
}

/// The classical side of the τ → i∞ limit of the real part of
/// (l+1)!/(2πi)^{l+1}·ξ̃(l, α, M; τ):
///
/// ```text
/// (l+1)!/(2πi)^l · (ξ̃(l, α, x, y) − ψ χ(y) Cl_l(x)),   ψ = 1 (l odd), i (l even)
/// ```
pub fn degeneration_rhs<R: Real>(l: u32, alpha: &QuadraticNumber, m: &CharMatrix<R>, policy: &TruncationPolicy) -> Result<SeriesResult<R>> {
    if l < 3 {
        return domain(format!("the degeneration needs l ≥ 3, got {l}"));
    }
    if m.y.is_integral() {
        return domain("the degeneration needs y⃗ ∉ ℤ²");
    }
    let (x, y) = (m.x.x, m.y.x);
    let g = gen_cot(l, alpha, x, y, policy)?;
    let mut inner = g.value;
    if frac_parts(y).is_int {
        let cl = clausen(l, x)?;
        let psi = if l % 2 == 1 { Complex::one() } else { Complex::i() };
        inner -= psi * cl;
    }
    let pref = Complex::real(factorial::<R>(l as usize + 1)) / Complex::<R>::two_pi_i().powi(l as i32);
    let scale = pref.abs().to_f64();
    Ok(SeriesResult { value: pref * inner, est_tail: scale * g.est_tail, terms_used: g.terms_used })
}

/// ξ(s, α) for odd s recovered from ξ̃: ξ(s, α) = i(ξ̃(s, α, 0, 1) − ζ(s)).
pub fn cot_dirichlet_from_gen_cot<R: Real>(s: u32, alpha: &QuadraticNumber, policy: &TruncationPolicy) -> Result<SeriesResult<R>> {
    if s % 2 == 0 {
        return domain("ξ̃(s, α, 0, 1) vanishes identically for even s");
    }
    let g = gen_cot_h(s, alpha, R::zero(), R::one(), policy)?;
    let z: R = riemann_zeta(s)?;
    Ok(SeriesResult { value: Complex::i() * (g.value - z), ..g })
}
