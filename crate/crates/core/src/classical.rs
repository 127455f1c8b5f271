//! Bernoulli numbers and polynomials, Clausen functions and the classical
//! Dedekind-Rademacher and cotangent sums.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, One, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};
use crate::modular::rational_parts;
use crate::numeric::{frac_parts, riemann_zeta, Complex, Real};

pub type Rational = BigRational;

/// Largest Bernoulli index kept in the table.
pub const BERNOULLI_MAX: usize = 128;

struct Table {
    exact: Vec<BigRational>,
    split: Vec<(f64, f64)>,
}

fn table() -> &'static Table {
    static T: OnceLock<Table> = OnceLock::new();
    T.get_or_init(|| {
        let mut exact: Vec<BigRational> = Vec::with_capacity(BERNOULLI_MAX + 1);
        exact.push(BigRational::one());
        for m in 1..=BERNOULLI_MAX {
            // sum_{k<=m} C(m+1, k) B_k = 0
            let mut acc = BigRational::zero();
            let mut binom = BigInt::one();
            for (k, bk) in exact.iter().enumerate() {
                acc += bk * BigRational::from_integer(binom.clone());
                binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
            }
            exact.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
        }
        let split = exact.iter().map(split_rational).collect();
        Table { exact, split }
    })
}

fn split_big(b: &BigInt) -> (f64, f64) {
    let hi = b.to_f64().unwrap_or(f64::INFINITY);
    if !hi.is_finite() {
        return (hi, 0.0);
    }
    let rest = b - BigInt::from_f64(hi).unwrap_or_default();
    (hi, rest.to_f64().unwrap_or(0.0))
}

/// hi + lo approximation of an exact rational, good to about 2^-104.
fn split_rational(q: &BigRational) -> (f64, f64) {
    use crate::numeric::DoubleDouble;
    let (nh, nl) = split_big(q.numer());
    let (dh, dl) = split_big(q.denom());
    let v = DoubleDouble::from_parts(nh, nl) / DoubleDouble::from_parts(dh, dl);
    (v.hi(), v.lo())
}

pub fn bernoulli_number(k: usize) -> Result<Rational> {
    table()
        .exact
        .get(k)
        .cloned()
        .ok_or_else(|| Error::Capacity(format!("B_{k} beyond table bound {BERNOULLI_MAX}")))
}

pub fn bernoulli_real<R: Real>(k: usize) -> Result<R> {
    table()
        .split
        .get(k)
        .map(|&(h, l)| R::from_parts(h, l))
        .ok_or_else(|| Error::Capacity(format!("B_{k} beyond table bound {BERNOULLI_MAX}")))
}

/// Binomial coefficient; exact for n ≤ 128.
pub fn binomial(n: usize, k: usize) -> i128 {
    if k > n {
        return 0;
    }
    static PASCAL: OnceLock<Vec<Vec<i128>>> = OnceLock::new();
    if n <= BERNOULLI_MAX {
        let rows = PASCAL.get_or_init(|| {
            let mut rows: Vec<Vec<i128>> = vec![vec![1]];
            for i in 1..=BERNOULLI_MAX {
                let prev = &rows[i - 1];
                let row = (0..=i)
                    .map(|j| if j == 0 || j == i { 1 } else { prev[j - 1] + prev[j] })
                    .collect();
                rows.push(row);
            }
            rows
        });
        return rows[n][k];
    }
    let k = k.min(n - k);
    let mut c: i128 = 1;
    for i in 0..k {
        // c·(n−i)/(i+1) is integral; divide first to stay in range.
        let (num, den) = ((n - i) as i128, (i + 1) as i128);
        let g = num_integer::gcd(c, den);
        c = (c / g) * (num / (den / g));
    }
    c
}

pub fn factorial<R: Real>(n: usize) -> R {
    (1..=n).fold(R::one(), |a, k| a * R::from_i64(k as i64))
}

/// Bernoulli polynomial B_m(x).
pub fn bernoulli_poly<R: Real>(m: usize, x: R) -> Result<R> {
    if m > BERNOULLI_MAX {
        return Err(Error::Capacity(format!("B_{m}(x) beyond table bound")));
    }
    // Horner in x: B_m(x) = sum_j C(m,j) B_{m-j} x^j
    let mut acc = R::zero();
    for j in (0..=m).rev() {
        acc = acc * x + R::from_i128(binomial(m, j)) * bernoulli_real::<R>(m - j)?;
    }
    Ok(acc)
}

/// B̃_m(x) = B_m({x}), with the midpoint value 0 for B̃_1 at integers.
pub fn periodic_bernoulli<R: Real>(m: usize, x: R) -> Result<R> {
    let f = frac_parts(x);
    if m == 1 && f.is_int {
        return Ok(R::zero());
    }
    bernoulli_poly(m, f.frac)
}

/// `sum_{m>=1} e(mt)/m^l` for real t and l ≥ 2.
///
/// Uses the expansion of Li_l(e^μ) in powers of μ = 2πi<<t>>, which converges
/// geometrically with ratio |t| ≤ 1/2.
pub fn polylog_unit<R: Real>(l: u32, t: R) -> Result<Complex<R>> {
    if l < 2 {
        return domain(format!("polylog order {l} < 2"));
    }
    let (_, t) = crate::numeric::angle_split(t);
    if t == R::zero() {
        return Ok(Complex::real(riemann_zeta(l)?));
    }
    let mu = Complex::new(R::zero(), R::two_pi() * t);
    let li = l as usize;
    let mut acc = Complex::zero();
    let mut pw = Complex::one(); // mu^k / k!
    let mut harmonic = R::zero();
    for k in 1..li {
        harmonic += R::one() / R::from_i64(k as i64);
    }
    let tol = R::EPSILON * 1e-2;
    for k in 0..=(li + BERNOULLI_MAX - 1) {
        if k > 0 {
            pw = pw * mu / R::from_i64(k as i64);
        }
        if k + 1 == li {
            let abs_mu = R::two_pi() * t.abs();
            let arg = if t > R::zero() { -R::pi() / R::from_f64(2.0) } else { R::pi() / R::from_f64(2.0) };
            let log = Complex::new(abs_mu.ln(), arg);
            acc += pw * (Complex::real(harmonic) - log);
            continue;
        }
        let z: R = if k + 2 <= li {
            riemann_zeta((li - k) as u32)?
        } else if k == li {
            R::from_f64(-0.5)
        } else {
            let j = k - li;
            -bernoulli_real::<R>(j + 1)? / R::from_i64(j as i64 + 1)
        };
        let term = pw * z;
        acc += term;
        if k > li + 2 && term.abs().to_f64() < tol * acc.abs().to_f64().max(1e-300) && z != R::zero() {
            return Ok(acc);
        }
    }
    // Past the table the remaining terms are below 2^-120 relative.
    Ok(acc)
}

/// Cl_l(x): sine series for even l, cosine series for odd l.
pub fn clausen<R: Real>(l: u32, x: R) -> Result<R> {
    let li = polylog_unit(l, x)?;
    Ok(if l % 2 == 0 { li.im } else { li.re })
}

/// S_{m,n}(r, x, y) = sum_{j mod d(r)} B̃_m((j+y)/d) B̃_n(n (j+y)/d − x).
pub fn gen_dr_sum<R: Real>(m: usize, n: usize, r: Ratio<i64>, x: R, y: R) -> Result<R> {
    let (nr, dr) = rational_parts(r);
    let d = R::from_i64(dr);
    let mut acc = R::zero();
    for j in 0..dr {
        let u = (R::from_i64(j) + y) / d;
        let v = R::from_i64(nr) * u - x;
        acc += periodic_bernoulli(m, u)? * periodic_bernoulli(n, v)?;
    }
    Ok(acc)
}

fn cot_pi<R: Real>(u: R) -> R {
    let (c, s) = (u / R::from_f64(2.0)).cis_turns();
    c / s
}

/// Dieter's cotangent sum 𝔠(r, x, y). Terms where either cotangent argument
/// is integral are left out.
pub fn cotangent_sum<R: Real>(r: Ratio<i64>, x: R, y: R) -> R {
    let (nr, dr) = rational_parts(r);
    let d = R::from_i64(dr);
    let mut acc = R::zero();
    for j in 0..dr {
        let u = (R::from_i64(j) + y) / d;
        let v = R::from_i64(nr) * u - x;
        if frac_parts(u).is_int || frac_parts(v).is_int {
            continue;
        }
        acc += cot_pi(u) * cot_pi(v);
    }
    acc / d
}

/// Classical Dedekind sum s(h, k) straight from its definition, used as a
/// reference for the normalisation of [`gen_dr_sum`].
pub fn dedekind_sum(h: i64, k: i64) -> BigRational {
    let saw = |num: i64, den: i64| -> BigRational {
        if num.rem_euclid(den) == 0 {
            return BigRational::zero();
        }
        let f = Ratio::new(BigInt::from(num.rem_euclid(den)), BigInt::from(den));
        f - Ratio::new(BigInt::one(), BigInt::from(2))
    };
    let mut s = BigRational::zero();
    for j in 1..k.abs() {
        s += saw(j, k) * saw(h * j, k);
    }
    s
}

pub(crate) fn bigrational_to_real<R: Real>(q: &BigRational) -> R {
    let (h, l) = split_rational(q);
    R::from_parts(h, l)
}
