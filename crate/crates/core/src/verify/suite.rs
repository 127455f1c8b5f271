use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Error, Result};
use crate::ellsums::RPoly;
use crate::modular::{admissible, admissible_r, j_rational, mobius_with_factor, CharMatrix, UnimodularMatrix};
use crate::numeric::{Complex, Real, TruncationPolicy};
use crate::quadratic::QuadraticNumber;
use crate::thetakron::ModularParameter;

use super::{
    check_berndt, check_cocycle, check_degeneration, check_degeneration_edr, check_hat, check_reciprocity,
    check_transform, Tolerance, VerificationReport,
};

pub const SUITES: [&str; 7] = ["berndt", "transform", "cocycle", "reciprocity", "hat", "degeneration", "negative"];

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Cap on the number of cases; `None` runs the full suite.
    pub count: Option<usize>,
    /// Base truncation policy; suites raise `max_index` where their cases need it.
    pub policy: TruncationPolicy,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seed: 20240607, count: None, policy: TruncationPolicy::default() }
    }
}

impl SuiteOptions {
    fn take(&self, full: usize) -> usize {
        self.count.map_or(full, |c| c.min(full))
    }
}

pub fn run_suite<R: Real>(name: &str, opts: &SuiteOptions) -> Result<Vec<VerificationReport>> {
    match name {
        "berndt" => berndt_suite::<R>(opts),
        "transform" => transform_suite::<R>(opts),
        "cocycle" => cocycle_suite::<R>(opts),
        "reciprocity" => reciprocity_suite::<R>(opts),
        "hat" => hat_suite::<R>(opts),
        "degeneration" => degeneration_suite::<R>(opts),
        "negative" => Ok(negative_controls::<R>(opts)?.into_iter().map(|c| c.report).collect()),
        other => domain(format!("unknown suite {other:?}; expected one of {}", SUITES.join(", "))),
    }
}

/// Every SL₂(ℤ) matrix with all entries in [−bound, bound].
pub fn unimodular_box(bound: i64) -> Vec<UnimodularMatrix> {
    let r = -bound..=bound;
    let mut out = Vec::new();
    for a in r.clone() {
        for b in r.clone() {
            for c in r.clone() {
                for d in r.clone() {
                    if a * d - b * c == 1 {
                        out.push(UnimodularMatrix { a, b, c, d });
                    }
                }
            }
        }
    }
    out
}

pub fn random_char<R: Real>(rng: &mut impl Rng) -> CharMatrix<R> {
    let mut v = [0.0; 4];
    for e in v.iter_mut() {
        *e = rng.gen_range(0.02..0.98);
    }
    CharMatrix::from_f64(v)
}

pub fn random_tau<R: Real>(rng: &mut impl Rng) -> Result<ModularParameter<R>> {
    ModularParameter::from_f64(rng.gen_range(-0.5..0.5), rng.gen_range(0.8..1.6))
}

/// A reduced fraction n/d ≠ 0 with 1 ≤ d ≤ max_den and |n| ≤ 2d.
pub fn random_ratio(rng: &mut impl Rng, max_den: i64) -> Ratio<i64> {
    loop {
        let d = rng.gen_range(1..=max_den);
        let n = rng.gen_range(-2 * d..=2 * d);
        if n != 0 && num_integer::gcd(n, d) == 1 {
            return Ratio::new(n, d);
        }
    }
}

/// A point with |w| between `lo` and `hi`.
fn random_small(rng: &mut impl Rng, lo: f64, hi: f64) -> Complex<f64> {
    let rad = rng.gen_range(lo..hi);
    let t: f64 = rng.gen_range(0.0..1.0);
    let (s, c) = (std::f64::consts::TAU * t).sin_cos();
    Complex::new(rad * c, rad * s)
}

pub fn berndt_suite<R: Real>(opts: &SuiteOptions) -> Result<Vec<VerificationReport>> {
    let cases = [(5, 2), (5, 3), (2, 2), (2, 3)];
    let mut out = Vec::new();
    for &(c, l) in cases.iter().take(opts.take(cases.len())) {
        let (n, tol) = if l == 2 { (1_000_000, 1e-3) } else { (100_000, 1e-8) };
        let policy = opts.policy.with_max_index(n);
        out.push(check_berndt::<R>(l, c, None, &policy, Tolerance::rel(tol))?);
    }
    Ok(out)
}

pub fn transform_matrices() -> [UnimodularMatrix; 3] {
    [UnimodularMatrix::S, UnimodularMatrix { a: 2, b: 1, c: 1, d: 1 }, UnimodularMatrix { a: 1, b: -1, c: 1, d: 0 }]
}

pub fn transform_suite<R: Real>(opts: &SuiteOptions) -> Result<Vec<VerificationReport>> {
    let m = CharMatrix::<R>::from_f64([0.37, 0.71, 0.13, 0.42]);
    let alphas = [QuadraticNumber::sqrt(2)?, QuadraticNumber::golden()];
    let taus = [(0.0, 1.0), (0.3, 1.1)];
    let policy = opts.policy.with_max_index(400);
    let mut cases = Vec::new();
    for l in [4, 5, 3] {
        for v in transform_matrices() {
            for alpha in &alphas {
                for &tau in &taus {
                    cases.push((l, v, alpha.clone(), tau));
                }
            }
        }
    }
    let mut out = Vec::new();
    for (l, v, alpha, (re, im)) in cases.into_iter().take(opts.take(usize::MAX)) {
        let mp = ModularParameter::with_policy(Complex::from_f64(re, im), policy)?;
        let tol = Tolerance::rel(if l == 3 { 1e-3 } else { 1e-4 });
        out.push(check_transform(v, l, &alpha, &m, &mp, &policy, tol)?);
    }
    Ok(out)
}

pub fn cocycle_suite<R: Real>(opts: &SuiteOptions) -> Result<Vec<VerificationReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let pool = unimodular_box(5);
    let mut out = Vec::new();
    while out.len() < opts.take(500) {
        let v1 = *pool.choose(&mut rng).unwrap();
        let v2 = *pool.choose(&mut rng).unwrap();
        let l = rng.gen_range(2..=8);
        let m = random_char::<R>(&mut rng);
        let z = Complex::from_f64(rng.gen_range(-1.0..1.0), rng.gen_range(0.2..1.5));
        let mp = random_tau::<R>(&mut rng)?;
        if !admissible(v1, m) || !admissible(v2 * v1, m) {
            continue;
        }
        out.push(check_cocycle(v1, v2, l, z, &m, &mp, Tolerance::abs(1e-10))?);
    }
    Ok(out)
}

pub fn reciprocity_suite<R: Real>(opts: &SuiteOptions) -> Result<Vec<VerificationReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5eed_0001);
    let pool = unimodular_box(3);
    let mut out = Vec::new();
    while out.len() < opts.take(50) {
        let v = *pool.choose(&mut rng).unwrap();
        let r = random_ratio(&mut rng, 5);
        let l = rng.gen_range(1..=6);
        let m = random_char::<R>(&mut rng);
        let mp = random_tau::<R>(&mut rng)?;
        if *j_rational(v, r).numer() == 0 || !admissible(v, m) || !admissible_r(r, m) {
            continue;
        }
        out.push(check_reciprocity(v, l, r, &m, &mp, Tolerance::abs(1e-9))?);
    }
    Ok(out)
}

pub fn hat_suite<R: Real>(opts: &SuiteOptions) -> Result<Vec<VerificationReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5eed_0002);
    let pool = unimodular_box(2);
    let mut out = Vec::new();
    while out.len() < opts.take(20) {
        let v = *pool.choose(&mut rng).unwrap();
        let r = random_ratio(&mut rng, 3);
        let l = rng.gen_range(1..=3);
        let m = random_char::<R>(&mut rng);
        let mp = random_tau::<R>(&mut rng)?;
        let x = random_small(&mut rng, 0.05, 0.15);
        let y = random_small(&mut rng, 0.05, 0.15);
        let jr = j_rational(v, r);
        if *jr.numer() <= 0 || !admissible(v, m) || !admissible_r(r, m) {
            continue;
        }
        // Keep every F-argument of both sides away from the pole at 0.
        let (n, d) = (*r.numer() as f64, *r.denom() as f64);
        let vr = (r * v.a + v.b) / jr;
        let (vn, vd) = (*vr.numer() as f64, *vr.denom() as f64);
        let (vx, vy) = (x * v.a as f64 + y * v.b as f64, x * v.c as f64 + y * v.d as f64);
        let args = [y * n - x * d, vy * vn - vx * vd, x * -(v.c as f64) - y * v.d as f64, vy];
        if args.iter().any(|a| a.abs() < 0.03) {
            continue;
        }
        let (x, y) = (Complex::from_c64(x), Complex::from_c64(y));
        out.push(check_hat(v, l, r, &m, x, y, &mp, Tolerance::rel(1e-8))?);
    }
    Ok(out)
}

pub fn degeneration_suite<R: Real>(opts: &SuiteOptions) -> Result<Vec<VerificationReport>> {
    let policy = opts.policy.with_max_index(100);
    let al = QuadraticNumber::sqrt(2)?;
    let mut out = Vec::new();
    for v in [[0.37, 0.71, 0.13, 0.42], [0.37, 0.71, 0.13, 0.0]] {
        let m = CharMatrix::<R>::from_f64(v);
        out.push(check_degeneration(5, &al, &m, 8.0, &policy, Tolerance::abs(1e-6))?);
    }
    let edr_cases: [(usize, usize, Ratio<i64>, [f64; 4]); 4] = [
        (2, 3, Ratio::new(3, 4), [0.3, 0.1, 0.45, 0.7]),
        (1, 1, Ratio::new(2, 5), [0.3, 0.5, 0.45, 0.0]),
        (1, 1, Ratio::new(1, 2), [0.3, 0.5, 0.45, 0.0]),
        (1, 1, Ratio::new(2, 5), [0.3, 0.0, 0.45, 0.0]),
    ];
    for (mo, no, r, v) in edr_cases {
        let m = CharMatrix::<R>::from_f64(v);
        out.push(check_degeneration_edr(mo, no, r, &m, 8.0, &policy, Tolerance::abs(1e-8))?);
    }
    out.truncate(opts.take(out.len()));
    Ok(out)
}

/// One deliberate falsification and whether the checks caught it.
#[derive(Clone, Debug)]
pub struct ControlOutcome {
    pub identity: &'static str,
    pub control: &'static str,
    /// Report of the falsified run; for rejected inputs a synthetic report
    /// with pass = 0 and the error text in `params["error"]`.
    pub report: VerificationReport,
    /// True when the falsification was detected (pass = 0 or an error).
    pub caught: bool,
}

fn rejected(identity: &'static str, control: &'static str, err: &Error) -> ControlOutcome {
    let mut params = std::collections::BTreeMap::new();
    params.insert("control".to_string(), control.to_string());
    params.insert("error".to_string(), err.to_string());
    let report = VerificationReport {
        identity_id: identity.to_string(),
        params,
        lhs: [f64::NAN; 2],
        rhs: [f64::NAN; 2],
        abs_residual: f64::NAN,
        rel_residual: f64::NAN,
        tolerance: 0.0,
        pass: 0,
        terms_used: 0,
        elapsed_ms: 0,
    };
    ControlOutcome { identity, control, report, caught: true }
}

fn outcome(
    identity: &'static str,
    control: &'static str,
    r: Result<VerificationReport>,
    expect: fn(&Error) -> bool,
) -> ControlOutcome {
    match r {
        Ok(mut report) => {
            report.params.insert("control".into(), control.into());
            let caught = !report.passed();
            ControlOutcome { identity, control, report, caught }
        }
        Err(e) => {
            let mut o = rejected(identity, control, &e);
            o.caught = expect(&e);
            o
        }
    }
}

fn is_domain(e: &Error) -> bool {
    matches!(e, Error::Domain(_))
}

/// Falsified inputs for every identity: a flipped unit sign, a matrix that
/// loses det = 1, and a characteristic moved onto ℤ².
pub fn negative_controls<R: Real>(opts: &SuiteOptions) -> Result<Vec<ControlOutcome>> {
    let mut out = Vec::new();
    let policy5 = opts.policy.with_max_index(100_000);
    out.push(outcome(
        "berndt",
        "eps sign flip",
        check_berndt::<R>(3, 5, Some(1), &policy5, Tolerance::rel(1e-8)),
        is_domain,
    ));
    out.push(outcome(
        "berndt",
        "eps sign flip",
        check_berndt::<R>(3, 2, Some(1), &policy5, Tolerance::rel(1e-8)),
        is_domain,
    ));

    // det(2,1;1,2) = 3
    let broken = UnimodularMatrix::new(2, 1, 1, 2);
    for id in ["transform", "cocycle", "reciprocity", "hat"] {
        out.push(match &broken {
            Err(e) => rejected(id, "det ≠ 1 perturbation", e),
            Ok(_) => return domain("a matrix with det 3 was accepted"),
        });
    }

    let good = CharMatrix::<R>::from_f64([0.37, 0.71, 0.13, 0.42]);
    let on_lattice = CharMatrix::<R>::from_f64([0.37, 0.71, 1.0, 2.0]);
    let mp = ModularParameter::<R>::from_f64(0.1, 1.2)?;
    let s = UnimodularMatrix::S;
    let v = UnimodularMatrix { a: 1, b: 0, c: 1, d: 1 };
    let policy = opts.policy.with_max_index(50);
    let al = QuadraticNumber::sqrt(2)?;
    out.push(outcome(
        "transform",
        "y⃗ ∈ ℤ²",
        check_transform(s, 4, &al, &on_lattice, &mp, &policy, Tolerance::rel(1e-4)),
        is_domain,
    ));
    let z = Complex::from_f64(0.3, 0.7);
    out.push(outcome(
        "cocycle",
        "y⃗ ∈ ℤ²",
        check_cocycle(UnimodularMatrix::T, s, 5, z, &on_lattice, &mp, Tolerance::abs(1e-10)),
        is_domain,
    ));
    // x⃗ ∈ ℤ² violates M₂(r)
    let x_int = CharMatrix::<R>::from_f64([1.0, 0.0, 0.13, 0.42]);
    out.push(outcome(
        "reciprocity",
        "x⃗ ∈ ℤ²",
        check_reciprocity(v, 3, Ratio::new(2, 3), &x_int, &mp, Tolerance::abs(1e-9)),
        is_domain,
    ));
    let (x, y) = (Complex::from_f64(0.11, 0.07), Complex::from_f64(-0.05, 0.13));
    out.push(outcome(
        "hat",
        "y⃗ ∈ ℤ²",
        check_hat(s, 2, Ratio::new(1, 2), &on_lattice, x, y, &mp, Tolerance::rel(1e-8)),
        is_domain,
    ));
    out.push(outcome(
        "hat",
        "j(V; r) < 0",
        check_hat(s.neg(), 2, Ratio::new(1, 2), &good, x, y, &mp, Tolerance::rel(1e-8)),
        is_domain,
    ));
    // The right matrix applied to the wrong characteristic: V acts on M but
    // the second term sees M itself, so the identity must break.
    out.push(outcome(
        "cocycle",
        "characteristic not transported",
        check_cocycle_untransported(v, s, 4, z, &good, &mp),
        is_domain,
    ));
    Ok(out)
}

/// The cocycle combination with V₂'s polynomial taken at M instead of V₁M.
fn check_cocycle_untransported<R: Real>(
    v1: UnimodularMatrix,
    v2: UnimodularMatrix,
    l: u32,
    z: Complex<R>,
    m: &CharMatrix<R>,
    mp: &ModularParameter<R>,
) -> Result<VerificationReport> {
    let mut rep = super::ReportBuilder::new("cocycle");
    let v = v2 * v1;
    let (w, j1) = mobius_with_factor(v1, z)?;
    let r1 = RPoly::new(v1, l, m, mp)?.eval(z)?;
    let r2 = RPoly::new(v2, l, m, mp)?.eval(w)?;
    let r = RPoly::new(v, l, m, mp)?.eval(z)?;
    rep.param("V1", v1).param("V2", v2).param("l", l);
    Ok(rep.finish(r1 + j1.powi(l as i32 - 1) * r2, r, Tolerance::abs(1e-10)))
}
