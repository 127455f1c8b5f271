mod common;

use common::*;
use ellcot::classical::{bernoulli_poly, factorial, periodic_bernoulli};
use ellcot::ellsums::r_poly;
use ellcot::modular::{CharMatrix, UnimodularMatrix};
use ellcot::numeric::riemann_zeta;
use ellcot::quadratic::{pell_4, QuadraticNumber};
use ellcot::series::{berndt_rhs, cot_dirichlet, cot_dirichlet_from_gen_cot, elliptic_gen_cot, EllipticSeriesParams};
use ellcot::thetakron::{elliptic_bernoulli, theta, theta_prime0, ModularParameter};
use ellcot::verify::{check_reciprocity, check_transform, Tolerance};
use ellcot::{Complex, TruncationPolicy};
use num_rational::Ratio;

fn mp(re: f64, im: f64) -> Mp {
    ModularParameter::from_f64(re, im).unwrap()
}

#[test]
fn bernoulli_matches_laurent_coefficients() {
    for tau in [mp(0.0, 1.0), mp(0.3, 1.1), mp(-0.4, 0.9)] {
        for xv in [cv(0.37, 0.71), cv(0.5, 0.0), cv(0.1, 0.45), cv(-0.3, 1.8)] {
            for m in 0..=6 {
                let rel = cauchy_vs_bernoulli(m, xv, &tau, 0.1, 64).unwrap();
                assert!(rel < 1e-8, "m={m} {xv:?}: {rel:e}");
            }
        }
    }
}

#[test]
fn bernoulli_matches_lattice_sums() {
    let tau = mp(0.3, 1.1);
    for k in [3, 4] {
        for xv in [cv(0.3, 0.7), cv(0.0, 0.0), cv(0.15, 0.5)] {
            assert!(eisenstein_error(k, xv, &tau, 400).unwrap() < 1e-4);
        }
    }
    let e = eisenstein_error(4, cv(0.0, 0.0), &mp(0.0, 1.0), 200).unwrap();
    assert!(e < 1e-6, "{e:e}");
}

#[test]
fn lattice_sums_approach_bernoulli() {
    let tau = mp(0.3, 1.1);
    for k in [3, 4] {
        let errs: Vec<f64> = [50, 100, 200, 400].iter().map(|&c| eisenstein_error(k, cv(0.3, 0.7), &tau, c).unwrap()).collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "k={k}: {errs:?}");
    }
    assert!(ellcot::thetakron::eisenstein_bernoulli_oracle(2, cv(0.3, 0.7), &tau, 10).is_err());
}

#[test]
fn derivative_matches_central_difference() {
    let tau = mp(0.3, 1.1);
    for xv in [cv(0.37, 0.71), cv(0.9, 0.2), cv(0.25, 0.0)] {
        for x in [(0.21, -0.13), (-0.3, 0.1), (0.05, 0.33)] {
            let r = derivative_vs_difference(xv, C::from_f64(x.0, x.1), &tau, 1e-5).unwrap();
            assert!(r < 1e-6, "{xv:?} {x:?}: {r:e}");
        }
    }
}

#[test]
fn generalized_cotangent_paths_agree() {
    let sqrt2 = QuadraticNumber::sqrt(2).unwrap();
    assert!(gen_cot_paths(5, &sqrt2, 0.3, 0.4, 50_000).unwrap() < 1e-8);
    for alpha in [QuadraticNumber::golden(), QuadraticNumber::sqrt(3).unwrap()] {
        for (x, y) in [(0.1, 0.8), (0.55, 0.25), (0.0, 0.5)] {
            for s in [3, 5, 6] {
                let terms = if s == 3 { 400_000 } else { 50_000 };
                let tol = if s == 3 { 1e-6 } else { 1e-8 };
                let d = gen_cot_paths(s, &alpha, x, y, terms).unwrap();
                assert!(d < tol, "s={s} ({x},{y}): {d:e}");
            }
        }
    }
}

#[test]
fn constant_term_of_hat_sum() {
    let tau = mp(0.1, 1.2);
    let m = CharMatrix::from_f64([0.37, 0.71, 0.13, 0.42]);
    for r in [Ratio::new(2, 3), Ratio::new(3, 1), Ratio::new(-5, 3), Ratio::new(7, 2)] {
        for l in 1..=4 {
            let rel = constant_term_identity(l, r, &m, &tau, 32).unwrap();
            assert!(rel < 1e-6, "r={r} l={l}: {rel:e}");
        }
    }
}

#[test]
fn bernoulli_degenerates_to_polynomials() {
    let tau = mp(0.0, 8.0);
    let got = elliptic_bernoulli(3, cv(0.2, 0.6), &tau).unwrap();
    let want = bernoulli_poly::<f64>(3, 0.6).unwrap();
    // the first q-term is 3(1 − x)² e^{−2π·8(1 − x)} ≈ 9e-10 here
    let first = 3.0 * 0.16 * (-2.0 * std::f64::consts::PI * 8.0 * 0.4).exp();
    assert!((got - Complex::real(want)).abs() < 1.05 * first);
    // with x' = 0 the corrections decay like e^{−2π·8·min(x, 1 − x)}
    for m in 1..=6 {
        for x in [0.35, 0.5, 0.6] {
            let got = elliptic_bernoulli(m, cv(0.0, x), &tau).unwrap();
            let want = periodic_bernoulli::<f64>(m, x).unwrap();
            assert!((got - Complex::real(want)).abs() < 1e-6, "m={m} x={x}");
        }
    }
}

#[test]
fn period_polynomial_degenerates() {
    // with x⃗ = (0, x), y⃗ = (0, y) the elliptic Bernoulli factors become B̃_n
    let tau = mp(0.0, 8.0);
    let (x, y) = (0.45, 0.55);
    let m = CharMatrix::from_f64([0.0, x, 0.0, y]);
    let z = C::from_f64(0.3, 0.4);
    for l in 3..=6usize {
        let got = r_poly(UnimodularMatrix::S, l as u32, &m, z, &tau).unwrap();
        let mut want = C::zero();
        for k in -1i32..=l as i32 {
            let b1 = periodic_bernoulli::<f64>((k + 1) as usize, y).unwrap();
            let b2 = periodic_bernoulli::<f64>((l as i32 - k) as usize, x).unwrap();
            let binom = factorial::<f64>(l + 1) / (factorial::<f64>((k + 1) as usize) * factorial::<f64>((l as i32 - k) as usize));
            want += (-z).powi(k) * (b1 * b2 * binom);
        }
        want = want * C::two_pi_i().powi(l as i32 + 1) / factorial::<f64>(l + 1);
        assert!(residual(got, want) < 1e-6, "l={l}: {got} vs {want}");
    }
}

#[test]
fn theta_derivative_product_form() {
    // |θ'(0; i)| = 2π q^{1/8} Π (1 − q^m)³, q = e^{−2π}; the sign comes from
    // differencing the series for θ itself
    let q = (-2.0 * std::f64::consts::PI).exp();
    let mut prod = 1.0;
    for m in 1..40 {
        prod *= (1.0 - q.powi(m)).powi(3);
    }
    let tau = mp(0.0, 1.0);
    let h = 1e-4;
    let fd = (theta(C::real(h), &tau).unwrap() - theta(C::real(-h), &tau).unwrap()) / (2.0 * h);
    let want = fd.re.signum() * 2.0 * std::f64::consts::PI * q.powf(0.125) * prod;
    assert!(residual(fd, C::real(want)) < 1e-7);
    let got = theta_prime0(&tau);
    assert!(residual(got, C::real(want)) < 1e-12, "{got} vs {want}");
}

#[test]
fn elliptic_series_differences_shrink() {
    let tau = mp(0.0, 1.0);
    let m = CharMatrix::from_f64([0.37, 0.71, 0.13, 0.42]);
    let p = EllipticSeriesParams::new(5, QuadraticNumber::sqrt(2).unwrap(), m, tau);
    let vals: Vec<C> = [100, 200, 400, 800]
        .iter()
        .map(|&n| elliptic_gen_cot(&p.clone().with_max_index(n)).unwrap().value)
        .collect();
    let diffs: Vec<f64> = vals.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    assert!(diffs.windows(2).all(|w| w[1] < w[0]), "{diffs:?}");
}

#[test]
fn berndt_chain() {
    for c in [5, 2] {
        let (a, b, eps) = pell_4(c).unwrap();
        let alpha = QuadraticNumber::new(a, b, c, 2).unwrap();
        for (l, n) in [(2u32, 1_000_000usize), (3, 100_000)] {
            let p = TruncationPolicy::default().with_max_index(n);
            let s = cot_dirichlet::<f64>(2 * l - 1, &alpha, &p).unwrap();
            let closed: f64 = berndt_rhs(l, &alpha, eps).unwrap();
            assert!((s.value.re - closed).abs() < s.est_tail + 1e-8, "c={c} l={l}");
        }
    }
}

#[test]
fn cotangent_series_triangle() {
    // ξ(s, α) = i(ξ̃(s, α, 0, 1) − ζ(s)) for odd s, three independent routes
    let p = TruncationPolicy::default().with_max_index(100_000);
    for alpha in [QuadraticNumber::golden(), QuadraticNumber::sqrt(2).unwrap()] {
        for s in [3u32, 5, 7] {
            let direct = cot_dirichlet::<f64>(s, &alpha, &p).unwrap().value;
            let via = cot_dirichlet_from_gen_cot::<f64>(s, &alpha, &p).unwrap().value;
            let g = ellcot::series::gen_cot::<f64>(s, &alpha, 0.0, 1.0, &p).unwrap().value;
            let zeta: f64 = riemann_zeta(s).unwrap();
            let third = C::i() * (g - zeta);
            let tol = if s == 3 { 1e-6 } else { 1e-9 };
            assert!((direct - via).abs() < tol && (direct - third).abs() < tol, "s={s}");
        }
    }
}

#[test]
fn reports_are_deterministic() {
    let tau = mp(0.1, 1.2);
    let m = CharMatrix::from_f64([0.37, 0.71, 0.13, 0.42]);
    let v = UnimodularMatrix::new(2, 1, 1, 1).unwrap();
    let run = || check_reciprocity(v, 4, Ratio::new(2, 5), &m, &tau, Tolerance::abs(1e-9)).unwrap().timeless();
    assert_eq!(serde_json::to_string(&run()).unwrap(), serde_json::to_string(&run()).unwrap());

    let tp = ModularParameter::<f64>::from_f64(0.3, 1.1).unwrap();
    let policy = TruncationPolicy::default().with_max_index(60);
    let run = || {
        check_transform(UnimodularMatrix::S, 5, &QuadraticNumber::golden(), &m, &tp, &policy, Tolerance::rel(1e-4))
            .unwrap()
            .timeless()
    };
    assert_eq!(run(), run());
}
