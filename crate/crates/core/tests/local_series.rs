use std::collections::HashMap;

use num_complex::Complex64;
use num_traits::{One, Zero};
use qheun_core::gauge::invert_variable;
use qheun_core::lax::{verify::derive_equation, Catalog};
use qheun_core::local::{char_exponents, relative_residual, residual_value, series_solution, series_with_root, CharData, CharRoots, Location};
use qheun_core::qdiff::{QDiffEq, Shift};
use qheun_core::symkernel::{expr, ratio, QPoly, RatFun, Rational, Var};
use rand::{rngs::StdRng, Rng, SeedableRng};

fn bound_poly(eq: &QDiffEq, s: Shift, b: &HashMap<Var, Rational>) -> QPoly {
    QPoly::from_coeffs(eq.poly(s).coeffs().iter().map(|c| c.eval(b).unwrap()).collect())
}

/// Solve `A c = r` by Gauss-Jordan elimination.
fn solve(mut a: Vec<Vec<Rational>>, mut r: Vec<Rational>) -> Vec<Rational> {
    let n = r.len();
    for col in 0..n {
        let piv = (col..n).find(|&i| !a[i][col].is_zero()).expect("nonsingular");
        a.swap(col, piv);
        r.swap(col, piv);
        let inv = a[col][col].recip();
        a[col].iter_mut().for_each(|v| *v = &*v * &inv);
        r[col] = &r[col] * &inv;
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..n {
                    let v = &f * &a[col][j];
                    a[i][j] -= v;
                }
                let v = &f * &r[col];
                r[i] -= v;
            }
        }
    }
    r
}

/// `c_0 = 1, c_1 .. c_n` from the coefficients of `x^1 .. x^n` of the
/// operator applied to `x^rho sum c_k x^k`, with `s = q^rho`.
fn dense_oracle(eq: &QDiffEq, b: &HashMap<Var, Rational>, s: &Rational, n: usize) -> Vec<Rational> {
    let q = b[&Var::new("q")].clone();
    let (p, z, m) = (bound_poly(eq, Shift::P, b), bound_poly(eq, Shift::Z, b), bound_poly(eq, Shift::M, b));
    let image = |k: usize| {
        let qk = num_traits::pow(q.clone(), k);
        let xk = QPoly::monomial(Rational::one(), k);
        p.scale(&(s * &qk)).add(&z).add(&m.scale(&(s * &qk).recip())).mul(&xk)
    };
    let base = image(0);
    let cols: Vec<QPoly> = (1..=n).map(image).collect();
    let a = (1..=n).map(|i| cols.iter().map(|c| c.coeff(i)).collect()).collect();
    let r = (1..=n).map(|i| -base.coeff(i)).collect();
    let mut c = vec![Rational::one()];
    c.extend(solve(a, r));
    c
}

fn random_bindings(eq: &QDiffEq, rng: &mut StdRng) -> HashMap<Var, Rational> {
    let mut b: HashMap<Var, Rational> = eq
        .parameters()
        .into_iter()
        .map(|v| (v, ratio(rng.gen_range(1..20), rng.gen_range(1..7))))
        .collect();
    b.insert(Var::new("q"), ratio(rng.gen_range(1..10), 10));
    b
}

/// Re-solve one parameter so that `s0` is a root of the zero
/// characteristic polynomial, making both roots rational.
fn force_root(cd: &CharData, b: &mut HashMap<Var, Rational>, s0: &Rational) -> bool {
    let s = Var::new("s");
    let poly = cd.polynomial(s);
    let mut vars: Vec<Var> = poly.variables().into_iter().filter(|v| *v != s && v.name() != "q").collect();
    vars.sort_by_key(|v| v.name());
    for v in vars {
        let at = |x: i64| {
            let mut bb = b.clone();
            bb.insert(v, ratio(x, 1));
            bb.insert(s, s0.clone());
            poly.eval(&bb).ok()
        };
        let (Some(f1), Some(f2), Some(f3)) = (at(1), at(2), at(3)) else { continue };
        if &f3 - &f2 * ratio(2, 1) + &f1 != Rational::zero() || f2 == f1 {
            continue;
        }
        let val = Rational::one() - &f1 / (&f2 - &f1);
        if val.is_zero() {
            continue;
        }
        b.insert(v, val);
        return true;
    }
    false
}

/// The catalog equation, read at infinity when zero has no exponent.
fn series_end(cat: Catalog, fam: &str) -> Option<QDiffEq> {
    let eq = derive_equation(cat, fam).unwrap();
    if char_exponents(&eq, Location::Zero).unwrap().root_count() > 0 {
        return Some(eq);
    }
    let inv = invert_variable(&eq);
    (char_exponents(&inv, Location::Zero).unwrap().root_count() > 0).then_some(inv)
}

fn catalog() -> Vec<(Catalog, &'static str)> {
    [Catalog::Murata, Catalog::Kny]
        .into_iter()
        .flat_map(|c| c.families().into_iter().map(move |f| (c, f)))
        .collect()
}

#[test]
fn recurrence_equals_dense_solve() {
    let mut rng = StdRng::seed_from_u64(2024);
    for (cat, fam) in catalog() {
        let Some(eq) = series_end(cat, fam) else {
            assert_eq!(fam, "A1w", "only A1w lacks exponents at both ends");
            continue;
        };
        let cd = char_exponents(&eq, Location::Zero).unwrap();
        let mut done = 0;
        for _ in 0..50 {
            let mut b = random_bindings(&eq, &mut rng);
            if cd.root_count() == 2 && !force_root(&cd, &mut b, &ratio(rng.gen_range(1..9), 3)) {
                continue;
            }
            let Ok(sol) = series_solution::<Rational>(&eq, &b, 0, 10) else { continue };
            assert_eq!(sol.coeffs, dense_oracle(&eq, &b, &sol.s, 10), "{cat} {fam}");
            done += 1;
            if done == 3 {
                break;
            }
        }
        assert_eq!(done, 3, "{cat} {fam}");
    }
}

#[test]
fn float_residuals_are_small() {
    let mut rng = StdRng::seed_from_u64(99);
    let x = Complex64::new(1.0 / 20.0, 0.0);
    for (cat, fam) in catalog() {
        let Some(eq) = series_end(cat, fam) else { continue };
        let mut done = 0;
        for _ in 0..50 {
            let mut b = random_bindings(&eq, &mut rng);
            // f(x/q) is sampled too, so keep x/q <= 1/10
            b.insert(Var::new("q"), ratio(rng.gen_range(5..10), 10));
            let Ok(sol) = series_solution::<Complex64>(&eq, &b, 0, 30) else { continue };
            // irregular ends give divergent series, so the bound scales with
            // the largest coefficient, as a tail estimate does
            let r = relative_residual(&eq, &b, &sol, &x).unwrap();
            let big = sol.coeffs.iter().map(|c| c.norm()).fold(1.0, f64::max);
            assert!(r < 1e-12 * big, "{cat} {fam}: {r:e} vs {big:e}");
            done += 1;
            if done == 3 {
                break;
            }
        }
        assert_eq!(done, 3, "{cat} {fam}");
    }
}

#[test]
fn engineered_polynomial_solutions_have_zero_residual() {
    // f = 1 + f1 x solves P f(qx) + Z f(x) + M f(x/q) = 0 for these Z, M0
    let mut rng = StdRng::seed_from_u64(5);
    for _ in 0..10 {
        let q = ratio(rng.gen_range(1..10), 10);
        let (p0, p1, m1, f1) = (
            ratio(rng.gen_range(1..9), 2),
            ratio(rng.gen_range(-9..9), 3),
            ratio(rng.gen_range(-9..9), 5),
            ratio(rng.gen_range(1..9), 4),
        );
        let z1 = -(&p1 * &q + &m1 / &q);
        let rhs = -(&p0 * &f1 * &q + &p1 - &p0 * &f1 + &z1 + &m1);
        let m0 = rhs / (&f1 * (q.recip() - Rational::one()));
        let z0 = -(&p0 + &m0);
        let c = |r: &Rational| format!("({})", qheun_core::symkernel::fmt_rational(r));
        let eq = QDiffEq::from_ratfuns(
            Var::new("x"),
            &expr(&format!("{}+{}*x", c(&p0), c(&p1))),
            &expr(&format!("{}+{}*x", c(&z0), c(&z1))),
            &expr(&format!("{}+{}*x", c(&m0), c(&m1))),
        )
        .unwrap();
        let b: HashMap<Var, Rational> = [(Var::new("q"), q)].into_iter().collect();
        let sol = series_with_root(&eq, &b, Rational::one(), 30).unwrap();
        assert_eq!(sol.coeffs[1], f1);
        assert!(sol.coeffs[2..].iter().all(Zero::is_zero));
        let (v, _) = residual_value(&eq, &b, &sol, &ratio(1, 20)).unwrap();
        assert!(v.is_zero());
    }
}

#[test]
fn a4_characteristic_data() {
    let eq = derive_equation(Catalog::Murata, "A4").unwrap();
    let zero = char_exponents(&eq, Location::Zero).unwrap();
    let want = [expr("a1"), expr("th1+th2"), expr("-k1*k2*a2*a3")];
    // proportional: every 2x2 minor vanishes
    for i in 0..3 {
        for j in i + 1..3 {
            let minor = zero.coeffs[i].mul(&want[j]).sub(&zero.coeffs[j].mul(&want[i]));
            assert!(minor.is_zero() || minor.ratfun_eq(&RatFun::zero()), "{i}{j}: {minor}");
        }
    }
    let inf = char_exponents(&eq, Location::Infinity).unwrap();
    assert_eq!(inf.root_count(), 1);
    match inf.symbolic_roots().unwrap() {
        CharRoots::One(r) => assert!(r.ratfun_eq(&expr("q/k2")), "{r}"),
        other => panic!("{other:?}"),
    }
}


#[test]
fn a4_residual_shrinks_with_more_terms() {
    let eq = derive_equation(Catalog::Murata, "A4").unwrap();
    let mut rng = StdRng::seed_from_u64(7);
    let x = Complex64::new(1.0 / 20.0, 0.0);
    let mut done = 0;
    while done < 3 {
        let mut b = random_bindings(&eq, &mut rng);
        b.insert(Var::new("q"), ratio(9, 10));
        let res: Vec<f64> = (5..=30)
            .step_by(5)
            .filter_map(|n| series_solution::<Complex64>(&eq, &b, 0, n).ok())
            .map(|sol| relative_residual(&eq, &b, &sol, &x).unwrap())
            .collect();
        if res.len() < 6 {
            continue;
        }
        assert!(*res.last().unwrap() < 1e-12, "{res:?}");
        // stop comparing once float noise is reached
        for w in res.windows(2).filter(|w| w[0] > 1e-15) {
            assert!(w[1] <= w[0], "{res:?}");
        }
        done += 1;
    }
}
