use proptest::prelude::*;
use qheun_cli::doc::{BindingDocument, EquationDocument, FamilyDocument};
use qheun_cli::{read_equation, write_equation};
use qheun_core::climit::PRESETS;
use qheun_core::lax::verify::derive_equation;
use qheun_core::lax::{reference_equation, Catalog};
use qheun_core::qdiff::{QDiffEq, Shift};
use qheun_core::symkernel::{ratio, MPoly, Monomial, RatFun, Rational, UPoly, Var};

fn same(a: &QDiffEq, b: &QDiffEq) -> bool {
    a.var() == b.var()
        && Shift::ALL
            .iter()
            .all(|&s| (0..4).all(|k| a.coeff(s, k).ratfun_eq(&b.coeff(s, k))))
}

#[test]
fn catalog_equations_round_trip() {
    for cat in [Catalog::Murata, Catalog::Kny] {
        for fam in cat.families() {
            for eq in [derive_equation(cat, fam).unwrap(), reference_equation(cat, fam).unwrap()] {
                let back = read_equation(&write_equation(&eq)).unwrap();
                assert!(same(&eq, &back), "{cat} {fam}");
            }
        }
    }
}

#[test]
fn preset_families_round_trip() {
    for p in PRESETS {
        let (eq, b) = p.equation().unwrap();
        let d = FamilyDocument::new(&eq, &b);
        let text = serde_json::to_string(&d).unwrap();
        let back: FamilyDocument = serde_json::from_str(&text).unwrap();
        let (eq2, b2) = back.to_parts().unwrap();
        assert!(same(&eq, &eq2), "{}", p.name);
        assert_eq!(b.len(), b2.len());
        for (v, r) in &b {
            assert!(r.ratfun_eq(&b2[v]), "{}: {v}", p.name);
        }
    }
}

#[test]
fn documents_reject_bad_input() {
    let eq = derive_equation(Catalog::Murata, "A6").unwrap();
    let mut d = EquationDocument::from_equation(&eq);
    d.p.insert("4".into(), "1".into());
    assert_eq!(d.to_equation().unwrap_err().code, 2);
    let mut d = EquationDocument::from_equation(&eq);
    d.z.insert("0".into(), "zz".into());
    assert_eq!(d.to_equation().unwrap_err().code, 2);
    let mut d = EquationDocument::from_equation(&eq);
    d.format = "qheun-eq/2".into();
    assert!(d.to_equation().is_err());
    let b: BindingDocument =
        serde_json::from_str(r#"{"format":"qheun-params/1","bindings":{"nope":"1"}}"#).unwrap();
    assert_eq!(b.to_bindings(&eq).unwrap_err().code, 2);
}

#[test]
fn decimal_bindings_are_exact() {
    let eq = derive_equation(Catalog::Murata, "A6").unwrap();
    let b: BindingDocument =
        serde_json::from_str(r#"{"format":"qheun-params/1","bindings":{"q":"0.125","t":"-3/4","k1":"2e-1"}}"#)
            .unwrap();
    let m = b.to_bindings(&eq).unwrap();
    assert_eq!(m[&Var::new("q")], ratio(1, 8));
    assert_eq!(m[&Var::new("k1")], ratio(1, 5));
    let again = BindingDocument::from_bindings(&m).to_bindings(&eq).unwrap();
    assert_eq!(again, m);
}

const NAMES: [&str; 5] = ["a1", "k2", "th1", "q", "n7"];

fn coeff() -> impl Strategy<Value = RatFun> {
    let term = (-5i64..=5, 1i64..=4, prop::collection::vec(0u32..=2, NAMES.len()));
    (prop::collection::vec(term.clone(), 0..4), prop::collection::vec(term, 1..3)).prop_filter_map(
        "nonzero denominator",
        |(num, den)| {
            let poly = |ts: &[(i64, i64, Vec<u32>)]| {
                MPoly::from_terms(ts.iter().map(|(n, d, e)| {
                    let pairs = NAMES.iter().zip(e).map(|(v, &k)| (Var::new(v), k)).collect();
                    (Monomial::from_pairs(pairs), ratio(*n, *d))
                }))
            };
            RatFun::new(poly(&num), poly(&den)).ok()
        },
    )
}

fn equation() -> impl Strategy<Value = QDiffEq> {
    let col = || prop::collection::vec(coeff(), 1..=4);
    (col(), col(), col()).prop_filter_map("nonzero equation", |(p, z, m)| {
        let up = |c: Vec<RatFun>| UPoly::from_coeffs(c);
        QDiffEq::new(Var::new("x"), up(p), up(z), up(m)).ok()
    })
}

fn rational() -> impl Strategy<Value = Rational> {
    (-1000i64..=1000, 1i64..=999).prop_map(|(n, d)| ratio(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn equation_documents_round_trip(eq in equation()) {
        let text = write_equation(&eq);
        let back = read_equation(&text).unwrap();
        prop_assert!(same(&eq, &back), "{text}");
        prop_assert_eq!(write_equation(&back), text);
    }

    #[test]
    fn binding_documents_round_trip(vals in prop::collection::vec(rational(), NAMES.len())) {
        let eq = read_equation(&write_equation(&QDiffEq::from_ratfuns(
            Var::new("x"),
            &qheun_core::symkernel::expr("a1*k2+th1*q*x+n7"),
            &RatFun::one(),
            &RatFun::one(),
        ).unwrap())).unwrap();
        let b = NAMES.iter().zip(vals).map(|(n, v)| (Var::new(n), v)).collect();
        let d = BindingDocument::from_bindings(&b);
        let text = serde_json::to_string(&d).unwrap();
        let back: BindingDocument = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.to_bindings(&eq).unwrap(), b);
    }
}
