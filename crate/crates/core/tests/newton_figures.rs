//! Every class-defining zero pattern, realized by random equations.
//! Patterns list the columns M, Z, P, each from the x^2 row down to x^0:
//! `#` nonzero, `o` zero, `*` anything.

use std::collections::BTreeSet;

use qheun_core::qdiff::{classify, newton_diagram, QDiffEq, Reduction, Shift, TaxonClass, Variant};
use qheun_core::symkernel::{ratio, RatFun, UPoly, Var};
use rand::{Rng, SeedableRng};

use Reduction::*;
use Variant::*;

const FIGURES: [([&str; 3], Variant, Reduction); 21] = [
    (["#*#", "#**", "o##"], CqHE, NonReduced),
    (["o##", "#**", "#*#"], CqHE2, NonReduced),
    (["##o", "**#", "#*#"], CqHE3, NonReduced),
    (["#*#", "**#", "##o"], CqHE4, NonReduced),
    (["#*#", "o**", "o##"], CqHE, SinglyReduced),
    (["o##", "o**", "#*#"], CqHE2, SinglyReduced),
    (["##o", "**o", "#*#"], CqHE3, SinglyReduced),
    (["#*#", "**o", "##o"], CqHE4, SinglyReduced),
    (["#*#", "#**", "oo#"], BqHE, NotApplicable),
    (["oo#", "#**", "#*#"], BqHE2, NotApplicable),
    (["#oo", "**#", "#*#"], BqHE3, NotApplicable),
    (["#*#", "**#", "#oo"], BqHE4, NotApplicable),
    (["o##", "#**", "o##"], BqHE5, NotApplicable),
    (["##o", "**#", "##o"], BqHE6, NotApplicable),
    (["#*#", "#*#", "o#o"], DqHE, NonReduced),
    (["o#o", "#*#", "#*#"], DqHE2, NonReduced),
    (["##o", "#*#", "o##"], DqHE3, NonReduced),
    (["o##", "#*#", "##o"], DqHE4, NonReduced),
    (["#*#", "o*#", "o#o"], DqHE, SinglyReduced),
    (["#*#", "#*o", "o#o"], DqHE, SinglyReduced),
    (["#*#", "o*o", "o#o"], DqHE, DoublyReduced),
];

const REDUCED_DQHE4: [([&str; 3], Reduction); 3] = [
    (["o##", "o*#", "##o"], SinglyReduced),
    (["o##", "#*o", "##o"], SinglyReduced),
    (["o##", "o*o", "##o"], DoublyReduced),
];

fn realize(pattern: [&str; 3], rng: &mut impl Rng) -> (QDiffEq, BTreeSet<(Shift, u32)>) {
    let mut polys = Vec::new();
    let mut support = BTreeSet::new();
    for (col, s) in pattern.iter().zip([Shift::M, Shift::Z, Shift::P]) {
        let mut c = vec![RatFun::zero(); 3];
        for (i, ch) in col.chars().enumerate() {
            let deg = 2 - i;
            let v = match ch {
                '#' => loop {
                    let n = rng.gen_range(-9..=9);
                    if n != 0 {
                        break n;
                    }
                },
                'o' => 0,
                _ => rng.gen_range(-2..=2),
            };
            if v != 0 {
                support.insert((s, deg as u32));
            }
            c[deg] = RatFun::from_rational(ratio(v, rng.gen_range(1..=3)));
        }
        polys.push(UPoly::from_coeffs(c));
    }
    let eq = QDiffEq::new(Var::new("x"), polys[2].clone(), polys[1].clone(), polys[0].clone()).unwrap();
    (eq, support)
}

#[test]
fn class_definition_figures() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    let all = FIGURES
        .iter()
        .cloned()
        .chain(REDUCED_DQHE4.iter().map(|(p, r)| (*p, DqHE4, *r)));
    for (pattern, variant, reduction) in all {
        for _ in 0..25 {
            let (eq, support) = realize(pattern, &mut rng);
            assert_eq!(newton_diagram(&eq).filled, support, "{pattern:?}");
            let l = classify(&eq);
            assert_eq!(l.variant, Some(variant), "{pattern:?}");
            assert_eq!(l.class, variant.class());
            assert_eq!(l.reduction, reduction, "{pattern:?}");
        }
    }
}

#[test]
fn mirrored_figures_classify_as_mirror_variants() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(5);
    for (pattern, variant, reduction) in FIGURES {
        let (eq, _) = realize(pattern, &mut rng);
        let m = classify(&qheun_core::gauge::invert_variable(&eq));
        assert_eq!(m.variant, Some(variant.mirror()), "{pattern:?}");
        assert_eq!(m.reduction, reduction);
    }
}

#[test]
fn full_corners_are_qheun() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(3);
    for _ in 0..20 {
        let (eq, _) = realize(["#*#", "***", "#*#"], &mut rng);
        assert_eq!(classify(&eq).class, TaxonClass::QHeun);
    }
}
