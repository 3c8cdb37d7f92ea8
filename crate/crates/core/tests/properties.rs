use std::sync::OnceLock;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use geocrystal::kashiwara::{tropicalize, KashiwaraElement, TropCrystal};
use geocrystal::ratfun::{pos_to_ratfun, PosExpr};
use geocrystal::tropical::{deg, pl_eval, trop_eval, trop_structural};
use geocrystal::unipotent::build_crystal;
use geocrystal::{RatFun, Rational, VarContext};

fn xyz() -> VarContext {
    VarContext::new(&["x", "y", "z"]).unwrap()
}

fn dag(seed: u64, nvars: usize, depth: usize) -> PosExpr {
    PosExpr::random(&mut ChaCha8Rng::seed_from_u64(seed), nvars, depth)
}

fn fun(seed: u64, ctx: &VarContext) -> RatFun {
    pos_to_ratfun(&dag(seed, ctx.len(), 3), ctx).unwrap()
}

fn point(k: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(
        (1i64..30, 1i64..7).prop_map(|(n, d)| Rational::new(n.into(), d.into())),
        k,
    )
}

fn gl3() -> &'static TropCrystal {
    static T: OnceLock<TropCrystal> = OnceLock::new();
    T.get_or_init(|| tropicalize(&build_crystal(&[1, 2, 1], 3).unwrap()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluation_is_a_homomorphism(a in any::<u64>(), b in any::<u64>(), p in point(3)) {
        let ctx = xyz();
        let (f, g) = (fun(a, &ctx), fun(b, &ctx));
        let (fv, gv) = (f.evaluate(&p).unwrap(), g.evaluate(&p).unwrap());
        prop_assert_eq!(f.add(&g).evaluate(&p).unwrap(), &fv + &gv);
        prop_assert_eq!(f.sub(&g).evaluate(&p).unwrap(), &fv - &gv);
        prop_assert_eq!(f.mul(&g).evaluate(&p).unwrap(), &fv * &gv);
        prop_assert_eq!(f.div(&g).unwrap().evaluate(&p).unwrap(), &fv / &gv);
    }

    #[test]
    fn equals_is_an_equivalence(a in any::<u64>(), b in any::<u64>()) {
        let ctx = xyz();
        let (f, g) = (fun(a, &ctx), fun(b, &ctx));
        let h = f.mul(&g).div(&g).unwrap();
        let k = h.add(&g).sub(&g);
        prop_assert!(f.equals(&f));
        prop_assert!(f.equals(&h) && h.equals(&f));
        prop_assert!(h.equals(&k) && f.equals(&k));
        prop_assert_eq!(f.equals(&g), g.equals(&f));
        prop_assert!(f.add(&g).equals(&g.add(&f)));
    }

    #[test]
    fn substitution_commutes_with_evaluation(a in any::<u64>(), b in any::<u64>(), p in point(3)) {
        let ctx = xyz();
        let f = fun(a, &ctx);
        let images: Vec<RatFun> = (0..3).map(|k| fun(b.wrapping_add(k), &ctx)).collect();
        let at: Vec<Rational> = images.iter().map(|g| g.evaluate(&p).unwrap()).collect();
        prop_assert_eq!(f.substitute(&images).unwrap().evaluate(&p).unwrap(), f.evaluate(&at).unwrap());
    }

    #[test]
    fn trop_is_positively_homogeneous(a in any::<u64>(), l in prop::collection::vec(-6i64..=6, 3), k in 0i64..5) {
        let f = fun(a, &xyz());
        let scaled: Vec<i64> = l.iter().map(|v| k * v).collect();
        prop_assert_eq!(trop_eval(&f, &scaled).unwrap(), k * trop_eval(&f, &l).unwrap());
    }

    #[test]
    fn degree_is_additive(a in any::<u64>(), b in any::<u64>()) {
        let s = VarContext::new(&["s"]).unwrap();
        let (f, g) = (fun(a, &s), fun(b, &s));
        prop_assert_eq!(deg(&f.mul(&g)).unwrap(), deg(&f).unwrap() + deg(&g).unwrap());
        prop_assert_eq!(deg(&f.add(&g)).unwrap(), deg(&f).unwrap().min(deg(&g).unwrap()));
    }

    #[test]
    fn free_action_on_gl3(x in prop::collection::vec(-8i64..=8, 6), a in -5i64..=5, b in -5i64..=5, i in 1usize..=2) {
        let t = gl3();
        let p = KashiwaraElement::from_coords(3, &x);
        let ab = t.e_tilde(i, a, &t.e_tilde(i, b, &p).unwrap()).unwrap();
        prop_assert_eq!(ab, t.e_tilde(i, a + b, &p).unwrap());
        prop_assert_eq!(t.e_tilde(i, 0, &p).unwrap(), p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn structural_matches_oracle(a in any::<u64>(), l in prop::collection::vec(-7i64..=7, 3)) {
        let e = dag(a, 3, 4);
        let f = pos_to_ratfun(&e, &xyz()).unwrap();
        prop_assert_eq!(pl_eval(&trop_structural(&e), &l).unwrap(), trop_eval(&f, &l).unwrap());
    }
}
