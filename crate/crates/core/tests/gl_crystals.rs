use geocrystal::cartan::reduced_words_w0;
use geocrystal::geocrystal::{verify_axioms, verify_weyl, Checker};
use geocrystal::unipotent::{build_crystal, invert_chart, theta};
use geocrystal::RatFun;

#[test]
fn gl3_axioms_and_weyl() {
    for word in reduced_words_w0(3) {
        let x = build_crystal(&word, 3).unwrap();
        let r = verify_axioms(&x, &Checker::default());
        assert!(r.passed(), "{word:?}\n{r}");
        assert!(r.entries.iter().all(|e| e.status.is_proved()), "{r}");
        let w = verify_weyl(&x, &Checker::default());
        assert!(w.passed(), "{word:?}\n{w}");
        assert!(w.entries.iter().all(|e| e.status.is_proved()), "{w}");
    }
}

#[test]
fn gl4_round_trip() {
    let word = [1, 2, 1, 3, 2, 1];
    let (ctx, th) = theta(&word, 4).unwrap();
    let pt = invert_chart(&word, &th).unwrap();
    for (k, x) in pt.coordinates().iter().enumerate() {
        assert!(x.equals(&RatFun::var(&ctx, k)));
    }
}

#[test]
fn gl4_axioms() {
    let t = std::time::Instant::now();
    let x = build_crystal(&[1, 2, 1, 3, 2, 1], 4).unwrap();
    eprintln!("build {:?}", t.elapsed());
    let r = verify_axioms(&x, &Checker::default());
    eprintln!("axioms {:?}\n{r}", t.elapsed());
    assert!(r.passed(), "{r}");
}

#[test]
fn gl4_tropical_counts() {
    use geocrystal::kashiwara::{
        components, enumerate_b_lambda, normality_check, tropicalize, weyl_dimension,
    };
    let t = tropicalize(&build_crystal(&[1, 2, 1, 3, 2, 1], 4).unwrap()).unwrap();
    for (l, n) in [([1, 0, 0, 0], 4), ([1, 1, 0, 0], 6), ([2, 1, 0, 0], 20)] {
        let start = std::time::Instant::now();
        let g = enumerate_b_lambda(&t, &l).unwrap();
        assert_eq!(g.len(), n, "{l:?}");
        assert_eq!(weyl_dimension(&l), Some(n as u128));
        assert!(normality_check(&g, &t, 2).unwrap().passed());
        assert_eq!(components(&g).unwrap().len(), 1);
        eprintln!("{l:?}: {:?}", start.elapsed());
    }
}
