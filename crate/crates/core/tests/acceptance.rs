//! Acceptance suite: one PASS/FAIL line per criterion.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use geocrystal::cartan::reduced_words_w0;
use geocrystal::geocrystal::{
    fixed_locus_condition, fixed_point_check, fixture_gl2xgl2, verify_axioms, verify_verma,
    verify_weyl, Checker, GeometricCrystal, Status, VerificationReport,
};
use geocrystal::kashiwara::{
    components, dominant_weights, enumerate_b_lambda, gt_patterns, gt_rows, gt_to_element,
    normality_check, tropicalize, verify_decorated_trop, weights_match_gt, weyl_dimension,
    CrystalGraph, KashiwaraElement, TropCrystal,
};
use geocrystal::ratfun::{parse_ratfun, rat};
use geocrystal::tropical::{functoriality_check, trop_map_eval, IntBox, TropMap};
use geocrystal::unipotent::{build_crystal, f_linearity_check, invert_chart, theta};
use geocrystal::{Error, RatFun, VarContext};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn all_proved(r: &VerificationReport, prefix: &str) -> Result<usize, String> {
    let hits: Vec<_> = r
        .entries
        .iter()
        .filter(|e| e.axiom.starts_with(prefix))
        .collect();
    ensure(!hits.is_empty(), || format!("no {prefix} entries"))?;
    for e in &hits {
        ensure(e.status.is_proved(), || {
            format!("{}: {}", e.axiom, e.status)
        })?;
    }
    Ok(hits.len())
}

fn failed_with_witness(r: &VerificationReport) -> bool {
    r.failures().next().is_some()
        && r.failures()
            .all(|e| matches!(&e.status, Status::Failed { witness, .. } if !witness.is_empty()))
}

fn gl3() -> GeometricCrystal {
    build_crystal(&[1, 2, 1], 3).expect("GL3 crystal")
}

/// The printed GL3 data for the word (1,2,1); `D` marks the action parameter.
const THETA: [[&str; 3]; 3] = [
    ["t1/(c1*c3)", "0", "0"],
    ["t2*(c1/c2 + 1/c3)", "t2*c1*c3/c2", "0"],
    ["t3", "t3*c3", "t3*c2"],
];
const GAMMA: [&str; 3] = ["t1/(c1*c3)", "t2*c1*c3/c2", "t3*c2"];
const F: &str = "c1 + c2/c3 + c3 + (t2/t3)*(c1/c2 + 1/c3) + (t1/t2)/c1";
const E1: [&str; 6] = [
    "t1",
    "t2",
    "t3",
    "c1*(c2 + c1*c3)/(D*c2 + c1*c3)",
    "c2",
    "c3*(c2 + c1*c3/D)/(c2 + c1*c3)",
];
const E2: [&str; 6] = ["t1", "t2", "t3", "c1", "c2/D", "c3"];
const PHI: [&str; 2] = ["(t2/t1)*(c1^2*c3/c2 + c1)", "(t3/t2)*(c2/c1)"];
const EPS: [&str; 2] = ["1/c3 + c2/(c1*c3^2)", "c3/c2"];

fn c1_symbolic() -> Check {
    let x = gl3();
    let chart = x.chart().clone();
    let ext = x.ext().clone();
    let d = ext.name(chart.len()).to_string();
    let p = |s: &str| parse_ratfun(s, &chart).map_err(err);
    let pe = |s: &str| parse_ratfun(&s.replace('D', &d), &ext).map_err(err);
    let (_, th) = theta(&[1, 2, 1], 3).map_err(err)?;
    let mut ok = Vec::new();
    let theta_ok = (0..3).all(|i| {
        (0..3).all(|j| {
            p(THETA[i][j])
                .map(|w| th.get(i, j).equals(&w))
                .unwrap_or(false)
        })
    });
    ok.push(("theta", theta_ok));
    let gamma_ok = GAMMA
        .iter()
        .zip(x.gamma())
        .all(|(s, g)| p(s).map(|w| g.equals(&w)).unwrap_or(false));
    ok.push(("gamma", gamma_ok));
    ok.push(("f", x.f().equals(&p(F)?)));
    for (i, want) in [(1, &E1), (2, &E2)] {
        let good = want
            .iter()
            .zip(x.e_action(i))
            .all(|(s, g)| pe(s).map(|w| g.equals(&w)).unwrap_or(false));
        ok.push((if i == 1 { "e1" } else { "e2" }, good));
    }
    ok.push(("phi1", x.phi(1).equals(&p(PHI[0])?)));
    ok.push(("phi2", x.phi(2).equals(&p(PHI[1])?)));
    ok.push(("eps1", x.eps(1).equals(&p(EPS[0])?)));
    ok.push(("eps2", x.eps(2).equals(&p(EPS[1])?)));
    let bad: Vec<_> = ok.iter().filter(|(_, b)| !b).map(|(n, _)| *n).collect();
    ensure(bad.is_empty(), || format!("mismatched: {bad:?}"))?;
    Ok(format!("{}/9 identities exact", ok.len()))
}

fn c2_tropical(t: &TropCrystal) -> Check {
    ensure(t.has_closed_forms(), || "closed forms not attached".into())?;
    let bx = IntBox::cube(7, -6, 6);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut pts = bx.corners();
    pts.extend((0..10_000).map(|_| bx.sample(&mut rng)));
    let mut maps: Vec<(String, &TropMap)> = vec![("f".into(), t.f_map())];
    for i in 1..=2 {
        maps.push((format!("phi{i}"), t.phi_map(i)));
        maps.push((format!("eps{i}"), t.eps_map(i)));
        maps.push((format!("e{i}"), t.e_map(i)));
    }
    let mut mismatches = 0;
    let mut first = None;
    for (name, m) in &maps {
        let oracle = m.oracle_only().ok_or("no oracle")?;
        let closed = m.closed_only().ok_or("no closed form")?;
        for p in &pts {
            let x = &p[..m.source_dim()];
            if oracle.eval(x).map_err(err)? != closed.eval(x).map_err(err)? {
                mismatches += 1;
                first.get_or_insert_with(|| format!("{name} at {x:?}"));
            }
        }
    }
    ensure(mismatches == 0, || {
        format!(
            "{mismatches} mismatches, first {}",
            first.unwrap_or_default()
        )
    })?;
    Ok(format!(
        "7 maps x {} points (128 corners), 0 mismatches",
        pts.len()
    ))
}

fn c3_verma_weyl() -> Check {
    let checker = Checker::default();
    let x = gl3();
    let fx = fixture_gl2xgl2();
    for (y, pairs) in [(&x, [(1, 2), (2, 1)]), (&fx, [(1, 2), (2, 1)])] {
        for (i, j) in pairs {
            let s = verify_verma(y, i, j, &checker).map_err(err)?;
            ensure(s.is_proved(), || {
                format!("{} verma[{i},{j}]: {s}", y.name())
            })?;
        }
    }
    let wx = verify_weyl(&x, &checker);
    let wf = verify_weyl(&fx, &checker);
    for (name, r) in [("GL3", &wx), ("fixture", &wf)] {
        for prefix in ["involution", "f-invariance", "braid"] {
            all_proved(r, prefix).map_err(|e| format!("{name}: {e}"))?;
        }
    }
    let bad_phi = fx.clone().with_phi(1, fx.phi(1).scale(&rat(2)));
    let r1 = verify_axioms(&bad_phi, &checker);
    let mut e = fx.e_action(1).to_vec();
    e.swap(1, 2);
    let r2 = verify_weyl(&fx.clone().with_e_action(1, e), &checker);
    let mut e = x.e_action(2).to_vec();
    e.swap(3, 5);
    let r3 = verify_weyl(&x.clone().with_e_action(2, e), &checker);
    ensure(failed_with_witness(&r1), || {
        "corrupted phi not caught".into()
    })?;
    ensure(failed_with_witness(&r2), || {
        "corrupted fixture action not caught".into()
    })?;
    ensure(failed_with_witness(&r3), || {
        "corrupted GL3 action not caught".into()
    })?;
    Ok(
        "verma GL3+fixture, s_i^2, braid, f∘s_i proved; 3 negative controls fail with witnesses"
            .into(),
    )
}

fn c4_decoration(t: &TropCrystal) -> Check {
    let checker = Checker::default();
    for y in [gl3(), fixture_gl2xgl2()] {
        let r = verify_axioms(&y, &checker);
        all_proved(&r, "decoration[").map_err(|e| format!("{}: {e}", y.name()))?;
    }
    let r = verify_decorated_trop(t, &IntBox::cube(7, -8, 8), 10_000, 4).map_err(err)?;
    ensure(r.passed(), || r.to_string())?;
    let bad = t.clone().with_phi_shift(1, 1);
    let rb = verify_decorated_trop(&bad, &IntBox::cube(7, -8, 8), 10_000, 4).map_err(err)?;
    ensure(failed_with_witness(&rb), || "shifted φ̃ not caught".into())?;
    let points = match r.status_of("decorated-trop[1]") {
        Some(Status::CheckedNumerically { points }) => *points,
        _ => 0,
    };
    Ok(format!("decoration exact (GL3, fixture); decorated trop on {points} points per index, 0 mismatches"))
}

fn c5_functoriality() -> Check {
    let r = functoriality_check(100, 50, 5).map_err(err)?;
    ensure(r.passed(), || r.mismatch.clone().unwrap_or_default())?;
    let xy = VarContext::new(&["x", "y"]).map_err(err)?;
    let p = |s: &str| parse_ratfun(s, &xy).map_err(err);
    let f = TropMap::from_ratfuns(&[p("x")?, p("x + y")?]).map_err(err)?;
    let finv = TropMap::from_ratfuns(&[p("x")?, p("y - x")?]).map_err(err)?;
    let mid = trop_map_eval(&f, &[0, 1]).map_err(err)?;
    ensure(mid == vec![0, 0], || format!("Trop(f)(0,1) = {mid:?}"))?;
    let back = trop_map_eval(&finv, &mid);
    ensure(matches!(back, Err(Error::Cancellation(_))), || {
        format!("Trop(f⁻¹)(0,0) = {back:?}")
    })?;
    Ok(format!(
        "{} pairs x 50 points; Trop(f)(0,1)=(0,0), Trop(f⁻¹)(0,0) cancels",
        r.pairs
    ))
}

/// GL3 weights with `λ₁ − λ₃ ≤ 6`: normalized ones plus a few shifts.
fn gl3_weights() -> Vec<Vec<i64>> {
    let mut ws = dominant_weights(3, 6);
    for k in [-3, 2] {
        ws.extend(
            dominant_weights(3, 6)
                .iter()
                .step_by(5)
                .map(|l| l.iter().map(|v| v + k).collect::<Vec<_>>()),
        );
    }
    ws
}

struct Enumerated {
    gl3: Vec<(Vec<i64>, CrystalGraph)>,
    gl4: Vec<(Vec<i64>, CrystalGraph)>,
}

fn c6_dims(t3: &TropCrystal, t4: &TropCrystal, store: &mut Option<Enumerated>) -> Check {
    let mut gl3 = Vec::new();
    for l in gl3_weights() {
        let g = enumerate_b_lambda(t3, &l).map_err(|e| format!("{l:?}: {e}"))?;
        let want = weyl_dimension(&l).ok_or("not dominant")?;
        let gt = gt_patterns(&l).len();
        ensure(g.len() as u128 == want && g.len() == gt, || {
            format!("{l:?}: {} vs Weyl {want}, GT {gt}", g.len())
        })?;
        gl3.push((l, g));
    }
    let mut gl4 = Vec::new();
    for (l, want) in [
        (vec![1, 0, 0, 0], 4),
        (vec![1, 1, 0, 0], 6),
        (vec![2, 1, 0, 0], 20),
    ] {
        let g = enumerate_b_lambda(t4, &l).map_err(|e| format!("{l:?}: {e}"))?;
        ensure(
            g.len() == want && weyl_dimension(&l) == Some(want as u128),
            || format!("{l:?}: {}", g.len()),
        )?;
        gl4.push((l, g));
    }
    let n3 = gl3.len();
    *store = Some(Enumerated { gl3, gl4 });
    Ok(format!(
        "GL3: {n3} weights, GL4: (1,0,0,0)->4 (1,1,0,0)->6 (2,1,0,0)->20; BFS = box scan"
    ))
}

fn c7_normality(t3: &TropCrystal, t4: &TropCrystal, en: &Enumerated) -> Check {
    let mut checks = 0;
    for (t, graphs) in [(t3, &en.gl3), (t4, &en.gl4)] {
        for (l, g) in graphs {
            let r = normality_check(g, t, 2).map_err(err)?;
            ensure(r.passed(), || format!("{l:?}: {:?}", r.failures.first()))?;
            checks += r.checked;
            let cs = components(g).map_err(err)?;
            ensure(cs.len() == 1, || format!("{l:?}: {} components", cs.len()))?;
        }
    }
    let g = &en
        .gl3
        .iter()
        .find(|(l, _)| l == &[2, 1, 0])
        .ok_or("missing (2,1,0)")?
        .1;
    let shifted = t3.clone().with_f_shift(-1);
    ensure(
        !normality_check(g, &shifted, 2).map_err(err)?.passed(),
        || "shifted cone passes".into(),
    )?;
    Ok(format!("{checks} vertex-index checks, one component with a unique highest weight each; shifted cone fails"))
}

fn c8_round_trips() -> Check {
    for (n, word) in [
        (3, vec![1, 2, 1]),
        (3, vec![2, 1, 2]),
        (4, vec![1, 2, 1, 3, 2, 1]),
    ] {
        let (ctx, th) = theta(&word, n).map_err(err)?;
        let pt = invert_chart(&word, &th).map_err(err)?;
        for (k, x) in pt.coordinates().iter().enumerate() {
            ensure(x.equals(&RatFun::var(&ctx, k)), || {
                format!("{word:?}: coordinate {k} = {x}")
            })?;
        }
    }
    for n in [2, 3] {
        let r = f_linearity_check(n, 100, 8).map_err(err)?;
        ensure(r.ok() && r.passed == 100, || {
            format!("n={n}: {}/{} {:?}", r.passed, r.samples, r.witness)
        })?;
    }
    ensure(reduced_words_w0(3).len() == 2, || "GL3 words".into())?;
    Ok("theta inverted exactly for (1,2,1), (2,1,2), (1,2,1,3,2,1); linearity 100/100 for n = 2, 3".into())
}

fn c9_fixed_points() -> Check {
    let x = fixture_gl2xgl2();
    let mut parts = Vec::new();
    for i in 1..=2 {
        let cond = fixed_locus_condition(&x, i).map_err(err)?;
        let r = fixed_point_check(&x, i, &cond, 100, 9).map_err(err)?;
        ensure(
            r.on_locus == 100 && r.off_locus == 100 && r.passed(),
            || format!("s{i}: {r:?}"),
        )?;
        parts.push(format!("s{i}: {}+{}", r.on_locus_fixed, r.off_locus_moved));
    }
    Ok(parts.join(", "))
}

fn c10_gt(t3: &TropCrystal, en: &Enumerated) -> Check {
    for (l, g) in &en.gl3 {
        let from_cone: BTreeSet<_> = g
            .vertices
            .iter()
            .map(|b| gt_rows(b).map_err(err))
            .collect::<Result<_, _>>()?;
        ensure(from_cone.len() == g.len(), || {
            format!("{l:?}: GT map not injective")
        })?;
        let oracle: BTreeSet<_> = gt_patterns(l).into_iter().collect();
        ensure(from_cone == oracle, || {
            format!("{l:?}: GT images differ from the oracle")
        })?;
        for p in &oracle {
            let b = gt_to_element(p).map_err(err)?;
            ensure(g.index_of(&b).is_some(), || {
                format!("{l:?}: inverse of {p} not in B")
            })?;
        }
        ensure(weights_match_gt(g, t3, l).map_err(err)?, || {
            format!("{l:?}: weight multiplicities differ")
        })?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..1000 {
        let v: Vec<i64> = (0..6).map(|_| rng.gen_range(-4..=4)).collect();
        let b = KashiwaraElement::from_coords(3, &v);
        let inter = gt_rows(&b).map_err(err)?.is_interlacing();
        ensure(inter == t3.membership(&b).map_err(err)?, || {
            format!("{b}: interlacing {inter}")
        })?;
    }
    Ok(format!("bijection and weight multiplicities for {} weights; interlacing = membership on 1000 points", en.gl3.len()))
}

fn main() -> ExitCode {
    let mut failures = 0;
    let mut report = |k: usize, name: &str, start: Instant, r: Check| {
        let secs = start.elapsed().as_secs_f64();
        match r {
            Ok(d) => println!("PASS [{k}] {name}: {d} ({secs:.2}s)"),
            Err(d) => {
                failures += 1;
                println!("FAIL [{k}] {name}: {d} ({secs:.2}s)");
            }
        }
    };
    let s = Instant::now();
    report(1, "GL3 symbolic ground truth", s, c1_symbolic());
    let t3 = tropicalize(&gl3()).expect("GL3 tropicalizes");
    let t4 = tropicalize(&build_crystal(&[1, 2, 1, 3, 2, 1], 4).expect("GL4 crystal"))
        .expect("GL4 tropicalizes");
    let s = Instant::now();
    report(2, "GL3 tropical ground truth", s, c2_tropical(&t3));
    let s = Instant::now();
    report(3, "Verma and Weyl suites", s, c3_verma_weyl());
    let s = Instant::now();
    report(4, "decoration, exact and tropical", s, c4_decoration(&t3));
    let s = Instant::now();
    report(5, "functoriality and counterexample", s, c5_functoriality());
    let mut en = None;
    let s = Instant::now();
    report(6, "dimension counts", s, c6_dims(&t3, &t4, &mut en));
    let s = Instant::now();
    let r7 = en
        .as_ref()
        .ok_or_else(|| "no enumeration".to_string())
        .and_then(|e| c7_normality(&t3, &t4, e));
    report(7, "normality and highest weights", s, r7);
    let s = Instant::now();
    report(8, "chart round trips and linearity", s, c8_round_trips());
    let s = Instant::now();
    report(9, "fixed points on the fixture", s, c9_fixed_points());
    let s = Instant::now();
    let r10 = en
        .as_ref()
        .ok_or_else(|| "no enumeration".to_string())
        .and_then(|e| c10_gt(&t3, e));
    report(10, "GT correspondence", s, r10);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
