use super::crystal::{action_context, GeometricCrystal};
use crate::cartan::TorusData;
use crate::error::Result;
use crate::ratfun::{parse_ratfun, VarContext};

/// The decorated crystal on `G_m^4 ∋ M = [[a,b],[c,d]]` for `GL_2 × GL_2`
/// with `γ(M) = (ab, cd; ac, bd)` and `f(M) = a+b+c+d`.
pub fn fixture_gl2xgl2() -> GeometricCrystal {
    build().expect("fixture formulas parse")
}

fn build() -> Result<GeometricCrystal> {
    let chart = VarContext::new(&["a", "b", "c", "d"])?;
    let ext = action_context(&chart);
    let tau = ext.name(4).to_string();
    let p = |s: &str| parse_ratfun(s, &chart);
    let pe = |s: &str| parse_ratfun(&s.replace("TAU", &tau), &ext);
    let torus = TorusData {
        roots: vec![vec![1, -1, 0, 0], vec![0, 0, 1, -1]],
        coroots: vec![vec![1, -1, 0, 0], vec![0, 0, 1, -1]],
    };
    let e1 = vec![
        pe("TAU*a*(a+d)/(TAU*a+d)")?,
        pe("b*(TAU*a+d)/(a+d)")?,
        pe("TAU^-1*c*(TAU*a+d)/(a+d)")?,
        pe("d*(a+d)/(TAU*a+d)")?,
    ];
    let e2 = vec![
        pe("TAU*a*(a+d)/(TAU*a+d)")?,
        pe("TAU^-1*b*(TAU*a+d)/(a+d)")?,
        pe("c*(TAU*a+d)/(a+d)")?,
        pe("d*(a+d)/(TAU*a+d)")?,
    ];
    GeometricCrystal::new(
        "gl2xgl2",
        torus,
        chart.clone(),
        vec![p("a*b")?, p("c*d")?, p("a*c")?, p("b*d")?],
        p("a+b+c+d")?,
        vec![p("(a+d)/(a*b)")?, p("(a+d)/(a*c)")?],
        vec![p("(a+d)/(c*d)")?, p("(a+d)/(b*d)")?],
        vec![e1, e2],
        vec![false, false],
    )
}
