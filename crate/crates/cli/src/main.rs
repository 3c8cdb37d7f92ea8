use std::fmt::Write as _;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use geocrystal::cartan::parse_word;
use geocrystal::geocrystal::{
    fixed_locus_condition, fixed_point_check, fixture_gl2xgl2, verify_axioms, verify_weyl, Checker,
    GeometricCrystal, VerificationReport,
};
use geocrystal::kashiwara::{
    closed_form_check, components, dim_table, dim_table_tsv, enumerate_b_lambda, graph_to_dot,
    graph_to_json, normality_check, tropicalize, verify_decorated_trop, verify_trop_properties,
    weights_match_gt, TropCrystal, SCHEMA_VERSION,
};
use geocrystal::tropical::IntBox;
use geocrystal::unipotent::{build_crystal, standard_w0_word, theta};

#[derive(Parser, Debug)]
#[command(
    name = "geocrystal",
    version,
    about = "Decorated geometric crystals and their tropical crystals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the geometric crystal axioms and the Weyl group action.
    Verify(Common),
    /// Print the crystal data in chart coordinates.
    Build(Common),
    /// Tropicalize and check the tropical identities.
    Trop(Common),
    /// Enumerate B_λ with its crystal graph.
    Enumerate(Common),
    /// Compare |B_λ| with the Weyl dimension formula.
    Dims(Common),
    /// Print a built-in fixture.
    Fixture(Common),
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Rank of GL_n.
    #[arg(long)]
    n: Option<usize>,
    /// Reduced word for the longest element, e.g. 1,2,1.
    #[arg(long)]
    word: Option<String>,
    /// Dominant weight, e.g. 2,1,0.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    #[arg(long, value_enum, default_value_t = Emit::Text)]
    emit: Emit,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Half-width of the lattice box for tropical checks; for `dims`, the bound on λ₁ − λ_n.
    #[arg(long = "box")]
    bx: Option<i64>,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    /// Use a built-in crystal instead of GL_n.
    #[arg(long)]
    fixture: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Emit {
    Text,
    Json,
    Dot,
    Tsv,
}

/// A usage problem (exit 2) or a failure while running (exit 1).
enum CliError {
    Usage(anyhow::Error),
    Run(anyhow::Error),
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Run(e)
    }
}

impl From<geocrystal::Error> for CliError {
    fn from(e: geocrystal::Error) -> Self {
        CliError::Run(e.into())
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(anyhow!(msg.into()))
}

struct Outcome {
    output: String,
    passed: bool,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Outcome {
            output,
            passed: true,
        }
    }
}

fn allow(c: &Common, cmd: &str, emits: &[Emit]) -> Result<(), CliError> {
    if !emits.contains(&c.emit) {
        return Err(usage(
            format!("{cmd} does not support --emit {:?}", c.emit).to_lowercase(),
        ));
    }
    Ok(())
}

fn gl_params(c: &Common) -> Result<(usize, Vec<usize>), CliError> {
    let n = c.n.ok_or_else(|| usage("--n is required (or --fixture)"))?;
    if !(2..=6).contains(&n) {
        return Err(usage("--n must lie in 2..=6"));
    }
    let word = match &c.word {
        Some(w) => parse_word(w).map_err(|e| usage(e.to_string()))?,
        None => standard_w0_word(n),
    };
    geocrystal::cartan::check_reduced_word(&word, n).map_err(|e| usage(e.to_string()))?;
    Ok((n, word))
}

fn load(c: &Common) -> Result<GeometricCrystal, CliError> {
    match (&c.fixture, c.n) {
        (Some(_), Some(_)) => Err(usage("--fixture and --n are mutually exclusive")),
        (Some(name), None) => fixture(name),
        (None, _) => {
            let (n, word) = gl_params(c)?;
            Ok(build_crystal(&word, n)?)
        }
    }
}

fn fixture(name: &str) -> Result<GeometricCrystal, CliError> {
    match name {
        "gl2xgl2" => Ok(fixture_gl2xgl2()),
        // Negative control: φ_1 doubled.
        "gl2xgl2-broken" => {
            let x = fixture_gl2xgl2();
            let phi = x.phi(1).scale(&geocrystal::ratfun::rat(2));
            Ok(x.with_phi(1, phi).with_name("GL2xGL2-broken"))
        }
        other => Err(usage(format!(
            "unknown fixture {other:?}; available: gl2xgl2, gl2xgl2-broken"
        ))),
    }
}

fn parse_lambda(c: &Common) -> Result<Vec<i64>, CliError> {
    let s = c
        .lambda
        .as_deref()
        .ok_or_else(|| usage("--lambda is required"))?;
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<i64>()
                .map_err(|_| usage(format!("bad --lambda entry {p:?}")))
        })
        .collect()
}

fn crystal_text(x: &GeometricCrystal, theta_text: Option<String>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "crystal {}", x.name());
    let _ = writeln!(s, "chart: {}", x.chart().names().join(", "));
    if let Some(t) = theta_text {
        let _ = writeln!(s, "theta = {t}");
    }
    let tuple = |fs: &[geocrystal::RatFun]| {
        fs.iter()
            .map(|f| f.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    };
    let _ = writeln!(s, "gamma = ({})", tuple(x.gamma()));
    let _ = writeln!(s, "f = {}", x.f());
    for i in 1..=x.rank() {
        let _ = writeln!(s, "phi_{i} = {}", x.phi(i));
        let _ = writeln!(s, "eps_{i} = {}", x.eps(i));
    }
    let d = x.ext().name(x.chart().len());
    for i in 1..=x.rank() {
        if x.trivial_action(i) {
            let _ = writeln!(s, "e_{i}^{d} = id");
        } else {
            let _ = writeln!(s, "e_{i}^{d} = ({})", tuple(x.e_action(i)));
        }
    }
    s
}

fn report_out(
    c: &Common,
    title: &str,
    report: &VerificationReport,
    extra: &str,
) -> Result<Outcome, CliError> {
    let passed = report.passed();
    let output = match c.emit {
        Emit::Json => {
            serde_json::to_string_pretty(&json!({
                "schema_version": SCHEMA_VERSION,
                "subject": title,
                "seed": c.seed,
                "samples": c.samples,
                "passed": passed,
                "entries": report.entries,
                "notes": report.notes,
            }))
            .context("serializing report")?
                + "\n"
        }
        _ => format!(
            "{title}\nseed: {} samples: {}\n{report}{extra}{}\n",
            c.seed,
            c.samples,
            if passed {
                "result: PASS"
            } else {
                "result: FAIL"
            }
        ),
    };
    Ok(Outcome { output, passed })
}

fn cmd_verify(c: &Common) -> Result<Outcome, CliError> {
    allow(c, "verify", &[Emit::Text, Emit::Json])?;
    let x = load(c)?;
    let checker = Checker {
        samples: c.samples,
        seed: c.seed,
        ..Checker::default()
    };
    let mut report = verify_axioms(&x, &checker);
    report.extend(verify_weyl(&x, &checker));
    if c.fixture.is_some() {
        for i in 1..=x.rank() {
            let cond = fixed_locus_condition(&x, i)?;
            let r = fixed_point_check(&x, i, &cond, c.samples, c.seed)?;
            let status = if r.passed() {
                geocrystal::geocrystal::Status::CheckedNumerically {
                    points: r.on_locus + r.off_locus,
                }
            } else {
                geocrystal::geocrystal::Status::Failed {
                    witness: r
                        .witness
                        .clone()
                        .unwrap_or_default()
                        .into_iter()
                        .enumerate()
                        .map(|(k, v)| (x.chart().name(k).to_string(), v))
                        .collect(),
                    detail: format!(
                        "{}/{} on-locus fixed, {}/{} off-locus moved",
                        r.on_locus_fixed, r.on_locus, r.off_locus_moved, r.off_locus
                    ),
                }
            };
            report.push(format!("fixed-points[{i}]"), status);
        }
    }
    report_out(c, &format!("verify {}", x.name()), &report, "")
}

fn cmd_build(c: &Common) -> Result<Outcome, CliError> {
    allow(c, "build", &[Emit::Text, Emit::Json])?;
    let x = load(c)?;
    Ok(Outcome::ok(match c.emit {
        Emit::Json => x.to_json()? + "\n",
        _ => {
            let th = match c.fixture {
                Some(_) => None,
                None => {
                    let (n, word) = gl_params(c)?;
                    Some(theta(&word, n)?.1.to_string())
                }
            };
            crystal_text(&x, th)
        }
    }))
}

fn cmd_fixture(c: &Common) -> Result<Outcome, CliError> {
    allow(c, "fixture", &[Emit::Text, Emit::Json])?;
    let x = fixture(c.fixture.as_deref().unwrap_or("gl2xgl2"))?;
    Ok(Outcome::ok(match c.emit {
        Emit::Json => x.to_json()? + "\n",
        _ => crystal_text(&x, None),
    }))
}

fn cmd_trop(c: &Common) -> Result<Outcome, CliError> {
    allow(c, "trop", &[Emit::Text, Emit::Json])?;
    let t = tropicalize(&load(c)?)?;
    let r = c.bx.unwrap_or(6);
    if r < 0 {
        return Err(usage("--box must be nonnegative"));
    }
    let mut report = VerificationReport::default();
    report.extend(verify_decorated_trop(
        &t,
        &IntBox::cube(t.dim() + 1, -r, r),
        c.samples,
        c.seed,
    )?);
    report.extend(verify_trop_properties(
        &t,
        &IntBox::cube(t.dim(), -r, r),
        r,
        c.samples,
        c.seed,
    )?);
    report.extend(closed_form_check(&t, -r, r, c.samples, c.seed)?);
    let mut extra = String::new();
    if let Some(closed) = t.f_map().closed_form() {
        let _ = writeln!(extra, "f~ = {}", closed[0].display(t.names()));
        for i in 1..=t.rank() {
            let phi = &t.phi_map(i).closed_form().expect("closed")[0];
            let eps = &t.eps_map(i).closed_form().expect("closed")[0];
            let _ = writeln!(extra, "phi~_{i} = {}", phi.display(t.names()));
            let _ = writeln!(extra, "eps~_{i} = {}", eps.display(t.names()));
        }
    }
    report_out(c, &format!("trop {}", t.source().name()), &report, &extra)
}

fn tropical(c: &Common) -> Result<TropCrystal, CliError> {
    if c.fixture.is_some() {
        return Err(usage("this command needs a GL_n crystal (--n)"));
    }
    Ok(tropicalize(&load(c)?)?)
}

fn cmd_enumerate(c: &Common) -> Result<Outcome, CliError> {
    allow(c, "enumerate", &[Emit::Text, Emit::Json, Emit::Dot])?;
    let t = tropical(c)?;
    let lambda = parse_lambda(c)?;
    if lambda.len() != t.lambda_len() {
        return Err(usage(format!("--lambda needs {} entries", t.lambda_len())));
    }
    if lambda.windows(2).any(|w| w[0] < w[1]) {
        return Err(usage("--lambda must be weakly decreasing"));
    }
    let g = enumerate_b_lambda(&t, &lambda)?;
    let normal = normality_check(&g, &t, 2)?;
    let comps = components(&g)?;
    let weights = weights_match_gt(&g, &t, &lambda)?;
    let passed = normal.passed() && comps.len() == 1 && weights;
    let output = match c.emit {
        Emit::Dot => graph_to_dot(&g),
        Emit::Json => graph_to_json(&g, &t)? + "\n",
        _ => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "B_lambda for {} at lambda = ({})",
                t.source().name(),
                c.lambda.as_deref().unwrap_or("")
            );
            let _ = writeln!(s, "vertices: {}", g.len());
            let _ = writeln!(s, "edges: {}", g.edges.len());
            let _ = writeln!(s, "components: {}", comps.len());
            for comp in &comps {
                let _ = writeln!(s, "highest weight: {}", g.vertices[comp.highest]);
            }
            let _ = writeln!(
                s,
                "normality: {} ({} checks)",
                if normal.passed() { "ok" } else { "FAILED" },
                normal.checked
            );
            for f in &normal.failures {
                let _ = writeln!(s, "  {} i={} n={}: {}", f.vertex, f.index, f.n, f.detail);
            }
            let _ = writeln!(s, "weights match GT: {weights}");
            for v in &g.vertices {
                let _ = writeln!(s, "{v}");
            }
            s
        }
    };
    Ok(Outcome { output, passed })
}

fn cmd_dims(c: &Common) -> Result<Outcome, CliError> {
    allow(c, "dims", &[Emit::Text, Emit::Tsv, Emit::Json])?;
    let t = tropical(c)?;
    let max = c.bx.unwrap_or(3);
    if max < 0 {
        return Err(usage("--box must be nonnegative"));
    }
    let rows = dim_table(&t, t.lambda_len(), max)?;
    let passed = rows.iter().all(|r| r.matches());
    let output = match c.emit {
        Emit::Json => {
            serde_json::to_string_pretty(&json!({ "schema_version": SCHEMA_VERSION, "crystal": t.source().name(), "rows": rows }))
                .context("serializing table")?
                + "\n"
        }
        Emit::Tsv => dim_table_tsv(&rows),
        _ => {
            let mut s = format!("|B_lambda| for {}, lambda_1 <= {max}\n", t.source().name());
            for r in &rows {
                let l = r.lambda.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
                let mark = if r.matches() { "ok" } else { "MISMATCH" };
                let _ = writeln!(s, "({l}) {} (GT {}, Weyl {}) {mark}", r.count, r.gt_count, r.weyl);
            }
            s
        }
    };
    Ok(Outcome { output, passed })
}

fn run(cli: &Cli) -> Result<(Outcome, Option<std::path::PathBuf>), CliError> {
    let (out, c) = match &cli.command {
        Command::Verify(c) => (cmd_verify(c)?, c),
        Command::Build(c) => (cmd_build(c)?, c),
        Command::Trop(c) => (cmd_trop(c)?, c),
        Command::Enumerate(c) => (cmd_enumerate(c)?, c),
        Command::Dims(c) => (cmd_dims(c)?, c),
        Command::Fixture(c) => (cmd_fixture(c)?, c),
    };
    Ok((out, c.out.clone()))
}

fn emit(out: &Outcome, path: Option<&std::path::Path>) -> anyhow::Result<()> {
    match path {
        Some(p) => {
            std::fs::write(p, &out.output).with_context(|| format!("writing {}", p.display()))
        }
        None => {
            print!("{}", out.output);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, path)) => {
            if let Err(e) = emit(&out, path.as_deref()) {
                eprintln!("error: {e:#}");
                return ExitCode::from(1);
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Usage(e)) => {
            eprintln!("usage error: {e:#}");
            ExitCode::from(2)
        }
        Err(CliError::Run(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
