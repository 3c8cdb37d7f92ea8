use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geocrystal"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn build_prints_gl3_formulas() {
    let o = run(&["build", "--n", "3", "--word", "1,2,1", "--emit", "text"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    for line in [
        "gamma = (t1*c1^-1*c3^-1, t2*c1*c2^-1*c3, t3*c2)",
        "phi_2 = t2^-1*t3*c1^-1*c2",
        "eps_2 = c2^-1*c3",
        "e_2^d = (t1, t2, t3, c1, c2*d^-1, c3)",
    ] {
        assert!(s.contains(line), "missing {line:?} in\n{s}");
    }
}

#[test]
fn build_json_loads_back() {
    let o = run(&["build", "--n", "3", "--emit", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let x = geocrystal::geocrystal::GeometricCrystal::from_json(&stdout(&o)).unwrap();
    assert_eq!(x.name(), "GL3[1,2,1]");
}

#[test]
fn enumerate_dot_has_eight_vertices() {
    let o = run(&[
        "enumerate",
        "--n",
        "3",
        "--lambda",
        "2,1,0",
        "--emit",
        "dot",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert_eq!(s.lines().filter(|l| l.contains("[label=\"((")).count(), 8);
    assert!(s.contains("[label=\"i=1\"]") && s.contains("[label=\"i=2\"]"));
}

#[test]
fn verify_fixture_passes() {
    let o = run(&["verify", "--fixture", "gl2xgl2"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(
        s.contains("braid[1,2]") && s.ends_with("result: PASS\n"),
        "{s}"
    );
}

#[test]
fn output_is_deterministic() {
    let args = [
        "trop",
        "--n",
        "3",
        "--seed",
        "7",
        "--samples",
        "300",
        "--emit",
        "json",
    ];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["seed"], 7);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["enumerate", "--n", "3", "--lambda", "0,1,0"][..],
        &["build", "--n", "3", "--word", "1,1,2"],
        &["verify", "--n", "3", "--emit", "dot"],
        &["verify", "--fixture", "nope"],
        &["dims", "--fixture", "gl2xgl2"],
        &["frobnicate"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn dims_tsv_and_out_file() {
    let dir = std::env::temp_dir().join(format!("geocrystal-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("dims.tsv");
    let o = run(&[
        "dims",
        "--n",
        "3",
        "--box",
        "2",
        "--emit",
        "tsv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let s = std::fs::read_to_string(&path).unwrap();
    assert!(s.starts_with("lambda\tcount\tgt\tweyl\tmatch\n"));
    assert!(s.contains("2,1,0\t8\t8\t8\ttrue"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn trop_text_shows_printed_forms() {
    let o = run(&["trop", "--n", "3", "--word", "1,2,1", "--box", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(
        s.contains("f~ = min(m1, m2 - m3, m3, l2 - l3 - max(m3, m2 - m1), l1 - l2 - m1)"),
        "{s}"
    );
    assert!(s.contains("eps~_1 = max(m3, m1 + 2*m3 - m2)"), "{s}");
}

#[test]
fn failed_verification_exits_one_with_witness() {
    let o = run(&["verify", "--fixture", "gl2xgl2-broken"]);
    assert_eq!(o.status.code(), Some(1));
    let s = stdout(&o);
    let line = s
        .lines()
        .find(|l| l.starts_with("eps=alpha(gamma)*phi[1]"))
        .unwrap();
    assert!(line.contains("FAILED at (a="), "{line}");
    assert!(s.ends_with("result: FAIL\n"));
}
