use contactgeom::scenario::{builtin_scenario, load_scenario, run, RunOptions, Verdict, SCENARIOS};
use contactgeom::Error;

fn run_named(name: &str, opts: &RunOptions) -> contactgeom::scenario::Report {
    let sc = load_scenario(name, builtin_scenario(name).unwrap(), None).unwrap();
    run(&sc, opts)
}

fn verdicts(r: &contactgeom::scenario::Report) -> Vec<(&str, Verdict)> {
    r.entries.iter().map(|e| (e.name.as_str(), e.verdict)).collect()
}

#[test]
fn shipped_scenarios_have_the_expected_outcome() {
    let expected = [
        ("s3_strong_integrability", 0),
        ("s3_normality_h_cubed", 1),
        ("s3_formal_certificates", 1),
        ("s3_twisted_certificates", 1),
        ("heisenberg_tduality", 0),
        ("hopf_tduality", 0),
        ("cosymplectic_normality", 0),
        ("cosymplectic_not_normal", 1),
        ("triple_contact_7d", 0),
        ("flat_pair", 0),
    ];
    assert_eq!(expected.len(), SCENARIOS.len());
    for (name, code) in expected {
        let r = run_named(name, &RunOptions::default());
        assert_eq!(r.exit_code(), code, "{}\n{}", name, r.render_text());
    }
}

#[test]
fn h_cubed_fails_only_normality() {
    let r = run_named("s3_normality_h_cubed", &RunOptions::default());
    assert_eq!(verdicts(&r), vec![("integrability", Verdict::Pass), ("normality", Verdict::Fail), ("normal-frame", Verdict::Fail)]);
    let normality = &r.entries[1];
    // [e1,e2] = (V1(f) - 2g) V2 + (V1(g) + 2f) V3 with f + i g = z^3 on the sphere
    assert!(normality.details.iter().any(|d| d == "(iii) [e1,e2] = (-x2^3 + 3*x2*x1^2)*V2 + (3*x2^2*x1 - x1^3)*V3"));
}

#[test]
fn certificates_are_reported() {
    let r = run_named("s3_formal_certificates", &RunOptions::default());
    let integ = r.entries.iter().find(|e| e.name == "integrability").unwrap();
    assert_eq!(integ.verdict, Verdict::Fail);
    assert!(integ.details.last().unwrap().ends_with("certificates {V3(f) + V2(g), -V2(f) + V3(g)}"));
}

#[test]
fn reports_are_deterministic() {
    for (name, _, _) in SCENARIOS {
        let a = run_named(name, &RunOptions::default());
        let b = run_named(name, &RunOptions::default());
        assert_eq!(a.render_text(), b.render_text());
        assert_eq!(a.render_records(), b.render_records());
    }
}

#[test]
fn point_subset_filters_rows() {
    let opts = RunOptions { strict: false, points: Some(vec![1]) };
    let r = run_named("hopf_tduality", &opts);
    for e in &r.entries {
        assert!(e.points.iter().all(|(k, _)| *k == 1), "{}", e.name);
    }
    assert_eq!(r.entries[0].points.len(), 1);
}

#[test]
fn failures_carry_residuals() {
    for (name, _, _) in SCENARIOS {
        let r = run_named(name, &RunOptions::default());
        for e in &r.entries {
            if e.verdict == Verdict::Fail {
                assert!(!e.details.is_empty(), "{} {}", name, e.name);
            }
        }
    }
}

#[test]
fn missing_data_is_inconclusive_and_strict_promotes_it() {
    let src = "[model]\nbuiltin = heisenberg\n[structure]\nexample = heisenberg\n[checks]\ntduality\ntypes\n";
    let sc = load_scenario("x", src, None).unwrap();
    let r = run(&sc, &RunOptions::default());
    assert_eq!(r.entries[0].verdict, Verdict::Inconclusive);
    assert_eq!(r.exit_code(), 0);
    let strict = run(&sc, &RunOptions { strict: true, points: None });
    assert_eq!(strict.exit_code(), 3);
}

#[test]
fn load_errors() {
    let parse = load_scenario("x", "[model]\nbuiltin = s3\n[checks]\ntypes expect\n", None).unwrap_err();
    assert!(matches!(parse, Error::Parse { line: 4, col: 7, .. }), "{:?}", parse);
    let unknown_model = load_scenario("x", "[model]\nbuiltin = nowhere\n[checks]\ncourant\n", None).unwrap_err();
    assert!(matches!(unknown_model, Error::Parse { line: 2, .. }));
    let bad_form = load_scenario("x", "[model]\nbuiltin = s3\n[twist]\nH = nu1^nu2\n[checks]\ncourant\n", None).unwrap_err();
    assert!(matches!(bad_form, Error::Validation(_)));
    let no_checks = load_scenario("x", "[model]\nbuiltin = s3\n", None).unwrap_err();
    assert!(matches!(no_checks, Error::Validation(_)));
    let wrong_source = load_scenario(
        "x",
        "[model]\nbuiltin = s3\n[structure]\nexample = s3-family\n[dualpair]\nbuiltin = hopf\n[checks]\ntduality\n",
        None,
    )
    .unwrap_err();
    assert!(matches!(wrong_source, Error::ModelMismatch(_)));
    let jacobi = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/invalid/jacobi_violation.scn")).unwrap();
    match load_scenario("jacobi", &jacobi, None).unwrap_err() {
        Error::InvalidModel { reason, .. } => assert!(reason.contains("Jacobi identity fails for (X1, X2, X3)")),
        other => panic!("{:?}", other),
    }
}

#[test]
fn custom_dual_pair_matches_the_builtin() {
    let src = "[model]\nbuiltin = heisenberg\n[structure]\nexample = heisenberg\nb = 1\n\
               [dualpair]\ntarget = heisenberg-dual\nbasic = X1:X1, X2:X2\nfiber = X3:X3'\nF = 1\ndual_twist = alpha1^alpha2^alpha3'\n\
               [checks]\ntduality\n";
    let sc = load_scenario("custom", src, None).unwrap();
    let r = run(&sc, &RunOptions::default());
    assert_eq!(r.exit_code(), 0, "{}", r.render_text());
    let bad = src.replace("F = 1", "F = -1");
    assert!(matches!(load_scenario("custom", &bad, None), Err(Error::Validation(_))));
}

#[test]
fn inline_and_twisted_courant() {
    let src = "[model]\ninline\nname flat\ncoords x y z\nframe X Y Z\ncoframe a b c\nderive X x = 1\nderive Y y = 1\nderive Z z = 1\n\
               point x=0, y=0, z=0\npoint x=1, y=0, z=0\npoint x=0, y=1, z=0\n[twist]\nH = x*a^b^c\n[checks]\ncourant\n";
    let sc = load_scenario("inline", src, None).unwrap();
    let r = run(&sc, &RunOptions::default());
    assert_eq!(r.exit_code(), 0, "{}", r.render_text());
}
