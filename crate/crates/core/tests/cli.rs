use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_contactgeom"))
}

fn scenario(path: &str) -> String {
    format!("{}/scenarios/{}", env!("CARGO_MANIFEST_DIR"), path)
}

#[test]
fn exit_codes() {
    let ok = bin().args(["run", "s3_strong_integrability"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let fail = bin().args(["run", &scenario("s3_normality_h_cubed.scn")]).output().unwrap();
    assert_eq!(fail.status.code(), Some(1));
    let text = String::from_utf8(fail.stdout).unwrap();
    assert!(text.contains("FAIL          normality"));
    let invalid = bin().args(["run", &scenario("invalid/jacobi_violation.scn")]).output().unwrap();
    assert_eq!(invalid.status.code(), Some(2));
    assert!(String::from_utf8(invalid.stderr).unwrap().contains("Jacobi identity fails for (X1, X2, X3)"));
    let missing = bin().args(["run", "no-such-scenario"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn strict_mode() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.scn");
    std::fs::write(&path, "[model]\nbuiltin = heisenberg\n[structure]\nexample = heisenberg\n[checks]\ndouble-duality\ntduality\n")
        .unwrap();
    let lax = bin().args(["run", path.to_str().unwrap()]).output().unwrap();
    assert_eq!(lax.status.code(), Some(0));
    let strict = bin().args(["run", path.to_str().unwrap(), "--strict"]).output().unwrap();
    assert_eq!(strict.status.code(), Some(3));
}

#[test]
fn report_file_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for p in [&a, &b] {
        let out = bin().args(["run", "hopf_tduality", "--report", p.to_str().unwrap(), "--points", "0,2"]).output().unwrap();
        assert_eq!(out.status.code(), Some(0));
    }
    let ra = std::fs::read(&a).unwrap();
    assert_eq!(ra, std::fs::read(&b).unwrap());
    let text = String::from_utf8(ra).unwrap();
    assert!(text.starts_with("scenario = hopf_tduality\nmodel = s3-hopf\nstatus = PASS\nexit_code = 0\n"));
    assert!(text.contains("point.2 = "));
    assert!(!text.contains("point.1 = "));
}

#[test]
fn list_and_explain() {
    let out = bin().arg("list").output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["s3-family", "hopf", "triple-contact-7d", "s3_normality_h_cubed", "normality"] {
        assert!(text.contains(name), "{}", name);
    }
    let ex = bin().args(["explain", "mixed-law"]).output().unwrap();
    assert!(String::from_utf8(ex.stdout).unwrap().contains("2 t_L = type(rho1) + type(rho2) + 1"));
    assert_eq!(bin().args(["explain", "nothing"]).output().unwrap().status.code(), Some(2));
}
