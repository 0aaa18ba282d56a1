//! Declarative scenarios: load, run checks, report.

pub mod format;
pub mod load;
pub mod run;

pub use format::{parse_scenario, CheckDecl, ScenarioFile};
pub use load::{load_scenario, load_scenario_file, Scenario};
pub use run::{explain, run, CheckEntry, Report, RunOptions, Verdict, CHECKS};

/// Scenarios shipped with the crate.
pub const SCENARIOS: &[(&str, &str, &str)] = &[
    (
        "s3_strong_integrability",
        "S^3 family with h = zw: strongly integrable and normal",
        include_str!("../../scenarios/s3_strong_integrability.scn"),
    ),
    ("s3_normality_h_cubed", "S^3 family with h = z^3: normality fails", include_str!("../../scenarios/s3_normality_h_cubed.scn")),
    (
        "s3_formal_certificates",
        "formal S^3 family: bracket table and integrability certificates",
        include_str!("../../scenarios/s3_formal_certificates.scn"),
    ),
    ("s3_twisted_certificates", "formal S^3 family with twist c nu1^nu2^nu3", include_str!("../../scenarios/s3_twisted_certificates.scn")),
    (
        "heisenberg_tduality",
        "Heisenberg pair E_{b,c}: types, Poon-Wade reduction, T-duality",
        include_str!("../../scenarios/heisenberg_tduality.scn"),
    ),
    ("hopf_tduality", "S^3 family across the Hopf T-duality", include_str!("../../scenarios/hopf_tduality.scn")),
    ("cosymplectic_normality", "cosymplectic (alpha1, alpha2^alpha3): normal", include_str!("../../scenarios/cosymplectic_normality.scn")),
    (
        "cosymplectic_not_normal",
        "cosymplectic (alpha3, alpha1^alpha2): not normal",
        include_str!("../../scenarios/cosymplectic_not_normal.scn"),
    ),
    ("triple_contact_7d", "Phi_0 from a triple almost contact structure", include_str!("../../scenarios/triple_contact_7d.scn")),
    ("flat_pair", "pair declared directly on the flat 3-torus", include_str!("../../scenarios/flat_pair.scn")),
];

pub fn builtin_scenario(name: &str) -> Option<&'static str> {
    SCENARIOS.iter().find(|(n, _, _)| *n == name).map(|(_, _, s)| *s)
}
