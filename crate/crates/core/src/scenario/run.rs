//! Check execution and reports.

use std::fmt::Write as _;

use crate::contact::checks::{integrability_check, normal_frame_criterion, normality_check, FrameVerdict};
use crate::contact::cone::{cone_to_sekiya, cone_type_table, sekiya_to_cone, SekiyaQuadruple};
use crate::contact::{is_poon_wade, poon_wade_reduce, ContactPair, ContactTriple, MixedPair, ReduceMode};
use crate::error::{Error, Result};
use crate::frame::GenSection;
use crate::tduality::{
    annihilators_correspond, double_duality_check, dualize_mixed, dualize_pair, dualize_triple, intertwiner_check, type_change_report,
    TDualPair,
};

use super::format::CheckDecl;
use super::load::Scenario;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckEntry {
    pub name: String,
    pub verdict: Verdict,
    /// Residuals, witnesses and notes.
    pub details: Vec<String>,
    /// Per-sample-point rows.
    pub points: Vec<(usize, String)>,
}

impl CheckEntry {
    fn new(name: &str) -> Self {
        CheckEntry { name: name.into(), verdict: Verdict::Pass, details: Vec::new(), points: Vec::new() }
    }

    fn fail(&mut self, detail: impl Into<String>) {
        self.verdict = Verdict::Fail;
        self.details.push(detail.into());
    }

    fn inconclusive(&mut self, detail: impl Into<String>) {
        if self.verdict == Verdict::Pass {
            self.verdict = Verdict::Inconclusive;
        }
        self.details.push(detail.into());
    }

    fn note(&mut self, detail: impl Into<String>) {
        self.details.push(detail.into());
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub strict: bool,
    /// Restrict per-point tables and pointwise verdicts to these indices.
    pub points: Option<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub scenario: String,
    pub model: String,
    pub entries: Vec<CheckEntry>,
    pub strict: bool,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.entries.iter().any(|e| e.verdict == Verdict::Fail) {
            1
        } else if self.strict && self.entries.iter().any(|e| e.verdict == Verdict::Inconclusive) {
            3
        } else {
            0
        }
    }

    pub fn status(&self) -> &'static str {
        match self.exit_code() {
            0 => "PASS",
            1 => "FAIL",
            _ => "INCONCLUSIVE",
        }
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "scenario {} on model {}", self.scenario, self.model);
        for e in &self.entries {
            let _ = writeln!(s, "{:<13} {}", e.verdict.as_str(), e.name);
            for d in &e.details {
                let _ = writeln!(s, "    {}", d);
            }
            for (k, row) in &e.points {
                let _ = writeln!(s, "    point {}: {}", k, row);
            }
        }
        let _ = writeln!(s, "status {}", self.status());
        s
    }

    /// Flat `key = value` records, one per check, separated by blank lines.
    pub fn render_records(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "scenario = {}", self.scenario);
        let _ = writeln!(s, "model = {}", self.model);
        let _ = writeln!(s, "status = {}", self.status());
        let _ = writeln!(s, "exit_code = {}", self.exit_code());
        for (n, e) in self.entries.iter().enumerate() {
            let _ = writeln!(s);
            let _ = writeln!(s, "record = {}", n + 1);
            let _ = writeln!(s, "check = {}", e.name);
            let _ = writeln!(s, "verdict = {}", e.verdict.as_str());
            for (k, d) in e.details.iter().enumerate() {
                let _ = writeln!(s, "detail.{} = {}", k + 1, d);
            }
            for (k, row) in &e.points {
                let _ = writeln!(s, "point.{} = {}", k, row);
            }
        }
        s
    }
}

pub struct CheckInfo {
    pub name: &'static str,
    pub summary: &'static str,
    pub formula: &'static str,
}

pub const CHECKS: &[CheckInfo] = &[
    CheckInfo {
        name: "courant",
        summary: "Courant algebroid axioms on the generator set and d_H^2 = 0 on basis forms",
        formula: "a(x)<y,z> = <[x,y],z> + <y,[x,z]>; [x,[y,z]] = [[x,y],z] + [y,[x,z]]; [x,y] + [y,x] = 2 d<x,y>; d_H^2 = 0",
    },
    CheckInfo {
        name: "brackets",
        summary: "Dorfman brackets among e1, e2 and the frame of L (table only)",
        formula: "[X+a, Y+b] = [X,Y] + L_X b - i_Y da - i_X i_Y H",
    },
    CheckInfo {
        name: "integrability",
        summary: "strong integrability: L + C e1 and L + C e2 are both involutive",
        formula: "<[a,b],c> = 0 for a, b, c in L + C e_i; certificates are the real and imaginary parts of the nonzero values",
    },
    CheckInfo {
        name: "normality",
        summary: "normality of the triple (integrable cone lift)",
        formula: "N_Phi(x,y) = 0 on E-perp; [e_i, Phi x] = Phi [e_i, x]; [e1, e2] = 0",
    },
    CheckInfo {
        name: "normal-frame",
        summary: "frame criterion for normality of a strongly integrable pair",
        formula: "[e1,e2] = df - 2<e1,df> e2 - 2<e2,df> e1 for some function f",
    },
    CheckInfo {
        name: "types",
        summary: "geometric type (p_E, t_L) at each sample point; param expect=p,t",
        formula: "p_E = dim a(E), t_L = codim_C a(L)",
    },
    CheckInfo {
        name: "mixed-law",
        summary: "type law of the mixed pair at each sample point",
        formula: "2 t_L = type(rho1) + type(rho2) + 1",
    },
    CheckInfo {
        name: "mixed-integrability",
        summary: "d_H rho_i = v_i . rho_i solvable for both spinors",
        formula: "d_H rho_i = v_i . rho_i with v_i a section",
    },
    CheckInfo {
        name: "cone",
        summary: "lambda = 0 cone lift: J^2 = -Id, J skew, roundtrip, type bounds",
        formula: "J^2 = -Id, <Jx,y> + <x,Jy> = 0, 0 <= t_L - t_J <= 1",
    },
    CheckInfo {
        name: "poon-wade",
        summary: "E spanned by a vector field and a 1-form; param reduce=general|cosymplectic|contact",
        formula: "E = span(E ∩ TM, E ∩ T*M); after reduction e^Omega e1 lies in TM",
    },
    CheckInfo {
        name: "tduality",
        summary: "structure transport across the declared dual pair",
        formula: "tau(v . rho) = phi(v) . tau(rho); Ann(tau rho) = phi(Ann rho); t_phi(L) - t_L = j1 + j2 - k",
    },
    CheckInfo {
        name: "double-duality",
        summary: "self-duality of M x S^1 swaps the spinors of the mixed pair",
        formula: "tau(rho1 + i dt rho2) = i (-1)^|rho2| (rho2 + i d~t rho1)",
    },
];

pub fn explain(name: &str) -> Option<String> {
    CHECKS.iter().find(|c| c.name == name).map(|c| format!("{}: {}\n  {}\n", c.name, c.summary, c.formula))
}

struct Ctx<'a> {
    sc: &'a Scenario,
    points: Option<&'a [usize]>,
}

impl Ctx<'_> {
    fn keep(&self, k: usize) -> bool {
        self.points.map(|p| p.contains(&k)).unwrap_or(true)
    }

    fn pair(&self) -> Result<&ContactPair> {
        self.sc.pair.as_ref().ok_or_else(|| Error::Precondition("scenario declares no structure".into()))
    }

    fn triple(&self) -> Result<&ContactTriple> {
        self.sc.triple.as_ref().ok_or_else(|| Error::Precondition("scenario declares no structure".into()))
    }

    fn mixed(&self) -> Result<&MixedPair> {
        self.sc.mixed.as_ref().ok_or_else(|| Error::Precondition("structure has no mixed pair".into()))
    }

    fn dual(&self) -> Result<&TDualPair> {
        self.sc.dual.as_ref().ok_or_else(|| Error::Precondition("scenario declares no dual pair".into()))
    }
}

fn parse_pt(s: &str) -> Option<(usize, usize)> {
    let (a, b) = s.split_once(',')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

fn run_check(c: &Ctx, decl: &CheckDecl) -> Result<CheckEntry> {
    let mut e = CheckEntry::new(&decl.name);
    let sc = c.sc;
    let twist = sc.twist.as_ref();
    match decl.name.as_str() {
        "courant" => {
            let m = &*sc.model;
            let mut twists = vec![None];
            if twist.is_some() {
                twists.push(twist);
            }
            for h in twists {
                let label = if h.is_some() { "twisted" } else { "untwisted" };
                let rep = m.courant_axioms_check(&GenSection::generators(m), h)?;
                let names = ["anchor compatibility", "Leibniz", "symmetric part"];
                for (k, res) in rep.residuals.iter().enumerate() {
                    match res.first() {
                        Some(r) => e.fail(format!("{} {} fails at {} ({} of {})", label, names[k], r, res.len(), rep.checked[k])),
                        None => e.note(format!("{} {}: {} instances", label, names[k], rep.checked[k])),
                    }
                }
                let dd = m.d_squared_defects(h)?;
                match dd.first() {
                    Some((f, r)) => e.fail(format!("{} d^2 {} = {}", label, f, r)),
                    None => e.note(format!("{} d^2 = 0 on all basis forms", label)),
                }
            }
        }
        "brackets" => {
            let p = c.pair()?;
            let m = &*p.model;
            let mut gens = vec![("e1".to_string(), p.e1.clone()), ("e2".to_string(), p.e2.clone())];
            for (k, x) in p.l.iter().enumerate() {
                gens.push((format!("l{}", k + 1), x.clone()));
            }
            for i in 0..gens.len() {
                for j in i + 1..gens.len() {
                    let b = m.dorfman(&gens[i].1, &gens[j].1, twist)?;
                    e.note(format!("[{},{}] = {}", gens[i].0, gens[j].0, b.display(m)));
                }
            }
        }
        "integrability" => {
            let rep = integrability_check(c.pair()?, twist, &[])?;
            for l in &rep.lines {
                if l.involutive() {
                    e.note(format!("L + C e{} involutive", l.line));
                } else {
                    for (a, b, r) in &l.non_members {
                        e.note(format!("L + C e{}: bracket ({}, {}) leaves the span, residual {}", l.line, a, b, r));
                    }
                }
            }
            if rep.strong() {
                e.note("strongly integrable");
            } else {
                let certs = rep.certificates();
                let text: Vec<String> = certs.iter().map(|c| c.to_string()).collect();
                e.fail(format!("not strongly integrable; certificates {{{}}}", text.join(", ")));
            }
        }
        "normality" => {
            let p = c.triple()?;
            let rep = normality_check(p, twist)?;
            if rep.normal() {
                e.note("normal");
            } else {
                for line in rep.summary(&p.model) {
                    e.note(line);
                }
                let res: Vec<String> = rep.residual_coefficients().iter().map(|c| c.to_string()).collect();
                e.fail(format!("not normal; residuals {{{}}}", res.join(", ")));
            }
        }
        "normal-frame" => match normal_frame_criterion(c.pair()?, twist, None)? {
            FrameVerdict::Holds(f) => e.note(format!("holds with f = {}", f)),
            FrameVerdict::NotStronglyIntegrable => e.fail("pair is not strongly integrable"),
            FrameVerdict::Fails(why) => e.fail(format!("no function satisfies the frame identity: {}", why)),
            FrameVerdict::Inconclusive => e.inconclusive("no candidate function matched and no obstruction was certified"),
        },
        "types" => {
            let p = c.pair()?;
            let expect = match decl.param("expect") {
                Some(s) => Some(parse_pt(s).ok_or_else(|| decl.line.err(0, format!("expect must be `p,t`, found `{}`", s)))?),
                None => None,
            };
            for (k, ty) in p.geometric_type()?.into_iter().enumerate() {
                if !c.keep(k) {
                    continue;
                }
                e.points.push((k, format!("p_E = {}, t_L = {}", ty.p_e, ty.t_l)));
                if let Some(want) = expect {
                    if (ty.p_e, ty.t_l) != want {
                        e.fail(format!("point {}: type ({}, {}) differs from expected ({}, {})", k, ty.p_e, ty.t_l, want.0, want.1));
                    }
                }
            }
        }
        "mixed-law" => {
            let mp = c.mixed()?;
            for row in mp.type_sum_table(c.pair()?)? {
                if !c.keep(row.point) {
                    continue;
                }
                e.points.push((row.point, format!("t_L = {}, type(rho1) = {}, type(rho2) = {}", row.t_l, row.type1, row.type2)));
                if !row.holds() {
                    e.fail(format!("point {}: 2*{} != {} + {} + 1", row.point, row.t_l, row.type1, row.type2));
                }
            }
        }
        "mixed-integrability" => {
            let rep = c.mixed()?.integrability(twist)?;
            for (i, v) in [(1, &rep.rho1), (2, &rep.rho2)] {
                match v.section() {
                    Some(s) => e.note(format!("d_H rho{} = v . rho{} with v = {}", i, i, s.display(&sc.model))),
                    None if v.holds() => e.note(format!("d_H rho{} = v . rho{} with a rational witness", i, i)),
                    None => e.fail(format!("d_H rho{} is not a Clifford image of rho{}: {:?}", i, i, v)),
                }
            }
        }
        "cone" => {
            let t = c.triple()?;
            let q = SekiyaQuadruple::from_triple(t);
            let cs = sekiya_to_cone(&q)?;
            match cs.check() {
                Ok(()) => e.note("J^2 = -Id and J is skew"),
                Err(err) => e.fail(err.to_string()),
            }
            let back = cone_to_sekiya(t.model.clone(), &cs)?.to_triple()?;
            if back.phi == t.phi && back.e1 == t.e1 && back.e2 == t.e2 {
                e.note("cone roundtrip recovers the triple");
            } else {
                e.fail("cone roundtrip changes the triple");
            }
            for row in cone_type_table(c.pair()?)? {
                if !c.keep(row.point) {
                    continue;
                }
                e.points.push((row.point, format!("t_L = {}, t_J = {}", row.t_l, row.t_j)));
                if !row.holds() {
                    e.fail(format!("point {}: t_L - t_J out of range", row.point));
                }
            }
        }
        "poon-wade" => {
            let p = c.pair()?;
            match is_poon_wade(p)? {
                Some(f) => {
                    e.note(format!("E ∩ TM spanned by {}", f.tangent.display(&p.model)));
                    e.note(format!("E ∩ T*M spanned by {}", f.cotangent.display(&p.model)));
                }
                None => e.fail("E is not spanned by a vector field and a 1-form"),
            }
            if let Some(mode) = decl.param("reduce") {
                let mode = match mode {
                    "general" => ReduceMode::General,
                    "cosymplectic" => ReduceMode::Cosymplectic,
                    "contact" => ReduceMode::Contact,
                    other => return Err(decl.line.err(0, format!("unknown reduce mode `{}`", other))),
                };
                let r = poon_wade_reduce(p, mode)?;
                e.note(format!("gauge Omega = {}", p.model.form_string(&r.omega)));
                if r.pair.e1.is_vector() {
                    e.note(format!("e^Omega e1 = {} lies in TM", r.pair.e1.display(&p.model)));
                } else {
                    e.fail(format!("e^Omega e1 = {} is not a vector field", r.pair.e1.display(&p.model)));
                }
            }
        }
        "tduality" => tduality_check(c, &mut e)?,
        "double-duality" => {
            let r = double_duality_check(c.mixed()?)?;
            match &r.phase {
                Some(ph) if r.swapped() => {
                    e.note(format!("swap phase {} (expected {})", ph, r.predicted));
                    if !r.phase_matches() {
                        e.fail(format!("phase {} differs from i(-1)^|rho2| = {}", ph, r.predicted));
                    }
                }
                _ => e.fail("the transform of rho1 + i dt rho2 is not a multiple of rho2 + i d~t rho1"),
            }
        }
        other => return Err(decl.line.err(0, format!("unknown check `{}`", other))),
    }
    Ok(e)
}

fn tduality_check(c: &Ctx, e: &mut CheckEntry) -> Result<()> {
    let d = c.dual()?;
    let gens = GenSection::generators(&d.source);
    let rep = intertwiner_check(d, &gens, &[])?;
    for f in &rep.failures {
        e.fail(format!("phi does not preserve {}", f));
    }
    e.note(format!(
        "phi: {} pairings, {} brackets checked ({} skipped: not fibre-invariant)",
        rep.pairings, rep.brackets, rep.brackets_skipped
    ));
    let pair = c.pair()?;
    let dual = dualize_pair(pair, d)?;
    e.note(format!("e1 -> {}", dual.e1.display(&d.target)));
    e.note(format!("e2 -> {}", dual.e2.display(&d.target)));
    for (k, x) in dual.l.iter().enumerate() {
        e.note(format!("L[{}] -> {}", k + 1, x.display(&d.target)));
    }
    dualize_triple(c.triple()?, d)?;
    let Some(mp) = c.sc.mixed.as_ref() else {
        for (k, ty) in dual.geometric_type()?.into_iter().enumerate() {
            if c.keep(k) {
                e.points.push((k, format!("dual p_E = {}, t_L = {}", ty.p_e, ty.t_l)));
            }
        }
        return Ok(());
    };
    let dm = dualize_mixed(mp, d)?;
    e.note(format!("tau(rho1) = {}", d.target.form_string(&dm.rho1)));
    e.note(format!("tau(rho2) = {}", d.target.form_string(&dm.rho2)));
    if !dm.matches_pair(&dual)? {
        e.fail("transformed spinors do not annihilate phi(L)");
    }
    let rows = type_change_report(mp, d)?;
    for row in rows {
        if !c.keep(row.point) {
            continue;
        }
        for (i, r) in [(1, &mp.rho1), (2, &mp.rho2)] {
            if !annihilators_correspond(d, r, row.point)? {
                e.fail(format!("point {}: Ann(tau rho{}) != phi(Ann rho{})", row.point, i, i));
            }
        }
        e.points.push((
            row.point,
            format!(
                "t: {} -> {}, j1 = {}, j2 = {}, k = {}; p: {} -> {} (rule predicts {}{})",
                row.t_l,
                row.t_dual,
                row.j1,
                row.j2,
                row.k,
                row.p_e,
                row.p_dual,
                row.p_predicted,
                if row.p_rule_holds() { "" } else { ", not met" }
            ),
        ));
        if !row.displacement_holds() {
            e.fail(format!("point {}: t displacement differs from j1 + j2 - k", row.point));
        }
    }
    Ok(())
}

pub fn run(sc: &Scenario, opts: &RunOptions) -> Report {
    let c = Ctx { sc, points: opts.points.as_deref() };
    let entries = sc
        .checks
        .iter()
        .map(|decl| {
            run_check(&c, decl).unwrap_or_else(|err| {
                let mut e = CheckEntry::new(&decl.name);
                e.inconclusive(err.to_string());
                e
            })
        })
        .collect();
    Report { scenario: sc.name.clone(), model: sc.model.name.clone(), entries, strict: opts.strict }
}
