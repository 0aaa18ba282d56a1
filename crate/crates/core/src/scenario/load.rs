//! Resolving a parsed scenario into models and structures.

use std::path::Path;
use std::sync::Arc;

use crate::algebra::{expr::eval_const, parse_expr, GaussRat};
use crate::contact::{builtin_example, triple_from_pair, ContactPair, ContactTriple, MixedPair};
use crate::error::{Error, Result};
use crate::forms::Form;
use crate::frame::parse::{logical_lines, parse_model_lines, Line};
use crate::frame::{builtin_model_with_constants, FrameModel, GenSection};
use crate::tduality::{builtin_dual_pair, trivial_circle, TDualPair};

use super::format::{parse_scenario, CheckDecl, ScenarioFile, Section};

/// A scenario with every declaration resolved and validated.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub model: Arc<FrameModel>,
    pub pair: Option<ContactPair>,
    pub triple: Option<ContactTriple>,
    pub mixed: Option<MixedPair>,
    pub twist: Option<Form>,
    pub dual: Option<TDualPair>,
    pub checks: Vec<CheckDecl>,
}

fn constants(sec: &Section) -> Vec<String> {
    sec.value("constants").map(|c| c.split_whitespace().map(str::to_string).collect()).unwrap_or_default()
}

fn load_model(sec: &Section, base: Option<&Path>) -> Result<Option<FrameModel>> {
    if !sec.inline.is_empty() {
        return parse_model_lines(&sec.inline).map(Some);
    }
    let consts = constants(sec);
    let consts: Vec<&str> = consts.iter().map(String::as_str).collect();
    if let Some(e) = sec.get("file") {
        let path = match base {
            Some(b) => b.join(&e.value.text),
            None => e.value.text.clone().into(),
        };
        let src = std::fs::read_to_string(&path).map_err(|err| e.value.err(0, format!("cannot read `{}`: {}", path.display(), err)))?;
        let mut lines = logical_lines(&src, 1);
        if !consts.is_empty() {
            lines.push(Line { line: e.key.line, col: e.key.col, text: format!("constants {}", consts.join(" ")) });
        }
        return parse_model_lines(&lines).map(Some);
    }
    if let Some(e) = sec.get("builtin") {
        return builtin_model_with_constants(&e.value.text, &consts).map(Some).map_err(|err| e.value.err(0, err.to_string()));
    }
    if sec.present {
        return Err(Error::validation("[model] needs `builtin`, `file` or `inline`"));
    }
    Ok(None)
}

fn section_at(model: &FrameModel, l: &Line) -> Result<GenSection> {
    model.section_from_expr(&l.expr()?)
}

fn form_at(model: &FrameModel, l: &Line) -> Result<Form> {
    model.form_from_expr(&l.expr()?)
}

/// Split `a; b; c` keeping column positions.
fn split_list(l: &Line) -> Vec<Line> {
    let mut out = Vec::new();
    let mut start = 0;
    for part in l.text.split(';') {
        let lead = part.len() - part.trim_start().len();
        out.push(Line { line: l.line, col: l.col + start + lead, text: part.trim().to_string() });
        start += part.len() + 1;
    }
    out
}

type Structures = (Arc<FrameModel>, Option<ContactPair>, Option<ContactTriple>, Option<MixedPair>);

fn load_structures(file: &ScenarioFile, model: Option<FrameModel>) -> Result<Structures> {
    let sec = &file.structure;
    if let Some(ex) = sec.get("example") {
        let mut params: Vec<(String, String)> =
            sec.entries.iter().filter(|e| e.key.text != "example").map(|e| (e.key.text.clone(), e.value.text.clone())).collect();
        if let Some(b) = file.model.value("builtin") {
            if !params.iter().any(|(k, _)| k == "model") {
                params.push(("model".into(), b.into()));
            }
        }
        if let Some(c) = file.model.value("constants") {
            params.push(("constants".into(), c.into()));
        }
        let ex = builtin_example(&ex.value.text, &params).map_err(|e| match e {
            Error::Parse { .. } => e,
            other => ex.value.err(0, other.to_string()),
        })?;
        let model = ex.model().clone();
        return Ok((model, Some(ex.pair), Some(ex.triple), ex.mixed));
    }
    let model = Arc::new(model.ok_or_else(|| Error::validation("scenario declares neither a model nor an example"))?);
    if !sec.present {
        return Ok((model, None, None, None));
    }
    let m = &*model;
    let need = |k: &str| sec.get(k).ok_or_else(|| Error::Validation(format!("[structure] is missing `{}`", k)));
    let e1 = section_at(m, &need("e1")?.value)?;
    let e2 = section_at(m, &need("e2")?.value)?;
    let l = split_list(&need("l")?.value).iter().map(|x| section_at(m, x)).collect::<Result<Vec<_>>>()?;
    let pair = ContactPair::new(model.clone(), e1, e2, l)?;
    let triple = triple_from_pair(&pair)?;
    let mixed = match (sec.get("rho1"), sec.get("rho2")) {
        (Some(a), Some(b)) => {
            Some(MixedPair::new(model.clone(), form_at(m, &a.value)?, form_at(m, &b.value)?, pair.e1.clone(), pair.e2.clone())?)
        }
        (None, None) => None,
        _ => return Err(Error::validation("[structure] needs both `rho1` and `rho2`")),
    };
    if let Some(mp) = &mixed {
        if !mp.matches_pair(&pair)? {
            return Err(Error::validation("the spinors do not annihilate the declared L"));
        }
    }
    Ok((model, Some(pair), Some(triple), mixed))
}

fn load_twist(sec: &Section, model: &FrameModel) -> Result<Option<Form>> {
    if !sec.present {
        return Ok(None);
    }
    let h = if let Some(e) = sec.get("named") {
        model.named_form(&e.value.text).cloned().ok_or_else(|| e.value.err(0, format!("model has no form `{}`", e.value.text)))?
    } else if let Some(e) = sec.get("H") {
        form_at(model, &e.value)?
    } else {
        return Err(Error::validation("[twist] needs `H` or `named`"));
    };
    model.check_twist(&h)?;
    Ok(Some(h))
}

fn rebind_source(p: TDualPair, model: &Arc<FrameModel>) -> Result<TDualPair> {
    if p.source.name != model.name {
        return Err(Error::ModelMismatch(format!(
            "dual pair `{}` starts on `{}`, the structure lives on `{}`",
            p.name, p.source.name, model.name
        )));
    }
    TDualPair::new(&p.name, model.clone(), p.target.clone(), p.basic, p.fiber, p.f, p.h, p.h_dual)
}

fn frame_pairs(l: &Line, s: &FrameModel, t: &FrameModel) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for item in l.text.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let (a, b) = item.split_once(':').ok_or_else(|| l.err(0, format!("expected `source:target`, found `{}`", item)))?;
        let i = s.frame_index(a.trim()).ok_or_else(|| l.err(0, format!("unknown source frame field `{}`", a.trim())))?;
        let j = t.frame_index(b.trim()).ok_or_else(|| l.err(0, format!("unknown target frame field `{}`", b.trim())))?;
        out.push((i, j));
    }
    Ok(out)
}

fn load_dual(sec: &Section, model: &Arc<FrameModel>, twist: &Option<Form>) -> Result<Option<TDualPair>> {
    if !sec.present {
        return Ok(None);
    }
    if let Some(e) = sec.get("builtin") {
        let p = match e.value.text.as_str() {
            "trivial-circle" => trivial_circle(model)?,
            name => rebind_source(builtin_dual_pair(name).map_err(|err| e.value.err(0, err.to_string()))?, model)?,
        };
        return Ok(Some(p));
    }
    let need = |k: &str| sec.get(k).ok_or_else(|| Error::Validation(format!("[dualpair] is missing `{}`", k)));
    let target = {
        let e = need("target")?;
        Arc::new(builtin_model_with_constants(&e.value.text, &[]).map_err(|err| e.value.err(0, err.to_string()))?)
    };
    let basic = frame_pairs(&need("basic")?.value, model, &target)?;
    let fiber = frame_pairs(&need("fiber")?.value, model, &target)?;
    let f: Vec<Vec<GaussRat>> = split_list(&need("F")?.value)
        .iter()
        .map(|row| row.text.split(',').map(|x| eval_const(&parse_expr(x.trim())?)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let h_dual = match sec.get("dual_twist") {
        Some(e) => Some(form_at(&target, &e.value)?),
        None => None,
    };
    TDualPair::new("custom", model.clone(), target, basic, fiber, f, twist.clone(), h_dual).map(Some)
}

pub fn load_scenario(name: &str, src: &str, base: Option<&Path>) -> Result<Scenario> {
    let file = parse_scenario(src)?;
    let model = load_model(&file.model, base)?;
    let (model, pair, triple, mixed) = load_structures(&file, model)?;
    let twist = load_twist(&file.twist, &model)?;
    let dual = load_dual(&file.dualpair, &model, &twist)?;
    if file.checks.is_empty() {
        return Err(Error::validation("scenario declares no checks"));
    }
    Ok(Scenario { name: name.to_string(), model, pair, triple, mixed, twist, dual, checks: file.checks })
}

pub fn load_scenario_file(path: &Path) -> Result<Scenario> {
    let src = std::fs::read_to_string(path).map_err(|e| Error::Other(format!("cannot read `{}`: {}", path.display(), e)))?;
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("scenario");
    load_scenario(name, &src, path.parent())
}
