//! Scenario files.
//!
//! ```text
//! # comment
//! [model]
//! builtin = s3            # or: file = path.model, or a line `inline`
//! constants = c           # followed by raw model lines
//!
//! [structure]
//! example = s3-family     # builtin builder; other keys are its params
//! h = z*w
//! # or a direct pair: e1 = ..., e2 = ..., l = x; y, rho1 = ..., rho2 = ...
//!
//! [twist]
//! H = c*nu1^nu2^nu3       # or: named = H
//!
//! [dualpair]
//! builtin = hopf
//!
//! [checks]
//! integrability
//! types expect=1,2
//! ```

use crate::error::Result;
use crate::frame::parse::{logical_lines, Line};

#[derive(Clone, Debug)]
pub struct Entry {
    pub key: Line,
    pub value: Line,
}

#[derive(Clone, Debug, Default)]
pub struct Section {
    pub entries: Vec<Entry>,
    /// Raw model lines following `inline` in `[model]`.
    pub inline: Vec<Line>,
    pub present: bool,
}

impl Section {
    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key.text == key)
    }

    pub fn value(&self, key: &str) -> Option<&str> {
        self.get(key).map(|e| e.value.text.as_str())
    }
}

#[derive(Clone, Debug)]
pub struct CheckDecl {
    pub name: String,
    pub line: Line,
    pub params: Vec<(String, String)>,
}

impl CheckDecl {
    pub fn param(&self, key: &str) -> Option<&str> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

#[derive(Clone, Debug, Default)]
pub struct ScenarioFile {
    pub model: Section,
    pub structure: Section,
    pub twist: Section,
    pub dualpair: Section,
    pub checks: Vec<CheckDecl>,
}

pub fn parse_scenario(src: &str) -> Result<ScenarioFile> {
    let mut out = ScenarioFile::default();
    let mut current: Option<String> = None;
    let mut inline = false;
    for line in logical_lines(src, 1) {
        if line.text.starts_with('[') {
            if !line.text.ends_with(']') {
                return Err(line.err(0, "unterminated section header"));
            }
            let name = line.text[1..line.text.len() - 1].trim().to_string();
            let sec = match name.as_str() {
                "model" => &mut out.model,
                "structure" => &mut out.structure,
                "twist" => &mut out.twist,
                "dualpair" => &mut out.dualpair,
                "checks" => {
                    current = Some(name);
                    inline = false;
                    continue;
                }
                _ => return Err(line.err(1, format!("unknown section `{}`", name))),
            };
            if sec.present {
                return Err(line.err(0, format!("section `{}` appears twice", name)));
            }
            sec.present = true;
            current = Some(name);
            inline = false;
            continue;
        }
        let Some(sec_name) = current.as_deref() else {
            return Err(line.err(0, "content before the first section header"));
        };
        if sec_name == "checks" {
            out.checks.push(parse_check(&line)?);
            continue;
        }
        let sec = match sec_name {
            "model" => &mut out.model,
            "structure" => &mut out.structure,
            "twist" => &mut out.twist,
            _ => &mut out.dualpair,
        };
        if inline {
            sec.inline.push(line);
            continue;
        }
        if sec_name == "model" && line.text == "inline" {
            inline = true;
            continue;
        }
        let (key, value) = line.split_eq()?;
        if key.text.is_empty() || key.text.contains(char::is_whitespace) {
            return Err(key.err(0, "expected `key = value`"));
        }
        if sec.get(&key.text).is_some() {
            return Err(key.err(0, format!("duplicate key `{}`", key.text)));
        }
        sec.entries.push(Entry { key, value });
    }
    Ok(out)
}

fn parse_check(line: &Line) -> Result<CheckDecl> {
    let (name, rest) = line.keyword();
    let mut params = Vec::new();
    let mut col = 0;
    for w in rest.text.split_whitespace() {
        let pos = rest.text[col..].find(w).map(|p| p + col).unwrap_or(col);
        col = pos + w.len();
        let Some((k, v)) = w.split_once('=') else {
            return Err(rest.err(pos, format!("expected `key=value`, found `{}`", w)));
        };
        if k.is_empty() || v.is_empty() {
            return Err(rest.err(pos, format!("malformed parameter `{}`", w)));
        }
        params.push((k.to_string(), v.to_string()));
    }
    Ok(CheckDecl { name: name.to_string(), line: line.clone(), params })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn sections_and_checks() {
        let src =
            "[model]\nbuiltin = s3\n\n[structure]\nexample = s3-family\nh = z*w\n[checks]\nintegrability\ntypes expect=1,2 points=0\n";
        let s = parse_scenario(src).unwrap();
        assert_eq!(s.model.value("builtin"), Some("s3"));
        assert_eq!(s.structure.value("h"), Some("z*w"));
        assert_eq!(s.checks.len(), 2);
        assert_eq!(s.checks[1].param("expect"), Some("1,2"));
        assert!(!s.twist.present);
    }

    #[test]
    fn inline_model_lines_keep_positions() {
        let src = "[model]\ninline\nname m\nframe X\n[checks]\ncourant\n";
        let s = parse_scenario(src).unwrap();
        assert_eq!(s.model.inline.len(), 2);
        assert_eq!(s.model.inline[0].line, 3);
    }

    #[test]
    fn errors_carry_positions() {
        match parse_scenario("[model]\nbuiltin s3\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{:?}", other),
        }
        match parse_scenario("[checks]\ntypes expect\n") {
            Err(Error::Parse { line, col, .. }) => assert_eq!((line, col), (2, 7)),
            other => panic!("{:?}", other),
        }
        assert!(matches!(parse_scenario("[nonsense]\n"), Err(Error::Parse { line: 1, col: 2, .. })));
        assert!(parse_scenario("builtin = s3\n").is_err());
        assert!(parse_scenario("[model]\n[model]\n").is_err());
    }
}
