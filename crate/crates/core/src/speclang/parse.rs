//! Text format parser. Grammar:
//!
//! ```text
//! document    := (blank | comment | section)*
//! section     := name ":" NEWLINE (INDENT entry NEWLINE)*
//! name        := "data" | "variables" | "design" | "assumptions" | "hypothesis"
//!
//! data        := "path" "=" token
//! variables   := ident "=" dtype ["{" token ("," token)* "}"] ["[" number "," number "]"]
//! design      := "study_type" "=" ("observational" | "experiment")
//!              | ("contributor" | "independent") "=" idents
//!              | ("outcome" | "dependent") "=" idents
//!              | "key" "=" token
//!              | "within_subjects" "=" idents
//! assumptions := "alpha" "=" number
//!              | ("normality" | "equal_variance") "(" ident ["|" idents] ")" ["=" bool]
//! hypothesis  := one hypothesis expression (see `hypothesis`)
//! ```
//!
//! `#` starts a comment outside quotes. Tokens are bare runs of
//! alphanumerics and `_ . - + /`, or double-quoted strings.

use std::collections::BTreeMap;

use super::ast::*;
use super::hypothesis::parse_hypothesis;
use super::lexer::{strip_comment, Cursor};
use super::SpecError;

const SECTIONS: [&str; 5] = ["data", "variables", "design", "assumptions", "hypothesis"];

struct Line {
    number: usize,
    text: String,
}

fn syntax(line: usize, message: impl Into<String>) -> SpecError {
    SpecError::Syntax { line, message: message.into() }
}

fn split_sections(text: &str) -> Result<BTreeMap<&'static str, (usize, Vec<Line>)>, SpecError> {
    let mut sections: BTreeMap<&'static str, (usize, Vec<Line>)> = BTreeMap::new();
    let mut current: Option<&'static str> = None;
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        if line.starts_with(char::is_whitespace) {
            let Some(name) = current else {
                return Err(syntax(number, "entry outside of any section"));
            };
            let entries = &mut sections.get_mut(name).expect("section opened").1;
            entries.push(Line { number, text: line.trim().to_string() });
            continue;
        }
        let header = line.trim_end();
        let Some(name) = header.strip_suffix(':') else {
            return Err(syntax(number, format!("expected a section header, found `{header}`")));
        };
        let Some(name) = SECTIONS.iter().copied().find(|s| *s == name.trim()) else {
            return Err(syntax(number, format!("unknown section `{}`", name.trim())));
        };
        if sections.contains_key(name) {
            return Err(syntax(number, format!("section `{name}` appears twice")));
        }
        sections.insert(name, (number, Vec::new()));
        current = Some(name);
    }
    Ok(sections)
}

fn with_line<T>(line: usize, r: Result<T, String>) -> Result<T, SpecError> {
    r.map_err(|m| syntax(line, m))
}

/// `key = ` prefix shared by every keyed entry.
fn key(cur: &mut Cursor, line: usize) -> Result<String, SpecError> {
    let k = with_line(line, cur.ident())?;
    with_line(line, cur.expect('='))?;
    Ok(k)
}

fn end(cur: &mut Cursor, line: usize) -> Result<(), SpecError> {
    if cur.at_end() {
        Ok(())
    } else {
        Err(syntax(line, format!("unexpected `{}`", cur.rest())))
    }
}

fn ident_list(cur: &mut Cursor, line: usize) -> Result<Vec<String>, SpecError> {
    let mut out = vec![with_line(line, cur.ident())?];
    while cur.eat(',') {
        out.push(with_line(line, cur.ident())?);
    }
    Ok(out)
}

fn parse_data(lines: &[Line], header: usize) -> Result<DataDecl, SpecError> {
    let mut path = None;
    for l in lines {
        let mut cur = Cursor::new(&l.text);
        match key(&mut cur, l.number)?.as_str() {
            "path" if path.is_none() => path = Some(with_line(l.number, cur.token())?),
            "path" => return Err(syntax(l.number, "`path` given twice")),
            other => return Err(syntax(l.number, format!("unknown key `{other}` in data"))),
        }
        end(&mut cur, l.number)?;
    }
    path.map(|path| DataDecl { path }).ok_or_else(|| syntax(header, "data section needs `path`"))
}

fn parse_variable(l: &Line) -> Result<VariableDecl, SpecError> {
    let mut cur = Cursor::new(&l.text);
    let name = key(&mut cur, l.number)?;
    let word = with_line(l.number, cur.ident())?;
    let dtype = DType::from_keyword(&word).ok_or_else(|| syntax(l.number, format!("unknown data type `{word}`")))?;
    let mut categories = Vec::new();
    if cur.eat('{') && !cur.eat('}') {
        loop {
            categories.push(with_line(l.number, cur.token())?);
            if cur.eat('}') {
                break;
            }
            with_line(l.number, cur.expect(','))?;
        }
    }
    let mut range = None;
    if cur.eat('[') {
        let lo = with_line(l.number, cur.number())?;
        with_line(l.number, cur.expect(','))?;
        let hi = with_line(l.number, cur.number())?;
        with_line(l.number, cur.expect(']'))?;
        range = Some(Range { lo, hi });
    }
    end(&mut cur, l.number)?;
    Ok(VariableDecl { name, dtype, categories, range })
}

fn parse_design(lines: &[Line], header: usize) -> Result<StudyDesignDecl, SpecError> {
    let mut study_type = None;
    let mut independent = None;
    let mut dependent = None;
    let mut key_col = None;
    let mut within = None;
    for l in lines {
        let mut cur = Cursor::new(&l.text);
        let k = key(&mut cur, l.number)?;
        let twice = || syntax(l.number, format!("`{k}` given twice"));
        match k.as_str() {
            "study_type" => {
                let word = with_line(l.number, cur.ident())?;
                let t = match word.as_str() {
                    "observational" => StudyType::Observational,
                    "experiment" => StudyType::Experiment,
                    _ => return Err(syntax(l.number, format!("unknown study type `{word}`"))),
                };
                if study_type.replace(t).is_some() {
                    return Err(twice());
                }
            }
            "contributor" | "independent" => {
                if independent.replace(ident_list(&mut cur, l.number)?).is_some() {
                    return Err(twice());
                }
            }
            "outcome" | "dependent" => {
                if dependent.replace(ident_list(&mut cur, l.number)?).is_some() {
                    return Err(twice());
                }
            }
            "key" => {
                if key_col.replace(with_line(l.number, cur.token())?).is_some() {
                    return Err(twice());
                }
            }
            "within_subjects" => {
                if within.replace(ident_list(&mut cur, l.number)?).is_some() {
                    return Err(twice());
                }
            }
            other => return Err(syntax(l.number, format!("unknown key `{other}` in design"))),
        }
        end(&mut cur, l.number)?;
    }
    Ok(StudyDesignDecl {
        study_type: study_type.ok_or_else(|| syntax(header, "design needs `study_type`"))?,
        independent: independent.unwrap_or_default(),
        dependent: dependent.unwrap_or_default(),
        key: key_col,
        within_subjects: within.unwrap_or_default(),
    })
}

fn parse_assumptions(lines: &[Line]) -> Result<AssumptionSet, SpecError> {
    let mut set = AssumptionSet::default();
    let mut alpha_seen = false;
    for l in lines {
        let mut cur = Cursor::new(&l.text);
        let word = with_line(l.number, cur.ident())?;
        let property = match word.as_str() {
            "alpha" => {
                with_line(l.number, cur.expect('='))?;
                if std::mem::replace(&mut alpha_seen, true) {
                    return Err(syntax(l.number, "`alpha` given twice"));
                }
                set.alpha = with_line(l.number, cur.number())?;
                end(&mut cur, l.number)?;
                continue;
            }
            "normality" => ClaimKind::Normality,
            "equal_variance" => ClaimKind::EqualVariance,
            other => return Err(syntax(l.number, format!("unknown assumption `{other}`"))),
        };
        with_line(l.number, cur.expect('('))?;
        let variable = with_line(l.number, cur.ident())?;
        let groups = if cur.eat('|') { ident_list(&mut cur, l.number)? } else { Vec::new() };
        with_line(l.number, cur.expect(')'))?;
        let holds = if cur.eat('=') {
            match with_line(l.number, cur.ident())?.as_str() {
                "true" => true,
                "false" => false,
                other => return Err(syntax(l.number, format!("expected `true` or `false`, found `{other}`"))),
            }
        } else {
            true
        };
        end(&mut cur, l.number)?;
        set.claims.push(Claim { property, variable, groups, holds });
    }
    Ok(set)
}

/// Parses a spec document in the text format.
pub fn parse_spec(text: &str) -> Result<AnalysisSpec, SpecError> {
    let sections = split_sections(text)?;
    for name in ["variables", "data", "design", "hypothesis"] {
        if !sections.contains_key(name) {
            return Err(SpecError::MissingSection(name.to_string()));
        }
    }
    let section = |name: &str| {
        let (header, lines) = &sections[name];
        (*header, lines.as_slice())
    };

    let (_, var_lines) = section("variables");
    let mut variables: Vec<VariableDecl> = Vec::new();
    for l in var_lines {
        let v = parse_variable(l)?;
        if variables.iter().any(|w| w.name == v.name) {
            return Err(SpecError::DuplicateVariable(v.name));
        }
        variables.push(v);
    }

    let (h, lines) = section("data");
    let data = parse_data(lines, h)?;
    let (h, lines) = section("design");
    let design = parse_design(lines, h)?;
    let assumptions = match sections.get("assumptions") {
        Some((_, lines)) => parse_assumptions(lines)?,
        None => AssumptionSet::default(),
    };

    let (h, lines) = section("hypothesis");
    let expr = match lines {
        [] => return Err(syntax(h, "hypothesis section is empty")),
        [one] => one,
        [_, second, ..] => return Err(syntax(second.number, "only one hypothesis per spec")),
    };
    let default_dep = match design.dependent.as_slice() {
        [only] => Some(only.as_str()),
        _ => None,
    };
    let hypothesis = parse_hypothesis(&expr.text, &variables, default_dep)?;

    Ok(AnalysisSpec { data, variables, design, assumptions, hypothesis })
}

/// Parses the JSON encoding; structural checks match the text parser.
pub fn parse_spec_json(text: &str) -> Result<AnalysisSpec, SpecError> {
    let spec: AnalysisSpec = serde_json::from_str(text).map_err(|e| SpecError::Json(e.to_string()))?;
    for (i, v) in spec.variables.iter().enumerate() {
        if spec.variables[..i].iter().any(|w| w.name == v.name) {
            return Err(SpecError::DuplicateVariable(v.name.clone()));
        }
    }
    if spec.variables.is_empty() {
        return Err(SpecError::MissingSection("variables".into()));
    }
    Ok(spec)
}
