//! Hypothesis expressions.
//!
//! ```text
//! hypothesis := comparison | linear
//! comparison := [ident ":"] ident ":" category relation ident ":" category
//! relation   := ">" | "<" | "!=" | "≠"
//! linear     := ident "~" ["+" | "-"] ident
//! ```

use super::ast::{HypothesisDecl, Relation, Sign, VariableDecl};
use super::lexer::Cursor;
use super::SpecError;

fn unsupported(msg: impl Into<String>) -> SpecError {
    SpecError::UnsupportedForm(msg.into())
}

fn lookup<'a>(variables: &'a [VariableDecl], name: &str) -> Result<&'a VariableDecl, SpecError> {
    variables.iter().find(|v| v.name == name).ok_or_else(|| SpecError::UnknownVariable(name.to_string()))
}

fn relation(cur: &mut Cursor) -> Option<Relation> {
    if cur.eat_str("!=") || cur.eat_str("≠") {
        Some(Relation::NotEqual)
    } else if cur.eat('>') {
        Some(Relation::Greater)
    } else if cur.eat('<') {
        Some(Relation::Less)
    } else {
        None
    }
}

/// Parses one hypothesis. For comparisons without an explicit `Outcome:`
/// prefix, `dependent` supplies the outcome variable.
pub fn parse_hypothesis(
    expr: &str,
    variables: &[VariableDecl],
    dependent: Option<&str>,
) -> Result<HypothesisDecl, SpecError> {
    if variables.is_empty() {
        return Err(unsupported("no variables declared"));
    }
    let mut cur = Cursor::new(expr);
    let first = cur.ident().map_err(unsupported)?;
    if cur.eat('~') {
        return linear(&mut cur, variables, first);
    }
    cur.expect(':').map_err(unsupported)?;
    let second = cur.token().map_err(unsupported)?;
    let (dep, var, left) =
        if cur.eat(':') { (Some(first), second, cur.token().map_err(unsupported)?) } else { (None, first, second) };
    let rel = relation(&mut cur).ok_or_else(|| unsupported(format!("expected `>`, `<` or `!=` in `{expr}`")))?;
    let var2 = cur.ident().map_err(unsupported)?;
    cur.expect(':').map_err(unsupported)?;
    let right = cur.token().map_err(unsupported)?;
    if relation(&mut cur).is_some() {
        return Err(unsupported("a comparison relates exactly two groups"));
    }
    if !cur.at_end() {
        return Err(unsupported(format!("trailing input `{}`", cur.rest())));
    }

    let decl = lookup(variables, &var)?;
    if var2 != var {
        lookup(variables, &var2)?;
        return Err(unsupported(format!("`{var}` and `{var2}` differ; compare two categories of one variable")));
    }
    if !decl.dtype.is_categorical() {
        return Err(unsupported(format!("`{var}` is {} and has no categories to compare", decl.dtype)));
    }
    for cat in [&left, &right] {
        if decl.category_index(cat).is_none() {
            return Err(SpecError::UnknownCategory { variable: var.clone(), category: cat.clone() });
        }
    }
    if left == right {
        return Err(unsupported(format!("both sides name category `{left}`")));
    }
    let dep = match dep.or_else(|| dependent.map(str::to_string)) {
        Some(d) => d,
        None => return Err(unsupported("no outcome given; write `Outcome: Var:a > Var:b`")),
    };
    lookup(variables, &dep)?;
    if dep == var {
        return Err(unsupported(format!("`{var}` cannot be both outcome and grouping variable")));
    }
    Ok(HypothesisDecl::GroupComparison { dependent: dep, independent: var, left, right, relation: rel })
}

fn linear(cur: &mut Cursor, variables: &[VariableDecl], x: String) -> Result<HypothesisDecl, SpecError> {
    let sign = if cur.eat('+') {
        Sign::Positive
    } else if cur.eat('-') {
        Sign::Negative
    } else {
        Sign::Nonzero
    };
    let y = cur.ident().map_err(unsupported)?;
    if !cur.at_end() {
        return Err(unsupported("a linear relationship relates exactly two variables"));
    }
    lookup(variables, &x)?;
    lookup(variables, &y)?;
    if x == y {
        return Err(unsupported(format!("`{x}` related to itself")));
    }
    Ok(HypothesisDecl::LinearRelationship { x, y, sign })
}
