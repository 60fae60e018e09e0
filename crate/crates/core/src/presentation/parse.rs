//! Reader and canonical writer for the `.alg` text format.
//!
//! ```text
//! field Q
//! vertex 1
//! vertex 2
//! arrow a: 1 -> 2
//! relation 2*b*a - d*c
//! ```
//!
//! Products are written right to left: in `b*a` the arrow `a` is applied
//! first. `#` starts a comment.

use crate::field::{FieldSpec, Rational};

use super::{PathPoly, Presentation, PresentationError, Quiver};

fn syntax(line: usize, column: usize, message: impl Into<String>) -> PresentationError {
    PresentationError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

pub fn parse_presentation(text: &str) -> Result<Presentation, PresentationError> {
    let mut field = None;
    let mut quiver = Quiver::new();
    let mut pending: Vec<(usize, usize, String)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.split('#').next().unwrap_or("");
        let indent = line.len() - line.trim_start().len();
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest_col = indent + keyword.len() + 2;
        let rest = rest.trim();
        match keyword {
            "field" => {
                if field.is_some() {
                    return Err(syntax(line_no, indent + 1, "field declared twice"));
                }
                field = Some(
                    rest.parse::<FieldSpec>()
                        .map_err(|e| syntax(line_no, rest_col, e.to_string()))?,
                );
            }
            "vertex" => {
                if rest.is_empty() || rest.contains(char::is_whitespace) {
                    return Err(syntax(line_no, rest_col, "expected a single vertex label"));
                }
                quiver.add_vertex(rest).map_err(|e| match e {
                    PresentationError::BadLabel(_) => syntax(line_no, rest_col, e.to_string()),
                    other => other,
                })?;
            }
            "arrow" => {
                let (label, ends) = rest
                    .split_once(':')
                    .ok_or_else(|| syntax(line_no, rest_col, "expected `arrow <label>: <src> -> <tgt>`"))?;
                let (src, tgt) = ends
                    .split_once("->")
                    .ok_or_else(|| syntax(line_no, rest_col, "expected `->` between endpoints"))?;
                let (src, tgt) = (src.trim(), tgt.trim());
                let s = quiver
                    .vertex_index(src)
                    .ok_or_else(|| PresentationError::UnknownVertex(src.to_string()))?;
                let t = quiver
                    .vertex_index(tgt)
                    .ok_or_else(|| PresentationError::UnknownVertex(tgt.to_string()))?;
                quiver.add_arrow(label.trim(), s, t).map_err(|e| match e {
                    PresentationError::BadLabel(_) => syntax(line_no, rest_col, e.to_string()),
                    other => other,
                })?;
            }
            "relation" => pending.push((line_no, rest_col, rest.to_string())),
            other => {
                return Err(syntax(line_no, indent + 1, format!("unknown keyword `{other}`")));
            }
        }
    }

    let field = field.unwrap_or(FieldSpec::Rationals);
    let mut relations = Vec::new();
    for (line_no, col, expr) in pending {
        let poly = parse_poly(&quiver, field, &expr, line_no, col)?;
        if poly.is_zero() {
            continue;
        }
        relations.push(poly);
    }
    Presentation::new(quiver, field, relations)
}

/// Parses a `±`-separated sum of terms `[coeff*]x*y*...`.
pub fn parse_poly(
    quiver: &Quiver,
    field: FieldSpec,
    expr: &str,
    line: usize,
    col0: usize,
) -> Result<PathPoly, PresentationError> {
    let mut poly = PathPoly::zero(field);
    let mut terms: Vec<(bool, usize, &str)> = Vec::new();
    let mut start = 0;
    let mut negative = false;
    let bytes = expr.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        if b == b'+' || b == b'-' {
            let chunk = &expr[start..i];
            if !chunk.trim().is_empty() {
                terms.push((negative, start, chunk));
            } else if i != 0 && !expr[..i].trim().is_empty() {
                return Err(syntax(line, col0 + i, "missing term before sign"));
            }
            negative = b == b'-';
            start = i + 1;
        }
    }
    let chunk = &expr[start..];
    if chunk.trim().is_empty() {
        return Err(syntax(line, col0 + start, "expected a term"));
    }
    terms.push((negative, start, chunk));

    for (neg, offset, chunk) in terms {
        let col = col0 + offset;
        let factors: Vec<&str> = chunk.split('*').map(str::trim).collect();
        if factors.iter().any(|f| f.is_empty()) {
            return Err(syntax(line, col, "empty factor"));
        }
        let (coeff, labels) = match Rational::parse(factors[0]) {
            Some(q) => (q, &factors[1..]),
            None => (Rational::ONE, &factors[..]),
        };
        let mut coeff = field
            .from_rational(&coeff)
            .map_err(|e| syntax(line, col, e.to_string()))?;
        if neg {
            coeff = coeff.neg();
        }
        if labels.len() < 2 {
            return Err(PresentationError::NotAdmissibleRelation(format!(
                "line {line}: term `{}` has length {}",
                chunk.trim(),
                labels.len()
            )));
        }
        let path = quiver.path_by_labels(labels).map_err(|e| match e {
            PresentationError::NotComposable(s) => {
                syntax(line, col, format!("arrows `{s}` do not compose"))
            }
            other => other,
        })?;
        poly.add_term(path, &coeff);
    }
    if !poly.is_parallel() {
        return Err(PresentationError::NonParallelRelation(format!(
            "line {line}: {}",
            expr.trim()
        )));
    }
    Ok(poly)
}

/// Canonical text form; `parse_presentation` of the output reproduces the
/// presentation exactly.
pub fn serialize_presentation(p: &Presentation) -> String {
    let q = p.quiver();
    let mut out = format!("field {}\n", p.field());
    for v in q.vertices() {
        out.push_str(&format!("vertex {v}\n"));
    }
    for a in q.arrows() {
        out.push_str(&format!(
            "arrow {}: {} -> {}\n",
            a.label,
            q.vertices()[a.source],
            q.vertices()[a.target]
        ));
    }
    for r in p.relations() {
        out.push_str(&format!("relation {}\n", r.display(q)));
    }
    out
}
