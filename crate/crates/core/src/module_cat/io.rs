//! Text format for representations of a presented algebra.
//!
//! ```text
//! dims 1 2
//! arrow a: [1; 0]
//! ```
//!
//! `dims` lists the dimension at each vertex in declaration order. Each
//! `arrow` line gives the matrix of an arrow `s -> t`, `dims[t]` rows
//! separated by `;`. Arrows without a line act by zero.

use crate::field::{ExactMatrix, Scalar};
use crate::presentation::Certified;

use super::{Module, ModuleError};

fn bad(line: usize, msg: impl std::fmt::Display) -> ModuleError {
    ModuleError::BadShape(format!("line {line}: {msg}"))
}

pub fn parse_representation(text: &str, certified: &Certified) -> Result<Module, ModuleError> {
    let q = certified.presentation.quiver();
    let field = certified.algebra.field();
    let mut dims: Option<Vec<usize>> = None;
    let mut mats: Vec<Option<ExactMatrix>> = vec![None; q.num_arrows()];
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        match keyword {
            "dims" => {
                let d = rest
                    .split_whitespace()
                    .map(|x| x.parse::<usize>().map_err(|e| bad(line_no, e)))
                    .collect::<Result<Vec<_>, _>>()?;
                if d.len() != q.num_vertices() {
                    return Err(bad(line_no, "one dimension per vertex"));
                }
                dims = Some(d);
            }
            "arrow" => {
                let d = dims.as_ref().ok_or_else(|| bad(line_no, "`dims` must come first"))?;
                let (label, body) = rest.split_once(':').ok_or_else(|| bad(line_no, "expected `arrow <label>: [...]`"))?;
                let a = q
                    .arrow_index(label.trim())
                    .ok_or_else(|| bad(line_no, format!("unknown arrow `{}`", label.trim())))?;
                let body = body
                    .trim()
                    .strip_prefix('[')
                    .and_then(|b| b.strip_suffix(']'))
                    .ok_or_else(|| bad(line_no, "matrix must be enclosed in brackets"))?;
                let (rows, cols) = (d[q.arrow(a).target], d[q.arrow(a).source]);
                let entries: Vec<Vec<Scalar>> = if body.trim().is_empty() {
                    Vec::new()
                } else {
                    body.split(';')
                        .map(|r| {
                            r.split_whitespace()
                                .map(|x| field.parse_scalar(x).map_err(|e| bad(line_no, e)))
                                .collect::<Result<Vec<_>, _>>()
                        })
                        .collect::<Result<_, _>>()?
                };
                let shape_ok = if rows == 0 || cols == 0 {
                    entries.iter().all(Vec::is_empty)
                } else {
                    entries.len() == rows && entries.iter().all(|r| r.len() == cols)
                };
                if !shape_ok {
                    return Err(bad(line_no, format!("arrow `{}` needs a {rows}x{cols} matrix", label.trim())));
                }
                mats[a] = Some(ExactMatrix::from_fn(field, rows, cols, |r, c| entries[r][c].clone()));
            }
            other => return Err(bad(line_no, format!("unknown keyword `{other}`"))),
        }
    }
    let dims = dims.ok_or_else(|| bad(0, "missing `dims`"))?;
    let mats: Vec<ExactMatrix> = mats
        .into_iter()
        .enumerate()
        .map(|(a, m)| {
            m.unwrap_or_else(|| ExactMatrix::zeros(field, dims[q.arrow(a).target], dims[q.arrow(a).source]))
        })
        .collect();
    Module::from_representation(certified, dims, &mats)
}
