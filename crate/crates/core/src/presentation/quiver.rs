use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::field::{FieldSpec, Scalar};

use super::PresentationError;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub label: String,
    pub source: usize,
    pub target: usize,
}

/// A finite quiver. Vertex and arrow order is the declaration order and fixes
/// the path order used by rewriting.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

pub(crate) fn is_identifier(label: &str) -> bool {
    let mut chars = label.chars();
    match chars.next() {
        Some(c) if c.is_alphanumeric() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

impl Quiver {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, label: &str) -> Result<usize, PresentationError> {
        if !is_identifier(label) {
            return Err(PresentationError::BadLabel(label.to_string()));
        }
        if self.vertex_index(label).is_some() {
            return Err(PresentationError::DuplicateLabel(label.to_string()));
        }
        self.vertices.push(label.to_string());
        Ok(self.vertices.len() - 1)
    }

    /// Arrow labels may not start with a digit so that coefficients stay
    /// unambiguous in relation syntax.
    pub fn add_arrow(
        &mut self,
        label: &str,
        source: usize,
        target: usize,
    ) -> Result<usize, PresentationError> {
        if !is_identifier(label) || label.starts_with(|c: char| c.is_ascii_digit()) {
            return Err(PresentationError::BadLabel(label.to_string()));
        }
        if self.arrow_index(label).is_some() {
            return Err(PresentationError::DuplicateLabel(label.to_string()));
        }
        if source >= self.vertices.len() || target >= self.vertices.len() {
            return Err(PresentationError::UnknownVertex(format!("{source} or {target}")));
        }
        self.arrows.push(Arrow {
            label: label.to_string(),
            source,
            target,
        });
        Ok(self.arrows.len() - 1)
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == label)
    }

    pub fn arrow_index(&self, label: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.label == label)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, i: usize) -> &Arrow {
        &self.arrows[i]
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    /// Path from a written arrow sequence (leftmost applied last).
    pub fn path(&self, written: &[usize]) -> Result<Path, PresentationError> {
        Path::from_arrows(self, written.to_vec())
    }

    pub fn path_by_labels(&self, labels: &[&str]) -> Result<Path, PresentationError> {
        let idx = labels
            .iter()
            .map(|l| {
                self.arrow_index(l)
                    .ok_or_else(|| PresentationError::UnknownArrow(l.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.path(&idx)
    }

    pub fn path_label(&self, p: &Path) -> String {
        if p.arrows.is_empty() {
            format!("e{}", self.vertices[p.source])
        } else {
            p.arrows
                .iter()
                .map(|&a| self.arrows[a].label.as_str())
                .collect::<Vec<_>>()
                .join("*")
        }
    }
}

/// A path in a quiver. `arrows` is stored in written order: `arrows[0]` is
/// applied last, matching right-to-left composition `b*a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(vertex: usize) -> Self {
        Path {
            source: vertex,
            target: vertex,
            arrows: Vec::new(),
        }
    }

    pub fn from_arrows(quiver: &Quiver, arrows: Vec<usize>) -> Result<Self, PresentationError> {
        let Some(&last) = arrows.last() else {
            return Err(PresentationError::Syntax {
                line: 0,
                column: 0,
                message: "empty arrow sequence".into(),
            });
        };
        for w in arrows.windows(2) {
            let (outer, inner) = (quiver.arrow(w[0]), quiver.arrow(w[1]));
            if inner.target != outer.source {
                return Err(PresentationError::NotComposable(format!(
                    "{}*{}",
                    outer.label, inner.label
                )));
            }
        }
        Ok(Path {
            source: quiver.arrow(last).source,
            target: quiver.arrow(arrows[0]).target,
            arrows,
        })
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    /// `self ∘ inner`: `inner` is applied first. `None` if the endpoints do
    /// not meet.
    pub fn compose(&self, inner: &Path) -> Option<Path> {
        if inner.target != self.source {
            return None;
        }
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&inner.arrows);
        Some(Path {
            source: inner.source,
            target: self.target,
            arrows,
        })
    }

    pub fn contains_arrow(&self, a: usize) -> bool {
        self.arrows.contains(&a)
    }

    /// First position where `needle` occurs as a contiguous subpath.
    pub fn find(&self, needle: &Path) -> Option<usize> {
        let n = needle.len();
        if n == 0 || n > self.len() {
            return None;
        }
        (0..=self.len() - n).find(|&i| self.arrows[i..i + n] == needle.arrows[..])
    }

    /// Splits `self = outer ∘ needle ∘ inner` at arrow position `pos`.
    pub fn split_at(&self, pos: usize, len: usize, quiver: &Quiver) -> (Path, Path) {
        let outer_arrows = self.arrows[..pos].to_vec();
        let inner_arrows = self.arrows[pos + len..].to_vec();
        let mid_target = if pos == 0 {
            self.target
        } else {
            quiver.arrow(self.arrows[pos - 1]).source
        };
        let mid_source = if pos + len == self.len() {
            self.source
        } else {
            quiver.arrow(self.arrows[pos + len]).target
        };
        let outer = if outer_arrows.is_empty() {
            Path::trivial(mid_target)
        } else {
            Path {
                source: mid_target,
                target: self.target,
                arrows: outer_arrows,
            }
        };
        let inner = if inner_arrows.is_empty() {
            Path::trivial(mid_source)
        } else {
            Path {
                source: self.source,
                target: mid_source,
                arrows: inner_arrows,
            }
        };
        (outer, inner)
    }
}

/// Length first; among equal lengths, lexicographic on the written sequence
/// with earlier-declared arrows ranking higher.
impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| {
                for (a, b) in self.arrows.iter().zip(&other.arrows) {
                    match b.cmp(a) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            })
            .then_with(|| other.source.cmp(&self.source))
            .then_with(|| other.target.cmp(&self.target))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A linear combination of parallel paths, keyed by the path order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PathPoly {
    field: FieldSpec,
    terms: BTreeMap<Path, Scalar>,
}

impl PathPoly {
    pub fn zero(field: FieldSpec) -> Self {
        PathPoly {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(field: FieldSpec, path: Path) -> Self {
        let mut p = Self::zero(field);
        p.add_term(path, &field.one());
        p
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn add_term(&mut self, path: Path, coeff: &Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&path) {
            Some(c) => {
                *c = c.add(coeff);
                if c.is_zero() {
                    self.terms.remove(&path);
                }
            }
            None => {
                self.terms.insert(path, coeff.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, other: &PathPoly, factor: &Scalar) {
        for (p, c) in &other.terms {
            self.add_term(p.clone(), &c.mul(factor));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing path order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Path, &Scalar)> {
        self.terms.iter()
    }

    pub fn tip(&self) -> Option<(&Path, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn pop_tip(&mut self) -> Option<(Path, Scalar)> {
        self.terms.pop_last()
    }

    pub fn coefficient(&self, p: &Path) -> Scalar {
        self.terms.get(p).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::zero(self.field);
        out.add_scaled(self, s);
        out
    }

    /// Scaled so the tip coefficient is one.
    pub fn monic(&self) -> Self {
        match self.tip() {
            Some((_, c)) => self.scale(&c.inv().expect("nonzero tip")),
            None => self.clone(),
        }
    }

    /// `outer ∘ self ∘ inner`; terms whose endpoints do not meet vanish.
    pub fn sandwich(&self, outer: &Path, inner: &Path) -> Self {
        let mut out = Self::zero(self.field);
        for (p, c) in &self.terms {
            if let Some(q) = p.compose(inner).and_then(|pi| outer.compose(&pi)) {
                out.add_term(q, c);
            }
        }
        out
    }

    /// Common (source, target) of the terms.
    pub fn endpoints(&self) -> Option<(usize, usize)> {
        self.terms.keys().next().map(|p| (p.source, p.target))
    }

    pub fn is_parallel(&self) -> bool {
        let Some(ends) = self.endpoints() else {
            return true;
        };
        self.terms.keys().all(|p| (p.source, p.target) == ends)
    }

    pub fn min_length(&self) -> Option<usize> {
        self.terms.keys().map(Path::len).min()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn mentions_arrow(&self, a: usize) -> bool {
        self.terms.keys().any(|p| p.contains_arrow(a))
    }

    pub fn retain_paths(&self, mut keep: impl FnMut(&Path) -> bool) -> Self {
        PathPoly {
            field: self.field,
            terms: self
                .terms
                .iter()
                .filter(|(p, _)| keep(p))
                .map(|(p, c)| (p.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn map_paths(&self, mut f: impl FnMut(&Path) -> Path) -> Self {
        let mut out = Self::zero(self.field);
        for (p, c) in &self.terms {
            out.add_term(f(p), c);
        }
        out
    }

    /// Renders with the tip first, e.g. `beta*alpha - delta*gamma`.
    pub fn display(&self, quiver: &Quiver) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (p, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { c.neg() } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !abs.is_one() {
                out.push_str(&format!("{abs}*"));
            }
            out.push_str(&quiver.path_label(p));
        }
        out
    }
}

impl fmt::Debug for PathPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter().rev()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex46_quiver() -> Quiver {
        let mut q = Quiver::new();
        for v in ["1", "2", "3", "4"] {
            q.add_vertex(v).unwrap();
        }
        q.add_arrow("alpha", 0, 1).unwrap();
        q.add_arrow("eta", 0, 1).unwrap();
        q.add_arrow("beta", 1, 3).unwrap();
        q.add_arrow("gamma", 0, 2).unwrap();
        q.add_arrow("delta", 2, 3).unwrap();
        q.add_arrow("eps", 3, 3).unwrap();
        q
    }

    #[test]
    fn composition_is_right_to_left() {
        let q = ex46_quiver();
        let ba = q.path_by_labels(&["beta", "alpha"]).unwrap();
        assert_eq!((ba.source, ba.target), (0, 3));
        assert!(matches!(
            q.path_by_labels(&["alpha", "beta"]),
            Err(PresentationError::NotComposable(_))
        ));
        let e = q.path_by_labels(&["eps"]).unwrap();
        assert_eq!(e.compose(&ba).unwrap().arrows.len(), 3);
        assert!(ba.compose(&e).is_none());
    }

    #[test]
    fn earlier_arrows_rank_higher() {
        let q = ex46_quiver();
        let ba = q.path_by_labels(&["beta", "alpha"]).unwrap();
        let dg = q.path_by_labels(&["delta", "gamma"]).unwrap();
        let e = q.path_by_labels(&["eps"]).unwrap();
        assert!(ba > dg);
        assert!(dg > e);
        assert!(e > Path::trivial(0));
    }

    #[test]
    fn split_recovers_factors() {
        let q = ex46_quiver();
        let p = q.path_by_labels(&["eps", "beta", "alpha"]).unwrap();
        let needle = q.path_by_labels(&["beta"]).unwrap();
        let pos = p.find(&needle).unwrap();
        let (outer, inner) = p.split_at(pos, 1, &q);
        assert_eq!(outer.compose(&needle).unwrap().compose(&inner).unwrap(), p);
    }
}
