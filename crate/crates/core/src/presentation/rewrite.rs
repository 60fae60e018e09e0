//! Rewriting systems for path algebras: overlap completion, normal forms and
//! the admissibility certificate.

use std::collections::VecDeque;

use serde::Serialize;

use crate::field::{ColumnSpace, ExactMatrix, FieldSpec};

use super::{Path, PathPoly, Presentation, PresentationError, Quiver};

/// `tip -> tail`, with `tip - tail` a monic element of the ideal whose tip is
/// the largest path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub tip: Path,
    pub tail: PathPoly,
}

impl Rule {
    fn from_poly(poly: &PathPoly) -> Option<Rule> {
        let mut monic = poly.monic();
        let (tip, _) = monic.pop_tip()?;
        Some(Rule {
            tip,
            tail: monic.scale(&poly.field().from_i64(-1)),
        })
    }
}

/// A rewriting system with every tip of length at most `degree_cap` and every
/// overlap between tips resolved.
#[derive(Clone, Debug)]
pub struct ReductionSystem {
    quiver: Quiver,
    field: FieldSpec,
    rules: Vec<Rule>,
    degree_cap: usize,
    overlaps_checked: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompletionStats {
    pub rules: usize,
    pub overlaps_checked: usize,
    pub degree_cap: usize,
}

impl ReductionSystem {
    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn degree_cap(&self) -> usize {
        self.degree_cap
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn stats(&self) -> CompletionStats {
        CompletionStats {
            rules: self.rules.len(),
            overlaps_checked: self.overlaps_checked,
            degree_cap: self.degree_cap,
        }
    }

    fn find_reducer(&self, p: &Path) -> Option<(usize, usize)> {
        self.rules
            .iter()
            .enumerate()
            .find_map(|(i, r)| p.find(&r.tip).map(|pos| (i, pos)))
    }

    pub fn is_irreducible(&self, p: &Path) -> bool {
        self.find_reducer(p).is_none()
    }

    pub fn normal_form(&self, poly: &PathPoly) -> PathPoly {
        let mut work = poly.clone();
        let mut done = PathPoly::zero(poly.field());
        while let Some((p, c)) = work.pop_tip() {
            match self.find_reducer(&p) {
                Some((ri, pos)) => {
                    let rule = &self.rules[ri];
                    let (outer, inner) = p.split_at(pos, rule.tip.len(), &self.quiver);
                    work.add_scaled(&rule.tail.sandwich(&outer, &inner), &c);
                }
                None => done.add_term(p, &c),
            }
        }
        done
    }

    pub fn normal_form_path(&self, p: &Path) -> PathPoly {
        self.normal_form(&PathPoly::monomial(self.field, p.clone()))
    }

    /// Completes the relations of `p`. Fails with `CompletionOverflow` as soon
    /// as a rule with a tip longer than `degree_cap` would be needed.
    pub fn complete(p: &Presentation, degree_cap: usize) -> Result<Self, PresentationError> {
        let mut sys = ReductionSystem {
            quiver: p.quiver().clone(),
            field: p.field(),
            rules: Vec::new(),
            degree_cap,
            overlaps_checked: 0,
        };
        let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
        for rel in p.relations() {
            let r = sys.normal_form(rel);
            sys.push_rule(&r, &mut queue)?;
        }
        while let Some((i, j)) = queue.pop_front() {
            for s in sys.overlap_polys(i, j) {
                sys.overlaps_checked += 1;
                let r = sys.normal_form(&s);
                sys.push_rule(&r, &mut queue)?;
            }
        }
        sys.interreduce();
        Ok(sys)
    }

    fn push_rule(
        &mut self,
        poly: &PathPoly,
        queue: &mut VecDeque<(usize, usize)>,
    ) -> Result<(), PresentationError> {
        let Some(rule) = Rule::from_poly(poly) else {
            return Ok(());
        };
        if rule.tip.len() > self.degree_cap {
            return Err(PresentationError::CompletionOverflow {
                cap: self.degree_cap,
                tip: self.quiver.path_label(&rule.tip),
            });
        }
        self.rules.push(rule);
        let k = self.rules.len() - 1;
        for j in 0..=k {
            queue.push_back((k, j));
            if j != k {
                queue.push_back((j, k));
            }
        }
        Ok(())
    }

    /// S-polynomials for the overlaps of rule `i`'s tip followed by rule `j`'s
    /// tip, plus inclusions of `j` inside `i`.
    fn overlap_polys(&self, i: usize, j: usize) -> Vec<PathPoly> {
        let (ri, rj) = (&self.rules[i], &self.rules[j]);
        let (t1, t2) = (&ri.tip, &rj.tip);
        let mut out = Vec::new();
        // suffix of t1 (applied first) equals prefix of t2 (applied last)
        for k in 1..t1.len().min(t2.len()) {
            if t1.arrows[t1.len() - k..] != t2.arrows[..k] {
                continue;
            }
            let word = {
                let mut w = t1.arrows[..t1.len() - k].to_vec();
                w.extend_from_slice(&t2.arrows);
                w
            };
            let word = Path::from_arrows(&self.quiver, word).expect("overlap composes");
            let (_, v) = word.split_at(0, t1.len(), &self.quiver);
            let (u, _) = word.split_at(t1.len() - k, t2.len(), &self.quiver);
            let mut s = ri.tail.sandwich(&Path::trivial(word.target), &v);
            s.add_scaled(
                &rj.tail.sandwich(&u, &Path::trivial(word.source)),
                &self.field.from_i64(-1),
            );
            out.push(s);
        }
        if i != j && t2.len() <= t1.len() {
            if let Some(pos) = t1.find(t2) {
                let (u, v) = t1.split_at(pos, t2.len(), &self.quiver);
                let mut s = ri.tail.clone();
                s.add_scaled(&rj.tail.sandwich(&u, &v), &self.field.from_i64(-1));
                out.push(s);
            }
        }
        out
    }

    /// Drops rules whose tip contains another rule's tip and fully reduces the
    /// remaining tails.
    fn interreduce(&mut self) {
        let mut kept: Vec<Rule> = Vec::new();
        let mut order: Vec<usize> = (0..self.rules.len()).collect();
        order.sort_by(|&a, &b| self.rules[a].tip.cmp(&self.rules[b].tip).then(a.cmp(&b)));
        for idx in order {
            let r = &self.rules[idx];
            if kept.iter().any(|k| r.tip.find(&k.tip).is_some()) {
                continue;
            }
            kept.push(r.clone());
        }
        self.rules = kept;
        for i in 0..self.rules.len() {
            let tail = self.rules[i].tail.clone();
            let reduced = self.normal_form(&tail);
            self.rules[i].tail = reduced;
        }
    }

    /// Irreducible paths grouped by length, stopping at the first empty
    /// length or at `max_len` (inclusive).
    pub fn normal_paths(&self, max_len: usize) -> Vec<Vec<Path>> {
        let q = &self.quiver;
        let mut layers: Vec<Vec<Path>> = vec![(0..q.num_vertices()).map(Path::trivial).collect()];
        let arrows: Vec<Path> = (0..q.num_arrows())
            .map(|a| q.path(&[a]).expect("arrow path"))
            .filter(|p| self.is_irreducible(p))
            .collect();
        if max_len >= 1 {
            layers.push(arrows);
        }
        while layers.len() <= max_len {
            let prev = layers.last().expect("nonempty");
            if prev.is_empty() {
                break;
            }
            let mut next = Vec::new();
            for p in prev {
                for a in 0..q.num_arrows() {
                    if q.arrow(a).source != p.target {
                        continue;
                    }
                    let mut w = vec![a];
                    w.extend_from_slice(&p.arrows);
                    let cand = Path {
                        source: p.source,
                        target: q.arrow(a).target,
                        arrows: w,
                    };
                    // only subpaths through the new arrow can be tips
                    let hit = self.rules.iter().any(|r| {
                        r.tip.len() <= cand.len() && cand.arrows[..r.tip.len()] == r.tip.arrows[..]
                    });
                    if !hit {
                        next.push(cand);
                    }
                }
            }
            next.sort_by(basis_order);
            layers.push(next);
        }
        if layers.last().is_some_and(Vec::is_empty) {
            layers.pop();
        }
        layers
    }

    /// Smallest `N <= cap` such that every path of length `N` rewrites to zero.
    pub fn check_admissible(&self, cap: usize) -> Result<usize, PresentationError> {
        let layers = self.normal_paths(cap);
        if layers.len() > cap {
            return Err(PresentationError::NotAdmissibleUpToCap { cap });
        }
        let basis: Vec<Path> = layers.into_iter().flatten().collect();
        let index = |p: &Path| basis.iter().position(|b| b == p);
        let n = basis.len();
        let to_vec = |poly: &PathPoly| {
            let mut v = vec![self.field.zero(); n];
            for (p, c) in poly.terms() {
                v[index(p).expect("normal form in basis")] = c.clone();
            }
            v
        };
        // rad^L as a span of normal-form combinations
        let mut layer: Vec<PathPoly> = (0..self.quiver.num_arrows())
            .map(|a| self.normal_form_path(&self.quiver.path(&[a]).expect("arrow")))
            .filter(|p| !p.is_zero())
            .collect();
        let mut length = 1;
        loop {
            if layer.is_empty() {
                return Ok(length);
            }
            if length >= cap {
                return Err(PresentationError::NotAdmissibleUpToCap { cap });
            }
            let mut next = Vec::new();
            for poly in &layer {
                for a in 0..self.quiver.num_arrows() {
                    let ap = poly.sandwich(&self.quiver.path(&[a]).expect("arrow"), &Path::trivial(poly.endpoints().map_or(0, |e| e.0)));
                    let r = self.normal_form(&ap);
                    if !r.is_zero() {
                        next.push(r);
                    }
                }
            }
            // keep a basis to bound the work
            if !next.is_empty() {
                let cols: Vec<Vec<_>> = next.iter().map(&to_vec).collect();
                let m = ExactMatrix::from_fn(self.field, n, cols.len(), |r, c| cols[c][r].clone());
                let span = ColumnSpace::span(&m);
                next = (0..span.dim())
                    .map(|j| {
                        let mut poly = PathPoly::zero(self.field);
                        for (r, b) in basis.iter().enumerate() {
                            poly.add_term(b.clone(), span.basis().get(r, j));
                        }
                        poly
                    })
                    .collect();
            }
            layer = next;
            length += 1;
        }
    }
}

/// Display/basis order: length, then written arrow indices ascending, then
/// endpoints.
pub fn basis_order(a: &Path, b: &Path) -> std::cmp::Ordering {
    a.len()
        .cmp(&b.len())
        .then_with(|| a.arrows.cmp(&b.arrows))
        .then_with(|| a.source.cmp(&b.source))
        .then_with(|| a.target.cmp(&b.target))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;

    fn loop_algebra(rel: &str) -> Presentation {
        parse_presentation(&format!("vertex 1\narrow x: 1 -> 1\nrelation {rel}\n")).unwrap()
    }

    #[test]
    fn monomial_system_is_its_relations() {
        let p = parse_presentation(
            "vertex 2\nvertex 4\narrow alpha: 2 -> 2\narrow delta: 2 -> 4\nrelation alpha*alpha*alpha\nrelation delta*alpha\n",
        )
        .unwrap();
        let sys = ReductionSystem::complete(&p, 10).unwrap();
        let tips: Vec<String> = sys.rules().iter().map(|r| p.quiver().path_label(&r.tip)).collect();
        assert_eq!(tips, vec!["delta*alpha", "alpha*alpha*alpha"]);
        assert!(sys.rules().iter().all(|r| r.tail.is_zero()));
        assert_eq!(sys.check_admissible(10).unwrap(), 3);
    }

    #[test]
    fn loop_square_is_admissible_at_two() {
        let sys = ReductionSystem::complete(&loop_algebra("x*x"), 6).unwrap();
        assert_eq!(sys.check_admissible(6).unwrap(), 2);
    }

    #[test]
    fn hidden_consequence_is_found() {
        // x^2 - x^3 together with x^4 forces x^2 = 0
        let p = parse_presentation(
            "vertex 1\narrow x: 1 -> 1\nrelation x*x - x*x*x\nrelation x*x*x*x\n",
        )
        .unwrap();
        let sys = ReductionSystem::complete(&p, 12).unwrap();
        assert_eq!(sys.check_admissible(12).unwrap(), 2);
        assert_eq!(sys.normal_paths(12).iter().flatten().count(), 2);
    }

    #[test]
    fn non_admissible_is_reported() {
        let p = parse_presentation("vertex 1\narrow x: 1 -> 1\narrow y: 1 -> 1\nrelation x*y\n").unwrap();
        let sys = ReductionSystem::complete(&p, 6).unwrap();
        assert!(matches!(
            sys.check_admissible(6),
            Err(PresentationError::NotAdmissibleUpToCap { cap: 6 })
        ));
    }

    #[test]
    fn overflow_is_reported() {
        let r = ReductionSystem::complete(&loop_algebra("x*x*x*x"), 3);
        assert!(matches!(r, Err(PresentationError::CompletionOverflow { cap: 3, .. })));
        // y*x - x*y*y has tips y*x, x*y^k*x ... growing without bound
        let p = parse_presentation(
            "vertex 1\narrow x: 1 -> 1\narrow y: 1 -> 1\nrelation x*y*x - y*y\n",
        )
        .unwrap();
        let r = ReductionSystem::complete(&p, 6);
        assert!(r.is_err() || r.unwrap().check_admissible(6).is_err());
    }
}
