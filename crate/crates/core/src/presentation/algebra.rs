use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::field::{ColumnSpace, ExactMatrix, FieldSpec, Scalar};

use super::{Path, Presentation, PresentationError, ReductionSystem};

/// Sparse linear combination of basis indices.
pub type Product = Vec<(usize, Scalar)>;

/// A finite-dimensional basic algebra given by a basis, structure constants
/// and a complete set of primitive orthogonal idempotents.
///
/// Every basis element `b` lies in `e_target(b) · A · e_source(b)`; the
/// non-idempotent basis elements span the radical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasedAlgebra {
    field: FieldSpec,
    labels: Vec<String>,
    vertex_labels: Vec<String>,
    idempotents: Vec<usize>,
    source: Vec<usize>,
    target: Vec<usize>,
    table: Vec<Product>,
    radical_degree: Vec<usize>,
    generators: Vec<usize>,
    loewy_length: usize,
    opposite: OppositeCache,
}

/// Lazily built opposite algebra; ignored by equality.
#[derive(Clone, Default)]
struct OppositeCache(OnceLock<Arc<BasedAlgebra>>);

impl PartialEq for OppositeCache {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for OppositeCache {}

impl fmt::Debug for OppositeCache {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("..")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraSummary {
    pub field: FieldSpec,
    pub dimension: usize,
    pub vertices: Vec<String>,
    pub loewy_length: usize,
    pub basis: Vec<String>,
}

impl BasedAlgebra {
    /// Validates grading, idempotents, associativity and nilpotency of the
    /// radical, then derives the radical filtration and a generating set.
    pub fn new(
        field: FieldSpec,
        labels: Vec<String>,
        vertex_labels: Vec<String>,
        idempotents: Vec<usize>,
        source: Vec<usize>,
        target: Vec<usize>,
        table: Vec<Product>,
    ) -> Result<Self, PresentationError> {
        let n = labels.len();
        let r = vertex_labels.len();
        let bad = |m: String| Err(PresentationError::InvalidAlgebra(m));
        if source.len() != n || target.len() != n || table.len() != n * n || idempotents.len() != r {
            return bad("inconsistent table sizes".into());
        }
        for (v, &e) in idempotents.iter().enumerate() {
            if e >= n || source[e] != v || target[e] != v {
                return bad(format!("idempotent of vertex {v} is not graded at ({v},{v})"));
            }
        }
        if source.iter().chain(&target).any(|&v| v >= r) {
            return bad("basis element graded by an unknown vertex".into());
        }
        let mut alg = BasedAlgebra {
            field,
            labels,
            vertex_labels,
            idempotents,
            source,
            target,
            table,
            radical_degree: vec![0; n],
            generators: Vec::new(),
            loewy_length: 0,
            opposite: OppositeCache::default(),
        };
        alg.check_grading()?;
        alg.check_associative()?;
        alg.derive_radical()?;
        Ok(alg)
    }

    fn check_grading(&self) -> Result<(), PresentationError> {
        let n = self.dim();
        let is_idem: Vec<bool> = (0..n).map(|b| self.idempotents.contains(&b)).collect();
        for a in 0..n {
            for b in 0..n {
                let prod = self.mul_basis(a, b);
                for (t, c) in prod {
                    self.field.check_same(&c.field())?;
                    if c.is_zero() {
                        return Err(PresentationError::InvalidAlgebra("stored zero coefficient".into()));
                    }
                    if self.source[a] != self.target[b]
                        || self.target[*t] != self.target[a]
                        || self.source[*t] != self.source[b]
                    {
                        return Err(PresentationError::InvalidAlgebra(format!(
                            "product {}·{} violates the vertex grading",
                            self.labels[a], self.labels[b]
                        )));
                    }
                    if is_idem[*t] && !(is_idem[a] && is_idem[b]) {
                        return Err(PresentationError::NotBasic(format!(
                            "{}·{} has an idempotent component",
                            self.labels[a], self.labels[b]
                        )));
                    }
                }
            }
        }
        for (v, &e) in self.idempotents.iter().enumerate() {
            for b in 0..n {
                let unit: Product = vec![(b, self.field.one())];
                let left = if self.target[b] == v { unit.clone() } else { Vec::new() };
                let right = if self.source[b] == v { unit } else { Vec::new() };
                if *self.mul_basis(e, b) != left || *self.mul_basis(b, e) != right {
                    return Err(PresentationError::InvalidAlgebra(format!(
                        "idempotent of vertex {} does not act as a projector on {}",
                        self.vertex_labels[v], self.labels[b]
                    )));
                }
            }
        }
        Ok(())
    }

    fn check_associative(&self) -> Result<(), PresentationError> {
        let n = self.dim();
        for a in 0..n {
            for b in 0..n {
                if self.source[a] != self.target[b] {
                    continue;
                }
                let ab = self.mul_basis(a, b);
                for c in 0..n {
                    if self.source[b] != self.target[c] {
                        continue;
                    }
                    let left = self.mul_sparse_basis(ab, c);
                    let bc = self.mul_basis(b, c);
                    let right = self.mul_basis_sparse(a, bc);
                    if left != right {
                        return Err(PresentationError::InvalidAlgebra(format!(
                            "({}·{})·{} differs from {}·({}·{})",
                            self.labels[a], self.labels[b], self.labels[c],
                            self.labels[a], self.labels[b], self.labels[c]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn derive_radical(&mut self) -> Result<(), PresentationError> {
        let n = self.dim();
        let rad_basis: Vec<usize> = (0..n).filter(|b| !self.idempotents.contains(b)).collect();
        let mut powers = vec![self.span_of(&rad_basis.iter().map(|&b| self.unit(b)).collect::<Vec<_>>())];
        loop {
            let last = powers.last().expect("nonempty");
            if last.dim() == 0 {
                break;
            }
            if powers.len() > n + 1 {
                return Err(PresentationError::NotBasic("radical is not nilpotent".into()));
            }
            let mut vecs = Vec::new();
            for &b in &rad_basis {
                for j in 0..last.dim() {
                    let v = last.basis().column(j);
                    let p = self.mul_vec(&self.unit(b), &v);
                    if p.iter().any(|s| !s.is_zero()) {
                        vecs.push(p);
                    }
                }
            }
            let next = self.span_of(&vecs);
            if next.dim() == last.dim() {
                return Err(PresentationError::NotBasic("radical is not nilpotent".into()));
            }
            powers.push(next);
        }
        // powers[k] = rad^(k+1); the last entry is zero
        self.loewy_length = powers.len();
        for &b in &rad_basis {
            let u = self.unit(b);
            self.radical_degree[b] = powers.iter().take_while(|p| p.contains(&u)).count();
        }
        let mut span = if powers.len() > 1 {
            powers[1].clone()
        } else {
            ColumnSpace::zero(self.field, n)
        };
        for &b in &rad_basis {
            let u = self.unit(b);
            if !span.contains(&u) {
                self.generators.push(b);
                span = span.sum(&self.span_of(&[u]))?;
            }
        }
        Ok(())
    }

    fn span_of(&self, vecs: &[Vec<Scalar>]) -> ColumnSpace {
        let n = self.dim();
        if vecs.is_empty() {
            return ColumnSpace::zero(self.field, n);
        }
        let m = ExactMatrix::from_fn(self.field, n, vecs.len(), |r, c| vecs[c][r].clone());
        ColumnSpace::span(&m)
    }

    pub(crate) fn from_normal_forms(
        p: &Presentation,
        system: &ReductionSystem,
        basis: &[Path],
    ) -> Result<Self, PresentationError> {
        let q = p.quiver();
        let n = basis.len();
        let index = |path: &Path| basis.iter().position(|b| b == path);
        let labels = basis.iter().map(|b| q.path_label(b)).collect();
        let idempotents = (0..q.num_vertices())
            .map(|v| index(&Path::trivial(v)).expect("trivial paths are normal"))
            .collect();
        let mut table = vec![Vec::new(); n * n];
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let Some(ab) = a.compose(b) else { continue };
                let nf = system.normal_form_path(&ab);
                let mut prod: Product = nf
                    .terms()
                    .map(|(path, c)| {
                        index(path)
                            .map(|k| (k, c.clone()))
                            .ok_or_else(|| PresentationError::InvalidAlgebra(format!(
                                "normal form {} outside the basis",
                                q.path_label(path)
                            )))
                    })
                    .collect::<Result<_, _>>()?;
                prod.sort_by_key(|(k, _)| *k);
                table[i * n + j] = prod;
            }
        }
        BasedAlgebra::new(
            p.field(),
            labels,
            q.vertices().to_vec(),
            idempotents,
            basis.iter().map(|b| b.source).collect(),
            basis.iter().map(|b| b.target).collect(),
            table,
        )
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// The opposite algebra, built once and shared.
    pub fn opposite(&self) -> Arc<BasedAlgebra> {
        self.opposite
            .0
            .get_or_init(|| Arc::new(super::opposite(self)))
            .clone()
    }

    /// True when both refer to the same algebra, by pointer or by value.
    pub fn same_as(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, b: usize) -> &str {
        &self.labels[b]
    }

    pub fn vertex_labels(&self) -> &[String] {
        &self.vertex_labels
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertex_labels.iter().position(|v| v == label)
    }

    pub fn idempotent(&self, v: usize) -> usize {
        self.idempotents[v]
    }

    pub fn idempotents(&self) -> &[usize] {
        &self.idempotents
    }

    pub fn is_idempotent(&self, b: usize) -> bool {
        self.idempotents.contains(&b)
    }

    pub fn source(&self, b: usize) -> usize {
        self.source[b]
    }

    pub fn target(&self, b: usize) -> usize {
        self.target[b]
    }

    pub fn radical_degree(&self, b: usize) -> usize {
        self.radical_degree[b]
    }

    /// Radical basis elements that together with the idempotents generate the
    /// algebra (a graded basis of rad/rad²).
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// Smallest `L` with `rad^L = 0`.
    pub fn loewy_length(&self) -> usize {
        self.loewy_length
    }

    pub fn mul_basis(&self, a: usize, b: usize) -> &Product {
        &self.table[a * self.dim() + b]
    }

    fn mul_sparse_basis(&self, x: &Product, c: usize) -> Product {
        let mut acc = vec![self.field.zero(); self.dim()];
        for (i, s) in x {
            for (k, t) in self.mul_basis(*i, c) {
                acc[*k] = acc[*k].add(&s.mul(t));
            }
        }
        Self::sparse(acc)
    }

    fn mul_basis_sparse(&self, a: usize, y: &Product) -> Product {
        let mut acc = vec![self.field.zero(); self.dim()];
        for (j, s) in y {
            for (k, t) in self.mul_basis(a, *j) {
                acc[*k] = acc[*k].add(&s.mul(t));
            }
        }
        Self::sparse(acc)
    }

    fn sparse(v: Vec<Scalar>) -> Product {
        v.into_iter().enumerate().filter(|(_, s)| !s.is_zero()).collect()
    }

    pub fn unit(&self, b: usize) -> Vec<Scalar> {
        let mut v = vec![self.field.zero(); self.dim()];
        v[b] = self.field.one();
        v
    }

    /// Product of two dense coordinate vectors.
    pub fn mul_vec(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim();
        let mut acc = vec![self.field.zero(); n];
        for (i, s) in x.iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            for (j, t) in y.iter().enumerate() {
                if t.is_zero() || self.source[i] != self.target[j] {
                    continue;
                }
                let st = s.mul(t);
                for (k, c) in self.mul_basis(i, j) {
                    acc[*k] = acc[*k].add(&st.mul(c));
                }
            }
        }
        acc
    }

    /// Basis elements of `e_target · A · e_source`.
    pub fn basis_between(&self, target: usize, source: usize) -> Vec<usize> {
        (0..self.dim())
            .filter(|&b| self.target[b] == target && self.source[b] == source)
            .collect()
    }

    pub fn is_local(&self) -> bool {
        self.num_vertices() == 1
    }

    pub fn is_radical_square_zero(&self) -> bool {
        self.loewy_length <= 2
    }

    pub fn summary(&self) -> AlgebraSummary {
        AlgebraSummary {
            field: self.field,
            dimension: self.dim(),
            vertices: self.vertex_labels.clone(),
            loewy_length: self.loewy_length,
            basis: self.labels.clone(),
        }
    }

    /// Dimension of `rad^k / rad^(k+1)` for each `k`.
    pub fn radical_layer_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.loewy_length.max(1)];
        for b in 0..self.dim() {
            sizes[self.radical_degree[b]] += 1;
        }
        sizes
    }
}

#[cfg(test)]
mod tests {
    use crate::presentation::parse_presentation;

    #[test]
    fn dual_numbers() {
        let p = parse_presentation("vertex 1\narrow x: 1 -> 1\nrelation x*x\n").unwrap();
        let a = p.certify(None).unwrap().algebra;
        assert_eq!(a.dim(), 2);
        assert_eq!(a.labels(), &["e1".to_string(), "x".to_string()]);
        assert_eq!(a.generators(), &[1]);
        assert_eq!(a.loewy_length(), 2);
        assert!(a.mul_basis(1, 1).is_empty());
    }

    #[test]
    fn path_algebra_of_a3() {
        let p = parse_presentation(
            "vertex 1\nvertex 2\nvertex 3\narrow a: 1 -> 2\narrow b: 2 -> 3\n",
        )
        .unwrap();
        let c = p.certify(None).unwrap();
        assert_eq!(c.nilpotency, 3);
        assert_eq!(c.algebra.dim(), 6);
        assert_eq!(c.algebra.radical_layer_sizes(), vec![3, 2, 1]);
    }
}
