//! Algebras built from other algebras: corners, opposites, triangular matrix
//! algebras, quotients by an arrow, and the way back from structure constants
//! to a quiver with relations.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::field::{ColumnSpace, ExactMatrix, FieldSpec, Scalar};

use super::{BasedAlgebra, Certified, Path, PathPoly, Presentation, PresentationError, Product, Quiver};

/// A set of vertices; the idempotent is the sum of the matching primitive
/// idempotents.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IdempotentSpec {
    vertices: Vec<usize>,
}

impl IdempotentSpec {
    pub fn new(
        vertices: impl IntoIterator<Item = usize>,
        num_vertices: usize,
        allow_full: bool,
    ) -> Result<Self, PresentationError> {
        let set: BTreeSet<usize> = vertices.into_iter().collect();
        if set.is_empty() {
            return Err(PresentationError::BadIdempotent("empty vertex set".into()));
        }
        if let Some(v) = set.iter().find(|&&v| v >= num_vertices) {
            return Err(PresentationError::BadIdempotent(format!("no vertex with index {v}")));
        }
        if !allow_full && set.len() == num_vertices {
            return Err(PresentationError::BadIdempotent("the full identity is not a proper idempotent".into()));
        }
        Ok(IdempotentSpec {
            vertices: set.into_iter().collect(),
        })
    }

    pub fn from_labels(
        algebra: &BasedAlgebra,
        labels: &[&str],
        allow_full: bool,
    ) -> Result<Self, PresentationError> {
        let idx = labels
            .iter()
            .map(|l| {
                algebra
                    .vertex_index(l.trim())
                    .ok_or_else(|| PresentationError::UnknownVertex(l.trim().to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(idx, algebra.num_vertices(), allow_full)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }
}

/// `eAe` with the embedding of its basis and vertices into `A`.
#[derive(Clone, Debug)]
pub struct Corner {
    pub algebra: Arc<BasedAlgebra>,
    pub basis_map: Vec<usize>,
    pub vertex_map: Vec<usize>,
}

pub fn corner_algebra(a: &BasedAlgebra, e: &IdempotentSpec) -> Result<Corner, PresentationError> {
    if e.vertices().iter().any(|&v| v >= a.num_vertices()) {
        return Err(PresentationError::BadIdempotent("vertex out of range".into()));
    }
    let basis_map: Vec<usize> = (0..a.dim())
        .filter(|&b| e.contains(a.source(b)) && e.contains(a.target(b)))
        .collect();
    let vertex_map = e.vertices().to_vec();
    let back_vertex = |v: usize| vertex_map.iter().position(|&w| w == v).expect("vertex in e");
    let back_basis = |b: usize| basis_map.iter().position(|&c| c == b);
    let n = basis_map.len();
    let mut table = vec![Vec::new(); n * n];
    for (i, &bi) in basis_map.iter().enumerate() {
        for (j, &bj) in basis_map.iter().enumerate() {
            table[i * n + j] = a
                .mul_basis(bi, bj)
                .iter()
                .map(|(k, c)| (back_basis(*k).expect("eAe is closed"), c.clone()))
                .collect();
        }
    }
    let algebra = BasedAlgebra::new(
        a.field(),
        basis_map.iter().map(|&b| a.label(b).to_string()).collect(),
        vertex_map.iter().map(|&v| a.vertex_labels()[v].clone()).collect(),
        vertex_map.iter().map(|&v| back_basis(a.idempotent(v)).expect("idempotent in eAe")).collect(),
        basis_map.iter().map(|&b| back_vertex(a.source(b))).collect(),
        basis_map.iter().map(|&b| back_vertex(a.target(b))).collect(),
        table,
    )?;
    Ok(Corner {
        algebra: Arc::new(algebra),
        basis_map,
        vertex_map,
    })
}

/// Same basis, transposed structure constants, sources and targets swapped.
pub fn opposite(a: &BasedAlgebra) -> BasedAlgebra {
    let n = a.dim();
    let mut table = vec![Vec::new(); n * n];
    for i in 0..n {
        for j in 0..n {
            table[i * n + j] = a.mul_basis(j, i).clone();
        }
    }
    BasedAlgebra::new(
        a.field(),
        a.labels().to_vec(),
        a.vertex_labels().to_vec(),
        a.idempotents().to_vec(),
        (0..n).map(|b| a.target(b)).collect(),
        (0..n).map(|b| a.source(b)).collect(),
        table,
    )
    .expect("the opposite of a valid algebra is valid")
}

/// An `A`-`B`-bimodule given by the action matrices of every basis element:
/// `left[a]` is `m ↦ a·m` and `right[b]` is `m ↦ m·b`, acting on column
/// vectors of length `dim`.
#[derive(Clone, Debug)]
pub struct Bimodule {
    pub dim: usize,
    pub left: Vec<ExactMatrix>,
    pub right: Vec<ExactMatrix>,
}

impl Bimodule {
    pub fn zero(a: &BasedAlgebra, b: &BasedAlgebra) -> Self {
        Bimodule {
            dim: 0,
            left: vec![ExactMatrix::zeros(a.field(), 0, 0); a.dim()],
            right: vec![ExactMatrix::zeros(b.field(), 0, 0); b.dim()],
        }
    }
}

fn unit_column(m: &ExactMatrix, k: usize) -> bool {
    (0..m.rows()).all(|r| if r == k { m.get(r, k).is_one() } else { m.get(r, k).is_zero() })
}

/// `[[A, M], [0, B]]` with `(a,m,b)(a',m',b') = (aa', am' + mb', bb')`.
///
/// Basis: that of `A`, then the basis of `M` (labelled `m0, m1, ...`), then
/// that of `B`. Vertex labels are kept unless `A` and `B` share one, in which
/// case they are prefixed by `a` and `b`.
pub fn triangular_algebra(
    a: &BasedAlgebra,
    b: &BasedAlgebra,
    m: &Bimodule,
) -> Result<BasedAlgebra, PresentationError> {
    let field = a.field();
    field.check_same(&b.field())?;
    let incompatible = |s: String| PresentationError::IncompatibleActions(s);
    if m.left.len() != a.dim() || m.right.len() != b.dim() {
        return Err(incompatible("one action matrix per basis element is required".into()));
    }
    for x in m.left.iter().chain(&m.right) {
        field.check_same(&x.field())?;
        if x.rows() != m.dim || x.cols() != m.dim {
            return Err(incompatible(format!("action matrix is not {0}x{0}", m.dim)));
        }
    }
    let (na, nm, nb) = (a.dim(), m.dim, b.dim());
    let homogeneous_vertex = |mats: &[ExactMatrix], idems: &[usize], k: usize, side: &str| {
        let hits: Vec<usize> = (0..idems.len()).filter(|&v| unit_column(&mats[idems[v]], k)).collect();
        match hits[..] {
            [v] => Ok(v),
            _ => Err(incompatible(format!("basis vector m{k} is not homogeneous for the {side} action"))),
        }
    };
    let mut m_target = Vec::with_capacity(nm);
    let mut m_source = Vec::with_capacity(nm);
    for k in 0..nm {
        m_target.push(homogeneous_vertex(&m.left, a.idempotents(), k, "left")?);
        m_source.push(a.num_vertices() + homogeneous_vertex(&m.right, b.idempotents(), k, "right")?);
    }

    let n = na + nm + nb;
    let mut table: Vec<Product> = vec![Vec::new(); n * n];
    let column = |x: &ExactMatrix, k: usize, off: usize| -> Product {
        (0..x.rows())
            .filter(|&r| !x.get(r, k).is_zero())
            .map(|r| (off + r, x.get(r, k).clone()))
            .collect()
    };
    for i in 0..na {
        for j in 0..na {
            table[i * n + j] = a.mul_basis(i, j).clone();
        }
        for k in 0..nm {
            table[i * n + na + k] = column(&m.left[i], k, na);
        }
    }
    for k in 0..nm {
        for j in 0..nb {
            table[(na + k) * n + na + nm + j] = column(&m.right[j], k, na);
        }
    }
    for i in 0..nb {
        for j in 0..nb {
            table[(na + nm + i) * n + na + nm + j] = b
                .mul_basis(i, j)
                .iter()
                .map(|(k, c)| (na + nm + k, c.clone()))
                .collect();
        }
    }

    let clash = a.vertex_labels().iter().any(|v| b.vertex_labels().contains(v));
    let vlabel = |prefix: &str, v: &String| if clash { format!("{prefix}{v}") } else { v.clone() };
    let vertex_labels = a
        .vertex_labels()
        .iter()
        .map(|v| vlabel("a", v))
        .chain(b.vertex_labels().iter().map(|v| vlabel("b", v)))
        .collect();
    let labels = a
        .labels()
        .iter()
        .cloned()
        .chain((0..nm).map(|k| format!("m{k}")))
        .chain(b.labels().iter().cloned())
        .collect();
    let idempotents = a
        .idempotents()
        .iter()
        .copied()
        .chain(b.idempotents().iter().map(|&e| na + nm + e))
        .collect();
    let rv = a.num_vertices();
    let source = (0..na)
        .map(|x| a.source(x))
        .chain(m_source)
        .chain((0..nb).map(|x| rv + b.source(x)))
        .collect();
    let target = (0..na)
        .map(|x| a.target(x))
        .chain(m_target)
        .chain((0..nb).map(|x| rv + b.target(x)))
        .collect();
    BasedAlgebra::new(field, labels, vertex_labels, idempotents, source, target, table).map_err(|e| match e {
        PresentationError::InvalidAlgebra(s) => PresentationError::IncompatibleActions(s),
        other => other,
    })
}

/// Deletes arrow `a` and every relation term that passes through it.
pub fn quotient_by_arrow(p: &Presentation, a: usize) -> Result<Presentation, PresentationError> {
    let q = p.quiver();
    if a >= q.num_arrows() {
        return Err(PresentationError::UnknownArrow(format!("#{a}")));
    }
    let mut quiver = Quiver::new();
    for v in q.vertices() {
        quiver.add_vertex(v)?;
    }
    for (i, arrow) in q.arrows().iter().enumerate() {
        if i != a {
            quiver.add_arrow(&arrow.label, arrow.source, arrow.target)?;
        }
    }
    let shift = |x: usize| if x > a { x - 1 } else { x };
    let relations = p
        .relations()
        .iter()
        .map(|r| {
            r.retain_paths(|path| !path.contains_arrow(a)).map_paths(|path| Path {
                source: path.source,
                target: path.target,
                arrows: path.arrows.iter().map(|&x| shift(x)).collect(),
            })
        })
        .collect();
    Presentation::new(quiver, p.field(), relations)
}

/// Paths of length `1..=max_len` in a quiver together with their images in an
/// algebra, where arrow `i` maps to `arrow_images[i]`.
struct Truncation {
    field: FieldSpec,
    paths: Vec<Path>,
    images: Vec<Vec<Scalar>>,
}

impl Truncation {
    fn build(q: &Quiver, alg: &BasedAlgebra, arrow_images: &[Vec<Scalar>], max_len: usize) -> Self {
        let mut paths = Vec::new();
        let mut images = Vec::new();
        let mut layer: Vec<(Path, Vec<Scalar>)> = (0..q.num_arrows())
            .map(|i| (q.path(&[i]).expect("single arrow"), arrow_images[i].clone()))
            .collect();
        for _ in 0..max_len {
            let mut next = Vec::new();
            for (p, img) in &layer {
                for (x, arrow) in q.arrows().iter().enumerate() {
                    if arrow.source == p.target {
                        let longer = q.path(&[x]).expect("arrow").compose(p).expect("composable");
                        next.push((longer, alg.mul_vec(&arrow_images[x], img)));
                    }
                }
            }
            for (p, img) in layer {
                paths.push(p);
                images.push(img);
            }
            layer = next;
        }
        let mut order: Vec<usize> = (0..paths.len()).collect();
        order.sort_by(|&i, &j| paths[i].cmp(&paths[j]));
        Truncation {
            field: alg.field(),
            paths: order.iter().map(|&i| paths[i].clone()).collect(),
            images: order.iter().map(|&i| images[i].clone()).collect(),
        }
    }

    fn index_of(&self, p: &Path) -> Option<usize> {
        self.paths.binary_search(p).ok()
    }

    fn vector(&self, poly: &PathPoly) -> Vec<Scalar> {
        let mut v = vec![self.field.zero(); self.paths.len()];
        for (p, c) in poly.terms() {
            if let Some(i) = self.index_of(p) {
                v[i] = c.clone();
            }
        }
        v
    }

    fn poly(&self, v: &[Scalar]) -> PathPoly {
        let mut out = PathPoly::zero(self.field);
        for (p, c) in self.paths.iter().zip(v) {
            if !c.is_zero() {
                out.add_term(p.clone(), c);
            }
        }
        out
    }

    /// Kernel of the map to the algebra, restricted to paths of length at
    /// least two, as a matrix whose columns have pairwise distinct tips.
    fn kernel(&self) -> ExactMatrix {
        let cols: Vec<usize> = (0..self.paths.len()).filter(|&i| self.paths[i].len() >= 2).collect();
        let rows = self.images.first().map_or(0, Vec::len);
        let m = ExactMatrix::from_fn(self.field, rows, cols.len(), |r, c| self.images[cols[c]][r].clone());
        let k = m.kernel_basis();
        let mut out = ExactMatrix::zeros(self.field, self.paths.len(), k.cols());
        for (c, &i) in cols.iter().enumerate() {
            for j in 0..k.cols() {
                out.set(i, j, k.get(c, j).clone());
            }
        }
        out
    }

    /// `J·I + I·J` for the ideal spanned by the columns of `kernel`, with
    /// terms beyond the truncation dropped.
    fn products_with_arrows(&self, q: &Quiver, kernel: &ExactMatrix) -> ColumnSpace {
        let mut vecs = Vec::new();
        for j in 0..kernel.cols() {
            let k = self.poly(&kernel.column(j));
            for x in 0..q.num_arrows() {
                let arrow = q.path(&[x]).expect("arrow");
                let (s, t) = k.endpoints().expect("nonzero kernel vector");
                for prod in [
                    k.sandwich(&arrow, &Path::trivial(s)),
                    k.sandwich(&Path::trivial(t), &arrow),
                ] {
                    if !prod.is_zero() {
                        vecs.push(self.vector(&prod));
                    }
                }
            }
        }
        span_columns(self.field, self.paths.len(), &vecs)
    }
}

fn span_columns(field: FieldSpec, ambient: usize, vecs: &[Vec<Scalar>]) -> ColumnSpace {
    if vecs.is_empty() {
        return ColumnSpace::zero(field, ambient);
    }
    ColumnSpace::span(&ExactMatrix::from_fn(field, ambient, vecs.len(), |r, c| vecs[c][r].clone()))
}

/// `I/(JI+IJ)` computed in the truncation `kQ/J^{N+1}`.
#[derive(Clone, Debug)]
pub struct RelationSpace {
    /// Coset representatives, one per basis vector, taken from the given
    /// relations whenever possible.
    pub representatives: Vec<PathPoly>,
    paths: Vec<Path>,
    kernel: ExactMatrix,
    jiij: ColumnSpace,
    field: FieldSpec,
}

impl RelationSpace {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }
}

fn arrow_images(c: &Certified) -> Vec<Vec<Scalar>> {
    let q = c.presentation.quiver();
    (0..q.num_arrows())
        .map(|i| {
            let p = q.path(&[i]).expect("arrow");
            let b = c.basis.iter().position(|x| *x == p).expect("arrows are normal forms");
            c.algebra.unit(b)
        })
        .collect()
}

pub fn minimal_relation_space(c: &Certified) -> RelationSpace {
    let q = c.presentation.quiver();
    let t = Truncation::build(q, &c.algebra, &arrow_images(c), c.nilpotency);
    let kernel = t.kernel();
    let jiij = t.products_with_arrows(q, &kernel);
    let target = kernel.cols() - jiij.dim();
    let mut span = jiij.clone();
    let mut representatives = Vec::new();
    let candidates = c
        .presentation
        .relations()
        .iter()
        .map(|r| t.vector(r))
        .chain((0..kernel.cols()).map(|j| kernel.column(j)));
    for v in candidates {
        if representatives.len() == target {
            break;
        }
        if !span.contains(&v) {
            representatives.push(t.poly(&v));
            span = span
                .sum(&span_columns(t.field, t.paths.len(), &[v]))
                .expect("same field");
        }
    }
    RelationSpace {
        representatives,
        paths: t.paths,
        kernel,
        jiij,
        field: t.field,
    }
}

/// True iff every minimal generating set of `I` mentions arrow `a`, i.e. the
/// elements of `I` supported away from `a` do not span `I/(JI+IJ)`.
pub fn arrow_occurs_in_every_min_genset(
    space: &RelationSpace,
    a: usize,
    num_arrows: usize,
) -> Result<bool, PresentationError> {
    if a >= num_arrows {
        return Err(PresentationError::UnknownArrow(format!("#{a}")));
    }
    if space.kernel.cols() == 0 {
        return Ok(false);
    }
    let rows: Vec<usize> = (0..space.paths.len()).filter(|&i| space.paths[i].contains_arrow(a)).collect();
    let restricted = space.kernel.select_rows(&rows);
    let combos = restricted.kernel_basis();
    let avoiding = space.kernel.mul(&combos).expect("shapes agree");
    let vecs: Vec<Vec<Scalar>> = (0..avoiding.cols()).map(|j| avoiding.column(j)).collect();
    let avoid = span_columns(space.field, space.paths.len(), &vecs);
    let total = avoid.sum(&space.jiij).expect("same field");
    Ok(total.dim() < space.kernel.cols())
}

fn sanitize(label: &str) -> String {
    let mut s: String = label
        .chars()
        .map(|c| if c.is_alphanumeric() || c == '_' || c == '\'' { c } else { '_' })
        .collect();
    if s.is_empty() || s.starts_with(|c: char| c.is_ascii_digit() || c == '\'') {
        s.insert(0, 'a');
    }
    s
}

/// Gabriel quiver and a minimal set of relations for a basic algebra.
///
/// Arrows are the algebra's generators (a basis of rad/rad²) named after
/// their basis labels. Relations are kernel vectors of the map from the
/// truncated path algebra, chosen by increasing tip modulo `JI+IJ`.
pub fn recover_presentation(a: &BasedAlgebra) -> Result<Presentation, PresentationError> {
    let mut quiver = Quiver::new();
    for v in a.vertex_labels() {
        quiver.add_vertex(v)?;
    }
    let mut used = BTreeSet::new();
    for &g in a.generators() {
        let base = sanitize(a.label(g));
        let mut label = base.clone();
        let mut k = 2;
        while !used.insert(label.clone()) {
            label = format!("{base}_{k}");
            k += 1;
        }
        quiver.add_arrow(&label, a.source(g), a.target(g))?;
    }
    let images: Vec<Vec<Scalar>> = a.generators().iter().map(|&g| a.unit(g)).collect();
    let t = Truncation::build(&quiver, a, &images, a.loewy_length());
    let kernel = t.kernel();
    let jiij = t.products_with_arrows(&quiver, &kernel);
    let mut tipped: Vec<(Path, Vec<Scalar>)> = (0..kernel.cols())
        .map(|j| {
            let v = kernel.column(j);
            let tip = t.poly(&v).tip().expect("nonzero").0.clone();
            (tip, v)
        })
        .collect();
    tipped.sort_by(|x, y| x.0.cmp(&y.0));
    let mut span = jiij;
    let mut relations = Vec::new();
    for (_, v) in tipped {
        if !span.contains(&v) {
            relations.push(t.poly(&v).monic());
            span = span.sum(&span_columns(t.field, t.paths.len(), &[v])).expect("same field");
        }
    }
    Presentation::new(quiver, a.field(), relations)
}
