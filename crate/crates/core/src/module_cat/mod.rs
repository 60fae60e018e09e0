//! Finite-dimensional left modules over a [`BasedAlgebra`].
//!
//! A module is stored in a vertex-adapted basis: `M = ⊕ e_v M`, and the
//! action of a basis element `b ∈ e_t A e_s` is a `dim e_t M × dim e_s M`
//! block. The full action matrix of `b` is that block placed at the
//! `(t, s)` position, see [`Module::action_matrix`].

mod duality;
mod io;
mod iso;
mod morphism;
mod random;

use std::sync::Arc;

use thiserror::Error;

use crate::field::{ColumnSpace, ExactMatrix, FieldError, FieldSpec, Scalar};
use crate::presentation::{BasedAlgebra, Certified, Corner, PresentationError, Product};

pub use duality::{dual, evaluation_map, star_dual, StarDual};
pub use io::parse_representation;
pub use iso::{is_isomorphic, IsoConfig, IsoResult};
pub use morphism::{
    cokernel, hom_basis, hom_space, image, kernel, projective_cover, quotient, submodule, syzygy,
    Cover, HomSpace, Morphism, ShortExactSequence,
};
pub use random::{random_module, random_short_exact_sequence};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModuleError {
    #[error("modules live over different algebras")]
    AlgebraMismatch,
    #[error("bad shape: {0}")]
    BadShape(String),
    #[error("action is not compatible with the algebra: {0}")]
    ActionInconsistent(String),
    #[error("map does not commute with the action: {0}")]
    NotAMorphism(String),
    #[error("no vertex with index {0}")]
    BadIndex(usize),
    #[error("sequence is not exact: {0}")]
    NotExact(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Module {
    algebra: Arc<BasedAlgebra>,
    dims: Vec<usize>,
    blocks: Vec<ExactMatrix>,
}

impl Module {
    /// Builds a module from its vertex dimensions and one block per basis
    /// element, verifying that the action respects the structure constants.
    pub fn new(
        algebra: Arc<BasedAlgebra>,
        dims: Vec<usize>,
        blocks: Vec<ExactMatrix>,
    ) -> Result<Self, ModuleError> {
        let a = &algebra;
        if dims.len() != a.num_vertices() || blocks.len() != a.dim() {
            return Err(ModuleError::BadShape(format!(
                "expected {} vertex dimensions and {} blocks",
                a.num_vertices(),
                a.dim()
            )));
        }
        for (b, m) in blocks.iter().enumerate() {
            a.field().check_same(&m.field())?;
            if m.rows() != dims[a.target(b)] || m.cols() != dims[a.source(b)] {
                return Err(ModuleError::BadShape(format!(
                    "block of {} is {}x{}, expected {}x{}",
                    a.label(b),
                    m.rows(),
                    m.cols(),
                    dims[a.target(b)],
                    dims[a.source(b)]
                )));
            }
        }
        for v in 0..a.num_vertices() {
            if blocks[a.idempotent(v)] != ExactMatrix::identity(a.field(), dims[v]) {
                return Err(ModuleError::ActionInconsistent(format!(
                    "idempotent of vertex {} does not act as the identity",
                    a.vertex_labels()[v]
                )));
            }
        }
        let module = Module {
            algebra,
            dims,
            blocks,
        };
        module.check_action()?;
        Ok(module)
    }

    /// `g·b` acts as `ρ(g)ρ(b)` for every generator `g` and basis element
    /// `b`; since generators and idempotents generate the algebra this
    /// forces `ρ` to be multiplicative.
    fn check_action(&self) -> Result<(), ModuleError> {
        let a = &self.algebra;
        for &g in a.generators() {
            for b in 0..a.dim() {
                if a.source(g) != a.target(b) {
                    continue;
                }
                let lhs = self.blocks[g].mul(&self.blocks[b])?;
                let rhs = self.combination_block(a.mul_basis(g, b), a.target(g), a.source(b));
                if lhs != rhs {
                    return Err(ModuleError::ActionInconsistent(format!(
                        "{}·{} is not respected",
                        a.label(g),
                        a.label(b)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Block of a linear combination of basis elements graded at `(t, s)`.
    pub fn combination_block(&self, x: &Product, t: usize, s: usize) -> ExactMatrix {
        let mut out = ExactMatrix::zeros(self.field(), self.dims[t], self.dims[s]);
        for (k, c) in x {
            let block = &self.blocks[*k];
            for r in 0..block.rows() {
                for col in 0..block.cols() {
                    let v = block.get(r, col);
                    if !v.is_zero() {
                        out.add_at(r, col, &v.mul(c));
                    }
                }
            }
        }
        out
    }

    pub fn zero(algebra: Arc<BasedAlgebra>) -> Self {
        let dims = vec![0; algebra.num_vertices()];
        Self::from_dims_zero_radical(algebra, dims)
    }

    fn from_dims_zero_radical(algebra: Arc<BasedAlgebra>, dims: Vec<usize>) -> Self {
        let f = algebra.field();
        let blocks = (0..algebra.dim())
            .map(|b| {
                let (t, s) = (algebra.target(b), algebra.source(b));
                if algebra.is_idempotent(b) {
                    ExactMatrix::identity(f, dims[t])
                } else {
                    ExactMatrix::zeros(f, dims[t], dims[s])
                }
            })
            .collect();
        Module::new(algebra, dims, blocks).expect("semisimple modules are valid")
    }

    /// The simple module at vertex `i`.
    pub fn simple(algebra: Arc<BasedAlgebra>, i: usize) -> Result<Self, ModuleError> {
        if i >= algebra.num_vertices() {
            return Err(ModuleError::BadIndex(i));
        }
        let mut dims = vec![0; algebra.num_vertices()];
        dims[i] = 1;
        Ok(Self::from_dims_zero_radical(algebra, dims))
    }

    /// Direct sum of simples with the given multiplicities.
    pub fn semisimple(algebra: Arc<BasedAlgebra>, mult: Vec<usize>) -> Result<Self, ModuleError> {
        if mult.len() != algebra.num_vertices() {
            return Err(ModuleError::BadShape("one multiplicity per vertex".into()));
        }
        Ok(Self::from_dims_zero_radical(algebra, mult))
    }

    /// `A e_i` under left multiplication; the component at vertex `v` has
    /// basis `e_v A e_i` in algebra basis order.
    pub fn projective(algebra: Arc<BasedAlgebra>, i: usize) -> Result<Self, ModuleError> {
        if i >= algebra.num_vertices() {
            return Err(ModuleError::BadIndex(i));
        }
        let a = &algebra;
        let comps: Vec<Vec<usize>> = (0..a.num_vertices()).map(|v| a.basis_between(v, i)).collect();
        let dims = comps.iter().map(Vec::len).collect();
        let blocks = (0..a.dim())
            .map(|b| {
                let (t, s) = (a.target(b), a.source(b));
                let mut m = ExactMatrix::zeros(a.field(), comps[t].len(), comps[s].len());
                for (col, &x) in comps[s].iter().enumerate() {
                    for (k, c) in a.mul_basis(b, x) {
                        let row = comps[t].iter().position(|y| y == k).expect("graded");
                        m.set(row, col, c.clone());
                    }
                }
                m
            })
            .collect();
        Module::new(algebra.clone(), dims, blocks)
    }

    /// `D(e_i A)`, the injective envelope of the simple at `i`.
    pub fn injective(algebra: Arc<BasedAlgebra>, i: usize) -> Result<Self, ModuleError> {
        let p = Self::projective(algebra.opposite(), i)?;
        dual(&p).rehome(algebra)
    }

    /// `A` as a left module over itself, `⊕_j A e_j`.
    pub fn regular(algebra: Arc<BasedAlgebra>) -> Result<Self, ModuleError> {
        let parts = (0..algebra.num_vertices())
            .map(|j| Self::projective(algebra.clone(), j))
            .collect::<Result<Vec<_>, _>>()?;
        Self::direct_sum(algebra, &parts)
    }

    /// `D(A)`, the direct sum of the indecomposable injectives.
    pub fn regular_dual(algebra: Arc<BasedAlgebra>) -> Result<Self, ModuleError> {
        dual(&Self::regular(algebra.opposite())?).rehome(algebra)
    }

    /// A representation of a presented algebra: vertex dimensions and one
    /// matrix per arrow (`dim target × dim source`). Fails unless every
    /// relation acts as zero.
    pub fn from_representation(
        certified: &Certified,
        dims: Vec<usize>,
        arrows: &[ExactMatrix],
    ) -> Result<Self, ModuleError> {
        let q = certified.presentation.quiver();
        let f = certified.algebra.field();
        if dims.len() != q.num_vertices() || arrows.len() != q.num_arrows() {
            return Err(ModuleError::BadShape("one dimension per vertex and one matrix per arrow".into()));
        }
        for (i, m) in arrows.iter().enumerate() {
            let arrow = q.arrow(i);
            if m.rows() != dims[arrow.target] || m.cols() != dims[arrow.source] {
                return Err(ModuleError::BadShape(format!("matrix of arrow {}", arrow.label)));
            }
        }
        let blocks = certified
            .basis
            .iter()
            .map(|p| {
                let mut m = ExactMatrix::identity(f, dims[p.source]);
                for &x in p.arrows.iter().rev() {
                    m = arrows[x].mul(&m)?;
                }
                Ok(m)
            })
            .collect::<Result<Vec<_>, FieldError>>()?;
        Module::new(certified.algebra.clone(), dims, blocks)
    }

    /// Block-diagonal sum; at each vertex the summands are stacked in order.
    pub fn direct_sum(algebra: Arc<BasedAlgebra>, parts: &[Module]) -> Result<Self, ModuleError> {
        for p in parts {
            if !p.algebra.same_as(&algebra) {
                return Err(ModuleError::AlgebraMismatch);
            }
        }
        let a = &algebra;
        let dims: Vec<usize> = (0..a.num_vertices())
            .map(|v| parts.iter().map(|p| p.dims[v]).sum())
            .collect();
        let blocks = (0..a.dim())
            .map(|b| {
                let (t, s) = (a.target(b), a.source(b));
                let mut m = ExactMatrix::zeros(a.field(), dims[t], dims[s]);
                let (mut r0, mut c0) = (0, 0);
                for p in parts {
                    m.set_block(r0, c0, &p.blocks[b]);
                    r0 += p.dims[t];
                    c0 += p.dims[s];
                }
                m
            })
            .collect();
        Module::new(algebra.clone(), dims, blocks)
    }

    /// The same module over a value-equal algebra handle.
    pub fn rehome(self, algebra: Arc<BasedAlgebra>) -> Result<Self, ModuleError> {
        if !self.algebra.same_as(&algebra) {
            return Err(ModuleError::AlgebraMismatch);
        }
        Ok(Module { algebra, ..self })
    }

    pub fn algebra(&self) -> &Arc<BasedAlgebra> {
        &self.algebra
    }

    pub fn field(&self) -> FieldSpec {
        self.algebra.field()
    }

    /// Dimension vector `(dim e_v M)_v`.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn block(&self, b: usize) -> &ExactMatrix {
        &self.blocks[b]
    }

    pub fn blocks(&self) -> &[ExactMatrix] {
        &self.blocks
    }

    /// Position of the vertex-`v` component in the total basis.
    pub fn offset(&self, v: usize) -> usize {
        self.dims[..v].iter().sum()
    }

    /// Action of basis element `b` on the whole module.
    pub fn action_matrix(&self, b: usize) -> ExactMatrix {
        let n = self.dim();
        let mut m = ExactMatrix::zeros(self.field(), n, n);
        let (t, s) = (self.algebra.target(b), self.algebra.source(b));
        m.set_block(self.offset(t), self.offset(s), &self.blocks[b]);
        m
    }

    fn span_at(&self, v: usize, cols: Vec<Vec<Scalar>>) -> ColumnSpace {
        if cols.is_empty() {
            return ColumnSpace::zero(self.field(), self.dims[v]);
        }
        ColumnSpace::span(&ExactMatrix::from_fn(self.field(), self.dims[v], cols.len(), |r, c| {
            cols[c][r].clone()
        }))
    }

    /// `(rad·S)_v` for a family of subspaces `S_v`.
    pub fn radical_of(&self, spaces: &[ColumnSpace]) -> Vec<ColumnSpace> {
        let a = &self.algebra;
        (0..a.num_vertices())
            .map(|v| {
                let mut cols = Vec::new();
                for &g in a.generators() {
                    if a.target(g) != v {
                        continue;
                    }
                    let s = &spaces[a.source(g)];
                    if s.dim() == 0 {
                        continue;
                    }
                    let img = self.blocks[g].mul(s.basis()).expect("shapes agree");
                    cols.extend((0..img.cols()).map(|c| img.column(c)));
                }
                self.span_at(v, cols)
            })
            .collect()
    }

    pub fn full_spaces(&self) -> Vec<ColumnSpace> {
        (0..self.dims.len())
            .map(|v| ColumnSpace::span(&ExactMatrix::identity(self.field(), self.dims[v])))
            .collect()
    }

    /// `rad M` vertex by vertex.
    pub fn radical(&self) -> Vec<ColumnSpace> {
        self.radical_of(&self.full_spaces())
    }

    /// Multiplicities of the simples in `M / rad M`.
    pub fn top_dims(&self) -> Vec<usize> {
        self.radical()
            .iter()
            .zip(&self.dims)
            .map(|(r, d)| d - r.dim())
            .collect()
    }

    /// Dimension vectors of `rad^k M` for `k = 0, 1, ...` until zero.
    pub fn radical_series_dims(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = self.full_spaces();
        while cur.iter().any(|s| s.dim() > 0) {
            out.push(cur.iter().map(ColumnSpace::dim).collect());
            cur = self.radical_of(&cur);
        }
        out
    }

    /// Dimension vector of the socle `{m : rad·m = 0}`.
    pub fn socle_dims(&self) -> Vec<usize> {
        let a = &self.algebra;
        (0..a.num_vertices())
            .map(|v| {
                let gens: Vec<usize> = a.generators().iter().copied().filter(|&g| a.source(g) == v).collect();
                let rows: usize = gens.iter().map(|&g| self.dims[a.target(g)]).sum();
                let mut m = ExactMatrix::zeros(self.field(), rows, self.dims[v]);
                let mut r0 = 0;
                for g in gens {
                    m.set_block(r0, 0, &self.blocks[g]);
                    r0 += self.blocks[g].rows();
                }
                self.dims[v] - m.rank()
            })
            .collect()
    }

    /// `eM` as a module over the corner `eAe`.
    pub fn corner_module(&self, corner: &Corner) -> Result<Module, ModuleError> {
        let dims = corner.vertex_map.iter().map(|&v| self.dims[v]).collect();
        let blocks = corner.basis_map.iter().map(|&b| self.blocks[b].clone()).collect();
        Module::new(corner.algebra.clone(), dims, blocks)
    }

    /// Pulls a module back along a surjection `A ↠ B`; `images[a]` is the
    /// image of basis element `a` of `A` in the basis of `B`, and vertices
    /// correspond one to one.
    pub fn restrict_along(
        &self,
        algebra: Arc<BasedAlgebra>,
        images: &[Product],
    ) -> Result<Module, ModuleError> {
        if algebra.num_vertices() != self.algebra.num_vertices() || images.len() != algebra.dim() {
            return Err(ModuleError::BadShape("surjection data does not match".into()));
        }
        let blocks = (0..algebra.dim())
            .map(|x| self.combination_block(&images[x], algebra.target(x), algebra.source(x)))
            .collect();
        Module::new(algebra, self.dims.clone(), blocks)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;

    pub(crate) fn algebra(text: &str) -> Arc<BasedAlgebra> {
        parse_presentation(text).unwrap().certify(None).unwrap().algebra
    }

    pub(crate) const DUAL_NUMBERS: &str = "vertex 1\narrow x: 1 -> 1\nrelation x*x\n";

    #[test]
    fn projective_and_simple_over_dual_numbers() {
        let a = algebra(DUAL_NUMBERS);
        assert_eq!(Module::projective(a.clone(), 0).unwrap().dim(), 2);
        assert_eq!(Module::simple(a.clone(), 0).unwrap().dim(), 1);
        assert!(Module::simple(a.clone(), 1).is_err());
        let inj = Module::injective(a.clone(), 0).unwrap();
        assert_eq!(inj.dims(), &[2]);
        assert_eq!(inj.socle_dims(), vec![1]);
    }

    #[test]
    fn representation_must_satisfy_relations() {
        let p = parse_presentation(DUAL_NUMBERS).unwrap().certify(None).unwrap();
        let f = p.algebra.field();
        let nil = ExactMatrix::from_i64_rows(f, &[&[0, 1], &[0, 0]]);
        let m = Module::from_representation(&p, vec![2], &[nil]).unwrap();
        assert_eq!(m.top_dims(), vec![1]);
        assert_eq!(m.radical_series_dims(), vec![vec![2], vec![1]]);
        let bad = ExactMatrix::from_i64_rows(f, &[&[1, 0], &[0, 0]]);
        assert!(matches!(
            Module::from_representation(&p, vec![2], &[bad]),
            Err(ModuleError::ActionInconsistent(_))
        ));
    }
}
